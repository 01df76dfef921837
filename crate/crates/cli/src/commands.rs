use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fellb_core::bundle::{is_saturated, saturation_defects, takai_check, verify_bundle_axioms, FellBundle};
use fellb_core::families::{self, FAMILY_NAMES};
use fellb_core::fourier::{
    anorm_bounds, approx_identity_defect, eymard_element, folner_approx_identity, leptin_converse_probe,
    vanishing_check, Coefficient,
};
use fellb_core::functional::{gns as gns_construct, Functional, Positivity, UnitalDynamicalDelta};
use fellb_core::json::{self as fjson, BundleSource, SectionDescriptor};
use fellb_core::linalg::{max_abs_diff, ComplexMatrix};
use fellb_core::regular::universal_norm;
use fellb_core::section::Section;
use fellb_core::suite::{run_suite, SuiteConfig, DESK_CAP};
use fellb_core::Error;

use crate::{BundleArg, CoefficientArg};

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, std::io::Error),
    Core(Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult = Result<Outcome, CliError>;

pub struct Outcome {
    pub stdout: Option<String>,
    pub passed: bool,
    pub failure: Option<String>,
}

impl Outcome {
    fn report(v: Value) -> Self {
        Self { stdout: Some(pretty(&v)), passed: true, failure: None }
    }

    fn check(v: Value, passed: bool, failure: impl Into<String>) -> Self {
        Self { stdout: Some(pretty(&v)), passed, failure: if passed { None } else { Some(failure.into()) } }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn in_file(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse(m) => CliError::Core(Error::Parse(format!("{}: {m}", path.display()))),
        other => CliError::Core(other),
    }
}

fn check_caps(b: &FellBundle) -> Result<(), CliError> {
    if b.order() > DESK_CAP || b.ambient_dim() > DESK_CAP {
        return Err(Error::CapExceeded(format!(
            "group order {} and ambient dimension {} must both be at most {DESK_CAP}",
            b.order(),
            b.ambient_dim()
        ))
        .into());
    }
    Ok(())
}

fn load_bundle_file(path: &Path) -> Result<Arc<FellBundle>, CliError> {
    let b = fjson::parse_bundle(&read(path)?).map_err(|e| in_file(path, e))?;
    check_caps(&b)?;
    Ok(Arc::new(b))
}

fn family_bundle(name: &str) -> Result<Arc<FellBundle>, CliError> {
    Ok(families::family(name)?.bundle)
}

fn resolve_bundle(arg: &BundleArg) -> Result<Option<Arc<FellBundle>>, CliError> {
    match (&arg.bundle, &arg.family) {
        (Some(p), _) => load_bundle_file(p).map(Some),
        (None, Some(f)) => family_bundle(f).map(Some),
        (None, None) => Ok(None),
    }
}

fn require_bundle(arg: &BundleArg) -> Result<Arc<FellBundle>, CliError> {
    resolve_bundle(arg)?.ok_or_else(|| CliError::Usage("one of --bundle or --family is required".into()))
}

/// Reads a section file; its own `bundle` entry is used when no bundle was
/// given on the command line (paths are relative to the section file).
fn load_section(path: &Path, given: Option<Arc<FellBundle>>) -> Result<Section, CliError> {
    let desc: SectionDescriptor = fjson::parse(&read(path)?).map_err(|e| in_file(path, e))?;
    let bundle = match (given, &desc.bundle) {
        (Some(b), _) => b,
        (None, Some(BundleSource::Path(p))) => {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            load_bundle_file(&base.join(p))?
        }
        (None, Some(BundleSource::Inline(d))) => {
            let b = (**d).clone().build().map_err(|e| in_file(path, e))?;
            check_caps(&b)?;
            Arc::new(b)
        }
        (None, None) => return Err(CliError::Usage(format!("{}: no bundle given", path.display()))),
    };
    desc.build(&bundle).map_err(|e| in_file(path, e))
}

fn load_functional(arg: &BundleArg, path: &Path) -> Result<Functional, CliError> {
    let b = require_bundle(arg)?;
    fjson::parse_functional(&read(path)?, &b).map_err(|e| in_file(path, e))
}

pub fn verify(path: &Path) -> CliResult {
    let b = load_bundle_file(path)?;
    let report = verify_bundle_axioms(&b);
    let saturated = is_saturated(&b);
    let failed = report.failed();
    let v = json!({
        "group_order": b.order(),
        "ambient_dim": b.ambient_dim(),
        "fiber_dims": b.fiber_dims(),
        "axioms": report.checks,
        "saturated": saturated,
        "saturation_defects": saturation_defects(&b),
        "passed": report.passed(),
    });
    Ok(Outcome::check(v, report.passed(), format!("axiom {} violated", failed.join(", "))))
}

pub fn suite(cfg: &SuiteConfig, json_path: Option<&Path>, csv_path: Option<&Path>, no_timings: bool) -> CliResult {
    let mut report = run_suite(cfg)?;
    if no_timings {
        report = report.without_timings();
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(p) = csv_path {
        let mut w = csv::Writer::from_path(p).map_err(|e| CliError::Io(p.to_path_buf(), e.into()))?;
        let io = |e: csv::Error| CliError::Io(p.to_path_buf(), e.into());
        w.write_record(["name", "anchor", "status", "residual", "ms"]).map_err(io)?;
        for r in &report.records {
            w.write_record([
                r.name.clone(),
                r.anchor.clone(),
                r.status.to_string(),
                format!("{:e}", r.residual),
                format!("{:.3}", r.ms),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(p.to_path_buf(), e))?;
    }
    let stdout = match json_path {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| CliError::Io(p.to_path_buf(), e))?;
            None
        }
        None => Some(text),
    };
    let failing: Vec<String> =
        report.records.iter().filter(|r| r.status.to_string() != "pass").map(|r| r.name.clone()).collect();
    Ok(Outcome { stdout, passed: failing.is_empty(), failure: Some(failing.join(", ")) })
}

pub fn norm(arg: &BundleArg, section: &Path) -> CliResult {
    let f = load_section(section, resolve_bundle(arg)?)?;
    Ok(Outcome::report(json!({ "l1": f.l1_norm(), "l2": f.l2_norm(), "universal": universal_norm(&f)? })))
}

pub fn bnorm(arg: &BundleArg, functional: &Path) -> CliResult {
    let phi = load_functional(arg, functional)?;
    Ok(Outcome::report(json!({ "bnorm": phi.bnorm()? })))
}

pub fn posdef(arg: &BundleArg, functional: &Path, tol: f64) -> CliResult {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")).into());
    }
    let phi = load_functional(arg, functional)?;
    let p = phi.positivity(tol);
    let positive = matches!(p, Positivity::Positive(_));
    Ok(Outcome::check(json!(p), positive, "functional is not positive definite"))
}

pub fn gns(arg: &BundleArg, functional: &Path) -> CliResult {
    let phi = load_functional(arg, functional)?;
    match gns_construct(&phi) {
        Ok(data) => {
            let bn = phi.bnorm()?;
            let eta2 = data.eta.norm_squared();
            Ok(Outcome::report(json!({
                "dim": data.dim(),
                "eta_norm_squared": eta2,
                "bnorm": bn,
                "representation_residual": data.rep.verify(phi.bundle()),
            })))
        }
        Err(e @ (Error::NotPositive(_) | Error::IndeterminatePositivity(_))) => {
            Ok(Outcome::check(json!({ "error": e.to_string() }), false, e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

fn coefficient(family: &str, arg: &CoefficientArg, seed: u64) -> Result<Coefficient, CliError> {
    let b = family_bundle(family)?;
    match (&arg.xi, &arg.eta) {
        (Some(x), Some(y)) => {
            let xi = load_section(x, Some(b.clone()))?;
            let eta = load_section(y, Some(b))?;
            Ok(Coefficient::new(xi, eta)?)
        }
        _ => Ok(Coefficient::random(&b, &mut fellb_core::seeded_rng(seed))),
    }
}

fn table(values: &[Vec<ComplexMatrix>]) -> Value {
    let map: serde_json::Map<String, Value> = values
        .iter()
        .enumerate()
        .map(|(s, list)| (s.to_string(), Value::Array(list.iter().map(fjson::matrix_to_json).collect())))
        .collect();
    Value::Object(map)
}

pub fn fourier_eval(family: &str, arg: &CoefficientArg, seed: u64) -> CliResult {
    let c = coefficient(family, arg, seed)?;
    let u = c.tabulate();
    let report = vanishing_check(&c);
    Ok(Outcome::report(json!({
        "values": table(u.values()),
        "support": u.support(fellb_core::fourier::VANISHING_TOL),
        "predicted_support": report.predicted_support,
        "norm_upper": c.norm_upper(),
    })))
}

pub fn fourier_norm(family: &str, arg: &CoefficientArg, budget: usize, seed: u64) -> CliResult {
    let c = coefficient(family, arg, seed)?;
    let mut bounds = anorm_bounds(&c.tabulate(), budget, seed)?;
    bounds.upper = bounds.upper.min(c.norm_upper());
    Ok(Outcome::report(json!({ "lower": bounds.lower, "upper": bounds.upper })))
}

pub fn fourier_eymard(family: &str, k: &[usize]) -> CliResult {
    let b = family_bundle(family)?;
    let u = eymard_element(&b, k)?;
    let d = b.dynamics().expect("eymard_element checked the family");
    let mut worst: f64 = 0.0;
    for s in b.group().elements() {
        for a in d.system().algebra().basis() {
            let expected = if k.contains(&s) {
                d.element(0, &a.adjoint())
            } else {
                ComplexMatrix::zeros(b.ambient_dim(), b.ambient_dim())
            };
            worst = worst.max(max_abs_diff(&u.evaluate(s, &d.element(s, a))?, &expected));
        }
    }
    let v = json!({
        "K": k,
        "support": u.tabulate().support(fellb_core::fourier::VANISHING_TOL),
        "max_residual": worst,
        "values": table(u.tabulate().values()),
    });
    Ok(Outcome::check(v, worst <= 1e-12, format!("residual {worst:e} exceeds 1e-12")))
}

pub fn fourier_folner(family: &str, k: &[usize], eps: f64, budget: usize, seed: u64) -> CliResult {
    let b = family_bundle(family)?;
    let u = folner_approx_identity(&b, k, eps)?;
    let delta = UnitalDynamicalDelta::new(&b)?;
    // a random element supported in K: ξ at e and η on K
    let mut rng = fellb_core::seeded_rng(seed);
    let xi = Section::random_supported(&b, &[b.group().identity()], &mut rng);
    let eta = Section::random_supported(&b, k, &mut rng);
    let v = Coefficient::new(xi, eta)?;
    let ratio = approx_identity_defect(&u, &v, k, &delta, budget, seed)?;
    let expected = eps / (1.0 + eps);
    let out = json!({
        "K": k,
        "eps": eps,
        "norm_upper": u.norm_upper(),
        "ratio": ratio,
        "expected_ratio": expected,
    });
    let ok = u.norm_upper() <= 1.0 && (ratio - expected).abs() <= 1e-8;
    Ok(Outcome::check(out, ok, "defect ratio differs from ε/(1+ε)"))
}

pub fn takai(system: Option<&str>, seed: u64) -> CliResult {
    let systems = families::takai_systems()?;
    let selected: Vec<_> = systems.into_iter().filter(|(n, _)| system.is_none_or(|s| s == *n)).collect();
    if selected.is_empty() {
        return Err(Error::InvalidParameter(format!("unknown instance `{}`", system.unwrap_or_default())).into());
    }
    let mut rows = Vec::new();
    let mut all = true;
    for (name, sys) in &selected {
        let r = takai_check(sys, seed)?;
        all &= r.equal;
        rows.push(
            json!({ "name": name, "double_crossed": r.double_crossed, "stabilized": r.stabilized, "equal": r.equal }),
        );
    }
    Ok(Outcome::check(Value::Array(rows), all, "block data differ"))
}

pub fn leptin(family: &str, eps: &[f64], samples: usize, seed: u64) -> CliResult {
    let b = family_bundle(family)?;
    let probe = leptin_converse_probe(&b, eps, samples, seed)?;
    Ok(Outcome::report(serde_json::to_value(&probe).expect("probe serializes")))
}

pub fn families() -> CliResult {
    let rows: Vec<Value> = families::catalogue()?
        .iter()
        .map(|f| {
            json!({
                "name": f.name,
                "kind": f.kind,
                "group_order": f.bundle.order(),
                "ambient_dim": f.bundle.ambient_dim(),
                "fiber_dims": f.bundle.fiber_dims(),
            })
        })
        .collect();
    debug_assert_eq!(rows.len(), FAMILY_NAMES.len());
    Ok(Outcome::report(Value::Array(rows)))
}

pub fn export(family: &str) -> CliResult {
    Ok(Outcome::report(fjson::bundle_to_json(&*family_bundle(family)?)))
}
