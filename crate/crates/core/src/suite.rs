//! The verification suite: one check per acceptance criterion, run over the
//! bundle catalogue with seeded randomness.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::sync::Arc;
use std::time::Instant;

use crate::bundle::{is_saturated, takai_check, verify_bundle_axioms, FellBundle};
use crate::classical::{ag_norm, group_cstar, tb_isomorphism};
use crate::error::{Error, Result};
use crate::families::{self, Family, FamilyKind};
use crate::fourier::{
    anorm_bounds, approx_identity_defect, eymard_element, folner_approx_identity, multiplier_action, Coefficient,
};
use crate::functional::{
    check_eta_norm, coassociativity_residual, from_representation, jordan_decompose, multiply, polar_factorization,
    random_factorization, unit_like, BundleRep, Comultiplication, Functional, HopfFiberDelta, UnitalDynamicalDelta,
};
use crate::group::{cyclic, dihedral, symmetric, FiniteGroup};
use crate::linalg::{max_abs_diff, operator_norm, random_vector, ComplexMatrix};
use crate::regular::universal_norm;
use crate::section::Section;

/// Largest group order and ambient dimension the suite accepts.
pub const DESK_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    /// Worst observed value of the quantity the check bounds.
    pub residual: f64,
    pub ms: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    /// Zeroes the timings so that reports compare byte for byte.
    pub fn without_timings(mut self) -> Self {
        for r in &mut self.records {
            r.ms = 0.0;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Only families whose name starts with this prefix.
    pub family_prefix: Option<String>,
    pub max_order: usize,
    pub max_ambient: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: crate::DEFAULT_SEED, family_prefix: None, max_order: DESK_CAP, max_ambient: DESK_CAP }
    }
}

/// What a check found: the worst value of its bounded quantity and whether
/// every sub-check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub residual: f64,
    pub detail: String,
}

impl Outcome {
    fn from_bound(residual: f64, limit: f64, detail: String) -> Self {
        let status = if residual <= limit { Status::Pass } else { Status::Fail };
        Self { status, residual, detail }
    }
}

pub struct Criterion {
    pub name: &'static str,
    pub anchor: &'static str,
    pub run: fn(&Context) -> Result<Outcome>,
}

/// Families and seed shared by the checks.
pub struct Context {
    pub seed: u64,
    pub families: Vec<Family>,
}

impl Context {
    pub fn new(cfg: &SuiteConfig) -> Result<Self> {
        if cfg.max_order > DESK_CAP || cfg.max_ambient > DESK_CAP {
            return Err(Error::CapExceeded(format!(
                "caps (order {}, ambient {}) exceed the desk-scale limit {DESK_CAP}",
                cfg.max_order, cfg.max_ambient
            )));
        }
        let families = families::catalogue()?
            .into_iter()
            .filter(|f| cfg.family_prefix.as_deref().is_none_or(|p| f.name.starts_with(p)))
            .filter(|f| f.bundle.order() <= cfg.max_order && f.bundle.ambient_dim() <= cfg.max_ambient)
            .collect();
        Ok(Self { seed: cfg.seed, families })
    }

    fn rng(&self, stream: u64) -> crate::Rng {
        crate::seeded_rng(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(stream))
    }

    fn crossed(&self) -> impl Iterator<Item = &Family> {
        self.families.iter().filter(|f| matches!(f.kind, FamilyKind::Trivial | FamilyKind::Dynamical))
    }

    fn nontrivial_dynamical(&self) -> impl Iterator<Item = &Family> {
        self.families.iter().filter(|f| f.kind == FamilyKind::Dynamical)
    }

    fn named(&self, name: &str) -> Option<&Family> {
        self.families.iter().find(|f| f.name == name)
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            name: "01-bundle-axioms",
            anchor: "grading, involution and saturation of every shipped bundle",
            run: bundle_axioms,
        },
        Criterion {
            name: "02-regular-representation",
            anchor: "λ is isometric on fibers and a *-representation; C*-identity",
            run: regular_representation,
        },
        Criterion { name: "03-dual-isometry", anchor: "B(B) is isometric to the dual of C*(B)", run: dual_isometry },
        Criterion {
            name: "04-gns-eta-norm", anchor: "‖ψ‖ = ‖η‖² for positive functionals", run: gns_eta_norm
        },
        Criterion {
            name: "05-jordan-polar",
            anchor: "Jordan decomposition and norm-attaining polar factorization",
            run: jordan_polar,
        },
        Criterion {
            name: "06-banach-algebra",
            anchor: "comultiplication products are associative and submultiplicative",
            run: banach_algebra,
        },
        Criterion {
            name: "07-trivial-bundle-isometry",
            anchor: "T_b identifies A(B) of the trivial bundle with A(G)",
            run: trivial_isometry,
        },
        Criterion { name: "08-eymard", anchor: "u_s(s,a) = (e,a†) on K and 0 off K", run: eymard },
        Criterion {
            name: "09-folner", anchor: "‖u_{K,ε}‖ ≤ 1 and ‖u_{K,ε}v − v‖ = ε/(1+ε)‖v‖", run: folner
        },
        Criterion {
            name: "10-multipliers",
            anchor: "every φ ∈ B(B) multiplies A(B) with ‖L_φ‖ ≤ ‖φ‖",
            run: multipliers,
        },
        Criterion { name: "11-takai", anchor: "(A⋊G)⋊Ĝ and A⊗M_|G| have equal block data", run: takai },
        Criterion {
            name: "12-classical-oracle", anchor: "Σ dim² = |G| and the block sizes of C*(S₃)", run: classical
        },
    ]
}

pub fn run_criterion(c: &Criterion, ctx: &Context) -> CheckRecord {
    let start = Instant::now();
    let outcome = (c.run)(ctx).unwrap_or_else(|e| Outcome {
        status: Status::Fail,
        residual: f64::INFINITY,
        detail: format!("error: {e}"),
    });
    CheckRecord {
        name: c.name.to_string(),
        anchor: c.anchor.to_string(),
        status: outcome.status,
        residual: outcome.residual,
        ms: start.elapsed().as_secs_f64() * 1e3,
        detail: outcome.detail,
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let ctx = Context::new(cfg)?;
    let mut records: Vec<CheckRecord> = criteria().iter().map(|c| run_criterion(c, &ctx)).collect();
    records.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteReport { seed: cfg.seed, records })
}

fn bundle_axioms(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for f in &ctx.families {
        let report = verify_bundle_axioms(&f.bundle);
        worst = worst.max(report.worst_residual());
        if !report.passed() {
            failures.push(format!("{}: {:?}", f.name, report.failed()));
        }
        let needs_saturation = matches!(f.kind, FamilyKind::Trivial | FamilyKind::Dynamical);
        if needs_saturation && !is_saturated(&f.bundle) {
            failures.push(format!("{}: not saturated", f.name));
        }
    }
    let mut out = Outcome::from_bound(worst, 1e-9, format!("{} bundles", ctx.families.len()));
    if !failures.is_empty() {
        out.status = Status::Fail;
        out.detail = failures.join("; ");
    }
    Ok(out)
}

fn normalized_section<R: Rng + ?Sized>(b: &Arc<FellBundle>, rng: &mut R) -> Result<Section> {
    let f = Section::random(b, rng);
    let n = universal_norm(&f)?;
    Ok(if n > 0.0 { f.scale(Complex64::new(1.0 / n, 0.0)) } else { f })
}

fn regular_representation(ctx: &Context) -> Result<Outcome> {
    let mut iso: f64 = 0.0;
    let mut star: f64 = 0.0;
    let mut cstar: f64 = 0.0;
    for (k, fam) in ctx.families.iter().enumerate() {
        let b = &fam.bundle;
        let rep = b.presentation()?.rep();
        let mut rng = ctx.rng(200 + k as u64);
        for s in b.group().elements() {
            for _ in 0..5 {
                let coords: Vec<Complex64> =
                    (0..b.fiber(s).dim()).map(|_| crate::linalg::random_complex(&mut rng)).collect();
                let x = b.fiber(s).from_coordinates(&coords);
                let nx = operator_norm(&x);
                if nx == 0.0 {
                    continue;
                }
                let x = x / Complex64::new(nx, 0.0);
                iso = iso.max((operator_norm(&rep.fiber_operator(s, &x)) - 1.0).abs());
            }
        }
        for _ in 0..200 {
            let f = normalized_section(b, &mut rng)?;
            let g = normalized_section(b, &mut rng)?;
            let (lf, lg) = (rep.matrix(&f)?, rep.matrix(&g)?);
            star = star.max(max_abs_diff(&rep.matrix(&f.convolve(&g)?)?, &(&lf * &lg)));
            star = star.max(max_abs_diff(&rep.matrix(&f.involute())?, &lf.adjoint()));
            let n = operator_norm(&lf);
            let n2 = operator_norm(&rep.matrix(&f.involute().convolve(&f)?)?);
            cstar = cstar.max((n2 - n * n).abs() / (n * n).max(f64::MIN_POSITIVE));
        }
    }
    let pass = iso <= 1e-10 && star <= 1e-10 && cstar <= 1e-8;
    Ok(Outcome {
        status: if pass { Status::Pass } else { Status::Fail },
        residual: iso.max(star).max(cstar),
        detail: format!("fiber isometry {iso:.2e}, *-rep {star:.2e}, C*-identity {cstar:.2e}"),
    })
}

fn dual_isometry(ctx: &Context) -> Result<Outcome> {
    let mut gap: f64 = 0.0;
    let mut excess = f64::NEG_INFINITY;
    let mut checked = 0;
    for (k, fam) in ctx.families.iter().enumerate() {
        if !is_saturated(&fam.bundle) {
            continue;
        }
        let report = crate::functional::dual_iso_check(&fam.bundle, 100, ctx.seed.wrapping_add(300 + 1000 * k as u64))?;
        gap = gap.max(report.worst_gap);
        excess = excess.max(report.worst_excess);
        checked += 1;
    }
    let pass = gap <= 1e-4 && excess <= 1e-9;
    Ok(Outcome {
        status: if pass { Status::Pass } else { Status::Fail },
        residual: gap,
        detail: format!("{checked} saturated bundles; worst gap {gap:.2e}, worst relative excess {excess:.2e}"),
    })
}

fn gns_eta_norm(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (k, fam) in ctx.families.iter().enumerate() {
        let b = &fam.bundle;
        let mut rng = ctx.rng(400 + k as u64);
        for _ in 0..100 {
            let pi = BundleRep::random(b, &mut rng)?;
            let xi = random_vector(pi.dim(), &mut rng);
            let phi = from_representation(b, &pi, &xi, &xi)?;
            let (bn, eta2) = check_eta_norm(&phi)?;
            worst = worst.max((bn - eta2).abs() / (1.0 + bn));
        }
    }
    Ok(Outcome::from_bound(worst, 1e-8, "100 positive functionals per bundle".into()))
}

fn jordan_polar(ctx: &Context) -> Result<Outcome> {
    let i = Complex64::new(0.0, 1.0);
    let mut recomb: f64 = 0.0;
    let mut all_positive = true;
    let mut polar: f64 = 0.0;
    let mut undercut = f64::NEG_INFINITY;
    let mut reproduce: f64 = 0.0;
    for (k, fam) in ctx.families.iter().enumerate() {
        let b = &fam.bundle;
        let mut rng = ctx.rng(500 + k as u64);
        for _ in 0..10 {
            let phi = Functional::random(b, &mut rng);
            let parts = jordan_decompose(&phi)?;
            let rec = parts[0].sub(&parts[1])?.add(&parts[2].sub(&parts[3])?.scale(i))?;
            recomb = recomb.max(rec.max_diff(&phi));
            all_positive &= parts.iter().all(|p| p.is_positive_definite());
            let bn = phi.bnorm()?;
            let fac = polar_factorization(&phi)?;
            polar = polar.max((fac.norm_product() - bn).abs());
            reproduce = reproduce.max(from_representation(b, &fac.rep, &fac.xi, &fac.eta)?.max_diff(&phi));
            for _ in 0..100 {
                let rf = random_factorization(&phi, &mut rng)?;
                undercut = undercut.max(bn - rf.norm_product());
            }
            let rf = random_factorization(&phi, &mut rng)?;
            reproduce = reproduce.max(from_representation(b, &rf.rep, &rf.xi, &rf.eta)?.max_diff(&phi));
        }
    }
    let pass = recomb <= 1e-10 && all_positive && polar <= 1e-7 && undercut <= 1e-6 && reproduce <= 1e-9;
    Ok(Outcome {
        status: if pass { Status::Pass } else { Status::Fail },
        residual: recomb.max(polar),
        detail: format!(
            "recombination {recomb:.2e}, parts positive {all_positive}, polar gap {polar:.2e}, \
             worst undercut {undercut:.2e}, reproduction {reproduce:.2e}"
        ),
    })
}

fn deltas(ctx: &Context) -> Result<Vec<(String, Box<dyn Comultiplication>)>> {
    let mut out: Vec<(String, Box<dyn Comultiplication>)> = Vec::new();
    for fam in ctx.crossed() {
        out.push((format!("{}/{}", fam.name, "unital-dynamical"), Box::new(UnitalDynamicalDelta::new(&fam.bundle)?)));
    }
    let trivial = FiniteGroup::from_cayley(vec![vec![0]], None)?;
    for fam in ctx.families.iter().filter(|f| f.kind == FamilyKind::Trivial) {
        out.push((format!("{}/hopf-fiber", fam.name), Box::new(HopfFiberDelta::new(&fam.bundle, &trivial)?)));
    }
    if let Some(fam) = ctx.named("dynamical-group-algebra-z3-z2") {
        out.push((format!("{}/hopf-fiber", fam.name), Box::new(HopfFiberDelta::new(&fam.bundle, &cyclic(3)?)?)));
    }
    Ok(out)
}

fn banach_algebra(ctx: &Context) -> Result<Outcome> {
    let mut submult = f64::NEG_INFINITY;
    let mut assoc: f64 = 0.0;
    let mut coassoc: f64 = 0.0;
    let list = deltas(ctx)?;
    for (k, (_, delta)) in list.iter().enumerate() {
        let b = delta.bundle();
        let mut rng = ctx.rng(600 + k as u64);
        coassoc = coassoc.max(coassociativity_residual(delta.as_ref()));
        for _ in 0..200 {
            let phi = Functional::random(b, &mut rng);
            let psi = Functional::random(b, &mut rng);
            let prod = multiply(&phi, &psi, delta.as_ref())?;
            submult = submult.max(prod.bnorm()? - phi.bnorm()? * psi.bnorm()?);
        }
        for _ in 0..20 {
            let (x, y, z) =
                (Functional::random(b, &mut rng), Functional::random(b, &mut rng), Functional::random(b, &mut rng));
            let left = multiply(&multiply(&x, &y, delta.as_ref())?, &z, delta.as_ref())?;
            let right = multiply(&x, &multiply(&y, &z, delta.as_ref())?, delta.as_ref())?;
            assoc = assoc.max(left.max_diff(&right));
        }
    }
    let pass = submult <= 1e-8 && assoc < 1e-9 && coassoc < 1e-9;
    Ok(Outcome {
        status: if pass { Status::Pass } else { Status::Fail },
        residual: assoc.max(coassoc),
        detail: format!(
            "{} comultiplications; worst bnorm(φψ) − bnorm(φ)bnorm(ψ) {submult:.2e}, associativity {assoc:.2e}, \
             co-associativity {coassoc:.2e}",
            list.len()
        ),
    })
}

fn trivial_isometry(ctx: &Context) -> Result<Outcome> {
    let mut mult: f64 = 0.0;
    let mut norm_gap: f64 = 0.0;
    let mut checked = 0;
    for name in ["trivial-z2", "trivial-z4", "trivial-s3"] {
        let Some(fam) = ctx.named(name) else { continue };
        checked += 1;
        let b = &fam.bundle;
        let delta = UnitalDynamicalDelta::new(b)?;
        let mut rng = ctx.rng(700 + checked);
        for _ in 0..100 {
            let c = Coefficient::random(b, &mut rng);
            let d = Coefficient::random(b, &mut rng);
            let (u, v) = (c.tabulate(), d.tabulate());
            let lhs = tb_isomorphism(&u.product(&v, &delta)?)?;
            let rhs = tb_isomorphism(&u)?.mul(&tb_isomorphism(&v)?);
            mult = mult.max(lhs.max_diff(&rhs));
            let bounds = c.anorm_bounds(1, ctx.seed)?;
            let classical = ag_norm(&tb_isomorphism(&u)?)?;
            norm_gap = norm_gap.max((classical - bounds.lower).abs()).max((bounds.upper - bounds.lower).abs());
        }
    }
    let pass = mult < 1e-10 && norm_gap <= 1e-6 && checked > 0;
    Ok(Outcome {
        status: if pass { Status::Pass } else { Status::Fail },
        residual: mult.max(norm_gap),
        detail: format!("{checked} groups; multiplicativity {mult:.2e}, norm gap {norm_gap:.2e}"),
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1u32 << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

fn eymard(ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for fam in ctx.nontrivial_dynamical() {
        let b = &fam.bundle;
        let d = b.dynamics().expect("dynamical family");
        let g = b.group();
        for k in subsets(g.order()) {
            let u = eymard_element(b, &k)?;
            for s in g.elements() {
                for a in d.system().algebra().basis() {
                    let got = u.evaluate(s, &d.element(s, a))?;
                    let expected = if k.contains(&s) {
                        d.element(g.identity(), &a.adjoint())
                    } else {
                        ComplexMatrix::zeros(b.ambient_dim(), b.ambient_dim())
                    };
                    worst = worst.max(max_abs_diff(&got, &expected));
                    count += 1;
                }
            }
        }
    }
    Ok(Outcome::from_bound(worst, 1e-12, format!("{count} evaluations")))
}

const FOLNER_EPS: [f64; 5] = [1e-3, 0.1, 0.5, 1.0, 10.0];

fn folner(ctx: &Context) -> Result<Outcome> {
    let mut worst_bound: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut samples = 0;
    for (j, fam) in ctx.crossed().enumerate() {
        let b = &fam.bundle;
        let g = b.group();
        let delta = UnitalDynamicalDelta::new(b)?;
        let mut rng = ctx.rng(900 + j as u64);
        let sets: Vec<Vec<usize>> =
            if g.order() <= 4 { subsets(g.order()).collect() } else { vec![vec![0], (0..g.order()).collect()] };
        for &eps in &FOLNER_EPS {
            for k in &sets {
                let u = folner_approx_identity(b, k, eps)?;
                worst_bound = worst_bound.max(u.norm_upper());
            }
        }
        for i in 0..50 {
            let eps = FOLNER_EPS[i % FOLNER_EPS.len()];
            let k = &sets[rng.random_range(0..sets.len())];
            let u = folner_approx_identity(b, k, eps)?;
            // ξ at e and η on K give a coefficient supported in K
            let xi = Section::random_supported(b, &[g.identity()], &mut rng);
            let eta = Section::random_supported(b, k, &mut rng);
            let v = Coefficient::new(xi, eta)?;
            let ratio = approx_identity_defect(&u, &v, k, &delta, 2, ctx.seed)?;
            worst_ratio = worst_ratio.max((ratio - eps / (1.0 + eps)).abs());
            samples += 1;
        }
    }
    let pass = worst_bound <= 1.0 && worst_ratio <= 1e-8;
    Ok(Outcome {
        status: if pass { Status::Pass } else { Status::Fail },
        residual: worst_ratio,
        detail: format!("{samples} samples; largest norm bound {worst_bound:.6}, worst ratio error {worst_ratio:.2e}"),
    })
}

fn multipliers(ctx: &Context) -> Result<Outcome> {
    let mut excess = f64::NEG_INFINITY;
    let mut identity: f64 = 0.0;
    let mut samples = 0;
    let families: Vec<&Family> = ctx.crossed().collect();
    if families.is_empty() {
        return Ok(Outcome {
            status: Status::Indeterminate,
            residual: 0.0,
            detail: "no crossed-product bundle selected".into(),
        });
    }
    for (j, fam) in families.iter().enumerate() {
        let b = &fam.bundle;
        let delta = UnitalDynamicalDelta::new(b)?;
        let unit = unit_like(b)?;
        let mut rng = ctx.rng(1000 + j as u64);
        let per = 100usize.div_ceil(families.len());
        for _ in 0..per {
            let phi = Functional::random(b, &mut rng);
            let u = Coefficient::random(b, &mut rng).tabulate();
            let lu = multiplier_action(&phi, &u, &delta)?;
            let num = anorm_bounds(&lu, 2, ctx.seed)?.lower;
            let den = anorm_bounds(&u, 2, ctx.seed)?.upper;
            excess = excess.max(num - phi.bnorm()? * den);
            identity = identity.max(multiplier_action(&unit, &u, &delta)?.max_diff(&u));
            samples += 1;
        }
    }
    let pass = excess <= 1e-9 && identity <= 1e-12;
    Ok(Outcome {
        status: if pass { Status::Pass } else { Status::Fail },
        residual: identity,
        detail: format!("{samples} samples; worst ‖L_φu‖ − ‖φ‖‖u‖ {excess:.2e}, unit-like residual {identity:.2e}"),
    })
}

fn takai(ctx: &Context) -> Result<Outcome> {
    let mut mismatches = Vec::new();
    let systems = families::takai_systems()?;
    for (name, sys) in &systems {
        let r = takai_check(sys, ctx.seed)?;
        if !r.equal {
            mismatches.push(format!("{name}: {:?} vs {:?}", r.double_crossed, r.stabilized));
        }
    }
    Ok(Outcome {
        status: if mismatches.is_empty() { Status::Pass } else { Status::Fail },
        residual: mismatches.len() as f64,
        detail: if mismatches.is_empty() { format!("{} instances", systems.len()) } else { mismatches.join("; ") },
    })
}

fn classical(_ctx: &Context) -> Result<Outcome> {
    let groups = vec![
        ("Z2", cyclic(2)?),
        ("Z3", cyclic(3)?),
        ("Z4", cyclic(4)?),
        ("Klein", families::klein()),
        ("S3", symmetric(3)?),
        ("D4", dihedral(4)?),
        ("Z6", cyclic(6)?),
    ];
    let mut bad = Vec::new();
    for (name, g) in &groups {
        let cs = group_cstar(g)?;
        let sum: usize = cs.sizes().iter().map(|d| d * d).sum();
        if sum != g.order() {
            bad.push(format!("{name}: Σ dim² = {sum}"));
        }
        if *name == "S3" && cs.sizes() != vec![1, 1, 2] {
            bad.push(format!("S3 sizes {:?}", cs.sizes()));
        }
    }
    Ok(Outcome {
        status: if bad.is_empty() { Status::Pass } else { Status::Fail },
        residual: bad.len() as f64,
        detail: if bad.is_empty() { format!("{} groups", groups.len()) } else { bad.join("; ") },
    })
}
