//! JSON descriptors for groups, matrices, bundles, sections and functionals.
//!
//! Matrices are row-major lists of `[re, im]` pairs. Syntax and shape errors
//! carry the line and column reported by the parser.

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bundle::FellBundle;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::group::FiniteGroup;
use crate::linalg::{zeros, ComplexMatrix};
use crate::section::Section;

/// A square complex matrix read from `[[[re, im], ...], ...]`.
#[derive(Debug, Clone)]
pub struct JsonMatrix(pub ComplexMatrix);

impl<'de> Deserialize<'de> for JsonMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let n = rows.len();
        if n == 0 {
            return Err(de::Error::custom("empty matrix"));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(de::Error::custom(format!(
                "matrix is not square: row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(de::Error::custom("non-finite matrix entry"));
        }
        Ok(JsonMatrix(ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]))))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescriptor {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl GroupDescriptor {
    pub fn build(self) -> Result<FiniteGroup> {
        if self.order != self.cayley.len() {
            return Err(Error::Parse(format!(
                "order {} but the Cayley table has {} rows",
                self.order,
                self.cayley.len()
            )));
        }
        FiniteGroup::from_cayley(self.cayley, self.labels)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDescriptor {
    pub group: GroupDescriptor,
    pub ambient_dim: usize,
    pub fibers: BTreeMap<String, Vec<JsonMatrix>>,
}

fn element_key(key: &str, order: usize) -> Result<usize> {
    match key.trim().parse::<usize>() {
        Ok(s) if s < order => Ok(s),
        _ => Err(Error::Parse(format!("`{key}` is not an element index below {order}"))),
    }
}

fn check_size(m: &ComplexMatrix, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n {
        return Err(Error::Parse(format!("{what} is {0}x{0}, expected {n}x{n}", m.nrows())));
    }
    Ok(())
}

impl BundleDescriptor {
    /// Validates the group, orthonormalizes each fiber's spanning set and
    /// assembles the bundle. Missing fibers are zero.
    pub fn build(self) -> Result<FellBundle> {
        let group = self.group.build()?;
        let n = self.ambient_dim;
        if n == 0 {
            return Err(Error::Parse("ambient_dim must be positive".into()));
        }
        let mut spans = vec![Vec::new(); group.order()];
        for (key, mats) in self.fibers {
            let s = element_key(&key, group.order())?;
            for (i, m) in mats.into_iter().enumerate() {
                check_size(&m.0, n, &format!("matrix {i} of fiber {s}"))?;
                spans[s].push(m.0);
            }
        }
        FellBundle::from_spanning(group, n, &spans)
    }
}

/// Where a section document finds its bundle.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BundleSource {
    Path(String),
    Inline(Box<BundleDescriptor>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDescriptor {
    #[serde(default)]
    pub bundle: Option<BundleSource>,
    pub values: BTreeMap<String, JsonMatrix>,
}

fn matrices_by_element(
    bundle: &Arc<FellBundle>,
    entries: BTreeMap<String, JsonMatrix>,
    what: &str,
) -> Result<Vec<ComplexMatrix>> {
    let n = bundle.ambient_dim();
    let mut out = vec![zeros(n, n); bundle.order()];
    for (key, m) in entries {
        let s = element_key(&key, bundle.order())?;
        check_size(&m.0, n, &format!("{what} at {s}"))?;
        out[s] = m.0;
    }
    Ok(out)
}

impl SectionDescriptor {
    /// Values must lie in their fibers.
    pub fn build(self, bundle: &Arc<FellBundle>) -> Result<Section> {
        Section::new(bundle, matrices_by_element(bundle, self.values, "value")?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalDescriptor {
    pub components: BTreeMap<String, JsonMatrix>,
}

impl FunctionalDescriptor {
    /// Components are projected onto their fibers.
    pub fn build(self, bundle: &Arc<FellBundle>) -> Result<Functional> {
        Functional::new(bundle, matrices_by_element(bundle, self.components, "component")?)
    }
}

/// Parses a document, reporting failures with their line and column.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_bundle(text: &str) -> Result<FellBundle> {
    parse::<BundleDescriptor>(text)?.build()
}

pub fn parse_functional(text: &str, bundle: &Arc<FellBundle>) -> Result<Functional> {
    parse::<FunctionalDescriptor>(text)?.build(bundle)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    let mut v = json!({ "order": g.order(), "cayley": g.cayley() });
    if let Some(l) = g.labels() {
        v["labels"] = json!(l);
    }
    v
}

/// The descriptor of a bundle, with each fiber given by its orthonormal basis.
pub fn bundle_to_json(b: &FellBundle) -> Value {
    let fibers: serde_json::Map<String, Value> = b
        .group()
        .elements()
        .map(|s| (s.to_string(), Value::Array(b.fiber(s).basis().iter().map(matrix_to_json).collect())))
        .collect();
    json!({ "group": group_to_json(b.group()), "ambient_dim": b.ambient_dim(), "fibers": fibers })
}

pub fn section_to_json(f: &Section) -> Value {
    let values: serde_json::Map<String, Value> =
        f.values().iter().enumerate().map(|(s, m)| (s.to_string(), matrix_to_json(m))).collect();
    json!({ "values": values })
}

pub fn functional_to_json(phi: &Functional) -> Value {
    let comps: serde_json::Map<String, Value> =
        phi.components().iter().enumerate().map(|(s, m)| (s.to_string(), matrix_to_json(m))).collect();
    json!({ "components": comps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::trivial_bundle;
    use crate::group::cyclic;
    use crate::linalg::max_abs_diff;

    #[test]
    fn bundle_round_trip() {
        let b = trivial_bundle(&cyclic(3).unwrap());
        let text = serde_json::to_string_pretty(&bundle_to_json(&b)).unwrap();
        let back = parse_bundle(&text).unwrap();
        assert_eq!(back.fiber_dims(), b.fiber_dims());
        for s in 0..3 {
            assert!(b.fiber(s).residual(&back.fiber(s).basis()[0]) < 1e-12);
        }
    }

    #[test]
    fn non_square_matrix_reports_line() {
        let text = "{\n \"group\": {\"order\": 1, \"cayley\": [[0]]},\n \"ambient_dim\": 1,\n \"fibers\": {\"0\": [\n  [[[1,0],[0,0]]]\n ]}\n}";
        let err = parse_bundle(text).unwrap_err().to_string();
        assert!(err.contains("not square") && err.contains("at line "), "{err}");
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_bundle("{\n\"group\": \n}").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn order_must_match_table() {
        let text = r#"{"group": {"order": 2, "cayley": [[0]]}, "ambient_dim": 1, "fibers": {}}"#;
        assert!(matches!(parse_bundle(text), Err(Error::Parse(_))));
    }

    #[test]
    fn functional_components_default_to_zero() {
        let b = Arc::new(trivial_bundle(&cyclic(2).unwrap()));
        let phi = parse_functional(r#"{"components": {"1": [[[0,0],[1,0]],[[1,0],[0,0]]]}}"#, &b).unwrap();
        assert_eq!(phi.component(0).norm(), 0.0);
        let back = parse_functional(&functional_to_json(&phi).to_string(), &b).unwrap();
        assert!(max_abs_diff(back.component(1), phi.component(1)) < 1e-15);
    }
}
