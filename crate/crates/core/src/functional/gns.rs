use num_complex::Complex64;

use super::{BundleRep, Functional, Positivity, POSITIVITY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, zeros, ComplexMatrix, ComplexVector};

/// The GNS triple of a positive functional.
#[derive(Debug, Clone)]
pub struct GnsData {
    pub rep: BundleRep,
    pub eta: ComplexVector,
}

impl GnsData {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }
}

/// GNS construction on `ℓ¹(B)/N_φ` with `⟨f, g⟩ = φ(g*⋆f)`.
///
/// The space is the range of the Gram matrix `M = V Λ V†`; the isometry
/// `T = Λ^{1/2}V†` carries coefficient vectors to it, left convolution `L`
/// becomes `T L T⁺`, and the cyclic vector is the class of `j_e(1)`.
pub fn gns(phi: &Functional) -> Result<GnsData> {
    match phi.positivity(POSITIVITY_TOL) {
        Positivity::Positive(_) => {}
        Positivity::NotPositive(m) => return Err(Error::NotPositive(m)),
        Positivity::Indeterminate(m) => return Err(Error::IndeterminatePositivity(m)),
    }
    let b = phi.bundle();
    let g = b.group();
    let gram = phi.gram_matrix();
    let (values, vectors) = hermitian_eigen(&gram);
    let top = values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] > 1e-12 * top && values[k] > 0.0).collect();
    let r = keep.len();
    let d = gram.nrows();
    let t = ComplexMatrix::from_fn(r, d, |a, j| vectors[(j, keep[a])].conj() * values[keep[a]].sqrt());
    let t_plus = ComplexMatrix::from_fn(d, r, |j, a| vectors[(j, keep[a])] / values[keep[a]].sqrt());

    let offsets: Vec<usize> = b
        .fibers()
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.dim();
            Some(o)
        })
        .collect();
    let mut ops = Vec::with_capacity(g.order());
    for s in g.elements() {
        let mut list = Vec::new();
        for x in b.fiber(s).basis() {
            // left convolution by j_s(x) on single-fiber basis sections
            let mut l = zeros(d, d);
            for tt in g.elements() {
                let st = g.mul(s, tt);
                for (j, y) in b.fiber(tt).basis().iter().enumerate() {
                    let coords = b.fiber(st).coordinates(&(x * y));
                    for (i, v) in coords.iter().enumerate() {
                        l[(offsets[st] + i, offsets[tt] + j)] = *v;
                    }
                }
            }
            list.push(&t * l * &t_plus);
        }
        ops.push(list);
    }
    let rep = BundleRep::new(b, r, ops)?;
    let unit = b.unit_of_unit_fiber();
    let mut one = ComplexVector::from_element(d, Complex64::new(0.0, 0.0));
    for (i, v) in b.fiber(0).coordinates(&unit).iter().enumerate() {
        one[offsets[0] + i] = *v;
    }
    let eta = &t * one;
    Ok(GnsData { rep, eta })
}

/// `(‖φ‖, ‖η‖²)` for a positive functional; the two agree.
pub fn check_eta_norm(phi: &Functional) -> Result<(f64, f64)> {
    let data = gns(phi)?;
    Ok((phi.bnorm()?, data.eta.norm_squared()))
}
