use rand::Rng;

use super::{gns, BundleRep, Functional};
use crate::error::Result;
use crate::linalg::{
    hermitian_part, pinv, polar_decompose, random_matrix, skew_part, spectral_split, vectorize, ComplexMatrix,
    ComplexVector,
};

/// Writes `φ = (φ₁ − φ₂) + i(φ₃ − φ₄)` with positive parts, by splitting the
/// hermitian and skew parts of each block into spectral halves.
pub fn jordan_decompose(phi: &Functional) -> Result<[Functional; 4]> {
    let blocks = phi.blocks()?;
    let mut parts: [Vec<ComplexMatrix>; 4] = Default::default();
    for d in &blocks {
        // φ(x) = tr(D†x) = tr(Hx) − i·tr(Kx) for D = H + iK
        let (hp, hn) = spectral_split(&hermitian_part(d));
        let (kp, kn) = spectral_split(&skew_part(d));
        parts[0].push(hp);
        parts[1].push(hn);
        parts[2].push(kn);
        parts[3].push(kp);
    }
    let b = phi.bundle();
    Ok([
        Functional::from_blocks(b, &parts[0])?,
        Functional::from_blocks(b, &parts[1])?,
        Functional::from_blocks(b, &parts[2])?,
        Functional::from_blocks(b, &parts[3])?,
    ])
}

/// A representation with vectors such that `φ_s(b) = ⟨π_s(b)ξ, η⟩`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub rep: BundleRep,
    pub xi: ComplexVector,
    pub eta: ComplexVector,
}

impl Factorization {
    pub fn norm_product(&self) -> f64 {
        self.xi.norm() * self.eta.norm()
    }
}

/// Polar factorization: with `D_k = W_k|D_k|` per block, `ψ = tr(|D|·)` is
/// positive with the same norm and `φ(x) = ψ(w†x) = ⟨ρ(x)η_ψ, ρ(w)η_ψ⟩` in
/// the GNS representation of `ψ`, so `‖φ‖ = ‖ξ‖·‖η‖`.
pub fn polar_factorization(phi: &Functional) -> Result<Factorization> {
    let b = phi.bundle();
    let blocks = phi.blocks()?;
    let mut abs = Vec::new();
    let mut iso = Vec::new();
    for d in &blocks {
        let (w, p) = polar_decompose(d)?;
        iso.push(w);
        abs.push(p);
    }
    let psi = Functional::from_blocks(b, &abs)?;
    let data = gns(&psi)?;
    let p = b.presentation()?;
    let w = p.section_of(b, &p.element_from_blocks(&iso))?;
    let rho_w = data.rep.section_op(&w)?;
    let eta = &rho_w * &data.eta;
    Ok(Factorization { rep: data.rep, xi: data.eta, eta })
}

/// A random factorization `φ = π_{ξ,η}`: per block, `D_k = B_k A_k†` with
/// `A_k = G_k` a random full-row-rank matrix and `B_k = D_k (G_k†)⁺`; the
/// representation is `⊕_k x_k ⊗ 1_{r_k}` and `ξ, η` are `⊕ vec(A_k), ⊕ vec(B_k)`.
pub fn random_factorization<R: Rng + ?Sized>(phi: &Functional, rng: &mut R) -> Result<Factorization> {
    let b = phi.bundle();
    let blocks = phi.blocks()?;
    let mut mults = Vec::new();
    let mut xi_parts = Vec::new();
    let mut eta_parts = Vec::new();
    for d in &blocks {
        let n = d.nrows();
        let r = n + rng.random_range(0..=2);
        let scale: f64 = (rng.random::<f64>() * 4.0 - 2.0).exp();
        let a = random_matrix(n, r, rng) * num_complex::Complex64::new(scale, 0.0);
        let bmat = d * pinv(&a.adjoint());
        // ⟨(x⊗1)vec(A), vec(B)⟩ = tr(B†xA) = tr(AB†x), so D† = AB†, i.e. D = BA†
        mults.push(r);
        xi_parts.push(vectorize(&a.transpose()));
        eta_parts.push(vectorize(&bmat.transpose()));
    }
    let rep = BundleRep::from_block_multiplicities(b, &mults, None)?;
    let xi = concat(&xi_parts);
    let eta = concat(&eta_parts);
    Ok(Factorization { rep, xi, eta })
}

fn concat(parts: &[ComplexVector]) -> ComplexVector {
    let data: Vec<_> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    ComplexVector::from_vec(data)
}
