//! Finite groups stored as full Cayley tables.
//!
//! Elements are the indices `0..order`; the identity is always index 0.

use num_complex::Complex64;
use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table (Latin square, identity at index 0, associativity
    /// over all triples) and builds the group.
    pub fn from_cayley(cayley: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = cayley.len();
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        for (i, row) in cayley.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return Err(Error::InvalidGroup(format!("row {i} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &cayley {
                if seen[row[j]] {
                    return Err(Error::InvalidGroup(format!("column {j} is not a permutation")));
                }
                seen[row[j]] = true;
            }
        }
        for s in 0..n {
            if cayley[0][s] != s || cayley[s][0] != s {
                return Err(Error::InvalidGroup("index 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = cayley[a][b];
                for c in 0..n {
                    if cayley[ab][c] != cayley[a][cayley[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidGroup(format!("{} labels for {n} elements", l.len())));
            }
        }
        let inverse = (0..n).map(|s| (0..n).find(|&t| cayley[s][t] == 0).expect("latin square")).collect();
        Ok(Self { order: n, cayley, inverse, labels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.cayley[s][t]
    }

    pub fn inv(&self, s: usize) -> usize {
        self.inverse[s]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, s: usize) -> String {
        match &self.labels {
            Some(l) => l[s].clone(),
            None => s.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|s| (0..s).all(|t| self.mul(s, t) == self.mul(t, s)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&s| self.elements().all(|t| self.mul(s, t) == self.mul(t, s))).collect()
    }

    /// `s^k`.
    pub fn pow(&self, s: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, s))
    }

    pub fn element_order(&self, s: usize) -> usize {
        let mut x = s;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, s);
            k += 1;
        }
        k
    }

    /// The product set `AB = {ab}`.
    pub fn set_product(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| self.mul(x, y))).collect();
        set.into_iter().collect()
    }

    pub fn set_inverse(&self, a: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = a.iter().map(|&x| self.inv(x)).collect();
        set.into_iter().collect()
    }

    /// Exhaustive check of the group axioms on the stored tables.
    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        (0..n).all(|s| self.mul(0, s) == s && self.mul(s, 0) == s && self.mul(s, self.inv(s)) == 0)
            && (0..n)
                .all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    /// Whether `phi` (a map on element indices) is an isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &FiniteGroup, phi: &[usize]) -> bool {
        if self.order != other.order || phi.len() != self.order {
            return false;
        }
        let image: BTreeSet<usize> = phi.iter().copied().collect();
        image.len() == self.order
            && (0..self.order).all(|s| (0..self.order).all(|t| phi[self.mul(s, t)] == other.mul(phi[s], phi[t])))
    }
}

/// The cyclic group of order `n` under addition mod `n`.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let cayley = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_cayley(cayley, None)
}

/// `g × h`, with the pair `(a, b)` stored at index `a·|h| + b`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (m, n) = (g.order(), h.order());
    let cayley =
        (0..m * n).map(|x| (0..m * n).map(|y| g.mul(x / n, y / n) * n + h.mul(x % n, y % n)).collect()).collect();
    let labels = match (g.labels(), h.labels()) {
        (None, None) => None,
        _ => Some((0..m * n).map(|x| format!("({},{})", g.label(x / n), h.label(x % n))).collect()),
    };
    FiniteGroup::from_cayley(cayley, labels).expect("product of valid groups is valid")
}

/// The dihedral group of order `2n`: index `k < n` is `r^k`, index `n + k` is `r^k f`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let decode = |x: usize| (x % n, x / n);
    let cayley = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let (a, b) = decode(x);
                    let (c, d) = decode(y);
                    // r^a f^b r^c f^d = r^(a ± c) f^(b+d)
                    let k = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                    k + n * ((b + d) % 2)
                })
                .collect()
        })
        .collect();
    let labels = (0..2 * n)
        .map(|x| {
            let (a, b) = decode(x);
            if b == 0 {
                format!("r{a}")
            } else {
                format!("r{a}f")
            }
        })
        .collect();
    FiniteGroup::from_cayley(cayley, Some(labels))
}

/// The symmetric group on `n ≤ 5` points; permutations in lexicographic order,
/// composed as functions: `(st)(x) = s(t(x))`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::InvalidOrder(n));
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        perms.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    let cayley =
        perms.iter().map(|s| perms.iter().map(|t| index(&t.iter().map(|&x| s[x]).collect())).collect()).collect();
    let labels = perms.iter().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")).collect();
    FiniteGroup::from_cayley(cayley, Some(labels))
}

/// A character of an abelian group. Values are stored together with their
/// exact phases `num/den` (value = exp(2πi·num/den)).
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    values: Vec<Complex64>,
    phases: Vec<(u64, u64)>,
}

impl Character {
    fn from_phases(phases: Vec<(u64, u64)>) -> Self {
        let values = phases.iter().map(|&(p, q)| Complex64::from_polar(1.0, 2.0 * PI * p as f64 / q as f64)).collect();
        Self { values, phases }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, s: usize) -> Complex64 {
        self.values[s]
    }

    pub fn is_trivial(&self) -> bool {
        self.phases.iter().all(|&(p, _)| p == 0)
    }

    /// Pointwise product (exact on phases).
    pub fn mul(&self, other: &Character) -> Character {
        let phases = self.phases.iter().zip(&other.phases).map(|(&a, &b)| add_phase(a, b)).collect();
        Character::from_phases(phases)
    }

    fn same(&self, other: &Character) -> bool {
        self.phases == other.phases
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduce((p, q): (u64, u64)) -> (u64, u64) {
    let p = p % q;
    if p == 0 {
        return (0, 1);
    }
    let g = gcd(p, q);
    (p / g, q / g)
}

fn add_phase(a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    let q = a.1 / gcd(a.1, b.1) * b.1;
    reduce((a.0 * (q / a.1) + b.0 * (q / b.1), q))
}

/// All characters of an abelian group, trivial character first.
///
/// Characters are extended one cyclic generator at a time: if `g^k` is the
/// first power of `g` in the current subgroup `H`, a character `χ` of `H`
/// extends in exactly `k` ways, by choosing a `k`-th root of `χ(g^k)`.
pub fn dual_group(g: &FiniteGroup) -> Result<Vec<Character>> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let n = g.order();
    let mut in_h = vec![false; n];
    in_h[0] = true;
    // partial characters: phases defined on H only
    let mut chars: Vec<Vec<(u64, u64)>> = vec![vec![(0, 1); n]];
    while let Some(gen) = (0..n).find(|&s| !in_h[s]) {
        let mut k = 1;
        let mut power = gen;
        while !in_h[power] {
            power = g.mul(power, gen);
            k += 1;
        }
        let h: Vec<usize> = (0..n).filter(|&s| in_h[s]).collect();
        let mut next = Vec::with_capacity(chars.len() * k);
        for chi in &chars {
            let (p, q) = chi[power];
            for m in 0..k as u64 {
                // w = exp(2πi (p/q + m)/k)
                let w = reduce((p + m * q, q * k as u64));
                let mut ext = chi.clone();
                let mut gj = 0;
                let mut wj = (0, 1);
                for _ in 0..k {
                    for &x in &h {
                        ext[g.mul(x, gj)] = add_phase(chi[x], wj);
                    }
                    gj = g.mul(gj, gen);
                    wj = add_phase(wj, w);
                }
                next.push(ext);
            }
        }
        for &x in &h {
            let mut gj = x;
            for _ in 0..k {
                in_h[gj] = true;
                gj = g.mul(gj, gen);
            }
        }
        chars = next;
    }
    Ok(chars.into_iter().map(Character::from_phases).collect())
}

/// The dual group as a `FiniteGroup` (index `i` is `chars[i]`, trivial at 0).
pub fn dual_group_table(chars: &[Character]) -> Result<FiniteGroup> {
    let n = chars.len();
    let mut cayley = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let prod = chars[a].mul(&chars[b]);
            cayley[a][b] = chars
                .iter()
                .position(|c| c.same(&prod))
                .ok_or_else(|| Error::InvalidGroup("characters not closed under products".into()))?;
        }
    }
    let labels = (0..n).map(|i| format!("chi{i}")).collect();
    FiniteGroup::from_cayley(cayley, Some(labels))
}

/// Returns a finite `C` with `|KC| < (1+ε)|C|`; for a finite group `C = G` always works.
pub fn folner_certificate(g: &FiniteGroup, k: &[usize], eps: f64) -> Result<Vec<usize>> {
    if k.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if let Some(&bad) = k.iter().find(|&&s| s >= g.order()) {
        return Err(Error::InvalidParameter(format!("element {bad} out of range")));
    }
    let c: Vec<usize> = g.elements().collect();
    debug_assert!(is_folner_set(g, k, &c, eps));
    Ok(c)
}

/// `|KC| < (1+ε)|C|`, compared as `|KC| - |C| < ε|C|` so the integer part is exact.
pub fn is_folner_set(g: &FiniteGroup, k: &[usize], c: &[usize], eps: f64) -> bool {
    if c.is_empty() {
        return false;
    }
    let kc = g.set_product(k, c).len();
    let excess = kc.saturating_sub(c.len());
    (excess as f64) < eps * c.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_constructors() {
        assert_eq!(cyclic(1).unwrap().order(), 1);
        assert_eq!(cyclic(2).unwrap().cayley(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(cyclic(4).unwrap().inv(1), 3);
        assert_eq!(cyclic(0), Err(Error::InvalidOrder(0)));
        assert!(dihedral(1).is_err());
        assert!(symmetric(6).is_err());
    }

    #[test]
    fn klein_is_self_inverse() {
        let z2 = cyclic(2).unwrap();
        let k = direct_product(&z2, &z2);
        assert!(k.elements().all(|s| k.inv(s) == s));
        assert!(k.check_axioms());
    }

    #[test]
    fn z2_times_z3_is_z6() {
        let p = direct_product(&cyclic(2).unwrap(), &cyclic(3).unwrap());
        let z6 = cyclic(6).unwrap();
        let phi: Vec<usize> = (0..6).map(|x| (3 * (x / 3) + 2 * (x % 3)) % 6).collect();
        assert!(p.is_isomorphism(&z6, &phi));
    }

    #[test]
    fn symmetric_and_dihedral() {
        let s3 = symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        let transpositions = s3.elements().filter(|&s| s != 0 && s3.inv(s) == s).count();
        assert_eq!(transpositions, 3);
        assert!(!s3.is_abelian());
        let d4 = dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.center().len(), 2);
        let s2 = symmetric(2).unwrap();
        assert!(s2.is_isomorphism(&cyclic(2).unwrap(), &[0, 1]));
        assert!(dihedral(2).unwrap().is_abelian());
    }

    #[test]
    fn duals() {
        let z2 = dual_group(&cyclic(2).unwrap()).unwrap();
        assert_eq!(z2.len(), 2);
        assert!(z2[0].is_trivial());
        assert!((z2[1].value(1) + 1.0).norm() < 1e-15);
        let z4 = dual_group(&cyclic(4).unwrap()).unwrap();
        for chi in &z4 {
            for v in chi.values() {
                assert!((v.powu(4) - 1.0).norm() < 1e-12);
            }
        }
        assert!(dual_group(&symmetric(3).unwrap()).is_err());
    }

    #[test]
    fn klein_orthogonality() {
        let z2 = cyclic(2).unwrap();
        let k = direct_product(&z2, &z2);
        let chars = dual_group(&k).unwrap();
        assert_eq!(chars.len(), 4);
        for a in &chars {
            assert!(a.values().iter().all(|v| v.im.abs() < 1e-15));
            for b in &chars {
                let s: Complex64 = (0..4).map(|x| a.value(x) * b.value(x).conj()).sum();
                let expected = if a == b { 4.0 } else { 0.0 };
                assert!((s - expected).norm() < 1e-12);
            }
        }
        assert!(dual_group_table(&chars).unwrap().check_axioms());
    }

    #[test]
    fn folner() {
        let z4 = cyclic(4).unwrap();
        assert_eq!(folner_certificate(&z4, &[1], 0.1).unwrap(), vec![0, 1, 2, 3]);
        let s3 = symmetric(3).unwrap();
        let all: Vec<usize> = s3.elements().collect();
        let c = folner_certificate(&s3, &all, 0.01).unwrap();
        assert!(is_folner_set(&s3, &all, &c, 0.01));
        assert_eq!(folner_certificate(&s3, &[], 0.5), Err(Error::EmptySet));
        let z8 = cyclic(8).unwrap();
        let c = folner_certificate(&z8, &[0], 1.0).unwrap();
        assert!(is_folner_set(&z8, &[0], &c, 1.0));
    }
}
