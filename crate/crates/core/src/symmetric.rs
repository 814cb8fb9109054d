//! The symmetrization map `πₙ`, its fibers, and the polynomial maps it
//! induces on symmetrized coordinates.
//!
//! Coordinate `k` of a [`SymPoint`] is the order-`k` elementary symmetric
//! polynomial and carries weight `k`: the weighted scaling by `λ` acts as
//! `(λs₁, λ²s₂, …, λⁿsₙ)`.
//!
//! `P_l` and `S_L` are evaluated through fibers: the point is lifted to its
//! root multiset, mapped there, and symmetrized again. Both constructions are
//! symmetric in the lifted coordinates, so the result does not depend on the
//! order of the fiber.

use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyroot::{expand_linear_factors, find_roots, MonicPoly, RootMultiset};

type Pairs = Vec<[f64; 2]>;

fn check_entries(entries: &[Complex64], what: &str) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::InvalidInput(format!("{what} must have at least one entry")));
    }
    if entries.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} has a non-finite entry")));
    }
    Ok(())
}

fn to_pairs(v: &[Complex64]) -> Pairs {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(p: Pairs) -> Vec<Complex64> {
    p.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()
}

/// A point of `ℂⁿ` in ordinary coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Pairs", try_from = "Pairs")]
pub struct CVec(Vec<Complex64>);

impl CVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        check_entries(&entries, "vector")?;
        Ok(Self(entries))
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Componentwise integer power `zˡ`.
    pub fn powu(&self, l: u32) -> Self {
        Self(self.0.iter().map(|z| z.powu(l)).collect())
    }

    /// `tz`.
    pub fn scale(&self, t: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * t).collect())
    }

    /// Componentwise product `zw`.
    pub fn hadamard(&self, w: &CVec) -> Self {
        Self(self.0.iter().zip(&w.0).map(|(a, b)| a * b).collect())
    }

    /// `z_σ = (z_{σ(1)}, …, z_{σ(n)})`, with 0-based images.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        Self(sigma.iter().map(|&j| self.0[j]).collect())
    }

    pub fn max_abs_diff(&self, other: &CVec) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

impl Index<usize> for CVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<CVec> for Pairs {
    fn from(v: CVec) -> Self {
        to_pairs(&v.0)
    }
}

impl TryFrom<Pairs> for CVec {
    type Error = Error;
    fn try_from(p: Pairs) -> Result<Self> {
        CVec::new(from_pairs(p))
    }
}

impl From<RootMultiset> for CVec {
    fn from(r: RootMultiset) -> Self {
        CVec(r.into_vec())
    }
}

/// A point in symmetrized coordinates `s = πₙ(z)`, weights `(1, 2, …, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Pairs", try_from = "Pairs")]
pub struct SymPoint(Vec<Complex64>);

impl SymPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        check_entries(&coords, "symmetrized point")?;
        Ok(Self(coords))
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// `λ∘s = (λs₁, λ²s₂, …, λⁿsₙ)`.
    pub fn weighted_scale(&self, lambda: Complex64) -> Self {
        let mut power = Complex64::new(1.0, 0.0);
        Self(
            self.0
                .iter()
                .map(|s| {
                    power *= lambda;
                    s * power
                })
                .collect(),
        )
    }

    /// Weighted scaling by a real factor, `(λ^{k₁}s₁, …)` for arbitrary
    /// positive weights.
    pub fn scale_with_weights(&self, lambda: f64, weights: &[u32]) -> Self {
        Self(
            self.0
                .iter()
                .zip(weights)
                .map(|(s, &k)| s * lambda.powi(k as i32))
                .collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &SymPoint) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for SymPoint {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<SymPoint> for Pairs {
    fn from(v: SymPoint) -> Self {
        to_pairs(&v.0)
    }
}

impl TryFrom<Pairs> for SymPoint {
    type Error = Error;
    fn try_from(p: Pairs) -> Result<Self> {
        SymPoint::new(from_pairs(p))
    }
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Elementary symmetric polynomials `(e₁, …, eₙ)` of `values`.
pub fn elementary_symmetric(values: &[Complex64]) -> Vec<Complex64> {
    expand_linear_factors(values)
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { -c } else { c })
        .collect()
}

pub fn symmetrize(z: &CVec) -> SymPoint {
    SymPoint(elementary_symmetric(z.entries()))
}

/// The characteristic polynomial `tⁿ − s₁tⁿ⁻¹ + s₂tⁿ⁻² − … + (−1)ⁿsₙ`.
pub fn characteristic_poly(s: &SymPoint) -> MonicPoly {
    let coeffs = s
        .coords()
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { -c } else { c })
        .collect();
    MonicPoly::new(coeffs).expect("symmetrized points are finite and non-empty")
}

/// The root multiset `{w₁, …, wₙ}` with `πₙ(w) = s`; every preimage of `s`
/// is an ordering of it.
pub fn fiber(s: &SymPoint) -> Result<RootMultiset> {
    find_roots(&characteristic_poly(s))
}

/// `P_l(s)`, the unique polynomial map with `πₙ(zˡ) = P_l(πₙ(z))`.
pub fn power_map(s: &SymPoint, l: u32) -> Result<SymPoint> {
    if l == 0 {
        return Err(Error::InvalidInput("power map exponent must be >= 1".into()));
    }
    if l == 1 {
        return Ok(s.clone());
    }
    let w = CVec::from(fiber(s)?);
    Ok(symmetrize(&w.powu(l)))
}

/// The affine map `Lⱼ(z) = A·Σzₖ + B·zⱼ + C`.
pub fn linear_map(z: &CVec, a: Complex64, b: Complex64, c: Complex64) -> CVec {
    let total: Complex64 = z.entries().iter().sum();
    CVec(z.entries().iter().map(|&zj| a * total + b * zj + c).collect())
}

/// `S_L(s)`, the polynomial map with `πₙ ∘ L = S_L ∘ πₙ`.
pub fn linear_sym_map(s: &SymPoint, a: Complex64, b: Complex64, c: Complex64) -> Result<SymPoint> {
    let w = CVec::from(fiber(s)?);
    Ok(symmetrize(&linear_map(&w, a, b, c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetrize_examples() {
        let s = symmetrize(&CVec::from_reals(&[2.0, 3.0]).unwrap());
        assert_eq!(s.coords(), &[c(5.0, 0.0), c(6.0, 0.0)]);
        let s = symmetrize(&CVec::zeros(4));
        assert_eq!(s, SymPoint::zeros(4));
        let s = symmetrize(&CVec::from_reals(&[1.0, 1.0, 1.0]).unwrap());
        assert_eq!(s.coords(), &[c(3.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn fiber_examples() {
        let f = fiber(&SymPoint::from_reals(&[5.0, 6.0]).unwrap()).unwrap();
        assert!(CVec::from(f).max_abs_diff(&CVec::from_reals(&[2.0, 3.0]).unwrap()) < 1e-12);
        let f = fiber(&SymPoint::zeros(3)).unwrap();
        assert_eq!(f.roots(), &[c(0.0, 0.0); 3]);
        let f = fiber(&SymPoint::from_reals(&[2.0, 1.0]).unwrap()).unwrap();
        assert!(CVec::from(f).max_abs_diff(&CVec::from_reals(&[1.0, 1.0]).unwrap()) < 1e-7);
    }

    #[test]
    fn power_map_examples() {
        let s = SymPoint::from_reals(&[5.0, 6.0]).unwrap();
        let p2 = power_map(&s, 2).unwrap();
        assert!(p2.max_abs_diff(&SymPoint::from_reals(&[13.0, 36.0]).unwrap()) < 1e-11);
        assert_eq!(power_map(&s, 1).unwrap(), s);
        assert_eq!(power_map(&SymPoint::zeros(3), 4).unwrap(), SymPoint::zeros(3));
        assert!(power_map(&s, 0).is_err());
    }

    #[test]
    fn power_map_matches_closed_form_for_n2() {
        // P₂(s₁, s₂) = (s₁² − 2s₂, s₂²)
        let s = SymPoint::new(vec![c(0.3, -0.7), c(-0.2, 0.4)]).unwrap();
        let (s1, s2) = (s[0], s[1]);
        let expected = SymPoint::new(vec![s1 * s1 - 2.0 * s2, s2 * s2]).unwrap();
        assert!(power_map(&s, 2).unwrap().max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn linear_sym_map_examples() {
        let s = SymPoint::new(vec![c(0.1, 0.2), c(-0.3, 0.0), c(0.05, 0.5)]).unwrap();
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let id = linear_sym_map(&s, zero, one, zero).unwrap();
        assert!(id.max_abs_diff(&s) < 1e-12);

        let k = c(0.4, -0.1);
        let constant = linear_sym_map(&s, zero, zero, k).unwrap();
        let expected = SymPoint::new(vec![3.0 * k, 3.0 * k * k, k * k * k]).unwrap();
        assert!(constant.max_abs_diff(&expected) < 1e-14);

        let sum = linear_sym_map(&SymPoint::from_reals(&[5.0, 6.0]).unwrap(), one, zero, zero)
            .unwrap();
        assert!(sum.max_abs_diff(&SymPoint::from_reals(&[10.0, 25.0]).unwrap()) < 1e-12);
    }

    #[test]
    fn weighted_scale_uses_increasing_powers() {
        let s = SymPoint::from_reals(&[5.0, 6.0]).unwrap();
        let t = s.weighted_scale(c(0.1, 0.0));
        assert!(t.max_abs_diff(&SymPoint::from_reals(&[0.5, 0.06]).unwrap()) < 1e-15);
    }

    #[test]
    fn json_uses_pairs() {
        let s = SymPoint::new(vec![c(1.0, -2.0), c(0.5, 0.0)]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "[[1.0,-2.0],[0.5,0.0]]");
        assert_eq!(serde_json::from_str::<SymPoint>(&j).unwrap(), s);
        assert!(serde_json::from_str::<SymPoint>("[]").is_err());
    }
}
