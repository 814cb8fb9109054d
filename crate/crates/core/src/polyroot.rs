//! Monic univariate polynomials over the complex numbers: root finding
//! (Aberth–Ehrlich simultaneous iteration with Newton polishing) and the
//! inverse Vieta expansion.
//!
//! A [`MonicPoly`] of degree `n` stores `(c₁, …, cₙ)` for
//! `tⁿ + c₁tⁿ⁻¹ + … + cₙ`. Roots are always returned as a [`RootMultiset`]
//! in canonical order, with multiple roots repeated.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Residual bound accepted after polishing: `|p(r)| ≤ TOL_RESID · (1 + max|cᵢ|)`.
pub const TOL_RESID: f64 = 1e-10;
/// Roots closer than this are merged in [`RootMultiset::distinct`].
pub const TOL_CLUSTER: f64 = 1e-7;
/// Grid the coordinates are rounded to before the canonical sort.
pub const ORDER_ROUNDING: f64 = 1e-9;
/// Iteration budget of the simultaneous iteration.
pub const MAX_ITER: usize = 500;

const POLISH_STEPS: usize = 6;
/// Linkage radii (relative to `1 + max|r|`) of the cluster refinement passes.
const CLUSTER_RADII: [f64; 3] = [5e-2, 1e-3, 1e-5];
const REFINE_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly {
    coeffs: Vec<Complex64>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("monic polynomial needs degree >= 1".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite polynomial coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * t + c)
    }

    /// Value and first derivative by a doubled Horner scheme.
    pub fn eval_with_derivative(&self, t: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    /// `Σ |cₖ| |t|^{n-k}` with `c₀ = 1`; the magnitude scale of rounding
    /// errors committed by [`MonicPoly::eval`].
    fn eval_scale(&self, t: Complex64) -> f64 {
        let r = t.norm();
        self.coeffs.iter().fold(1.0, |acc, c| acc * r + c.norm())
    }

    /// Residual bound used by [`find_roots`] at a candidate root.
    fn residual_ok(&self, t: Complex64, residual: f64) -> bool {
        residual <= TOL_RESID * (1.0 + self.max_coeff())
            || residual <= 64.0 * f64::EPSILON * self.eval_scale(t)
    }
}

/// Roots of a monic polynomial in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct RootMultiset {
    roots: Vec<Complex64>,
}

impl RootMultiset {
    pub fn new(mut roots: Vec<Complex64>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidInput("root multiset must be non-empty".into()));
        }
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidInput("non-finite root".into()));
        }
        canonical_sort(&mut roots);
        Ok(Self { roots })
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.roots
    }

    /// Deduplicated view: clusters of roots within `tol` of each other,
    /// each reported once with its multiplicity. The multiset itself is
    /// never altered.
    pub fn distinct(&self, tol: f64) -> Vec<(Complex64, usize)> {
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        for &r in &self.roots {
            match clusters.iter_mut().find(|(c, _)| (*c - r).norm() <= tol) {
                Some((c, k)) => {
                    *c = (*c * *k as f64 + r) / (*k as f64 + 1.0);
                    *k += 1;
                }
                None => clusters.push((r, 1)),
            }
        }
        clusters
    }

    /// Minimum pairwise distance between roots (infinite for a single root).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                best = best.min((a - b).norm());
            }
        }
        best
    }
}

fn order_key(z: &Complex64) -> (f64, f64) {
    // `+ 0.0` folds -0.0 into 0.0 so that total_cmp agrees with ==.
    (
        (z.re / ORDER_ROUNDING).round() + 0.0,
        (z.im / ORDER_ROUNDING).round() + 0.0,
    )
}

fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    let (ka, kb) = (order_key(a), order_key(b));
    ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
}

pub(crate) fn canonical_sort(values: &mut [Complex64]) {
    values.sort_by(canonical_cmp);
}

/// Coefficients `(c₁, …, cₙ)` of `∏ (t − rⱼ)`, built one linear factor at a
/// time. `cₖ = (−1)ᵏ eₖ(r)`.
pub(crate) fn expand_linear_factors(roots: &[Complex64]) -> Vec<Complex64> {
    // acc[k] holds the coefficient of t^{deg-k}; acc[0] = 1 implicitly.
    let mut acc = vec![Complex64::new(0.0, 0.0); roots.len()];
    for (deg, &r) in roots.iter().enumerate() {
        for k in (1..=deg + 1).rev() {
            let prev = if k == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                acc[k - 2]
            };
            acc[k - 1] -= r * prev;
        }
    }
    acc
}

pub fn coeffs_from_roots(roots: &RootMultiset) -> MonicPoly {
    MonicPoly {
        coeffs: expand_linear_factors(roots.roots()),
    }
}

/// Finds all roots of `poly`.
///
/// Exactly vanishing trailing coefficients contribute exact zero roots.
/// The remaining factor is solved by Aberth–Ehrlich iteration seeded on the
/// circle of radius `1 + max|cᵢ|`, then every root gets a few Newton steps
/// that are kept only when they lower the residual. Each root must satisfy
/// `|p(r)| ≤ TOL_RESID·(1 + max|cᵢ|)` or sit at the rounding floor of the
/// evaluation; otherwise [`Error::NonConvergence`] is returned.
pub fn find_roots(poly: &MonicPoly) -> Result<RootMultiset> {
    let n = poly.degree();
    let zeros = poly
        .coeffs
        .iter()
        .rev()
        .take_while(|c| **c == Complex64::new(0.0, 0.0))
        .count();
    let reduced = MonicPoly {
        coeffs: poly.coeffs[..n - zeros].to_vec(),
    };

    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    match reduced.degree() {
        0 => {}
        1 => roots.push(-reduced.coeffs[0]),
        _ => {
            let mut found = aberth(&reduced);
            for r in found.iter_mut() {
                polish(&reduced, r);
            }
            refine_clusters(&reduced, &mut found);
            roots.extend(found);
        }
    }

    let mut worst = 0.0f64;
    let mut failed = false;
    for &r in &roots {
        let res = poly.eval(r).norm();
        worst = worst.max(res);
        if !r.is_finite() || !poly.residual_ok(r, res) {
            failed = true;
        }
    }
    if failed {
        return Err(Error::NonConvergence {
            best_residual: worst,
        });
    }
    RootMultiset::new(roots)
}

fn aberth(poly: &MonicPoly) -> Vec<Complex64> {
    let d = poly.degree();
    let radius = 1.0 + poly.max_coeff();
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / d as f64 + 0.4))
        .collect();

    for _ in 0..MAX_ITER {
        let mut settled = true;
        for i in 0..d {
            let (p, dp) = poly.eval_with_derivative(z[i]);
            if p.norm() <= f64::EPSILON * poly.eval_scale(z[i]) {
                continue;
            }
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = dp - p * repulsion;
            if denom.norm() == 0.0 || !denom.is_finite() {
                // Nudge off a critical configuration.
                let nudge = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += nudge;
                settled = false;
                continue;
            }
            let step = p / denom;
            z[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                settled = false;
            }
        }
        if settled {
            break;
        }
    }
    z
}

/// Coefficients of `p(c + y)` in `y`.
fn taylor_shift(poly: &MonicPoly, c: Complex64) -> MonicPoly {
    let n = poly.degree();
    let mut a: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0))
        .chain(poly.coeffs.iter().copied())
        .collect();
    for k in 0..n {
        for j in 1..=n - k {
            let prev = a[j - 1];
            a[j] += c * prev;
        }
    }
    MonicPoly { coeffs: a.split_off(1) }
}

fn reconstruction_error(poly: &MonicPoly, roots: &[Complex64]) -> f64 {
    expand_linear_factors(roots)
        .iter()
        .zip(&poly.coeffs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Groups of at least two roots linked by gaps below `radius`.
fn clusters(roots: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..roots.len()).collect();
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < radius {
                let (from, to) = (label[i], label[j]);
                label.iter_mut().filter(|l| **l == from).for_each(|l| *l = to);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for root in 0..roots.len() {
        let members: Vec<usize> = (0..roots.len()).filter(|&i| label[i] == root).collect();
        if members.len() > 1 {
            groups.push(members);
        }
    }
    groups
}

/// Near a cluster, `p` evaluated in the original variable is dominated by
/// rounding, so the cluster is only located to `ε^{1/k}` and its symmetric
/// functions can be far off. Re-running the simultaneous iteration on the
/// polynomial shifted to the cluster centroid, with the other roots held
/// fixed, makes the cluster consistent with the coefficients again.
fn refine_clusters(poly: &MonicPoly, roots: &mut [Complex64]) {
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    for radius in CLUSTER_RADII {
        for members in clusters(roots, radius * scale) {
            refine_cluster(poly, roots, &members);
        }
    }
}

fn refine_cluster(poly: &MonicPoly, roots: &mut [Complex64], members: &[usize]) {
    let before = reconstruction_error(poly, roots);
    let c = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
    let shifted = taylor_shift(poly, c);
    let mut y: Vec<Complex64> = roots.iter().map(|r| r - c).collect();
    for _ in 0..REFINE_STEPS {
        let mut moved = false;
        for &i in members {
            let (p, dp) = shifted.eval_with_derivative(y[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let repulsion: Complex64 = (0..y.len())
                .filter(|&j| j != i && y[j] != y[i])
                .map(|j| (y[i] - y[j]).inv())
                .sum();
            let step = p / (dp - p * repulsion);
            if !step.is_finite() {
                continue;
            }
            y[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * y[i].norm() {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let candidate: Vec<Complex64> = roots
        .iter()
        .enumerate()
        .map(|(i, &r)| if members.contains(&i) { c + y[i] } else { r })
        .collect();
    if candidate.iter().all(|r| r.is_finite()) && reconstruction_error(poly, &candidate) <= before {
        roots.copy_from_slice(&candidate);
    }
}

fn polish(poly: &MonicPoly, root: &mut Complex64) {
    let mut best = poly.eval(*root).norm();
    for _ in 0..POLISH_STEPS {
        if best == 0.0 {
            return;
        }
        let (p, dp) = poly.eval_with_derivative(*root);
        if dp.norm() == 0.0 {
            return;
        }
        let candidate = *root - p / dp;
        let res = poly.eval(candidate).norm();
        if res < best && candidate.is_finite() {
            *root = candidate;
            best = res;
        } else {
            return;
        }
    }
}
