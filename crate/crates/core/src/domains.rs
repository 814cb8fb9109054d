//! Generalized complex ellipsoids `𝔹_{p,n} = {Σ|zⱼ|^{2p} < 1}` and their
//! symmetrized images `𝔼_{p,n} = πₙ(𝔹_{p,n})`: gauges, membership and
//! seeded samplers.
//!
//! The weighted Minkowski functional of `𝔼_{p,n}` is the ball gauge of the
//! fiber. The gauge is symmetric in the fiber entries, so every ordering of
//! the fiber gives the same value and one evaluation suffices.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmetric::{fiber, symmetrize, CVec, SymPoint};

/// Iteration cap for each direction of the bracketing search in [`mu_balanced`].
pub const BRACKET_STEPS: usize = 60;

/// Exponent `p` (exact, positive) and dimension `n ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ParamsJson", into = "ParamsJson")]
pub struct EllipsoidParams {
    p: Rational64,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    #[serde(with = "crate::exact::rational_str")]
    p: Rational64,
    n: usize,
}

impl TryFrom<ParamsJson> for EllipsoidParams {
    type Error = Error;
    fn try_from(j: ParamsJson) -> Result<Self> {
        EllipsoidParams::new(j.p, j.n)
    }
}

impl From<EllipsoidParams> for ParamsJson {
    fn from(e: EllipsoidParams) -> Self {
        ParamsJson { p: e.p, n: e.n }
    }
}

impl EllipsoidParams {
    pub fn new(p: Rational64, n: usize) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::InvalidInput(format!("exponent p must be > 0, got {p}")));
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension n must be >= 2, got {n}")));
        }
        Ok(Self { p, n })
    }

    /// Shorthand for `p = num/den`.
    pub fn with_ratio(num: i64, den: i64, n: usize) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Self::new(Rational64::new(num, den), n)
    }

    pub fn p(&self) -> Rational64 {
        self.p
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64().expect("ratio of i64 is representable")
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `(Σ|zⱼ|^{2p})^{1/(2p)}`, scaled by the largest modulus so that the
/// intermediate powers neither overflow nor underflow.
pub fn ball_gauge(z: &CVec, p: f64) -> f64 {
    gauge_of(z.entries(), p)
}

fn gauge_of(z: &[Complex64], p: f64) -> f64 {
    let top = z.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let e = 2.0 * p;
    let sum: f64 = z.iter().map(|w| (w.norm() / top).powf(e)).sum();
    top * sum.powf(1.0 / e)
}

fn check_dim(s: &SymPoint, params: &EllipsoidParams) -> Result<()> {
    if s.dim() != params.n() {
        return Err(Error::InvalidInput(format!(
            "point has dimension {} but the domain has n = {}",
            s.dim(),
            params.n()
        )));
    }
    Ok(())
}

/// `μ_{𝔼_{p,n}}(s)`; `s ∈ 𝔼_{p,n}` iff the result is `< 1`.
pub fn minkowski_sym(s: &SymPoint, params: &EllipsoidParams) -> Result<f64> {
    check_dim(s, params)?;
    let w = fiber(s)?;
    Ok(gauge_of(w.roots(), params.p_f64()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub region: Region,
    pub mu: f64,
    pub band: f64,
}

/// Interior if `μ < 1 − band`, Boundary if `|μ − 1| ≤ band`, else Exterior.
pub fn classify(s: &SymPoint, params: &EllipsoidParams, band: f64) -> Result<Classification> {
    if !(band > 0.0 && band < 0.1) {
        return Err(Error::InvalidInput(format!("band must lie in (0, 0.1), got {band}")));
    }
    let mu = minkowski_sym(s, params)?;
    let region = if (mu - 1.0).abs() <= band {
        Region::Boundary
    } else if mu < 1.0 {
        Region::Interior
    } else {
        Region::Exterior
    };
    Ok(Classification { region, mu, band })
}

/// Generalized Minkowski functional of a weighted-balanced domain given
/// only through a membership oracle:
/// `inf{λ > 0 : (λ^{-k₁}s₁, …, λ^{-kₙ}sₙ) ∈ D}`.
///
/// Starts at `λ = 1`, doubles or halves (at most [`BRACKET_STEPS`] times)
/// until the membership flips, then bisects to width `tol`.
pub fn mu_balanced<F>(member: F, weights: &[u32], s: &SymPoint, tol: f64) -> Result<f64>
where
    F: Fn(&SymPoint) -> bool,
{
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::InvalidInput(format!("tol must lie in (0, 1e-2), got {tol}")));
    }
    if weights.len() != s.dim() || weights.contains(&0) {
        return Err(Error::InvalidInput(
            "weights must be positive and match the point dimension".into(),
        ));
    }
    if s.coords().iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let inside = |lambda: f64| member(&s.scale_with_weights(1.0 / lambda, weights));

    // Invariant after bracketing: inside(hi) && !inside(lo).
    let (mut lo, mut hi) = if inside(1.0) {
        let mut hi = 1.0;
        let mut steps = 0;
        loop {
            let lo = hi / 2.0;
            if !inside(lo) {
                break (lo, hi);
            }
            hi = lo;
            steps += 1;
            if steps >= BRACKET_STEPS {
                // μ < 2⁻⁶⁰: zero at any admissible tolerance.
                return Ok(0.0);
            }
        }
    } else {
        let mut lo = 1.0;
        let mut steps = 0;
        loop {
            let hi = lo * 2.0;
            if inside(hi) {
                break (lo, hi);
            }
            lo = hi;
            steps += 1;
            if steps >= BRACKET_STEPS {
                return Err(Error::Bracket {
                    steps,
                    reason: "oracle never accepted the scaled point".into(),
                });
            }
        }
    };
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Adjacent floats: the bracket cannot shrink further.
            break;
        }
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Membership oracle for `𝔼_{p,n}`.
pub fn ellipsoid_member(params: EllipsoidParams) -> impl Fn(&SymPoint) -> bool {
    move |s| matches!(minkowski_sym(s, &params), Ok(mu) if mu < 1.0)
}

/// Weights `(1, 2, …, n)` of symmetrized coordinates.
pub fn sym_weights(n: usize) -> Vec<u32> {
    (1..=n as u32).collect()
}

fn unit_sphere_direction(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let v = CVec::new(v).expect("gaussian samples are finite");
        let norm = v.norm();
        if norm > 1e-12 {
            return v.scale(Complex64::new(1.0 / norm, 0.0));
        }
    }
}

/// The boundary point of `𝔹_{p,n}` in the direction of `w`.
pub fn boundary_point(direction: &CVec, p: f64) -> Result<CVec> {
    let g = ball_gauge(direction, p);
    if g == 0.0 {
        return Err(Error::InvalidInput("direction must be nonzero".into()));
    }
    Ok(direction.scale(Complex64::new(1.0 / g, 0.0)))
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be >= 1".into()));
    }
    Ok(())
}

/// Seeded interior samples: a Gaussian direction normalized to the
/// `p`-gauge sphere, scaled by a radius below `0.995`, then symmetrized.
pub fn sample_interior(params: &EllipsoidParams, seed: u64, count: usize) -> Result<Vec<SymPoint>> {
    check_count(count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n();
    let p = params.p_f64();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let d = unit_sphere_direction(&mut rng, n);
        let u: f64 = rng.random();
        let radius = 0.995 * u.powf(1.0 / (2.0 * n as f64));
        let w = boundary_point(&d, p)?.scale(Complex64::new(radius, 0.0));
        out.push(symmetrize(&w));
    }
    Ok(out)
}

/// Seeded boundary samples: uniform direction on the Euclidean sphere,
/// rescaled onto `∂𝔹_{p,n}`, then symmetrized. The distribution is not
/// uniform in any surface measure.
pub fn sample_boundary(params: &EllipsoidParams, seed: u64, count: usize) -> Result<Vec<SymPoint>> {
    check_count(count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = params.p_f64();
    (0..count)
        .map(|_| {
            let d = unit_sphere_direction(&mut rng, params.n());
            Ok(symmetrize(&boundary_point(&d, p)?))
        })
        .collect()
}
