//! Proper holomorphic maps `𝔼_{p,n} → 𝔼_{q,n}`: the existence rule,
//! the two chain shapes, evaluation, and numeric verification.
//!
//! A map exists iff `p/q` is a positive integer `k`. Every such map is
//! `P_k ∘ ψ` with `ψ` an automorphism of the source, except for `n = 2`,
//! `p = 1`, where `P_m ∘ φ_III ∘ P_2 ∘ φ_II` also occurs.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automorph::{ell_aut_eval, ell_aut_inverse, BallAutomorphism, EllipsoidAutomorphism, PhiIIParams};
use crate::domains::{minkowski_sym, sample_boundary, sample_interior, EllipsoidParams};
use crate::error::{Error, Result};
use crate::exact::{positive_integer, reciprocal_integer, Turn};
use crate::symmetric::{fiber, power_map, symmetrize, CVec, SymPoint};

/// Slack allowed on `μ_src ≤ 1` for inputs of [`eval_proper`].
pub const SOURCE_SLACK: f64 = 1e-9;
/// Forward residual accepted for a claimed preimage.
pub const PREIMAGE_TOL: f64 = 1e-8;
/// Default dedupe tolerance for [`count_preimages`].
pub const DEDUPE_TOL: f64 = 1e-7;
/// Pass threshold of [`verify_commuting`].
pub const COMMUTING_TOL: f64 = 1e-8;
/// `ε` of the compactness surrogate in [`verify_boundary`].
pub const COMPACTNESS_EPS: f64 = 1e-3;

/// `true` iff a proper holomorphic map `𝔼_{p,n} → 𝔼_{q,n}` exists, i.e.
/// `p/q ∈ ℕ`. Decided in exact arithmetic; non-positive input gives `false`.
pub fn exists_proper(p: Rational64, q: Rational64) -> bool {
    if p <= Rational64::zero() || q <= Rational64::zero() {
        return false;
    }
    positive_integer(&(p / q)).is_some()
}

/// One step of a chain, in order of application.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainStep {
    Aut(EllipsoidAutomorphism),
    Power(u32),
}

/// A holomorphic map between symmetrized ellipsoids of equal dimension.
pub trait SymMap {
    fn source(&self) -> EllipsoidParams;
    fn target(&self) -> EllipsoidParams;
    fn apply(&self, s: &SymPoint) -> Result<SymPoint>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
enum RawSpec {
    Standard {
        k: u32,
        psi: EllipsoidAutomorphism,
        src: EllipsoidParams,
        dst: EllipsoidParams,
    },
    Special {
        m: u32,
        zeta_iii: Turn,
        phi2: PhiIIParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        src: Option<EllipsoidParams>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dst: Option<EllipsoidParams>,
    },
}

/// `Standard`: `P_k ∘ ψ`. `Special`: `P_m ∘ φ_III(ζ) ∘ P_2 ∘ φ_II` from
/// `𝔼_{1,2}` to `𝔼_{1/(2m),2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ProperMapSpec(RawSpec);

/// Borrowed view of a [`ProperMapSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProperMapKind<'a> {
    Standard { k: u32, psi: &'a EllipsoidAutomorphism },
    Special { m: u32, zeta_iii: Turn, phi2: &'a PhiIIParams },
}

fn special_params(m: u32) -> Result<(EllipsoidParams, EllipsoidParams)> {
    let den = 2 * i64::from(m);
    Ok((EllipsoidParams::with_ratio(1, 1, 2)?, EllipsoidParams::with_ratio(1, den, 2)?))
}

impl TryFrom<RawSpec> for ProperMapSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw {
            RawSpec::Standard { k, psi, src, dst } => {
                if k == 0 || src.n() != dst.n() || src.p() != dst.p() * Rational64::from(i64::from(k)) {
                    return Err(Error::InvalidInput(format!(
                        "k = {k} does not equal src.p / dst.p with matching n"
                    )));
                }
                if psi.params() != src {
                    return Err(Error::InvalidInput("psi must be an automorphism of the source".into()));
                }
                Ok(Self(RawSpec::Standard { k, psi, src, dst }))
            }
            RawSpec::Special {
                m,
                zeta_iii,
                phi2,
                src,
                dst,
            } => {
                if m == 0 {
                    return Err(Error::InvalidInput("m must be >= 1".into()));
                }
                phi2.validate(2)?;
                let (s, d) = special_params(m)?;
                if src.is_some_and(|x| x != s) || dst.is_some_and(|x| x != d) {
                    return Err(Error::InvalidInput(format!(
                        "the special chain runs from E_(1,2) to E_(1/{},2)",
                        2 * m
                    )));
                }
                Ok(Self(RawSpec::Special {
                    m,
                    zeta_iii,
                    phi2,
                    src: Some(s),
                    dst: Some(d),
                }))
            }
        }
    }
}

impl From<ProperMapSpec> for RawSpec {
    fn from(f: ProperMapSpec) -> Self {
        f.0
    }
}

/// `P_{p/q} ∘ ψ`; fails unless `p/q ∈ ℕ` and `ψ` acts on `𝔼_{p,n}`.
pub fn build_standard(p: Rational64, q: Rational64, n: usize, psi: EllipsoidAutomorphism) -> Result<ProperMapSpec> {
    if !exists_proper(p, q) {
        return Err(Error::InvalidInput(format!(
            "no proper map: p/q = {} is not a positive integer",
            crate::exact::format_rational(&(p / q))
        )));
    }
    let k = positive_integer(&(p / q)).expect("checked above");
    let src = EllipsoidParams::new(p, n)?;
    let dst = EllipsoidParams::new(q, n)?;
    ProperMapSpec::try_from(RawSpec::Standard { k, psi, src, dst })
}

/// `P_m ∘ φ_III(ζ_III) ∘ P_2 ∘ φ_II(φ₂)`.
pub fn build_special(m: u32, zeta_iii: Turn, phi2: PhiIIParams) -> Result<ProperMapSpec> {
    ProperMapSpec::try_from(RawSpec::Special {
        m,
        zeta_iii,
        phi2,
        src: None,
        dst: None,
    })
}

impl ProperMapSpec {
    pub fn kind(&self) -> ProperMapKind<'_> {
        match &self.0 {
            RawSpec::Standard { k, psi, .. } => ProperMapKind::Standard { k: *k, psi },
            RawSpec::Special { m, zeta_iii, phi2, .. } => ProperMapKind::Special {
                m: *m,
                zeta_iii: *zeta_iii,
                phi2,
            },
        }
    }

    /// The steps in order of application (right to left in the formula).
    pub fn chain(&self) -> Vec<ChainStep> {
        match &self.0 {
            RawSpec::Standard { k, psi, .. } => vec![ChainStep::Aut(psi.clone()), ChainStep::Power(*k)],
            RawSpec::Special { m, zeta_iii, phi2, .. } => vec![
                ChainStep::Aut(EllipsoidAutomorphism::phi_ii(*phi2, 2).expect("validated")),
                ChainStep::Power(2),
                ChainStep::Aut(EllipsoidAutomorphism::phi_iii(*zeta_iii)),
                ChainStep::Power(*m),
            ],
        }
    }

    /// Total `∏ lⁿ` over the power steps.
    pub fn expected_multiplicity(&self) -> u64 {
        let n = self.source().n() as u32;
        self.chain()
            .iter()
            .map(|step| match step {
                ChainStep::Power(l) => u64::from(*l).pow(n),
                ChainStep::Aut(_) => 1,
            })
            .product()
    }
}

impl SymMap for ProperMapSpec {
    fn source(&self) -> EllipsoidParams {
        match &self.0 {
            RawSpec::Standard { src, .. } => *src,
            RawSpec::Special { src, .. } => src.expect("filled on construction"),
        }
    }

    fn target(&self) -> EllipsoidParams {
        match &self.0 {
            RawSpec::Standard { dst, .. } => *dst,
            RawSpec::Special { dst, .. } => dst.expect("filled on construction"),
        }
    }

    fn apply(&self, s: &SymPoint) -> Result<SymPoint> {
        eval_proper(self, s)
    }
}

fn apply_step(step: &ChainStep, s: &SymPoint) -> Result<SymPoint> {
    match step {
        ChainStep::Aut(psi) => ell_aut_eval(psi, s),
        ChainStep::Power(l) => power_map(s, *l),
    }
}

/// Evaluates the chain at `s`, which must lie in the closed source domain.
pub fn eval_proper(f: &ProperMapSpec, s: &SymPoint) -> Result<SymPoint> {
    let mu = minkowski_sym(s, &f.source())?;
    if mu > 1.0 + SOURCE_SLACK {
        return Err(Error::Domain(format!("point outside the source domain (mu = {mu})")));
    }
    f.chain().iter().try_fold(s.clone(), |acc, step| apply_step(step, &acc))
}

/// `s ↦ 2·P_k(s)`: a holomorphic map between the same domains as `P_k`
/// that is not proper (it leaves the target). Used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonProperControl {
    pub k: u32,
    pub src: EllipsoidParams,
}

impl NonProperControl {
    pub fn new(k: u32, src: EllipsoidParams) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be >= 1".into()));
        }
        Ok(Self { k, src })
    }
}

impl SymMap for NonProperControl {
    fn source(&self) -> EllipsoidParams {
        self.src
    }

    fn target(&self) -> EllipsoidParams {
        EllipsoidParams::new(self.src.p() / Rational64::from(i64::from(self.k)), self.src.n())
            .expect("positive p")
    }

    fn apply(&self, s: &SymPoint) -> Result<SymPoint> {
        let t = power_map(s, self.k)?;
        SymPoint::new(t.coords().iter().map(|z| z * 2.0).collect())
    }
}

/// One named check of a [`VerificationReport`]. `tolerance` is `None` for
/// quantities that are reported but not asserted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: Option<f64>,
    /// Samples whose evaluation raised an error.
    pub errors: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub pass: bool,
    pub seed: u64,
}

impl VerificationReport {
    fn new(checks: Vec<Check>, seed: u64) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { checks, pass, seed }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Max of `residual` over `points`, counting evaluation errors.
fn sweep<F>(points: &[SymPoint], residual: F) -> (f64, usize)
where
    F: Fn(&SymPoint) -> Result<f64>,
{
    points.iter().fold((0.0, 0), |(worst, errors), s| match residual(s) {
        Ok(r) if r.is_finite() => (worst.max(r), errors),
        _ => (worst, errors + 1),
    })
}

/// Numeric shadow of properness:
///
/// * `boundary_to_boundary`: boundary samples land on `μ_dst = 1` within `tol`;
/// * `interior_to_interior`: interior samples land at `μ_dst < 1`
///   (the residual is the largest `μ_dst` seen);
/// * `compactness`: points with `μ_src = 1 − ε` land at `μ_dst ≥ 1 − δ`;
///   `δ` is reported, not asserted.
pub fn verify_boundary<F: SymMap + ?Sized>(f: &F, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    let src = f.source();
    let dst = f.target();
    let mu_dst = |s: &SymPoint| minkowski_sym(&f.apply(s)?, &dst);

    let boundary = sample_boundary(&src, seed, samples)?;
    let (b_res, b_err) = sweep(&boundary, |s| Ok((mu_dst(s)? - 1.0).abs()));
    let interior = sample_interior(&src, seed.wrapping_add(1), samples)?;
    let (i_res, i_err) = sweep(&interior, mu_dst);
    let shrunk: Vec<SymPoint> = boundary
        .iter()
        .map(|s| s.weighted_scale(Complex64::new(1.0 - COMPACTNESS_EPS, 0.0)))
        .collect();
    let (c_res, c_err) = sweep(&shrunk, |s| Ok(1.0 - mu_dst(s)?));

    let checks = vec![
        Check {
            name: "boundary_to_boundary".into(),
            samples,
            max_residual: b_res,
            tolerance: Some(tol),
            errors: b_err,
            pass: b_err == 0 && b_res <= tol,
        },
        Check {
            name: "interior_to_interior".into(),
            samples,
            max_residual: i_res,
            tolerance: Some(1.0),
            errors: i_err,
            pass: i_err == 0 && i_res < 1.0,
        },
        Check {
            name: "compactness".into(),
            samples,
            max_residual: c_res,
            tolerance: None,
            errors: c_err,
            pass: c_err == 0,
        },
    ];
    Ok(VerificationReport::new(checks, seed))
}

/// All `lⁿ` preimages of `u` under `P_l`, or an error at branch points.
fn power_preimages(u: &SymPoint, l: u32, dedupe_tol: f64) -> Result<Vec<SymPoint>> {
    if l == 1 {
        return Ok(vec![u.clone()]);
    }
    let w = fiber(u)?;
    let n = w.len();
    if w.distinct(dedupe_tol).len() < n || w.roots().iter().any(|x| x.norm() < dedupe_tol) {
        return Err(Error::DegenerateTarget { tol: dedupe_tol });
    }
    let inv = 1.0 / f64::from(l);
    let unity: Vec<Complex64> = Turn::roots_of_unity(l).iter().map(Turn::to_complex).collect();
    let principal: Vec<Complex64> = w.roots().iter().map(|x| x.powf(inv)).collect();
    let mut out = Vec::with_capacity((l as usize).pow(n as u32));
    let mut digits = vec![0usize; n];
    loop {
        let z: Vec<Complex64> = principal.iter().zip(&digits).map(|(r, &d)| r * unity[d]).collect();
        out.push(symmetrize(&CVec::new(z)?));
        let Some(j) = digits.iter().position(|&d| d + 1 < l as usize) else {
            return Ok(out);
        };
        digits[j] += 1;
        digits[..j].iter_mut().for_each(|d| *d = 0);
    }
}

fn dedupe(points: Vec<SymPoint>, tol: f64) -> Vec<SymPoint> {
    let mut kept: Vec<SymPoint> = Vec::with_capacity(points.len());
    for s in points {
        if kept.iter().all(|k| k.max_abs_diff(&s) > tol) {
            kept.push(s);
        }
    }
    kept
}

/// Inverts `f` at `t` step by step and returns the number of distinct
/// preimages. Every preimage is checked by forward evaluation.
pub fn count_preimages(f: &ProperMapSpec, t: &SymPoint, dedupe_tol: f64) -> Result<usize> {
    if !(dedupe_tol > 0.0) {
        return Err(Error::InvalidInput("dedupe_tol must be positive".into()));
    }
    let mu = minkowski_sym(t, &f.target())?;
    if mu >= 1.0 {
        return Err(Error::Domain(format!("target outside the image domain (mu = {mu})")));
    }
    let mut layer = vec![t.clone()];
    for step in f.chain().iter().rev() {
        let mut next = Vec::new();
        for u in &layer {
            match step {
                ChainStep::Aut(psi) => next.push(ell_aut_eval(&ell_aut_inverse(psi), u)?),
                ChainStep::Power(l) => next.extend(power_preimages(u, *l, dedupe_tol)?),
            }
        }
        layer = dedupe(next, dedupe_tol);
    }
    for s in &layer {
        let residual = eval_proper(f, s)?.max_abs_diff(t);
        if !(residual <= PREIMAGE_TOL) {
            return Err(Error::InconsistentPreimage { residual });
        }
    }
    Ok(layer.len())
}

/// Checks `f(πₙ(zˡ)) = πₙ(φ̃(z)ᵐ)` with `l = 1/p`, `m = 1/q` on random
/// points of the ball `B(center, radius)`, which must lie in
/// `𝔹ₙ ∩ (ℂ∖{0})ⁿ`.
#[allow(clippy::too_many_arguments)]
pub fn verify_commuting<F: SymMap + ?Sized>(
    f: &F,
    phi: &BallAutomorphism,
    p: Rational64,
    q: Rational64,
    center: &CVec,
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let (Some(l), Some(m)) = (reciprocal_integer(&p), reciprocal_integer(&q)) else {
        return Err(Error::InvalidInput("1/p and 1/q must be positive integers".into()));
    };
    let n = center.dim();
    if f.source().p() != p || f.target().p() != q || f.source().n() != n || phi.dim() != n {
        return Err(Error::InvalidInput("p, q and dimensions must match the map".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be >= 1".into()));
    }
    if !(radius > 0.0) || center.norm() + radius >= 1.0 {
        return Err(Error::Patch("the patch must lie inside the unit ball".into()));
    }
    if center.entries().iter().any(|c| c.norm() <= radius) {
        return Err(Error::Patch("the patch must avoid the coordinate hyperplanes".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let offset: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let offset = CVec::new(offset)?;
        let scale = radius * rng.random::<f64>() / offset.norm().max(1e-300);
        let z = CVec::new(
            center
                .entries()
                .iter()
                .zip(offset.entries())
                .map(|(c, o)| c + o * scale)
                .collect(),
        )?;
        let image = phi.eval(&z)?;
        if image.entries().iter().any(|w| w.norm() < 1e-12) {
            return Err(Error::Patch("the automorphism meets a coordinate hyperplane on the patch".into()));
        }
        let lhs = f.apply(&symmetrize(&z.powu(l)))?;
        let rhs = symmetrize(&image.powu(m));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    let check = Check {
        name: "commuting".into(),
        samples,
        max_residual: worst,
        tolerance: Some(COMMUTING_TOL),
        errors: 0,
        pass: worst <= COMMUTING_TOL,
    };
    Ok(VerificationReport::new(vec![check], seed))
}
