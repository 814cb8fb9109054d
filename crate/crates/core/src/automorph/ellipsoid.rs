//! Automorphisms of symmetrized ellipsoids and maps induced from ball
//! automorphisms.
//!
//! * `PhiI(ζ)`: `(ζs₁, ζ²s₂, …, ζⁿsₙ)`, any `(p, n)`.
//! * `PhiII(ζ₁, ζ₂, a₀)`: induced by the LII normal form, `p = 1` only.
//! * `PhiIII(ζ)`: `(ζs₁, ζ²(s₁²/4 − s₂))`, `(p, n) = (1/2, 2)` only.
//!
//! `PhiII` additionally carries a pre-rotation `ω` (default 1), meaning
//! `PhiII ∘ PhiI(ω)`. With it the family is closed under inversion.

use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::ball::{BallAutomorphism, POLE_GUARD};
use super::equivariance::{check_equivariance, EquivarianceReport, DEFAULT_SAMPLES};
use super::template::{from_lemma_template, LemmaForm, LemmaTemplate};
use crate::domains::EllipsoidParams;
use crate::error::{Error, Result};
use crate::exact::Turn;
use crate::symmetric::{fiber, symmetrize, CVec, SymPoint};

/// A ball automorphism pushed down through `s = πₙ(zˡ)`:
/// `s ↦ πₙ(φ̃(w^{1/l})ˡ)` where `w` is the fiber of `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedMap {
    ball: BallAutomorphism,
    l: u32,
}

impl InducedMap {
    /// No well-definedness check; see [`induce_from_ball`].
    pub fn new_unchecked(ball: BallAutomorphism, l: u32) -> Self {
        Self { ball, l }
    }

    pub fn ball(&self) -> &BallAutomorphism {
        &self.ball
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn eval(&self, s: &SymPoint) -> Result<SymPoint> {
        if s.dim() != self.ball.dim() {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let w = CVec::from(fiber(s)?);
        let lifted = if self.l == 1 {
            w
        } else {
            let inv = 1.0 / self.l as f64;
            CVec::new(w.entries().iter().map(|x| x.powf(inv)).collect())?
        };
        let image = self.ball.eval(&lifted)?;
        Ok(symmetrize(&image.powu(self.l)))
    }
}

/// Accepts `φ̃` only if `πₙ(φ̃(·)ˡ)` is a function of `πₙ(·ˡ)`, i.e. the
/// equivariance table with exponents `(l, l)` is complete.
pub fn induce_from_ball(ball: &BallAutomorphism, l: u32) -> Result<InducedMap> {
    match check_equivariance(ball, l, l, DEFAULT_SAMPLES)? {
        EquivarianceReport::Complete { .. } => Ok(InducedMap::new_unchecked(ball.clone(), l)),
        EquivarianceReport::Missing { sigma, xi } => Err(Error::NoEquivarianceWitness {
            sigma: sigma.images().to_vec(),
            xi: xi.iter().map(Turn::to_string).collect(),
        }),
    }
}

/// Parameters of the `PhiII` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiIIParams {
    pub zeta1: Turn,
    pub zeta2: Turn,
    pub a0: f64,
    #[serde(default = "Turn::zero")]
    pub rotation: Turn,
}

impl PhiIIParams {
    pub fn new(zeta1: Turn, zeta2: Turn, a0: f64) -> Self {
        Self {
            zeta1,
            zeta2,
            a0,
            rotation: Turn::zero(),
        }
    }

    /// `a₀ = 0, ζ₁ = 1, ζ₂ = −1`: the identity.
    pub fn identity() -> Self {
        Self::new(Turn::zero(), Turn::half(), 0.0)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !self.a0.is_finite() || n as f64 * self.a0 * self.a0 >= 1.0 {
            return Err(Error::Domain(format!("a0 = {} violates {n}·a0² < 1", self.a0)));
        }
        Ok(())
    }

    /// The LII normal form with all `ηⱼ = 1`.
    pub fn template(&self, n: usize) -> Result<LemmaTemplate> {
        LemmaTemplate::new(
            LemmaForm::LII {
                a0: self.a0,
                zeta1: self.zeta1,
                zeta2: self.zeta2,
                eta: vec![Turn::zero(); n],
            },
            1,
            1,
        )
    }

    /// `z ↦ LII(ωz)` as `(a, Q, R)`: center `ω̄·a`, matrix `ωQ`.
    pub fn ball_automorphism(&self, n: usize) -> Result<BallAutomorphism> {
        let base = from_lemma_template(&self.template(n)?);
        if self.rotation == Turn::zero() {
            return Ok(base);
        }
        let omega = self.rotation.to_complex();
        let a: DVector<Complex64> = base.center().entries().iter().map(|x| x * omega.conj()).collect::<Vec<_>>().into();
        BallAutomorphism::from_parts_unchecked(a, base.q() * omega, base.r())
    }

    /// Inverse within the family (derived from the disk Möbius structure
    /// along `(1, …, 1)`): `(a₀, −ω̄, −ω̄ζ₁ζ̄₂, −ζ̄₁)`.
    pub fn inverse(&self) -> Self {
        let minus_one = Turn::half();
        let omega_bar = self.rotation.conj();
        Self {
            zeta1: minus_one.mul(omega_bar),
            zeta2: minus_one.mul(omega_bar).mul(self.zeta1).mul(self.zeta2.conj()),
            a0: self.a0,
            rotation: minus_one.mul(self.zeta1.conj()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
enum RawEllAut {
    PhiI {
        zeta: Turn,
        params: EllipsoidParams,
    },
    PhiII {
        #[serde(flatten)]
        phi: PhiIIParams,
        params: EllipsoidParams,
    },
    PhiIII {
        zeta: Turn,
        params: EllipsoidParams,
    },
}

/// An automorphism of `𝔼_{p,n}` from one of the three families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEllAut", into = "RawEllAut")]
pub struct EllipsoidAutomorphism(RawEllAut);

/// Borrowed view of an [`EllipsoidAutomorphism`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EllAutKind<'a> {
    PhiI { zeta: Turn },
    PhiII { phi: &'a PhiIIParams },
    PhiIII { zeta: Turn },
}

impl TryFrom<RawEllAut> for EllipsoidAutomorphism {
    type Error = Error;
    fn try_from(raw: RawEllAut) -> Result<Self> {
        match &raw {
            RawEllAut::PhiI { .. } => {}
            RawEllAut::PhiII { phi, params } => {
                if params.p() != Rational64::from_integer(1) {
                    return Err(Error::InvalidInput("PhiII exists only for p = 1".into()));
                }
                phi.validate(params.n())?;
            }
            RawEllAut::PhiIII { params, .. } => {
                if params.p() != Rational64::new(1, 2) || params.n() != 2 {
                    return Err(Error::InvalidInput("PhiIII exists only for (p, n) = (1/2, 2)".into()));
                }
            }
        }
        Ok(Self(raw))
    }
}

impl From<EllipsoidAutomorphism> for RawEllAut {
    fn from(e: EllipsoidAutomorphism) -> Self {
        e.0
    }
}

impl EllipsoidAutomorphism {
    pub fn phi_i(zeta: Turn, params: EllipsoidParams) -> Self {
        Self(RawEllAut::PhiI { zeta, params })
    }

    pub fn phi_ii(phi: PhiIIParams, n: usize) -> Result<Self> {
        let params = EllipsoidParams::with_ratio(1, 1, n)?;
        Self::try_from(RawEllAut::PhiII { phi, params })
    }

    pub fn phi_iii(zeta: Turn) -> Self {
        let params = EllipsoidParams::with_ratio(1, 2, 2).expect("valid");
        Self(RawEllAut::PhiIII { zeta, params })
    }

    pub fn identity(params: EllipsoidParams) -> Self {
        Self::phi_i(Turn::zero(), params)
    }

    pub fn params(&self) -> EllipsoidParams {
        match &self.0 {
            RawEllAut::PhiI { params, .. }
            | RawEllAut::PhiII { params, .. }
            | RawEllAut::PhiIII { params, .. } => *params,
        }
    }

    pub fn kind(&self) -> EllAutKind<'_> {
        match &self.0 {
            RawEllAut::PhiI { zeta, .. } => EllAutKind::PhiI { zeta: *zeta },
            RawEllAut::PhiII { phi, .. } => EllAutKind::PhiII { phi },
            RawEllAut::PhiIII { zeta, .. } => EllAutKind::PhiIII { zeta: *zeta },
        }
    }
}

/// Evaluates `ψ` at `s`. PhiII goes through the induced ball map; its
/// closed form is [`phi_ii_closed_form`].
pub fn ell_aut_eval(psi: &EllipsoidAutomorphism, s: &SymPoint) -> Result<SymPoint> {
    let params = psi.params();
    if s.dim() != params.n() {
        return Err(Error::InvalidInput(format!(
            "point of dimension {} for an automorphism of E_(p,{})",
            s.dim(),
            params.n()
        )));
    }
    match psi.kind() {
        EllAutKind::PhiI { zeta } => Ok(s.weighted_scale(zeta.to_complex())),
        EllAutKind::PhiII { phi } => {
            InducedMap::new_unchecked(phi.ball_automorphism(params.n())?, 1).eval(s)
        }
        EllAutKind::PhiIII { zeta } => {
            let z = zeta.to_complex();
            let (s1, s2) = (s[0], s[1]);
            SymPoint::new(vec![z * s1, z * z * (0.25 * s1 * s1 - s2)])
        }
    }
}

pub fn ell_aut_inverse(psi: &EllipsoidAutomorphism) -> EllipsoidAutomorphism {
    let params = psi.params();
    let raw = match psi.kind() {
        EllAutKind::PhiI { zeta } => RawEllAut::PhiI {
            zeta: zeta.conj(),
            params,
        },
        EllAutKind::PhiII { phi } => RawEllAut::PhiII {
            phi: phi.inverse(),
            params,
        },
        EllAutKind::PhiIII { zeta } => RawEllAut::PhiIII {
            zeta: zeta.conj(),
            params,
        },
    };
    EllipsoidAutomorphism(raw)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `S_L(s)` for `Lⱼ(z) = A·Σzₖ + B·zⱼ + C`, expanded without roots:
/// `eₖ(c + Bz) = Σᵢ C(n−i, k−i)·c^{k−i}·Bⁱ·eᵢ(z)` with `c = A·s₁ + C`.
pub fn linear_sym_map_expanded(
    s: &SymPoint,
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> SymPoint {
    let n = s.dim();
    let shift = a * s[0] + c;
    let e = |i: usize| if i == 0 { Complex64::new(1.0, 0.0) } else { s[i - 1] };
    let coords = (1..=n)
        .map(|k| {
            (0..=k)
                .map(|i| binomial(n - i, k - i) * shift.powu((k - i) as u32) * b.powu(i as u32) * e(i))
                .sum()
        })
        .collect();
    SymPoint::new(coords).expect("finite")
}

/// The closed form of `PhiII`: component `k` is `S_{L,k}(s) / (nᵏ(1 − a₀s₁)ᵏ)`
/// with `L_j = ζ₁(Σz − na₀) + ζ₂√(1 − na₀²)(Σz − nzⱼ)`, applied after the
/// pre-rotation.
pub fn phi_ii_closed_form(phi: &PhiIIParams, s: &SymPoint) -> Result<SymPoint> {
    let n = s.dim();
    phi.validate(n)?;
    let nf = n as f64;
    let s = s.weighted_scale(phi.rotation.to_complex());
    let root = (1.0 - nf * phi.a0 * phi.a0).sqrt();
    let (z1, z2) = (phi.zeta1.to_complex(), phi.zeta2.to_complex());
    let a = z1 + z2 * root;
    let b = -nf * z2 * root;
    let c = -nf * z1 * phi.a0;
    let bracket = Complex64::new(1.0, 0.0) - phi.a0 * s[0];
    if bracket.norm() < POLE_GUARD {
        return Err(Error::Pole {
            denominator: bracket.norm(),
        });
    }
    let numer = linear_sym_map_expanded(&s, a, b, c);
    let denom = bracket * nf;
    SymPoint::new(
        numer
            .coords()
            .iter()
            .enumerate()
            .map(|(k, x)| x / denom.powu(k as u32 + 1))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::linear_sym_map;

    fn turn(k: i64, d: i64) -> Turn {
        Turn::new(k, d).unwrap()
    }

    fn pt(v: &[(f64, f64)]) -> SymPoint {
        SymPoint::new(v.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap()
    }

    #[test]
    fn phi_i_is_weighted_rotation() {
        let params = EllipsoidParams::with_ratio(3, 2, 3).unwrap();
        let zeta = turn(1, 6);
        let s = pt(&[(0.1, 0.2), (-0.05, 0.1), (0.02, 0.0)]);
        let got = ell_aut_eval(&EllipsoidAutomorphism::phi_i(zeta, params), &s).unwrap();
        let z = zeta.to_complex();
        let expected = SymPoint::new(vec![z * s[0], z * z * s[1], z * z * z * s[2]]).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn phi_iii_is_an_involution_at_zeta_one() {
        let psi = EllipsoidAutomorphism::phi_iii(Turn::zero());
        let s = pt(&[(0.3, -0.1), (0.05, 0.02)]);
        let once = ell_aut_eval(&psi, &s).unwrap();
        let expected = pt(&[(0.3, -0.1), (0.0, 0.0)]);
        let s1 = s[0];
        assert!((once[1] - (s1 * s1 / 4.0 - s[1])).norm() < 1e-16);
        assert_eq!(once[0], expected[0]);
        let twice = ell_aut_eval(&psi, &once).unwrap();
        assert!(twice.max_abs_diff(&s) < 1e-16);
        assert_eq!(ell_aut_inverse(&psi), psi);
    }

    #[test]
    fn phi_ii_identity_parameters() {
        let psi = EllipsoidAutomorphism::phi_ii(PhiIIParams::identity(), 3).unwrap();
        let s = pt(&[(0.2, 0.1), (-0.1, 0.05), (0.01, -0.02)]);
        assert!(ell_aut_eval(&psi, &s).unwrap().max_abs_diff(&s) < 1e-12);
        assert!(phi_ii_closed_form(&PhiIIParams::identity(), &s)
            .unwrap()
            .max_abs_diff(&s)
            < 1e-14);
    }

    #[test]
    fn expanded_affine_map_matches_fiber_route() {
        let s = pt(&[(0.2, 0.1), (-0.1, 0.05), (0.01, -0.02), (0.03, 0.0)]);
        let (a, b, c) = (
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.7, 0.1),
            Complex64::new(0.05, 0.4),
        );
        let d = linear_sym_map_expanded(&s, a, b, c).max_abs_diff(&linear_sym_map(&s, a, b, c).unwrap());
        assert!(d < 1e-13, "{d}");
    }

    #[test]
    fn family_admissibility() {
        let bad_p = RawEllAut::PhiII {
            phi: PhiIIParams::identity(),
            params: EllipsoidParams::with_ratio(1, 2, 2).unwrap(),
        };
        assert!(EllipsoidAutomorphism::try_from(bad_p).is_err());
        let bad_a0 = PhiIIParams::new(Turn::zero(), Turn::zero(), 0.6);
        assert!(EllipsoidAutomorphism::phi_ii(bad_a0, 3).is_err());
        let bad_iii = r#"{"family":"PhiIII","zeta":{"angle":"0/1"},"params":{"p":"1/2","n":3}}"#;
        assert!(serde_json::from_str::<EllipsoidAutomorphism>(bad_iii).is_err());
    }

    #[test]
    fn json_shape() {
        let psi = EllipsoidAutomorphism::phi_ii(PhiIIParams::new(turn(1, 4), turn(1, 3), 0.25), 2)
            .unwrap();
        let text = serde_json::to_string(&psi).unwrap();
        assert_eq!(
            text,
            r#"{"family":"PhiII","zeta1":{"angle":"1/4"},"zeta2":{"angle":"1/3"},"a0":0.25,"rotation":{"angle":"0/1"},"params":{"p":"1/1","n":2}}"#
        );
        assert_eq!(serde_json::from_str::<EllipsoidAutomorphism>(&text).unwrap(), psi);
        let no_rotation = r#"{"family":"PhiII","zeta1":{"angle":"1/4"},"zeta2":{"angle":"1/3"},"a0":0.25,"params":{"p":"1","n":2}}"#;
        assert_eq!(serde_json::from_str::<EllipsoidAutomorphism>(no_rotation).unwrap(), psi);
    }
}
