use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmetric::CVec;

/// Residual accepted for the algebraic constraints on `(a, Q, R)`.
pub const STEIN_TOL: f64 = 1e-10;
/// Residual accepted for `UUᴴ = I`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Smallest `|1 − ⟨z, a⟩|` accepted before reporting a pole.
pub const POLE_GUARD: f64 = 1e-14;

pub type CMatrix = DMatrix<Complex64>;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |UUᴴ − I|` entrywise, or infinity for non-square input.
pub fn unitary_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_entry(&(u * u.adjoint() - CMatrix::identity(n, n)))
}

/// An automorphism of the unit ball `𝔹ₙ`,
/// `φ(z) = Q(z − a) / (R(1 − ⟨z, a⟩))`, `⟨z, a⟩ = Σ āₖzₖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallAutomorphism {
    a: DVector<Complex64>,
    q: CMatrix,
    r: Complex64,
}

/// Entrywise residuals of every algebraic relation on `(a, Q, R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteinResiduals {
    /// `Q̄(I − ā·ᵗa)ᵗQ = I`
    pub constraint_a: f64,
    /// `R̄(1 − ᵗa·ā)R = 1`
    pub constraint_b: f64,
    /// `ᵗQQ̄ − |R|²ā·ᵗa = I`
    pub stein_1: f64,
    /// `|R|² − ᵗa·ᵗQQ̄·ā = 1`
    pub stein_2: f64,
    /// `ᵗQQ̄·ā = |R|²ā`
    pub stein_3: f64,
}

impl SteinResiduals {
    pub fn max(&self) -> f64 {
        [
            self.constraint_a,
            self.constraint_b,
            self.stein_1,
            self.stein_2,
            self.stein_3,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl BallAutomorphism {
    /// Validated constructor: dimensions agree, `‖a‖ < 1`, and every
    /// relation checked by [`BallAutomorphism::stein_residuals`] holds to
    /// [`STEIN_TOL`].
    pub fn new(a: DVector<Complex64>, q: CMatrix, r: Complex64) -> Result<Self> {
        let phi = Self::from_parts_unchecked(a, q, r)?;
        let residual = phi.verify_stein();
        if !(residual <= STEIN_TOL) {
            return Err(Error::Domain(format!(
                "(a, Q, R) violates the ball automorphism constraints (residual {residual:e})"
            )));
        }
        Ok(phi)
    }

    /// Shape and finiteness checks only; the algebraic constraints are not
    /// enforced. Use [`BallAutomorphism::verify_stein`] to inspect them.
    pub fn from_parts_unchecked(a: DVector<Complex64>, q: CMatrix, r: Complex64) -> Result<Self> {
        let n = a.len();
        if n == 0 || q.nrows() != n || q.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "center of length {n} does not match a {}x{} matrix",
                q.nrows(),
                q.ncols()
            )));
        }
        if a.iter().chain(q.iter()).any(|z| !z.is_finite()) || !r.is_finite() {
            return Err(Error::InvalidInput("non-finite automorphism data".into()));
        }
        if a.norm() >= 1.0 {
            return Err(Error::Domain(format!("center norm {} is not < 1", a.norm())));
        }
        if r.norm() == 0.0 {
            return Err(Error::InvalidInput("R must be nonzero".into()));
        }
        Ok(Self { a, q, r })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: DVector::zeros(n),
            q: CMatrix::identity(n, n),
            r: one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn center(&self) -> CVec {
        CVec::new(self.a.iter().copied().collect()).expect("center is finite and non-empty")
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn r(&self) -> Complex64 {
        self.r
    }

    pub fn eval(&self, z: &CVec) -> Result<CVec> {
        if z.dim() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "point of dimension {} for an automorphism of dimension {}",
                z.dim(),
                self.dim()
            )));
        }
        let zv = DVector::from_column_slice(z.entries());
        let bracket = one() - self.a.dotc(&zv);
        if bracket.norm() < POLE_GUARD {
            return Err(Error::Pole {
                denominator: bracket.norm(),
            });
        }
        let image = &self.q * (zv - &self.a) / (self.r * bracket);
        CVec::new(image.iter().copied().collect())
    }

    pub fn stein_residuals(&self) -> SteinResiduals {
        let n = self.dim();
        let id = CMatrix::identity(n, n);
        let a_bar = self.a.conjugate();
        let a_row = self.a.transpose();
        let q_bar = self.q.conjugate();
        let qt = self.q.transpose();
        let r2 = Complex64::new(self.r.norm_sqr(), 0.0);

        let ca = &q_bar * (&id - &a_bar * &a_row) * &qt - &id;
        let cb = self.r.conj() * (one() - (&a_row * &a_bar)[(0, 0)]) * self.r - one();
        let gram = &qt * &q_bar;
        let s1 = &gram - (&a_bar * &a_row) * r2 - &id;
        let s2 = r2 - (&a_row * &gram * &a_bar)[(0, 0)] - one();
        let s3 = &gram * &a_bar - &a_bar * r2;

        SteinResiduals {
            constraint_a: max_entry(&ca),
            constraint_b: cb.norm(),
            stein_1: max_entry(&s1),
            stein_2: s2.norm(),
            stein_3: s3.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    /// Largest residual over all relations of [`SteinResiduals`].
    pub fn verify_stein(&self) -> f64 {
        self.stein_residuals().max()
    }

    /// The `(n+1)×(n+1)` matrix acting on homogeneous coordinates:
    /// `[[Q, −Qa], [−R·aᴴ, R]]`.
    pub fn to_projective(&self) -> CMatrix {
        let n = self.dim();
        let mut g = CMatrix::zeros(n + 1, n + 1);
        g.view_mut((0, 0), (n, n)).copy_from(&self.q);
        let qa = &self.q * &self.a;
        for j in 0..n {
            g[(j, n)] = -qa[j];
            g[(n, j)] = -self.r * self.a[j].conj();
        }
        g[(n, n)] = self.r;
        g
    }

    /// Reads `(a, Q, R)` back from a projective matrix, normalizing the
    /// free scalar so that `R(1 − ‖a‖²)^{1/2}` has modulus one.
    pub fn from_projective(g: &CMatrix) -> Result<Self> {
        let n = g.nrows().saturating_sub(1);
        if n == 0 || !g.is_square() {
            return Err(Error::InvalidInput("projective matrix must be (n+1)x(n+1)".into()));
        }
        let d = g[(n, n)];
        if d.norm() == 0.0 {
            return Err(Error::Domain("projective matrix does not preserve the ball".into()));
        }
        let a = DVector::from_iterator(n, (0..n).map(|j| -(g[(n, j)] / d).conj()));
        let norm2 = a.norm_squared();
        if norm2 >= 1.0 {
            return Err(Error::Domain(format!("center norm {} is not < 1", norm2.sqrt())));
        }
        let scale = 1.0 / (d.norm() * (1.0 - norm2).sqrt());
        let q = g.view((0, 0), (n, n)) * Complex64::new(scale, 0.0);
        Self::from_parts_unchecked(a, q.into_owned(), d * scale)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BallAutomorphism) -> Result<Self> {
        if self.dim() != inner.dim() {
            return Err(Error::InvalidInput("dimension mismatch in composition".into()));
        }
        Self::from_projective(&(self.to_projective() * inner.to_projective()))
    }

    pub fn inverse(&self) -> Result<Self> {
        let g = self
            .to_projective()
            .try_inverse()
            .ok_or_else(|| Error::Domain("singular projective matrix".into()))?;
        Self::from_projective(&g)
    }
}

/// `(a = 0, Q = U, R = 1)`.
pub fn make_unitary_aut(u: CMatrix) -> Result<BallAutomorphism> {
    let residual = unitary_residual(&u);
    if !(residual <= UNITARY_TOL) {
        return Err(Error::NotUnitary { residual });
    }
    let n = u.nrows();
    BallAutomorphism::from_parts_unchecked(DVector::zeros(n), u, one())
}

/// `(I − aaᴴ)^{-1/2}`: identity on `a^⊥`, `(1 − ‖a‖²)^{-1/2}` along `a`.
fn inverse_sqrt_factor(a: &DVector<Complex64>) -> CMatrix {
    let n = a.len();
    let norm2 = a.norm_squared();
    let mut m = CMatrix::identity(n, n);
    if norm2 > 0.0 {
        let coef = (1.0 / (1.0 - norm2).sqrt() - 1.0) / norm2;
        m += (a * a.adjoint()) * Complex64::new(coef, 0.0);
    }
    m
}

/// The automorphism with center `a` and unitary part `U`:
/// `Q = U·(I − aaᴴ)^{-1/2}`, `R = (1 − ‖a‖²)^{-1/2}`. It sends `a` to 0.
pub fn make_moebius_aut(a: &CVec, u: CMatrix) -> Result<BallAutomorphism> {
    if a.norm() >= 1.0 {
        return Err(Error::Domain(format!("center norm {} is not < 1", a.norm())));
    }
    if u.nrows() != a.dim() {
        return Err(Error::InvalidInput("unitary factor has the wrong size".into()));
    }
    let residual = unitary_residual(&u);
    if !(residual <= UNITARY_TOL) {
        return Err(Error::NotUnitary { residual });
    }
    let av = DVector::from_column_slice(a.entries());
    let r = Complex64::new(1.0 / (1.0 - av.norm_squared()).sqrt(), 0.0);
    let q = u * inverse_sqrt_factor(&av);
    BallAutomorphism::from_parts_unchecked(av, q, r)
}

/// The JSON form of a [`BallAutomorphism`] before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallData {
    pub a: Vec<[f64; 2]>,
    pub q: Vec<Vec<[f64; 2]>>,
    pub r: [f64; 2],
}

impl BallData {
    fn parts(self) -> Result<(DVector<Complex64>, CMatrix, Complex64)> {
        let c = |[re, im]: [f64; 2]| Complex64::new(re, im);
        let n = self.a.len();
        if self.q.len() != n || self.q.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("q must be an n x n matrix".into()));
        }
        let a = DVector::from_iterator(n, self.a.into_iter().map(c));
        let q = CMatrix::from_row_iterator(n, n, self.q.into_iter().flatten().map(c));
        Ok((a, q, c(self.r)))
    }

    /// Shape checks only, so that broken data can still be inspected.
    pub fn into_unchecked(self) -> Result<BallAutomorphism> {
        let (a, q, r) = self.parts()?;
        BallAutomorphism::from_parts_unchecked(a, q, r)
    }
}

impl Serialize for BallAutomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = |z: &Complex64| [z.re, z.im];
        BallData {
            a: self.a.iter().map(pair).collect(),
            q: self
                .q
                .row_iter()
                .map(|row| row.iter().map(pair).collect())
                .collect(),
            r: pair(&self.r),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallAutomorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (a, q, r) = BallData::deserialize(d)?
            .parts()
            .map_err(serde::de::Error::custom)?;
        BallAutomorphism::new(a, q, r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_has_zero_residual() {
        let id = BallAutomorphism::identity(3);
        assert_eq!(id.verify_stein(), 0.0);
        let z = CVec::new(vec![c(0.1, 0.2), c(-0.3, 0.0), c(0.0, 0.4)]).unwrap();
        assert_eq!(id.eval(&z).unwrap(), z);
    }

    #[test]
    fn unitary_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
        let phi = make_unitary_aut(u).unwrap();
        let z = CVec::new(vec![c(0.3, 0.1), c(-0.2, 0.5)]).unwrap();
        let w = phi.eval(&z).unwrap();
        let expected = CVec::new(vec![(z[0] + z[1]) * s, (z[0] - z[1]) * s]).unwrap();
        assert!(w.max_abs_diff(&expected) < 1e-15);

        let diag = CMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::from_polar(1.0, 0.3),
            Complex64::from_polar(1.0, -1.1),
        ]));
        assert!(make_unitary_aut(diag).unwrap().verify_stein() < 1e-15);

        let bad = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(make_unitary_aut(bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn one_dimensional_moebius() {
        let a0 = 0.4;
        let phi = make_moebius_aut(&CVec::from_reals(&[a0]).unwrap(), CMatrix::identity(1, 1)).unwrap();
        assert!(phi.eval(&CVec::from_reals(&[a0]).unwrap()).unwrap()[0].norm() < 1e-16);
        let z = c(0.2, -0.5);
        let expected = (z - a0) / (1.0 - a0 * z);
        let got = phi.eval(&CVec::new(vec![z]).unwrap()).unwrap()[0];
        assert!((got - expected).norm() < 1e-15);
    }

    #[test]
    fn moebius_rejects_outside_center() {
        let a = CVec::from_reals(&[0.8, 0.6]).unwrap();
        assert!(matches!(
            make_moebius_aut(&a, CMatrix::identity(2, 2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn corrupted_q_is_detected() {
        let a = CVec::new(vec![c(0.3, 0.2), c(-0.1, 0.4)]).unwrap();
        let phi = make_moebius_aut(&a, CMatrix::identity(2, 2)).unwrap();
        assert!(phi.verify_stein() < 1e-12);
        let mut q = phi.q().clone();
        q[(0, 1)] += c(0.1, 0.0);
        let bad = BallAutomorphism::from_parts_unchecked(
            DVector::from_column_slice(a.entries()),
            q.clone(),
            phi.r(),
        )
        .unwrap();
        assert!(bad.verify_stein() > 1e-3);
        assert!(BallAutomorphism::new(DVector::from_column_slice(a.entries()), q, phi.r()).is_err());
    }

    #[test]
    fn pole_guard() {
        let a = CVec::from_reals(&[0.5, 0.0]).unwrap();
        let phi = make_moebius_aut(&a, CMatrix::identity(2, 2)).unwrap();
        // ⟨z, a⟩ = 1 at z = (2, 0), far outside the ball.
        assert!(matches!(
            phi.eval(&CVec::from_reals(&[2.0, 0.0]).unwrap()),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn inverse_and_compose() {
        let a = CVec::new(vec![c(0.2, -0.1), c(0.3, 0.3)]).unwrap();
        let u = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, 0.7)],
        );
        let phi = make_moebius_aut(&a, u).unwrap();
        let inv = phi.inverse().unwrap();
        assert!(inv.verify_stein() < 1e-12);
        let z = CVec::new(vec![c(-0.4, 0.2), c(0.1, 0.5)]).unwrap();
        let back = inv.eval(&phi.eval(&z).unwrap()).unwrap();
        assert!(back.max_abs_diff(&z) < 1e-13);
        let both = phi.compose(&inv).unwrap();
        assert!(both.eval(&z).unwrap().max_abs_diff(&z) < 1e-13);
    }

    #[test]
    fn json_round_trip_validates() {
        let a = CVec::new(vec![c(0.2, -0.1), c(0.0, 0.3)]).unwrap();
        let phi = make_moebius_aut(&a, CMatrix::identity(2, 2)).unwrap();
        let text = serde_json::to_string(&phi).unwrap();
        let back: BallAutomorphism = serde_json::from_str(&text).unwrap();
        assert_eq!(back, phi);
        let bad = r#"{"a":[[0,0],[0,0]],"q":[[[2,0],[0,0]],[[0,0],[1,0]]],"r":[1,0]}"#;
        assert!(serde_json::from_str::<BallAutomorphism>(bad).is_err());
    }
}
