//! The four normal forms of ball automorphisms compatible with the
//! symmetrized power maps, parametrized by the exponents `l = 1/p` and
//! `m = 1/q` they are meant for.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ball::{BallAutomorphism, CMatrix};
use crate::error::{Error, Result};
use crate::exact::Turn;
use crate::symmetric::CVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum LemmaForm {
    /// `ζ(η₁z₁, …, ηₙzₙ)`
    LI { zeta: Turn, eta: Vec<Turn> },
    /// `ηⱼ/(n(1 − a₀Σzₖ)) · (ζ₁(Σzₖ − na₀) + ζ₂√(1 − na₀²)(Σzₖ − nzⱼ))`
    LII {
        a0: f64,
        zeta1: Turn,
        zeta2: Turn,
        eta: Vec<Turn>,
    },
    /// `(ζ₁(z₁ + z₂ − 2a₀), ζ₂√(1 − 2a₀²)(z₁ − z₂)) / (√2(1 − a₀(z₁ + z₂)))`
    LIII { a0: f64, zeta1: Turn, zeta2: Turn },
    /// `ζ/√2 · (z₁ + z₂, η(z₁ − z₂))`
    LIV { zeta: Turn, eta: Turn },
}

/// A validated [`LemmaForm`] together with `m = 1/q` and `l = 1/p`.
///
/// Validity: every `η` is an `m`-th root of unity (decided exactly on the
/// rational angles); `n·a₀² < 1` strictly; LII and LIII need `l = 1`, LIII
/// additionally an even `m`; LIV needs `l = 2`; LIII and LIV live in
/// dimension 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TemplateJson", into = "TemplateJson")]
pub struct LemmaTemplate {
    form: LemmaForm,
    m: u32,
    l: u32,
}

#[derive(Serialize, Deserialize)]
struct TemplateJson {
    #[serde(flatten)]
    form: LemmaForm,
    m: u32,
    l: u32,
}

impl TryFrom<TemplateJson> for LemmaTemplate {
    type Error = Error;
    fn try_from(j: TemplateJson) -> Result<Self> {
        LemmaTemplate::new(j.form, j.m, j.l)
    }
}

impl From<LemmaTemplate> for TemplateJson {
    fn from(t: LemmaTemplate) -> Self {
        TemplateJson {
            form: t.form,
            m: t.m,
            l: t.l,
        }
    }
}

fn check_a0(a0: f64, n: usize) -> Result<()> {
    if !a0.is_finite() || n as f64 * a0 * a0 >= 1.0 {
        return Err(Error::Domain(format!("a0 = {a0} violates {n}·a0² < 1")));
    }
    Ok(())
}

fn check_roots(eta: &[Turn], m: u32) -> Result<()> {
    match eta.iter().find(|e| !e.is_root_of_unity(m)) {
        Some(e) => Err(Error::Domain(format!("eta = {e} is not an {m}-th root of unity"))),
        None => Ok(()),
    }
}

impl LemmaTemplate {
    pub fn new(form: LemmaForm, m: u32, l: u32) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::InvalidInput("m and l must be positive integers".into()));
        }
        match &form {
            LemmaForm::LI { eta, .. } => {
                if eta.len() < 2 {
                    return Err(Error::InvalidInput("LI needs n >= 2 entries of eta".into()));
                }
                check_roots(eta, m)?;
            }
            LemmaForm::LII { a0, eta, .. } => {
                if eta.len() < 2 {
                    return Err(Error::InvalidInput("LII needs n >= 2 entries of eta".into()));
                }
                if l != 1 {
                    return Err(Error::InvalidInput("LII applies only for l = 1".into()));
                }
                check_a0(*a0, eta.len())?;
                check_roots(eta, m)?;
            }
            LemmaForm::LIII { a0, .. } => {
                if l != 1 || !m.is_multiple_of(2) {
                    return Err(Error::InvalidInput("LIII applies only for l = 1 and even m".into()));
                }
                check_a0(*a0, 2)?;
            }
            LemmaForm::LIV { eta, .. } => {
                if l != 2 {
                    return Err(Error::InvalidInput("LIV applies only for l = 2".into()));
                }
                check_roots(std::slice::from_ref(eta), m)?;
            }
        }
        Ok(Self { form, m, l })
    }

    pub fn form(&self) -> &LemmaForm {
        &self.form
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn dim(&self) -> usize {
        match &self.form {
            LemmaForm::LI { eta, .. } | LemmaForm::LII { eta, .. } => eta.len(),
            LemmaForm::LIII { .. } | LemmaForm::LIV { .. } => 2,
        }
    }

    /// Evaluates the normal form literally, without going through `(a, Q, R)`.
    pub fn eval_formula(&self, z: &CVec) -> Result<CVec> {
        if z.dim() != self.dim() {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let zs = z.entries();
        let n = zs.len() as f64;
        let total: Complex64 = zs.iter().sum();
        let out = match &self.form {
            LemmaForm::LI { zeta, eta } => {
                let zeta = zeta.to_complex();
                zs.iter()
                    .zip(eta)
                    .map(|(zj, e)| zeta * e.to_complex() * zj)
                    .collect()
            }
            LemmaForm::LII {
                a0,
                zeta1,
                zeta2,
                eta,
            } => {
                let root = (1.0 - n * a0 * a0).sqrt();
                let denom = n * (1.0 - *a0 * total);
                zs.iter()
                    .zip(eta)
                    .map(|(zj, e)| {
                        e.to_complex() / denom
                            * (zeta1.to_complex() * (total - n * a0)
                                + zeta2.to_complex() * root * (total - n * zj))
                    })
                    .collect()
            }
            LemmaForm::LIII { a0, zeta1, zeta2 } => {
                let root = (1.0 - 2.0 * a0 * a0).sqrt();
                let denom = 2f64.sqrt() * (1.0 - *a0 * total);
                vec![
                    zeta1.to_complex() * (total - 2.0 * a0) / denom,
                    zeta2.to_complex() * root * (zs[0] - zs[1]) / denom,
                ]
            }
            LemmaForm::LIV { zeta, eta } => {
                let k = zeta.to_complex() * FRAC_1_SQRT_2;
                vec![k * (zs[0] + zs[1]), k * eta.to_complex() * (zs[0] - zs[1])]
            }
        };
        CVec::new(out)
    }
}

/// The `(a, Q, R)` data of a normal form. LI and LIV are unitary (`a = 0`);
/// LII and LIII have the diagonal center `a = (a₀, …, a₀)` and
/// `R = (1 − n·a₀²)^{-1/2}`.
pub fn from_lemma_template(t: &LemmaTemplate) -> BallAutomorphism {
    let n = t.dim();
    let nf = n as f64;
    let c = |x: f64| Complex64::new(x, 0.0);
    let (a, q, r) = match &t.form {
        LemmaForm::LI { zeta, eta } => {
            let diag = DVector::from_iterator(n, eta.iter().map(|e| zeta.mul(*e).to_complex()));
            (DVector::zeros(n), CMatrix::from_diagonal(&diag), c(1.0))
        }
        LemmaForm::LII {
            a0,
            zeta1,
            zeta2,
            eta,
        } => {
            let root = (1.0 - nf * a0 * a0).sqrt();
            let (z1, z2) = (zeta1.to_complex(), zeta2.to_complex());
            let off = (z1 / root + z2) / nf;
            let on = (z1 / root - (nf - 1.0) * z2) / nf;
            let q = CMatrix::from_fn(n, n, |j, k| {
                eta[j].to_complex() * if j == k { on } else { off }
            });
            (DVector::from_element(n, c(*a0)), q, c(1.0 / root))
        }
        LemmaForm::LIII { a0, zeta1, zeta2 } => {
            let root = (1.0 - 2.0 * a0 * a0).sqrt();
            let top = zeta1.to_complex() * (FRAC_1_SQRT_2 / root);
            let bottom = zeta2.to_complex() * FRAC_1_SQRT_2;
            let q = CMatrix::from_row_slice(2, 2, &[top, top, bottom, -bottom]);
            (DVector::from_element(2, c(*a0)), q, c(1.0 / root))
        }
        LemmaForm::LIV { zeta, eta } => {
            let k = zeta.to_complex() * FRAC_1_SQRT_2;
            let e = eta.to_complex();
            let q = CMatrix::from_row_slice(2, 2, &[k, k, k * e, -k * e]);
            (DVector::zeros(2), q, c(1.0))
        }
    };
    BallAutomorphism::from_parts_unchecked(a, q, r).expect("normal forms are well-shaped")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn turn(k: i64, d: i64) -> Turn {
        Turn::new(k, d).unwrap()
    }

    fn z2() -> CVec {
        CVec::new(vec![Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.45)]).unwrap()
    }

    #[test]
    fn li_identity() {
        let t = LemmaTemplate::new(
            LemmaForm::LI {
                zeta: Turn::zero(),
                eta: vec![Turn::zero(); 3],
            },
            1,
            1,
        )
        .unwrap();
        let phi = from_lemma_template(&t);
        assert_eq!(phi, BallAutomorphism::identity(3));
    }

    #[test]
    fn lii_collapses_to_identity() {
        let t = LemmaTemplate::new(
            LemmaForm::LII {
                a0: 0.0,
                zeta1: Turn::zero(),
                zeta2: Turn::half(),
                eta: vec![Turn::zero(); 4],
            },
            1,
            1,
        )
        .unwrap();
        let phi = from_lemma_template(&t);
        let id = nalgebra::DMatrix::<Complex64>::identity(4, 4);
        assert!((phi.q() - id).iter().all(|z| z.norm() < 1e-15));
        assert_eq!(phi.r(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn liv_is_the_rotation() {
        let t = LemmaTemplate::new(
            LemmaForm::LIV {
                zeta: Turn::zero(),
                eta: Turn::zero(),
            },
            2,
            2,
        )
        .unwrap();
        let z = z2();
        let w = from_lemma_template(&t).eval(&z).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = CVec::new(vec![(z[0] + z[1]) * s, (z[0] - z[1]) * s]).unwrap();
        assert!(w.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn matrices_satisfy_constraints_and_formulas() {
        let forms = vec![
            LemmaTemplate::new(
                LemmaForm::LI {
                    zeta: turn(1, 7),
                    eta: vec![turn(1, 3), turn(2, 3), Turn::zero()],
                },
                3,
                2,
            ),
            LemmaTemplate::new(
                LemmaForm::LII {
                    a0: -0.31,
                    zeta1: turn(2, 9),
                    zeta2: turn(5, 11),
                    eta: vec![turn(1, 2), Turn::zero(), turn(1, 2)],
                },
                2,
                1,
            ),
            LemmaTemplate::new(
                LemmaForm::LIII {
                    a0: 0.5,
                    zeta1: turn(3, 10),
                    zeta2: turn(7, 8),
                },
                4,
                1,
            ),
            LemmaTemplate::new(
                LemmaForm::LIV {
                    zeta: turn(1, 5),
                    eta: turn(3, 4),
                },
                4,
                2,
            ),
        ];
        for t in forms {
            let t = t.unwrap();
            let phi = from_lemma_template(&t);
            assert!(phi.verify_stein() < 1e-12, "{t:?}");
            let z = if t.dim() == 2 {
                z2()
            } else {
                CVec::new(vec![
                    Complex64::new(0.1, 0.2),
                    Complex64::new(-0.3, 0.1),
                    Complex64::new(0.25, -0.4),
                ])
                .unwrap()
            };
            let diff = phi.eval(&z).unwrap().max_abs_diff(&t.eval_formula(&z).unwrap());
            assert!(diff < 1e-12, "{t:?}: {diff}");
        }
    }

    #[test]
    fn invalid_templates_are_rejected() {
        let bad_root = LemmaTemplate::new(
            LemmaForm::LI {
                zeta: Turn::zero(),
                eta: vec![turn(1, 3), Turn::zero()],
            },
            2,
            1,
        );
        assert!(matches!(bad_root, Err(Error::Domain(_))));
        let bad_a0 = LemmaTemplate::new(
            LemmaForm::LII {
                a0: 0.6,
                zeta1: Turn::zero(),
                zeta2: Turn::zero(),
                eta: vec![Turn::zero(); 3],
            },
            1,
            1,
        );
        assert!(matches!(bad_a0, Err(Error::Domain(_))));
        let odd_m = LemmaTemplate::new(
            LemmaForm::LIII {
                a0: 0.0,
                zeta1: Turn::zero(),
                zeta2: Turn::zero(),
            },
            3,
            1,
        );
        assert!(odd_m.is_err());
        let wrong_l = LemmaTemplate::new(
            LemmaForm::LIV {
                zeta: Turn::zero(),
                eta: Turn::zero(),
            },
            2,
            1,
        );
        assert!(wrong_l.is_err());
    }

    #[test]
    fn json_is_flat_and_validated() {
        let t = LemmaTemplate::new(
            LemmaForm::LIV {
                zeta: turn(1, 8),
                eta: turn(1, 2),
            },
            2,
            2,
        )
        .unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(
            text,
            r#"{"form":"LIV","zeta":{"angle":"1/8"},"eta":{"angle":"1/2"},"m":2,"l":2}"#
        );
        assert_eq!(serde_json::from_str::<LemmaTemplate>(&text).unwrap(), t);
        let bad = r#"{"form":"LIV","zeta":{"angle":"0/1"},"eta":{"angle":"1/3"},"m":2,"l":2}"#;
        assert!(serde_json::from_str::<LemmaTemplate>(bad).is_err());
    }
}
