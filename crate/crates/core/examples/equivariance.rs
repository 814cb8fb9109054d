//! Which ball automorphisms descend through the symmetrized power maps:
//! search for the witness table of phi(z) = eta . phi_tau(xi . z_sigma).
//!
//!     cargo run --example equivariance

use num_complex::Complex64;
use symell::automorph::{
    check_equivariance, from_lemma_template, induce_from_ball, make_moebius_aut, CMatrix, EquivarianceReport,
    LemmaForm, LemmaTemplate, DEFAULT_SAMPLES,
};
use symell::exact::Turn;
use symell::symmetric::{CVec, SymPoint};

fn main() -> symell::error::Result<()> {
    for n in [2, 3] {
        let t = LemmaTemplate::new(
            LemmaForm::LII {
                a0: 0.3,
                zeta1: Turn::new(1, 6)?,
                zeta2: Turn::new(1, 4)?,
                eta: vec![Turn::zero(); n],
            },
            1,
            1,
        )?;
        let phi = from_lemma_template(&t);
        match check_equivariance(&phi, 1, 1, DEFAULT_SAMPLES)? {
            EquivarianceReport::Complete { witnesses } => {
                println!("LII, n = {n}: {} witnesses; first {}", witnesses.len(), serde_json::to_string(&witnesses[0]).expect("json"));
            }
            missing => println!("LII, n = {n}: {missing:?}"),
        }
    }

    // LIV with l = 2 descends through pi_2(z^2).
    let liv = from_lemma_template(&LemmaTemplate::new(LemmaForm::LIV { zeta: Turn::zero(), eta: Turn::half() }, 2, 2)?);
    let induced = induce_from_ball(&liv, 2)?;
    let s = SymPoint::new(vec![Complex64::new(0.1, 0.05), Complex64::new(0.01, -0.02)])?;
    println!("induced LIV at s: {:?}", induced.eval(&s)?.coords());

    let a = CVec::from_reals(&[0.5, 0.1])?;
    let skew = make_moebius_aut(&a, CMatrix::identity(2, 2))?;
    let report = check_equivariance(&skew, 1, 1, DEFAULT_SAMPLES)?;
    println!("asymmetric center: {}", serde_json::to_string(&report).expect("json"));
    println!("induce: {}", induce_from_ball(&skew, 1).unwrap_err());
    Ok(())
}
