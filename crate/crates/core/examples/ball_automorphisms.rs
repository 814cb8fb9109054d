//! Automorphisms of the unit ball: construction, the algebraic constraints
//! on (a, Q, R), sphere preservation, composition and inversion.
//!
//!     cargo run --example ball_automorphisms

use nalgebra::DVector;
use num_complex::Complex64;
use symell::automorph::{make_moebius_aut, BallAutomorphism, CMatrix};
use symell::symmetric::CVec;

fn main() -> symell::error::Result<()> {
    let a = CVec::new(vec![Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.4)])?;
    let u = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, 0.5),
        ],
    );
    let phi = make_moebius_aut(&a, u)?;
    println!("phi(a) = {:?}", phi.eval(&a)?.entries());
    println!("constraint residuals: {:#?}", phi.stein_residuals());

    let z = CVec::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)])?;
    println!("|z| = {}, |phi(z)| = {:.15}", z.norm(), phi.eval(&z)?.norm());

    let inv = phi.inverse()?;
    let w = CVec::new(vec![Complex64::new(-0.1, 0.2), Complex64::new(0.3, 0.3)])?;
    println!("|phi^-1(phi(w)) - w| = {:.2e}", inv.eval(&phi.eval(&w)?)?.max_abs_diff(&w));
    let twice = phi.compose(&phi)?;
    println!("phi o phi has center {:?}", twice.center().entries());

    let mut broken = phi.q().clone();
    broken[(0, 1)] += Complex64::new(0.1, 0.0);
    let center = DVector::from_column_slice(phi.center().entries());
    let bad = BallAutomorphism::from_parts_unchecked(center, broken, phi.r())?;
    println!("corrupted Q: residual {:.3e}", bad.verify_stein());

    println!("{}", serde_json::to_string(&phi).expect("serializable"));
    Ok(())
}
