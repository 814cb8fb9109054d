//! The three automorphism families of symmetrized ellipsoids.
//!
//!     cargo run --example ellipsoid_automorphisms

use num_complex::Complex64;
use symell::automorph::{ell_aut_eval, ell_aut_inverse, phi_ii_closed_form, EllipsoidAutomorphism, PhiIIParams};
use symell::domains::{minkowski_sym, sample_boundary, EllipsoidParams};
use symell::exact::Turn;
use symell::symmetric::SymPoint;

fn boundary_error(psi: &EllipsoidAutomorphism) -> symell::error::Result<f64> {
    let params = psi.params();
    let mut worst: f64 = 0.0;
    for s in sample_boundary(&params, 11, 200)? {
        worst = worst.max((minkowski_sym(&ell_aut_eval(psi, &s)?, &params)? - 1.0).abs());
    }
    Ok(worst)
}

fn main() -> symell::error::Result<()> {
    let rotation = EllipsoidAutomorphism::phi_i(Turn::new(1, 5)?, EllipsoidParams::with_ratio(3, 2, 3)?);
    println!("PhiI(1/5 turn) on E(3/2,3): boundary error {:.2e}", boundary_error(&rotation)?);

    let phi = PhiIIParams::new(Turn::new(1, 4)?, Turn::new(2, 3)?, 0.35);
    let moebius = EllipsoidAutomorphism::phi_ii(phi, 3)?;
    let s = SymPoint::new(vec![
        Complex64::new(0.3, 0.1),
        Complex64::new(0.02, -0.04),
        Complex64::new(-0.001, 0.002),
    ])?;
    let induced = ell_aut_eval(&moebius, &s)?;
    let closed = phi_ii_closed_form(&phi, &s)?;
    println!("PhiII on E(1,3): induced vs closed form {:.2e}", induced.max_abs_diff(&closed));
    let inverse = ell_aut_inverse(&moebius);
    println!("PhiII inverse: {}", serde_json::to_string(&inverse).expect("serializable"));
    println!("|psi^-1(psi(s)) - s| = {:.2e}", ell_aut_eval(&inverse, &induced)?.max_abs_diff(&s));
    println!("PhiII boundary error {:.2e}", boundary_error(&moebius)?);

    let involution = EllipsoidAutomorphism::phi_iii(Turn::zero());
    let t = SymPoint::new(vec![Complex64::new(0.2, -0.1), Complex64::new(0.05, 0.01)])?;
    let back = ell_aut_eval(&involution, &ell_aut_eval(&involution, &t)?)?;
    println!("PhiIII(1) twice: {:.2e}", back.max_abs_diff(&t));
    println!("PhiIII boundary error {:.2e}", boundary_error(&EllipsoidAutomorphism::phi_iii(Turn::new(3, 8)?))?);
    Ok(())
}
