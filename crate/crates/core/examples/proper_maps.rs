//! Proper maps E_{p,n} -> E_{q,n}: the existence rule, the two chain
//! shapes, boundary verification and the commuting relation.
//!
//!     cargo run --example proper_maps

use num_complex::Complex64;
use num_rational::Rational64;
use symell::automorph::{from_lemma_template, BallAutomorphism, EllipsoidAutomorphism, LemmaForm, LemmaTemplate, PhiIIParams};
use symell::domains::EllipsoidParams;
use symell::exact::Turn;
use symell::propermaps::{
    build_special, build_standard, eval_proper, exists_proper, verify_boundary, verify_commuting, NonProperControl,
};
use symell::symmetric::{CVec, SymPoint};

fn main() -> symell::error::Result<()> {
    let r = Rational64::new;
    for (p, q) in [(r(1, 1), r(1, 2)), (r(1, 2), r(1, 3)), (r(2, 3), r(2, 9))] {
        println!("proper map E({p}) -> E({q}): {}", exists_proper(p, q));
    }

    let p2 = build_standard(r(1, 1), r(1, 2), 2, EllipsoidAutomorphism::identity(EllipsoidParams::with_ratio(1, 1, 2)?))?;
    let s = SymPoint::from_reals(&[0.5, 0.06])?;
    println!("P_2(0.5, 0.06) = {:?}", eval_proper(&p2, &s)?.coords());

    let phi2 = PhiIIParams::new(Turn::new(1, 3)?, Turn::half(), 0.4);
    let psi = EllipsoidAutomorphism::phi_ii(phi2, 2)?;
    let f = build_standard(r(1, 1), r(1, 2), 2, psi)?;
    let report = verify_boundary(&f, 500, 1, 1e-6)?;
    println!("P_2 o PhiII: pass = {}, boundary residual {:.2e}", report.pass, report.checks[0].max_residual);

    for m in [1, 2] {
        let special = build_special(m, Turn::new(1, 8)?, phi2)?;
        let report = verify_boundary(&special, 500, 1, 1e-6)?;
        println!("special chain m = {m}: pass = {}", report.pass);
    }

    let control = NonProperControl::new(2, EllipsoidParams::with_ratio(1, 1, 2)?)?;
    let report = verify_boundary(&control, 100, 1, 1e-6)?;
    println!("2 * P_2 (not proper): pass = {}", report.pass);

    // f(pi(z)) = pi(phi(z)^2) with phi = LIII(0, 1, 1) and f = PhiIII(1) o P_2.
    let special = build_special(1, Turn::zero(), PhiIIParams::identity())?;
    let liii = from_lemma_template(&LemmaTemplate::new(
        LemmaForm::LIII { a0: 0.0, zeta1: Turn::zero(), zeta2: Turn::zero() },
        2,
        1,
    )?);
    let center = CVec::new(vec![Complex64::new(0.4, 0.1), Complex64::new(-0.2, 0.3)])?;
    let report = verify_commuting(&special, &liii, r(1, 1), r(1, 2), &center, 0.1, 200, 5)?;
    println!("commuting relation: residual {:.2e}", report.checks[0].max_residual);
    let identity = verify_commuting(&p2, &BallAutomorphism::identity(2), r(1, 1), r(1, 2), &center, 0.1, 200, 5)?;
    println!("P_2 with identity: pass = {}", identity.pass);
    Ok(())
}
