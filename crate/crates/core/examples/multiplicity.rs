//! Counting preimages by inverting the chain step by step.
//!
//!     cargo run --example multiplicity

use num_rational::Rational64;
use symell::automorph::{EllipsoidAutomorphism, PhiIIParams};
use symell::domains::{sample_interior, EllipsoidParams};
use symell::error::Error;
use symell::exact::Turn;
use symell::propermaps::{build_special, build_standard, count_preimages, ProperMapSpec, SymMap, DEDUPE_TOL};
use symell::symmetric::SymPoint;

fn report(name: &str, f: &ProperMapSpec) -> symell::error::Result<()> {
    let targets = sample_interior(&f.target(), 3, 5)?;
    let counts: Vec<usize> = targets
        .iter()
        .map(|t| count_preimages(f, t, DEDUPE_TOL))
        .collect::<symell::error::Result<_>>()?;
    println!("{name}: counts {counts:?}, expected {}", f.expected_multiplicity());
    Ok(())
}

fn main() -> symell::error::Result<()> {
    let r = Rational64::new;
    for (k, n) in [(2, 2), (3, 2), (2, 3)] {
        let src = EllipsoidParams::with_ratio(1, 1, n)?;
        let f = build_standard(r(1, 1), r(1, k), n, EllipsoidAutomorphism::identity(src))?;
        report(&format!("P_{k} on E(1,{n})"), &f)?;
    }
    let rotation = EllipsoidAutomorphism::phi_i(Turn::new(2, 7)?, EllipsoidParams::with_ratio(1, 2, 3)?);
    report("PhiI as a self-map", &build_standard(r(1, 2), r(1, 2), 3, rotation)?)?;
    for m in [1, 2] {
        let f = build_special(m, Turn::new(1, 5)?, PhiIIParams::new(Turn::zero(), Turn::half(), 0.2))?;
        report(&format!("special chain m = {m}"), &f)?;
    }

    // Points over the branch locus are refused rather than miscounted.
    let p2 = build_standard(r(1, 1), r(1, 2), 2, EllipsoidAutomorphism::identity(EllipsoidParams::with_ratio(1, 1, 2)?))?;
    let branch = SymPoint::from_reals(&[0.2, 0.01])?;
    match count_preimages(&p2, &branch, DEDUPE_TOL) {
        Err(e @ Error::DegenerateTarget { .. }) => println!("double root: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
