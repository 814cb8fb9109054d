//! The Minkowski functional of E_{p,n}: membership, weighted homogeneity,
//! and agreement with the generic bisection on a membership oracle.
//!
//!     cargo run --example minkowski_gauge

use num_complex::Complex64;
use symell::domains::{
    classify, ellipsoid_member, minkowski_sym, mu_balanced, sample_boundary, sym_weights, EllipsoidParams,
};
use symell::symmetric::SymPoint;

fn main() -> symell::error::Result<()> {
    let ball = EllipsoidParams::with_ratio(1, 1, 2)?;
    // (0.6, 0.8) lies on the unit sphere, so pi_2 of it is on the boundary.
    let s = SymPoint::from_reals(&[1.4, 0.48])?;
    let c = classify(&s, &ball, 1e-9)?;
    println!("mu_E(1,2)(1.4, 0.48) = {:.12}  -> {:?}", c.mu, c.region);

    let params = EllipsoidParams::with_ratio(1, 2, 3)?;
    let s = SymPoint::new(vec![
        Complex64::new(0.2, 0.1),
        Complex64::new(-0.05, 0.03),
        Complex64::new(0.01, 0.0),
    ])?;
    let mu = minkowski_sym(&s, &params)?;
    let lambda = Complex64::from_polar(0.7, 1.2);
    let scaled = minkowski_sym(&s.weighted_scale(lambda), &params)?;
    println!("mu = {mu:.12}, mu(lambda.s) / |lambda| = {:.12}", scaled / lambda.norm());

    let bisected = mu_balanced(ellipsoid_member(params), &sym_weights(3), &s, 1e-12)?;
    println!("bisection on the membership oracle: {bisected:.12}");

    let worst = sample_boundary(&params, 7, 200)?
        .iter()
        .map(|b| minkowski_sym(b, &params).map(|m| (m - 1.0).abs()))
        .collect::<symell::error::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("200 boundary samples: max |mu - 1| = {worst:.2e}");
    Ok(())
}
