//! Symmetrize a point, recover its fiber, and apply the power map P_l.
//!
//!     cargo run --example symmetrization

use num_complex::Complex64;
use symell::symmetric::{fiber, power_map, symmetrize, CVec, SymPoint};

fn main() -> symell::error::Result<()> {
    let z = CVec::new(vec![
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.2, 0.4),
        Complex64::new(0.5, -0.25),
    ])?;
    let s = symmetrize(&z);
    println!("z           = {:?}", z.entries());
    println!("pi_3(z)     = {:?}", s.coords());

    let roots = fiber(&s)?;
    println!("fiber       = {:?}", roots.roots());
    let back = symmetrize(&CVec::from(roots));
    println!("round trip  : |pi(fiber(s)) - s| = {:.2e}", back.max_abs_diff(&s));

    for l in [2, 3] {
        let direct = symmetrize(&z.powu(l));
        let via_map = power_map(&s, l)?;
        println!("P_{l}(s)      = {:?}  (|pi(z^{l}) - P_{l}(pi(z))| = {:.2e})", via_map.coords(), direct.max_abs_diff(&via_map));
    }

    // The quadratic case from the CLI: roots 2 and 3.
    let s = SymPoint::from_reals(&[5.0, 6.0])?;
    println!("fiber(5, 6) = {:?}", fiber(&s)?.roots());
    Ok(())
}
