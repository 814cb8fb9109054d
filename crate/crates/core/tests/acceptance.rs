//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::time::Instant;

use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use symell::automorph::{
    check_equivariance, ell_aut_eval, from_lemma_template, make_moebius_aut, phi_ii_closed_form, BallAutomorphism,
    CMatrix, EllipsoidAutomorphism, EquivarianceReport, LemmaForm, LemmaTemplate, PhiIIParams, DEFAULT_SAMPLES,
};
use symell::domains::{minkowski_sym, sample_boundary, sample_interior, EllipsoidParams};
use symell::error::{Error, Result};
use symell::exact::Turn;
use symell::propermaps::{
    build_special, build_standard, count_preimages, exists_proper, verify_boundary, verify_commuting,
    NonProperControl, ProperMapSpec, SymMap, DEDUPE_TOL,
};
use symell::symmetric::{fiber, power_map, symmetrize, CVec, SymPoint};

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn box_point(rng: &mut ChaCha8Rng, n: usize, half_width: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            Complex64::new(
                rng.random_range(-half_width..half_width),
                rng.random_range(-half_width..half_width),
            )
        })
        .collect()
}

fn sphere_point(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    let v = CVec::new((0..n).map(|_| gaussian(rng)).collect()).unwrap();
    v.scale(Complex64::new(1.0 / v.norm(), 0.0))
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian(rng)).qr().q()
}

fn random_turn(rng: &mut ChaCha8Rng) -> Turn {
    let den = rng.random_range(1..=12);
    Turn::new(rng.random_range(0..den), den).unwrap()
}

fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn params(n: i64, d: i64, dim: usize) -> EllipsoidParams {
    EllipsoidParams::with_ratio(n, d, dim).unwrap()
}

fn verdict(worst: f64, tol: f64) -> (bool, String) {
    (worst <= tol, format!("max error {worst:.2e} (tol {tol:.0e})"))
}

fn fiber_round_trip() -> Outcome {
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for _ in 0..1000 {
            let s = SymPoint::new(box_point(&mut rng, n, 1.0))?;
            let back = symmetrize(&CVec::from(fiber(&s)?));
            worst = worst.max(back.max_abs_diff(&s) / s.max_abs().max(1.0));
        }
    }
    Ok(verdict(worst, 1e-9))
}

fn power_map_witness() -> Outcome {
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    for l in [2, 3] {
        for n in 2..=5 {
            for _ in 0..500 {
                let z = CVec::new(box_point(&mut rng, n, 1.0))?;
                let lhs = symmetrize(&z.powu(l));
                let rhs = power_map(&symmetrize(&z), l)?;
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
    }
    Ok(verdict(worst, 1e-9))
}

fn gauge_law() -> Outcome {
    let mut worst: f64 = 0.0;
    for (num, den) in [(1, 1), (1, 2)] {
        for l in [2i64, 3] {
            let n = 2 + (l as usize + den as usize) % 3;
            let src = params(num, den, n);
            let dst = params(num, den * l, n);
            for s in sample_interior(&src, 30 + l as u64, 500)? {
                let lhs = minkowski_sym(&power_map(&s, l as u32)?, &dst)?;
                let rhs = minkowski_sym(&s, &src)?.powi(l as i32);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    Ok(verdict(worst, 1e-8))
}

fn weighted_homogeneity() -> Outcome {
    let mut rng = rng(4);
    let choices = [(1, 1), (1, 2), (2, 1), (3, 2)];
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let (num, den) = choices[i % choices.len()];
        let n = 2 + i % 3;
        let p = params(num, den, n);
        let s = SymPoint::new(box_point(&mut rng, n, 1.0))?;
        let lambda = Complex64::from_polar(rng.random_range(0.1..3.0), rng.random_range(0.0..std::f64::consts::TAU));
        let lhs = minkowski_sym(&s.weighted_scale(lambda), &p)?;
        let rhs = lambda.norm() * minkowski_sym(&s, &p)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(verdict(worst, 1e-9))
}

fn random_center(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    let r: f64 = rng.random_range(0.0..0.95);
    sphere_point(rng, n).scale(Complex64::new(r, 0.0))
}

fn stein_constraints() -> Outcome {
    let mut rng = rng(5);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = 2 + i % 3;
        let phi = make_moebius_aut(&random_center(&mut rng, n), random_unitary(&mut rng, n))?;
        worst = worst.max(phi.verify_stein());
    }
    let phi = make_moebius_aut(&random_center(&mut rng, 3), random_unitary(&mut rng, 3))?;
    let mut q = phi.q().clone();
    q[(1, 2)] += Complex64::new(0.05, -0.05);
    let corrupted = BallAutomorphism::from_parts_unchecked(DVector::from_column_slice(phi.center().entries()), q, phi.r())?
        .verify_stein();
    Ok((
        worst < 1e-10 && corrupted > 1e-3,
        format!("max residual {worst:.2e} (tol 1e-10); corrupted {corrupted:.2e} (> 1e-3)"),
    ))
}

fn sphere_preservation() -> Outcome {
    let mut rng = rng(6);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let n = 2 + i % 3;
        let phi = make_moebius_aut(&random_center(&mut rng, n), random_unitary(&mut rng, n))?;
        let z = sphere_point(&mut rng, n);
        worst = worst.max((phi.eval(&z)?.norm() - 1.0).abs());
    }
    Ok(verdict(worst, 1e-9))
}

fn random_phi_ii(rng: &mut ChaCha8Rng, n: usize) -> PhiIIParams {
    let bound = 0.95 / (n as f64).sqrt();
    PhiIIParams {
        rotation: random_turn(rng),
        ..PhiIIParams::new(random_turn(rng), random_turn(rng), rng.random_range(-bound..bound))
    }
}

fn ellipsoid_families() -> Outcome {
    let involution = EllipsoidAutomorphism::phi_iii(Turn::zero());
    let mut invol: f64 = 0.0;
    for s in sample_interior(&params(1, 2, 2), 70, 200)? {
        invol = invol.max(ell_aut_eval(&involution, &ell_aut_eval(&involution, &s)?)?.max_abs_diff(&s));
    }

    let mut rng = rng(7);
    let mut closed: f64 = 0.0;
    for set in 0..20 {
        let n = 2 + set % 3;
        let phi = random_phi_ii(&mut rng, n);
        let psi = EllipsoidAutomorphism::phi_ii(phi, n)?;
        for s in sample_interior(&params(1, 1, n), 700 + set as u64, 200)? {
            closed = closed.max(ell_aut_eval(&psi, &s)?.max_abs_diff(&phi_ii_closed_form(&phi, &s)?));
        }
    }

    let families = [
        EllipsoidAutomorphism::phi_i(Turn::new(2, 7)?, params(3, 2, 3)),
        EllipsoidAutomorphism::phi_ii(random_phi_ii(&mut rng, 3), 3)?,
        EllipsoidAutomorphism::phi_iii(Turn::new(5, 12)?),
    ];
    let mut boundary: f64 = 0.0;
    for psi in &families {
        for s in sample_boundary(&psi.params(), 71, 200)? {
            boundary = boundary.max((minkowski_sym(&ell_aut_eval(psi, &s)?, &psi.params())? - 1.0).abs());
        }
    }
    Ok((
        invol <= 1e-12 && closed <= 1e-10 && boundary <= 1e-8,
        format!(
            "involution {invol:.2e} (tol 1e-12); induced vs closed form {closed:.2e} (tol 1e-10); boundary {boundary:.2e} (tol 1e-8)"
        ),
    ))
}

fn existence_rule() -> Outcome {
    let cases = [
        (ratio(1, 1), ratio(1, 2), true),
        (ratio(1, 2), ratio(1, 3), false),
        (ratio(5, 7), ratio(5, 7), true),
        (ratio(3, 1), ratio(3, 1), true),
    ];
    let ok = cases.iter().all(|&(p, q, expected)| exists_proper(p, q) == expected);
    Ok((ok, format!("{} exact cases", cases.len())))
}

fn boundary_report<F: SymMap>(f: &F, samples: usize) -> Result<(bool, f64)> {
    let r = verify_boundary(f, samples, 9, 1e-6)?;
    Ok((r.pass, r.check("boundary_to_boundary").expect("present").max_residual))
}

fn properness_surrogate() -> Outcome {
    let mut rng = rng(9);
    let psi = EllipsoidAutomorphism::phi_ii(random_phi_ii(&mut rng, 2), 2)?;
    let f2 = build_standard(ratio(1, 1), ratio(1, 2), 2, psi)?;
    let psi = EllipsoidAutomorphism::phi_i(Turn::new(1, 3)?, params(1, 1, 3));
    let f3 = build_standard(ratio(1, 1), ratio(1, 3), 3, psi)?;
    let (pass2, res2) = boundary_report(&f2, 500)?;
    let (pass3, res3) = boundary_report(&f3, 500)?;
    let (control, _) = boundary_report(&NonProperControl::new(2, params(1, 1, 2))?, 500)?;
    Ok((
        pass2 && pass3 && !control,
        format!("P2∘PhiII {res2:.2e}, P3∘PhiI {res3:.2e} (tol 1e-6); control rejected: {}", !control),
    ))
}

/// Counts at `targets` seeded interior points, skipping branch points.
fn generic_counts(f: &ProperMapSpec, targets: usize, seed: u64) -> Result<Vec<usize>> {
    let mut counts = Vec::new();
    for t in sample_interior(&f.target(), seed, 4 * targets)? {
        match count_preimages(f, &t, DEDUPE_TOL) {
            Err(Error::DegenerateTarget { .. }) => continue,
            other => counts.push(other?),
        }
        if counts.len() == targets {
            return Ok(counts);
        }
    }
    Err(Error::InvalidInput("too many degenerate targets".into()))
}

fn multiplicity_oracle() -> Outcome {
    let mut rng = rng(10);
    let mut ok = true;
    let mut details = Vec::new();
    for (k, n) in [(2u32, 2usize), (3, 2), (2, 3)] {
        let psi = EllipsoidAutomorphism::phi_ii(random_phi_ii(&mut rng, n), n)?;
        let f = build_standard(ratio(1, 1), ratio(1, k as i64), n, psi)?;
        let counts = generic_counts(&f, 20, 100 + k as u64)?;
        let expected = (k as usize).pow(n as u32);
        ok &= counts.iter().all(|&c| c == expected);
        details.push(format!("(k={k},n={n}) -> {}", counts[0]));
    }
    let automorphisms = [
        build_standard(ratio(1, 1), ratio(1, 1), 3, EllipsoidAutomorphism::phi_ii(random_phi_ii(&mut rng, 3), 3)?)?,
        build_standard(ratio(1, 2), ratio(1, 2), 2, EllipsoidAutomorphism::phi_iii(Turn::new(1, 6)?))?,
        build_standard(ratio(2, 1), ratio(2, 1), 3, EllipsoidAutomorphism::phi_i(Turn::new(3, 5)?, params(2, 1, 3)))?,
    ];
    for f in &automorphisms {
        ok &= generic_counts(f, 20, 200)?.iter().all(|&c| c == 1);
    }
    details.push("automorphisms -> 1".into());
    Ok((ok, details.join(", ")))
}

fn special_chain() -> Outcome {
    let mut rng = rng(11);
    let mut ok = true;
    let mut details = Vec::new();
    for m in [1u32, 2] {
        let f = build_special(m, random_turn(&mut rng), random_phi_ii(&mut rng, 2))?;
        let (pass, res) = boundary_report(&f, 500)?;
        let counts = generic_counts(&f, 20, 300 + m as u64)?;
        let p_k = build_standard(ratio(1, 1), ratio(1, 2 * m as i64), 2, EllipsoidAutomorphism::identity(params(1, 1, 2)))?;
        let standard = generic_counts(&p_k, 20, 400 + m as u64)?;
        ok &= pass && counts.iter().chain(&standard).all(|&c| c == standard[0]);
        details.push(format!("m={m}: boundary {res:.2e}, count {} vs P_{} {}", counts[0], 2 * m, standard[0]));
    }
    Ok((ok, details.join("; ")))
}

fn equivariance() -> Outcome {
    let mut rng = rng(12);
    let mut ok = true;
    for n in [2usize, 3] {
        for _ in 0..3 {
            let m = rng.random_range(1..=3u32);
            let eta = (0..n).map(|_| Turn::roots_of_unity(m)[rng.random_range(0..m as usize)]).collect();
            let bound = 0.95 / (n as f64).sqrt();
            let t = LemmaTemplate::new(
                LemmaForm::LII {
                    a0: rng.random_range(-bound..bound),
                    zeta1: random_turn(&mut rng),
                    zeta2: random_turn(&mut rng),
                    eta,
                },
                m,
                1,
            )?;
            ok &= check_equivariance(&from_lemma_template(&t), 1, m, DEFAULT_SAMPLES)?.is_complete();
        }
    }
    let skew = make_moebius_aut(&CVec::new(vec![Complex64::new(0.4, 0.1), Complex64::new(-0.2, 0.3)])?, random_unitary(&mut rng, 2))?;
    let witness = match check_equivariance(&skew, 1, 1, DEFAULT_SAMPLES)? {
        EquivarianceReport::Missing { sigma, xi } => {
            let sigma: Vec<usize> = sigma.images().iter().map(|i| i + 1).collect();
            Some(format!("sigma {sigma:?}, xi {:?}", xi.iter().map(Turn::to_string).collect::<Vec<_>>()))
        }
        EquivarianceReport::Complete { .. } => None,
    };
    ok &= witness.is_some();
    Ok((ok, format!("6 LII templates complete; asymmetric center fails at {}", witness.unwrap_or_default())))
}

fn commuting_relation() -> Outcome {
    let center = CVec::new(vec![Complex64::new(0.35, 0.2), Complex64::new(-0.3, 0.25)])?;
    let identity_spec = build_standard(ratio(1, 1), ratio(1, 1), 2, EllipsoidAutomorphism::identity(params(1, 1, 2)))?;
    let p2 = build_standard(ratio(1, 1), ratio(1, 2), 2, EllipsoidAutomorphism::identity(params(1, 1, 2)))?;
    let special = build_special(1, Turn::zero(), PhiIIParams::identity())?;
    let liii = from_lemma_template(&LemmaTemplate::new(
        LemmaForm::LIII {
            a0: 0.0,
            zeta1: Turn::zero(),
            zeta2: Turn::zero(),
        },
        2,
        1,
    )?);
    let id = BallAutomorphism::identity(2);
    let reports = [
        verify_commuting(&identity_spec, &id, ratio(1, 1), ratio(1, 1), &center, 0.15, 200, 13)?,
        verify_commuting(&p2, &id, ratio(1, 1), ratio(1, 2), &center, 0.15, 200, 13)?,
        verify_commuting(&special, &liii, ratio(1, 1), ratio(1, 2), &center, 0.15, 200, 13)?,
    ];
    let worst = reports.iter().map(|r| r.checks[0].max_residual).fold(0.0, f64::max);
    let (pass, detail) = verdict(worst, 1e-8);
    Ok((pass && reports.iter().all(|r| r.pass), detail))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("fiber round trip", fiber_round_trip),
        ("power map witness", power_map_witness),
        ("gauge law under P_l", gauge_law),
        ("weighted homogeneity of mu", weighted_homogeneity),
        ("ball automorphism constraints", stein_constraints),
        ("sphere preservation", sphere_preservation),
        ("ellipsoid automorphism families", ellipsoid_families),
        ("existence rule for proper maps", existence_rule),
        ("properness surrogate", properness_surrogate),
        ("multiplicity oracle", multiplicity_oracle),
        ("special chain", special_chain),
        ("equivariance", equivariance),
        ("commuting relation", commuting_relation),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = criterion().unwrap_or_else(|e| (false, format!("error: {e}")));
        failures += usize::from(!pass);
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        eprintln!("{failures} criteria failed");
        std::process::exit(1);
    }
}
