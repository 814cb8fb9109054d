//! Numeric search for the symmetry relation `φ(z) = η·φ_τ(ξ·z_σ)`.
//!
//! For every permutation `σ` and every `ξ` with `ξⱼˡ = 1` we look for a
//! permutation `τ` and `η` with `ηⱼᵐ = 1` making the relation hold at a set
//! of sample points. Once `τ` is fixed the components decouple, so each `ηⱼ`
//! is found by trying the `m` roots of unity for that component alone.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ball::BallAutomorphism;
use crate::error::{Error, Result};
use crate::exact::Turn;
use crate::symmetric::CVec;

/// Default number of sample points per relation.
pub const DEFAULT_SAMPLES: usize = 8;
/// Largest `lⁿ·n!·mⁿ` the search accepts.
pub const SEARCH_BUDGET: u128 = 50_000_000;
/// Pointwise tolerance for the relation.
pub const EQUIVARIANCE_TOL: f64 = 1e-9;

const SAMPLE_SEED: u64 = 0x5EED_2024;

/// A bijection of `{0, …, n−1}`; `images[j] = σ(j)`. JSON uses 1-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (j, &i) in self.images.iter().enumerate() {
            inv[i] = j;
        }
        Self { images: inv }
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Self {
            images: cur.clone(),
        }];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Self {
                images: cur.clone(),
            });
        }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(one_based: Vec<usize>) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::InvalidInput("permutation images are 1-based".into()));
        }
        Permutation::new(one_based.into_iter().map(|i| i - 1).collect())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images.into_iter().map(|i| i + 1).collect()
    }
}

/// One row of the witness table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub sigma: Permutation,
    pub xi: Vec<Turn>,
    pub tau: Permutation,
    pub eta: Vec<Turn>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum EquivarianceReport {
    /// A witness for every `(σ, ξ)`.
    Complete { witnesses: Vec<Witness> },
    /// The first `(σ, ξ)` without a witness.
    Missing { sigma: Permutation, xi: Vec<Turn> },
}

impl EquivarianceReport {
    pub fn is_complete(&self) -> bool {
        matches!(self, EquivarianceReport::Complete { .. })
    }
}

fn tuples(roots: &[Turn], n: usize) -> Vec<Vec<Turn>> {
    let mut out: Vec<Vec<Turn>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                roots.iter().map(move |r| {
                    let mut v = prefix.clone();
                    v.push(*r);
                    v
                })
            })
            .collect();
    }
    out
}

fn sample_points(n: usize, count: usize) -> Vec<CVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..count)
        .map(|_| {
            let raw: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let v = CVec::new(raw).expect("finite");
            let radius = 0.9 * rng.random::<f64>().max(0.1);
            v.scale(Complex64::new(radius / v.norm(), 0.0))
        })
        .collect()
}

/// Searches the witness table of `φ(z) = η·φ_τ(ξ·z_σ)` for exponents `l`
/// (on `ξ`) and `m` (on `η`). Requires `n ≤ 4` and `lⁿ·n!·mⁿ` within
/// [`SEARCH_BUDGET`].
pub fn check_equivariance(
    phi: &BallAutomorphism,
    l: u32,
    m: u32,
    samples: usize,
) -> Result<EquivarianceReport> {
    let n = phi.dim();
    if n > 4 {
        return Err(Error::InvalidInput(format!("equivariance search needs n <= 4, got {n}")));
    }
    if l == 0 || m == 0 || samples == 0 {
        return Err(Error::InvalidInput("l, m and samples must be positive".into()));
    }
    let factorial: u128 = (1..=n as u128).product();
    let required = (l as u128)
        .checked_pow(n as u32)
        .and_then(|x| x.checked_mul(factorial))
        .and_then(|x| x.checked_mul((m as u128).checked_pow(n as u32)?))
        .unwrap_or(u128::MAX);
    if required > SEARCH_BUDGET {
        return Err(Error::BudgetExceeded {
            required,
            budget: SEARCH_BUDGET,
        });
    }

    let points = sample_points(n, samples);
    let base: Vec<CVec> = points.iter().map(|z| phi.eval(z)).collect::<Result<_>>()?;
    let perms = Permutation::all(n);
    let eta_roots = Turn::roots_of_unity(m);
    let mut witnesses = Vec::new();

    for sigma in &perms {
        for xi in tuples(&Turn::roots_of_unity(l), n) {
            let xi_c: Vec<Complex64> = xi.iter().map(Turn::to_complex).collect();
            let xi_vec = CVec::new(xi_c).expect("finite");
            let moved: Vec<CVec> = points
                .iter()
                .map(|z| phi.eval(&xi_vec.hadamard(&z.permute(sigma.images()))))
                .collect::<Result<_>>()?;

            let found = perms.iter().find_map(|tau| {
                let eta: Option<Vec<Turn>> = (0..n)
                    .map(|j| {
                        let tj = tau.images()[j];
                        eta_roots.iter().copied().find(|e| {
                            let ec = e.to_complex();
                            base.iter().zip(&moved).all(|(b, w)| {
                                (b[j] - ec * w[tj]).norm() <= EQUIVARIANCE_TOL
                            })
                        })
                    })
                    .collect();
                eta.map(|eta| (tau.clone(), eta))
            });

            match found {
                Some((tau, eta)) => witnesses.push(Witness {
                    sigma: sigma.clone(),
                    xi,
                    tau,
                    eta,
                }),
                None => {
                    return Ok(EquivarianceReport::Missing {
                        sigma: sigma.clone(),
                        xi,
                    })
                }
            }
        }
    }
    Ok(EquivarianceReport::Complete { witnesses })
}
