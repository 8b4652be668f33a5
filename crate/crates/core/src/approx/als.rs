//! Low-rank entrywise approximation by alternating least squares with
//! box clipping. The optimizer runs in floating point; every candidate
//! witness is rationalized and its deviation re-computed exactly before
//! success is reported.

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::util::{derive_seed, rat_from_f64, rat_to_f64, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dimension cap for the ALS search.
pub const ALS_DIM_CAP: usize = 64;

/// Search knobs; the defaults are part of the documented behavior.
#[derive(Debug, Clone)]
pub struct AlsOptions {
    pub restarts: usize,
    pub sweeps: usize,
    /// Stop a restart when max_dev improves by less than this.
    pub tol: f64,
    /// Certification slack added to eps, exact.
    pub slack: Rat,
}

impl Default for AlsOptions {
    fn default() -> Self {
        AlsOptions {
            restarts: 200,
            sweeps: 500,
            tol: 1e-9,
            slack: Rat::new(BigInt::from(1), BigInt::from(1_000_000_000u64)),
        }
    }
}

/// A certified low-rank approximation: max_dev is computed from the stored
/// factors in exact arithmetic, never taken from the optimizer.
#[derive(Debug, Clone)]
pub struct ApproxRankWitness {
    pub left: ExactMatrix,
    pub right: ExactMatrix,
    pub rank: usize,
    pub max_dev: Rat,
}

impl ApproxRankWitness {
    fn certify(left: &[Vec<f64>], right: &[Vec<f64>], target: &ExactMatrix) -> Result<Self> {
        let rows = left.len();
        let r = left.first().map_or(0, |v| v.len());
        let cols = right.first().map_or(0, |v| v.len());
        let to_rat = |v: f64| -> Result<Rat> {
            rat_from_f64(v).ok_or_else(|| Error::Internal("non-finite factor entry".to_string()))
        };
        let mut lm = ExactMatrix::zeros(rows, r);
        for (i, row) in left.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                lm.set(i, k, to_rat(*v)?);
            }
        }
        let mut rm = ExactMatrix::zeros(r, cols);
        for (k, row) in right.iter().enumerate().take(r) {
            for (j, v) in row.iter().enumerate() {
                rm.set(k, j, to_rat(*v)?);
            }
        }
        let product = lm.mul(&rm)?;
        let mut max_dev = Rat::zero();
        for i in 0..rows {
            for j in 0..cols {
                let dev = (product.get(i, j) - target.get(i, j)).abs();
                if dev > max_dev {
                    max_dev = dev;
                }
            }
        }
        Ok(ApproxRankWitness {
            left: lm,
            right: rm,
            rank: r,
            max_dev,
        })
    }
}

/// Search for a rank-r matrix within eps of a 0/1 matrix, entrywise.
///
/// Returns a certified witness on success; `None` is inconclusive (this is
/// an upper-bound method only). When r is at least the exact rank, the
/// rank factorization is returned directly with max_dev = 0.
pub fn approx_rank_upper(
    m: &ExactMatrix,
    eps: &Rat,
    r: usize,
    seed: u64,
    opts: &AlsOptions,
) -> Result<Option<ApproxRankWitness>> {
    if m.rows() > ALS_DIM_CAP || m.cols() > ALS_DIM_CAP {
        return Err(Error::CapExceeded {
            what: "ALS search",
            needed: m.rows().max(m.cols()),
            cap: ALS_DIM_CAP,
        });
    }
    if !m.is_boolean() {
        return Err(Error::InvalidParameter(
            "ALS target must be a 0/1 matrix".to_string(),
        ));
    }
    if r == 0 {
        // Only the zero matrix has rank 0.
        let feasible = m.entries().iter().all(|v| &v.abs() <= eps);
        if feasible {
            return Ok(Some(ApproxRankWitness {
                left: ExactMatrix::zeros(m.rows(), 0),
                right: ExactMatrix::zeros(0, m.cols()),
                rank: 0,
                max_dev: m
                    .entries()
                    .iter()
                    .map(|v| v.abs())
                    .max()
                    .unwrap_or_else(Rat::zero),
            }));
        }
        return Ok(None);
    }
    let exact_rank = m.rank_exact();
    if r >= exact_rank {
        let f = m.rank_factorization();
        return Ok(Some(ApproxRankWitness {
            left: f.left,
            right: f.right,
            rank: f.rank,
            max_dev: Rat::zero(),
        }));
    }

    let rows = m.rows();
    let cols = m.cols();
    let target: Vec<Vec<f64>> = (0..rows)
        .map(|i| (0..cols).map(|j| rat_to_f64(m.get(i, j))).collect())
        .collect();
    let eps_f = rat_to_f64(eps);
    let accept = eps_f + rat_to_f64(&opts.slack);
    let threshold = eps + &opts.slack;

    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xa15, restart as u64));
        let mut left: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut right: Vec<Vec<f64>> = (0..r)
            .map(|_| (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut best_dev = f64::INFINITY;
        for _sweep in 0..opts.sweeps {
            // Clip the current product into the allowed box, then refit each
            // factor in turn by least squares.
            let clipped = clip_product(&left, &right, &target, eps_f);
            solve_right(&left, &clipped, &mut right);
            let clipped = clip_product(&left, &right, &target, eps_f);
            solve_left(&clipped, &right, &mut left);
            let dev = max_dev(&left, &right, &target);
            if dev <= accept {
                let witness = ApproxRankWitness::certify(&left, &right, m)?;
                if witness.max_dev <= threshold {
                    return Ok(Some(witness));
                }
            }
            if best_dev - dev < opts.tol {
                break;
            }
            if dev < best_dev {
                best_dev = dev;
            }
        }
    }
    Ok(None)
}

fn clip_product(
    left: &[Vec<f64>],
    right: &[Vec<f64>],
    target: &[Vec<f64>],
    eps: f64,
) -> Vec<Vec<f64>> {
    let rows = left.len();
    let cols = right.first().map_or(0, |r| r.len());
    let r = right.len();
    let mut out = vec![vec![0.0; cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            let mut v = 0.0;
            for k in 0..r {
                v += left[i][k] * right[k][j];
            }
            let lo = target[i][j] - eps;
            let hi = target[i][j] + eps;
            out[i][j] = v.clamp(lo, hi);
        }
    }
    out
}

fn max_dev(left: &[Vec<f64>], right: &[Vec<f64>], target: &[Vec<f64>]) -> f64 {
    let rows = left.len();
    let cols = right.first().map_or(0, |r| r.len());
    let r = right.len();
    let mut worst: f64 = 0.0;
    for i in 0..rows {
        for j in 0..cols {
            let mut v = 0.0;
            for k in 0..r {
                v += left[i][k] * right[k][j];
            }
            worst = worst.max((v - target[i][j]).abs());
        }
    }
    worst
}

/// Least squares for R in L R = T: normal equations with a tiny ridge.
fn solve_right(left: &[Vec<f64>], t: &[Vec<f64>], right: &mut [Vec<f64>]) {
    let rows = left.len();
    let r = right.len();
    let cols = t.first().map_or(0, |x| x.len());
    // gram = L^T L + ridge
    let mut gram = vec![vec![0.0; r]; r];
    for a in 0..r {
        for b in 0..r {
            let mut s = 0.0;
            for i in 0..rows {
                s += left[i][a] * left[i][b];
            }
            gram[a][b] = s + if a == b { 1e-12 } else { 0.0 };
        }
    }
    for j in 0..cols {
        let mut rhs = vec![0.0; r];
        for (a, item) in rhs.iter_mut().enumerate() {
            let mut s = 0.0;
            for i in 0..rows {
                s += left[i][a] * t[i][j];
            }
            *item = s;
        }
        let sol = solve_dense(&gram, &rhs);
        for k in 0..r {
            right[k][j] = sol[k];
        }
    }
}

/// Least squares for L in L R = T.
fn solve_left(t: &[Vec<f64>], right: &[Vec<f64>], left: &mut [Vec<f64>]) {
    let rows = left.len();
    let r = right.len();
    let cols = right.first().map_or(0, |x| x.len());
    let mut gram = vec![vec![0.0; r]; r];
    for a in 0..r {
        for b in 0..r {
            let mut s = 0.0;
            for j in 0..cols {
                s += right[a][j] * right[b][j];
            }
            gram[a][b] = s + if a == b { 1e-12 } else { 0.0 };
        }
    }
    for i in 0..rows {
        let mut rhs = vec![0.0; r];
        for (a, item) in rhs.iter_mut().enumerate() {
            let mut s = 0.0;
            for j in 0..cols {
                s += right[a][j] * t[i][j];
            }
            *item = s;
        }
        let sol = solve_dense(&gram, &rhs);
        left[i][..r].copy_from_slice(&sol[..r]);
    }
}

/// Dense symmetric solve with partial pivoting.
fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().map(|row| row.clone()).collect();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col];
        if p.abs() < 1e-300 {
            continue;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[i][col] / p;
            for j in col..n {
                m[i][j] -= f * m[col][j];
            }
            rhs[i] -= f * rhs[col];
        }
    }
    (0..n)
        .map(|i| {
            if m[i][i].abs() < 1e-300 {
                0.0
            } else {
                rhs[i] / m[i][i]
            }
        })
        .collect()
}

/// The 4x4 complement-of-inner-product matrix, a standard test target.
pub fn ip_complement_matrix(n: usize) -> Result<ExactMatrix> {
    if n > 6 {
        return Err(Error::CapExceeded {
            what: "IP-complement matrix",
            needed: n,
            cap: 6,
        });
    }
    let dim = 1usize << n;
    Ok(ExactMatrix::from_fn(dim, dim, |x, y| {
        if (x & y).count_ones() % 2 == 0 {
            num_traits::One::one()
        } else {
            Rat::zero()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::default_eps;
    use crate::util::rat;

    #[test]
    fn exact_rank_fallback() {
        let m = ExactMatrix::identity(4);
        let w = approx_rank_upper(&m, &default_eps(), 4, 0, &AlsOptions::default())
            .unwrap()
            .expect("factorization fallback");
        assert_eq!(w.rank, 4);
        assert!(w.max_dev.is_zero());
        assert_eq!(w.left.mul(&w.right).unwrap(), m);
    }

    #[test]
    fn ip_complement_rank3_witness() {
        let m = ip_complement_matrix(2).unwrap();
        assert_eq!(m.rank_exact(), 4);
        let opts = AlsOptions::default();
        let w = approx_rank_upper(&m, &default_eps(), 3, 0, &opts)
            .unwrap()
            .expect("rank-3 witness within 1/3");
        assert_eq!(w.rank, 3);
        let threshold = default_eps() + &opts.slack;
        assert!(w.max_dev <= threshold, "max_dev {}", w.max_dev);
        // certified from the product, independently
        let product = w.left.mul(&w.right).unwrap();
        assert!(product.rank_exact() <= 3);
    }

    #[test]
    fn gershgorin_forbidden_regime_stays_inconclusive() {
        // identity with eps < 2^-n cannot drop rank; ALS must not "succeed"
        let m = ExactMatrix::identity(4);
        let eps = rat(1, 20);
        let opts = AlsOptions {
            restarts: 8,
            sweeps: 60,
            ..AlsOptions::default()
        };
        let res = approx_rank_upper(&m, &eps, 3, 1, &opts).unwrap();
        assert!(res.is_none());
    }

    #[test]
    fn monotone_in_rank() {
        // success at rank r implies success at r' > r (factorization pads)
        let m = ip_complement_matrix(2).unwrap();
        let opts = AlsOptions::default();
        let w3 = approx_rank_upper(&m, &default_eps(), 3, 0, &opts).unwrap();
        let w4 = approx_rank_upper(&m, &default_eps(), 4, 0, &opts).unwrap();
        assert!(w3.is_some());
        assert!(w4.is_some());
        assert!(w4.unwrap().max_dev <= w3.unwrap().max_dev);
    }

    #[test]
    fn rank_zero_cases() {
        let z = ExactMatrix::zeros(3, 3);
        let w = approx_rank_upper(&z, &default_eps(), 0, 0, &AlsOptions::default())
            .unwrap()
            .expect("zero matrix within eps of zero");
        assert_eq!(w.rank, 0);
        let m = ExactMatrix::identity(2);
        assert!(
            approx_rank_upper(&m, &default_eps(), 0, 0, &AlsOptions::default())
                .unwrap()
                .is_none()
        );
    }
}
