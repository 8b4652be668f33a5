//! Exact integer/rational matrices: rank via fraction-free elimination,
//! rank factorization, Kronecker products, distinct rows, a Gershgorin
//! full-rank certificate, and random Boolean matrices.

use crate::error::{Error, Result};
use crate::util::{derive_seed, rat_int, rat_to_string, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default cap on either dimension of a Kronecker product result.
pub const DEFAULT_KRONECKER_CAP: usize = 4096;

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

/// Exact factorization M = left * right with inner dimension rank(M).
#[derive(Debug, Clone)]
pub struct RankFactorization {
    pub left: ExactMatrix,
    pub right: ExactMatrix,
    pub rank: usize,
}

/// Outcome of the Gershgorin disc check: `Certified` proves full rank,
/// `Uncertified` claims nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GershgorinOutcome {
    Certified,
    Uncertified,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "entry count {} does not match {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(ExactMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|v| rat_int(*v)).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Rat::one(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn transpose(&self) -> ExactMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_boolean(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Pointwise 1 - entry; meaningful for 0/1 matrices.
    pub fn complement01(&self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| Rat::one() - v).collect(),
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidParameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with the default result-size cap.
    pub fn kronecker(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.kronecker_capped(other, DEFAULT_KRONECKER_CAP)
    }

    pub fn kronecker_capped(&self, other: &ExactMatrix, cap: usize) -> Result<ExactMatrix> {
        let rows = self.rows.checked_mul(other.rows).unwrap_or(usize::MAX);
        let cols = self.cols.checked_mul(other.cols).unwrap_or(usize::MAX);
        if rows > cap || cols > cap {
            return Err(Error::CapExceeded {
                what: "kronecker product",
                needed: rows.max(cols),
                cap,
            });
        }
        let mut out = ExactMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = a * other.get(k, l);
                        out.set(i * other.rows + k, j * other.cols + l, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Number of pairwise-distinct rows.
    pub fn distinct_rows(&self) -> usize {
        use std::collections::HashSet;
        let mut seen: HashSet<Vec<String>> = HashSet::new();
        for i in 0..self.rows {
            let key: Vec<String> = (0..self.cols)
                .map(|j| rat_to_string(self.get(i, j)))
                .collect();
            seen.insert(key);
        }
        seen.len()
    }

    /// Exact rank over the rationals.
    ///
    /// Rows are scaled integer (rank-preserving), then eliminated with
    /// fraction-free Bareiss pivoting. An i128 fast path covers matrices
    /// whose intermediate minors stay small; anything else falls back to
    /// arbitrary precision.
    pub fn rank_exact(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let ints = self.cleared_integer_rows();
        if let Some(small) = to_i128_matrix(&ints) {
            if let Some(rank) = bareiss_rank_i128(small, self.rows, self.cols) {
                return rank;
            }
        }
        bareiss_rank_bigint(ints, self.rows, self.cols)
    }

    /// Row-wise denominator clearing: multiplies each row by the LCM of its
    /// denominators, which preserves rank.
    fn cleared_integer_rows(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                let den = self.get(i, j).denom();
                lcm = num_integer::lcm(lcm, den.clone());
            }
            for j in 0..self.cols {
                let e = self.get(i, j);
                out.push(e.numer() * (&lcm / e.denom()));
            }
        }
        out
    }

    /// Rank factorization M = left * right where `left` holds the leftmost
    /// independent columns of M and `right` their coordinates (from the
    /// reduced row echelon form).
    pub fn rank_factorization(&self) -> RankFactorization {
        let (rref, pivots) = self.rref();
        let r = pivots.len();
        if r == 0 {
            return RankFactorization {
                left: ExactMatrix::zeros(self.rows, 0),
                right: ExactMatrix::zeros(0, self.cols),
                rank: 0,
            };
        }
        let left = ExactMatrix::from_fn(self.rows, r, |i, j| self.get(i, pivots[j]).clone());
        let right = ExactMatrix::from_fn(r, self.cols, |i, j| rref.get(i, j).clone());
        RankFactorization {
            left,
            right,
            rank: r,
        }
    }

    /// Reduced row echelon form and pivot column indices, exact arithmetic.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // first nonzero in this column at or below `row`
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let a = m.get(row, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(row, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = {
                let piv = m.get(row, col).clone();
                Rat::one() / piv
            };
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &factor * m.get(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Gershgorin disc certificate for near-identity matrices.
    ///
    /// `Certified` means every disc excludes zero, which proves full rank;
    /// this always holds when the entry-wise deviation from the identity is
    /// `eps < 2^-n` on a `2^n x 2^n` matrix. `Uncertified` is not a
    /// singularity claim.
    pub fn gershgorin_full_rank_check(&self, eps: &Rat) -> Result<GershgorinOutcome> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let dev = if i == j {
                    (self.get(i, j) - Rat::one()).abs()
                } else {
                    self.get(i, j).abs()
                };
                if &dev > eps {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i},{j}) deviates from the identity by more than eps"
                    )));
                }
            }
        }
        for i in 0..self.rows {
            let diag = self.get(i, i).abs();
            let mut radius = Rat::zero();
            for j in 0..self.cols {
                if j != i {
                    radius += self.get(i, j).abs();
                }
            }
            if diag <= radius {
                return Ok(GershgorinOutcome::Uncertified);
            }
        }
        Ok(GershgorinOutcome::Certified)
    }

    /// JSON form: dims plus row-major numerator/denominator pairs.
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|v| [v.numer().to_string(), v.denom().to_string()])
                .collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<ExactMatrix> {
        let parse = |s: &str| -> Result<BigInt> {
            s.parse()
                .map_err(|_| Error::Parse {
                    token: s.to_string(),
                    input: "matrix json".to_string(),
                })
        };
        let mut entries = Vec::with_capacity(json.entries.len());
        for pair in &json.entries {
            let num = parse(&pair[0])?;
            let den = parse(&pair[1])?;
            if den.is_zero() {
                return Err(Error::InvalidParameter("zero denominator".to_string()));
            }
            entries.push(Rat::new(num, den));
        }
        ExactMatrix::new(json.rows, json.cols, entries)
    }
}

/// Serialized matrix: dims + row-major numerator/denominator string pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[String; 2]>,
}

fn to_i128_matrix(entries: &[BigInt]) -> Option<Vec<i128>> {
    use num_traits::ToPrimitive;
    // Stay well under i128 so products of two intermediates cannot overflow
    // the checked ops' working range too early.
    entries.iter().map(|v| v.to_i128()).collect()
}

/// Fraction-free Bareiss elimination over i128 with overflow detection.
/// Returns None if any intermediate would overflow.
fn bareiss_rank_i128(mut m: Vec<i128>, rows: usize, cols: usize) -> Option<usize> {
    let at = |m: &Vec<i128>, i: usize, j: usize| m[i * cols + j];
    let mut rank = 0usize;
    let mut prev: i128 = 1;
    let steps = rows.min(cols);
    let mut row = 0usize;
    let mut col = 0usize;
    while row < steps && col < cols {
        // first nonzero pivot in column `col` at or below `row`
        let Some(p) = (row..rows).find(|&i| at(&m, i, col) != 0) else {
            col += 1;
            continue;
        };
        if p != row {
            for j in 0..cols {
                m.swap(row * cols + j, p * cols + j);
            }
        }
        let pivot = at(&m, row, col);
        for i in (row + 1)..rows {
            let head = at(&m, i, col);
            for j in (col + 1)..cols {
                let a = pivot.checked_mul(at(&m, i, j))?;
                let b = head.checked_mul(at(&m, row, j))?;
                let num = a.checked_sub(b)?;
                // Bareiss: division by the previous pivot is exact.
                m[i * cols + j] = num / prev;
            }
            m[i * cols + col] = 0;
        }
        prev = pivot;
        rank += 1;
        row += 1;
        col += 1;
    }
    Some(rank)
}

/// Fraction-free Bareiss elimination over arbitrary-precision integers.
fn bareiss_rank_bigint(mut m: Vec<BigInt>, rows: usize, cols: usize) -> usize {
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let steps = rows.min(cols);
    let mut row = 0usize;
    let mut col = 0usize;
    while row < steps && col < cols {
        let Some(p) = (row..rows).find(|&i| !m[i * cols + col].is_zero()) else {
            col += 1;
            continue;
        };
        if p != row {
            for j in 0..cols {
                m.swap(row * cols + j, p * cols + j);
            }
        }
        let pivot = m[row * cols + col].clone();
        for i in (row + 1)..rows {
            let head = m[i * cols + col].clone();
            if head.is_zero() {
                continue;
            }
            for j in (col + 1)..cols {
                let num = &pivot * &m[i * cols + j] - &head * &m[row * cols + j];
                m[i * cols + j] = num / &prev;
            }
            m[i * cols + col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        row += 1;
        col += 1;
    }
    rank
}

/// Exact rank of a 0/1 matrix given as bits, bypassing rational wrapping.
/// Shares the Bareiss core with `ExactMatrix::rank_exact`.
pub fn rank_01(rows: usize, cols: usize, bits: impl Fn(usize, usize) -> bool + Copy) -> usize {
    let mut m = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            m.push(bits(i, j) as i128);
        }
    }
    match bareiss_rank_i128(m, rows, cols) {
        Some(r) => r,
        None => {
            let big: Vec<BigInt> = (0..rows)
                .flat_map(|i| (0..cols).map(move |j| BigInt::from(bits(i, j) as i64)))
                .collect();
            bareiss_rank_bigint(big, rows, cols)
        }
    }
}

/// Uniform random 0/1 matrix from a seeded generator.
pub fn random_boolean_matrix(m: usize, seed: u64) -> ExactMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ExactMatrix::from_fn(m, m, |_, _| {
        if rng.gen::<bool>() {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}

/// One row of the singular-fraction experiment output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularFractionRow {
    pub dim: usize,
    pub trials: u64,
    pub singular_count: u64,
    pub singular_fraction: f64,
}

/// Fraction of random m x m 0/1 matrices with rank < m, per dimension.
///
/// Trials run in parallel; each trial derives its own seed from
/// (seed, dim, index), so results are deterministic for a given seed.
pub fn singular_fraction_experiment(
    dims: &[usize],
    trials: u64,
    seed: u64,
) -> Vec<SingularFractionRow> {
    dims.iter()
        .map(|&dim| {
            let singular_count = (0..trials)
                .into_par_iter()
                .filter(|&t| {
                    let trial_seed = derive_seed(seed, dim as u64, t);
                    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
                    let bits: Vec<bool> = (0..dim * dim).map(|_| rng.gen::<bool>()).collect();
                    rank_01(dim, dim, |i, j| bits[i * dim + j]) < dim
                })
                .count() as u64;
            SingularFractionRow {
                dim,
                trials,
                singular_count,
                singular_fraction: singular_count as f64 / trials as f64,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rat;

    fn m01(rows: usize, cols: usize, bits: &[u8]) -> ExactMatrix {
        ExactMatrix::from_i64(
            rows,
            cols,
            &bits.iter().map(|b| *b as i64).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(ExactMatrix::identity(4).rank_exact(), 4);
        assert_eq!(m01(2, 2, &[1, 1, 1, 0]).rank_exact(), 2); // DISJ on 1 bit
        assert_eq!(ExactMatrix::ones(3, 3).rank_exact(), 1);
        assert_eq!(ExactMatrix::zeros(3, 5).rank_exact(), 0);
    }

    #[test]
    fn rank_rational_entries() {
        let m = ExactMatrix::new(
            2,
            2,
            vec![rat(1, 2), rat(1, 3), rat(3, 2), rat(1, 1)],
        )
        .unwrap();
        assert_eq!(m.rank_exact(), 1); // second row = 3 * first row
    }

    #[test]
    fn rank_permutation_and_transpose_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let r = rng.gen_range(1..=6);
            let c = rng.gen_range(1..=6);
            let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-3..=3)).collect();
            let m = ExactMatrix::from_i64(r, c, &entries).unwrap();
            let base = m.rank_exact();
            assert_eq!(m.transpose().rank_exact(), base);
            // random row swap
            let i = rng.gen_range(0..r);
            let j = rng.gen_range(0..r);
            let mut swapped = entries.clone();
            for k in 0..c {
                swapped.swap(i * c + k, j * c + k);
            }
            assert_eq!(
                ExactMatrix::from_i64(r, c, &swapped).unwrap().rank_exact(),
                base
            );
        }
    }

    #[test]
    fn rank_factorization_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let r = rng.gen_range(1..=6);
            let c = rng.gen_range(1..=6);
            let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-2..=2)).collect();
            let m = ExactMatrix::from_i64(r, c, &entries).unwrap();
            let f = m.rank_factorization();
            assert_eq!(f.rank, m.rank_exact());
            if f.rank == 0 {
                assert!(m.entries().iter().all(|v| v.is_zero()));
                continue;
            }
            let back = f.left.mul(&f.right).unwrap();
            assert_eq!(back, m);
            assert_eq!(f.left.rank_exact(), f.rank);
            assert_eq!(f.right.rank_exact(), f.rank);
        }
    }

    #[test]
    fn rank_factorization_examples() {
        let id = ExactMatrix::identity(2);
        let f = id.rank_factorization();
        assert_eq!(f.rank, 2);
        assert_eq!(f.left, id);
        assert_eq!(f.right, ExactMatrix::identity(2));

        let ones = ExactMatrix::ones(3, 3);
        let f = ones.rank_factorization();
        assert_eq!(f.rank, 1);
        assert_eq!(f.left, ExactMatrix::ones(3, 1));
        assert_eq!(f.right, ExactMatrix::ones(1, 3));
    }

    #[test]
    fn kronecker_products() {
        let i2 = ExactMatrix::identity(2);
        assert_eq!(i2.kronecker(&i2).unwrap(), ExactMatrix::identity(4));

        let d1 = m01(2, 2, &[1, 1, 1, 0]);
        let d2 = d1.kronecker(&d1).unwrap();
        assert_eq!(d2.rank_exact(), 4);

        let one = ExactMatrix::ones(1, 1);
        assert_eq!(d1.kronecker(&one).unwrap(), d1);

        let big = ExactMatrix::zeros(100, 100);
        assert!(matches!(
            big.kronecker_capped(&big, 4096),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn kronecker_rank_multiplicative_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a_entries: Vec<i64> = (0..16).map(|_| rng.gen_range(-2..=2)).collect();
            let b_entries: Vec<i64> = (0..16).map(|_| rng.gen_range(-2..=2)).collect();
            let a = ExactMatrix::from_i64(4, 4, &a_entries).unwrap();
            let b = ExactMatrix::from_i64(4, 4, &b_entries).unwrap();
            let k = a.kronecker(&b).unwrap();
            assert_eq!(k.rank_exact(), a.rank_exact() * b.rank_exact());
        }
    }

    #[test]
    fn distinct_row_counts() {
        assert_eq!(ExactMatrix::identity(4).distinct_rows(), 4);
        assert_eq!(ExactMatrix::ones(3, 3).distinct_rows(), 1);
    }

    #[test]
    fn gershgorin_certificates() {
        // I4 + 0.05 everywhere: discs exclude zero
        let m = ExactMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Rat::one() + rat(1, 20)
            } else {
                rat(1, 20)
            }
        });
        assert_eq!(
            m.gershgorin_full_rank_check(&rat(1, 20)).unwrap(),
            GershgorinOutcome::Certified
        );

        assert_eq!(
            ExactMatrix::identity(2)
                .gershgorin_full_rank_check(&Rat::zero())
                .unwrap(),
            GershgorinOutcome::Certified
        );

        let m = m01(2, 2, &[1, 1, 1, 0]);
        assert_eq!(
            m.gershgorin_full_rank_check(&Rat::one()).unwrap(),
            GershgorinOutcome::Uncertified
        );

        assert!(ExactMatrix::zeros(2, 3)
            .gershgorin_full_rank_check(&Rat::one())
            .is_err());
    }

    #[test]
    fn gershgorin_never_certifies_singular() {
        // Random certified instances must pass the exact-rank cross-check.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut certified = 0;
        while certified < 200 {
            let n = rng.gen_range(2..=4usize);
            let dim = 1 << n;
            let eps_num = rng.gen_range(1..(1i64 << n));
            let eps = rat(1, 1 << n) * rat(eps_num, 1 << n); // < 2^-n
            let m = ExactMatrix::from_fn(dim, dim, |i, j| {
                let delta = rat(rng.gen_range(-1000..=1000), 1000) * &eps;
                if i == j {
                    Rat::one() + delta
                } else {
                    delta
                }
            });
            if m.gershgorin_full_rank_check(&eps).unwrap() == GershgorinOutcome::Certified {
                assert_eq!(m.rank_exact(), dim);
                certified += 1;
            }
        }
    }

    #[test]
    fn singular_fraction_small_dims() {
        // m=1: only [0] is singular, expect about one half
        let rows = singular_fraction_experiment(&[1], 2000, 42);
        let f = rows[0].singular_fraction;
        assert!((0.45..0.55).contains(&f), "fraction {f}");

        // m=2 exhaustive: 10 of 16 matrices are singular
        let mut singular = 0;
        for code in 0u32..16 {
            let m = m01(
                2,
                2,
                &[
                    (code & 1) as u8,
                    ((code >> 1) & 1) as u8,
                    ((code >> 2) & 1) as u8,
                    ((code >> 3) & 1) as u8,
                ],
            );
            if m.rank_exact() < 2 {
                singular += 1;
            }
        }
        assert_eq!(singular, 10);
    }

    #[test]
    fn experiment_is_deterministic() {
        let a = singular_fraction_experiment(&[3, 4], 500, 9);
        let b = singular_fraction_experiment(&[3, 4], 500, 9);
        assert_eq!(a[0].singular_count, b[0].singular_count);
        assert_eq!(a[1].singular_count, b[1].singular_count);
    }

    #[test]
    fn matrix_json_roundtrip() {
        let m = ExactMatrix::new(2, 2, vec![rat(1, 3), rat(-2, 1), rat(0, 1), rat(5, 7)]).unwrap();
        let json = m.to_json();
        let back = ExactMatrix::from_json(&json).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn rank_01_matches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let d = rng.gen_range(1..=8usize);
            let bits: Vec<bool> = (0..d * d).map(|_| rng.gen()).collect();
            let viaexact = ExactMatrix::from_fn(d, d, |i, j| {
                if bits[i * d + j] {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            })
            .rank_exact();
            let fast = rank_01(d, d, |i, j| bits[i * d + j]);
            assert_eq!(fast, viaexact);
        }
    }
}
