//! Exact deterministic communication complexity via protocol-tree search.
//!
//! cost(R) = 0 for monochromatic R, else 1 + min over all bipartitions of
//! the speaking player's set of the max cost over the two halves. The
//! search runs as iterative deepening on a normalized submatrix with a
//! rank-based leaf-count prune: any depth-d tree has at most 2^d leaves,
//! and a monochromatic partition needs at least rank(M) one-leaves plus
//! rank(J - M) zero-leaves.

use super::CommProblem;
use crate::linalg::rank_01;
use crate::util::ceil_log2;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::OnceLock;

/// Default dimension cap for the exact search.
pub const DEFAULT_DEXACT_CAP: usize = 16;

/// Result of a d_exact query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DExactOutcome {
    /// True minimum protocol-tree depth.
    Exact { bits: u32 },
    /// Above the cap: [ceil(log2 rank), one-round cost] brackets D.
    Interval { lo: u32, hi: u32 },
}

/// Normalized submatrix: distinct rows and distinct columns, sorted to a
/// fixpoint so permutation-equivalent states usually share a key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Canon {
    cols: usize,
    rows: Vec<u32>,
}

fn canonicalize(rows: &[u32], cols: usize) -> Canon {
    // Dedupe rows, then columns, then sort both until stable. Dedup and
    // permutation both preserve protocol depth; the iteration cap only
    // limits normalization quality, not memo soundness (the key is the
    // normalized content itself).
    let mut row_pats: Vec<u32> = rows.to_vec();
    let mut col_count = cols;
    let mut rounds = 0;
    loop {
        rounds += 1;
        row_pats.sort_unstable();
        row_pats.dedup();
        // column patterns over current rows
        let mut col_pats: Vec<u32> = (0..col_count)
            .map(|j| {
                row_pats
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| *r >> j & 1 == 1)
                    .fold(0u32, |acc, (i, _)| acc | (1 << i))
            })
            .collect();
        let before = col_pats.clone();
        col_pats.sort_unstable();
        col_pats.dedup();
        let changed = before != col_pats;
        // rebuild rows over the new column order
        let new_rows: Vec<u32> = (0..row_pats.len())
            .map(|i| {
                col_pats
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| *c >> i & 1 == 1)
                    .fold(0u32, |acc, (j, _)| acc | (1 << j))
            })
            .collect();
        let rows_changed = {
            let mut sorted = new_rows.clone();
            sorted.sort_unstable();
            sorted != row_pats
        };
        col_count = col_pats.len();
        row_pats = new_rows;
        if (!changed && !rows_changed) || rounds >= 64 {
            row_pats.sort_unstable();
            return Canon {
                cols: col_count,
                rows: row_pats,
            };
        }
    }
}

impl Canon {
    fn is_monochromatic(&self) -> bool {
        let full = if self.cols == 32 {
            u32::MAX
        } else {
            (1u32 << self.cols) - 1
        };
        self.rows.iter().all(|r| *r == 0) || self.rows.iter().all(|r| *r == full)
    }

    /// ceil(log2(rank(M) + rank(J - M))): a valid depth lower bound.
    fn depth_lower_bound(&self) -> u32 {
        if self.is_monochromatic() {
            return 0;
        }
        let r = self.rows.len();
        let c = self.cols;
        let rank1 = rank_01(r, c, |i, j| self.rows[i] >> j & 1 == 1);
        let rank0 = rank_01(r, c, |i, j| self.rows[i] >> j & 1 == 0);
        ceil_log2((rank1 + rank0) as u64)
    }

    fn restrict_rows(&self, mask: u32) -> Vec<u32> {
        (0..self.rows.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.rows[i])
            .collect()
    }

    fn restrict_cols(&self, mask: u32) -> (Vec<u32>, usize) {
        let kept: Vec<usize> = (0..self.cols).filter(|j| mask >> j & 1 == 1).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                kept.iter()
                    .enumerate()
                    .filter(|(_, &j)| r >> j & 1 == 1)
                    .fold(0u32, |acc, (jj, _)| acc | (1 << jj))
            })
            .collect();
        (rows, kept.len())
    }
}

/// Bipartition masks of a k-element set, canonical half containing element 0,
/// proper and nonempty, ordered balanced-first.
fn partition_masks(k: usize) -> &'static [u32] {
    static CACHE: OnceLock<Vec<Vec<u32>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        (0..=DEFAULT_DEXACT_CAP)
            .map(|k| {
                if k < 2 {
                    return Vec::new();
                }
                let mut masks: Vec<u32> = (0..(1u32 << (k - 1)))
                    .map(|m| (m << 1) | 1)
                    .filter(|m| *m != (1u32 << k) - 1)
                    .collect();
                masks.sort_by_key(|m| {
                    let p = m.count_ones() as i64;
                    ((p - k as i64 / 2).abs(), *m)
                });
                masks
            })
            .collect()
    });
    &cache[k]
}

struct Searcher {
    memo: HashMap<(Canon, u32), bool>,
}

impl Searcher {
    /// Is there a protocol tree of depth <= d for this state?
    fn feasible(&mut self, state: &Canon, d: u32) -> bool {
        if state.is_monochromatic() {
            return true;
        }
        if d == 0 {
            return false;
        }
        if state.depth_lower_bound() > d {
            return false;
        }
        let key = (state.clone(), d);
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let mut ok = false;
        // Alice splits rows.
        let k = state.rows.len();
        if k >= 2 {
            for mask in partition_masks(k) {
                let half_a = canonicalize(&state.restrict_rows(*mask), state.cols);
                if !self.feasible(&half_a, d - 1) {
                    continue;
                }
                let comp = !*mask & ((1u32 << k) - 1);
                let half_b = canonicalize(&state.restrict_rows(comp), state.cols);
                if self.feasible(&half_b, d - 1) {
                    ok = true;
                    break;
                }
            }
        }
        // Bob splits columns.
        if !ok && state.cols >= 2 {
            let c = state.cols;
            for mask in partition_masks(c) {
                let (rows_a, cols_a) = state.restrict_cols(*mask);
                let half_a = canonicalize(&rows_a, cols_a);
                if !self.feasible(&half_a, d - 1) {
                    continue;
                }
                let comp = !*mask & ((1u32 << c) - 1);
                let (rows_b, cols_b) = state.restrict_cols(comp);
                let half_b = canonicalize(&rows_b, cols_b);
                if self.feasible(&half_b, d - 1) {
                    ok = true;
                    break;
                }
            }
        }
        self.memo.insert(key, ok);
        ok
    }
}

/// Exact minimum protocol-tree depth with the default 16 x 16 cap.
pub fn d_exact(p: &CommProblem) -> DExactOutcome {
    d_exact_capped(p, DEFAULT_DEXACT_CAP)
}

/// Exact search up to `cap`; larger matrices get the
/// [ceil(log2 rank), d_one_round] interval.
pub fn d_exact_capped(p: &CommProblem, cap: usize) -> DExactOutcome {
    let m = p.matrix();
    let (rows, cols) = (m.rows(), m.cols());
    if rows > cap.min(DEFAULT_DEXACT_CAP) || cols > cap.min(DEFAULT_DEXACT_CAP) {
        let rank = p.rank();
        return DExactOutcome::Interval {
            lo: ceil_log2(rank as u64),
            hi: p.d_one_round(),
        };
    }
    let bit_rows: Vec<u32> = (0..rows)
        .map(|i| {
            (0..cols)
                .filter(|&j| p.bit(i, j))
                .fold(0u32, |acc, j| acc | (1 << j))
        })
        .collect();
    let state = canonicalize(&bit_rows, cols);
    if state.is_monochromatic() {
        return DExactOutcome::Exact { bits: 0 };
    }
    // One-round protocols realize ceil(log2 distinct_rows) + 1 (and the
    // column-side analogue), so the search is bracketed.
    let ub_rows = ceil_log2(state.rows.len() as u64) + 1;
    let ub_cols = ceil_log2(state.cols as u64) + 1;
    let ub = ub_rows.min(ub_cols);
    let lb = state.depth_lower_bound();
    let mut searcher = Searcher {
        memo: HashMap::new(),
    };
    for d in lb..ub {
        if searcher.feasible(&state, d) {
            return DExactOutcome::Exact { bits: d };
        }
    }
    DExactOutcome::Exact { bits: ub }
}
