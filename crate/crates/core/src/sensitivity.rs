//! 0-block sensitivity, high-degree monomial hypergraphs, and blocking-set
//! search.
//!
//! For an input x, so_x(g) is the largest number of disjoint all-zero blocks
//! whose individual flips each change g; so(g) is the maximum over x.

use crate::boolfn::{BooleanFunction, SymmetricProfile};
use crate::error::{Error, Result};
use crate::polynomial::MultilinearPoly;
use crate::util::{derive_seed, submasks};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest arity for which the exact so search is allowed.
pub const EXACT_SO_CAP: usize = 12;

/// Witness for a value of so_x(g): the input and the disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroBlockWitness {
    /// Packed input (x1 = bit 0).
    pub x: u32,
    /// Arity, for rendering the bitstring.
    pub n: usize,
    /// Disjoint variable sets (1-based), each flip changing g.
    pub blocks: Vec<Vec<usize>>,
}

impl ZeroBlockWitness {
    /// Re-derive validity directly from g.
    pub fn validate(&self, g: &BooleanFunction) -> Result<()> {
        let mut seen = 0u32;
        let base = g.eval(self.x);
        for block in &self.blocks {
            let mut mask = 0u32;
            for &v in block {
                if v == 0 || v > g.arity() {
                    return Err(Error::VarOutOfRange(v, g.arity()));
                }
                let bit = 1 << (v - 1);
                if self.x & bit != 0 {
                    return Err(Error::BlockOnOnePosition(v));
                }
                if seen & bit != 0 {
                    return Err(Error::OverlappingBlocks(v));
                }
                seen |= bit;
                mask |= bit;
            }
            if g.eval(self.x | mask) == base {
                return Err(Error::Internal(format!(
                    "block {block:?} does not flip g at x={:#b}",
                    self.x
                )));
            }
        }
        Ok(())
    }

    /// Input as a bitstring `x1 x2 ... xn`.
    pub fn x_bitstring(&self) -> String {
        (0..self.n)
            .map(|i| if self.x >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Search mode for so and blocking sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exact,
    Greedy,
}

/// Result of a 0-block-sensitivity computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SensitivityResult {
    pub so: usize,
    pub witness: ZeroBlockWitness,
    /// True when the value is the true maximum, false for greedy lower bounds.
    pub exact: bool,
}

fn blocks_from_masks(masks: &[u32], n: usize) -> Vec<Vec<usize>> {
    masks
        .iter()
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect()
}

/// Minimal sensitive blocks at x: subsets of x's zeros whose flip changes g
/// and that contain no smaller such subset.
fn minimal_sensitive_blocks(g: &BooleanFunction, x: u32) -> Vec<u32> {
    let zeros = !x & g.full_mask();
    let base = g.eval(x);
    let mut by_size: Vec<u32> = submasks(zeros).filter(|s| *s != 0).collect();
    by_size.sort_by_key(|s| s.count_ones());
    let mut minimal: Vec<u32> = Vec::new();
    'outer: for s in by_size {
        if g.eval(x | s) == base {
            continue;
        }
        for m in &minimal {
            if m & !s == 0 {
                continue 'outer; // contains a smaller sensitive block
            }
        }
        minimal.push(s);
    }
    minimal
}

/// Maximum number of pairwise-disjoint masks, branch and bound.
fn max_disjoint_packing(blocks: &[u32]) -> (usize, Vec<u32>) {
    let mut order: Vec<u32> = blocks.to_vec();
    order.sort_by_key(|b| (b.count_ones(), *b));
    let mut best: Vec<u32> = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn recurse(
        order: &[u32],
        idx: usize,
        used: u32,
        current: &mut Vec<u32>,
        best: &mut Vec<u32>,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        if idx == order.len() {
            return;
        }
        // Bound: every further block needs at least the smallest remaining size.
        let min_size = order[idx..]
            .iter()
            .map(|b| b.count_ones())
            .min()
            .unwrap_or(1)
            .max(1);
        let free = (!used).count_ones().min(32) as usize;
        if current.len() + free / min_size as usize <= best.len() {
            return;
        }
        for i in idx..order.len() {
            let b = order[i];
            if b & used != 0 {
                continue;
            }
            current.push(b);
            recurse(order, i + 1, used | b, current, best);
            current.pop();
        }
    }
    recurse(&order, 0, 0, &mut current, &mut best);
    (best.len(), best)
}

/// so_x(g) exactly, with a witness.
pub fn so_at(g: &BooleanFunction, x: u32) -> (usize, Vec<u32>) {
    let minimal = minimal_sensitive_blocks(g, x);
    max_disjoint_packing(&minimal)
}

/// 0-block sensitivity so(g) = max_x so_x(g).
///
/// Exact mode enumerates minimal sensitive blocks per input and packs them
/// with branch and bound (arity capped); greedy mode packs blocks of size
/// up to 4 first-fit and yields a witnessed lower bound.
pub fn zero_block_sensitivity(g: &BooleanFunction, mode: SearchMode) -> Result<SensitivityResult> {
    let n = g.arity();
    match mode {
        SearchMode::Exact => {
            if n > EXACT_SO_CAP {
                return Err(Error::CapExceeded {
                    what: "exact 0-block sensitivity",
                    needed: n,
                    cap: EXACT_SO_CAP,
                });
            }
            let per_x: Vec<(usize, u32, Vec<u32>)> = (0u32..(1 << n))
                .into_par_iter()
                .map(|x| {
                    let (count, picked) = so_at(g, x);
                    (count, x, picked)
                })
                .collect();
            let (so, x, masks) = per_x
                .into_iter()
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .expect("nonempty input space");
            let witness = ZeroBlockWitness {
                x,
                n,
                blocks: blocks_from_masks(&masks, n),
            };
            witness.validate(g)?;
            Ok(SensitivityResult {
                so,
                witness,
                exact: true,
            })
        }
        SearchMode::Greedy => {
            let cap_size = 4u32.min(n as u32);
            let per_x: Vec<(usize, u32, Vec<u32>)> = (0u32..(1 << n))
                .into_par_iter()
                .map(|x| {
                    let base = g.eval(x);
                    let mut free = !x & g.full_mask();
                    let mut picked = Vec::new();
                    loop {
                        let mut found = None;
                        'sizes: for size in 1..=cap_size {
                            for s in submasks(free) {
                                if s.count_ones() == size && g.eval(x | s) != base {
                                    found = Some(s);
                                    break 'sizes;
                                }
                            }
                        }
                        match found {
                            Some(s) => {
                                picked.push(s);
                                free &= !s;
                            }
                            None => break,
                        }
                    }
                    (picked.len(), x, picked)
                })
                .collect();
            let (so, x, masks) = per_x
                .into_iter()
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .expect("nonempty input space");
            let witness = ZeroBlockWitness {
                x,
                n,
                blocks: blocks_from_masks(&masks, n),
            };
            witness.validate(g)?;
            Ok(SensitivityResult {
                so,
                witness,
                exact: false,
            })
        }
    }
}

/// so(g) for a symmetric profile, closed form; works at any arity.
///
/// For weight w, every block of size s flips the value iff the profile
/// differs between weights w and w+s; the best packing uses the smallest
/// flipping size exclusively.
pub fn so_symmetric(profile: &SymmetricProfile) -> usize {
    let n = profile.n();
    (0..=n)
        .map(|w| {
            let base = profile.values[w];
            let smallest = (1..=n - w).find(|s| profile.values[w + s] != base);
            match smallest {
                Some(s) => (n - w) / s,
                None => 0,
            }
        })
        .max()
        .unwrap_or(0)
}

/// Lemma check: for symmetric g, mon(g) <= n^(2 so(g)).
pub fn verify_mon_le_so_bound(g: &BooleanFunction) -> Result<bool> {
    let profile = g.is_symmetric().ok_or(Error::NonSymmetric)?;
    let mon = MultilinearPoly::mobius_transform(g).mon_count();
    let so = so_symmetric(&profile);
    Ok(mon_le_power(mon, g.arity(), so))
}

/// mon <= n^(2 so), in exact integer arithmetic.
pub fn mon_le_power(mon: usize, n: usize, so: usize) -> bool {
    let bound = num_bigint::BigUint::from(n).pow(2 * so as u32);
    num_bigint::BigUint::from(mon) <= bound
}

/// Set system over {1..n}; edges as variable bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub n: usize,
    pub edges: Vec<u32>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<u32>) -> Self {
        Hypergraph { n, edges }
    }

    /// True iff every edge has at least s vertices.
    pub fn is_s_hypergraph(&self, s: usize) -> bool {
        self.edges.iter().all(|e| e.count_ones() as usize >= s)
    }

    /// Smallest edge size; None for the empty hypergraph.
    pub fn min_edge_size(&self) -> Option<usize> {
        self.edges.iter().map(|e| e.count_ones() as usize).min()
    }

    /// Text form: one edge per line, space-separated 1-based indices.
    pub fn to_text(&self) -> String {
        self.edges
            .iter()
            .map(|e| {
                (0..self.n)
                    .filter(|i| e >> i & 1 == 1)
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn from_text(n: usize, text: &str) -> Result<Hypergraph> {
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut mask = 0u32;
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::Parse {
                    token: tok.to_string(),
                    input: line.to_string(),
                })?;
                if v == 0 || v > n {
                    return Err(Error::VarOutOfRange(v, n));
                }
                mask |= 1 << (v - 1);
            }
            edges.push(mask);
        }
        Ok(Hypergraph { n, edges })
    }
}

/// Hypergraph of the polynomial's monomials with degree >= s.
pub fn high_degree_hypergraph(p: &MultilinearPoly, s: usize) -> Hypergraph {
    Hypergraph {
        n: p.arity(),
        edges: p
            .terms()
            .map(|(m, _)| m)
            .filter(|m| m.count_ones() as usize >= s)
            .collect(),
    }
}

/// Outcome of a blocking-set search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockingSetOutcome {
    /// A blocking set within the size bound (1-based vertex list).
    Found(Vec<usize>),
    /// Exact search proved no blocking set of the requested size exists.
    NoneExists,
    /// Randomized search exhausted its budget; nothing is proven.
    Inconclusive,
}

/// Minimum hitting set via branch and bound; ties resolved toward the
/// lexicographically smallest vertex set.
fn min_hitting_set(h: &Hypergraph) -> Vec<usize> {
    if h.edges.iter().any(|e| *e == 0) {
        // An empty edge cannot be hit; treat as "needs everything plus one",
        // callers only compare sizes against caps.
        return (1..=h.n + 1).collect();
    }
    let mut best: Option<u32> = None;

    fn recurse(edges: &[u32], chosen: u32, n: usize, best: &mut Option<u32>) {
        if let Some(b) = best {
            // Strict improvement only: the first optimum found (ascending
            // vertex branch order) is kept, which fixes the tie-break.
            if chosen.count_ones() >= b.count_ones() {
                return;
            }
        }
        // Disjoint-edge lower bound on the vertices still needed.
        let mut lb = 0u32;
        let mut used = 0u32;
        let mut uncovered_exists = false;
        for &e in edges {
            if e & chosen != 0 {
                continue;
            }
            uncovered_exists = true;
            if e & used == 0 {
                lb += 1;
                used |= e;
            }
        }
        if !uncovered_exists {
            *best = Some(chosen);
            return;
        }
        if let Some(b) = best {
            if chosen.count_ones() + lb >= b.count_ones() {
                return;
            }
        }
        // Branch on the uncovered edge with fewest vertices.
        let pick = edges
            .iter()
            .filter(|e| *e & chosen == 0)
            .min_by_key(|e| e.count_ones())
            .copied()
            .expect("uncovered edge exists");
        for i in 0..n {
            if pick >> i & 1 == 1 {
                recurse(edges, chosen | (1 << i), n, best);
            }
        }
    }

    recurse(&h.edges, 0, h.n, &mut best);
    let mask = best.unwrap_or(0);
    (0..h.n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Blocking-set search.
///
/// Exact mode finds a true minimum hitting set and reports `NoneExists`
/// when it exceeds `max_size`. Randomized mode samples uniform
/// floor(n/2)-subsets with a budget of `64 * 2^s` attempts (s = smallest
/// edge size); exhaustion is inconclusive.
pub fn blocking_set(
    h: &Hypergraph,
    max_size: usize,
    mode: SearchMode,
    seed: u64,
) -> BlockingSetOutcome {
    if h.edges.is_empty() {
        return BlockingSetOutcome::Found(Vec::new());
    }
    if h.edges.iter().any(|e| *e == 0) {
        return match mode {
            SearchMode::Exact => BlockingSetOutcome::NoneExists,
            SearchMode::Greedy => BlockingSetOutcome::Inconclusive,
        };
    }
    match mode {
        SearchMode::Exact => {
            let set = min_hitting_set(h);
            if set.len() <= max_size {
                BlockingSetOutcome::Found(set)
            } else {
                BlockingSetOutcome::NoneExists
            }
        }
        SearchMode::Greedy => {
            let s = h.min_edge_size().unwrap_or(1).min(20);
            let budget = 64u64.saturating_mul(1 << s);
            let k = (h.n / 2).min(max_size).max(1);
            for attempt in 0..budget {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x6c53, attempt));
                let picks = sample(&mut rng, h.n, k.min(h.n));
                let mut mask = 0u32;
                for i in picks {
                    mask |= 1 << i;
                }
                if h.edges.iter().all(|e| e & mask != 0) {
                    let set = (0..h.n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| i + 1)
                        .collect();
                    return BlockingSetOutcome::Found(set);
                }
            }
            BlockingSetOutcome::Inconclusive
        }
    }
}

/// Provenance of a theorem-8 style bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SoProvenance {
    Exact,
    Witnessed,
}

/// Lower bound 2^sqrt(so/12) on the approximate monomial count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Theorem8Bound {
    pub so: usize,
    pub value: f64,
    pub provenance: SoProvenance,
}

/// The bound is monotone in so, so a witnessed lower bound on so yields a
/// valid (weaker) bound.
pub fn theorem8_lower_bound(so: usize, provenance: SoProvenance) -> Theorem8Bound {
    Theorem8Bound {
        so,
        value: 2f64.powf((so as f64 / 12.0).sqrt()),
        provenance,
    }
}

/// Convenience: bound from a truth table, exact when the arity permits.
pub fn theorem8_lower_bound_of(g: &BooleanFunction) -> Result<Theorem8Bound> {
    if let Some(profile) = g.is_symmetric() {
        return Ok(theorem8_lower_bound(
            so_symmetric(&profile),
            SoProvenance::Exact,
        ));
    }
    let mode = if g.arity() <= EXACT_SO_CAP {
        SearchMode::Exact
    } else {
        SearchMode::Greedy
    };
    let res = zero_block_sensitivity(g, mode)?;
    Ok(theorem8_lower_bound(
        res.so,
        if res.exact {
            SoProvenance::Exact
        } else {
            SoProvenance::Witnessed
        },
    ))
}
