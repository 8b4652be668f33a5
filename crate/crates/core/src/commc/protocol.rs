//! Executable recursive cover protocol.
//!
//! Given a 0-cover R_1..R_c of f, one round costs a flag bit plus a
//! fixed-width ceil(log2(c+1))-bit rectangle index. A rectangle is type 1
//! when the rank of its row block is at most half the current rank; each
//! round either ends the protocol or halves the rank, giving
//! cost <= (1 + ceil(log2(c+1))) * (1 + ceil(log2 rank)). A 1-cover runs on
//! the complement, with the bound (1 + ceil(log2(C1+1))) * (2 + ceil(log2 rank)).

use super::cover::RectangleCover;
use super::CommProblem;
use crate::error::{Error, Result};
use crate::linalg::rank_01;
use crate::util::ceil_log2;
use serde::{Deserialize, Serialize};

/// One execution of the protocol on a fixed input pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub x: usize,
    pub y: usize,
    /// Bit transcript in send order.
    pub transcript: Vec<bool>,
    pub output: bool,
    /// Bits exchanged on this input.
    pub cost: usize,
}

impl ProtocolRun {
    /// Transcript packed low-bit-first into bytes, rendered as hex.
    pub fn transcript_hex(&self) -> String {
        let mut bytes = vec![0u8; self.transcript.len().div_ceil(8)];
        for (k, b) in self.transcript.iter().enumerate() {
            if *b {
                bytes[k / 8] |= 1 << (k % 8);
            }
        }
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The recursive protocol driven by a 0-cover of its working matrix.
#[derive(Debug, Clone)]
pub struct LovaszSaksProtocol {
    /// 0/1 working matrix (complement of the original for 1-cover builds).
    bits: Vec<Vec<bool>>,
    rects: Vec<(Vec<u32>, Vec<u32>)>,
    /// Output negation: set when running on the complement.
    negate: bool,
    index_width: usize,
    /// Rank of the original problem matrix, for the theorem-shaped bound.
    original_rank: usize,
    from_one_cover: bool,
}

impl LovaszSaksProtocol {
    /// Build from a valid 0-cover of p.
    pub fn from_zero_cover(p: &CommProblem, cover: &RectangleCover) -> Result<Self> {
        if cover.target {
            return Err(Error::InvalidCover(
                "expected a 0-cover (target = 0)".to_string(),
            ));
        }
        cover.validate(p)?;
        Ok(Self::build(p, cover, false, false))
    }

    /// Build from a valid 1-cover of p; the protocol runs on the complement
    /// (whose 0s are exactly p's 1s) and negates the output.
    pub fn from_one_cover(p: &CommProblem, cover: &RectangleCover) -> Result<Self> {
        if !cover.target {
            return Err(Error::InvalidCover(
                "expected a 1-cover (target = 1)".to_string(),
            ));
        }
        cover.validate(p)?;
        Ok(Self::build(p, cover, true, true))
    }

    fn build(p: &CommProblem, cover: &RectangleCover, complement: bool, negate: bool) -> Self {
        let m = p.matrix();
        let bits: Vec<Vec<bool>> = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| p.bit(i, j) != complement)
                    .collect()
            })
            .collect();
        let rects = cover
            .rectangles
            .iter()
            .map(|r| (r.rows.clone(), r.cols.clone()))
            .collect();
        LovaszSaksProtocol {
            bits,
            rects,
            negate,
            index_width: ceil_log2(cover.rectangles.len() as u64 + 1) as usize,
            original_rank: p.rank(),
            from_one_cover: negate,
        }
    }

    fn sub_rank(&self, rows: &[usize], cols: &[usize]) -> usize {
        if rows.is_empty() || cols.is_empty() {
            return 0;
        }
        rank_01(rows.len(), cols.len(), |i, j| self.bits[rows[i]][cols[j]])
    }

    fn monochromatic(&self, rows: &[usize], cols: &[usize]) -> Option<bool> {
        let first = self.bits[rows[0]][cols[0]];
        for &i in rows {
            for &j in cols {
                if self.bits[i][j] != first {
                    return None;
                }
            }
        }
        Some(first)
    }

    fn push_index(&self, transcript: &mut Vec<bool>, value: usize) {
        for b in 0..self.index_width {
            transcript.push(value >> b & 1 == 1);
        }
    }

    /// Execute on an input pair; the output always equals the problem entry.
    pub fn run(&self, x: usize, y: usize) -> Result<ProtocolRun> {
        let nrows = self.bits.len();
        let ncols = self.bits.first().map_or(0, |r| r.len());
        if x >= nrows || y >= ncols {
            return Err(Error::InvalidParameter(format!(
                "input ({x},{y}) outside the {nrows}x{ncols} matrix"
            )));
        }
        let mut rows: Vec<usize> = (0..nrows).collect();
        let mut cols: Vec<usize> = (0..ncols).collect();
        let mut transcript = Vec::new();
        let max_rounds = 2 * (2 + ceil_log2(self.original_rank.max(1) as u64) as usize);
        for _ in 0..max_rounds {
            if let Some(value) = self.monochromatic(&rows, &cols) {
                let output = value != self.negate;
                let cost = transcript.len();
                return Ok(ProtocolRun {
                    x,
                    y,
                    transcript,
                    output,
                    cost,
                });
            }
            let rank = self.sub_rank(&rows, &cols);
            // Classify rectangles on the current submatrix.
            let restricted: Vec<(Vec<usize>, Vec<usize>, bool)> = self
                .rects
                .iter()
                .map(|(rs, cs)| {
                    let sub_rows: Vec<usize> = rows
                        .iter()
                        .copied()
                        .filter(|i| rs.binary_search(&(*i as u32)).is_ok())
                        .collect();
                    let sub_cols: Vec<usize> = cols
                        .iter()
                        .copied()
                        .filter(|j| cs.binary_search(&(*j as u32)).is_ok())
                        .collect();
                    let type1 = 2 * self.sub_rank(&sub_rows, &cols) <= rank;
                    (sub_rows, sub_cols, type1)
                })
                .collect();
            // Alice: smallest type-1 rectangle containing her row.
            let alice_pick = restricted
                .iter()
                .position(|(rs, _, type1)| *type1 && rs.contains(&x));
            match alice_pick {
                Some(i) => {
                    transcript.push(true);
                    self.push_index(&mut transcript, i + 1);
                    rows = restricted[i].0.clone();
                    continue;
                }
                None => transcript.push(false),
            }
            // Bob: smallest type-2 rectangle containing his column.
            let bob_pick = restricted
                .iter()
                .position(|(_, cs, type1)| !*type1 && cs.contains(&y));
            match bob_pick {
                Some(j) => {
                    self.push_index(&mut transcript, j + 1);
                    cols = restricted[j].1.clone();
                }
                None => {
                    // (x,y) lies in no rectangle, so the entry is not covered
                    // by the 0-cover: it is a 1 of the working matrix.
                    self.push_index(&mut transcript, 0);
                    let output = !self.negate;
                    let cost = transcript.len();
                    return Ok(ProtocolRun {
                        x,
                        y,
                        transcript,
                        output,
                        cost,
                    });
                }
            }
        }
        Err(Error::Internal(
            "cover protocol failed to terminate within the rank bound".to_string(),
        ))
    }

    /// Worst-case bits over all inputs, by running the full input square.
    pub fn worst_case_cost(&self) -> Result<usize> {
        let nrows = self.bits.len();
        let ncols = self.bits.first().map_or(0, |r| r.len());
        let mut worst = 0;
        for x in 0..nrows {
            for y in 0..ncols {
                worst = worst.max(self.run(x, y)?.cost);
            }
        }
        Ok(worst)
    }

    /// The theorem-shaped cost bound with explicit ceilings:
    /// (1 + ceil(log2(c+1))) * (1 + ceil(log2 rank)) for 0-covers, and
    /// (1 + ceil(log2(C1+1))) * (2 + ceil(log2 rank)) for 1-cover builds.
    pub fn cost_bound(&self) -> usize {
        let per_round = 1 + self.index_width;
        let rank_term = ceil_log2(self.original_rank.max(1) as u64) as usize;
        if self.from_one_cover {
            per_round * (2 + rank_term)
        } else {
            per_round * (1 + rank_term)
        }
    }

    /// Check correctness on every input pair and the cost bound; returns the
    /// observed worst-case cost.
    pub fn verify_exhaustive(&self, p: &CommProblem) -> Result<usize> {
        let m = p.matrix();
        let mut worst = 0;
        for x in 0..m.rows() {
            for y in 0..m.cols() {
                let run = self.run(x, y)?;
                if run.output != p.bit(x, y) {
                    return Err(Error::Internal(format!(
                        "protocol output {} disagrees with f({x},{y})",
                        run.output
                    )));
                }
                worst = worst.max(run.cost);
            }
        }
        if worst > self.cost_bound() {
            return Err(Error::Internal(format!(
                "worst cost {worst} exceeds the bound {}",
                self.cost_bound()
            )));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::super::cover::{cover_from_monomials, Rectangle};
    use super::*;
    use crate::boolfn::{named_family, Composition, Family};
    use crate::linalg::ExactMatrix;

    #[test]
    fn constant_zero_with_full_rectangle_cover() {
        let p = CommProblem::from_raw(ExactMatrix::zeros(4, 4), "zero").unwrap();
        let cover = RectangleCover {
            target: false,
            rectangles: vec![Rectangle {
                rows: (0..4).collect(),
                cols: (0..4).collect(),
            }],
        };
        let proto = LovaszSaksProtocol::from_zero_cover(&p, &cover).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let run = proto.run(x, y).unwrap();
                assert!(!run.output);
            }
        }
        assert!(proto.worst_case_cost().unwrap() <= 2);
    }

    #[test]
    fn or2_via_monomial_cover() {
        let g = named_family(Family::Or, 2, None).unwrap();
        let p = CommProblem::build(g.clone(), Composition::And).unwrap();
        let cover = cover_from_monomials(&g, Composition::And).unwrap();
        let proto = LovaszSaksProtocol::from_one_cover(&p, &cover).unwrap();
        let worst = proto.verify_exhaustive(&p).unwrap();
        // c = 2encoded in ceil(log2 3) = 2 bits; bound (1+2)*(2+ceil(log2 3)) = 12
        assert!(worst <= proto.cost_bound());
        assert!(worst <= 9, "observed {worst}");
    }

    #[test]
    fn andor4_protocol_all_inputs() {
        let g = named_family(Family::AndOrTree, 4, None).unwrap();
        let p = CommProblem::build(g.clone(), Composition::And).unwrap();
        let cover = cover_from_monomials(&g, Composition::And).unwrap();
        assert!(cover.size() <= 4);
        let proto = LovaszSaksProtocol::from_one_cover(&p, &cover).unwrap();
        let worst = proto.verify_exhaustive(&p).unwrap();
        assert!(worst <= proto.cost_bound());
    }

    #[test]
    fn invalid_cover_rejected() {
        let p = CommProblem::from_raw(ExactMatrix::identity(2), "i2").unwrap();
        // Claims to 0-cover but contains a 1-cell.
        let bad = RectangleCover {
            target: false,
            rectangles: vec![Rectangle {
                rows: vec![0],
                cols: vec![0, 1],
            }],
        };
        assert!(LovaszSaksProtocol::from_zero_cover(&p, &bad).is_err());
        // Incomplete 0-cover.
        let partial = RectangleCover {
            target: false,
            rectangles: vec![Rectangle {
                rows: vec![0],
                cols: vec![1],
            }],
        };
        assert!(LovaszSaksProtocol::from_zero_cover(&p, &partial).is_err());
    }

    #[test]
    fn zero_cover_direct_on_complemented_problem() {
        // Build a 0-cover of DISJ_2's complement = 1-cover of DISJ_2's zeros.
        let g = named_family(Family::Nor, 2, None).unwrap();
        let p = CommProblem::build(g, Composition::And).unwrap();
        // 0-cells of p are pairs with intersecting supports; cover them by
        // the four rectangles "x_i = y_i = 1".
        let mut rectangles = Vec::new();
        for i in 0..2u32 {
            let rows: Vec<u32> = (0..4).filter(|x| x >> i & 1 == 1).collect();
            rectangles.push(Rectangle {
                rows: rows.clone(),
                cols: rows,
            });
        }
        let cover = RectangleCover {
            target: false,
            rectangles,
        };
        let proto = LovaszSaksProtocol::from_zero_cover(&p, &cover).unwrap();
        let worst = proto.verify_exhaustive(&p).unwrap();
        assert!(worst <= proto.cost_bound());
    }

    #[test]
    fn transcript_hex_packs_low_bit_first() {
        let run = ProtocolRun {
            x: 0,
            y: 0,
            transcript: vec![true, false, false, false, true, false, false, false, true],
            output: true,
            cost: 9,
        };
        assert_eq!(run.transcript_hex(), "1101");
    }
}
