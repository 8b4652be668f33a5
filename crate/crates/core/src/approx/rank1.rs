//! Exact decision of rank-<=1 entrywise approximability for 0/1 matrices
//! with eps < 1/2.
//!
//! In that regime each 1-entry forces a strictly positive product and each
//! 0-entry a symmetric box around zero, so signs normalize away and the
//! question reduces to a multiplicative difference-constraint system over
//! positive magnitudes, decided exactly by cycle detection with rational
//! potentials.

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::util::Rat;
use num_traits::{One, Signed, Zero};

/// Is there a matrix of rank at most 1 within eps of m, entrywise?
/// Exact for 0/1 matrices and 0 <= eps < 1/2.
pub fn rank_le_1_approx_feasible(m: &ExactMatrix, eps: &Rat) -> Result<bool> {
    if !m.is_boolean() {
        return Err(Error::InvalidParameter(
            "rank-1 decision requires a 0/1 matrix".to_string(),
        ));
    }
    if eps.is_negative() || eps >= &Rat::new(1.into(), 2.into()) {
        return Err(Error::InvalidParameter(
            "rank-1 decision requires 0 <= eps < 1/2".to_string(),
        ));
    }
    // Rows/cols that are all zero can take a zero factor; remove them.
    let rows: Vec<usize> = (0..m.rows())
        .filter(|&i| (0..m.cols()).any(|j| m.get(i, j).is_one()))
        .collect();
    let cols: Vec<usize> = (0..m.cols())
        .filter(|&j| (0..m.rows()).any(|i| m.get(i, j).is_one()))
        .collect();
    if rows.is_empty() {
        return Ok(true); // the zero matrix covers everything within eps
    }
    // Remaining rows and columns need nonzero factors. 0-entries then need
    // 0 < |z_i w_j| <= eps, impossible at eps = 0.
    if eps.is_zero() {
        let rectangle = rows
            .iter()
            .all(|&i| cols.iter().all(|&j| m.get(i, j).is_one()));
        return Ok(rectangle);
    }
    // Variables p_i = z_i and q_j = 1/w_j (all positive, signs normalized).
    // For each entry, L <= p_i / q_j <= U with (L, U) = (1-eps, 1+eps) on
    // 1-entries and (0, eps] on 0-entries:
    //   p_i <= U * q_j           (edge q_j -> p_i, factor U)
    //   q_j <= (1/L) * p_i        (edge p_i -> q_j, factor 1/L), L > 0 only
    // Feasible over positives iff no constraint cycle multiplies below 1.
    let nr = rows.len();
    let nc = cols.len();
    let nodes = nr + nc;
    let mut edges: Vec<(usize, usize, Rat)> = Vec::new();
    let one = Rat::one();
    for (ri, &i) in rows.iter().enumerate() {
        for (cj, &j) in cols.iter().enumerate() {
            let (lo, hi) = if m.get(i, j).is_one() {
                (Some(&one - eps), &one + eps)
            } else {
                (None, eps.clone())
            };
            edges.push((nr + cj, ri, hi)); // p_i <= U q_j
            if let Some(l) = lo {
                edges.push((ri, nr + cj, Rat::one() / l)); // q_j <= p_i / L
            }
        }
    }
    // Multiplicative Bellman-Ford: potentials start at 1; a relaxation pass
    // after |V| rounds means a sub-unit cycle, i.e. infeasible.
    let mut pot = vec![Rat::one(); nodes];
    for _ in 0..nodes {
        let mut changed = false;
        for (src, dst, factor) in &edges {
            let candidate = &pot[*src] * factor;
            if candidate < pot[*dst] {
                pot[*dst] = candidate;
                changed = true;
            }
        }
        if !changed {
            return Ok(true);
        }
    }
    for (src, dst, factor) in &edges {
        if &pot[*src] * factor < pot[*dst] {
            return Ok(false);
        }
    }
    Ok(true)
}
