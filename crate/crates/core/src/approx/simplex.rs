//! Exact rational linear feasibility: phase-1 simplex over `A a <= b` with
//! free variables, returning either a point or a Farkas certificate
//! (y >= 0, y^T A = 0, y^T b < 0), both verified in exact arithmetic.

use crate::error::{Error, Result};
use crate::util::Rat;
use num_traits::{One, Signed, Zero};

/// A verified witness of infeasibility for `A a <= b`.
#[derive(Debug, Clone)]
pub struct FarkasCertificate {
    /// One multiplier per constraint row.
    pub multipliers: Vec<Rat>,
}

impl FarkasCertificate {
    /// Exact check: y >= 0, y^T A = 0, y^T b < 0.
    pub fn verify(&self, rows: &[(Vec<Rat>, Rat)]) -> bool {
        if self.multipliers.len() != rows.len() {
            return false;
        }
        if self.multipliers.iter().any(|y| y.is_negative()) {
            return false;
        }
        let num_vars = rows.first().map_or(0, |(a, _)| a.len());
        for k in 0..num_vars {
            let mut dot = Rat::zero();
            for (y, (a, _)) in self.multipliers.iter().zip(rows) {
                dot += y * &a[k];
            }
            if !dot.is_zero() {
                return false;
            }
        }
        let mut yb = Rat::zero();
        for (y, (_, b)) in self.multipliers.iter().zip(rows) {
            yb += y * b;
        }
        yb.is_negative()
    }
}

/// Outcome of a feasibility solve.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    Feasible(Vec<Rat>),
    Infeasible(FarkasCertificate),
}

/// Decide feasibility of `A a <= b` for free `a`, exactly.
///
/// Each row is (coefficients, rhs). Free variables split into positive
/// parts, slacks make rows equalities, and artificial variables seed the
/// basis of negated rows; phase-1 minimizes the artificial sum. Pivots use
/// a steepest-coefficient rule that degrades to Bland's rule when the
/// objective stalls, so termination is guaranteed.
pub fn solve_feasibility(num_vars: usize, rows: &[(Vec<Rat>, Rat)]) -> Result<LpOutcome> {
    let n_rows = rows.len();
    if n_rows == 0 {
        return Ok(LpOutcome::Feasible(vec![Rat::zero(); num_vars]));
    }
    for (a, _) in rows {
        if a.len() != num_vars {
            return Err(Error::InvalidParameter(
                "constraint row width mismatch".to_string(),
            ));
        }
    }

    // Column layout: u (num_vars) | v (num_vars) | slacks (n_rows) | artificials.
    let negated: Vec<bool> = rows.iter().map(|(_, b)| b.is_negative()).collect();
    let n_art = negated.iter().filter(|x| **x).count();
    let n_cols = 2 * num_vars + n_rows + n_art;
    let rhs_col = n_cols;

    let mut tab: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n_cols + 1]; n_rows + 1];
    let mut basis: Vec<usize> = vec![0; n_rows];
    let mut art_index = 0usize;
    for (i, (a, b)) in rows.iter().enumerate() {
        let sign = if negated[i] { -Rat::one() } else { Rat::one() };
        for (k, coef) in a.iter().enumerate() {
            tab[i][k] = &sign * coef;
            tab[i][num_vars + k] = -(&sign * coef);
        }
        tab[i][2 * num_vars + i] = sign.clone();
        tab[i][rhs_col] = &sign * b;
        if negated[i] {
            let art_col = 2 * num_vars + n_rows + art_index;
            tab[i][art_col] = Rat::one();
            basis[i] = art_col;
            art_index += 1;
        } else {
            basis[i] = 2 * num_vars + i;
        }
    }
    // Objective: minimize the artificial sum. Reduced costs start as
    // c_j - sum over artificial-basic rows of their coefficients.
    let obj = n_rows;
    for j in 0..=n_cols {
        let mut v = Rat::zero();
        for i in 0..n_rows {
            if negated[i] {
                v -= &tab[i][j];
            }
        }
        tab[obj][j] = v;
    }
    for i in 0..n_rows {
        if negated[i] {
            let art_col = basis[i];
            tab[obj][art_col] += Rat::one(); // c_j = 1 for artificials
        }
    }

    let mut bland = false;
    let mut stall = 0usize;
    let mut last_obj = tab[obj][rhs_col].clone();
    let max_iters = 50_000usize;
    for iter in 0..max_iters {
        // Entering column.
        let entering = if bland {
            (0..n_cols).find(|&j| tab[obj][j].is_negative())
        } else {
            let mut best: Option<(usize, Rat)> = None;
            for j in 0..n_cols {
                if tab[obj][j].is_negative() {
                    match &best {
                        Some((_, v)) if &tab[obj][j] >= v => {}
                        _ => best = Some((j, tab[obj][j].clone())),
                    }
                }
            }
            best.map(|(j, _)| j)
        };
        let Some(enter) = entering else {
            break; // optimal
        };
        // Ratio test; Bland tie-break on the leaving basis variable.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..n_rows {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][rhs_col] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            // Phase-1 objective is bounded below by 0, so an unbounded ray
            // cannot happen with consistent data.
            return Err(Error::Internal("phase-1 simplex unbounded".to_string()));
        };
        // Pivot.
        let pivot = tab[pivot_row][enter].clone();
        for j in 0..=n_cols {
            tab[pivot_row][j] = &tab[pivot_row][j] / &pivot;
        }
        for i in 0..=n_rows {
            if i == pivot_row || tab[i][enter].is_zero() {
                continue;
            }
            let factor = tab[i][enter].clone();
            for j in 0..=n_cols {
                let delta = &factor * &tab[pivot_row][j];
                tab[i][j] -= delta;
            }
        }
        basis[pivot_row] = enter;
        // Stall detection: switch to Bland's rule under degeneracy.
        if !bland {
            if tab[obj][rhs_col] == last_obj {
                stall += 1;
                if stall > 50 {
                    bland = true;
                }
            } else {
                stall = 0;
                last_obj = tab[obj][rhs_col].clone();
            }
        }
        if iter + 1 == max_iters {
            return Err(Error::Internal("simplex iteration cap reached".to_string()));
        }
    }

    // Optimal artificial sum is -tab[obj][rhs].
    let opt = -tab[obj][rhs_col].clone();
    if opt.is_zero() {
        // Feasible: read u - v off the basis.
        let mut values = vec![Rat::zero(); n_cols];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = tab[i][rhs_col].clone();
        }
        let solution: Vec<Rat> = (0..num_vars)
            .map(|k| &values[k] - &values[num_vars + k])
            .collect();
        Ok(LpOutcome::Feasible(solution))
    } else {
        // Farkas multipliers from the reduced costs of the initial identity
        // columns: y_i = rc(slack_i) for plain rows, 1 - rc(artificial_i)
        // for negated rows.
        let mut multipliers = Vec::with_capacity(n_rows);
        let mut art_seen = 0usize;
        for i in 0..n_rows {
            if negated[i] {
                let col = 2 * num_vars + n_rows + art_seen;
                art_seen += 1;
                multipliers.push(Rat::one() - &tab[obj][col]);
            } else {
                multipliers.push(tab[obj][2 * num_vars + i].clone());
            }
        }
        let cert = FarkasCertificate { multipliers };
        if !cert.verify(rows) {
            return Err(Error::Internal(
                "simplex produced an invalid Farkas certificate".to_string(),
            ));
        }
        Ok(LpOutcome::Infeasible(cert))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{rat, rat_int};

    fn row(coeffs: &[i64], rhs: (i64, i64)) -> (Vec<Rat>, Rat) {
        (
            coeffs.iter().map(|c| rat_int(*c)).collect(),
            rat(rhs.0, rhs.1),
        )
    }

    #[test]
    fn feasible_box() {
        // -1 <= a <= 1
        let rows = vec![row(&[1], (1, 1)), row(&[-1], (1, 1))];
        match solve_feasibility(1, &rows).unwrap() {
            LpOutcome::Feasible(a) => {
                assert!(a[0] <= rat_int(1) && a[0] >= rat_int(-1));
            }
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn infeasible_interval() {
        // a <= -1 and -a <= -2 (a >= 2)
        let rows = vec![row(&[1], (-1, 1)), row(&[-1], (-2, 1))];
        match solve_feasibility(1, &rows).unwrap() {
            LpOutcome::Infeasible(cert) => assert!(cert.verify(&rows)),
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn feasible_two_vars() {
        // a + b <= 1, -a <= 0, -b <= 0, -a - b <= -1 forces a + b = 1
        let rows = vec![
            row(&[1, 1], (1, 1)),
            row(&[-1, 0], (0, 1)),
            row(&[0, -1], (0, 1)),
            row(&[-1, -1], (-1, 1)),
        ];
        match solve_feasibility(2, &rows).unwrap() {
            LpOutcome::Feasible(a) => {
                assert_eq!(&a[0] + &a[1], rat_int(1));
                assert!(!a[0].is_negative() && !a[1].is_negative());
            }
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn infeasible_sum() {
        // a - b <= -1, b - c <= -1, c - a <= -1: cycle sums to <= -3, but 0
        let rows = vec![
            row(&[1, -1, 0], (-1, 1)),
            row(&[0, 1, -1], (-1, 1)),
            row(&[-1, 0, 1], (-1, 1)),
        ];
        match solve_feasibility(3, &rows).unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(cert.verify(&rows));
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn randomized_against_interval_logic() {
        // One-variable systems: intersection of random half-lines, compared
        // to direct interval reasoning.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let k = rng.gen_range(1..=6);
            let mut rows = Vec::new();
            let mut lo: Option<Rat> = None;
            let mut hi: Option<Rat> = None;
            for _ in 0..k {
                let c: i64 = if rng.gen() { 1 } else { -1 };
                let b = rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
                rows.push((vec![rat_int(c)], b.clone()));
                if c == 1 {
                    hi = Some(match hi {
                        None => b,
                        Some(h) => h.min(b),
                    });
                } else {
                    let low = -b;
                    lo = Some(match lo {
                        None => low,
                        Some(l) => l.max(low),
                    });
                }
            }
            let feasible_truth = match (&lo, &hi) {
                (Some(l), Some(h)) => l <= h,
                _ => true,
            };
            match solve_feasibility(1, &rows).unwrap() {
                LpOutcome::Feasible(a) => {
                    assert!(feasible_truth, "{rows:?}");
                    if let Some(l) = &lo {
                        assert!(&a[0] >= l);
                    }
                    if let Some(h) = &hi {
                        assert!(&a[0] <= h);
                    }
                }
                LpOutcome::Infeasible(cert) => {
                    assert!(!feasible_truth, "{rows:?}");
                    assert!(cert.verify(&rows));
                }
            }
        }
    }
}
