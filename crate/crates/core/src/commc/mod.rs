//! Two-party layer: communication matrices, covers, exact deterministic
//! complexity, the recursive cover protocol, AND-powering, and the
//! equality-to-disjointness reduction.

mod cover;
mod dexact;
mod protocol;

pub use cover::{cover_from_monomials, cover_number_exact, Rectangle, RectangleCover};
pub use dexact::{d_exact, d_exact_capped, DExactOutcome, DEFAULT_DEXACT_CAP};
pub use protocol::{LovaszSaksProtocol, ProtocolRun};

use crate::boolfn::{named_family, parse_funcspec, BooleanFunction, Composition, Family};
use crate::error::{Error, Result};
use crate::linalg::{rank_01, ExactMatrix};
use crate::polynomial::MultilinearPoly;
use crate::util::{ceil_log2, Rat};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest g-arity for which a 2^n x 2^n communication matrix materializes.
pub const MAX_PROBLEM_ARITY: usize = 12;

/// Problems the report layer recognizes by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedProblem {
    Eq,
    Disj,
}

/// A two-party problem: its 0/1 matrix plus, when built from g and a bitwise
/// composition, the source function.
#[derive(Debug, Clone)]
pub struct CommProblem {
    source: Option<(BooleanFunction, Composition)>,
    matrix: ExactMatrix,
    name: String,
}

impl CommProblem {
    /// Matrix with entry (x, y) = g(x o y); arity capped so the 2^n x 2^n
    /// matrix stays materializable.
    pub fn build(g: BooleanFunction, composition: Composition) -> Result<CommProblem> {
        let n = g.arity();
        if n > MAX_PROBLEM_ARITY {
            return Err(Error::CapExceeded {
                what: "communication matrix",
                needed: n,
                cap: MAX_PROBLEM_ARITY,
            });
        }
        let dim = 1usize << n;
        let matrix = ExactMatrix::from_fn(dim, dim, |x, y| {
            if g.eval(composition.combine(x as u32, y as u32)) {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let name = format!("g(n={n})@{}", composition.as_str());
        Ok(CommProblem {
            source: Some((g, composition)),
            matrix,
            name,
        })
    }

    /// Wrap an arbitrary 0/1 matrix.
    pub fn from_raw(matrix: ExactMatrix, name: impl Into<String>) -> Result<CommProblem> {
        if !matrix.is_boolean() {
            return Err(Error::InvalidParameter(
                "raw problem matrix must be 0/1".to_string(),
            ));
        }
        Ok(CommProblem {
            source: None,
            matrix,
            name: name.into(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> CommProblem {
        self.name = name.into();
        self
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> Option<(&BooleanFunction, Composition)> {
        self.source.as_ref().map(|(g, c)| (g, *c))
    }

    /// Entry as a bit.
    pub fn bit(&self, x: usize, y: usize) -> bool {
        self.matrix.get(x, y).is_one()
    }

    /// Complement problem (entries 1 - f); a composed source carries over
    /// with g complemented, since not(g(x o y)) = (not g)(x o y).
    pub fn complement(&self) -> CommProblem {
        let source = self
            .source
            .as_ref()
            .map(|(g, c)| (g.complement(), *c));
        CommProblem {
            source,
            matrix: self.matrix.complement01(),
            name: format!("not({})", self.name),
        }
    }

    /// Exact rank of the communication matrix.
    pub fn rank(&self) -> usize {
        self.matrix.rank_exact()
    }

    /// Detect EQ (identity matrix) and DISJ (NOR composed with AND).
    pub fn named(&self) -> Option<NamedProblem> {
        if let Some((g, comp)) = &self.source {
            let nor = named_family(Family::Nor, g.arity(), None).ok()?;
            if *g == nor {
                match comp {
                    Composition::Xor => return Some(NamedProblem::Eq),
                    Composition::And => return Some(NamedProblem::Disj),
                    _ => {}
                }
            }
        }
        if self.matrix.rows() == self.matrix.cols() {
            let dim = self.matrix.rows();
            let is_identity = (0..dim).all(|i| {
                (0..dim).all(|j| {
                    let v = self.matrix.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            });
            if is_identity && dim.is_power_of_two() && dim > 1 {
                return Some(NamedProblem::Eq);
            }
        }
        None
    }

    /// log2 of the number of inputs per side when the matrix is 2^n square.
    pub fn input_bits(&self) -> Option<usize> {
        if self.matrix.rows() == self.matrix.cols() && self.matrix.rows().is_power_of_two() {
            Some(self.matrix.rows().trailing_zeros() as usize)
        } else {
            None
        }
    }

    /// AND of m independent instances: the m-fold Kronecker power.
    pub fn and_power(&self, m: usize) -> Result<CommProblem> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "and_power needs m >= 1".to_string(),
            ));
        }
        let mut matrix = self.matrix.clone();
        for _ in 1..m {
            matrix = matrix.kronecker(&self.matrix)?;
        }
        Ok(CommProblem {
            source: None,
            matrix,
            name: format!("{}^and{}", self.name, m),
        })
    }

    /// One-round deterministic cost: ceil(log2(distinct rows)) + 1.
    pub fn d_one_round(&self) -> u32 {
        ceil_log2(self.matrix.distinct_rows() as u64) + 1
    }
}

/// Parse `<funcspec>@and|or|xor` into a problem (raw matrices are loaded by
/// callers and wrapped with [`CommProblem::from_raw`]).
pub fn parse_problem_spec(spec: &str) -> Result<CommProblem> {
    let (func_part, comp_part) = spec.rsplit_once('@').ok_or_else(|| Error::Parse {
        token: spec.to_string(),
        input: spec.to_string(),
    })?;
    let g = parse_funcspec(func_part)?;
    let comp: Composition = comp_part.parse()?;
    Ok(CommProblem::build(g, comp)?.with_name(spec.to_string()))
}

/// Outcome of the exhaustive rank = mon sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankEqMonReport {
    pub n: usize,
    pub checked: u64,
    /// Truth-table codes where rank(M_{g(x AND y)}) != mon(g); expected empty.
    pub counterexamples: Vec<u64>,
}

/// For every g on n variables, check rank(M_{g(x AND y)}) = mon(g).
///
/// Runs the whole function space (2^(2^n) functions, n <= 4) in parallel.
pub fn verify_rank_eq_mon(n: usize) -> Result<RankEqMonReport> {
    if n == 0 || n > 4 {
        return Err(Error::CapExceeded {
            what: "rank = mon exhaustive sweep",
            needed: n,
            cap: 4,
        });
    }
    let size = 1usize << n;
    let total: u64 = 1u64 << size;
    let counterexamples: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&code| {
            // mon(g) by integer Moebius transform over the subset lattice
            let mut c: Vec<i32> = (0..size).map(|x| ((code >> x) & 1) as i32).collect();
            for i in 0..n {
                let bit = 1usize << i;
                for mask in 0..size {
                    if mask & bit != 0 {
                        c[mask] -= c[mask ^ bit];
                    }
                }
            }
            let mon = c.iter().filter(|v| **v != 0).count();
            let rank = rank_01(size, size, |x, y| (code >> (x & y)) & 1 == 1);
            rank != mon
        })
        .collect();
    let mut counterexamples = counterexamples;
    counterexamples.sort_unstable();
    Ok(RankEqMonReport {
        n,
        checked: total,
        counterexamples,
    })
}

/// The equality-to-disjointness input doubling: each x_i becomes
/// (x_i, not x_i) and each y_i becomes (not y_i, y_i), so that
/// EQ(x, y) = DISJ(x', y') on 2n bits.
pub fn eq_to_disj(x: u32, y: u32, n: usize) -> (u64, u64) {
    let mut xp = 0u64;
    let mut yp = 0u64;
    for i in 0..n {
        let xi = (x >> i) & 1 != 0;
        let yi = (y >> i) & 1 != 0;
        if xi {
            xp |= 1 << (2 * i);
        } else {
            xp |= 1 << (2 * i + 1);
        }
        if yi {
            yp |= 1 << (2 * i + 1);
        } else {
            yp |= 1 << (2 * i);
        }
    }
    (xp, yp)
}

/// mon(g) with plain integer arithmetic, used by sweeps and reports.
pub fn mon_count(g: &BooleanFunction) -> usize {
    MultilinearPoly::mobius_transform(g).mon_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Family;

    fn problem(spec: &str) -> CommProblem {
        parse_problem_spec(spec).unwrap()
    }

    #[test]
    fn build_and1_matrix() {
        let p = problem("name:and,n=1@and");
        assert_eq!(p.matrix().rows(), 2);
        assert!(!p.bit(0, 0));
        assert!(!p.bit(0, 1));
        assert!(!p.bit(1, 0));
        assert!(p.bit(1, 1));
    }

    #[test]
    fn disj_rank_is_2_pow_n() {
        for n in 1..=4usize {
            let p = problem(&format!("name:nor,n={n}@and"));
            assert_eq!(p.rank(), 1 << n, "rank(DISJ_{n})");
        }
    }

    #[test]
    fn eq_via_xor_nor_is_identity() {
        let p = problem("name:nor,n=3@xor");
        assert_eq!(p.matrix(), &ExactMatrix::identity(8));
        assert_eq!(p.rank(), 8);
        assert_eq!(p.named(), Some(NamedProblem::Eq));
    }

    #[test]
    fn ip_complement_rank() {
        // complement of inner product: g = nxor composed with AND
        let p = problem("name:nxor,n=2@and");
        assert_eq!(p.rank(), 4);
        let p3 = problem("name:nxor,n=3@and");
        assert_eq!(p3.rank(), 8);
    }

    #[test]
    fn six_monomial_example_rank() {
        let g = BooleanFunction::from_fn(3, |x| (1..=2).contains(&x.count_ones())).unwrap();
        let p = CommProblem::build(g, Composition::And).unwrap();
        assert_eq!(p.rank(), 6);
    }

    #[test]
    fn and_power_ranks() {
        let disj1 = problem("name:nor,n=1@and");
        assert_eq!(disj1.and_power(1).unwrap().rank(), 2);
        assert_eq!(disj1.and_power(2).unwrap().rank(), 4);
        let eq1 = problem("name:nor,n=1@xor");
        let p = eq1.and_power(3).unwrap();
        assert_eq!(p.matrix().rows(), 8);
        assert_eq!(p.rank(), 8);
    }

    #[test]
    fn one_round_costs() {
        // thr(n=4,t=3) under AND: 6 distinct rows -> ceil(log2 6)+1 = 4
        let p = problem("name:thr,n=4,t=3@and");
        assert_eq!(p.matrix().distinct_rows(), 6);
        assert_eq!(p.d_one_round(), 4);

        let eq2 = problem("name:nor,n=2@xor");
        assert_eq!(eq2.d_one_round(), 3);

        let z = CommProblem::from_raw(ExactMatrix::zeros(4, 4), "zero").unwrap();
        assert_eq!(z.d_one_round(), 1);
    }

    #[test]
    fn named_detection() {
        assert_eq!(problem("name:nor,n=2@and").named(), Some(NamedProblem::Disj));
        assert_eq!(problem("name:nor,n=2@xor").named(), Some(NamedProblem::Eq));
        assert_eq!(problem("name:or,n=2@and").named(), None);
        let raw_eq = CommProblem::from_raw(ExactMatrix::identity(8), "raw").unwrap();
        assert_eq!(raw_eq.named(), Some(NamedProblem::Eq));
    }

    #[test]
    fn rank_eq_mon_small() {
        let r1 = verify_rank_eq_mon(1).unwrap();
        assert_eq!(r1.checked, 4);
        assert!(r1.counterexamples.is_empty());
        let r2 = verify_rank_eq_mon(2).unwrap();
        assert_eq!(r2.checked, 16);
        assert!(r2.counterexamples.is_empty());
        assert!(verify_rank_eq_mon(5).is_err());
    }

    #[test]
    fn eq_to_disj_examples() {
        // x = y = "01" as bitstrings means x1=0, x2=1
        let (xp, yp) = eq_to_disj(0b10, 0b10, 2);
        // x' = 0110 as a bitstring x'_1..x'_4 -> bits 0..3 = 0,1,1,0
        assert_eq!(xp, 0b0110);
        assert_eq!(yp, 0b1001);
        assert_eq!(xp & yp, 0);

        let (xp, yp) = eq_to_disj(0, 1, 1);
        assert_eq!(xp & yp, 0b10); // intersect at position 2
    }

    #[test]
    fn eq_to_disj_exhaustive() {
        for n in 1..=3usize {
            for x in 0..(1u32 << n) {
                for y in 0..(1u32 << n) {
                    let (xp, yp) = eq_to_disj(x, y, n);
                    let eq = x == y;
                    let disj = xp & yp == 0;
                    assert_eq!(eq, disj, "n={n} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn complement_flips_entries() {
        let p = problem("name:and,n=1@and");
        let c = p.complement();
        assert!(c.bit(0, 0));
        assert!(!c.bit(1, 1));
        // complement of g, same composition, matches entrywise
        let (g, comp) = c.source().unwrap();
        assert_eq!(comp, Composition::And);
        for x in 0..2usize {
            for y in 0..2usize {
                assert_eq!(c.bit(x, y), g.eval(comp.combine(x as u32, y as u32)));
            }
        }
    }

    #[test]
    fn arity_cap_enforced() {
        let g = named_family(Family::Or, 13, None).unwrap();
        assert!(matches!(
            CommProblem::build(g, Composition::And),
            Err(Error::CapExceeded { .. })
        ));
    }
}
