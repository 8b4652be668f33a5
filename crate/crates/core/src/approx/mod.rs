//! Approximation layer: epsilon-approximate polynomials via exact LP
//! feasibility, approximate degree, approximate-monomial search, low-rank
//! approximation witnesses, and the Ehlich-Zeller degree bound.
//!
//! Candidate solutions are always re-verified in exact rational arithmetic
//! and infeasibility always carries an exact Farkas certificate; floating
//! point never decides an outcome.

mod als;
mod chebyshev;
mod rank1;
mod simplex;

pub use als::{approx_rank_upper, AlsOptions, ApproxRankWitness};
pub use chebyshev::{or_chebyshev, OR_CHEBYSHEV_DEGREE_FACTOR};
pub use rank1::rank_le_1_approx_feasible;
pub use simplex::{solve_feasibility, FarkasCertificate, LpOutcome};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::polynomial::MultilinearPoly;
use crate::util::{rat, rat_int, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Largest arity for LP-based approximation ops (2^n constraint points).
pub const APPROX_ARITY_CAP: usize = 12;

/// The paper's approximation error.
pub fn default_eps() -> Rat {
    rat(1, 3)
}

/// A polynomial together with the error bound it was checked against.
#[derive(Debug, Clone)]
pub struct ApproxPolynomial {
    pub poly: MultilinearPoly,
    pub eps: Rat,
    /// Set only after |g(x) - p(x)| <= eps held at every point, exactly.
    pub verified: bool,
}

impl ApproxPolynomial {
    /// Exact verification over all inputs of g.
    pub fn verify_against(&mut self, g: &BooleanFunction) -> Result<()> {
        for x in 0..(1u32 << g.arity()) {
            let dev = (self.poly.eval_point(x) - rat_int(g.eval(x) as i64)).abs();
            if dev > self.eps {
                self.verified = false;
                return Err(Error::Internal(format!(
                    "approximation exceeds eps at input {x}"
                )));
            }
        }
        self.verified = true;
        Ok(())
    }

    /// JSON form: eps, support masks, rational coefficients, verified flag.
    pub fn to_json(&self) -> ApproxPolyJson {
        ApproxPolyJson {
            eps: crate::util::rat_to_string(&self.eps),
            verified: self.verified,
            arity: self.poly.arity(),
            terms: self.poly.to_json_terms(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproxPolyJson {
    pub eps: String,
    pub verified: bool,
    pub arity: usize,
    pub terms: Vec<crate::polynomial::PolyTerm>,
}

/// Cheap sound pre-filter: propagate coefficient intervals in mask order and
/// reject supports whose implied point values cannot meet some constraint.
/// `false` means certainly infeasible; `true` means "run the LP".
fn support_plausible(g: &BooleanFunction, support: &[u32], eps: &Rat) -> bool {
    use std::collections::BTreeMap;
    let n = g.arity();
    let in_support: std::collections::HashSet<u32> = support.iter().copied().collect();
    // interval per support mask, in increasing mask order
    let mut lo: BTreeMap<u32, Rat> = BTreeMap::new();
    let mut hi: BTreeMap<u32, Rat> = BTreeMap::new();
    for x in 0..(1u32 << n) {
        let target = rat_int(g.eval(x) as i64);
        let (want_lo, want_hi) = (&target - eps, &target + eps);
        // interval of sum over proper subsets in support
        let mut sum_lo = Rat::zero();
        let mut sum_hi = Rat::zero();
        for (m, l) in &lo {
            if *m != x && m & !x == 0 {
                sum_lo += l;
                sum_hi += &hi[m];
            }
        }
        if in_support.contains(&x) {
            lo.insert(x, &want_lo - &sum_hi);
            hi.insert(x, &want_hi - &sum_lo);
        } else {
            // p(x) is fully determined by subsets; intervals must intersect
            if sum_hi < want_lo || sum_lo > want_hi {
                return false;
            }
        }
    }
    true
}

/// Exact feasibility of approximating g within eps using only the given
/// monomial masks. Returns a verified polynomial, or None with a certified
/// Farkas refutation consumed internally.
pub fn approx_feasible(
    g: &BooleanFunction,
    support: &[u32],
    eps: &Rat,
) -> Result<Option<ApproxPolynomial>> {
    let n = g.arity();
    if n > APPROX_ARITY_CAP {
        return Err(Error::CapExceeded {
            what: "approximation LP",
            needed: n,
            cap: APPROX_ARITY_CAP,
        });
    }
    if eps.is_negative() {
        return Err(Error::InvalidParameter("eps must be >= 0".to_string()));
    }
    if !support_plausible(g, support, eps) {
        return Ok(None);
    }
    // Rows: p(x) - g(x) <= eps and g(x) - p(x) <= eps for every x.
    let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(2 << n);
    for x in 0..(1u32 << n) {
        let coeffs: Vec<Rat> = support
            .iter()
            .map(|s| {
                if s & !x == 0 {
                    Rat::from_integer(1.into())
                } else {
                    Rat::zero()
                }
            })
            .collect();
        let target = rat_int(g.eval(x) as i64);
        rows.push((coeffs.clone(), &target + eps));
        rows.push((coeffs.iter().map(|c| -c).collect(), eps - &target));
    }
    match solve_feasibility(support.len(), &rows)? {
        LpOutcome::Feasible(coeffs) => {
            let poly = MultilinearPoly::from_terms(
                n,
                support.iter().copied().zip(coeffs.into_iter()),
            );
            let mut out = ApproxPolynomial {
                poly,
                eps: eps.clone(),
                verified: false,
            };
            out.verify_against(g)?;
            Ok(Some(out))
        }
        LpOutcome::Infeasible(_certified) => Ok(None),
    }
}

/// Smallest degree d such that some degree-<=d polynomial approximates g
/// within eps; every step is LP-certified.
pub fn approx_degree(g: &BooleanFunction, eps: &Rat) -> Result<usize> {
    let n = g.arity();
    for d in 0..=n {
        let support: Vec<u32> = (0..(1u32 << n))
            .filter(|m| m.count_ones() as usize <= d)
            .collect();
        if approx_feasible(g, &support, eps)?.is_some() {
            return Ok(d);
        }
    }
    Err(Error::Internal(
        "exact polynomial support unexpectedly infeasible".to_string(),
    ))
}

/// Result of the approximate-monomial search.
#[derive(Debug, Clone)]
pub struct ApproxMonUpper {
    pub count: usize,
    pub poly: ApproxPolynomial,
    /// True when supports were searched exhaustively in increasing size
    /// (so `count` is exactly the minimum), false for greedy upper bounds.
    pub exact: bool,
}

/// Arity limit for the exhaustive support search.
pub const EXACT_MON_SEARCH_CAP: usize = 4;

/// Upper bound (exact for n <= 4) on the fewest monomials among polynomials
/// approximating g within eps.
///
/// Exhaustive mode enumerates supports in increasing size, so the first
/// feasible support is a true minimum. Greedy mode grows the support along
/// the exact polynomial's coefficients ordered by magnitude. `budget` caps
/// the number of LP solves; on exhaustion the exact polynomial's own support
/// is returned, flagged non-exact.
pub fn approx_mon_upper(
    g: &BooleanFunction,
    eps: &Rat,
    budget: usize,
) -> Result<ApproxMonUpper> {
    let n = g.arity();
    if n > APPROX_ARITY_CAP {
        return Err(Error::CapExceeded {
            what: "approximate monomial search",
            needed: n,
            cap: APPROX_ARITY_CAP,
        });
    }
    let mut solves = 0usize;
    if n <= EXACT_MON_SEARCH_CAP {
        let all_masks: Vec<u32> = (0..(1u32 << n)).collect();
        for size in 0..=all_masks.len() {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                let support: Vec<u32> = combo.iter().map(|&i| all_masks[i]).collect();
                if solves < budget {
                    if support_plausible(g, &support, eps) {
                        solves += 1;
                        if let Some(poly) = approx_feasible(g, &support, eps)? {
                            return Ok(ApproxMonUpper {
                                count: poly.poly.mon_count(),
                                poly,
                                exact: true,
                            });
                        }
                    }
                } else {
                    // Budget exhausted: fall back to the exact representation.
                    return fallback_exact_poly(g, eps);
                }
                if !next_combination(&mut combo, all_masks.len()) {
                    break;
                }
            }
        }
        return Err(Error::Internal(
            "full support unexpectedly infeasible".to_string(),
        ));
    }
    // Greedy: grow support by exact-coefficient magnitude.
    let exact_poly = MultilinearPoly::mobius_transform(g);
    let mut order: Vec<(u32, Rat)> = exact_poly
        .terms()
        .map(|(m, c)| (m, c.abs()))
        .collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let masks: Vec<u32> = order.into_iter().map(|(m, _)| m).collect();
    for k in 0..=masks.len() {
        if solves >= budget {
            return fallback_exact_poly(g, eps);
        }
        let support = &masks[..k];
        if !support_plausible(g, support, eps) {
            continue;
        }
        solves += 1;
        if let Some(poly) = approx_feasible(g, support, eps)? {
            return Ok(ApproxMonUpper {
                count: poly.poly.mon_count(),
                poly,
                exact: false,
            });
        }
    }
    fallback_exact_poly(g, eps)
}

fn fallback_exact_poly(g: &BooleanFunction, eps: &Rat) -> Result<ApproxMonUpper> {
    let poly = MultilinearPoly::mobius_transform(g);
    let mut out = ApproxPolynomial {
        poly,
        eps: eps.clone(),
        verified: false,
    };
    out.verify_against(g)?;
    Ok(ApproxMonUpper {
        count: out.poly.mon_count(),
        poly: out,
        exact: false,
    })
}

/// Advance indices to the next k-combination of 0..n; false when done.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] != i + n - k {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Degree bound sqrt(c n / (c + b2 - b1)) for a polynomial bounded in
/// [b1, b2] on the integers 0..n whose derivative reaches c somewhere.
pub fn ehlich_zeller_bound(c: &Rat, b1: &Rat, b2: &Rat, n: usize) -> Result<f64> {
    if !c.is_positive() {
        return Err(Error::InvalidParameter("c must be positive".to_string()));
    }
    if b2 < b1 {
        return Err(Error::InvalidParameter("b2 must be >= b1".to_string()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".to_string()));
    }
    let ratio = c * rat_int(n as i64) / (c + b2 - b1);
    Ok(crate::util::rat_to_f64(&ratio).sqrt())
}

/// Provenance of a bound input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundProvenance {
    Exact,
    Witnessed,
    Conditional,
}

/// Two-sided-error qubit bound from an approximate-decomposition lower
/// bound: log2(m_tilde) / 2. The provenance flag of the input propagates.
pub fn q2_lower_bound(m_tilde_lower: f64, provenance: BoundProvenance) -> Result<(f64, BoundProvenance)> {
    if m_tilde_lower < 1.0 {
        return Err(Error::InvalidParameter(
            "m_tilde lower bound must be >= 1".to_string(),
        ));
    }
    Ok((m_tilde_lower.log2() / 2.0, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{named_family, parse_funcspec, Family};
    use crate::sensitivity;

    #[test]
    fn or2_linear_support_feasible() {
        let g = named_family(Family::Or, 2, None).unwrap();
        let support = vec![0b00u32, 0b01, 0b10];
        let res = approx_feasible(&g, &support, &default_eps()).unwrap();
        let poly = res.expect("feasible");
        assert!(poly.verified);
        assert!(poly.poly.degree() <= 1);
    }

    #[test]
    fn parity2_needs_degree_two() {
        let g = named_family(Family::Xor, 2, None).unwrap();
        let support = vec![0b00u32, 0b01, 0b10];
        assert!(approx_feasible(&g, &support, &default_eps())
            .unwrap()
            .is_none());
        assert_eq!(approx_degree(&g, &default_eps()).unwrap(), 2);
    }

    #[test]
    fn zero_eps_full_support_recovers_exact_poly() {
        let g = parse_funcspec("name:maj,n=3").unwrap();
        let support: Vec<u32> = (0..8).collect();
        let res = approx_feasible(&g, &support, &Rat::zero())
            .unwrap()
            .expect("exact representation is feasible");
        assert_eq!(res.poly, MultilinearPoly::mobius_transform(&g));
    }

    #[test]
    fn approx_degree_examples() {
        let or2 = named_family(Family::Or, 2, None).unwrap();
        assert_eq!(approx_degree(&or2, &default_eps()).unwrap(), 1);
        let zero = BooleanFunction::from_fn(2, |_| false).unwrap();
        assert_eq!(approx_degree(&zero, &default_eps()).unwrap(), 0);
        for n in 1..=4usize {
            let parity = named_family(Family::Xor, n, None).unwrap();
            assert_eq!(approx_degree(&parity, &default_eps()).unwrap(), n, "parity_{n}");
        }
    }

    #[test]
    fn approx_degree_at_most_exact_degree() {
        for code in (0u64..256).step_by(7) {
            let g = BooleanFunction::from_fn(3, |x| (code >> x) & 1 == 1).unwrap();
            let d_tilde = approx_degree(&g, &default_eps()).unwrap();
            let d = MultilinearPoly::mobius_transform(&g).degree();
            assert!(d_tilde <= d, "code {code}: {d_tilde} > {d}");
        }
    }

    #[test]
    fn mon_upper_constant_zero() {
        let zero = BooleanFunction::from_fn(3, |_| false).unwrap();
        let res = approx_mon_upper(&zero, &default_eps(), 100_000).unwrap();
        assert_eq!(res.count, 0);
        assert!(res.exact);
    }

    #[test]
    fn mon_upper_or2() {
        let g = named_family(Family::Or, 2, None).unwrap();
        let res = approx_mon_upper(&g, &default_eps(), 100_000).unwrap();
        assert!(res.exact);
        assert!(res.count <= 3);
        assert!(res.poly.verified);
        // the count is a true minimum: re-check one size below by hand
        let all: Vec<u32> = (0..4).collect();
        let mut any_smaller = false;
        let mut combo: Vec<usize> = (0..res.count.saturating_sub(1)).collect();
        loop {
            let support: Vec<u32> = combo.iter().map(|&i| all[i]).collect();
            if approx_feasible(&g, &support, &default_eps()).unwrap().is_some() {
                any_smaller = true;
                break;
            }
            if !next_combination(&mut combo, all.len()) {
                break;
            }
        }
        assert!(!any_smaller);
    }

    #[test]
    fn theorem8_consistency_small() {
        // exact m~on vs 2^sqrt(so/12) over all g at n = 2. The inequality
        // has a known degenerate family: the zero function (m~on = 0) and
        // AND-of-a-nonempty-subset functions (so = 1 but m~on = 1, while
        // the formula gives 2^sqrt(1/12) > 1; the blocking-set lemma
        // behind the bound needs floor(b/2) >= 1). Violations must match
        // that family exactly.
        let mut violators = Vec::new();
        for code in 0u64..16 {
            let g = BooleanFunction::from_fn(2, |x| (code >> x) & 1 == 1).unwrap();
            let res = approx_mon_upper(&g, &default_eps(), 100_000).unwrap();
            assert!(res.exact);
            let so = sensitivity::zero_block_sensitivity(&g, sensitivity::SearchMode::Exact)
                .unwrap()
                .so;
            let bound = sensitivity::theorem8_lower_bound(so, sensitivity::SoProvenance::Exact);
            if (res.count as f64) < bound.value - 1e-9 {
                violators.push(code);
            }
        }
        // codes: 0 = zero, 8 = x1 AND x2, 10 = x1, 12 = x2
        assert_eq!(violators, vec![0, 8, 10, 12]);
    }

    #[test]
    fn ehlich_zeller_values() {
        // c=1/3, b1=-1/3, b2=4/3 at n/2 points gives sqrt(n/12)
        let v = ehlich_zeller_bound(&rat(1, 3), &rat(-1, 3), &rat(4, 3), 24).unwrap();
        assert!((v - 2.0f64).abs() < 1e-12); // sqrt(48/12) with n' = 24 = 48/2
        let v = ehlich_zeller_bound(&rat_int(1), &Rat::zero(), &rat_int(1), 4).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
        assert!(ehlich_zeller_bound(&Rat::zero(), &Rat::zero(), &Rat::zero(), 3).is_err());
        assert!(ehlich_zeller_bound(&rat_int(1), &rat_int(2), &rat_int(1), 3).is_err());
    }

    #[test]
    fn q2_bound_values() {
        let (bits, _) = q2_lower_bound(4.0, BoundProvenance::Exact).unwrap();
        assert!((bits - 1.0).abs() < 1e-12);
        let (bits, p) = q2_lower_bound(1.0, BoundProvenance::Conditional).unwrap();
        assert_eq!(bits, 0.0);
        assert_eq!(p, BoundProvenance::Conditional);
        assert!(q2_lower_bound(0.5, BoundProvenance::Exact).is_err());
    }

    #[test]
    fn combination_iterator() {
        let mut combo: Vec<usize> = vec![0, 1];
        let mut all = vec![combo.clone()];
        while next_combination(&mut combo, 4) {
            all.push(combo.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
