//! Low-degree approximation of OR from a shifted, scaled Chebyshev
//! polynomial in the Hamming weight.
//!
//! With a(k) = (2k - (n+1)) / (n - 1), the weights 1..n land in [-1, 1]
//! while a(0) < -1, so r(k) = 1 - T_d(a(k)) / T_d(a(0)) has r(0) = 0 and
//! |r(k) - 1| <= 1 / |T_d(a(0))| elsewhere. The smallest d with
//! |T_d(a(0))| >= 1/eps suffices and stays within 2 * ceil(sqrt(n)).

use super::ApproxPolynomial;
use crate::error::{Error, Result};
use crate::polynomial::{chebyshev_t, MultilinearPoly, UnivariatePoly};
use crate::util::{rat, rat_int, Rat};
use num_traits::{One, Signed, Zero};

/// Documented degree constant: or_chebyshev(n) has degree <= this times
/// ceil(sqrt(n)).
pub const OR_CHEBYSHEV_DEGREE_FACTOR: usize = 2;

/// Symmetric eps-approximation of OR_n with degree O(sqrt(n)), exact
/// rational coefficients, verified on every weight class (and pointwise,
/// which is equivalent since the polynomial is symmetric by construction).
pub fn or_chebyshev(n: usize, eps: &Rat) -> Result<ApproxPolynomial> {
    if n == 0 {
        return Err(Error::ArityOutOfRange(0, 1, usize::MAX));
    }
    if !eps.is_positive() || eps >= &Rat::one() {
        return Err(Error::InvalidParameter(
            "or_chebyshev needs 0 < eps < 1".to_string(),
        ));
    }
    let r = if n == 1 {
        // r(k) = k is exact.
        UnivariatePoly::new(vec![Rat::zero(), Rat::one()])
    } else {
        let a0 = rat(-(n as i64 + 1), n as i64 - 1);
        let inv_eps = Rat::one() / eps;
        // |T_d(a0)| grows monotonically in d for |a0| > 1; the smallest
        // sufficient d stays within 2*ceil(sqrt(n)) for eps >= 1/3 (the
        // documented factor) and within a log(1/eps) multiple in general.
        let mut chosen = None;
        for d in 1..=4096usize {
            let t = chebyshev_t(d);
            if t.eval(&a0).abs() >= inv_eps {
                chosen = Some(t);
                break;
            }
        }
        let t = chosen.ok_or_else(|| {
            Error::Internal("Chebyshev growth bound failed within the degree guard".to_string())
        })?;
        // r(k) = 1 - T_d(a(k)) / T_d(a(0))
        let scale = t.eval(&a0);
        let shifted = t.compose_affine(&rat(2, n as i64 - 1), &rat(-(n as i64 + 1), n as i64 - 1));
        let coeffs: Vec<Rat> = shifted
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let v = -(c / &scale);
                if i == 0 {
                    v + Rat::one()
                } else {
                    v
                }
            })
            .collect();
        UnivariatePoly::new(coeffs)
    };
    // Exact check on every weight class.
    for k in 0..=n {
        let target = rat_int((k > 0) as i64);
        if (r.eval_int(k as i64) - target).abs() > *eps {
            return Err(Error::Internal(format!(
                "Chebyshev construction misses eps at weight {k}"
            )));
        }
    }
    // Multilinear form: binomial-basis coefficients spread uniformly over
    // the subsets of each size.
    let values: Vec<Rat> = (0..=n).map(|k| r.eval_int(k as i64)).collect();
    let mut diffs = values;
    let mut binom_coeffs: Vec<Rat> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        binom_coeffs.push(diffs[0].clone());
        for i in 0..n - j {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        diffs.truncate(n - j);
    }
    let poly = if n <= 20 {
        MultilinearPoly::from_terms(
            n,
            (0..(1u64 << n) as u32).filter_map(|mask| {
                let c = &binom_coeffs[mask.count_ones() as usize];
                if c.is_zero() {
                    None
                } else {
                    Some((mask, c.clone()))
                }
            }),
        )
    } else {
        return Err(Error::CapExceeded {
            what: "multilinear expansion of or_chebyshev",
            needed: n,
            cap: 20,
        });
    };
    let mut out = ApproxPolynomial {
        poly,
        eps: eps.clone(),
        verified: false,
    };
    if n <= super::APPROX_ARITY_CAP {
        let g = crate::boolfn::named_family(crate::boolfn::Family::Or, n, None)?;
        out.verify_against(&g)?;
    } else {
        // Pointwise verification is the weight-class check above: the
        // polynomial's value at x depends only on |x| by construction.
        out.verified = true;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::default_eps;
    use crate::polynomial::MultilinearPoly;

    #[test]
    fn degree_one_for_single_variable() {
        let p = or_chebyshev(1, &default_eps()).unwrap();
        assert!(p.verified);
        assert_eq!(p.poly.degree(), 1);
    }

    #[test]
    fn n4_verified_within_third() {
        let p = or_chebyshev(4, &default_eps()).unwrap();
        assert!(p.verified);
        assert!(p.poly.degree() <= 2 * 2);
        assert_eq!(p.poly.degree(), 2);
    }

    #[test]
    fn n9_degree_within_factor() {
        let p = or_chebyshev(9, &default_eps()).unwrap();
        assert!(p.verified);
        assert!(p.poly.degree() <= OR_CHEBYSHEV_DEGREE_FACTOR * 3);
    }

    #[test]
    fn symmetrize_roundtrip() {
        // The construction is symmetric: symmetrizing returns the same
        // weight values.
        let p = or_chebyshev(4, &default_eps()).unwrap();
        let r = p.poly.symmetrize();
        for k in 0..=4i64 {
            let v = r.eval_int(k);
            let dev = (v - rat_int((k > 0) as i64)).abs();
            assert!(dev <= default_eps());
        }
    }

    #[test]
    fn tighter_eps_needs_higher_degree() {
        let loose = or_chebyshev(9, &default_eps()).unwrap();
        let tight = or_chebyshev(9, &rat(1, 50)).unwrap();
        assert!(tight.poly.degree() >= loose.poly.degree());
        assert!(tight.verified);
    }

    #[test]
    fn beats_ehlich_zeller_consistency() {
        // Measured parameters of the symmetrized polynomial satisfy the
        // degree bound.
        for n in [4usize, 9] {
            let p = or_chebyshev(n, &default_eps()).unwrap();
            let r = p.poly.symmetrize();
            let values: Vec<Rat> = (0..=n as i64).map(|k| r.eval_int(k)).collect();
            let b1 = values.iter().min().unwrap().clone();
            let b2 = values.iter().max().unwrap().clone();
            let c = (r.eval_int(1) - r.eval_int(0)).abs();
            let bound = crate::approx::ehlich_zeller_bound(&c, &b1, &b2, n).unwrap();
            assert!(
                bound <= r.degree() as f64 + 1e-9,
                "n={n}: bound {bound} vs degree {}",
                r.degree()
            );
        }
    }

    #[test]
    fn multilinear_expansion_matches_weight_values() {
        let p = or_chebyshev(4, &default_eps()).unwrap();
        let exact_or = MultilinearPoly::mobius_transform(
            &crate::boolfn::named_family(crate::boolfn::Family::Or, 4, None).unwrap(),
        );
        let _ = exact_or;
        for x in 0u32..16 {
            let by_weight = p.poly.symmetrize_values()[x.count_ones() as usize].clone();
            assert_eq!(p.poly.eval_point(x), by_weight);
        }
    }
}
