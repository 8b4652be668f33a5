//! Small numeric and bit-twiddling helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number backing every coefficient and matrix entry.
pub type Rat = BigRational;

/// Rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Exact rational value of an `f64` (every finite double is a dyadic rational).
pub fn rat_from_f64(v: f64) -> Option<Rat> {
    Rat::from_float(v)
}

/// Best-effort `f64` view of a rational, for display and report values.
pub fn rat_to_f64(v: &Rat) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        let n = v.numer().to_f64().unwrap_or(f64::NAN);
        let d = v.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parse a rational from `a/b` or plain integer or decimal text.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().ok()?;
        let den: BigInt = b.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = if negative { -frac } else { frac };
        return Some(Rat::new(int * &scale + frac, scale));
    }
    let num: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(num))
}

/// Canonical `num/den` text form.
pub fn rat_to_string(v: &Rat) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binomial coefficient as u64; panics on overflow (callers stay well below).
pub fn binomial_u64(n: usize, k: usize) -> u64 {
    binomial(n, k).to_u64().expect("binomial overflow")
}

/// Ceiling of log2; `ceil_log2(0) == 0` and `ceil_log2(1) == 0`.
pub fn ceil_log2(v: u64) -> u32 {
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros()
    }
}

/// Exact log2 when `v` is a power of two.
pub fn exact_log2(v: u64) -> Option<u32> {
    if v > 0 && v.is_power_of_two() {
        Some(v.trailing_zeros())
    } else {
        None
    }
}

/// SplitMix64 step, used to derive independent per-trial seeds.
pub fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
}

/// One SplitMix64 output for the given state value.
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic seed for trial `index` of a run keyed by `seed` and `tag`.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix64_mix(seed ^ splitmix64_mix(tag ^ splitmix64_mix(index)))
}

/// Iterate all sub-masks of `mask` (including empty and full), ascending order.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(cur.wrapping_sub(mask) & mask)
        };
        Some(cur)
    })
}

/// Absolute value helper for rationals.
pub fn rat_abs(v: &Rat) -> Rat {
    v.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_basics() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(6), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u64(4, 2), 6);
        assert_eq!(binomial_u64(10, 0), 1);
        assert_eq!(binomial_u64(3, 5), 0);
        assert_eq!(binomial_u64(6, 3), 20);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rat("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn submask_enumeration() {
        let all: Vec<u32> = submasks(0b101).collect();
        assert_eq!(all, vec![0b000, 0b001, 0b100, 0b101]);
        let empty: Vec<u32> = submasks(0).collect();
        assert_eq!(empty, vec![0]);
    }
}
