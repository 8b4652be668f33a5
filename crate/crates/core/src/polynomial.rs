//! Exact multilinear polynomials over the rationals.
//!
//! Monomials are keyed by variable bitmask (bit i-1 = variable x_i). For
//! two-party polynomials in x1..xn, y1..yn the y-variables occupy the high
//! n mask bits.

use crate::boolfn::{BooleanFunction, Composition};
use crate::error::{Error, Result};
use crate::util::{binomial, rat_int, rat_to_string, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Multilinear polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    n: usize,
    coeffs: BTreeMap<u32, Rat>,
}

/// Univariate polynomial in the monomial basis, exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    /// `coeffs[i]` multiplies k^i; trailing zeros are trimmed.
    coeffs: Vec<Rat>,
}

impl MultilinearPoly {
    /// Build from (mask, coefficient) pairs; zero coefficients are dropped,
    /// duplicate masks are summed.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (u32, Rat)>) -> Self {
        let mut coeffs: BTreeMap<u32, Rat> = BTreeMap::new();
        for (mask, c) in terms {
            debug_assert!(mask < (1u64 << n) as u32 || n == 32);
            let entry = coeffs.entry(mask).or_insert_with(Rat::zero);
            *entry += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        MultilinearPoly { n, coeffs }
    }

    pub fn zero(n: usize) -> Self {
        MultilinearPoly {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// Number of variables the polynomial ranges over.
    pub fn arity(&self) -> usize {
        self.n
    }

    /// Monomials as (mask, coefficient), ascending by mask.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u32) -> Rat {
        self.coeffs.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    /// Number of stored (nonzero) monomials: mon(g).
    pub fn mon_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest monomial size; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Evaluate on a 0/1 point packed as a mask: sum of a_S over S subseteq x.
    pub fn eval_point(&self, x: u32) -> Rat {
        let mut acc = Rat::zero();
        for (mask, c) in &self.coeffs {
            if mask & !x == 0 {
                acc += c;
            }
        }
        acc
    }

    /// Evaluate at an arbitrary rational point.
    pub fn eval_rational(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n
            )));
        }
        let mut acc = Rat::zero();
        for (mask, c) in &self.coeffs {
            let mut term = c.clone();
            let mut m = *mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                term *= &point[i];
            }
            acc += term;
        }
        Ok(acc)
    }

    /// The unique multilinear polynomial agreeing with g on {0,1}^n,
    /// via Moebius inversion over the subset lattice.
    pub fn mobius_transform(g: &BooleanFunction) -> MultilinearPoly {
        let n = g.arity();
        let size = 1usize << n;
        let mut c: Vec<i64> = (0..size).map(|x| g.eval(x as u32) as i64).collect();
        for i in 0..n {
            let bit = 1usize << i;
            for mask in 0..size {
                if mask & bit != 0 {
                    c[mask] -= c[mask ^ bit];
                }
            }
        }
        MultilinearPoly {
            n,
            coeffs: c
                .into_iter()
                .enumerate()
                .filter(|(_, v)| *v != 0)
                .map(|(m, v)| (m as u32, rat_int(v)))
                .collect(),
        }
    }

    /// Polynomial of f(x,y) = g(x o y) over 2n variables.
    ///
    /// AND substitutes x_i*y_i for the i-th variable, OR substitutes
    /// x_i + y_i - x_i*y_i, XOR substitutes x_i + y_i - 2*x_i*y_i.
    pub fn two_party_poly(&self, op: Composition) -> MultilinearPoly {
        let n = self.n;
        // Gadget for one variable: list of (x-part, y-part, coefficient).
        let gadget: Vec<(bool, bool, i64)> = match op {
            Composition::And => vec![(true, true, 1)],
            Composition::Or => vec![(true, false, 1), (false, true, 1), (true, true, -1)],
            Composition::Xor => vec![(true, false, 1), (false, true, 1), (true, true, -2)],
        };
        let mut out: BTreeMap<u32, Rat> = BTreeMap::new();
        for (mask, c) in &self.coeffs {
            // Distribute the product of per-variable gadgets.
            let vars: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let mut partial: Vec<(u32, i64)> = vec![(0, 1)];
            for &i in &vars {
                let mut next = Vec::with_capacity(partial.len() * gadget.len());
                for &(m, coef) in &partial {
                    for &(takes_x, takes_y, gc) in &gadget {
                        let mut nm = m;
                        if takes_x {
                            nm |= 1 << i;
                        }
                        if takes_y {
                            nm |= 1 << (n + i);
                        }
                        next.push((nm, coef * gc));
                    }
                }
                partial = next;
            }
            for (m, coef) in partial {
                let entry = out.entry(m).or_insert_with(Rat::zero);
                *entry += c * rat_int(coef);
            }
        }
        out.retain(|_, c| !c.is_zero());
        MultilinearPoly {
            n: 2 * n,
            coeffs: out,
        }
    }

    /// For a polynomial over 2n variables split x/y: true iff every monomial
    /// contains x_i exactly when it contains y_i.
    pub fn is_even(&self) -> Result<bool> {
        if self.n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "even test needs an even arity, got {}",
                self.n
            )));
        }
        let half = self.n / 2;
        let low = ((1u64 << half) - 1) as u32;
        Ok(self
            .coeffs
            .keys()
            .all(|m| (m & low) == (m >> half) & low))
    }

    /// Average over each weight class, as exact values r(0..=n).
    pub fn symmetrize_values(&self) -> Vec<Rat> {
        let n = self.n;
        // Average of X_S over |x| = k is C(n-|S|, k-|S|) / C(n, k).
        (0..=n)
            .map(|k| {
                let denom = Rat::from_integer(binomial(n, k).into());
                let mut acc = Rat::zero();
                for (mask, c) in &self.coeffs {
                    let s = mask.count_ones() as usize;
                    if s <= k {
                        acc += c * Rat::from_integer(binomial(n - s, k - s).into());
                    }
                }
                acc / denom
            })
            .collect()
    }

    /// Symmetrization: the univariate polynomial r with r(k) equal to the
    /// average of the polynomial over weight-k inputs; deg r <= deg p.
    pub fn symmetrize(&self) -> UnivariatePoly {
        UnivariatePoly::interpolate_integers(&self.symmetrize_values())
    }

    /// Canonical text form: terms sorted by mask, e.g. `1 - x{1} + 2 * x{1,2}`.
    pub fn to_text(&self) -> String {
        self.render(None)
    }

    /// Text form with the x/y split of a two-party polynomial (high n mask
    /// bits are the y variables).
    pub fn to_text_split(&self) -> Result<String> {
        if self.n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "split form needs an even arity, got {}",
                self.n
            )));
        }
        Ok(self.render(Some(self.n / 2)))
    }

    fn render(&self, split: Option<usize>) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (mask, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars = match split {
                Some(half) => {
                    let xs: Vec<String> = (0..half)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| (i + 1).to_string())
                        .collect();
                    let ys: Vec<String> = (0..half)
                        .filter(|i| mask & (1 << (half + i)) != 0)
                        .map(|i| (i + 1).to_string())
                        .collect();
                    let mut s = String::new();
                    if !xs.is_empty() {
                        s.push_str(&format!("x{{{}}}", xs.join(",")));
                    }
                    if !ys.is_empty() {
                        s.push_str(&format!("y{{{}}}", ys.join(",")));
                    }
                    s
                }
                None => {
                    if *mask == 0 {
                        String::new()
                    } else {
                        let xs: Vec<String> = (0..self.n)
                            .filter(|i| mask & (1 << i) != 0)
                            .map(|i| (i + 1).to_string())
                            .collect();
                        format!("x{{{}}}", xs.join(","))
                    }
                }
            };
            if vars.is_empty() {
                out.push_str(&rat_to_string(&mag));
            } else if mag.is_one() {
                out.push_str(&vars);
            } else {
                out.push_str(&format!("{} * {}", rat_to_string(&mag), vars));
            }
        }
        out
    }

    /// JSON-friendly term list: (mask, numerator, denominator) sorted by mask.
    pub fn to_json_terms(&self) -> Vec<PolyTerm> {
        self.coeffs
            .iter()
            .map(|(m, c)| PolyTerm {
                mask: *m,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect()
    }
}

/// One serialized monomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTerm {
    pub mask: u32,
    pub num: String,
    pub den: String,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1).max(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, k: i64) -> Rat {
        self.eval(&rat_int(k))
    }

    /// Exact Lagrange interpolation through (i, values[i]) for i = 0..len.
    pub fn interpolate_integers(values: &[Rat]) -> UnivariatePoly {
        let n = values.len();
        if n == 0 {
            return UnivariatePoly::zero();
        }
        // Newton's forward differences give coefficients in the binomial
        // basis; expand C(k, j) into monomials exactly.
        let mut diffs: Vec<Rat> = values.to_vec();
        let mut newton: Vec<Rat> = Vec::with_capacity(n);
        for j in 0..n {
            newton.push(diffs[0].clone());
            for i in 0..n - j - 1 {
                diffs[i] = &diffs[i + 1] - &diffs[i];
            }
            diffs.truncate(n - j - 1);
        }
        // C(k, j) = k (k-1) ... (k-j+1) / j!
        let mut out = vec![Rat::zero(); n];
        let mut falling = vec![Rat::one()]; // coefficients of the falling factorial
        let mut factorial = Rat::one();
        for (j, b) in newton.iter().enumerate() {
            if j > 0 {
                factorial *= rat_int(j as i64);
                // multiply falling factorial by (k - (j-1))
                let shift = rat_int(j as i64 - 1);
                let mut next = vec![Rat::zero(); falling.len() + 1];
                for (i, c) in falling.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * &shift;
                }
                falling = next;
            }
            let scale = b / &factorial;
            for (i, c) in falling.iter().enumerate() {
                out[i] += c * &scale;
            }
        }
        UnivariatePoly::new(out)
    }

    /// Substitute an affine argument: returns q(k) = p(a*k + b).
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> UnivariatePoly {
        // Horner in the polynomial ring.
        let mut acc: Vec<Rat> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // acc = acc * (a k + b) + c
            let mut next = vec![Rat::zero(); acc.len() + 1];
            for (i, v) in acc.iter().enumerate() {
                next[i + 1] += v * a;
                next[i] += v * b;
            }
            if next.is_empty() {
                next.push(Rat::zero());
            }
            next[0] += c;
            acc = next;
        }
        UnivariatePoly::new(acc)
    }

    pub fn to_text(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => rat_to_string(c),
                1 => format!("{} k", rat_to_string(c)),
                _ => format!("{} k^{}", rat_to_string(c), i),
            })
            .collect();
        parts.join(" + ")
    }
}

/// Chebyshev polynomial of the first kind, exact integer coefficients.
pub fn chebyshev_t(d: usize) -> UnivariatePoly {
    let mut t0 = UnivariatePoly::new(vec![rat_int(1)]);
    if d == 0 {
        return t0;
    }
    let mut t1 = UnivariatePoly::new(vec![rat_int(0), rat_int(1)]);
    for _ in 1..d {
        // t2 = 2x*t1 - t0
        let mut coeffs = vec![Rat::zero(); t1.coeffs.len() + 1];
        for (i, c) in t1.coeffs.iter().enumerate() {
            coeffs[i + 1] += c * rat_int(2);
        }
        for (i, c) in t0.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        t0 = t1;
        t1 = UnivariatePoly::new(coeffs);
    }
    t1
}
