//! Total Boolean functions as truth tables, named families, restrictions,
//! and symmetry detection.
//!
//! Inputs are indexed with `x1` as the least-significant bit: input `x`
//! lives at table index `sum x_i * 2^(i-1)`. Variables are 1-based; index 0
//! is rejected everywhere.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest supported arity for materialized truth tables.
pub const MAX_ARITY: usize = 16;

/// How Alice's and Bob's inputs are combined bitwise into one argument for g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Composition {
    And,
    Or,
    Xor,
}

impl Composition {
    /// Apply the bitwise combination to two packed inputs.
    pub fn combine(self, x: u32, y: u32) -> u32 {
        match self {
            Composition::And => x & y,
            Composition::Or => x | y,
            Composition::Xor => x ^ y,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Composition::And => "and",
            Composition::Or => "or",
            Composition::Xor => "xor",
        }
    }
}

impl std::str::FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "and" => Ok(Composition::And),
            "or" => Ok(Composition::Or),
            "xor" => Ok(Composition::Xor),
            other => Err(Error::Parse {
                token: other.to_string(),
                input: s.to_string(),
            }),
        }
    }
}

/// A total Boolean function g: {0,1}^n -> {0,1} stored as a truth table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

/// Value profile of a symmetric function: `values[k]` is g on weight-k inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricProfile {
    /// `values[k] = g(x)` for any `|x| = k`, `k = 0..=n`.
    pub values: Vec<bool>,
    /// Smallest k > 0 with `values[k] = 1`, if any.
    pub t: Option<usize>,
}

impl SymmetricProfile {
    /// Profile from explicit weight-class values.
    pub fn new(values: Vec<bool>) -> Self {
        let t = values.iter().enumerate().skip(1).find(|(_, v)| **v).map(|(k, _)| k);
        SymmetricProfile { values, t }
    }

    /// Arity of the underlying function.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// Profile of NOR on n variables (1 only at weight 0).
    pub fn nor(n: usize) -> Self {
        let mut values = vec![false; n + 1];
        values[0] = true;
        SymmetricProfile::new(values)
    }

    /// Profile of the threshold function `1 iff |x| >= t`.
    pub fn threshold(n: usize, t: usize) -> Self {
        let values = (0..=n).map(|k| k >= t).collect();
        SymmetricProfile::new(values)
    }

    /// Materialize the truth table (arity must be within the table cap).
    pub fn to_function(&self) -> Result<BooleanFunction> {
        let n = self.n();
        BooleanFunction::from_fn(n, |x| self.values[x.count_ones() as usize])
    }
}

impl BooleanFunction {
    /// Build from an explicit table; `table.len()` must be `2^n`.
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n, 1, MAX_ARITY));
        }
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableSizeMismatch {
                got: table.len(),
                expected,
            });
        }
        Ok(BooleanFunction { n, table })
    }

    /// Build by evaluating a closure on every packed input.
    pub fn from_fn(n: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        if n == 0 || n > MAX_ARITY {
            return Err(Error::ArityOutOfRange(n, 1, MAX_ARITY));
        }
        let table = (0..1u32 << n).map(f).collect();
        Ok(BooleanFunction { n, table })
    }

    /// Decode a truth table from the spec's compact form: the table index
    /// ranges over the bits of `bits`, low bit = input 0.
    pub fn from_table_bits(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::ArityOutOfRange(n, 1, 6));
        }
        Self::from_fn(n, |x| (bits >> x) & 1 == 1)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// Evaluate on a packed input (`x1` = bit 0).
    pub fn eval(&self, x: u32) -> bool {
        self.table[x as usize]
    }

    /// Evaluate on an explicit bit slice `[x1, ..., xn]`.
    pub fn eval_bits(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() != self.n {
            return Err(Error::TableSizeMismatch {
                got: bits.len(),
                expected: self.n,
            });
        }
        let mut x = 0u32;
        for (i, b) in bits.iter().enumerate() {
            if *b {
                x |= 1 << i;
            }
        }
        Ok(self.eval(x))
    }

    /// All-input mask `2^n - 1`.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    /// Pointwise complement `1 - g`.
    pub fn complement(&self) -> BooleanFunction {
        BooleanFunction {
            n: self.n,
            table: self.table.iter().map(|b| !b).collect(),
        }
    }

    /// Symmetry test; returns the weight profile when g depends on |x| only.
    pub fn is_symmetric(&self) -> Option<SymmetricProfile> {
        let mut values: Vec<Option<bool>> = vec![None; self.n + 1];
        for x in 0..(1u32 << self.n) {
            let w = x.count_ones() as usize;
            let v = self.eval(x);
            match values[w] {
                None => values[w] = Some(v),
                Some(prev) if prev != v => return None,
                _ => {}
            }
        }
        Some(SymmetricProfile::new(
            values.into_iter().map(|v| v.unwrap()).collect(),
        ))
    }

    /// True iff g never decreases when variables flip 0 -> 1.
    pub fn is_monotone(&self) -> bool {
        // Single-bit covers suffice; transitivity gives the rest.
        for x in 0..(1u32 << self.n) {
            let zeros = !x & self.full_mask();
            let mut rest = zeros;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                if self.eval(x) && !self.eval(x | bit) {
                    return false;
                }
            }
        }
        true
    }

    /// Fix the assigned variables and return the function on the rest.
    ///
    /// Remaining variables keep their relative order. Variables are 1-based.
    pub fn restrict(&self, assignment: &[(usize, bool)]) -> Result<BooleanFunction> {
        let mut fixed_mask = 0u32;
        let mut fixed_vals = 0u32;
        for &(var, val) in assignment {
            if var == 0 || var > self.n {
                return Err(Error::VarOutOfRange(var, self.n));
            }
            let bit = 1u32 << (var - 1);
            if fixed_mask & bit != 0 {
                return Err(Error::OverlappingBlocks(var));
            }
            fixed_mask |= bit;
            if val {
                fixed_vals |= bit;
            }
        }
        let m = self.n - assignment.len();
        if m == 0 {
            // Zero-arity result is not representable; callers that fully fix
            // a function get a 1-variable constant instead.
            let v = self.eval(fixed_vals);
            return BooleanFunction::from_fn(1, |_| v);
        }
        let free_bits: Vec<usize> = (0..self.n)
            .filter(|i| fixed_mask & (1 << i) == 0)
            .collect();
        BooleanFunction::from_fn(m, |y| {
            let mut x = fixed_vals;
            for (j, &i) in free_bits.iter().enumerate() {
                if (y >> j) & 1 == 1 {
                    x |= 1 << i;
                }
            }
            self.eval(x)
        })
    }

    /// Identify each block's variables with one fresh variable and fix
    /// everything outside the blocks to the base input `z`.
    ///
    /// Every position inside a block must carry a 0 in `z`. The result h on
    /// b = `blocks.len()` variables satisfies `h(0) = g(z)` and
    /// `h(e_i) = g(z with block i flipped to 1)`.
    pub fn restrict_by_blocks(&self, z: u32, blocks: &[Vec<usize>]) -> Result<BooleanFunction> {
        let mut seen = 0u32;
        let mut block_masks = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut mask = 0u32;
            for &var in block {
                if var == 0 || var > self.n {
                    return Err(Error::VarOutOfRange(var, self.n));
                }
                let bit = 1u32 << (var - 1);
                if seen & bit != 0 {
                    return Err(Error::OverlappingBlocks(var));
                }
                if z & bit != 0 {
                    return Err(Error::BlockOnOnePosition(var));
                }
                seen |= bit;
                mask |= bit;
            }
            block_masks.push(mask);
        }
        let b = blocks.len();
        if b == 0 || b > MAX_ARITY {
            return Err(Error::ArityOutOfRange(b, 1, MAX_ARITY));
        }
        BooleanFunction::from_fn(b, |y| {
            let mut x = z;
            for (i, mask) in block_masks.iter().enumerate() {
                if (y >> i) & 1 == 1 {
                    x |= mask;
                }
            }
            self.eval(x)
        })
    }
}

/// Named function families understood by the funcspec mini-language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    And,
    Or,
    Nor,
    /// Parity of |x|; also the inner function of the inner-product problem.
    Xor,
    /// Complement of parity; inner function of the IP-complement problem.
    Nxor,
    Maj,
    /// 1 iff |x| >= t.
    Threshold,
    /// 2-level AND of ORs with fan-out sqrt(n); n must be a perfect square.
    AndOrTree,
}

impl Family {
    pub fn parse(name: &str) -> Result<Family> {
        match name.to_ascii_lowercase().as_str() {
            "and" => Ok(Family::And),
            "or" => Ok(Family::Or),
            "nor" => Ok(Family::Nor),
            "xor" | "parity" | "ip" => Ok(Family::Xor),
            "nxor" | "nparity" | "nip" => Ok(Family::Nxor),
            "maj" => Ok(Family::Maj),
            "thr" | "geq" | "threshold" => Ok(Family::Threshold),
            "andor" | "and-or" => Ok(Family::AndOrTree),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// Truth table of a named family member.
pub fn named_family(family: Family, n: usize, param: Option<usize>) -> Result<BooleanFunction> {
    let need_no_param = |fam: &str| -> Result<()> {
        if param.is_some() {
            Err(Error::InvalidParams {
                family: fam.to_string(),
                reason: "family takes no parameter".to_string(),
            })
        } else {
            Ok(())
        }
    };
    match family {
        Family::And => {
            need_no_param("and")?;
            BooleanFunction::from_fn(n, |x| x.count_ones() as usize == n)
        }
        Family::Or => {
            need_no_param("or")?;
            BooleanFunction::from_fn(n, |x| x != 0)
        }
        Family::Nor => {
            need_no_param("nor")?;
            BooleanFunction::from_fn(n, |x| x == 0)
        }
        Family::Xor => {
            need_no_param("xor")?;
            BooleanFunction::from_fn(n, |x| x.count_ones() % 2 == 1)
        }
        Family::Nxor => {
            need_no_param("nxor")?;
            BooleanFunction::from_fn(n, |x| x.count_ones() % 2 == 0)
        }
        Family::Maj => {
            need_no_param("maj")?;
            BooleanFunction::from_fn(n, |x| 2 * x.count_ones() as usize > n)
        }
        Family::Threshold => {
            let t = param.ok_or_else(|| Error::InvalidParams {
                family: "thr".to_string(),
                reason: "missing threshold t".to_string(),
            })?;
            if t > n {
                return Err(Error::InvalidParams {
                    family: "thr".to_string(),
                    reason: format!("t={t} exceeds n={n}"),
                });
            }
            BooleanFunction::from_fn(n, move |x| x.count_ones() as usize >= t)
        }
        Family::AndOrTree => {
            need_no_param("andor")?;
            let k = (n as f64).sqrt().round() as usize;
            if k * k != n {
                return Err(Error::InvalidParams {
                    family: "andor".to_string(),
                    reason: format!("n={n} is not a perfect square"),
                });
            }
            // Blocks of k consecutive variables, OR within a block, AND across.
            BooleanFunction::from_fn(n, move |x| {
                (0..k).all(|b| {
                    let block = ((x >> (b * k)) as u64) & ((1u64 << k) - 1);
                    block != 0
                })
            })
        }
    }
}

/// Parse the funcspec mini-language:
/// `name:OR,n=4`, `name:thr,n=5,t=3`, or `tt:<hex>,n=3`.
///
/// Hex tables expand each digit to 4 bits with the lowest bit holding the
/// lowest table index; digit order follows the stream (first digit covers
/// indices 0..4).
pub fn parse_funcspec(spec: &str) -> Result<BooleanFunction> {
    let err = |token: &str| Error::Parse {
        token: token.to_string(),
        input: spec.to_string(),
    };
    let (kind, rest) = spec.split_once(':').ok_or_else(|| err(spec))?;
    match kind {
        "name" => {
            let mut family_name = None;
            let mut n = None;
            let mut t = None;
            for (idx, part) in rest.split(',').enumerate() {
                if idx == 0 {
                    family_name = Some(part);
                    continue;
                }
                let (key, value) = part.split_once('=').ok_or_else(|| err(part))?;
                match key.trim() {
                    "n" => n = Some(value.trim().parse::<usize>().map_err(|_| err(value))?),
                    "t" => t = Some(value.trim().parse::<usize>().map_err(|_| err(value))?),
                    other => return Err(err(other)),
                }
            }
            let family = Family::parse(family_name.ok_or_else(|| err(rest))?)?;
            let n = n.ok_or_else(|| err("n"))?;
            named_family(family, n, t)
        }
        "tt" => {
            let mut hex = None;
            let mut n = None;
            for (idx, part) in rest.split(',').enumerate() {
                if idx == 0 {
                    hex = Some(part.trim());
                    continue;
                }
                let (key, value) = part.split_once('=').ok_or_else(|| err(part))?;
                match key.trim() {
                    "n" => n = Some(value.trim().parse::<usize>().map_err(|_| err(value))?),
                    other => return Err(err(other)),
                }
            }
            let hex = hex.ok_or_else(|| err(rest))?;
            let hex = hex.strip_prefix("0x").unwrap_or(hex);
            let n = n.ok_or_else(|| err("n"))?;
            if n == 0 || n > MAX_ARITY {
                return Err(Error::ArityOutOfRange(n, 1, MAX_ARITY));
            }
            let bits_needed = 1usize << n;
            let digits_needed = bits_needed.div_ceil(4);
            if hex.len() != digits_needed {
                return Err(err(hex));
            }
            let mut table = vec![false; bits_needed];
            for (d, ch) in hex.chars().enumerate() {
                let v = ch.to_digit(16).ok_or_else(|| err(&ch.to_string()))?;
                for b in 0..4 {
                    let idx = 4 * d + b;
                    let bit = (v >> b) & 1 == 1;
                    if idx < bits_needed {
                        table[idx] = bit;
                    } else if bit {
                        return Err(err(hex));
                    }
                }
            }
            BooleanFunction::new(n, table)
        }
        other => Err(err(other)),
    }
}
