//! Boolean functions as complete truth tables.
//!
//! Index encoding is fixed throughout the crate: entry `b` of a table holds
//! `f(x)` for the assignment with `x_{i+1} = (b >> i) & 1`, i.e. `x1` is the
//! least significant bit.

mod parse;

use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Var;

pub use parse::{parse_expression, Expr};

pub type Bits = BitVec<u64, Lsb0>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    bits: Bits,
}

impl TruthTable {
    pub const MIN_VARS: usize = 1;
    pub const MAX_VARS: usize = 24;

    fn check_n(n: usize) -> Result<()> {
        if (Self::MIN_VARS..=Self::MAX_VARS).contains(&n) {
            Ok(())
        } else {
            Err(Error::VariableCount {
                n,
                min: Self::MIN_VARS,
                max: Self::MAX_VARS,
            })
        }
    }

    pub fn from_bits(n: usize, bits: Bits) -> Result<Self> {
        Self::check_n(n)?;
        if bits.len() != 1 << n {
            return Err(Error::SizeMismatch {
                expected: 1 << n,
                actual: bits.len(),
            });
        }
        Ok(Self { n, bits })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        Self::check_n(n)?;
        let bits = (0..1usize << n).map(f).collect();
        Ok(Self { n, bits })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self {
            n,
            bits: BitVec::repeat(value, 1 << n),
        })
    }

    /// The projection `x_{var+1}`.
    pub fn variable(n: usize, var: Var) -> Result<Self> {
        if var >= n {
            return Err(Error::VariableOutOfRange { index: var + 1, n });
        }
        Self::from_fn(n, |b| b >> var & 1 == 1)
    }

    /// Uniformly random function, reproducible from `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(n, &mut rng)
    }

    pub fn random_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::check_n(n)?;
        let bits = (0..1usize << n).map(|_| rng.gen::<bool>()).collect();
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn is_constant(&self) -> Option<bool> {
        if self.bits.not_any() {
            Some(false)
        } else if self.bits.all() {
            Some(true)
        } else {
            None
        }
    }

    /// Index of a full assignment, `point[i]` being the value of `x_{i+1}`.
    pub fn index_of(&self, point: &[bool]) -> Result<usize> {
        if point.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: point.len(),
            });
        }
        Ok(point
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &v)| acc | (usize::from(v) << i)))
    }

    pub fn evaluate(&self, point: &[bool]) -> Result<bool> {
        Ok(self.bits[self.index_of(point)?])
    }

    /// `f|_{x_I = b}` over the remaining variables, renumbered in increasing
    /// order of their original index.
    pub fn restrict(&self, assignment: &Assignment) -> Result<TruthTable> {
        let mut fixed = 0usize;
        let mut fixed_mask = 0usize;
        for &(v, val) in assignment.pairs() {
            if v >= self.n {
                return Err(Error::VariableOutOfRange {
                    index: v + 1,
                    n: self.n,
                });
            }
            fixed_mask |= 1 << v;
            fixed |= usize::from(val) << v;
        }
        if assignment.is_empty() {
            return Ok(self.clone());
        }
        let free: Vec<Var> = (0..self.n).filter(|v| fixed_mask >> v & 1 == 0).collect();
        if free.is_empty() {
            return Err(Error::VariableCount {
                n: 0,
                min: Self::MIN_VARS,
                max: Self::MAX_VARS,
            });
        }
        Self::from_fn(free.len(), |b| {
            let full = free
                .iter()
                .enumerate()
                .fold(fixed, |acc, (i, &v)| acc | ((b >> i & 1) << v));
            self.bits[full]
        })
    }

    /// Serialize in the interchange text format.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.bits.len() + 8);
        s.push_str(&format!("n={}\n", self.n));
        s.extend(self.bits.iter().map(|b| if *b { '1' } else { '0' }));
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header line".into()))?
            .trim();
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Format(format!("expected `n=<int>`, found `{header}`")))?
            .trim()
            .parse()
            .map_err(|e| Error::Format(format!("bad variable count: {e}")))?;
        Self::check_n(n)?;
        let body = lines.next().unwrap_or("").trim_end_matches('\r');
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Format(format!("unexpected trailing content `{extra}`")));
        }
        if body.len() != 1 << n {
            return Err(Error::Format(format!(
                "expected {} table characters, found {}",
                1usize << n,
                body.len()
            )));
        }
        let mut bits = Bits::with_capacity(body.len());
        for (pos, c) in body.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Format(format!(
                        "invalid character `{other}` at position {pos}"
                    )))
                }
            }
        }
        Ok(Self { n, bits })
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, ", self.n)?;
        if self.n <= 6 {
            for b in self.bits.iter() {
                f.write_str(if *b { "1" } else { "0" })?;
            }
        } else {
            write!(f, "{} ones", self.bits.count_ones())?;
        }
        f.write_str(")")
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_text(s)
    }
}

/// A partial assignment `x_I = b` with distinct variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pairs: Vec<(Var, bool)>,
}

impl Assignment {
    pub fn new<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> Result<Self> {
        let mut out: Vec<(Var, bool)> = Vec::new();
        for (v, b) in pairs {
            if out.iter().any(|&(w, _)| w == v) {
                return Err(Error::DuplicateVariable(v + 1));
            }
            out.push((v, b));
        }
        Ok(Self { pairs: out })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(Var, bool)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}
