//! Sequences over a finite alphabet, their compositions (type classes) and
//! zero-order empirical entropy.
//!
//! Symbols are stored zero-based. The textual form used for interchange is
//! one-based, separated by whitespace or commas (`"2 1 1"`, `"2,1,1"`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A zero-based symbol index.
pub type Symbol = u16;

/// Alphabet of `size` symbols, `0..size` internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(u16);

impl Alphabet {
    pub const MAX_SIZE: usize = u16::MAX as usize;

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > Self::MAX_SIZE {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Alphabet(size as u16))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn contains(self, symbol: Symbol) -> bool {
        (symbol as usize) < self.size()
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        Alphabet::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.size()
    }
}

/// Logarithm base for entropy values. Defaults to 2 (bits).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EntropyBase(f64);

impl EntropyBase {
    pub const BITS: EntropyBase = EntropyBase(2.0);

    pub fn new(base: f64) -> Result<Self> {
        if !base.is_finite() || base <= 1.0 {
            return Err(Error::InvalidBase(base));
        }
        Ok(EntropyBase(base))
    }

    /// Base equal to the alphabet size, so a uniform source has entropy 1.
    pub fn of_alphabet(alphabet: Alphabet) -> Result<Self> {
        Self::new(alphabet.size() as f64)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub(crate) fn ln(self) -> f64 {
        if self.0 == 2.0 {
            std::f64::consts::LN_2
        } else {
            self.0.ln()
        }
    }
}

impl Default for EntropyBase {
    fn default() -> Self {
        EntropyBase::BITS
    }
}

impl TryFrom<f64> for EntropyBase {
    type Error = Error;

    fn try_from(base: f64) -> Result<Self> {
        EntropyBase::new(base)
    }
}

impl From<EntropyBase> for f64 {
    fn from(b: EntropyBase) -> f64 {
        b.0
    }
}

/// Entropy per symbol, tagged with the base it is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub per_symbol: f64,
    pub base: EntropyBase,
}

/// A finite message over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl Sequence {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::SymbolOutOfRange {
                symbol: bad as usize,
                alphabet: alphabet.size(),
            });
        }
        Ok(Sequence { alphabet, symbols })
    }

    /// Builds a sequence from one-based symbols, as written in tables.
    pub fn from_one_based(alphabet: Alphabet, symbols: &[usize]) -> Result<Self> {
        let zero_based = symbols
            .iter()
            .map(|&s| {
                if s == 0 || s > alphabet.size() {
                    Err(Error::SymbolOutOfRange {
                        symbol: s,
                        alphabet: alphabet.size(),
                    })
                } else {
                    Ok((s - 1) as Symbol)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence {
            alphabet,
            symbols: zero_based,
        })
    }

    /// Parses the textual interchange form: one-based integers separated by
    /// whitespace and/or commas.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let symbols = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                usize::from_str(tok).map_err(|_| Error::Parse(format!("not a symbol: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(alphabet, &symbols)
    }

    #[inline]
    pub(crate) fn from_parts_unchecked(alphabet: Alphabet, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        Sequence { alphabet, symbols }
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }
}

impl fmt::Display for Sequence {
    /// One-based, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", s as usize + 1)?;
        }
        Ok(())
    }
}

/// Per-symbol occurrence counts. Two sequences share a type class exactly when
/// their compositions are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Composition {
    counts: Vec<u64>,
    total: u64,
}

impl Composition {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        Alphabet::new(counts.len())?;
        let total = counts.iter().sum();
        Ok(Composition { counts, total })
    }

    #[inline]
    pub(crate) fn from_counts_unchecked(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        Composition { counts, total }
    }

    #[inline]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.counts.len() as u16)
    }

    /// Number of symbols with a non-zero count.
    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Non-zero counts in descending order: the type-class pattern shared by all
    /// permutations of the counts vector.
    pub fn pattern(&self) -> Vec<u64> {
        let mut p: Vec<u64> = self.counts.iter().copied().filter(|&c| c > 0).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }
}

pub fn composition_of(seq: &Sequence) -> Composition {
    let mut counts = vec![0u64; seq.alphabet.size()];
    for &s in &seq.symbols {
        counts[s as usize] += 1;
    }
    Composition {
        counts,
        total: seq.len() as u64,
    }
}

/// `Σ n ln n` over the pattern of a composition, summed in pattern order so the
/// result is bit-identical for every permutation of the counts.
pub(crate) fn pattern_nlogn(pattern: &[u64]) -> f64 {
    pattern
        .iter()
        .filter(|&&n| n > 1)
        .map(|&n| {
            let n = n as f64;
            n * n.ln()
        })
        .sum()
}

pub fn entropy_of_composition(comp: &Composition, base: EntropyBase) -> Result<EntropyValue> {
    if comp.total == 0 {
        return Err(Error::EmptyComposition);
    }
    let total = comp.total as f64;
    let nats: f64 = comp
        .pattern()
        .into_iter()
        .map(|n| {
            let p = n as f64 / total;
            -p * p.ln()
        })
        .sum();
    Ok(EntropyValue {
        // Clamp tiny negative rounding for single-symbol compositions.
        per_symbol: (nats / base.ln()).max(0.0),
        base,
    })
}

pub fn empirical_entropy(seq: &Sequence, base: EntropyBase) -> Result<EntropyValue> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    entropy_of_composition(&composition_of(seq), base)
}

/// `N · H0` for a composition of total `N`.
pub fn weighted_entropy_of_composition(comp: &Composition, base: EntropyBase) -> Result<f64> {
    Ok(comp.total as f64 * entropy_of_composition(comp, base)?.per_symbol)
}

/// `N · H0(m)`: the sequence length times its zero-order empirical entropy.
pub fn weighted_entropy(seq: &Sequence, base: EntropyBase) -> Result<f64> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    weighted_entropy_of_composition(&composition_of(seq), base)
}

pub fn distinct_symbol_count(seq: &Sequence) -> usize {
    composition_of(seq).distinct()
}
