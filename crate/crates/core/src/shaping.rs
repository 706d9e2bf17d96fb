//! The set shaping transform.
//!
//! `A^N` is mapped one-to-one onto the `|A|^N` sequences of length `N + K`
//! with the smallest zero-order empirical entropy. Both sets are read through
//! their entropy orderings: the message of rank `r` among length-`N`
//! sequences becomes the sequence of rank `r` among length-`N + K` sequences.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{ClassOrdering, DEFAULT_MAX_CLASSES};
use crate::error::{Error, Result};
use crate::types::{Alphabet, Composition, EntropyBase, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapingParams {
    pub length: u64,
    pub alphabet: Alphabet,
    pub extra: u64,
    pub base: EntropyBase,
}

impl ShapingParams {
    pub fn new(length: u64, alphabet: Alphabet, extra: u64) -> Result<Self> {
        let p = ShapingParams {
            length,
            alphabet,
            extra,
            base: EntropyBase::BITS,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_base(mut self, base: EntropyBase) -> Self {
        self.base = base;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet.size() < 3 {
            return Err(Error::AlphabetTooSmall(self.alphabet.size()));
        }
        if self.length == 0 {
            return Err(Error::BadParams("message length must be at least 1".into()));
        }
        if self.extra == 0 {
            return Err(Error::BadParams("K must be at least 1".into()));
        }
        Ok(())
    }

    /// `N_t = N + K`.
    pub fn shaped_length(&self) -> u64 {
        self.length + self.extra
    }
}

/// Ready-to-use transform: both orderings built once and shared.
#[derive(Debug, Clone)]
pub struct Shaper {
    params: ShapingParams,
    source: Arc<ClassOrdering>,
    target: Arc<ClassOrdering>,
}

impl Shaper {
    pub fn new(params: ShapingParams) -> Result<Self> {
        Self::with_cap(params, DEFAULT_MAX_CLASSES)
    }

    pub fn with_cap(params: ShapingParams, max_classes: u64) -> Result<Self> {
        params.validate()?;
        let source = ClassOrdering::with_cap(params.length, params.alphabet, max_classes)?;
        let target = ClassOrdering::with_cap(params.shaped_length(), params.alphabet, max_classes)?;
        Ok(Self::from_orderings(
            params,
            Arc::new(source),
            Arc::new(target),
        ))
    }

    /// Reuses orderings built elsewhere. Both must match `params`.
    pub fn from_orderings(
        params: ShapingParams,
        source: Arc<ClassOrdering>,
        target: Arc<ClassOrdering>,
    ) -> Self {
        assert_eq!(source.length(), params.length);
        assert_eq!(target.length(), params.shaped_length());
        assert_eq!(source.alphabet(), params.alphabet);
        assert_eq!(target.alphabet(), params.alphabet);
        Shaper {
            params,
            source,
            target,
        }
    }

    pub fn params(&self) -> &ShapingParams {
        &self.params
    }

    pub fn source_ordering(&self) -> &ClassOrdering {
        &self.source
    }

    pub fn target_ordering(&self) -> &ClassOrdering {
        &self.target
    }

    /// `f(m)`.
    pub fn transform(&self, seq: &Sequence) -> Result<Sequence> {
        let rank = self.source.rank(seq)?;
        self.target.unrank(&rank)
    }

    /// `f⁻¹`; rejects sequences outside the shaped subset.
    pub fn inverse(&self, seq: &Sequence) -> Result<Sequence> {
        let rank = self.target.rank(seq)?;
        if &rank >= self.source.population() {
            return Err(Error::NotInShapedSubset);
        }
        self.source.unrank(&rank)
    }

    /// Type classes making up the shaped subset. The last class may be cut
    /// part-way by the in-class lexicographic order.
    pub fn subset_stats(&self) -> ShapedSubsetStats {
        let quota = self.source.population();
        let mut classes = Vec::new();
        let mut max_entropy = 0.0f64;
        for (i, comp) in self.target.classes().iter().enumerate() {
            let start = self.target.class_start(i);
            if start >= quota {
                break;
            }
            let end = self.target.class_start(i + 1);
            let taken = if end > quota {
                quota - start
            } else {
                end - start
            };
            max_entropy = max_entropy.max(self.target.class_entropy(i, self.params.base));
            let whole = !end.gt(quota);
            classes.push(ShapedClass {
                composition: comp.clone(),
                count: taken,
                whole,
            });
        }
        debug_assert_eq!(classes.iter().map(|c| &c.count).sum::<BigUint>(), *quota);
        ShapedSubsetStats {
            max_entropy_in_subset: max_entropy,
            classes,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapedClass {
    pub composition: Composition,
    /// Sequences of this class inside the subset.
    pub count: BigUint,
    /// False only for a boundary class cut by the quota.
    pub whole: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapedSubsetStats {
    /// Largest per-symbol entropy in the subset, in the params' base.
    pub max_entropy_in_subset: f64,
    pub classes: Vec<ShapedClass>,
}

impl ShapedSubsetStats {
    pub fn total(&self) -> BigUint {
        self.classes
            .iter()
            .fold(BigUint::zero(), |acc, c| acc + &c.count)
    }
}

pub fn transform(seq: &Sequence, params: &ShapingParams) -> Result<Sequence> {
    params.validate()?;
    check_length(seq, params.length)?;
    Shaper::new(*params)?.transform(seq)
}

pub fn inverse_transform(seq: &Sequence, params: &ShapingParams) -> Result<Sequence> {
    params.validate()?;
    check_length(seq, params.shaped_length())?;
    Shaper::new(*params)?.inverse(seq)
}

pub fn shaped_subset_stats(params: &ShapingParams) -> Result<ShapedSubsetStats> {
    Ok(Shaper::new(*params)?.subset_stats())
}

fn check_length(seq: &Sequence, expected: u64) -> Result<()> {
    if seq.len() as u64 != expected {
        return Err(Error::BadLength {
            expected,
            got: seq.len() as u64,
        });
    }
    Ok(())
}
