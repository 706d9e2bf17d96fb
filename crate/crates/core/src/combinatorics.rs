//! Entropy-ordered enumeration of `A^N`.
//!
//! Every length-`N` sequence gets a global rank: the number of sequences in
//! type classes that sort before its own, plus its lexicographic position
//! among the permutations of its class. Classes sort by empirical entropy
//! ascending, ties broken by the counts vector in lexicographic order. Ranks
//! are arbitrary-precision because `|A|^N` leaves machine words early.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::types::{pattern_nlogn, Alphabet, Composition, EntropyBase, Sequence, Symbol};

pub type RankIndex = BigUint;

/// Default cap on the number of compositions a [`ClassOrdering`] may hold.
pub const DEFAULT_MAX_CLASSES: u64 = 5_000_000;

/// Relative tolerance inside which two different class patterns are treated
/// as an entropy tie and ordered by counts vector alone.
pub const ENTROPY_TIE_EPSILON: f64 = 1e-12;

/// `N! / Π n_i!`, the number of sequences in a type class.
pub fn multinomial(comp: &Composition) -> BigUint {
    // Running product stays integral: after each factor it equals a product
    // of binomials C(k, j).
    let mut acc = BigUint::one();
    let mut k = 0u64;
    for &c in comp.counts() {
        for j in 1..=c {
            k += 1;
            acc *= k;
            acc /= j;
        }
    }
    acc
}

/// `C(n, k)` with exact arithmetic.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of compositions of `length` into `alphabet.size()` parts.
pub fn composition_count(length: u64, alphabet: Alphabet) -> BigUint {
    let parts = alphabet.size() as u64;
    binomial(length + parts - 1, parts - 1)
}

/// Iterator over every composition of `total` into `parts` non-negative
/// counts, in lexicographic order of the counts vector.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u64>>,
}

pub fn enumerate_compositions(total: u64, alphabet: Alphabet) -> Compositions {
    let mut first = vec![0u64; alphabet.size()];
    *first.last_mut().unwrap() = total;
    Compositions {
        current: Some(first),
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.current.take()?;
        let parts = current.len();
        let mut next = current.clone();
        let mut suffix = 0u64;
        for i in (0..parts.saturating_sub(1)).rev() {
            suffix += next[i + 1];
            if suffix > 0 {
                next[i] += 1;
                for c in &mut next[i + 1..] {
                    *c = 0;
                }
                next[parts - 1] = suffix - 1;
                self.current = Some(next);
                break;
            }
        }
        Some(Composition::from_counts_unchecked(current))
    }
}

/// Lexicographic rank of `seq` among the permutations of its own composition.
pub fn rank_in_class(seq: &Sequence) -> RankIndex {
    let mut remaining = crate::types::composition_of(seq).counts().to_vec();
    let mut left = seq.len() as u64;
    let mut block = multinomial(&Composition::from_counts_unchecked(remaining.clone()));
    let mut rank = BigUint::zero();
    for &x in seq.symbols() {
        let x = x as usize;
        // Each smaller symbol s heads block·n_s/left sequences; their sum is
        // block·(Σ_{s<x} n_s)/left, integral term by term.
        let smaller: u64 = remaining[..x].iter().sum();
        if smaller > 0 {
            rank += &block * smaller / left;
        }
        block = block * remaining[x] / left;
        remaining[x] -= 1;
        left -= 1;
    }
    rank
}

/// Inverse of [`rank_in_class`].
pub fn unrank_in_class(comp: &Composition, rank: &RankIndex) -> Result<Sequence> {
    let size = multinomial(comp);
    if *rank >= size {
        return Err(Error::RankOutOfRange {
            rank: rank.to_string(),
            population: size.to_string(),
        });
    }
    Ok(unrank_in_class_sized(comp, rank.clone(), size))
}

fn unrank_in_class_sized(comp: &Composition, mut rank: BigUint, mut block: BigUint) -> Sequence {
    let mut remaining = comp.counts().to_vec();
    let mut left = comp.total();
    let mut symbols = Vec::with_capacity(left as usize);
    while left > 0 {
        for (s, n) in remaining.iter_mut().enumerate() {
            if *n == 0 {
                continue;
            }
            let sub = &block * *n / left;
            if rank < sub {
                symbols.push(s as Symbol);
                *n -= 1;
                block = sub;
                break;
            }
            rank -= sub;
        }
        left -= 1;
    }
    Sequence::from_parts_unchecked(comp.alphabet(), symbols)
}

/// All type classes of `A^N` in entropy order, with cumulative sequence
/// counts. Immutable once built.
#[derive(Debug, Clone)]
pub struct ClassOrdering {
    length: u64,
    alphabet: Alphabet,
    classes: Vec<Composition>,
    /// `starts[i]` sequences precede class `i`; the final entry is `|A|^N`.
    starts: Vec<BigUint>,
    position: HashMap<Vec<u64>, usize>,
}

impl ClassOrdering {
    pub fn new(length: u64, alphabet: Alphabet) -> Result<Self> {
        Self::with_cap(length, alphabet, DEFAULT_MAX_CLASSES)
    }

    pub fn with_cap(length: u64, alphabet: Alphabet, max_classes: u64) -> Result<Self> {
        if length == 0 {
            return Err(Error::BadLength {
                expected: 1,
                got: 0,
            });
        }
        let count = composition_count(length, alphabet);
        if count > BigUint::from(max_classes) {
            return Err(Error::TooManyClasses {
                classes: count.to_string(),
                cap: max_classes,
            });
        }

        let mut keyed: Vec<(f64, Composition)> = enumerate_compositions(length, alphabet)
            .map(|c| (pattern_nlogn(&c.pattern()), c))
            .collect();

        // Larger Σ n ln n means lower entropy. Distinct values closer than the
        // relative epsilon chain into one band, ordered by counts vector only.
        let mut levels: Vec<f64> = keyed.iter().map(|(s, _)| *s).collect();
        levels.sort_unstable_by(|a, b| b.total_cmp(a));
        levels.dedup_by(|a, b| a.to_bits() == b.to_bits());
        let mut band_of: HashMap<u64, usize> = HashMap::with_capacity(levels.len());
        let mut band = 0usize;
        for (i, &level) in levels.iter().enumerate() {
            if i > 0 {
                let prev = levels[i - 1];
                if prev - level > ENTROPY_TIE_EPSILON * prev.abs().max(level.abs()) {
                    band += 1;
                }
            }
            band_of.insert(level.to_bits(), band);
        }

        keyed.sort_unstable_by(|(sa, ca), (sb, cb)| {
            band_of[&sa.to_bits()]
                .cmp(&band_of[&sb.to_bits()])
                .then_with(|| ca.counts().cmp(cb.counts()))
        });
        let classes: Vec<Composition> = keyed.into_iter().map(|(_, c)| c).collect();

        let factorials = factorial_table(length);
        let mut starts = Vec::with_capacity(classes.len() + 1);
        let mut acc = BigUint::zero();
        starts.push(acc.clone());
        for c in &classes {
            let mut size = factorials[length as usize].clone();
            for &n in c.counts() {
                if n > 1 {
                    size /= &factorials[n as usize];
                }
            }
            acc += size;
            starts.push(acc.clone());
        }
        let position = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.counts().to_vec(), i))
            .collect();

        Ok(ClassOrdering {
            length,
            alphabet,
            classes,
            starts,
            position,
        })
    }

    #[inline]
    pub fn length(&self) -> u64 {
        self.length
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Total number of sequences, `|A|^N`.
    pub fn population(&self) -> &BigUint {
        self.starts.last().unwrap()
    }

    pub fn classes(&self) -> &[Composition] {
        &self.classes
    }

    /// Number of sequences ranked before class `index`.
    pub fn class_start(&self, index: usize) -> &BigUint {
        &self.starts[index]
    }

    pub fn class_size(&self, index: usize) -> BigUint {
        &self.starts[index + 1] - &self.starts[index]
    }

    pub fn class_index(&self, comp: &Composition) -> Option<usize> {
        self.position.get(comp.counts()).copied()
    }

    /// Per-symbol entropy of class `index`.
    pub fn class_entropy(&self, index: usize, base: EntropyBase) -> f64 {
        crate::types::entropy_of_composition(&self.classes[index], base)
            .map(|e| e.per_symbol)
            .unwrap_or(0.0)
    }

    /// Index of the class holding global rank `rank`.
    pub fn class_of_rank(&self, rank: &BigUint) -> Option<usize> {
        if rank >= self.population() {
            return None;
        }
        Some(self.starts[1..].partition_point(|end| end <= rank))
    }

    fn check(&self, seq: &Sequence) -> Result<()> {
        if seq.alphabet() != self.alphabet {
            return Err(Error::BadParams(format!(
                "sequence alphabet {} does not match ordering alphabet {}",
                seq.alphabet().size(),
                self.alphabet.size()
            )));
        }
        if seq.len() as u64 != self.length {
            return Err(Error::BadLength {
                expected: self.length,
                got: seq.len() as u64,
            });
        }
        Ok(())
    }

    /// Global entropy-ordered rank of `seq`.
    pub fn rank(&self, seq: &Sequence) -> Result<RankIndex> {
        self.check(seq)?;
        let comp = crate::types::composition_of(seq);
        let index = self.position[comp.counts()];
        Ok(&self.starts[index] + rank_in_class(seq))
    }

    pub fn unrank(&self, rank: &RankIndex) -> Result<Sequence> {
        let index = self
            .class_of_rank(rank)
            .ok_or_else(|| Error::RankOutOfRange {
                rank: rank.to_string(),
                population: self.population().to_string(),
            })?;
        let offset = rank - &self.starts[index];
        Ok(unrank_in_class_sized(
            &self.classes[index],
            offset,
            self.class_size(index),
        ))
    }

    /// Convenience for small populations.
    pub fn unrank_u64(&self, rank: u64) -> Result<Sequence> {
        self.unrank(&BigUint::from(rank))
    }

    /// `|A|^N` as a machine word, if it fits.
    pub fn population_u64(&self) -> Option<u64> {
        self.population().to_u64()
    }
}

pub fn class_ordering(length: u64, alphabet: Alphabet) -> Result<ClassOrdering> {
    ClassOrdering::new(length, alphabet)
}

pub fn rank_sequence(seq: &Sequence, ordering: &ClassOrdering) -> Result<RankIndex> {
    ordering.rank(seq)
}

pub fn unrank_sequence(rank: &RankIndex, ordering: &ClassOrdering) -> Result<Sequence> {
    ordering.unrank(rank)
}

fn factorial_table(n: u64) -> Vec<BigUint> {
    let mut table = Vec::with_capacity(n as usize + 1);
    let mut acc = BigUint::one();
    table.push(acc.clone());
    for i in 1..=n {
        acc *= i;
        table.push(acc.clone());
    }
    table
}
