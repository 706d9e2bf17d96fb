use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{composition_count, enumerate_compositions, multinomial};
use crate::error::{Error, Result};
use crate::shaping::{Shaper, ShapingParams};
use crate::types::{Alphabet, Composition};

/// Type-class statistics for one set of sequences. Sequence counts are
/// decimal strings since they are unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSide {
    pub length: u64,
    pub classes: u64,
    pub classes_below_full_support: u64,
    pub class_fraction_below: f64,
    #[serde(with = "decimal")]
    pub sequences: BigUint,
    #[serde(with = "decimal")]
    pub sequences_below_full_support: BigUint,
    pub sequence_fraction_below: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub alphabet: Alphabet,
    pub extra: u64,
    pub plain: CensusSide,
    pub shaped: CensusSide,
}

impl CensusSide {
    pub fn from_classes<'a, I>(length: u64, alphabet: Alphabet, classes: I) -> Self
    where
        I: IntoIterator<Item = (&'a Composition, BigUint)>,
    {
        let mut n_classes = 0u64;
        let mut n_below = 0u64;
        let mut seqs = BigUint::zero();
        let mut seqs_below = BigUint::zero();
        for (comp, count) in classes {
            n_classes += 1;
            if comp.distinct() < alphabet.size() {
                n_below += 1;
                seqs_below += &count;
            }
            seqs += count;
        }
        CensusSide {
            length,
            classes: n_classes,
            classes_below_full_support: n_below,
            class_fraction_below: n_below as f64 / n_classes as f64,
            sequence_fraction_below: ratio(&seqs_below, &seqs),
            sequences: seqs,
            sequences_below_full_support: seqs_below,
        }
    }

    /// All of `A^N`.
    pub fn plain(length: u64, alphabet: Alphabet, max_classes: u64) -> Result<Self> {
        let count = composition_count(length, alphabet);
        if count > BigUint::from(max_classes) {
            return Err(Error::TooManyClasses {
                classes: count.to_string(),
                cap: max_classes,
            });
        }
        let classes: Vec<(Composition, BigUint)> = enumerate_compositions(length, alphabet)
            .map(|c| {
                let m = multinomial(&c);
                (c, m)
            })
            .collect();
        Ok(Self::from_classes(
            length,
            alphabet,
            classes.iter().map(|(c, m)| (c, m.clone())),
        ))
    }
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    if den.is_zero() {
        return 0.0;
    }
    // Scale down together so both fit an f64 without overflowing.
    let shift = den.bits().saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Census of `A^N` against the shaped subset of `A^(N+K)`.
pub fn type_class_census(
    length: u64,
    alphabet: Alphabet,
    extra: u64,
    max_classes: u64,
) -> Result<CensusReport> {
    let params = ShapingParams::new(length, alphabet, extra)?;
    let plain = CensusSide::plain(length, alphabet, max_classes)?;
    let stats = Shaper::with_cap(params, max_classes)?.subset_stats();
    let shaped = CensusSide::from_classes(
        params.shaped_length(),
        alphabet,
        stats
            .classes
            .iter()
            .map(|c| (&c.composition, c.count.clone())),
    );
    Ok(CensusReport {
        alphabet,
        extra,
        plain,
        shaped,
    })
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::DEFAULT_MAX_CLASSES;

    fn a(n: usize) -> Alphabet {
        Alphabet::new(n).unwrap()
    }

    #[test]
    fn ternary_length_three_census() {
        let c = type_class_census(3, a(3), 1, DEFAULT_MAX_CLASSES).unwrap();
        assert_eq!(c.plain.sequences, BigUint::from(27u32));
        assert_eq!(c.plain.sequences_below_full_support, BigUint::from(21u32));
        assert_eq!(
            (c.plain.classes_below_full_support, c.plain.classes),
            (9, 10)
        );
        assert_eq!(c.shaped.sequences, BigUint::from(27u32));
        assert_eq!(c.shaped.sequences_below_full_support, BigUint::from(27u32));
        assert_eq!(
            (c.shaped.classes_below_full_support, c.shaped.classes),
            (9, 9)
        );
        assert_eq!(c.shaped.sequence_fraction_below, 1.0);
    }

    #[test]
    fn single_symbol_messages() {
        let p = CensusSide::plain(1, a(4), DEFAULT_MAX_CLASSES).unwrap();
        assert_eq!(p.classes, 4);
        assert_eq!(p.classes_below_full_support, 4);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let c = type_class_census(3, a(3), 1, DEFAULT_MAX_CLASSES).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"sequences\":\"27\""));
        assert_eq!(serde_json::from_str::<CensusReport>(&json).unwrap(), c);
    }

    #[test]
    fn ratio_of_huge_counts() {
        let big = BigUint::from(3u32).pow(2000);
        assert!((ratio(&big, &(&big * 2u32)) - 0.5).abs() < 1e-15);
        assert_eq!(ratio(&BigUint::zero(), &BigUint::zero()), 0.0);
    }
}
