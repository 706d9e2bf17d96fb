//! Set shaping toolkit.
//!
//! The set shaping transform maps every length-`N` sequence over an alphabet
//! `A` (`|A| >= 3`) one-to-one onto the `|A|^N` sequences of length `N + K`
//! with the smallest zero-order empirical entropy. This crate provides:
//!
//! * [`types`]: sequences, compositions (type classes) and `H0`;
//! * [`combinatorics`]: entropy-ordered rank/unrank over `A^N` with
//!   arbitrary-precision ranks;
//! * [`shaping`]: the transform and its inverse;
//! * [`coding`]: canonical Huffman coding whose coding scheme is serialized
//!   and counted bit for bit, plus the `SSTC` container;
//! * [`experiments`]: exhaustive and sampled measurement of the plain and
//!   shaped populations.
//!
//! With the `parallel` feature (default) message-level work runs on rayon;
//! results are identical either way.
//!
//! ```
//! use setshape::{Alphabet, Sequence, Shaper, ShapingParams};
//!
//! let a = Alphabet::new(3).unwrap();
//! let shaper = Shaper::new(ShapingParams::new(3, a, 1).unwrap()).unwrap();
//! let m = Sequence::parse(a, "1 1 1").unwrap();
//! let f = shaper.transform(&m).unwrap();
//! assert_eq!(f.to_string(), "1 1 1 1");
//! assert_eq!(shaper.inverse(&f).unwrap(), m);
//! ```

pub mod coding;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod shaping;
pub mod types;

pub use combinatorics::{ClassOrdering, RankIndex};
pub use error::{Error, Result};
pub use shaping::{Shaper, ShapingParams};
pub use types::{
    composition_of, distinct_symbol_count, empirical_entropy, entropy_of_composition,
    weighted_entropy, Alphabet, Composition, EntropyBase, EntropyValue, Sequence, Symbol,
};
