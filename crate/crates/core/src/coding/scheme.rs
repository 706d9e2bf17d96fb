//! Serialized coding schemes: the part of a compressed message that tells the
//! decoder which code was used.
//!
//! * `LengthList`: a 5-bit `Lmax` header, then one `ceil(log2(Lmax + 1))`-bit
//!   codeword length per alphabet symbol. The canonical code follows from the
//!   lengths alone.
//! * `CountTable`: one `ceil(log2(N + 1))`-bit count per alphabet symbol. The
//!   decoder rebuilds the same deterministic Huffman code. `N` travels in the
//!   framing, so it is not charged here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bitio::{field_width, BitReader, BitString};
use super::huffman::{build_code, CodeTable, MAX_CODE_LENGTH};
use crate::error::{Error, Result};
use crate::types::{Alphabet, Composition};

const LMAX_HEADER_BITS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeFormat {
    LengthList,
    CountTable,
}

impl SchemeFormat {
    pub const ALL: [SchemeFormat; 2] = [SchemeFormat::LengthList, SchemeFormat::CountTable];

    /// Container variant code.
    pub fn code(self) -> u8 {
        match self {
            SchemeFormat::LengthList => 0,
            SchemeFormat::CountTable => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(SchemeFormat::LengthList),
            1 => Some(SchemeFormat::CountTable),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeFormat::LengthList => "lengths",
            SchemeFormat::CountTable => "counts",
        }
    }

    /// Bit cost of the scheme, without materializing it.
    pub fn cost(self, comp: &Composition, table: &CodeTable) -> u64 {
        let symbols = comp.counts().len() as u64;
        match self {
            SchemeFormat::LengthList => {
                LMAX_HEADER_BITS as u64 + symbols * field_width(table.max_length() as u64) as u64
            }
            SchemeFormat::CountTable => symbols * field_width(comp.total()) as u64,
        }
    }

    pub fn write(self, comp: &Composition, table: &CodeTable, out: &mut BitString) {
        match self {
            SchemeFormat::LengthList => {
                let lmax = table.max_length();
                out.push_bits(lmax as u64, LMAX_HEADER_BITS);
                let width = field_width(lmax as u64);
                for &l in table.lengths() {
                    out.push_bits(l as u64, width);
                }
            }
            SchemeFormat::CountTable => {
                let width = field_width(comp.total());
                for &n in comp.counts() {
                    out.push_bits(n, width);
                }
            }
        }
    }

    /// Reads a scheme and rebuilds the code it describes.
    pub fn read(
        self,
        alphabet: Alphabet,
        length: u64,
        reader: &mut BitReader<'_>,
    ) -> Result<CodeTable> {
        let truncated = || Error::MalformedPayload("scheme truncated".into());
        match self {
            SchemeFormat::LengthList => {
                let lmax = reader.read_bits(LMAX_HEADER_BITS).ok_or_else(truncated)? as u8;
                if lmax == 0 || lmax > MAX_CODE_LENGTH {
                    return Err(Error::MalformedPayload(format!("bad Lmax {lmax}")));
                }
                let width = field_width(lmax as u64);
                let lengths = (0..alphabet.size())
                    .map(|_| {
                        reader
                            .read_bits(width)
                            .map(|l| l as u8)
                            .ok_or_else(truncated)
                    })
                    .collect::<Result<Vec<u8>>>()?;
                if lengths.iter().copied().max() != Some(lmax) {
                    return Err(Error::MalformedPayload("lengths disagree with Lmax".into()));
                }
                CodeTable::from_lengths(lengths)
                    .map_err(|e| Error::MalformedPayload(format!("scheme: {e}")))
            }
            SchemeFormat::CountTable => {
                let width = field_width(length);
                let counts = (0..alphabet.size())
                    .map(|_| reader.read_bits(width).ok_or_else(truncated))
                    .collect::<Result<Vec<u64>>>()?;
                let comp = Composition::new(counts)?;
                if comp.total() != length {
                    return Err(Error::MalformedPayload(format!(
                        "counts sum to {}, expected {length}",
                        comp.total()
                    )));
                }
                build_code(&comp)
            }
        }
    }
}

impl fmt::Display for SchemeFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lengths" | "length_list" | "LENGTH_LIST" => Ok(SchemeFormat::LengthList),
            "counts" | "count_table" | "COUNT_TABLE" => Ok(SchemeFormat::CountTable),
            other => Err(Error::InvalidConfig(format!(
                "unknown scheme format {other:?}"
            ))),
        }
    }
}

/// Serializes the scheme for `comp` (coded with `table`).
pub fn serialize_scheme(format: SchemeFormat, comp: &Composition, table: &CodeTable) -> BitString {
    let mut out = BitString::new();
    format.write(comp, table, &mut out);
    out
}
