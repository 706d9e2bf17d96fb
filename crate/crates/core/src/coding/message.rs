use serde::{Deserialize, Serialize};

use super::bitio::BitString;
use super::huffman::{build_code, decode_from, encode_into, CodeTable};
use super::scheme::SchemeFormat;
use crate::error::{Error, Result};
use crate::types::{composition_of, Alphabet, Composition, Sequence};

/// Bit counts of one compressed message. Framing is not included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressedSize {
    pub scheme_bits: u64,
    pub payload_bits: u64,
    pub total_bits: u64,
}

/// Scheme and payload of a message coded with its own Huffman code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedMessage {
    pub format: SchemeFormat,
    pub scheme: BitString,
    pub payload: BitString,
}

impl EncodedMessage {
    pub fn scheme_bits(&self) -> u64 {
        self.scheme.len()
    }

    pub fn payload_bits(&self) -> u64 {
        self.payload.len()
    }

    pub fn total_bits(&self) -> u64 {
        self.scheme_bits() + self.payload_bits()
    }

    pub fn size(&self) -> CompressedSize {
        CompressedSize {
            scheme_bits: self.scheme_bits(),
            payload_bits: self.payload_bits(),
            total_bits: self.total_bits(),
        }
    }
}

/// Builds the code from `seq`'s own composition, then writes scheme and
/// payload. An empty sequence encodes to nothing.
pub fn encode_message(seq: &Sequence, format: SchemeFormat) -> Result<EncodedMessage> {
    let mut scheme = BitString::new();
    let mut payload = BitString::new();
    if !seq.is_empty() {
        let comp = composition_of(seq);
        let table = build_code(&comp)?;
        format.write(&comp, &table, &mut scheme);
        encode_into(seq, &table, &mut payload)?;
    }
    Ok(EncodedMessage {
        format,
        scheme,
        payload,
    })
}

/// Inverse of [`encode_message`]; `alphabet` and `length` come from framing.
pub fn decode_message(msg: &EncodedMessage, alphabet: Alphabet, length: u64) -> Result<Sequence> {
    if length == 0 {
        if !msg.scheme.is_empty() || !msg.payload.is_empty() {
            return Err(Error::MalformedPayload(
                "bits present for an empty message".into(),
            ));
        }
        return Sequence::new(alphabet, Vec::new());
    }
    let mut scheme = msg.scheme.reader();
    let table = msg.format.read(alphabet, length, &mut scheme)?;
    if scheme.remaining() != 0 {
        return Err(Error::MalformedPayload("trailing scheme bits".into()));
    }
    let mut payload = msg.payload.reader();
    let symbols = decode_from(&mut payload, &table, length)?;
    if payload.remaining() != 0 {
        return Err(Error::MalformedPayload(format!(
            "{} trailing payload bits",
            payload.remaining()
        )));
    }
    Sequence::new(alphabet, symbols)
}

/// Sizes for any message of composition `comp`; every member of a type class
/// compresses to the same number of bits.
pub fn compressed_size(comp: &Composition, format: SchemeFormat) -> Result<CompressedSize> {
    let table = build_code(comp)?;
    Ok(size_with(comp, &table, format))
}

pub(crate) fn size_with(
    comp: &Composition,
    table: &CodeTable,
    format: SchemeFormat,
) -> CompressedSize {
    let scheme_bits = format.cost(comp, table);
    let payload_bits = table
        .payload_bits(comp)
        .expect("code built from this composition covers it");
    CompressedSize {
        scheme_bits,
        payload_bits,
        total_bits: scheme_bits + payload_bits,
    }
}

/// "Encoded sequence + coding scheme" for `seq`, in bits.
pub fn total_compressed_length(seq: &Sequence, format: SchemeFormat) -> Result<CompressedSize> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    compressed_size(&composition_of(seq), format)
}
