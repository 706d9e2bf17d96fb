//! `SSTC` container: a self-describing encoded message.
//!
//! Layout, all integers big-endian:
//!
//! | bytes | field                                              |
//! |-------|----------------------------------------------------|
//! | 4     | magic `SSTC`                                       |
//! | 1     | version (1)                                        |
//! | 1     | variant: low nibble scheme format, high nibble `K` |
//! | 2     | alphabet size                                      |
//! | 8     | `N`, length of the coded sequence                  |
//! | 4     | scheme length in bits, then the scheme bytes       |
//! | 8     | payload length in bits, then the payload bytes     |
//!
//! `K = 0` means the sequence was coded as is. Otherwise it is a shaped
//! sequence of length `N`, and decoding inverts the transform back to length
//! `N - K`. Everything except the scheme and payload bits is framing.

use super::bitio::BitString;
use super::message::{decode_message, encode_message, EncodedMessage};
use super::scheme::SchemeFormat;
use crate::error::{Error, Result};
use crate::shaping::{Shaper, ShapingParams};
use crate::types::{Alphabet, Sequence};

pub const MAGIC: &[u8; 4] = b"SSTC";
pub const VERSION: u8 = 1;
/// Fixed header bytes, excluding the padded scheme and payload bodies.
pub const HEADER_BYTES: u64 = 4 + 1 + 1 + 2 + 8 + 4 + 8;
/// Largest `K` the variant nibble can carry.
pub const MAX_SHAPING_EXTRA: u64 = 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub alphabet: Alphabet,
    /// Length of the coded sequence (after shaping, if any).
    pub length: u64,
    /// `K`, or 0 when unshaped.
    pub shaping_extra: u8,
    pub message: EncodedMessage,
}

impl Container {
    /// Codes `seq` directly, or its transform when `shaper` is given.
    pub fn encode(seq: &Sequence, format: SchemeFormat, shaper: Option<&Shaper>) -> Result<Self> {
        let (coded, extra) = match shaper {
            Some(sh) => {
                let k = sh.params().extra;
                if k > MAX_SHAPING_EXTRA {
                    return Err(Error::BadParams(format!(
                        "K = {k} does not fit the container (max {MAX_SHAPING_EXTRA})"
                    )));
                }
                (sh.transform(seq)?, k as u8)
            }
            None => (seq.clone(), 0),
        };
        Ok(Container {
            alphabet: coded.alphabet(),
            length: coded.len() as u64,
            shaping_extra: extra,
            message: encode_message(&coded, format)?,
        })
    }

    /// Shaping parameters recorded in the header, if shaped.
    pub fn shaping_params(&self) -> Result<Option<ShapingParams>> {
        if self.shaping_extra == 0 {
            return Ok(None);
        }
        let extra = self.shaping_extra as u64;
        if self.length <= extra {
            return Err(Error::MalformedContainer(format!(
                "shaped length {} is not longer than K = {extra}",
                self.length
            )));
        }
        ShapingParams::new(self.length - extra, self.alphabet, extra).map(Some)
    }

    /// Decodes, building the shaper from the header when needed.
    pub fn decode(&self) -> Result<Sequence> {
        match self.shaping_params()? {
            Some(params) => self.decode_with(Some(&Shaper::new(params)?)),
            None => self.decode_with(None),
        }
    }

    /// Decodes with a prebuilt shaper, which must match the header.
    pub fn decode_with(&self, shaper: Option<&Shaper>) -> Result<Sequence> {
        let coded = decode_message(&self.message, self.alphabet, self.length)?;
        match (self.shaping_params()?, shaper) {
            (None, _) => Ok(coded),
            (Some(params), Some(sh)) => {
                let p = sh.params();
                if (p.length, p.alphabet, p.extra) != (params.length, params.alphabet, params.extra)
                {
                    return Err(Error::BadParams("shaper does not match container".into()));
                }
                sh.inverse(&coded)
            }
            (Some(_), None) => Err(Error::BadParams(
                "container is shaped; a shaper is required".into(),
            )),
        }
    }

    pub fn scheme_bits(&self) -> u64 {
        self.message.scheme_bits()
    }

    pub fn payload_bits(&self) -> u64 {
        self.message.payload_bits()
    }

    /// Everything in the file that is not scheme or payload bits.
    pub fn framing_bits(&self) -> u64 {
        framing_bits(self.scheme_bits(), self.payload_bits())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let scheme = &self.message.scheme;
        let payload = &self.message.payload;
        let mut out = Vec::with_capacity(
            HEADER_BYTES as usize + scheme.as_bytes().len() + payload.as_bytes().len(),
        );
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.message.format.code() | (self.shaping_extra << 4));
        out.extend_from_slice(&(self.alphabet.size() as u16).to_be_bytes());
        out.extend_from_slice(&self.length.to_be_bytes());
        out.extend_from_slice(&(scheme.len() as u32).to_be_bytes());
        out.extend_from_slice(scheme.as_bytes());
        out.extend_from_slice(&payload.len().to_be_bytes());
        out.extend_from_slice(payload.as_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(4)? != MAGIC {
            return Err(Error::MalformedContainer("bad magic".into()));
        }
        let version = cur.take(1)?[0];
        if version != VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let variant = cur.take(1)?[0];
        let format = SchemeFormat::from_code(variant & 0x0f).ok_or_else(|| {
            Error::MalformedContainer(format!("unknown scheme format {}", variant & 0x0f))
        })?;
        let shaping_extra = variant >> 4;
        let alphabet = Alphabet::new(u16::from_be_bytes(cur.array()?) as usize)
            .map_err(|e| Error::MalformedContainer(e.to_string()))?;
        let length = u64::from_be_bytes(cur.array()?);
        let scheme_len = u32::from_be_bytes(cur.array()?) as u64;
        let scheme = cur.bits(scheme_len)?;
        let payload_len = u64::from_be_bytes(cur.array()?);
        let payload = cur.bits(payload_len)?;
        if cur.pos != bytes.len() {
            return Err(Error::MalformedContainer(format!(
                "{} trailing bytes",
                bytes.len() - cur.pos
            )));
        }
        Ok(Container {
            alphabet,
            length,
            shaping_extra,
            message: EncodedMessage {
                format,
                scheme,
                payload,
            },
        })
    }
}

/// Framing overhead of a container holding the given bit counts.
pub fn framing_bits(scheme_bits: u64, payload_bits: u64) -> u64 {
    let pad = |bits: u64| bits.div_ceil(8) * 8 - bits;
    HEADER_BYTES * 8 + pad(scheme_bits) + pad(payload_bits)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: u64) -> Result<&'a [u8]> {
        let end = usize::try_from(n)
            .ok()
            .and_then(|n| self.pos.checked_add(n))
            .filter(|&end| end <= self.bytes.len())
            .ok_or_else(|| Error::MalformedContainer("truncated".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N as u64)?.try_into().unwrap())
    }

    /// A short body means the file was cut after its header.
    fn bits(&mut self, len: u64) -> Result<BitString> {
        let body = self
            .take(len.div_ceil(8))
            .map_err(|_| Error::MalformedPayload(format!("truncated: {len} bits declared")))?;
        Ok(BitString::from_bytes(body.to_vec(), len).unwrap())
    }
}
