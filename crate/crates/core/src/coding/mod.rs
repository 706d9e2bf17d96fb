//! Canonical Huffman coding with measured, decodable coding schemes.

pub mod bitio;
pub mod container;
pub mod huffman;
pub mod message;
pub mod scheme;

pub use bitio::BitString;
pub use container::{framing_bits, Container};
pub use huffman::{build_code, decode, encode, CodeTable, MAX_CODE_LENGTH};
pub use message::{
    compressed_size, decode_message, encode_message, total_compressed_length, CompressedSize,
    EncodedMessage,
};
pub use scheme::{serialize_scheme, SchemeFormat};
