/// Bit string of exact length, MSB-first within each byte. Padding bits of the
/// last byte are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bytes: Vec<u8>,
    len: u64,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps `bytes`, keeping the first `len` bits.
    pub fn from_bytes(mut bytes: Vec<u8>, len: u64) -> Option<Self> {
        if len.div_ceil(8) != bytes.len() as u64 {
            return None;
        }
        let tail = (len % 8) as u32;
        if tail != 0 {
            let last = bytes.last_mut().unwrap();
            *last &= 0xffu8 << (8 - tail);
        }
        Some(BitString { bytes, len })
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let offset = (self.len % 8) as u32;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> offset;
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        for i in (0..width).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    #[inline]
    pub fn get(&self, index: u64) -> Option<bool> {
        if index >= self.len {
            return None;
        }
        let byte = self.bytes[(index / 8) as usize];
        Some(byte & (0x80 >> (index % 8)) != 0)
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { bits: self, pos: 0 }
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i).unwrap() { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: u64,
}

impl BitReader<'_> {
    #[inline]
    pub fn read(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(bit)
    }

    pub fn read_bits(&mut self, width: u32) -> Option<u64> {
        if self.remaining() < width as u64 {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read()? as u64;
        }
        Some(v)
    }

    pub fn remaining(&self) -> u64 {
        self.bits.len - self.pos
    }
}

/// Bits needed to store any value in `0..=max`; `ceil(log2(max + 1))`.
#[inline]
pub fn field_width(max: u64) -> u32 {
    64 - max.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_read() {
        let mut b = BitString::new();
        b.push_bits(0b101, 3);
        b.push_bits(0xff, 8);
        assert_eq!(b.len(), 11);
        assert_eq!(b.as_bytes(), &[0b1011_1111, 0b1110_0000]);
        assert_eq!(b.to_string(), "10111111111");
        let mut r = b.reader();
        assert_eq!(r.read_bits(3), Some(0b101));
        assert_eq!(r.read_bits(9), None);
        assert_eq!(r.read_bits(8), Some(0xff));
        assert_eq!(r.read(), None);
    }

    #[test]
    fn from_bytes_masks_padding() {
        let b = BitString::from_bytes(vec![0xff], 3).unwrap();
        assert_eq!(b.as_bytes(), &[0b1110_0000]);
        assert!(BitString::from_bytes(vec![0, 0], 3).is_none());
        assert!(BitString::from_bytes(vec![], 0).unwrap().is_empty());
    }

    #[test]
    fn widths() {
        assert_eq!(field_width(0), 0);
        assert_eq!(field_width(1), 1);
        assert_eq!(field_width(2), 2);
        assert_eq!(field_width(4), 3);
        assert_eq!(field_width(31), 5);
        assert_eq!(field_width(u64::MAX), 64);
    }
}
