//! Canonical Huffman codes built from a message's own symbol counts.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::bitio::{BitReader, BitString};
use crate::error::{Error, Result};
use crate::types::{Alphabet, Composition, Sequence, Symbol};

/// Longest codeword representable by the 5-bit `Lmax` header of the length
/// list scheme.
pub const MAX_CODE_LENGTH: u8 = 31;

/// Prefix code with canonical codewords: sorted by (length, symbol), each
/// codeword is the previous one plus one, shifted left on length changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTable {
    alphabet: Alphabet,
    lengths: Vec<u8>,
    codewords: Vec<u32>,
    /// Used symbols in canonical order.
    sorted: Vec<Symbol>,
    /// `count_by_length[l]` codewords of length `l`.
    count_by_length: Vec<u32>,
}

impl CodeTable {
    /// Canonical code for the given lengths (0 = symbol absent).
    pub fn from_lengths(lengths: Vec<u8>) -> Result<Self> {
        let alphabet = Alphabet::new(lengths.len())?;
        if let Some(&l) = lengths.iter().find(|&&l| l > MAX_CODE_LENGTH) {
            return Err(Error::CodeTooLong(l as usize));
        }
        let kraft: u64 = lengths
            .iter()
            .filter(|&&l| l > 0)
            .map(|&l| 1u64 << (MAX_CODE_LENGTH - l))
            .sum();
        if kraft > 1u64 << MAX_CODE_LENGTH {
            return Err(Error::InvalidCode(
                "lengths violate the Kraft inequality".into(),
            ));
        }

        let mut sorted: Vec<Symbol> = (0..lengths.len() as Symbol)
            .filter(|&s| lengths[s as usize] > 0)
            .collect();
        sorted.sort_by_key(|&s| (lengths[s as usize], s));

        let max_len = lengths.iter().copied().max().unwrap_or(0) as usize;
        let mut count_by_length = vec![0u32; max_len + 1];
        for &l in lengths.iter().filter(|&&l| l > 0) {
            count_by_length[l as usize] += 1;
        }

        let mut codewords = vec![0u32; lengths.len()];
        let mut code = 0u32;
        let mut prev_len = 0u8;
        for (i, &s) in sorted.iter().enumerate() {
            let l = lengths[s as usize];
            if i > 0 {
                code += 1;
            }
            code <<= l - prev_len;
            prev_len = l;
            codewords[s as usize] = code;
        }

        Ok(CodeTable {
            alphabet,
            lengths,
            codewords,
            sorted,
            count_by_length,
        })
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn lengths(&self) -> &[u8] {
        &self.lengths
    }

    pub fn codeword(&self, symbol: Symbol) -> Option<(u32, u8)> {
        let l = *self.lengths.get(symbol as usize)?;
        (l > 0).then(|| (self.codewords[symbol as usize], l))
    }

    pub fn max_length(&self) -> u8 {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    pub fn used_symbols(&self) -> usize {
        self.sorted.len()
    }

    /// `Σ 2^-len` over used symbols, exact as a fraction of `2^31`.
    pub fn kraft_sum_scaled(&self) -> u64 {
        self.lengths
            .iter()
            .filter(|&&l| l > 0)
            .map(|&l| 1u64 << (MAX_CODE_LENGTH - l))
            .sum()
    }

    /// Payload size for a message of composition `comp`.
    pub fn payload_bits(&self, comp: &Composition) -> Result<u64> {
        comp.counts()
            .iter()
            .zip(&self.lengths)
            .enumerate()
            .try_fold(0u64, |acc, (s, (&n, &l))| {
                if n > 0 && l == 0 {
                    Err(Error::UncodableSymbol(s))
                } else {
                    Ok(acc + n * l as u64)
                }
            })
    }

    fn decode_symbol(&self, reader: &mut BitReader<'_>) -> Option<Symbol> {
        let mut code = 0u32;
        let mut first = 0u32;
        let mut index = 0u32;
        for len in 1..self.count_by_length.len() {
            code |= reader.read()? as u32;
            let count = self.count_by_length[len];
            if code - first < count {
                return Some(self.sorted[(index + code - first) as usize]);
            }
            index += count;
            first = (first + count) << 1;
            code <<= 1;
        }
        None
    }
}

/// Huffman code for `comp`. Heap ties break on (count, smallest symbol in the
/// subtree); a lone used symbol gets a 1-bit codeword.
pub fn build_code(comp: &Composition) -> Result<CodeTable> {
    if comp.total() == 0 {
        return Err(Error::EmptyComposition);
    }
    let counts = comp.counts();
    let mut lengths = vec![0u8; counts.len()];
    let used: Vec<usize> = (0..counts.len()).filter(|&s| counts[s] > 0).collect();
    if used.len() == 1 {
        lengths[used[0]] = 1;
        return CodeTable::from_lengths(lengths);
    }

    // Node arena: leaves first, then internal nodes; parent links give depths.
    let mut parent: Vec<usize> = vec![usize::MAX; used.len()];
    let mut heap: BinaryHeap<Reverse<(u64, Symbol, usize)>> = used
        .iter()
        .enumerate()
        .map(|(id, &s)| Reverse((counts[s], s as Symbol, id)))
        .collect();
    while heap.len() > 1 {
        let Reverse((ca, sa, a)) = heap.pop().unwrap();
        let Reverse((cb, sb, b)) = heap.pop().unwrap();
        let id = parent.len();
        parent.push(usize::MAX);
        parent[a] = id;
        parent[b] = id;
        heap.push(Reverse((ca + cb, sa.min(sb), id)));
    }

    let mut depth = vec![0usize; parent.len()];
    for id in (0..parent.len()).rev() {
        if parent[id] != usize::MAX {
            depth[id] = depth[parent[id]] + 1;
        }
    }
    for (leaf, &s) in used.iter().enumerate() {
        if depth[leaf] > MAX_CODE_LENGTH as usize {
            return Err(Error::CodeTooLong(depth[leaf]));
        }
        lengths[s] = depth[leaf] as u8;
    }
    CodeTable::from_lengths(lengths)
}

/// Appends the codewords of `seq` to `out`; returns the number of bits written.
pub fn encode_into(seq: &Sequence, table: &CodeTable, out: &mut BitString) -> Result<u64> {
    let start = out.len();
    for &s in seq.symbols() {
        let (code, len) = table
            .codeword(s)
            .ok_or(Error::UncodableSymbol(s as usize))?;
        out.push_bits(code as u64, len as u32);
    }
    Ok(out.len() - start)
}

pub fn encode(seq: &Sequence, table: &CodeTable) -> Result<BitString> {
    if seq.alphabet() != table.alphabet() {
        return Err(Error::BadParams(
            "sequence and code alphabets differ".into(),
        ));
    }
    let mut out = BitString::new();
    encode_into(seq, table, &mut out)?;
    Ok(out)
}

/// Decodes exactly `length` symbols; the payload must be consumed exactly.
pub fn decode(payload: &BitString, table: &CodeTable, length: u64) -> Result<Sequence> {
    let mut reader = payload.reader();
    let symbols = decode_from(&mut reader, table, length)?;
    if reader.remaining() != 0 {
        return Err(Error::MalformedPayload(format!(
            "{} trailing bits after {length} symbols",
            reader.remaining()
        )));
    }
    Ok(Sequence::from_parts_unchecked(table.alphabet(), symbols))
}

pub(crate) fn decode_from(
    reader: &mut BitReader<'_>,
    table: &CodeTable,
    length: u64,
) -> Result<Vec<Symbol>> {
    let mut symbols = Vec::with_capacity(length.min(1 << 20) as usize);
    for i in 0..length {
        let s = table.decode_symbol(reader).ok_or_else(|| {
            let what = if reader.remaining() == 0 {
                "payload truncated"
            } else {
                "invalid codeword"
            };
            Error::MalformedPayload(format!("{what} at symbol {i}"))
        })?;
        symbols.push(s);
    }
    Ok(symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::composition_of;
    use proptest::prelude::*;

    fn comp(c: &[u64]) -> Composition {
        Composition::new(c.to_vec()).unwrap()
    }

    fn seq(alpha: usize, text: &str) -> Sequence {
        let digits: Vec<usize> = text.bytes().map(|b| (b - b'0') as usize).collect();
        Sequence::from_one_based(Alphabet::new(alpha).unwrap(), &digits).unwrap()
    }

    /// Oracle: minimum Σ n·len over every length assignment to the used
    /// symbols that satisfies Kraft (equivalently, every prefix code).
    fn brute_force_cost(counts: &[u64]) -> u64 {
        let used: Vec<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
        if used.len() == 1 {
            return used[0];
        }
        let max = used.len() as u32;
        let mut best = u64::MAX;
        let mut lens = vec![1u32; used.len()];
        loop {
            let kraft: u64 = lens.iter().map(|&l| 1u64 << (max - l)).sum();
            if kraft <= 1u64 << max {
                best = best.min(lens.iter().zip(&used).map(|(&l, &n)| l as u64 * n).sum());
            }
            let mut i = 0;
            loop {
                if i == lens.len() {
                    return best;
                }
                lens[i] += 1;
                if lens[i] <= max {
                    break;
                }
                lens[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn build_code_examples() {
        assert_eq!(build_code(&comp(&[2, 1, 1])).unwrap().lengths(), &[1, 2, 2]);
        assert_eq!(build_code(&comp(&[4, 0, 0])).unwrap().lengths(), &[1, 0, 0]);
        let equal = build_code(&comp(&[1, 1, 1])).unwrap();
        let mut sorted = equal.lengths().to_vec();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 2]);
        assert_eq!(equal.payload_bits(&comp(&[1, 1, 1])).unwrap(), 5);
        assert_eq!(brute_force_cost(&[1, 1, 1]), 5);
        assert_eq!(build_code(&comp(&[2, 1, 0])).unwrap().lengths(), &[1, 1, 0]);
        assert_eq!(build_code(&comp(&[0, 0])), Err(Error::EmptyComposition));
    }

    #[test]
    fn canonical_codewords() {
        let t = CodeTable::from_lengths(vec![2, 1, 3, 3]).unwrap();
        assert_eq!(t.codeword(1), Some((0b0, 1)));
        assert_eq!(t.codeword(0), Some((0b10, 2)));
        assert_eq!(t.codeword(2), Some((0b110, 3)));
        assert_eq!(t.codeword(3), Some((0b111, 3)));
        assert!(CodeTable::from_lengths(vec![1, 1, 1]).is_err());
        assert_eq!(
            CodeTable::from_lengths(vec![32, 1]),
            Err(Error::CodeTooLong(32))
        );
    }

    #[test]
    fn encode_examples() {
        let t = CodeTable::from_lengths(vec![1, 2, 0]).unwrap();
        let bits = encode(&seq(3, "2111"), &t).unwrap();
        assert_eq!(bits.len(), 5);
        let t1 = build_code(&comp(&[4, 0, 0])).unwrap();
        assert_eq!(encode(&seq(3, "1111"), &t1).unwrap().len(), 4);
        assert_eq!(encode(&seq(3, "1131"), &t1), Err(Error::UncodableSymbol(2)));
    }

    #[test]
    fn decode_errors() {
        let t = build_code(&comp(&[2, 1, 1])).unwrap();
        let s = seq(3, "1231");
        let bits = encode(&s, &t).unwrap();
        assert_eq!(decode(&bits, &t, 4).unwrap(), s);
        let truncated = BitString::from_bytes(bits.as_bytes().to_vec(), bits.len() - 1).unwrap();
        assert!(matches!(
            decode(&truncated, &t, 4),
            Err(Error::MalformedPayload(_))
        ));
        assert!(matches!(
            decode(&bits, &t, 3),
            Err(Error::MalformedPayload(_))
        ));
        // Single-symbol code only defines "0".
        let t1 = build_code(&comp(&[3, 0, 0])).unwrap();
        let mut ones = BitString::new();
        ones.push_bits(0b111, 3);
        assert!(matches!(
            decode(&ones, &t1, 3),
            Err(Error::MalformedPayload(_))
        ));
        assert!(decode(&BitString::new(), &t1, 0).unwrap().is_empty());
    }

    #[test]
    fn huffman_is_optimal_for_small_compositions() {
        for a in 1..=4usize {
            for n in 1..=8u64 {
                for c in crate::combinatorics::enumerate_compositions(n, Alphabet::new(a).unwrap())
                {
                    let t = build_code(&c).unwrap();
                    assert_eq!(
                        t.payload_bits(&c).unwrap(),
                        brute_force_cost(c.counts()),
                        "{:?}",
                        c.counts()
                    );
                    if c.distinct() >= 2 {
                        assert_eq!(t.kraft_sum_scaled(), 1 << MAX_CODE_LENGTH);
                    }
                }
            }
        }
    }

    #[test]
    fn fibonacci_counts_hit_length_limit() {
        // Fibonacci weights force a maximally skewed tree.
        let mut fib = vec![1u64, 1];
        while fib.len() < 34 {
            let n = fib[fib.len() - 1] + fib[fib.len() - 2];
            fib.push(n);
        }
        assert!(matches!(
            build_code(&Composition::new(fib).unwrap()),
            Err(Error::CodeTooLong(_))
        ));
    }

    fn arb_sequence() -> impl Strategy<Value = Sequence> {
        (1usize..=6).prop_flat_map(|a| {
            prop::collection::vec(0..a as u16, 1..200)
                .prop_map(move |s| Sequence::new(Alphabet::new(a).unwrap(), s).unwrap())
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_entropy_sandwich(s in arb_sequence()) {
            let c = composition_of(&s);
            let t = build_code(&c).unwrap();
            let bits = encode(&s, &t).unwrap();
            prop_assert_eq!(bits.len(), t.payload_bits(&c).unwrap());
            prop_assert_eq!(decode(&bits, &t, s.len() as u64).unwrap(), s.clone());
            if c.distinct() >= 2 {
                prop_assert_eq!(t.kraft_sum_scaled(), 1 << MAX_CODE_LENGTH);
                let nh = crate::types::weighted_entropy(&s, crate::types::EntropyBase::BITS).unwrap();
                let n = s.len() as f64;
                prop_assert!(nh <= bits.len() as f64 + 1e-9);
                prop_assert!((bits.len() as f64) < nh + n);
            }
        }
    }
}
