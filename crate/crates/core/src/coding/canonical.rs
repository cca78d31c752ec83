//! Canonical prefix codes: codewords are determined by the lengths alone.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Longest codeword we can represent in a `u128`, with one bit of headroom.
pub const MAX_LENGTH: u32 = 126;

/// `Σ 2^{−ℓ} ≤ 1`, checked in integer arithmetic.
pub fn kraft_holds(lengths: &[u32]) -> bool {
    let Some(&max) = lengths.iter().max() else {
        return true;
    };
    if max > MAX_LENGTH {
        return false;
    }
    let mut total: u128 = 0;
    for &l in lengths {
        total += 1u128 << (max - l);
    }
    total <= 1u128 << max
}

/// One codeword of a canonical code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Codeword {
    pub symbol: usize,
    pub length: u32,
    /// The low `length` bits, most significant first.
    pub bits: u128,
}

/// Assigns canonical codewords to `(symbol, length)` pairs: sorted by length,
/// then symbol, each codeword the successor of the previous one shifted left
/// to the new length. Returns the codewords in that order.
pub fn assign(mut pairs: Vec<(usize, u32)>) -> Result<Vec<Codeword>> {
    pairs.sort_by_key(|&(s, l)| (l, s));
    let lengths: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    if let Some(&max) = lengths.iter().max() {
        if max > MAX_LENGTH {
            return Err(Error::LengthOverflow(max));
        }
    }
    if !kraft_holds(&lengths) {
        return Err(Error::InvalidParameter {
            name: "lengths",
            value: f64::NAN,
            reason: "codeword lengths violate the Kraft inequality",
        });
    }
    let mut out = Vec::with_capacity(pairs.len());
    let mut code: u128 = 0;
    let mut prev_len = 0u32;
    for (i, &(symbol, length)) in pairs.iter().enumerate() {
        if i > 0 {
            code = (code + 1) << (length - prev_len);
        }
        out.push(Codeword {
            symbol,
            length,
            bits: code,
        });
        prev_len = length;
    }
    Ok(out)
}

/// Decoding table for a canonical code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoder {
    /// Per length `l`: (first codeword value, index of its entry, count).
    levels: Vec<(u128, usize, usize)>,
    symbols: Vec<usize>,
}

impl Decoder {
    pub fn new(codewords: &[Codeword]) -> Self {
        let max = codewords.iter().map(|c| c.length).max().unwrap_or(0) as usize;
        let mut levels = alloc::vec![(0u128, 0usize, 0usize); max + 1];
        for (i, c) in codewords.iter().enumerate() {
            let lv = &mut levels[c.length as usize];
            if lv.2 == 0 {
                *lv = (c.bits, i, 0);
            }
            lv.2 += 1;
        }
        Self {
            levels,
            symbols: codewords.iter().map(|c| c.symbol).collect(),
        }
    }

    /// Decodes exactly the whole input; `None` if it is not one codeword.
    pub fn decode_exact<I: Iterator<Item = bool>>(&self, mut bits: I) -> Option<usize> {
        let mut value: u128 = 0;
        for (len, &(first, start, count)) in self.levels.iter().enumerate() {
            if len > 0 {
                value = (value << 1) | bits.next()? as u128;
            }
            if count > 0 && value >= first && value - first < count as u128 {
                return bits
                    .next()
                    .is_none()
                    .then(|| self.symbols[start + (value - first) as usize]);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn kraft_examples() {
        assert!(kraft_holds(&[1, 1]));
        assert!(kraft_holds(&[1, 2, 3, 3]));
        assert!(!kraft_holds(&[1, 1, 2]));
        assert!(kraft_holds(&[0]));
        assert!(!kraft_holds(&[0, 5]));
        assert!(kraft_holds(&[]));
    }

    #[test]
    fn canonical_assignment() {
        let cw = assign(vec![(7, 2), (3, 1), (5, 3), (1, 3)]).unwrap();
        let got: Vec<(usize, u32, u128)> = cw.iter().map(|c| (c.symbol, c.length, c.bits)).collect();
        assert_eq!(got, vec![(3, 1, 0b0), (7, 2, 0b10), (1, 3, 0b110), (5, 3, 0b111)]);
        assert!(assign(vec![(0, 1), (1, 1), (2, 1)]).is_err());
        assert_eq!(assign(vec![(0, 200)]), Err(Error::LengthOverflow(200)));
    }

    #[test]
    fn decoder_round_trip_and_rejects() {
        let cw = assign(vec![(7, 2), (3, 1), (5, 3), (1, 3)]).unwrap();
        let dec = Decoder::new(&cw);
        for c in &cw {
            let bits = (0..c.length).rev().map(|i| (c.bits >> i) & 1 == 1);
            assert_eq!(dec.decode_exact(bits), Some(c.symbol));
        }
        assert_eq!(dec.decode_exact([true].into_iter()), None); // truncated
        assert_eq!(dec.decode_exact([false, true].into_iter()), None); // trailing
        let zero = Decoder::new(&assign(vec![(4, 0)]).unwrap());
        assert_eq!(zero.decode_exact(core::iter::empty()), Some(4));
        assert_eq!(zero.decode_exact([false].into_iter()), None);
    }
}
