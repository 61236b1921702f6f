//! Fixed-length bit vector backing relation tables and down-sets.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        b.clear_tail();
        b
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let mut b = Bits::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            if v {
                b.set(i);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Reads `width <= 64` bits starting at `start`.
    ///
    /// Callers only ever ask for blocks that are either inside one word or
    /// word aligned, which is what row-major tables of power-of-two rows give.
    #[inline]
    pub fn read(&self, start: usize, width: usize) -> u64 {
        debug_assert!(width <= 64 && start + width <= self.len);
        if width == 0 {
            return 0;
        }
        let word = self.words[start >> 6] >> (start & 63);
        if width == 64 {
            word
        } else {
            word & ((1u64 << width) - 1)
        }
    }

    /// ORs `value` (its low `width` bits) into the block starting at `start`.
    #[inline]
    pub fn or_in(&mut self, start: usize, width: usize, value: u64) {
        debug_assert!(width <= 64 && start + width <= self.len);
        if width == 0 {
            return;
        }
        let value = if width == 64 {
            value
        } else {
            value & ((1u64 << width) - 1)
        };
        self.words[start >> 6] |= value << (start & 63);
    }

    /// ORs the `len` bits of `src` starting at `src_start` into `self` at
    /// `dst_start`. Both blocks must be power-of-two sized and aligned to
    /// their own size.
    pub fn or_block(&mut self, dst_start: usize, src: &Bits, src_start: usize, len: usize) {
        if len >= 64 {
            let (d, s) = (dst_start >> 6, src_start >> 6);
            for k in 0..len / 64 {
                self.words[d + k] |= src.words[s + k];
            }
        } else {
            let v = src.read(src_start, len);
            self.or_in(dst_start, len, v);
        }
    }

    /// Whether the `len`-bit block at `start` has any bit set.
    pub fn any_in(&self, start: usize, len: usize) -> bool {
        if len >= 64 {
            let s = start >> 6;
            self.words[s..s + len / 64].iter().any(|&w| w != 0)
        } else {
            self.read(start, len) != 0
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Set bits within `[start, start + len)`, reported relative to `start`.
    pub fn iter_ones_in(&self, start: usize, len: usize) -> impl Iterator<Item = usize> + '_ {
        let words: Box<dyn Iterator<Item = (usize, u64)>> = if len >= 64 {
            let s = start >> 6;
            Box::new(
                self.words[s..s + len / 64]
                    .iter()
                    .copied()
                    .enumerate()
                    .map(|(k, w)| (k * 64, w)),
            )
        } else {
            Box::new(std::iter::once((0, self.read(start, len))))
        };
        words.flat_map(|(base, w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(base + t)
            })
        })
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn not(&self) -> Bits {
        let mut b = Bits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        b.clear_tail();
        b
    }

    fn clear_tail(&mut self) {
        let r = self.len & 63;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_below_and_above_a_word() {
        let mut a = Bits::zeros(256);
        a.or_in(4, 4, 0b1011);
        assert_eq!(a.read(4, 4), 0b1011);
        assert_eq!(a.iter_ones().collect::<Vec<_>>(), vec![4, 5, 7]);

        let mut b = Bits::zeros(256);
        b.set(130);
        b.set(191);
        a.or_block(0, &b, 128, 128);
        assert!(a.get(2) && a.get(63));
        assert_eq!(a.iter_ones_in(128, 128).count(), 0);
        assert_eq!(b.iter_ones_in(128, 128).collect::<Vec<_>>(), vec![2, 63]);
    }

    #[test]
    fn ones_and_not_respect_length() {
        let o = Bits::ones(5);
        assert_eq!(o.count_ones(), 5);
        assert!(o.not().none());
        assert!(Bits::zeros(5).is_subset(&o));
        assert!(!o.is_subset(&Bits::zeros(5)));
    }
}
