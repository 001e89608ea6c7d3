//! Points of full-branch expanding maps stored as digit expansions.
//!
//! In binary floating point the doubling map loses one mantissa bit per step
//! and every orbit reaches 0 after about 53 iterations. A point carrying its
//! whole base-b expansion avoids this: the map is the shift, which is exact,
//! and the coordinate is the value of the next `WINDOW` digits. Digits are
//! drawn from a ChaCha stream keyed by the point, so they are i.i.d. uniform
//! (Lebesgue-typical) and available at any offset.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Digit base of an expansion point: 2 for the doubling map, 3 for tripling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DigitBase {
    Binary,
    Ternary,
}

impl DigitBase {
    pub fn radix(self) -> u64 {
        match self {
            DigitBase::Binary => 2,
            DigitBase::Ternary => 3,
        }
    }

    /// Number of digits in the value window.
    pub fn window(self) -> u32 {
        match self {
            DigitBase::Binary => 53,
            DigitBase::Ternary => 33,
        }
    }

    /// `radix^window`, exactly representable as f64.
    fn modulus(self) -> u64 {
        self.radix().pow(self.window())
    }

    fn top_place(self) -> u64 {
        self.radix().pow(self.window() - 1)
    }

    fn value(self, w: u64) -> f64 {
        w as f64 / self.modulus() as f64
    }
}

/// A point `0.d_{o+1} d_{o+2} ...` in base b, where `d` is the digit stream
/// named by `key` and `o` is the offset (number of shifts applied).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Expansion {
    pub key: u64,
    pub offset: u64,
    pub base: DigitBase,
}

impl Expansion {
    pub fn new(key: u64, base: DigitBase) -> Self {
        Expansion { key, offset: 0, base }
    }

    pub fn shifted(self, by: u64) -> Self {
        Expansion { offset: self.offset + by, ..self }
    }

    /// Integer value of the leading window; the coordinate is `window / b^W`.
    pub fn window_int(&self) -> u64 {
        let mut reader = DigitReader::at(self.key, self.base, self.offset);
        let mut w = 0u64;
        for _ in 0..self.base.window() {
            w = w * self.base.radix() + reader.next_digit();
        }
        w
    }

    pub fn value(&self) -> f64 {
        self.base.value(self.window_int())
    }

    /// First digit, i.e. the index of the branch cylinder containing the point.
    pub fn leading_digit(&self) -> u64 {
        DigitReader::at(self.key, self.base, self.offset).next_digit()
    }

    pub fn digit(&self, i: u64) -> u64 {
        DigitReader::at(self.key, self.base, self.offset + i).next_digit()
    }
}

/// Sequential reader of the digit stream of one key.
///
/// Binary digits are the bits of successive u64 words, most significant
/// first; ternary digits are successive u64 words reduced mod 3.
#[derive(Debug, Clone)]
pub(crate) struct DigitReader {
    rng: ChaCha8Rng,
    base: DigitBase,
    word: u64,
    bits_left: u32,
}

impl DigitReader {
    pub(crate) fn at(key: u64, base: DigitBase, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        match base {
            DigitBase::Binary => {
                rng.set_word_pos(2 * (index / 64) as u128);
                let word = rng.next_u64();
                let skip = (index % 64) as u32;
                DigitReader {
                    rng,
                    base,
                    word: word.checked_shl(skip).unwrap_or(0),
                    bits_left: 64 - skip,
                }
            }
            DigitBase::Ternary => {
                rng.set_word_pos(2 * index as u128);
                DigitReader { rng, base, word: 0, bits_left: 0 }
            }
        }
    }

    #[inline]
    pub(crate) fn next_digit(&mut self) -> u64 {
        match self.base {
            DigitBase::Binary => {
                if self.bits_left == 0 {
                    self.word = self.rng.next_u64();
                    self.bits_left = 64;
                }
                let bit = self.word >> 63;
                self.word <<= 1;
                self.bits_left -= 1;
                bit
            }
            DigitBase::Ternary => self.rng.next_u64() % 3,
        }
    }
}

/// Streams the successive window integers of `T^k x` for an expansion point.
#[derive(Debug, Clone)]
pub(crate) struct ShiftWindow {
    base: DigitBase,
    window: u64,
    reader: DigitReader,
}

impl ShiftWindow {
    pub(crate) fn new(e: &Expansion) -> Self {
        ShiftWindow {
            base: e.base,
            window: e.window_int(),
            reader: DigitReader::at(e.key, e.base, e.offset + e.base.window() as u64),
        }
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.base.value(self.window)
    }

    #[inline]
    pub(crate) fn leading_digit(&self) -> u64 {
        self.window / self.base.top_place()
    }

    #[inline]
    pub(crate) fn shift(&mut self) {
        let rest = self.window % self.base.top_place();
        self.window = rest * self.base.radix() + self.reader.next_digit();
    }
}
