//! Exact accumulation of `f64` values.
//!
//! [`ExactSum`] keeps the running sum as a signed fixed-point integer wide
//! enough to represent any finite double exactly (LSB weight `2^-1074`).
//! The accumulated value is therefore independent of insertion order, and
//! [`ExactSum::value`] returns the correctly rounded `f64` of the exact sum.
//! Negating every input negates the result bit-for-bit, which the Monte
//! Carlo layer relies on for its antithetic identity.
//!
//! Each `add` touches two 128-bit buckets; buckets have 64 bits of headroom,
//! so overflow would require more than `2^63` additions.

/// Number of 64-bit digits: bit positions 0..=2097 hold every finite double
/// (35 words), plus headroom for carries and sign extension.
const WORDS: usize = 36;

const LOW_MASK: i128 = u64::MAX as i128;

/// Exact fixed-point accumulator for finite `f64` values.
#[derive(Clone)]
pub struct ExactSum {
    buckets: [i128; WORDS],
}

impl Default for ExactSum {
    fn default() -> Self {
        Self::new()
    }
}

impl ExactSum {
    pub fn new() -> Self {
        ExactSum { buckets: [0; WORDS] }
    }

    /// Adds a finite value to the accumulator.
    ///
    /// # Panics
    /// Panics if `x` is NaN or infinite; callers validate inputs first.
    #[inline]
    pub fn add(&mut self, x: f64) {
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as u32;
        assert!(exp != 0x7ff, "ExactSum::add requires finite input");
        let frac = bits & ((1u64 << 52) - 1);
        if exp == 0 && frac == 0 {
            return; // +-0
        }
        let (mant, offset) = if exp == 0 {
            (frac, 0usize)
        } else {
            (frac | (1u64 << 52), (exp - 1) as usize)
        };
        let word = offset >> 6;
        let shift = offset & 63;
        // 53-bit mantissa shifted by <64 bits spans at most 116 bits.
        let wide = (mant as u128) << shift;
        let lo = (wide as u64) as i128;
        let hi = ((wide >> 64) as u64) as i128;
        if bits >> 63 == 0 {
            self.buckets[word] += lo;
            self.buckets[word + 1] += hi;
        } else {
            self.buckets[word] -= lo;
            self.buckets[word + 1] -= hi;
        }
    }

    /// Correctly rounded `f64` value of the exact sum.
    pub fn value(&self) -> f64 {
        // Carry-propagate into canonical base-2^64 digits (two's complement).
        let mut digits = [0u64; WORDS];
        let mut carry: i128 = 0;
        for (d, &b) in digits.iter_mut().zip(self.buckets.iter()) {
            let t = b + carry;
            *d = (t & LOW_MASK) as u64;
            carry = t >> 64;
        }
        debug_assert!(carry == 0 || carry == -1, "accumulator overflow");
        let negative = carry == -1;
        if negative {
            // Two's complement negation of the digit string.
            let mut borrow = true;
            for d in digits.iter_mut() {
                *d = !*d;
                if borrow {
                    let (nd, overflow) = d.overflowing_add(1);
                    *d = nd;
                    borrow = overflow;
                }
            }
        }

        let top = match (0..WORDS).rev().find(|&j| digits[j] != 0) {
            Some(j) => j,
            None => return 0.0,
        };
        let msb = 64 * top + (63 - digits[top].leading_zeros() as usize);
        let sign = if negative { -1.0 } else { 1.0 };

        if msb < 53 {
            // Fits exactly in the lowest digit: subnormal or small normal.
            return sign * (digits[0] as f64) * pow2(-1074);
        }

        // Extract the 53 bits msb..=msb-52, guard bit, and sticky.
        let mut mant = extract_bits(&digits, msb - 52, 53);
        let guard = extract_bits(&digits, msb - 53, 1) == 1;
        let sticky = {
            let mut any = false;
            let cutoff = msb - 53; // bits strictly below this position
            for (j, &d) in digits.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let base = 64 * j;
                if base >= cutoff {
                    break;
                }
                let avail = cutoff - base;
                let masked = if avail >= 64 { d } else { d & ((1u64 << avail) - 1) };
                if masked != 0 {
                    any = true;
                    break;
                }
            }
            any
        };

        let mut e = msb as i32 - 1074; // weight of the MSB
        if guard && (sticky || (mant & 1) == 1) {
            mant += 1;
            if mant == (1u64 << 53) {
                mant >>= 1;
                e += 1;
            }
        }
        if e > 1023 {
            return sign * f64::INFINITY;
        }
        sign * (mant as f64) * pow2(e - 52)
    }
}

/// Exact power of two for exponents in the full finite-double range.
#[inline]
fn pow2(k: i32) -> f64 {
    if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (k + 1074))
    }
}

/// Reads `len <= 53` bits starting at absolute bit position `pos`.
#[inline]
fn extract_bits(digits: &[u64; WORDS], pos: usize, len: usize) -> u64 {
    let word = pos >> 6;
    let shift = pos & 63;
    let lo = digits[word] >> shift;
    let hi = if shift == 0 || word + 1 >= WORDS {
        0
    } else {
        digits[word + 1] << (64 - shift)
    };
    let raw = lo | hi;
    if len >= 64 {
        raw
    } else {
        raw & ((1u64 << len) - 1)
    }
}

/// Exact sum of a slice, rounded once at the end.
pub fn exact_sum(values: &[f64]) -> f64 {
    let mut acc = ExactSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}
