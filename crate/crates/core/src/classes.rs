//! Log-degree classes `floor(log_{1+lambda} d)` computed without floating
//! point.
//!
//! Class `i` starts at the integer boundary `ceil((1 + lambda)^i)`, so a
//! degree `d >= 1` belongs to the largest `i` whose boundary is `<= d`. The
//! boundaries are produced with 64-bit fractional fixed-point interval
//! arithmetic; whenever the interval straddles an integer the boundary is
//! settled with exact big-integer arithmetic.

use num_bigint::BigUint;

use crate::params::Lambda;

const FRAC_BITS: u32 = 64;
const ONE: u128 = 1 << FRAC_BITS;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogDegreeClasses {
    lambda: Lambda,
    /// `boundaries[i] = ceil((1 + lambda)^i)` for every boundary `<= u32::MAX`.
    boundaries: Vec<u32>,
}

fn ceil_fixed(x: u128) -> u128 {
    (x + (ONE - 1)) >> FRAC_BITS
}

impl LogDegreeClasses {
    pub fn new(lambda: Lambda) -> Self {
        let (p, q) = (lambda.num() as u128, lambda.den() as u128);
        let mut boundaries = Vec::new();
        let (mut lo, mut hi) = (ONE, ONE);
        let mut exponent = 0u32;
        loop {
            let (c_lo, c_hi) = (ceil_fixed(lo), ceil_fixed(hi));
            let boundary = if c_lo == c_hi {
                c_lo
            } else {
                exact_ceil(lambda, exponent, c_lo)
            };
            if boundary > u32::MAX as u128 {
                break;
            }
            boundaries.push(boundary as u32);
            lo = lo * (p + q) / q;
            hi = (hi * (p + q)).div_ceil(q);
            exponent += 1;
        }
        LogDegreeClasses { lambda, boundaries }
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    /// Lower boundary of class `i`, if it is representable as a degree.
    pub fn boundary(&self, i: u32) -> Option<u32> {
        self.boundaries.get(i as usize).copied()
    }

    /// Number of distinct classes a `u32` degree can fall into.
    pub fn len(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty()
    }

    /// `floor(log_{1+lambda} degree)`; degree 0 maps to class 0.
    #[inline]
    pub fn class_of(&self, degree: u32) -> u32 {
        let above = self.boundaries.partition_point(|&b| b <= degree);
        above.saturating_sub(1) as u32
    }
}

/// Decides between `candidate` and `candidate + 1` as `ceil((1+lambda)^i)`:
/// the lower one wins iff `(p + q)^i <= candidate * q^i`.
fn exact_ceil(lambda: Lambda, exponent: u32, candidate: u128) -> u128 {
    let base = BigUint::from(lambda.num() as u64 + lambda.den() as u64);
    let den = BigUint::from(lambda.den());
    let lhs = base.pow(exponent);
    let rhs = BigUint::from(candidate) * den.pow(exponent);
    if lhs <= rhs {
        candidate
    } else {
        candidate + 1
    }
}
