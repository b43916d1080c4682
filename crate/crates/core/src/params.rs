//! Algorithm parameters: the fairness slack `lambda`, the additive slack
//! `theta` and the lift multiplicity `b`.
//!
//! `lambda` is kept as an exact ratio so that every threshold comparison the
//! engine makes is integer arithmetic and therefore identical on every
//! platform.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest accepted numerator or denominator of `lambda` after reduction.
pub const MAX_LAMBDA_TERM: u32 = 1 << 12;

/// The fairness slack `lambda = num / den`, reduced, with `0 < lambda <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lambda {
    num: u32,
    den: u32,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Lambda {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        Self::from_u64(num as u64, den as u64)
    }

    fn from_u64(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Config(format!(
                "lambda must be a positive ratio, got {num}/{den}"
            )));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if num > den {
            return Err(Error::Config(format!(
                "lambda must not exceed 1, got {num}/{den}"
            )));
        }
        if den > MAX_LAMBDA_TERM as u64 {
            return Err(Error::Config(format!(
                "lambda denominator {den} exceeds {MAX_LAMBDA_TERM}"
            )));
        }
        Ok(Lambda {
            num: num as u32,
            den: den as u32,
        })
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `ceil(2 / lambda)`, the length of every round-robin scan and of every
    /// informing pass.
    pub fn scan_budget(self) -> u32 {
        (2 * self.den).div_ceil(self.num)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Lambda {
    type Err = Error;

    /// Accepts `P/Q`, a plain integer, or a finite decimal such as `0.01`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse lambda from {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Self::from_u64(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let digits_ok = |t: &str| t.bytes().all(|c| c.is_ascii_digit());
        if !digits_ok(int) || !digits_ok(frac) || frac.len() > 9 {
            return Err(bad());
        }
        let scale = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Self::from_u64(num, scale)
    }
}

/// Validated engine parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    lambda: Lambda,
    theta: u32,
    b: u32,
}

impl Params {
    /// With `theta = 0` the lift must satisfy `b > 4 / lambda`; with
    /// `theta = 1` any `b >= 1` is accepted.
    pub fn new(lambda: Lambda, theta: u32, b: u32) -> Result<Self> {
        if theta > 1 {
            return Err(Error::Config(format!("theta must be 0 or 1, got {theta}")));
        }
        if b == 0 {
            return Err(Error::Config("b must be positive".into()));
        }
        if theta == 0 && (b as u64) * (lambda.num as u64) <= 4 * lambda.den as u64 {
            return Err(Error::Config(format!(
                "with theta = 0, b must exceed 4/lambda = {}/{}; got b = {b}",
                4 * lambda.den,
                lambda.num
            )));
        }
        Ok(Params { lambda, theta, b })
    }

    /// Smallest `b` accepted for the given `lambda` and `theta`.
    pub fn min_b(lambda: Lambda, theta: u32) -> u32 {
        if theta == 1 {
            1
        } else {
            (4 * lambda.den) / lambda.num + 1
        }
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn theta(&self) -> u32 {
        self.theta
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn scan_budget(&self) -> u32 {
        self.lambda.scan_budget()
    }

    /// The flip test shared by directed insertion and deletion:
    /// `high > max((1 + lambda) * low + theta, b / 4)`, evaluated exactly.
    #[inline]
    pub fn exceeds(&self, high: u32, low: u32) -> bool {
        let (p, q) = (self.lambda.num as u64, self.lambda.den as u64);
        let (high, low) = (high as u64, low as u64);
        4 * high > self.b as u64 && q * high > (q + p) * low + q * self.theta as u64
    }
}
