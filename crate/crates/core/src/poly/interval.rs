use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact endpoints as rational text, plus decimal approximations that are
/// ignored on input.
#[derive(Serialize, Deserialize)]
struct IntervalText {
    lo: String,
    hi: String,
    #[serde(default, skip_deserializing)]
    approx: Option<(f64, f64)>,
}

impl From<Interval> for IntervalText {
    fn from(i: Interval) -> Self {
        let approx = Some(i.to_f64());
        IntervalText {
            lo: super::format_rational(&i.lo),
            hi: super::format_rational(&i.hi),
            approx,
        }
    }
}

impl TryFrom<IntervalText> for Interval {
    type Error = Error;
    fn try_from(t: IntervalText) -> Result<Self> {
        Interval::new(super::parse_rational(&t.lo)?, super::parse_rational(&t.hi)?)
    }
}

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "IntervalText", try_from = "IntervalText")]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("interval lo {lo} > hi {hi}")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn from_ints(lo: i64, hi: i64) -> Result<Self> {
        Self::new(BigInt::from(lo).into(), BigInt::from(hi).into())
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from(BigInt::from(2))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        match BigRational::from_float(x) {
            Some(r) => self.contains(&r),
            None => false,
        }
    }

    /// `self` lies inside `other`.
    pub fn is_within(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies strictly inside the open interval `(other.lo, other.hi)`.
    pub fn is_strictly_within(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > BigRational::zero()
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().cloned().unwrap_or_default();
        let hi = cands.iter().max().cloned().unwrap_or_default();
        Interval { lo, hi }
    }

    /// Reciprocal; errors if the interval contains zero.
    pub fn recip(&self) -> Result<Interval> {
        if self.contains(&BigRational::zero()) {
            return Err(Error::DivisionByZero);
        }
        Ok(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Enclosure of the square root of a non-negative interval, with
    /// endpoints accurate to `2^-bits`.
    pub fn sqrt(&self, bits: u32) -> Result<Interval> {
        if self.lo < BigRational::zero() {
            return Err(Error::InvalidInput("sqrt of negative interval".into()));
        }
        let lo = rat_sqrt_bound(&self.lo, bits, false);
        let hi = rat_sqrt_bound(&self.hi, bits, true);
        Ok(Interval { lo, hi })
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Rational lower (or upper) bound on `sqrt(x)` with denominator `2^bits`.
fn rat_sqrt_bound(x: &BigRational, bits: u32, upper: bool) -> BigRational {
    // floor(sqrt(x * 4^bits)) / 2^bits
    let scale = BigInt::from(1) << (2 * bits as usize);
    let scaled = (x * BigRational::from(scale)).to_integer();
    let mut s = scaled.sqrt();
    let denom = BigInt::from(1) << bits as usize;
    if upper {
        let cand = BigRational::new(s.clone(), denom.clone());
        if &(&cand * &cand) < x {
            s += 1;
        }
        // to_integer truncates toward zero; one more step covers the fraction
        let cand = BigRational::new(s.clone(), denom.clone());
        if &(&cand * &cand) < x {
            s += 1;
        }
    }
    BigRational::new(s, denom)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            super::format_rational(&self.lo),
            super::format_rational(&self.hi)
        )
    }
}
