//! Arithmetic in `Q[X]/(f)` for a monic integer `f` with a distinguished
//! positive real root `omega`.
//!
//! Irreducibility of `f` is not assumed. Elements are reduced coefficient
//! vectors; an element that turns out to be a zero divisor is reported as
//! [`Error::ZeroDivisor`] instead of being inverted.

mod elem;

pub use elem::FieldElem;

use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{isolate_dominant_root, IntPoly, Interval, RootMode};

/// Bracket `[lo / 2^k, (lo + 1) / 2^k]` around `omega`.
#[derive(Clone, Debug)]
pub(crate) struct DyadicBracket {
    pub lo: BigInt,
    pub k: u64,
}

impl DyadicBracket {
    fn to_interval(&self) -> Interval {
        let d = BigInt::one() << self.k;
        Interval::new(
            BigRational::new(self.lo.clone(), d.clone()),
            BigRational::new(&self.lo + 1, d),
        )
        .expect("ordered")
    }
}

/// `Q[X]/(f)` together with a certified isolating bracket for `omega`.
#[derive(Debug)]
pub struct NumberField {
    f: IntPoly,
    n: usize,
    mode: RootMode,
    initial: Interval,
    /// Sign of `f` just above the lower end of the bracket.
    sign_lo: Sign,
    bracket: RwLock<DyadicBracket>,
}

impl NumberField {
    /// Builds the field, isolating `omega` per `mode`.
    pub fn new(f: IntPoly, mode: RootMode) -> Result<Arc<NumberField>> {
        if f.degree() < 2 || !f.is_monic() {
            return Err(Error::ShapeViolation(format!(
                "defining polynomial must be monic of degree >= 2, got {f}"
            )));
        }
        let initial = isolate_dominant_root(&f, mode)?;
        if initial.is_point() {
            return Err(Error::NoUniquePositiveRoot(format!(
                "the positive root of {f} is rational"
            )));
        }
        let lo = initial.lo().to_integer();
        debug_assert_eq!(BigRational::from(lo.clone() + 1), *initial.hi());
        let sign_lo = f.sign_at(initial.lo());
        let sign_hi = f.sign_at(initial.hi());
        if sign_lo == Sign::NoSign || sign_lo == sign_hi {
            return Err(Error::NoUniquePositiveRoot(format!(
                "the positive root of {f} is not simple"
            )));
        }
        Ok(Arc::new(NumberField {
            n: f.degree() as usize,
            f,
            mode,
            initial,
            sign_lo,
            bracket: RwLock::new(DyadicBracket { lo, k: 0 }),
        }))
    }

    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> RootMode {
        self.mode
    }

    /// Integer bracket found at construction.
    pub fn initial_bracket(&self) -> &Interval {
        &self.initial
    }

    /// Current (possibly refined) isolating interval for `omega`.
    pub fn omega_bracket(&self) -> Interval {
        self.bracket.read().expect("bracket lock").to_interval()
    }

    /// Isolating interval for `omega` of width at most `2^-bits`.
    pub fn omega_interval(&self, bits: u64) -> Interval {
        self.bracket_at_least(bits).to_interval()
    }

    /// Number of bisection steps applied so far.
    pub fn precision_bits(&self) -> u64 {
        self.bracket.read().expect("bracket lock").k
    }

    /// A bracket of at least `bits` bits of precision.
    ///
    /// Refinement happens under the write lock, so readers always see a
    /// valid isolating bracket.
    pub(crate) fn bracket_at_least(&self, bits: u64) -> DyadicBracket {
        {
            let b = self.bracket.read().expect("bracket lock");
            if b.k >= bits {
                return b.clone();
            }
        }
        let mut b = self.bracket.write().expect("bracket lock");
        while b.k < bits {
            let k1 = b.k + 1;
            let mid = &b.lo * 2 + 1;
            let s = self.sign_scaled(&mid, k1);
            debug_assert_ne!(s, Sign::NoSign, "omega is irrational");
            b.lo = if s == self.sign_lo { mid } else { &b.lo * 2 };
            b.k = k1;
        }
        b.clone()
    }

    /// Sign of `f(x / 2^k)`.
    fn sign_scaled(&self, x: &BigInt, k: u64) -> Sign {
        let c = self.f.coeffs();
        let mut acc = BigInt::one();
        for i in (0..self.n).rev() {
            acc = acc * x + (&c[i] << (k as usize * (self.n - i)));
        }
        acc.sign()
    }

    /// Canonical element from rational coefficients (padded with zeros).
    pub fn elem(self: &Arc<Self>, coeffs: &[BigRational]) -> Result<FieldElem> {
        FieldElem::from_rationals(self, coeffs)
    }

    pub fn from_ints(self: &Arc<Self>, coeffs: &[i64]) -> Result<FieldElem> {
        let v: Vec<BigRational> = coeffs.iter().map(|&c| BigInt::from(c).into()).collect();
        FieldElem::from_rationals(self, &v)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        FieldElem::from_parts(self, vec![BigInt::zero(); self.n], BigInt::one())
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.constant(&BigRational::one())
    }

    pub fn constant(self: &Arc<Self>, c: &BigRational) -> FieldElem {
        let mut num = vec![BigInt::zero(); self.n];
        num[0] = c.numer().clone();
        FieldElem::from_parts(self, num, c.denom().clone())
    }

    /// The generator `omega`.
    pub fn omega(self: &Arc<Self>) -> FieldElem {
        let mut num = vec![BigInt::zero(); self.n];
        num[1] = BigInt::one();
        FieldElem::from_parts(self, num, BigInt::one())
    }

    /// `sum c_k omega^k` for integer coefficients of any length.
    pub fn from_poly(self: &Arc<Self>, p: &IntPoly) -> FieldElem {
        let mut num = p.coeffs().to_vec();
        self.reduce(&mut num);
        num.resize(self.n, BigInt::zero());
        FieldElem::from_parts(self, num, BigInt::one())
    }

    /// Reduces a coefficient vector modulo the monic `f` in place.
    pub(crate) fn reduce(&self, r: &mut Vec<BigInt>) {
        let n = self.n;
        let c = self.f.coeffs();
        while r.len() > n {
            let top = r.len() - 1;
            let t = r.pop().expect("nonempty");
            if t.is_zero() {
                continue;
            }
            for (i, fi) in c.iter().take(n).enumerate() {
                if !fi.is_zero() {
                    r[top - n + i] -= &t * fi;
                }
            }
        }
    }

    pub fn same_field(self: &Arc<Self>, other: &Arc<NumberField>) -> bool {
        Arc::ptr_eq(self, other) || self.f == other.f
    }
}

/// Builds a field over `f`; shorthand for [`NumberField::new`].
pub fn field_new(f: IntPoly, mode: RootMode) -> Result<Arc<NumberField>> {
    NumberField::new(f, mode)
}
