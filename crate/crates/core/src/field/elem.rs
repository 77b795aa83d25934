use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{DyadicBracket, NumberField};
use crate::error::{Error, Result};
use crate::poly::{count_real_roots, format_rational, parse_rational, resultant, IntPoly, Interval};

/// `(c_0 + c_1 w + ... + c_{n-1} w^{n-1})` stored as an integer numerator
/// vector over a positive common denominator, always in lowest terms.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElem {
    pub(crate) fn from_parts(field: &Arc<NumberField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.n);
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        FieldElem {
            field: field.clone(),
            num,
            den,
        }
    }

    pub(crate) fn from_rationals(field: &Arc<NumberField>, coeffs: &[BigRational]) -> Result<Self> {
        if coeffs.len() > field.n {
            return Err(Error::InvalidInput(format!(
                "element has {} coefficients, field degree is {}",
                coeffs.len(),
                field.n
            )));
        }
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        num.resize(field.n, BigInt::zero());
        Ok(Self::from_parts(field, num, den))
    }

    /// Parses the `c0,c1,...` text format; missing trailing entries are zero.
    pub fn parse(field: &Arc<NumberField>, s: &str) -> Result<Self> {
        let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Self::from_rationals(field, &coeffs)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value when the element is a constant vector.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Largest bit length among numerators and the denominator.
    pub fn max_bits(&self) -> u64 {
        self.num
            .iter()
            .map(|c| c.bits())
            .max()
            .unwrap_or(0)
            .max(self.den.bits())
    }

    /// Integer polynomial `N` with `self = N(w) / den`.
    pub fn numerator_poly(&self) -> IntPoly {
        IntPoly::new(self.num.clone())
    }

    fn check_field(&self, other: &FieldElem) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn add_sub(&self, other: &FieldElem, negate: bool) -> FieldElem {
        let l = self.den.lcm(&other.den);
        let sa = &l / &self.den;
        let sb = &l / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| if negate { a * &sa - b * &sb } else { a * &sa + b * &sb })
            .collect();
        Self::from_parts(&self.field, num, l)
    }

    fn mul_unchecked(&self, other: &FieldElem) -> FieldElem {
        let n = self.field.n;
        let mut r = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] += a * b;
                }
            }
        }
        self.field.reduce(&mut r);
        Self::from_parts(&self.field, r, &self.den * &other.den)
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        Ok(self.add_sub(other, false))
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        Ok(self.add_sub(other, true))
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// `self + k` for a rational `k`.
    pub fn add_rational(&self, k: &BigRational) -> FieldElem {
        let mut num = self.num.iter().map(|c| c * k.denom()).collect::<Vec<_>>();
        num[0] += k.numer() * &self.den;
        Self::from_parts(&self.field, num, &self.den * k.denom())
    }

    pub fn sub_integer(&self, k: &BigInt) -> FieldElem {
        let mut num = self.num.clone();
        num[0] -= k * &self.den;
        Self::from_parts(&self.field, num, self.den.clone())
    }

    pub fn scale(&self, k: &BigRational) -> FieldElem {
        let num = self.num.iter().map(|c| c * k.numer()).collect();
        Self::from_parts(&self.field, num, &self.den * k.denom())
    }

    /// Multiplicative inverse by fraction-free elimination on the matrix of
    /// multiplication by `self`.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.n;
        let fc = self.field.f.coeffs();
        // column j holds the coefficients of N * w^j
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        cols.push(self.num.clone());
        for j in 1..n {
            let prev = &cols[j - 1];
            let top = prev[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for i in 0..n {
                let shifted = if i == 0 { BigInt::zero() } else { prev[i - 1].clone() };
                next[i] = shifted - &top * &fc[i];
            }
            cols.push(next);
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let mut b = vec![BigInt::zero(); n];
        b[0] = BigInt::one();

        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Err(self.zero_divisor());
            };
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
                b[i] = (&b[i] * &a[k][k] - &a[i][k] * &b[k]) / &prev;
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        // a is upper triangular with a[n-1][n-1] = +-det; y = det * x is integral
        let det = a[n - 1][n - 1].clone();
        let mut y = vec![BigInt::zero(); n];
        for i in (0..n).rev() {
            let mut s = &det * &b[i];
            for j in i + 1..n {
                s -= &a[i][j] * &y[j];
            }
            y[i] = s / &a[i][i];
        }
        let num = y.into_iter().map(|c| c * &self.den).collect();
        Ok(Self::from_parts(&self.field, num, det))
    }

    fn zero_divisor(&self) -> Error {
        let g = self.numerator_poly().gcd(&self.field.f);
        Error::ZeroDivisor { factor: g.to_string() }
    }

    /// `self^e`, negative exponents through [`FieldElem::inv`].
    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(acc)
    }

    /// Field norm, `res(f, N) / den^n`.
    pub fn norm(&self) -> Result<BigRational> {
        let r = resultant(&self.field.f, &self.numerator_poly())?;
        let n = self.field.n as u32;
        Ok(BigRational::new(r, self.den.pow(n)))
    }

    /// Integers `(lo, hi, d)` with `lo/d <= self(w) <= hi/d` for the given
    /// bracket. Splits the numerator into positive and negative parts, which
    /// is monotone in `w` since `w > 0`.
    fn enclose(&self, b: &DyadicBracket) -> (BigInt, BigInt, BigInt) {
        let d = self.field.n - 1;
        let k = b.k as usize;
        let lo_x = &b.lo;
        let hi_x = &b.lo + 1;
        let horner = |x: &BigInt, pick: &dyn Fn(&BigInt) -> BigInt| {
            let mut acc = pick(&self.num[d]);
            for i in (0..d).rev() {
                acc = acc * x + (pick(&self.num[i]) << (k * (d - i)));
            }
            acc
        };
        let pos = |c: &BigInt| if c.is_positive() { c.clone() } else { BigInt::zero() };
        let neg = |c: &BigInt| if c.is_negative() { -c } else { BigInt::zero() };
        let lo = horner(lo_x, &pos) - horner(&hi_x, &neg);
        let hi = horner(&hi_x, &pos) - horner(lo_x, &neg);
        (lo, hi, &self.den << (k * d))
    }

    /// Enclosure of `self(w)` using a bracket of at least `bits` bits.
    pub fn value_interval(&self, bits: u64) -> Interval {
        let b = self.field.bracket_at_least(bits);
        let (lo, hi, d) = self.enclose(&b);
        Interval::new(BigRational::new(lo, d.clone()), BigRational::new(hi, d)).expect("ordered")
    }

    pub fn to_f64(&self) -> f64 {
        let iv = self.value_interval(self.field.precision_bits().max(64));
        let (a, b) = iv.to_f64();
        0.5 * (a + b)
    }

    /// Precision after which a still-undecided sign triggers an exact test
    /// for a common factor with `f`.
    fn gcd_check_bits(&self) -> u64 {
        let n = self.field.n as u64;
        2 * n * (self.max_bits() + self.field.f.max_bits() + n) + 128
    }

    /// Errors when `self(w) = 0` with `self` nonzero.
    fn check_zero_divisor(&self) -> Result<()> {
        let g = self.numerator_poly().gcd(&self.field.f);
        if g.degree() >= 1 && count_real_roots(&g, &self.field.omega_bracket()) > 0 {
            return Err(Error::ZeroDivisor { factor: g.to_string() });
        }
        Ok(())
    }

    /// Sign of the real number `self(w)`.
    pub fn sign(&self) -> Result<i8> {
        if let Some(r) = self.as_rational() {
            return Ok(sign_of(r.numer()));
        }
        let mut bits = self.field.precision_bits().max(32);
        let check_at = self.gcd_check_bits();
        let mut checked = false;
        loop {
            let b = self.field.bracket_at_least(bits);
            let (lo, hi, _) = self.enclose(&b);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            if !checked && b.k >= check_at {
                self.check_zero_divisor()?;
                checked = true;
            }
            bits *= 2;
        }
    }

    /// `floor(self(w))`.
    pub fn floor(&self) -> Result<BigInt> {
        if let Some(r) = self.as_rational() {
            return Ok(r.numer().div_floor(r.denom()));
        }
        let mut bits = self.field.precision_bits().max(32);
        let check_at = self.gcd_check_bits();
        let mut checked = false;
        loop {
            let b = self.field.bracket_at_least(bits);
            let (lo, hi, d) = self.enclose(&b);
            let fl = lo.div_floor(&d);
            let fu = hi.div_floor(&d);
            if fl == fu {
                return Ok(fl);
            }
            if (&hi - &lo) * 2 < d {
                // a single integer boundary remains inside the enclosure
                return Ok(if self.sub_integer(&fu).sign()? >= 0 { fu } else { fu - 1 });
            }
            if !checked && b.k >= check_at {
                self.check_zero_divisor()?;
                checked = true;
            }
            bits *= 2;
        }
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs().iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

// Operators panic on a field mismatch; the checked_* methods report it.
impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.checked_add(rhs).expect("elements of different fields")
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.checked_sub(rhs).expect("elements of different fields")
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.checked_mul(rhs).expect("elements of different fields")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::from_parts(&self.field, self.num.iter().map(|c| -c).collect(), self.den.clone())
    }
}
