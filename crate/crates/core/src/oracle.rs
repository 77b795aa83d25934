//! Reference implementations that share no code with the exact engine.
//! Used to cross-check digit streams.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{rat_floor, IntPoly, Interval};

/// Quadratic irrational `(p + sqrt(d)) / q` with `q | d - p^2`, `d` not a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub p: BigInt,
    pub q: BigInt,
    pub d: BigInt,
}

impl QuadraticSurd {
    /// `(x0 + x1 w) / den` where `w` is the larger root of `X^2 - bX - c`.
    ///
    /// Returns `None` when `x1 = 0` or the discriminant is a square.
    pub fn from_element(b: &BigInt, c: &BigInt, x0: &BigInt, x1: &BigInt, den: &BigInt) -> Option<Self> {
        let disc: BigInt = b * b + c * 4;
        if x1.is_zero() || disc.sqrt().pow(2) == disc {
            return None;
        }
        // (x0 + x1 (b + sqrt(disc)) / 2) / den = (2 x0 + x1 b + x1 sqrt(disc)) / (2 den)
        let mut p: BigInt = x0 * 2 + x1 * b;
        let mut q: BigInt = den * 2;
        let mut d: BigInt = x1 * x1 * &disc;
        if x1.is_negative() {
            p = -p;
            q = -q;
        }
        if !(&d - &p * &p).is_multiple_of(&q) {
            let s = q.abs();
            p *= &s;
            d *= &s * &s;
            q *= s;
        }
        Some(QuadraticSurd { p, q, d })
    }

    fn floor(&self) -> BigInt {
        let s: BigInt = self.d.sqrt();
        if self.q.is_positive() {
            (&self.p + &s).div_floor(&self.q)
        } else {
            (&self.p + &s + BigInt::one()).div_floor(&self.q)
        }
    }

    /// Partial quotients of the ordinary continued fraction.
    pub fn cf_digits(&self, steps: usize) -> Vec<BigInt> {
        let (mut p, mut q) = (self.p.clone(), self.q.clone());
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            let a = QuadraticSurd {
                p: p.clone(),
                q: q.clone(),
                d: self.d.clone(),
            }
            .floor();
            let p1 = &a * &q - &p;
            q = (&self.d - &p1 * &p1) / &q;
            p = p1;
            out.push(a);
        }
        out
    }
}

fn round_out(iv: &Interval, bits: u64) -> Interval {
    let scale = BigInt::one() << bits;
    let lo = rat_floor(&(iv.lo() * BigRational::from(scale.clone())));
    let hi = -rat_floor(&(-(iv.hi() * BigRational::from(scale.clone()))));
    Interval::new(BigRational::new(lo, scale.clone()), BigRational::new(hi, scale)).expect("ordered")
}

fn add(a: &Interval, b: &Interval) -> Interval {
    Interval::new(a.lo() + b.lo(), a.hi() + b.hi()).expect("ordered")
}

fn shift(a: &Interval, k: &BigInt) -> Interval {
    let k = BigRational::from(k.clone());
    Interval::new(a.lo() - &k, a.hi() - &k).expect("ordered")
}

/// Interval enclosure of `sum c_k w^k` for `w` in a positive interval.
pub fn eval_on_interval(coeffs: &[BigRational], w: &Interval) -> Interval {
    let mut acc = Interval::point(BigRational::zero());
    let mut pw = Interval::point(BigRational::one());
    for c in coeffs {
        acc = add(&acc, &pw.scale(c));
        pw = pw.mul(w);
    }
    acc
}

/// JPA digits computed in outward-rounded interval arithmetic at `bits`
/// bits, stopping as soon as a floor is not certified by the enclosure.
pub fn interval_jpa_digits(alpha0: &[Interval], steps: usize, bits: u64) -> Vec<Vec<BigInt>> {
    let mut state: Vec<Interval> = alpha0.iter().map(|a| round_out(a, bits)).collect();
    let mut out = Vec::new();
    for _ in 0..steps {
        let mut digits = Vec::with_capacity(state.len());
        for a in &state {
            let f = rat_floor(a.lo());
            if f != rat_floor(a.hi()) {
                return out;
            }
            digits.push(f);
        }
        let d = shift(&state[0], &digits[0]);
        if !d.lo().is_positive() {
            out.push(digits);
            return out;
        }
        let inv = d.recip().expect("positive");
        let mut next: Vec<Interval> = state[1..]
            .iter()
            .zip(&digits[1..])
            .map(|(a, k)| round_out(&shift(a, k).mul(&inv), bits))
            .collect();
        next.push(round_out(&inv, bits));
        out.push(digits);
        state = next;
    }
    out
}

/// Enclosure of the dominant root by plain bisection on sign changes.
pub fn bisect_root(f: &IntPoly, lo: &BigRational, hi: &BigRational, bits: u64) -> Interval {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let s_lo = f.sign_at(&lo);
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let two = BigRational::from(BigInt::from(2));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / &two;
        let s = f.sign_at(&mid);
        if s == num_bigint::Sign::NoSign {
            return Interval::point(mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval::new(lo, hi).expect("ordered")
}

/// Norm of `sum c_k w^k` as the determinant of its multiplication matrix,
/// built from the companion matrix of the monic `f` and evaluated by
/// fraction-free (Bareiss) elimination.
pub fn norm_by_determinant(f: &IntPoly, coeffs: &[BigRational]) -> BigRational {
    let n = f.degree() as usize;
    // common denominator so the matrix is integral
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from(den.clone())).to_integer())
        .collect();
    // column j of the companion matrix power holds w^(j+k) in the power basis
    let companion = |col: &[BigInt]| -> Vec<BigInt> {
        let top = col[n - 1].clone();
        let mut next = vec![BigInt::zero(); n];
        next[1..].clone_from_slice(&col[..n - 1]);
        for (i, v) in next.iter_mut().enumerate() {
            *v -= &top * f.coeff(i);
        }
        next
    };
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n {
        let mut basis = vec![BigInt::zero(); n];
        basis[j] = BigInt::one();
        for c in &ints {
            for i in 0..n {
                m[i][j] += c * &basis[i];
            }
            basis = companion(&basis);
        }
    }
    let det = bareiss(m);
    BigRational::new(det, den.pow(n as u32))
}

fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
