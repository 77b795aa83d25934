//! Negative real roots and the empirical lower bound for them.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{count_real_roots, isolate_real_roots, refine_root, IntPoly, Interval};

/// Isolating intervals of the negative real roots, each refined below
/// `eps` and kept strictly left of zero (or a point at an exact root).
pub fn negative_real_roots(p: &IntPoly, eps: &BigRational) -> Result<Vec<Interval>> {
    let q = p.squarefree_part();
    let zero = BigRational::zero();
    let mut out = Vec::new();
    for iv in isolate_real_roots(&q) {
        if iv.lo() >= &zero {
            continue;
        }
        let mut iv = if iv.hi() >= &zero && !iv.is_point() {
            if q.sign_at(&zero) == Sign::NoSign {
                // the root in this interval is 0 itself
                continue;
            }
            let left = Interval::new(iv.lo().clone(), zero.clone())?;
            if q.sign_at(left.lo()) == q.sign_at(&zero) {
                continue;
            }
            left
        } else {
            iv
        };
        if !iv.is_point() {
            iv = refine_root(&q, &iv, eps)?;
        }
        out.push(iv);
    }
    Ok(out)
}

/// Exact comparison of the root of `p` isolated by `a` with the root of
/// `q` isolated by `b`; both intervals must isolate simple roots.
pub fn compare_roots(p: &IntPoly, a: &Interval, q: &IntPoly, b: &Interval) -> Result<Ordering> {
    let (p, q) = (p.squarefree_part(), q.squarefree_part());
    let g = p.gcd(&q);
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut eps = a.width().max(b.width());
    if eps.is_zero() {
        eps = BigRational::one();
    }
    let two = BigRational::from(BigInt::from(2));
    for _ in 0..2000 {
        if a.hi() < b.lo() {
            return Ok(Ordering::Less);
        }
        if a.lo() > b.hi() {
            return Ok(Ordering::Greater);
        }
        if a.is_point() && b.is_point() {
            return Ok(a.lo().cmp(b.lo()));
        }
        // overlapping: a common root in the overlap means equality
        if g.degree() >= 1 {
            let lo = a.lo().max(b.lo()).clone();
            let hi = a.hi().min(b.hi()).clone();
            let hits_lo = g.sign_at(&lo) == Sign::NoSign;
            if hits_lo || count_real_roots(&g, &Interval::new(lo, hi)?) > 0 {
                // both intervals isolate a single root, so it is shared
                return Ok(Ordering::Equal);
            }
        }
        eps /= &two;
        if !a.is_point() {
            a = refine_root(&p, &a, &eps)?;
        }
        if !b.is_point() {
            b = refine_root(&q, &b, &eps)?;
        }
    }
    Err(Error::InvalidInput("root comparison did not separate".into()))
}

/// `x^(n-1) + x^(n-2) + 1`.
pub fn bound_poly(n: usize) -> IntPoly {
    let mut c = vec![BigInt::zero(); n];
    c[0] = BigInt::one();
    c[n - 1] += 1;
    c[n - 2] += 1;
    IntPoly::new(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeRootReport {
    pub n: usize,
    pub negative_roots: Vec<Interval>,
    /// Most negative real root of the bound polynomial, if it has one.
    pub bound_root: Option<Interval>,
    /// Every negative root is at least the bound root.
    pub above_bound: Option<bool>,
    pub has_root_below_minus_one: bool,
    pub findings: Vec<String>,
}

/// Checks the negative real roots of `f` against the most negative real
/// root of `x^(n-1) + x^(n-2) + 1` and against `-1`. Violations are
/// returned as findings, not errors: the bound is an observation.
pub fn negative_root_bound_check(f: &IntPoly, n: usize) -> Result<NegativeRootReport> {
    if n < 2 {
        return Err(Error::InvalidInput("need n >= 2".into()));
    }
    let eps = BigRational::new(BigInt::one(), BigInt::one() << 40);
    let roots = negative_real_roots(f, &eps)?;
    let b = bound_poly(n);
    let bound_root = negative_real_roots(&b, &eps)?.into_iter().next();
    let mut findings = Vec::new();
    let above_bound = match &bound_root {
        Some(br) => {
            let mut ok = true;
            for r in &roots {
                if compare_roots(f, r, &b, br)? == Ordering::Less {
                    ok = false;
                    findings.push(format!("negative root {r} of {f} lies below the bound root {br}"));
                }
            }
            Some(ok)
        }
        None => None,
    };
    let minus_one = IntPoly::from_i64s(&[1, 1]);
    let m1 = Interval::point(-BigRational::one());
    let mut below = false;
    for r in &roots {
        if compare_roots(f, r, &minus_one, &m1)? == Ordering::Less {
            below = true;
            if n % 2 == 1 {
                findings.push(format!("odd n = {n}: real root {r} of {f} is below -1"));
            }
        }
    }
    Ok(NegativeRootReport {
        n,
        negative_roots: roots,
        bound_root,
        above_bound,
        has_root_below_minus_one: below,
        findings,
    })
}
