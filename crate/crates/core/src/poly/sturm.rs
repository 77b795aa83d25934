//! Sturm chains, exact real-root counting, isolation and bisection refinement.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IntPoly, Interval, RatPoly};
use crate::error::{Error, Result};

/// Signed remainder sequence of the squarefree part of a polynomial.
///
/// Every member is a positive rational multiple of the classical chain
/// member, so sign variations are identical; storing integer multiples
/// keeps evaluation cheap.
#[derive(Clone, Debug)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

pub fn sturm_chain(p: &IntPoly) -> SturmChain {
    let sf = p.squarefree_part();
    let mut polys = vec![sf.clone()];
    if sf.degree() >= 1 {
        polys.push(sf.derivative().primitive_part());
        loop {
            let k = polys.len();
            let r = polys[k - 2]
                .signed_pseudo_rem(&polys[k - 1])
                .expect("chain member nonzero");
            if r.is_zero() {
                break;
            }
            // divide by positive content only; sign must be kept
            let c = r.content();
            let r = IntPoly::new(r.coeffs().iter().map(|x| -(x / &c)).collect());
            polys.push(r);
        }
    }
    SturmChain { polys }
}

fn variations(signs: impl Iterator<Item = Sign>) -> usize {
    let mut last = Sign::NoSign;
    let mut count = 0;
    for s in signs {
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl SturmChain {
    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    /// The chain as rational polynomials (each a positive multiple of the
    /// textbook remainder).
    pub fn to_rat_polys(&self) -> Vec<RatPoly> {
        self.polys.iter().map(IntPoly::to_rat).collect()
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        variations(self.polys.iter().map(|p| p.lead().sign()))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        variations(self.polys.iter().map(|p| {
            let s = p.lead().sign();
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf()
            .saturating_sub(self.variations_at_pos_inf())
    }

    /// Distinct roots in `(lo, +inf)`.
    pub fn count_above(&self, lo: &BigRational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at_pos_inf())
    }
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn count_real_roots(p: &IntPoly, i: &Interval) -> usize {
    sturm_chain(p).count(i.lo(), i.hi())
}

pub fn count_all_real_roots(p: &IntPoly) -> usize {
    sturm_chain(p).count_all()
}

/// Integer `B` with every root of `p` in `(-B, B)`.
pub fn cauchy_bound(p: &IntPoly) -> BigInt {
    let lc = p.lead().abs();
    let m = p
        .coeffs()
        .iter()
        .take(p.coeffs().len().saturating_sub(1))
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    // 1 + max|a_i / a_n|, rounded up, plus one for strictness
    let q = (&m + &lc - BigInt::one()) / &lc;
    q + BigInt::from(2)
}

/// Isolating intervals for every distinct real root, in increasing order.
///
/// Each returned interval either is a single rational point (an exact root)
/// or has non-root endpoints at which the squarefree part changes sign.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<Interval> {
    if p.degree() < 1 {
        return Vec::new();
    }
    let chain = sturm_chain(p);
    let sf = chain.polys[0].clone();
    let b = BigRational::from(cauchy_bound(p));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = chain.count(&lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 && sf.sign_at(&hi) != Sign::NoSign {
            out.push(Interval::new(lo, hi).expect("ordered"));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from(BigInt::from(2));
        if sf.sign_at(&mid) == Sign::NoSign {
            out.push(Interval::point(mid.clone()));
            let left = shrink_toward(&chain, &lo, &mid, true);
            let right = shrink_toward(&chain, &mid, &hi, false);
            stack.push((lo, left));
            stack.push((right, hi));
        } else {
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
    }
    out.sort_by(|a, b| a.lo().cmp(b.lo()));
    out
}

/// For an exact root at one end of `(lo, hi)`, finds a non-root split point
/// with no other roots between it and the exact root.
fn shrink_toward(chain: &SturmChain, lo: &BigRational, hi: &BigRational, root_at_hi: bool) -> BigRational {
    let two = BigRational::from(BigInt::from(2));
    let sf = &chain.polys[0];
    let mut a = lo.clone();
    let mut b = hi.clone();
    loop {
        let mid = (&a + &b) / &two;
        if root_at_hi {
            // roots in (mid, hi] must be exactly the one at hi
            if sf.sign_at(&mid) != Sign::NoSign && chain.count(&mid, hi) == 1 {
                return mid;
            }
            a = mid;
        } else if sf.sign_at(&mid) != Sign::NoSign && chain.count(lo, &mid) == 0 {
            return mid;
        } else {
            b = mid;
        }
    }
}

/// Which coefficient contract to use when isolating the dominant root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMode {
    /// `X^n - a_{n-1} X^{n-1} - ... - a_0` with `a_{n-1} >= 1`,
    /// `a_{n-1} >= a_0 > 0` and `a_{n-1} >= ... >= a_1 >= 0`.
    Shape,
    /// Any monic polynomial with exactly one positive real root.
    PositiveRoot,
}

/// Checks the dominant-root coefficient contract and returns the `a_i`
/// (negated coefficients below the leading term).
pub fn shape_coefficients(p: &IntPoly) -> Result<Vec<BigInt>> {
    let n = p.degree();
    if n < 1 || !p.is_monic() {
        return Err(Error::ShapeViolation(format!(
            "expected a monic polynomial of degree >= 1, got {p}"
        )));
    }
    let n = n as usize;
    let a: Vec<BigInt> = (0..n).map(|k| -p.coeff(k)).collect();
    let top = &a[n - 1];
    if top < &BigInt::one() {
        return Err(Error::ShapeViolation(format!("a_{} = {top} < 1", n - 1)));
    }
    if !(a[0].is_positive() && &a[0] <= top) {
        return Err(Error::ShapeViolation(format!(
            "need a_{} >= a_0 > 0, got a_0 = {}",
            n - 1,
            a[0]
        )));
    }
    for k in 1..n.saturating_sub(1) {
        if a[k].is_negative() || a[k] > a[k + 1] {
            return Err(Error::ShapeViolation(format!(
                "need a_{} >= a_{k} >= 0, got a_{k} = {}",
                k + 1,
                a[k]
            )));
        }
    }
    Ok(a)
}

/// Isolating interval for the distinguished positive root.
///
/// In [`RootMode::Shape`] the bracket is `(a_{n-1}, a_{n-1} + 1)`; in
/// [`RootMode::PositiveRoot`] the unique positive root is located between
/// consecutive integers by Sturm counting. An integer root is returned as a
/// point interval.
pub fn isolate_dominant_root(p: &IntPoly, mode: RootMode) -> Result<Interval> {
    match mode {
        RootMode::Shape => {
            let a = shape_coefficients(p)?;
            let top = a.last().expect("degree >= 1").clone();
            let iv = Interval::new(top.clone().into(), (top + BigInt::one()).into())?;
            debug_assert_eq!(count_real_roots(p, &iv), 1);
            Ok(iv)
        }
        RootMode::PositiveRoot => {
            if p.degree() < 1 || !p.is_monic() {
                return Err(Error::ShapeViolation(format!(
                    "expected a monic polynomial of degree >= 1, got {p}"
                )));
            }
            let chain = sturm_chain(p);
            let zero = BigRational::zero();
            let positive = chain.count_above(&zero);
            if positive != 1 {
                return Err(Error::NoUniquePositiveRoot(format!(
                    "{p} has {positive} distinct positive real roots"
                )));
            }
            // smallest integer k >= 1 with the root in (0, k]
            let mut hi = BigInt::one();
            while chain.count(&zero, &hi.clone().into()) == 0 {
                hi *= 2;
            }
            let mut lo = &hi / 2;
            while &hi - &lo > BigInt::one() {
                let mid: BigInt = (&lo + &hi) / 2;
                if chain.count(&zero, &mid.clone().into()) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let hi_r = BigRational::from(hi.clone());
            if chain.polys[0].sign_at(&hi_r) == Sign::NoSign {
                return Ok(Interval::point(hi_r));
            }
            Interval::new(lo.into(), hi_r)
        }
    }
}

/// Bisects an isolating interval of a simple root until its width is below
/// `eps`. Signs are evaluated exactly on the squarefree part.
pub fn refine_root(p: &IntPoly, i: &Interval, eps: &BigRational) -> Result<Interval> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let sf = p.squarefree_part();
    let mut lo = i.lo().clone();
    let mut hi = i.hi().clone();
    let s_lo = sf.sign_at(&lo);
    let s_hi = sf.sign_at(&hi);
    if s_lo == Sign::NoSign {
        return Ok(Interval::point(lo));
    }
    if s_hi == Sign::NoSign {
        return Ok(Interval::point(hi));
    }
    if s_lo == s_hi {
        return Err(Error::InvalidInput(format!(
            "interval {i} does not bracket a sign change of {p}"
        )));
    }
    let two = BigRational::from(BigInt::from(2));
    while &hi - &lo >= *eps {
        let mid = (&lo + &hi) / &two;
        let s = sf.sign_at(&mid);
        if s == Sign::NoSign {
            return Ok(Interval::point(mid));
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Interval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn iv(a: i64, b: i64) -> Interval {
        Interval::from_ints(a, b).unwrap()
    }

    #[test]
    fn chain_counts() {
        assert_eq!(sturm_chain(&p(&[-2, 0, 1])).count(&r(-2, 1), &r(2, 1)), 2);
        assert_eq!(sturm_chain(&p(&[1, 0, 1])).count(&r(-10, 1), &r(10, 1)), 0);
        assert_eq!(sturm_chain(&p(&[-2, -1, -2, 1])).count(&r(0, 1), &r(3, 1)), 1);
        assert!(sturm_chain(&p(&[-2, -1, -2, 1])).to_rat_polys().len() >= 2);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_real_roots(&p(&[-2, -3, 1]), &iv(0, 10)), 1);
        assert_eq!(count_real_roots(&p(&[-2, 0, -2, -2, 1]), &iv(-2, 0)), 1);
        assert_eq!(count_real_roots(&p(&[-2, -2, 1]), &iv(2, 3)), 1);
    }

    #[test]
    fn half_open_counts_with_root_endpoints() {
        // roots 1 and 2
        let f = p(&[2, -3, 1]);
        assert_eq!(count_real_roots(&f, &iv(1, 2)), 1);
        assert_eq!(count_real_roots(&f, &iv(0, 1)), 1);
        assert_eq!(count_real_roots(&f, &iv(0, 2)), 2);
        // repeated root counted once
        let g = &f * &p(&[-1, 1]);
        assert_eq!(count_real_roots(&g, &iv(0, 3)), 2);
    }

    #[test]
    fn isolation_finds_all_roots() {
        let f = &(&p(&[-1, 1]) * &p(&[1, 1])) * &p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 4);
        for i in &roots {
            if !i.is_point() {
                assert_eq!(count_real_roots(&f, i), 1);
            }
        }
        // exact rational roots are reported as points when hit by a split
        let g = &p(&[0, 1]) * &p(&[-2, 0, 1]);
        let roots = isolate_real_roots(&g);
        assert_eq!(roots.len(), 3);
        assert!(roots[1].is_point());
        for w in roots.windows(2) {
            assert!(w[0].hi() <= w[1].lo());
        }
    }

    #[test]
    fn dominant_root_brackets() {
        assert_eq!(
            isolate_dominant_root(&p(&[-2, -2, 1]), RootMode::Shape).unwrap(),
            iv(2, 3)
        );
        assert_eq!(
            isolate_dominant_root(&p(&[-3, -1, -4, 1]), RootMode::Shape).unwrap(),
            iv(4, 5)
        );
        assert!(isolate_dominant_root(&p(&[-17, 0, 0, 1]), RootMode::Shape).is_err());
        assert_eq!(
            isolate_dominant_root(&p(&[-17, 0, 0, 1]), RootMode::PositiveRoot).unwrap(),
            iv(2, 3)
        );
        assert!(isolate_dominant_root(&p(&[1, 0, 1]), RootMode::PositiveRoot).is_err());
        assert_eq!(
            isolate_dominant_root(&p(&[-8, 0, 0, 1]), RootMode::PositiveRoot).unwrap(),
            Interval::point(r(2, 1))
        );
    }

    #[test]
    fn refine_examples() {
        let a = refine_root(&p(&[-2, 0, 1]), &iv(1, 2), &r(1, 1000)).unwrap();
        assert!(a.width() < r(1, 1000));
        assert!(a.contains_f64(std::f64::consts::SQRT_2));
        let b = refine_root(&p(&[-2, 0, -2, -2, 1]), &iv(-2, -1), &r(1, 10_000_000)).unwrap();
        assert!(b.lo() > &r(-113_419, 100_000) && b.hi() < &r(-113_417, 100_000));
        let c = refine_root(&p(&[-17, 0, 0, 1]), &iv(2, 3), &r(1, 1_000_000)).unwrap();
        assert!(c.contains_f64(17f64.cbrt()));
        assert!(c.is_within(&iv(2, 3)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn counts_are_additive(
                coeffs in prop::collection::vec(-20i64..20, 2..7),
                lo in -30i64..0, hi in 1i64..30, split in -29i64..29,
            ) {
                let f = p(&coeffs);
                prop_assume!(f.degree() >= 1);
                let split_r = BigRational::from(BigInt::from(split));
                prop_assume!(split > lo && split < hi);
                prop_assume!(f.sign_at(&split_r) != Sign::NoSign);
                let c = sturm_chain(&f);
                let whole = c.count(&r(lo, 1), &r(hi, 1));
                let parts = c.count(&r(lo, 1), &split_r) + c.count(&split_r, &r(hi, 1));
                prop_assert_eq!(whole, parts);
            }

            #[test]
            fn shape_has_one_nonnegative_root(
                top in 1i64..40,
                rest in prop::collection::vec(0i64..40, 1..6),
                a0_raw in 1i64..40,
            ) {
                // a_{n-1} = top >= a_{n-2} >= ... >= a_1 >= 0, top >= a_0 >= 1
                let mut mids: Vec<i64> = rest.iter().map(|x| x % (top + 1)).collect();
                mids.sort_unstable();
                let a0 = 1 + (a0_raw - 1) % top;
                let mut a = vec![a0];
                a.extend(mids.iter().take(mids.len() - 1));
                a.push(top);
                let mut coeffs: Vec<i64> = a.iter().map(|x| -x).collect();
                coeffs.push(1);
                let f = p(&coeffs);
                let c = sturm_chain(&f);
                prop_assert_eq!(f.sign_at(&r(0, 1)), Sign::Minus);
                prop_assert_eq!(c.count_above(&r(0, 1)), 1);
                prop_assert_eq!(c.count(&r(top, 1), &r(top + 1, 1)), 1);
                let i = isolate_dominant_root(&f, RootMode::Shape).unwrap();
                let refined = refine_root(&f, &i, &r(1, 1 << 20)).unwrap();
                prop_assert!(refined.is_within(&i));
                prop_assert!(f.sign_at(refined.lo()) != f.sign_at(refined.hi()));
            }
        }
    }
}
