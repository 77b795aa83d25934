use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Resultant by the subresultant PRS, exact over Z.
///
/// For monic `p` with roots `r_i` this is `prod q(r_i)`; in particular
/// `resultant(p, c) = c^deg(p)` for a constant `c`.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::InvalidInput("resultant of the zero polynomial".into()));
    }
    let mut a = p.clone();
    let mut b = q.clone();
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.degree() == 0 {
        return Ok(sign * num_traits::pow(b.lead(), a.degree() as usize));
    }
    let ca = a.content();
    let cb = b.content();
    let t = num_traits::pow(ca.clone(), b.degree() as usize) * num_traits::pow(cb.clone(), a.degree() as usize);
    a = IntPoly::new(a.coeffs().iter().map(|c| c / &ca).collect());
    b = IntPoly::new(b.coeffs().iter().map(|c| c / &cb).collect());
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree();
        let db = b.degree();
        let delta = (da - db) as usize;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = classical_prem(&a, &b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = IntPoly::new(r.coeffs().iter().map(|c| exact_div(c, &divisor)).collect());
        g = a.lead();
        // h <- g^delta / h^(delta-1)
        h = if delta == 0 {
            h
        } else {
            exact_div(
                &num_traits::pow(g.clone(), delta),
                &num_traits::pow(h.clone(), delta - 1),
            )
        };
        if b.degree() == 0 {
            let da = a.degree() as usize;
            let hn = exact_div(&num_traits::pow(b.lead(), da), &num_traits::pow(h, da - 1));
            return Ok(sign * t * hn);
        }
    }
}

fn exact_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "inexact division in subresultant PRS");
    q
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`, the textbook pseudo-remainder.
fn classical_prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree() as usize;
    let lc = b.lead();
    let mut r = a.coeffs().to_vec();
    let mut steps = 0usize;
    let delta = a.degree() as usize - db + 1;
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top].clone();
        for x in r.iter_mut() {
            *x *= &lc;
        }
        if !c.is_zero() {
            let shift = top - db;
            for (i, bc) in b.coeffs().iter().enumerate() {
                r[shift + i] -= &c * bc;
            }
        }
        steps += 1;
        r.pop();
    }
    debug_assert_eq!(steps, delta);
    IntPoly::new(r)
}

/// Discriminant of a polynomial: `(-1)^(n(n-1)/2) res(p, p') / lc(p)`.
pub fn discriminant(p: &IntPoly) -> Result<BigRational> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("discriminant needs degree >= 1".into()));
    }
    if n == 1 {
        return Ok(BigRational::one());
    }
    let r = resultant(p, &p.derivative())?;
    let s = if (n * (n - 1) / 2) % 2 == 1 { -r } else { r };
    let lc = p.lead();
    Ok(BigRational::new(s, lc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    /// Product of `q` over the integer roots of a split monic polynomial.
    fn oracle_over_roots(roots: &[i64], q: &IntPoly) -> BigInt {
        roots.iter().map(|&r| q.eval(&BigInt::from(r))).product()
    }

    #[test]
    fn examples() {
        assert_eq!(resultant(&p(&[-2, -2, 1]), &p(&[1, 1])).unwrap(), BigInt::from(1));
        assert_eq!(resultant(&p(&[-3, 1]), &p(&[-5, 1])).unwrap(), BigInt::from(-2));
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[-4, 0, 1])).unwrap(), BigInt::from(9));
    }

    #[test]
    fn constant_argument() {
        assert_eq!(resultant(&p(&[-17, 0, 0, 1]), &p(&[5])).unwrap(), BigInt::from(125));
        assert_eq!(resultant(&p(&[5]), &p(&[-17, 0, 0, 1])).unwrap(), BigInt::from(125));
    }

    #[test]
    fn common_root_gives_zero() {
        assert!(resultant(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap().is_zero());
    }

    #[test]
    fn cubic_discriminant_formula() {
        // X^3 - 2X^2 - X - 2: 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2 with a=-2,b=-1,c=-2
        assert_eq!(
            discriminant(&p(&[-2, -1, -2, 1])).unwrap(),
            BigRational::from(BigInt::from(-236))
        );
        assert_eq!(
            discriminant(&p(&[-2, 0, 1])).unwrap(),
            BigRational::from(BigInt::from(8))
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn matches_product_over_roots(
                roots in prop::collection::vec(-6i64..6, 1..6),
                q in prop::collection::vec(-9i64..9, 1..6),
            ) {
                let f = roots
                    .iter()
                    .fold(p(&[1]), |acc, &r| &acc * &p(&[-r, 1]));
                let q = p(&q);
                prop_assume!(!q.is_zero());
                prop_assert_eq!(resultant(&f, &q).unwrap(), oracle_over_roots(&roots, &q));
            }

            #[test]
            fn multiplicative(
                a in prop::collection::vec(-9i64..9, 2..5),
                b in prop::collection::vec(-9i64..9, 1..5),
                c in prop::collection::vec(-9i64..9, 1..5),
            ) {
                let (a, b, c) = (p(&a), p(&b), p(&c));
                prop_assume!(a.degree() >= 1 && !b.is_zero() && !c.is_zero());
                let lhs = resultant(&a, &(&b * &c)).unwrap();
                let rhs = resultant(&a, &b).unwrap() * resultant(&a, &c).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
