use num_bigint::BigInt;
use num_traits::One;

use super::IntPoly;

/// The m-th cyclotomic polynomial, by exact division of `X^m - 1` by
/// `Phi_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_poly(m: u64) -> IntPoly {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut acc = IntPoly::monomial(BigInt::one(), m as usize) - IntPoly::constant(BigInt::one());
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        acc = acc.div_exact(&cyclotomic_poly(d)).expect("Phi_d divides X^m - 1");
    }
    acc
}

/// Euler's totient.
pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}
