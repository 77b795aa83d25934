use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::modp::{achievable_degrees, factor_degrees, is_squarefree};
use super::{cyclotomic_poly, euler_phi, isolate_real_roots, rat_floor, refine_root, IntPoly};
use crate::error::{Error, Result};

/// Number of primes used by the modular degree-set layer.
pub const MODULAR_PRIMES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "witness")]
pub enum IrreducibilityVerdict {
    Irreducible,
    /// A proper factor that divides the input exactly over Z.
    Reducible(IntPolyText),
    Unknown,
}

/// Serialized as the comma-separated coefficient text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolyText(pub IntPoly);

impl Serialize for IntPolyText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for IntPolyText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(IntPolyText).map_err(serde::de::Error::custom)
    }
}

impl IrreducibilityVerdict {
    pub fn witness(&self) -> Option<&IntPoly> {
        match self {
            IrreducibilityVerdict::Reducible(w) => Some(&w.0),
            _ => None,
        }
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self, IrreducibilityVerdict::Irreducible)
    }
}

fn reducible(w: IntPoly) -> IrreducibilityVerdict {
    IrreducibilityVerdict::Reducible(IntPolyText(w))
}

/// Integer root of a monic polynomial, if any.
pub(crate) fn integer_root(g: &IntPoly) -> Option<BigInt> {
    if g.coeff(0).is_zero() {
        return Some(BigInt::zero());
    }
    let half = BigRational::new(1.into(), 2.into());
    for iv in isolate_real_roots(g) {
        if iv.is_point() {
            let r = iv.lo();
            if r.is_integer() {
                return Some(r.to_integer());
            }
            continue;
        }
        let narrow = refine_root(g, &iv, &half).ok()?;
        if narrow.is_point() {
            if narrow.lo().is_integer() {
                return Some(narrow.lo().to_integer());
            }
            continue;
        }
        let k0 = rat_floor(narrow.lo());
        for k in [k0.clone(), k0 + 1] {
            if g.eval(&k).is_zero() {
                return Some(k);
            }
        }
    }
    None
}

/// Cyclotomic orders `d` with `phi(d) <= deg g` such that `Phi_d | g`.
pub fn cyclotomic_divisors(g: &IntPoly) -> Vec<u64> {
    let n = g.degree().max(0) as u64;
    // phi(d) >= sqrt(d / 2), so every candidate has d <= 2 n^2
    (1..=2 * n * n + 2)
        .filter(|&d| euler_phi(d) <= n)
        .filter(|&d| g.div_exact(&cyclotomic_poly(d)).is_some())
        .collect()
}

fn reduce_mod(g: &IntPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    g.coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("reduced below p"))
        .collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
}

/// Three-layer irreducibility test for monic integer polynomials.
///
/// Layers: squarefreeness and integer roots, cyclotomic divisors with
/// `phi(d) <= deg`, then factor-degree sets modulo the first
/// [`MODULAR_PRIMES`] primes that keep the polynomial squarefree. Only the
/// first two layers can certify reducibility; when neither certifies and
/// the degree sets do not force irreducibility the answer is `Unknown`.
pub fn irreducibility_verdict(g: &IntPoly) -> Result<IrreducibilityVerdict> {
    irreducibility_verdict_with_primes(g, MODULAR_PRIMES)
}

/// [`irreducibility_verdict`] with a configurable number of primes.
pub fn irreducibility_verdict_with_primes(g: &IntPoly, primes: usize) -> Result<IrreducibilityVerdict> {
    if g.degree() < 1 || !g.is_monic() {
        return Err(Error::InvalidInput(format!(
            "irreducibility test needs a monic polynomial of degree >= 1, got {g}"
        )));
    }
    let n = g.degree() as usize;
    if n == 1 {
        return Ok(IrreducibilityVerdict::Irreducible);
    }
    let d = g.gcd(&g.derivative());
    if d.degree() >= 1 {
        return Ok(reducible(d.primitive_part()));
    }
    if let Some(r) = integer_root(g) {
        return Ok(reducible(IntPoly::linear_root(&r)));
    }
    if let Some(&d) = cyclotomic_divisors(g).first() {
        return Ok(reducible(cyclotomic_poly(d)));
    }
    if n <= 3 {
        return Ok(IrreducibilityVerdict::Irreducible);
    }
    let mut possible = vec![true; n + 1];
    for p in small_primes()
        .filter(|&p| is_squarefree(&reduce_mod(g, p), p))
        .take(primes)
    {
        let reach = achievable_degrees(&factor_degrees(&reduce_mod(g, p), p));
        for (k, ok) in possible.iter_mut().enumerate() {
            *ok &= reach.get(k).copied().unwrap_or(false);
        }
        if (1..n).all(|k| !possible[k]) {
            return Ok(IrreducibilityVerdict::Irreducible);
        }
    }
    Ok(IrreducibilityVerdict::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn examples() {
        assert_eq!(
            irreducibility_verdict(&p(&[-2, -3, 1])).unwrap(),
            IrreducibilityVerdict::Irreducible
        );
        assert_eq!(
            irreducibility_verdict(&p(&[-2, -1, -3, -3, 1])).unwrap(),
            reducible(p(&[1, 1]))
        );
        assert_eq!(
            irreducibility_verdict(&p(&[-2, -1, -2, 1])).unwrap(),
            IrreducibilityVerdict::Irreducible
        );
    }

    #[test]
    fn rejects_non_monic() {
        assert!(irreducibility_verdict(&p(&[1, 1])).is_ok());
        assert!(irreducibility_verdict(&p(&[1, 0, 2])).is_err());
    }

    #[test]
    fn cyclotomic_factor_found_without_rational_roots() {
        // (X^2 - X + 1)(X^2 - 3X - 1)
        let g = &p(&[1, -1, 1]) * &p(&[-1, -3, 1]);
        assert_eq!(irreducibility_verdict(&g).unwrap(), reducible(p(&[1, -1, 1])));
        assert_eq!(cyclotomic_divisors(&g), vec![6]);
    }

    #[test]
    fn modular_layer_certifies_quartic() {
        // X^4 - 3X^3 - 3X^2 - 3X - 2 has Galois group S4 (checked via degree sets)
        let v = irreducibility_verdict(&p(&[-2, -3, -3, -3, 1])).unwrap();
        assert!(v.is_irreducible());
    }

    #[test]
    fn swinnerton_dyer_style_quartic_is_unknown() {
        // X^4 - 10X^2 + 1 = minimal polynomial of sqrt2 + sqrt3; splits mod every prime
        assert_eq!(
            irreducibility_verdict(&p(&[1, 0, -10, 0, 1])).unwrap(),
            IrreducibilityVerdict::Unknown
        );
    }

    #[test]
    fn repeated_factor_is_reducible() {
        let g = &p(&[-3, 0, 1]) * &p(&[-3, 0, 1]);
        assert_eq!(irreducibility_verdict(&g).unwrap(), reducible(p(&[-3, 0, 1])));
    }

    #[test]
    fn verdict_serializes() {
        let v = reducible(p(&[1, 1]));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"kind":"Reducible","witness":"1,1"}"#);
        let back: IrreducibilityVerdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn more_primes_never_contradict_irreducible(
                a in prop::collection::vec(-20i64..20, 3..7),
            ) {
                let mut a = a; a.push(1);
                let g = p(&a);
                if irreducibility_verdict(&g).unwrap().is_irreducible() {
                    let wider = irreducibility_verdict_with_primes(&g, 2 * MODULAR_PRIMES).unwrap();
                    prop_assert!(wider.is_irreducible());
                }
            }

            #[test]
            fn witnesses_divide_and_products_are_not_irreducible(
                a in prop::collection::vec(-9i64..9, 1..4),
                b in prop::collection::vec(-9i64..9, 1..4),
            ) {
                let mut a = a; a.push(1);
                let mut b = b; b.push(1);
                let g = &p(&a) * &p(&b);
                let v = irreducibility_verdict(&g).unwrap();
                prop_assert!(!v.is_irreducible());
                if let Some(w) = v.witness() {
                    prop_assert!(g.div_exact(w).is_some());
                    prop_assert!(w.degree() >= 1 && w.degree() < g.degree());
                }
            }
        }
    }
}
