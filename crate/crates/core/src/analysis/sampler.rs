//! The cubic discriminant criterion and random irreducibility sampling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::negative_root_bound_check;
use crate::error::{Error, Result};
use crate::families::recurrence_poly;
use crate::poly::{
    count_all_real_roots, cyclotomic_divisors, cyclotomic_poly, discriminant, irreducibility_verdict, IntPoly,
    IrreducibilityVerdict,
};

/// Discriminant of the monic cubic `x^3 + a x^2 + b x + c`.
pub fn cubic_discriminant(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    BigInt::from(18) * a * b * c - BigInt::from(4) * a.pow(3) * c + a * a * b * b
        - BigInt::from(4) * b.pow(3)
        - BigInt::from(27) * c * c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicDiscCase {
    pub m: usize,
    pub t: u64,
    pub poly: String,
    pub disc: String,
    pub real_roots: usize,
    /// Sign agrees with the criterion.
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicDiscReport {
    pub c: [u64; 3],
    /// `c_2 >= ceil(c_1^2 / 4)`, predicting a negative discriminant.
    pub criterion_holds: bool,
    pub cases: Vec<CubicDiscCase>,
    pub mismatches: usize,
    pub findings: Vec<String>,
}

/// Compares the sign of the discriminant of the cubic built from
/// `c = (1, c1, c2)` at each `(m, t)` with the criterion
/// `disc < 0 <=> c2 >= ceil(c1^2 / 4)`. The discriminant is evaluated by
/// the closed cubic formula and by the resultant, and its sign is tied to
/// the real-root count; any disagreement is a finding.
pub fn cubic_disc_criterion(c1: u64, c2: u64, samples: &[(usize, u64)]) -> Result<CubicDiscReport> {
    let c = [1, c1, c2];
    let criterion_holds = c2 >= (c1 * c1).div_ceil(4);
    let mut cases = Vec::new();
    let mut findings = Vec::new();
    for &(m, t) in samples {
        if m < 3 || t < 1 {
            return Err(Error::InvalidInput(format!("need m >= 3 and t >= 1, got ({m}, {t})")));
        }
        let f = recurrence_poly(&c, m, t)?;
        let k = f.coeffs();
        let disc = cubic_discriminant(&k[2], &k[1], &k[0]);
        if discriminant(&f)? != BigRational::from(disc.clone()) {
            findings.push(format!(
                "(m, t) = ({m}, {t}): closed-form and resultant discriminants differ"
            ));
        }
        let real_roots = count_all_real_roots(&f);
        if disc.is_zero() || (real_roots == 1) != disc.is_negative() {
            findings.push(format!(
                "(m, t) = ({m}, {t}): discriminant {disc} inconsistent with {real_roots} real roots"
            ));
        }
        let matches = disc.is_negative() == criterion_holds;
        if !matches {
            findings.push(format!(
                "(m, t) = ({m}, {t}): discriminant {disc} but criterion predicts {}",
                if criterion_holds { "negative" } else { "positive" }
            ));
        }
        cases.push(CubicDiscCase {
            m,
            t,
            poly: f.to_string(),
            disc: disc.to_string(),
            real_roots,
            matches,
        });
    }
    let mismatches = cases.iter().filter(|c| !c.matches).count();
    Ok(CubicDiscReport {
        c,
        criterion_holds,
        cases,
        mismatches,
        findings,
    })
}

/// Which of the permitted cyclotomic factors explain a reducible case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exception {
    /// `a_{n-1} = a_{n-2}` and `Phi_d` with `d | n`, `1 < d < n`.
    EqualTop,
    /// `n` even and `Phi_2`.
    EvenDegree,
    /// `n = 5 mod 6` and `Phi_6`.
    FiveModSix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SampleClass {
    Irreducible,
    Explained {
        orders: Vec<u64>,
        exceptions: Vec<Exception>,
    },
    Unknown,
    Candidate {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub poly: String,
    pub class: SampleClass,
    pub findings: Vec<String>,
}

/// Cyclotomic orders a shape-valid `g` may carry, with the reason.
fn permitted(n: usize, a: &[BigInt], d: u64) -> Vec<Exception> {
    let mut out = Vec::new();
    let nn = n as u64;
    if n >= 3 && a[n - 1] == a[n - 2] && d > 1 && d < nn && nn.is_multiple_of(d) {
        out.push(Exception::EqualTop);
    }
    if n.is_multiple_of(2) && d == 2 {
        out.push(Exception::EvenDegree);
    }
    if n % 6 == 5 && d == 6 {
        out.push(Exception::FiveModSix);
    }
    out
}

/// Classifies `g = X^n - a_{n-1} X^{n-1} - ... - a_0` against the
/// permitted cyclotomic factors. A reducible `g` is explained when every
/// cyclotomic factor is permitted and the cofactor is irreducible.
pub fn classify(g: &IntPoly) -> Result<SampleClass> {
    let n = g.degree() as usize;
    let a: Vec<BigInt> = (0..n).map(|k| -g.coeff(k)).collect();
    let verdict = irreducibility_verdict(g)?;
    match verdict {
        IrreducibilityVerdict::Irreducible => return Ok(SampleClass::Irreducible),
        IrreducibilityVerdict::Unknown => return Ok(SampleClass::Unknown),
        IrreducibilityVerdict::Reducible(_) => {}
    }
    let orders = cyclotomic_divisors(g);
    if orders.is_empty() {
        return Ok(SampleClass::Candidate {
            reason: "reducible without a cyclotomic factor".into(),
        });
    }
    let mut exceptions = Vec::new();
    let mut rest = g.clone();
    for &d in &orders {
        let why = permitted(n, &a, d);
        if why.is_empty() {
            return Ok(SampleClass::Candidate {
                reason: format!("divisible by Phi_{d}"),
            });
        }
        for e in why {
            if !exceptions.contains(&e) {
                exceptions.push(e);
            }
        }
        let phi = cyclotomic_poly(d);
        while let Some(q) = rest.div_exact(&phi) {
            rest = q;
        }
    }
    if rest.degree() < 1 {
        return Ok(SampleClass::Candidate {
            reason: "product of cyclotomic factors".into(),
        });
    }
    Ok(match irreducibility_verdict(&rest)? {
        IrreducibilityVerdict::Irreducible => SampleClass::Explained { orders, exceptions },
        IrreducibilityVerdict::Unknown => SampleClass::Unknown,
        IrreducibilityVerdict::Reducible(w) => SampleClass::Candidate {
            reason: format!("cofactor {rest} has the factor {}", w.0),
        },
    })
}

/// A random shape-valid polynomial: `cap >= a_{n-1} >= ... >= a_1 >= 0`
/// and `a_{n-1} >= a_0 >= 1`.
pub fn random_shape_poly(n: usize, cap: u64, rng: &mut impl Rng) -> IntPoly {
    let top = rng.gen_range(1..=cap);
    let mut mids: Vec<u64> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..=top)).collect();
    mids.sort_unstable();
    let a0 = rng.gen_range(1..=top);
    let mut c = vec![-BigInt::from(a0)];
    c.extend(mids.iter().map(|&x| -BigInt::from(x)));
    c.push(-BigInt::from(top));
    c.push(BigInt::from(1));
    IntPoly::new(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub cap: u64,
    pub irreducible: usize,
    pub explained: usize,
    pub unknown: usize,
    pub candidates: Vec<Sample>,
    pub unknown_rate: f64,
    /// Observed violations of the negative-root observations.
    pub root_findings: Vec<String>,
    /// Explained reducible samples, first few, for inspection.
    pub explained_examples: Vec<Sample>,
}

/// Draws `samples` shape-valid polynomials of degree `n` (sample `i` uses
/// stream `i` of a ChaCha generator seeded with `seed`) and classifies
/// each; counterexample candidates are reported in full.
pub fn irreducibility_sample(n: usize, samples: usize, seed: u64, cap: u64) -> Result<SamplerReport> {
    if n < 2 || cap < 1 {
        return Err(Error::InvalidInput("need n >= 2 and cap >= 1".into()));
    }
    let drawn: Vec<Result<Sample>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let g = random_shape_poly(n, cap, &mut rng);
            let class = classify(&g)?;
            let findings = negative_root_bound_check(&g, n)?.findings;
            Ok(Sample {
                poly: g.to_string(),
                class,
                findings,
            })
        })
        .collect();
    let mut r = SamplerReport {
        n,
        samples,
        seed,
        cap,
        irreducible: 0,
        explained: 0,
        unknown: 0,
        candidates: Vec::new(),
        unknown_rate: 0.0,
        root_findings: Vec::new(),
        explained_examples: Vec::new(),
    };
    for s in drawn {
        let s = s?;
        r.root_findings.extend(s.findings.iter().cloned());
        match s.class {
            SampleClass::Irreducible => r.irreducible += 1,
            SampleClass::Unknown => r.unknown += 1,
            SampleClass::Explained { .. } => {
                r.explained += 1;
                if r.explained_examples.len() < 5 {
                    r.explained_examples.push(s);
                }
            }
            SampleClass::Candidate { .. } => r.candidates.push(s),
        }
    }
    r.unknown_rate = if samples == 0 {
        0.0
    } else {
        r.unknown as f64 / samples as f64
    };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn disc_formula() {
        // X^3 - 2X^2 - X - 2
        let d = cubic_discriminant(&BigInt::from(-2), &BigInt::from(-1), &BigInt::from(-2));
        assert_eq!(d, BigInt::from(-236));
        assert_eq!(discriminant(&p(&[-2, -1, -2, 1])).unwrap(), BigRational::from(d));
    }

    #[test]
    fn criterion_examples() {
        let r = cubic_disc_criterion(0, 1, &[(4, 1)]).unwrap();
        assert_eq!(r.cases[0].poly, "-2,-1,-2,1");
        assert_eq!(r.cases[0].disc, "-236");
        assert!(r.criterion_holds && r.mismatches == 0 && r.findings.is_empty());
        let r = cubic_disc_criterion(2, 1, &[(3, 1), (4, 2), (5, 7)]).unwrap();
        assert!(r.criterion_holds);
        assert_eq!(r.mismatches, 0, "{r:?}");
        let r = cubic_disc_criterion(3, 1, &[(3, 1), (4, 2), (5, 7)]).unwrap();
        assert!(!r.criterion_holds);
        assert_eq!(r.mismatches, 0, "{r:?}");
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify(&p(&[-2, -1, -3, -3, 1])).unwrap(),
            SampleClass::Explained {
                orders: vec![2],
                exceptions: vec![Exception::EqualTop, Exception::EvenDegree]
            }
        );
        assert_eq!(classify(&p(&[-2, -3, 1])).unwrap(), SampleClass::Irreducible);
        // (X^2 + X + 1)(X^2 - 4X - 2) = X^4 - 3X^3 - 5X^2 - 6X - 2 is outside the shape,
        // but Phi_3 is not permitted for n = 4
        assert!(matches!(
            classify(&p(&[-2, -6, -5, -3, 1])).unwrap(),
            SampleClass::Candidate { .. }
        ));
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = irreducibility_sample(4, 60, 7, 10).unwrap();
        let b = irreducibility_sample(4, 60, 7, 10).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.irreducible + a.explained + a.unknown + a.candidates.len(), 60);
    }
}
