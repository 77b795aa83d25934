//! Root-location analytics for the family polynomials: exact unit-disk
//! counts, Pisot verdicts, negative real roots, non-real root moduli, the
//! cubic discriminant criterion and irreducibility sampling.

mod disk;
mod roots;
mod sampler;

pub use disk::{
    char_poly, disk_count_radius, max_nonreal_modulus, max_nonreal_modulus_bisect, pair_modulus_by_product,
    unit_disk_count, DiskCount, ModulusEnclosure, ModulusMethod,
};
pub use roots::{bound_poly, compare_roots, negative_real_roots, negative_root_bound_check, NegativeRootReport};
pub use sampler::{
    classify, cubic_disc_criterion, cubic_discriminant, irreducibility_sample, random_shape_poly, CubicDiscCase,
    CubicDiscReport, Exception, Sample, SampleClass, SamplerReport,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{
    count_real_roots, cyclotomic_divisors, cyclotomic_poly, irreducibility_verdict, isolate_real_roots, refine_root,
    sturm_chain, IntPoly, Interval, IrreducibilityVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pisot {
    Yes,
    No,
    /// A conjugate on the unit circle, or the minimal polynomial of the
    /// root could not be certified; see the note.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PisotReport {
    pub verdict: Pisot,
    /// Polynomial whose roots were counted (the factor carrying the root).
    pub factor: String,
    pub counts: DiskCount,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn width(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

fn above_one(f: &IntPoly) -> bool {
    sturm_chain(f).count_above(&BigRational::one()) > 0
}

/// Isolating interval of the largest real root, if any.
pub fn largest_real_root(f: &IntPoly) -> Option<Interval> {
    isolate_real_roots(&f.squarefree_part()).pop()
}

/// Pisot verdict for the largest real root `w > 1` of the monic `f`.
///
/// Cyclotomic factors are removed first, then certified factorizations
/// narrow `f` to the factor vanishing at `w`. All other roots of that
/// factor strictly inside the unit circle gives `Yes`; that conclusion
/// stays valid even when irreducibility is not certified.
pub fn is_pisot(f: &IntPoly) -> Result<PisotReport> {
    if !f.is_monic() || f.degree() < 1 {
        return Err(Error::InvalidInput(format!("need a monic polynomial, got {f}")));
    }
    let mut q = f.squarefree_part();
    let root = largest_real_root(&q).ok_or_else(|| Error::InvalidInput(format!("{f} has no real root")))?;
    if !above_one(&q) {
        return Err(Error::InvalidInput(format!("largest real root of {f} is not above 1")));
    }
    for d in cyclotomic_divisors(&q) {
        q = q.div_exact(&cyclotomic_poly(d)).expect("divides");
    }
    let mut note = None;
    loop {
        match irreducibility_verdict(&q)? {
            IrreducibilityVerdict::Irreducible => break,
            IrreducibilityVerdict::Unknown => {
                note = Some(format!("irreducibility of {q} not certified"));
                break;
            }
            IrreducibilityVerdict::Reducible(w) => {
                let w = w.0.primitive_part();
                let other = q.div_exact(&w).expect("witness divides");
                // exactly one factor has the root in its isolating interval
                let iv = refine_root(&q, &root, &width(8))?;
                let hits = |p: &IntPoly| p.sign_at(iv.hi()) == num_bigint::Sign::NoSign || count_real_roots(p, &iv) > 0;
                q = if hits(&w) { w } else { other };
            }
        }
    }
    let counts = unit_disk_count(&q)?;
    let d = q.degree() as usize;
    let verdict = if counts.on_circle > 0 {
        Pisot::Boundary
    } else if counts.inside == d - 1 {
        note = None;
        Pisot::Yes
    } else if note.is_some() {
        Pisot::Boundary
    } else {
        Pisot::No
    };
    Ok(PisotReport {
        verdict,
        factor: q.to_string(),
        counts,
        note,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub poly: String,
    pub degree: usize,
    /// Largest real root, refined to width `2^-64`.
    pub dominant_root: Option<Interval>,
    /// Over distinct roots.
    pub count_inside_unit_disk: usize,
    pub on_unit_circle: usize,
    pub count_outside: usize,
    pub pisot: Option<PisotReport>,
    pub negative_real_roots: Vec<Interval>,
    pub max_nonreal_modulus: Option<ModulusEnclosure>,
    pub cyclotomic_divisors: Vec<u64>,
    pub irreducibility: IrreducibilityVerdict,
    pub findings: Vec<String>,
}

/// Full report for a monic integer polynomial.
pub fn analyze(f: &IntPoly) -> Result<RootReport> {
    if !f.is_monic() || f.degree() < 1 {
        return Err(Error::InvalidInput(format!(
            "need a monic polynomial of degree >= 1, got {f}"
        )));
    }
    let eps = width(64);
    let dominant_root = match largest_real_root(f) {
        Some(iv) => Some(refine_root(f, &iv, &eps)?),
        None => None,
    };
    let counts = unit_disk_count(f)?;
    let mut findings = Vec::new();
    let sf_degree = f.squarefree_part().degree() as usize;
    if counts.total() != sf_degree {
        findings.push(format!("disk counts {counts:?} do not sum to {sf_degree}"));
    }
    let pisot = match &dominant_root {
        Some(_) if above_one(f) => Some(is_pisot(f)?),
        _ => None,
    };
    Ok(RootReport {
        poly: f.to_string(),
        degree: f.degree() as usize,
        dominant_root,
        count_inside_unit_disk: counts.inside,
        on_unit_circle: counts.on_circle,
        count_outside: counts.outside,
        pisot,
        negative_real_roots: negative_real_roots(f, &width(40))?,
        max_nonreal_modulus: max_nonreal_modulus(f, &width(20))?,
        cyclotomic_divisors: cyclotomic_divisors(f),
        irreducibility: irreducibility_verdict(f)?,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn near(i: &Interval, x: f64, tol: f64) -> bool {
        let (lo, hi) = i.to_f64();
        (lo - x).abs() < tol && (hi - x).abs() < tol
    }

    #[test]
    fn pisot_examples() {
        assert_eq!(is_pisot(&p(&[-2, -2, 1])).unwrap().verdict, Pisot::Yes);
        assert_eq!(is_pisot(&p(&[-2, 0, -2, -2, 1])).unwrap().verdict, Pisot::No);
        assert_eq!(is_pisot(&p(&[-2, -1, -2, 1])).unwrap().verdict, Pisot::Yes);
        // golden ratio times Phi_3: the cyclotomic factor is dropped
        let f = &p(&[-1, -1, 1]) * &p(&[1, 1, 1]);
        let r = is_pisot(&f).unwrap();
        assert_eq!(r.verdict, Pisot::Yes);
        assert_eq!(r.factor, "-1,-1,1");
        // Salem number of Lehmer's polynomial
        let lehmer = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert_eq!(is_pisot(&lehmer).unwrap().verdict, Pisot::Boundary);
    }

    #[test]
    fn reducible_picks_the_right_factor() {
        // roots 2.618 and 0.382, times X + 3 whose root lies outside the circle
        let f = &p(&[1, -3, 1]) * &p(&[3, 1]);
        let r = is_pisot(&f).unwrap();
        assert_eq!(r.verdict, Pisot::Yes, "{r:?}");
        assert_eq!(r.factor, "1,-3,1");
    }

    #[test]
    fn report_of_quartic_example() {
        let r = analyze(&p(&[-2, 0, -2, -2, 1])).unwrap();
        assert_eq!((r.count_inside_unit_disk, r.on_unit_circle, r.count_outside), (2, 0, 2));
        assert_eq!(r.pisot.as_ref().unwrap().verdict, Pisot::No);
        assert_eq!(r.negative_real_roots.len(), 1);
        assert!(near(r.dominant_root.as_ref().unwrap(), 2.803989, 1e-5));
        assert!(r.findings.is_empty());
        let json = serde_json::to_string(&r).unwrap();
        let back: RootReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
