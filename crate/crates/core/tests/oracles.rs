//! Cross-checks of the exact engine against independent reference methods.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use jpa_core::analysis::{is_pisot, unit_disk_count, Pisot};
use jpa_core::expansion::expand;
use jpa_core::families::{alpha0, default_grid, family_field, family_poly, Alpha0Form, FamilyParams, GridSpec};
use jpa_core::field::FieldElem;
use jpa_core::oracle::{bisect_root, eval_on_interval, interval_jpa_digits, norm_by_determinant};
use jpa_core::poly::IntPoly;

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
}

/// Durand-Kerner iteration for all roots of a monic polynomial.
fn float_roots(p: &IntPoly) -> Vec<C> {
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap()).collect();
    let n = c.len() - 1;
    let eval = |z: C| c.iter().rev().fold(C(0.0, 0.0), |acc, &k| acc.mul(z).add(C(k, 0.0)));
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            C(bound * t.cos(), bound * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let den = (0..n)
                .filter(|&j| j != i)
                .fold(C(1.0, 0.0), |acc, j| acc.mul(z[i].sub(z[j])));
            let step = eval(z[i]).div(den);
            z[i] = z[i].sub(step);
            delta = delta.max(step.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// `(inside, outside)` from floating roots, or `None` when some root is too
/// close to the circle to call.
fn float_disk_count(p: &IntPoly) -> Option<(usize, usize)> {
    let roots = float_roots(p);
    if roots.iter().any(|z| (z.abs() - 1.0).abs() < 1e-6) {
        return None;
    }
    let inside = roots.iter().filter(|z| z.abs() < 1.0).count();
    Some((inside, roots.len() - inside))
}

#[test]
fn disk_counts_match_floating_roots_on_the_grid() {
    let polys: BTreeSet<String> = default_grid(&GridSpec::default())
        .iter()
        .map(|p| family_poly(p).unwrap().to_string())
        .collect();
    let mut compared = 0;
    for s in &polys {
        let f: IntPoly = s.parse().unwrap();
        let d = unit_disk_count(&f).unwrap();
        if let Some((inside, outside)) = float_disk_count(&f) {
            assert_eq!((d.inside, d.on_circle, d.outside), (inside, 0, outside), "{s}");
            compared += 1;
        }
        // a Yes verdict leaves every other conjugate inside the circle
        let v = is_pisot(&f).unwrap().verdict;
        if v == Pisot::Yes {
            assert_eq!(d.inside, f.degree() as usize - 1, "{s}");
        }
    }
    assert!(compared > polys.len() * 9 / 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn disk_counts_match_floating_roots(c in prop::collection::vec(-9i64..=9, 2..=7)) {
        let mut c = c;
        c.push(1);
        let f = IntPoly::from_i64s(&c);
        let sf = f.squarefree_part();
        prop_assume!(sf == f);
        let d = unit_disk_count(&f).unwrap();
        prop_assert_eq!(d.total(), f.degree() as usize);
        if let Some((inside, outside)) = float_disk_count(&f) {
            prop_assert_eq!((d.inside, d.on_circle, d.outside), (inside, 0, outside));
        }
    }

    #[test]
    fn engine_digits_match_interval_arithmetic(
        n in 2usize..=4,
        extra in 0usize..=3,
        t in 1u64..=5,
        tail in prop::collection::vec(0u64..=3, 3),
    ) {
        let mut c = vec![1u64];
        let mut tail: Vec<u64> = tail[..n - 1].to_vec();
        tail.sort_unstable();
        *tail.last_mut().unwrap() = tail.last().unwrap().max(&1).to_owned();
        c.extend(tail);
        let p = FamilyParams::new(n, n + extra, t, &c);
        let k = family_field(&p).unwrap();
        let start = alpha0(&p, &k, Alpha0Form::Sum).unwrap();
        let out = expand(start.clone(), 40).unwrap();

        let f = family_poly(&p).unwrap();
        let top = BigRational::from(-f.coeff(n - 1));
        let w = bisect_root(&f, &top, &(&top + BigInt::from(1)), 600);
        let enclosures: Vec<_> = start.iter().map(|e: &FieldElem| eval_on_interval(&e.coeffs(), &w)).collect();
        let reference = interval_jpa_digits(&enclosures, out.digits.len(), 600);
        prop_assert!(reference.len() >= p.m);
        prop_assert_eq!(&out.digits[..reference.len()], &reference[..]);
    }
}

#[test]
fn rational_enclosures_of_start_vector() {
    // alpha_i lies in (a_i, a_i + 1) as seen by the independent evaluation
    let p = FamilyParams::new(4, 5, 3, &[1, 1, 2, 2]);
    let f = family_poly(&p).unwrap();
    let k = family_field(&p).unwrap();
    let a: Vec<BigInt> = (0..4).map(|i| -f.coeff(i)).collect();
    let w = bisect_root(&f, &BigRational::from(a[3].clone()), &BigRational::from(&a[3] + 1), 200);
    for (i, e) in alpha0(&p, &k, Alpha0Form::Sum).unwrap().iter().enumerate() {
        let iv = eval_on_interval(&e.coeffs(), &w);
        assert!(iv.lo() > &BigRational::from(a[i + 1].clone()));
        assert!(iv.hi() < &BigRational::from(&a[i + 1] + 1));
    }
}

#[test]
fn unit_norms_match_determinants_on_the_grid() {
    let grid = default_grid(&GridSpec {
        t_values: vec![1, 7],
        ..GridSpec::default()
    });
    for p in grid.iter().step_by(7) {
        let k = family_field(p).unwrap();
        let out = expand(alpha0(p, &k, Alpha0Form::Sum).unwrap(), 100).unwrap();
        let eps = jpa_core::expansion::hasse_bernstein_unit(&out).unwrap();
        let det = norm_by_determinant(k.poly(), &eps.coeffs());
        assert_eq!(eps.norm().unwrap(), det, "{p:?}");
        assert!(det == BigRational::from(BigInt::from(1)) || det == BigRational::from(BigInt::from(-1)));
    }
}

proptest! {
    #[test]
    fn resultant_norm_matches_determinant(c in prop::collection::vec((-20i64..20, 1i64..6), 1..=4)) {
        let f = IntPoly::from_i64s(&[-3, -1, -2, -4, 1]);
        let k = jpa_core::field::field_new(f.clone(), jpa_core::poly::RootMode::Shape).unwrap();
        let coeffs: Vec<BigRational> = c.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect();
        let e = k.elem(&coeffs).unwrap();
        prop_assume!(!e.is_zero());
        prop_assert_eq!(e.norm().unwrap(), norm_by_determinant(&f, &coeffs));
    }
}
