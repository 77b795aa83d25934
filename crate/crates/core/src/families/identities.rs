//! Executable checks of the recurrence identities and inequalities and of
//! the dominant-root location statement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{recurrence_table, Check, RecurrenceTable};
use crate::error::Result;
use crate::poly::{shape_coefficients, sturm_chain, IntPoly, Interval};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub n: usize,
    pub c: Vec<u64>,
    pub max_index: usize,
    pub checks: Vec<Check>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Accumulates violations of one statement, keeping the first few.
struct Tally {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> Check {
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{} cases", self.cases)
        } else {
            let shown: Vec<&str> = self.failures.iter().take(3).map(String::as_str).collect();
            format!(
                "{} of {} cases fail; first: {}",
                self.failures.len(),
                self.cases,
                shown.join("; ")
            )
        };
        Check {
            name: self.name.into(),
            passed,
            detail: Some(detail),
        }
    }
}

/// `c_{j-1} u_{i,m-1} + ... + c_1 u_{i,m-j+1} + c_0 u_{i,m-j}`.
fn lagged_sum(c: &[u64], u: &RecurrenceTable, i: usize, j: usize, m: usize) -> BigInt {
    (1..=j).map(|l| u.get(i, m - l) * c[j - l]).sum()
}

/// Checks every recurrence identity and inequality over indices `0..=max`.
pub fn recurrence_checks(c: &[u64], n: usize, max: usize) -> Result<RecurrenceReport> {
    let u = recurrence_table(c, n, max)?;
    let mut checks = Vec::new();

    let mut t = Tally::new("recurrence_initial_block");
    for i in 0..n {
        for k in 0..n {
            t.check(*u.get(i, k) == BigInt::from((i == k) as u8), || format!("u[{i}][{k}]"));
        }
        if max >= n {
            t.check(*u.get(i, n) == BigInt::from(c[i]), || format!("u[{i}][n] != c_{i}"));
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new("shift_identity_constant");
    for m in 1..=max {
        t.check(*u.get(0, m) == u.get(n - 1, m - 1) * c[0], || format!("m={m}"));
    }
    checks.push(t.finish());

    let mut t = Tally::new("shift_identity");
    for m in 1..=max {
        for i in 1..n {
            let rhs = u.get(n - 1, m - 1) * c[i] + u.get(i - 1, m - 1);
            t.check(*u.get(i, m) == rhs, || format!("i={i} m={m}"));
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new("expanded_identity");
    for i in 1..n {
        for m in i + 1..=max {
            let rhs: BigInt = (0..=i).map(|j| u.get(n - 1, m - i + j - 1) * c[j]).sum();
            t.check(*u.get(i, m) == rhs, || format!("i={i} m={m}"));
        }
    }
    checks.push(t.finish());

    let mut t = Tally::new("monotone_in_index");
    for m in n..=max {
        let nondecreasing = (0..n).all(|i| u.get(i, m) >= u.get(i, m - 1));
        let strict = (0..n).any(|i| u.get(i, m) > u.get(i, m - 1));
        t.check(nondecreasing && strict, || format!("m={m}"));
    }
    checks.push(t.finish());

    let mut t = Tally::new("some_entry_positive");
    for m in 0..=max {
        t.check((0..n).any(|i| *u.get(i, m) >= BigInt::one()), || format!("m={m}"));
    }
    checks.push(t.finish());

    let mut t = Tally::new("ordered_within_column");
    for m in n - 1..=max {
        for i in 2..n {
            t.check(u.get(i, m) >= u.get(i - 1, m), || {
                format!("m={m}: u_{i}={} < u_{}={}", u.get(i, m), i - 1, u.get(i - 1, m))
            });
        }
        t.check(u.get(n - 1, m) >= u.get(0, m), || format!("m={m}: u_(n-1) < u_0"));
    }
    checks.push(t.finish());

    let shape_ok = c[0] == 1 && (1..n - 1).all(|i| c[i] <= c[i + 1]);
    let mut bound = Tally::new("lagged_sum_bound");
    let mut strict = Tally::new("lagged_sum_strict_index");
    let mut strict0 = Tally::new("lagged_sum_strict_index_from_zero");
    if shape_ok {
        for m in n..=max {
            for j in 1..n {
                let lhs: Vec<BigInt> = (0..n).map(|i| lagged_sum(c, &u, i, j, m)).collect();
                for (i, l) in lhs.iter().enumerate() {
                    bound.check(*l <= u.get(i, m) + 1, || format!("m={m} j={j} i={i}"));
                }
                let top_equal = (0..n).filter(|&i| lhs[i] == u.get(i, m) + 1).max();
                let strict_at = |from: usize| {
                    (from..n)
                        .filter(|&i| top_equal.is_none_or(|e| i > e))
                        .any(|i| lhs[i] < *u.get(i, m))
                };
                strict.check(strict_at(1), || format!("m={m} j={j}"));
                strict0.check(strict_at(0), || format!("m={m} j={j}"));
            }
        }
    }
    checks.push(bound.finish());
    checks.push(strict.finish());
    checks.push(strict0.finish());

    Ok(RecurrenceReport {
        n,
        c: c.to_vec(),
        max_index: max,
        checks,
    })
}

/// The example showing the stronger lagged-sum bound needs its side
/// condition: `c_0 = c_{n-1} = 1`, other `c_i = 0`, `i = n - 2`,
/// `j = n - 1`, `m = 2n - 3` gives `u_{i,m} = 0` against a left side of 1.
pub fn sharpness_witness(n: usize) -> Result<Check> {
    let mut c = vec![0u64; n];
    c[0] = 1;
    c[n - 1] = 1;
    let (i, j, m) = if n >= 3 { (n - 2, n - 1, 2 * n - 3) } else { (0, 1, 1) };
    let u = recurrence_table(&c, n, m.max(n))?;
    let lhs = lagged_sum(&c, &u, i, j, m);
    let passed = u.get(i, m).is_zero() && lhs == BigInt::one();
    Ok(Check {
        name: "lagged_sum_sharpness".into(),
        passed,
        detail: Some(format!("n={n} i={i} j={j} m={m}: u={} lhs={lhs}", u.get(i, m))),
    })
}

/// Bounds of `sum_{j<i} a_j w^{j-i}` for `w` in the positive interval `(lo, hi)`.
fn partial_sum_bounds(a: &[BigInt], i: usize, w: &Interval) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (j, aj) in a.iter().enumerate().take(i) {
        let e = (i - j) as i32;
        let aj = BigRational::from(aj.clone());
        lo += &aj / w.hi().pow(e);
        hi += &aj / w.lo().pow(e);
    }
    (lo, hi)
}

/// Root location and partial-sum bounds for
/// `g = X^n - a_{n-1} X^{n-1} - ... - a_0` of the required shape.
pub fn root_location_checks(g: &IntPoly) -> Result<Vec<Check>> {
    let a = shape_coefficients(g)?;
    let n = a.len();
    let top = a[n - 1].clone();
    let chain = sturm_chain(g);
    let nonneg = chain.count_above(&BigRational::zero()) + g.coeff(0).is_zero() as usize;
    let lo = BigRational::from(top.clone());
    let hi = BigRational::from(&top + 1);
    let inside = chain.count(&lo, &hi);
    let hi_is_root = g.sign_at(&hi) == num_bigint::Sign::NoSign;
    let mut checks = vec![
        Check {
            name: "unique_nonnegative_root".into(),
            passed: nonneg == 1,
            detail: Some(format!("{nonneg} non-negative roots")),
        },
        Check {
            name: "root_bracket".into(),
            passed: inside == 1 && !hi_is_root,
            detail: None,
        },
    ];

    // certified interval evaluation, refining w until every bound is decided
    let mut w = Interval::new(lo.clone(), hi.clone())?;
    let mut undecided: Vec<usize> = (1..n).collect();
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let mut failed = Vec::new();
    for _ in 0..200 {
        undecided.retain(|&i| {
            let (l, h) = partial_sum_bounds(&a, i, &w);
            if l > zero && h < one {
                return false;
            }
            if h <= zero || l >= one {
                failed.push(i);
                return false;
            }
            true
        });
        if undecided.is_empty() {
            break;
        }
        let mid = w.midpoint();
        w = if g.sign_at(&mid) == g.sign_at(w.lo()) {
            Interval::new(mid, w.hi().clone())?
        } else {
            Interval::new(w.lo().clone(), mid)?
        };
    }
    failed.extend(undecided);
    checks.push(Check {
        name: "partial_sums_in_unit_interval".into(),
        passed: failed.is_empty(),
        detail: (!failed.is_empty()).then(|| format!("undecided or violated for i in {failed:?}")),
    });
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failing(c: &[u64], max: usize) -> Vec<String> {
        let r = recurrence_checks(c, c.len(), max).unwrap();
        r.failures()
            .map(|c| format!("{} {}", c.name, c.detail.as_deref().unwrap_or("")))
            .collect()
    }

    #[test]
    fn strict_index_needs_zero_when_m_equals_n() {
        // at m = n the only strict index can be i = 0
        for c in [&[1, 1][..], &[1, 0, 1], &[1, 1, 1], &[1, 1, 1, 1]] {
            let f = failing(c, 20);
            assert_eq!(f.len(), 1, "{c:?}: {f:?}");
            let n = c.len();
            assert!(f[0].starts_with("lagged_sum_strict_index 1 of"), "{f:?}");
            assert!(f[0].contains(&format!("first: m={n} j=")), "{f:?}");
        }
        assert!(failing(&[1, 1, 2], 20).is_empty());
        assert!(failing(&[1, 2, 3, 3], 20).is_empty());
    }

    #[test]
    fn witness_and_identities() {
        let r = recurrence_checks(&[1, 0, 1], 3, 20).unwrap();
        for c in &r.checks {
            assert!(c.passed || c.name == "lagged_sum_strict_index", "{c:?}");
        }
        for n in 2..7 {
            let w = sharpness_witness(n).unwrap();
            assert!(w.passed, "{w:?}");
        }
    }

    #[test]
    fn column_order_fails_when_middle_coefficients_vanish() {
        // u_{2,5} = 0 < u_{1,5} = 1 for c = (1, 0, 0, 1)
        let r = recurrence_checks(&[1, 0, 0, 1], 4, 20).unwrap();
        let failing: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failing, vec!["ordered_within_column", "lagged_sum_strict_index"]);
        let u = recurrence_table(&[1, 0, 0, 1], 4, 5).unwrap();
        assert_eq!((u.get(1, 5), u.get(2, 5)), (&BigInt::from(1), &BigInt::from(0)));
    }

    #[test]
    fn root_location() {
        let checks = root_location_checks(&IntPoly::from_i64s(&[-2, 0, -2, -2, 1])).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(root_location_checks(&IntPoly::from_i64s(&[-11, -10, 0, -11, 1])).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn random_shape_valid_polynomials(top in 1i64..40, raw in prop::collection::vec(0i64..1000, 1..6), a0 in 0i64..1000) {
                // a_{n-1} >= a_{n-2} >= ... >= a_1 >= 0 and a_{n-1} >= a_0 >= 1
                let mut mids: Vec<i64> = raw.iter().map(|r| r % (top + 1)).collect();
                mids.sort();
                let a0 = 1 + a0 % top;
                let mut coeffs = vec![-a0];
                coeffs.extend(mids.iter().map(|x| -x));
                coeffs.push(-top);
                coeffs.push(1);
                let g = IntPoly::from_i64s(&coeffs);
                for c in root_location_checks(&g).unwrap() {
                    prop_assert!(c.passed, "{:?} for {}", c, g);
                }
            }
        }
    }
}
