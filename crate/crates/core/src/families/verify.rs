use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    alpha0, closed_form_variants, expected_digit_cycle, expected_unit, family_coefficients, family_field,
    scaled_period, Alpha0Form, FamilyMode, FamilyParams,
};
use crate::error::Result;
use crate::expansion::{expand, jpa_step, JpaState, Status, Step};
use crate::field::{FieldElem, NumberField};
use crate::json::{int_rows, Int};
use crate::poly::{format_rational, RootMode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, passed: bool, detail: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub params: FamilyParams,
    pub mode: FamilyMode,
    pub poly: String,
    pub root_mode: Option<RootMode>,
    pub status: Option<Status>,
    pub l0: Option<usize>,
    pub l1: Option<usize>,
    pub steps_used: usize,
    pub digits: Vec<Vec<Int>>,
    pub unit: Option<String>,
    pub unit_norm: Option<String>,
    pub checks: Vec<Check>,
    pub findings: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn fmt_row(r: &[BigInt]) -> String {
    let s: Vec<String> = r.iter().map(BigInt::to_string).collect();
    format!("({})", s.join(","))
}

/// The first `steps` states obtained by stepping directly.
fn direct_states(start: &[FieldElem], steps: usize) -> Result<(Vec<JpaState>, Vec<Vec<BigInt>>)> {
    let mut states = vec![JpaState::new(start.to_vec())?];
    let mut digits = Vec::new();
    for _ in 0..steps {
        match jpa_step(states.last().expect("nonempty"))? {
            Step::Next { digits: d, next } => {
                digits.push(d);
                states.push(next);
            }
            Step::Terminated { digits: d } => {
                digits.push(d);
                break;
            }
        }
    }
    Ok((states, digits))
}

struct Builder {
    checks: Vec<Check>,
    findings: Vec<String>,
}

impl Builder {
    fn check(&mut self, name: &str, passed: bool, detail: Option<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }
}

/// Runs the expansion for `p` and compares it against every prediction.
///
/// Errors only for invalid parameters; arithmetic failures (e.g. a zero
/// divisor in a reducible field) are recorded as failed checks.
pub fn verify_family(p: &FamilyParams, budget: usize) -> Result<VerificationReport> {
    let mode = p.mode()?;
    let f = super::family_poly(p)?;
    let mut report = VerificationReport {
        params: p.clone(),
        mode,
        poly: f.to_string(),
        root_mode: None,
        status: None,
        l0: None,
        l1: None,
        steps_used: 0,
        digits: Vec::new(),
        unit: None,
        unit_norm: None,
        checks: Vec::new(),
        findings: Vec::new(),
        passed: false,
    };
    let mut b = Builder {
        checks: Vec::new(),
        findings: Vec::new(),
    };
    if let Err(e) = run(p, mode, budget, &mut report, &mut b) {
        b.check("engine", false, Some(e.to_string()));
    }
    report.passed = b.checks.iter().all(|c| c.passed);
    report.checks = b.checks;
    report.findings = b.findings;
    Ok(report)
}

fn run(
    p: &FamilyParams,
    mode: FamilyMode,
    budget: usize,
    report: &mut VerificationReport,
    b: &mut Builder,
) -> Result<()> {
    let k: Arc<NumberField> = family_field(p)?;
    report.root_mode = Some(k.mode());
    if k.mode() == RootMode::PositiveRoot {
        b.findings.push(
            "coefficients do not have the non-increasing shape required for the integer root bracket; \
             root isolated by Sturm counting instead"
                .into(),
        );
    }
    let a = family_coefficients(p)?;
    let n = p.n;

    let start = alpha0(p, &k, Alpha0Form::Sum)?;
    let alt = alpha0(p, &k, Alpha0Form::Nested)?;
    b.check("alpha0_forms_agree", start == alt, None);

    // fractional parts of the starting vector lie strictly in (0, 1)
    let mut bad = Vec::new();
    for (i, al) in start.iter().enumerate() {
        let frac = al.sub_integer(&a[i + 1]);
        if frac.sign()? <= 0 || frac.sub_integer(&BigInt::one()).sign()? >= 0 {
            bad.push(i + 1);
        }
    }
    b.check(
        "initial_fractional_parts",
        bad.is_empty(),
        (!bad.is_empty()).then(|| format!("outside (0,1) for i in {bad:?}")),
    );

    let w = k.omega();
    let top = &a[n - 1];
    let lower = BigInt::from(p.t + 1) * p.c[n - 1];
    b.check(
        "root_lower_bound",
        w.sub_integer(top).sign()? > 0 && *top >= lower,
        None,
    );

    let out = expand(start.clone(), budget)?;
    report.status = Some(out.status);
    report.l0 = out.l0;
    report.l1 = out.l1;
    report.steps_used = out.steps_used;
    report.digits = int_rows(&out.digits);

    if out.status.is_periodic() {
        let eps = crate::expansion::hasse_bernstein_unit(&out)?;
        let norm = eps.norm()?;
        report.unit = Some(eps.to_string());
        report.unit_norm = Some(format_rational(&norm));
        if mode == FamilyMode::UnitConstant {
            let expect = expected_unit(p, &k)?;
            b.check(
                "unit",
                eps == expect,
                (eps != expect).then(|| format!("engine {eps}, expected {expect}")),
            );
        }
        let unit_ok = norm.is_integer() && norm.numer().abs().is_one();
        match mode {
            FamilyMode::UnitConstant => b.check("unit_norm", unit_ok, Some(format_rational(&norm))),
            FamilyMode::ScaledConstant => b.findings.push(format!("unit norm {}", format_rational(&norm))),
        }
    }

    let period = match mode {
        FamilyMode::UnitConstant => p.m,
        FamilyMode::ScaledConstant => scaled_period(p),
    };
    b.check(
        "purely_periodic",
        out.status == Status::PurelyPeriodic && out.l0 == Some(0),
        (out.status != Status::PurelyPeriodic).then(|| format!("{:?} after {} steps", out.status, out.steps_used)),
    );
    b.check(
        "period_length",
        out.l1 == Some(period),
        (out.l1 != Some(period)).then(|| format!("engine {:?}, expected {period}", out.l1)),
    );

    if mode == FamilyMode::ScaledConstant {
        // the digit pattern in this case is recorded, not asserted
        if let Some(l1) = out.l1 {
            let reps = l1 / p.m;
            b.findings
                .push(format!("period consists of {reps} blocks of length {}", p.m));
        }
        return Ok(());
    }

    let expect = expected_digit_cycle(p)?;
    let (states, digits) = direct_states(&start, p.m)?;
    let divergence = (0..p.m).find(|&nu| digits.get(nu) != expect.get(nu));
    b.check(
        "digit_cycle",
        divergence.is_none(),
        divergence.map(|nu| {
            let got = digits.get(nu).map(|r| fmt_row(r)).unwrap_or_else(|| "none".into());
            format!("step {nu}: engine {got}, expected {}", fmt_row(&expect[nu]))
        }),
    );

    let mut mismatch = None;
    'outer: for nu in 1..p.m.min(states.len()) {
        for (form, v) in closed_form_variants(p, &k, nu)? {
            if v != states[nu].alphas {
                mismatch = Some(format!("step {nu}, {form:?} form"));
                break 'outer;
            }
        }
    }
    if states.len() <= p.m && mismatch.is_none() {
        mismatch = Some(format!("engine stopped after {} steps", states.len() - 1));
    }
    b.check("closed_forms", mismatch.is_none(), mismatch);

    let back = states.get(p.m).map(|s| s.alphas == states[0].alphas).unwrap_or(false);
    b.check("state_m_equals_state_0", back, None);

    let product = states[..p.m.min(states.len())]
        .iter()
        .map(|s| s.alphas.last().expect("n >= 2").clone())
        .reduce(|acc, x| &acc * &x)
        .expect("at least one state");
    let eps = expected_unit(p, &k)?;
    b.check("telescoping_product", product == eps, None);
    Ok(())
}

/// Parameter ranges for grid verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_min: usize,
    pub n_max: usize,
    /// `m` runs over `n..=n + m_span`.
    pub m_span: usize,
    pub t_values: Vec<u64>,
    /// Upper bound on `c_{n-1}`.
    pub c_max: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_min: 2,
            n_max: 5,
            m_span: 5,
            t_values: vec![1, 2, 7],
            c_max: 3,
        }
    }
}

/// Non-decreasing `(c_1, ..., c_{n-1})` with `1 <= c_{n-1} <= cap`.
fn coefficient_tails(len: usize, cap: u64) -> Vec<Vec<u64>> {
    fn rec(len: usize, lo: u64, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            if cur.last().copied().unwrap_or(0) >= 1 {
                out.push(cur.clone());
            }
            return;
        }
        for v in lo..=cap {
            cur.push(v);
            rec(len, v, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, 0, cap, &mut Vec::new(), &mut out);
    out
}

/// Every valid parameter tuple (with `c_0 = 1`) in the grid, in a fixed order.
pub fn default_grid(spec: &GridSpec) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    for n in spec.n_min.max(2)..=spec.n_max {
        for tail in coefficient_tails(n - 1, spec.c_max) {
            let mut c = vec![1];
            c.extend(tail);
            for m in n..=n + spec.m_span {
                for &t in &spec.t_values {
                    out.push(FamilyParams { n, m, t, c: c.clone() });
                }
            }
        }
    }
    out
}

/// Verifies every case in parallel; the output order matches `cases`.
pub fn verify_grid(cases: &[FamilyParams], budget: usize) -> Vec<Result<VerificationReport>> {
    cases.par_iter().map(|p| verify_family(p, budget)).collect()
}
