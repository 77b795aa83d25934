//! Expansions of `(m^(1/n), m^(2/n), ..., m^((n-1)/n))` and scans over `m`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::expansion::{expand_with, ExpandOptions};
use crate::field::{field_new, FieldElem, NumberField};
use crate::par::for_each_ordered;
use crate::poly::{IntPoly, RootMode};
use crate::record::{Params, RecordStatus, ScanRecord};

#[derive(Clone, Debug)]
pub struct PureRootCase {
    pub m: u64,
    pub n: u32,
    pub field: Arc<NumberField>,
}

/// Exact test for `m = k^d`.
pub fn is_perfect_power(m: u64, d: u32) -> bool {
    let r = m.nth_root(d);
    // also probe r + 1 in case the root rounded down
    [r, r + 1].iter().any(|&k| BigInt::from(k).pow(d) == BigInt::from(m))
}

/// Smallest `d > 1` dividing `n` with `m` a perfect `d`-th power.
pub fn perfect_power_divisor(m: u64, n: u32) -> Option<u32> {
    (2..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| is_perfect_power(m, d))
}

/// `X^n - m`.
pub fn pure_poly(m: u64, n: u32) -> IntPoly {
    let mut c = vec![BigInt::from(0); n as usize + 1];
    c[0] = -BigInt::from(m);
    c[n as usize] = BigInt::from(1);
    IntPoly::new(c)
}

/// The field `Q[X]/(X^n - m)` and the starting vector `(w, w^2, ..., w^(n-1))`.
pub fn pure_root_alpha0(m: u64, n: u32) -> Result<(PureRootCase, Vec<FieldElem>)> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidInput(format!(
            "need m >= 2 and n >= 2, got m = {m}, n = {n}"
        )));
    }
    if let Some(power) = perfect_power_divisor(m, n) {
        return Err(Error::PerfectPower { m, n, power });
    }
    let field = field_new(pure_poly(m, n), RootMode::PositiveRoot)?;
    let w = field.omega();
    let mut alphas = vec![w.clone()];
    for _ in 2..n {
        let next = alphas.last().expect("nonempty") * &w;
        alphas.push(next);
    }
    Ok((PureRootCase { m, n, field }, alphas))
}

/// Settings shared by the scans.
#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub budget: usize,
    pub bit_limit: u64,
    pub digit_limit: usize,
    /// Record `wall_ms`; off by default so output files are reproducible.
    pub timing: bool,
}

impl ScanOptions {
    pub fn new(budget: usize) -> Self {
        let e = ExpandOptions::new(budget);
        ScanOptions {
            budget,
            bit_limit: e.bit_limit,
            digit_limit: crate::record::DEFAULT_DIGIT_LIMIT,
            timing: false,
        }
    }
}

fn run_case(params: Params, m: u64, n: u32, opts: &ScanOptions) -> ScanRecord {
    let start = std::time::Instant::now();
    let mut r = run_untimed(params, m, n, opts);
    if opts.timing {
        r.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

fn run_untimed(params: Params, m: u64, n: u32, opts: &ScanOptions) -> ScanRecord {
    let (_, alpha) = match pure_root_alpha0(m, n) {
        Ok(v) => v,
        Err(e @ Error::PerfectPower { .. }) => {
            let mut r = ScanRecord::new(params, RecordStatus::Degenerate);
            r.findings.push(e.to_string());
            return r;
        }
        Err(e) => return ScanRecord::error(params, &e),
    };
    match expand_with(
        alpha,
        ExpandOptions {
            budget: opts.budget,
            bit_limit: opts.bit_limit,
        },
    ) {
        Ok(out) => ScanRecord::from_outcome(params, &out, opts.digit_limit),
        Err(e) => ScanRecord::error(params, &e),
    }
}

/// One scan record for `m^(1/n)`.
pub fn nth_root_record(n: u32, m: u64, opts: &ScanOptions) -> ScanRecord {
    run_case(
        Params::Nthroot {
            n,
            m,
            budget: opts.budget,
        },
        m,
        n,
        opts,
    )
}

/// One scan record for `m = x^3 - x`.
pub fn conjecture_record(x: u64, opts: &ScanOptions) -> ScanRecord {
    let m = x * x * x - x;
    run_case(
        Params::Conjecture {
            x,
            m,
            budget: opts.budget,
        },
        m,
        3,
        opts,
    )
}

/// Records for `m` in `from..=to`, emitted in ascending `m`. Perfect `n`-th
/// powers are excluded; other powers give a degenerate record. `skip`
/// filters cases already done.
pub fn scan_nth_roots<E>(
    n: u32,
    from: u64,
    to: u64,
    opts: &ScanOptions,
    skip: impl Fn(&Params) -> bool,
    emit: impl FnMut(ScanRecord) -> std::result::Result<(), E>,
) -> Result<std::result::Result<(), E>> {
    if n < 2 || from < 2 || from > to || opts.budget == 0 {
        return Err(Error::InvalidInput(format!(
            "need n >= 2, 2 <= from <= to and budget >= 1 (n = {n}, from = {from}, to = {to})"
        )));
    }
    let ms: Vec<u64> = (from..=to)
        .filter(|&m| !is_perfect_power(m, n))
        .filter(|&m| {
            !skip(&Params::Nthroot {
                n,
                m,
                budget: opts.budget,
            })
        })
        .collect();
    Ok(for_each_ordered(&ms, |&m| nth_root_record(n, m, opts), emit))
}

/// Records for `m = x^3 - x`, `x` in `from..=to`, in ascending `x`.
pub fn conjecture_scan<E>(
    from: u64,
    to: u64,
    opts: &ScanOptions,
    skip: impl Fn(&Params) -> bool,
    emit: impl FnMut(ScanRecord) -> std::result::Result<(), E>,
) -> Result<std::result::Result<(), E>> {
    if from < 2 || from > to || opts.budget == 0 || to > 2_000_000 {
        return Err(Error::InvalidInput(format!(
            "need 2 <= x_from <= x_to <= 2000000 and budget >= 1 (from = {from}, to = {to})"
        )));
    }
    let xs: Vec<u64> = (from..=to)
        .filter(|&x| {
            !skip(&Params::Conjecture {
                x,
                m: x * x * x - x,
                budget: opts.budget,
            })
        })
        .collect();
    Ok(for_each_ordered(&xs, |&x| conjecture_record(x, opts), emit))
}
