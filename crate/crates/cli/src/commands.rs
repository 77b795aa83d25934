use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use jpa_core::analysis::{analyze as analyze_poly, RootReport};
use jpa_core::expansion::{bit_limit_from_env, expand_with, hasse_bernstein_unit, ExpandOptions};
use jpa_core::families::{
    alpha0, default_grid, expected_unit, family_field, verify_family, Alpha0Form, FamilyMode, FamilyParams, GridSpec,
    VerificationReport,
};
use jpa_core::field::{field_new, FieldElem};
use jpa_core::par::for_each_ordered;
use jpa_core::poly::{format_rational, pretty, shape_coefficients, IntPoly, IrreducibilityVerdict, RootMode};
use jpa_core::pureroot::{conjecture_scan, scan_nth_roots, ScanOptions};
use jpa_core::record::{prepare_resume, JsonlWriter, Params, RecordStatus, ScanRecord, DEFAULT_DIGIT_LIMIT};
use jpa_core::{Error, Result};

use crate::Outcome;

pub struct Ctx {
    pub timing: bool,
    pub json: bool,
}

pub struct Sink {
    pub out: Option<PathBuf>,
    pub resume: bool,
    pub digit_limit: usize,
}

pub enum ScanKind {
    Nthroot { n: u32, from: u64, to: u64 },
    Conjecture { from: u64, to: u64 },
}

/// Where JSONL records go: a file, or stdout.
enum Records {
    File(JsonlWriter),
    Stdout,
}

impl Records {
    fn write(&mut self, r: &ScanRecord) -> Result<()> {
        match self {
            Records::File(w) => w.write(r),
            Records::Stdout => {
                let mut out = std::io::stdout().lock();
                writeln!(out, "{}", r.to_line())
                    .and_then(|_| out.flush())
                    .map_err(|e| Error::Io(e.to_string()))
            }
        }
    }
}

fn name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

/// `c0,c1,...` as a polynomial in `w`.
fn in_omega(coeffs: &str) -> String {
    match coeffs.parse::<IntPoly>() {
        Ok(p) => pretty(&p).replace('X', "w"),
        Err(_) => coeffs.to_string(),
    }
}

fn parse_poly(s: &str) -> Result<IntPoly> {
    let f: IntPoly = s.parse()?;
    if f.degree() < 1 || !f.is_monic() {
        return Err(Error::InvalidInput(format!(
            "polynomial {s} must be monic of degree >= 1"
        )));
    }
    Ok(f)
}

fn is_unit_norm(norm: &str) -> bool {
    norm == "1" || norm == "-1"
}

pub fn expand(ctx: &Ctx, poly: &str, alpha: &str, budget: usize, out: Option<&Path>) -> Result<Outcome> {
    let f = parse_poly(poly)?;
    let mode = if shape_coefficients(&f).is_ok() {
        RootMode::Shape
    } else {
        RootMode::PositiveRoot
    };
    let k = field_new(f.clone(), mode)?;
    let elems = alpha
        .split(';')
        .map(|s| FieldElem::parse(&k, s.trim()))
        .collect::<Result<Vec<_>>>()?;
    let params = Params::Expand {
        poly: f.to_string(),
        alpha: elems.iter().map(|e| e.to_string()).collect(),
        budget,
    };
    let start = Instant::now();
    let mut r = match expand_with(
        elems,
        ExpandOptions {
            budget,
            bit_limit: bit_limit_from_env(),
        },
    ) {
        Ok(o) => ScanRecord::from_outcome(params, &o, DEFAULT_DIGIT_LIMIT),
        Err(e @ Error::ResourceLimit { .. }) => ScanRecord::error(params, &e),
        Err(e) => return Err(e),
    };
    if ctx.timing {
        r.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(path) = out {
        JsonlWriter::append(path)?.write(&r)?;
    }
    if ctx.json {
        println!("{}", r.to_line());
    } else {
        println!("field: {} ({})", pretty(&f), name(&mode));
        print_record_summary(&r);
    }
    Ok(match r.status {
        RecordStatus::ResourceLimit => Outcome::ResourceLimit,
        _ if !r.findings.is_empty() => Outcome::Failed,
        _ => Outcome::Ok,
    })
}

fn print_record_summary(r: &ScanRecord) {
    let mut line = format!("status: {}", name(&r.status));
    if let (Some(l0), Some(l1)) = (r.l0, r.l1) {
        line += &format!("  l0 = {l0}  l1 = {l1}  l0+l1 = {}", l0 + l1);
    }
    line += &format!("  steps = {}", r.steps_used);
    println!("{line}");
    if let Some(u) = &r.unit_coeffs {
        println!("unit: {}", in_omega(&u.join(",")));
    }
    if let Some(nm) = &r.unit_norm {
        println!("norm: {nm}");
    }
    for f in &r.findings {
        println!("finding: {f}");
    }
}

fn family_record(p: &FamilyParams, budget: usize, rep: &VerificationReport, digit_limit: usize) -> ScanRecord {
    let params = Params::Family {
        n: p.n,
        m: p.m,
        t: p.t,
        c: p.c.clone(),
        budget,
    };
    let status = rep.status.map_or(RecordStatus::Error, RecordStatus::from);
    let mut r = ScanRecord::new(params, status);
    r.l0 = rep.l0;
    r.l1 = rep.l1;
    r.steps_used = rep.steps_used;
    r.digits = rep.digits.iter().take(digit_limit).cloned().collect();
    r.digits_truncated = rep.digits.len() > digit_limit;
    r.unit_coeffs = rep.unit.as_ref().map(|u| u.split(',').map(str::to_string).collect());
    r.unit_norm = rep.unit_norm.clone();
    r.passed = Some(rep.passed);
    r.findings = rep.findings.clone();
    for c in rep.failed_checks() {
        r.findings.push(format!(
            "check {} failed{}",
            c.name,
            c.detail.as_ref().map_or(String::new(), |d| format!(": {d}"))
        ));
    }
    r.report = Some(json!({ "mode": rep.mode, "poly": rep.poly, "root_mode": rep.root_mode, "checks": rep.checks }));
    r
}

pub fn family_verify(ctx: &Ctx, p: &FamilyParams, budget: usize) -> Result<Outcome> {
    let rep = verify_family(p, budget)?;
    if ctx.json {
        print_json(&rep);
    } else {
        println!("f = {}  ({})", in_omega(&rep.poly).replace('w', "X"), name(&rep.mode));
        let mut line = format!("status: {}", rep.status.as_ref().map_or("none".into(), name));
        if let (Some(l0), Some(l1)) = (rep.l0, rep.l1) {
            line += &format!("  l0 = {l0}  l1 = {l1}");
        }
        println!("{line}  steps = {}", rep.steps_used);
        let cycle: Vec<String> = rep
            .digits
            .iter()
            .take(rep.l1.unwrap_or(0).min(12))
            .map(|row| {
                format!(
                    "({})",
                    row.iter().map(|d| d.0.to_string()).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        if !cycle.is_empty() {
            println!("digit cycle: {}", cycle.join(" "));
        }
        if let Some(u) = &rep.unit {
            println!("epsilon = {}", in_omega(u));
        }
        if let Some(nm) = &rep.unit_norm {
            println!("norm(epsilon) = {nm}");
        }
        let failed: Vec<_> = rep.failed_checks().collect();
        println!(
            "checks: {}/{} passed",
            rep.checks.len() - failed.len(),
            rep.checks.len()
        );
        for c in failed {
            println!(
                "FAILED {}{}",
                c.name,
                c.detail.as_ref().map_or(String::new(), |d| format!(": {d}"))
            );
        }
        for f in &rep.findings {
            println!("finding: {f}");
        }
    }
    Ok(if rep.passed { Outcome::Ok } else { Outcome::Failed })
}

pub fn family_grid(ctx: &Ctx, spec: &GridSpec, budget: usize, out: Option<&Path>) -> Result<Outcome> {
    let cases = default_grid(spec);
    if cases.is_empty() {
        return Err(Error::InvalidInput("the grid is empty".into()));
    }
    let mut sink = match out {
        Some(path) => Some(Records::File(JsonlWriter::create(path)?)),
        None if ctx.json => Some(Records::Stdout),
        None => None,
    };
    let timing = ctx.timing;
    let (mut passed, mut failed) = (0usize, Vec::new());
    for_each_ordered(
        &cases,
        |p| {
            let start = Instant::now();
            let rep = verify_family(p, budget);
            (p.clone(), rep, start.elapsed().as_millis() as u64)
        },
        |(p, rep, ms)| -> Result<()> {
            let mut r = match &rep {
                Ok(rep) => family_record(&p, budget, rep, DEFAULT_DIGIT_LIMIT),
                Err(e) => ScanRecord::error(
                    Params::Family {
                        n: p.n,
                        m: p.m,
                        t: p.t,
                        c: p.c.clone(),
                        budget,
                    },
                    e,
                ),
            };
            if timing {
                r.wall_ms = Some(ms);
            }
            if r.passed == Some(true) {
                passed += 1;
            } else {
                failed.push(format!(
                    "n={} m={} t={} c={:?}: {}",
                    p.n,
                    p.m,
                    p.t,
                    p.c,
                    r.findings.join("; ")
                ));
            }
            if let Some(s) = sink.as_mut() {
                s.write(&r)?;
            }
            Ok(())
        },
    )?;
    let summary = format!("grid: {} cases, {passed} passed, {} failed", cases.len(), failed.len());
    if matches!(sink, Some(Records::Stdout)) {
        eprintln!("{summary}");
        for f in &failed {
            eprintln!("FAILED {f}");
        }
    } else {
        println!("{summary}");
        for f in &failed {
            println!("FAILED {f}");
        }
    }
    Ok(if failed.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

pub fn scan(ctx: &Ctx, kind: ScanKind, budget: usize, sink: &Sink) -> Result<Outcome> {
    let opts = ScanOptions {
        budget,
        bit_limit: bit_limit_from_env(),
        digit_limit: sink.digit_limit,
        timing: ctx.timing,
    };
    let mut done = std::collections::HashSet::new();
    let mut records = match &sink.out {
        Some(path) if sink.resume => {
            let st = prepare_resume(path)?;
            for line in &st.corrupt_lines {
                eprintln!("warning: {}: skipped corrupt line {line}", path.display());
            }
            if st.truncated_bytes > 0 {
                eprintln!(
                    "warning: {}: dropped {} bytes of a partial final line",
                    path.display(),
                    st.truncated_bytes
                );
            }
            eprintln!("resuming: {} records already present", st.records);
            done = st.done;
            Records::File(JsonlWriter::append(path)?)
        }
        Some(path) => Records::File(JsonlWriter::create(path)?),
        None => Records::Stdout,
    };
    let to_stdout = matches!(records, Records::Stdout);
    let verbose = !to_stdout && !ctx.json;
    let mut tally = std::collections::BTreeMap::<String, usize>::new();
    let mut outcome = Outcome::Ok;
    let emit = |r: ScanRecord| -> Result<()> {
        records.write(&r)?;
        *tally.entry(name(&r.status)).or_default() += 1;
        let periodic = matches!(r.status, RecordStatus::Periodic | RecordStatus::PurelyPeriodic);
        match r.status {
            RecordStatus::ResourceLimit => outcome = Outcome::ResourceLimit,
            RecordStatus::Error if outcome == Outcome::Ok => outcome = Outcome::Failed,
            _ if periodic && !r.findings.is_empty() && outcome == Outcome::Ok => outcome = Outcome::Failed,
            _ => {}
        }
        if verbose {
            let m = match &r.params {
                Params::Nthroot { m, .. } => format!("m = {m}"),
                Params::Conjecture { x, m, .. } => format!("x = {x} (m = {m})"),
                _ => String::new(),
            };
            let lens = r.l0_plus_l1().map_or(String::new(), |s| format!("  l0+l1 = {s}"));
            println!("{m}: {}{lens}", name(&r.status));
        }
        Ok(())
    };
    let skip = |p: &Params| done.contains(p);
    match kind {
        ScanKind::Nthroot { n, from, to } => scan_nth_roots(n, from, to, &opts, skip, emit)??,
        ScanKind::Conjecture { from, to } => conjecture_scan(from, to, &opts, skip, emit)??,
    }
    let parts: Vec<String> = tally.iter().map(|(k, v)| format!("{k} {v}")).collect();
    let summary = format!(
        "scan done: {}",
        if parts.is_empty() {
            "nothing to do".into()
        } else {
            parts.join(", ")
        }
    );
    if to_stdout {
        eprintln!("{summary}");
    } else if !ctx.json {
        println!("{summary}");
    }
    Ok(outcome)
}

fn print_root_report(r: &RootReport) {
    let approx = |iv: &jpa_core::poly::Interval| {
        let (lo, hi) = iv.to_f64();
        format!("{:.9}", (lo + hi) / 2.0)
    };
    println!("f = {}", in_omega(&r.poly).replace('w', "X"));
    if let Some(iv) = &r.dominant_root {
        println!("dominant root: {} ~ {iv}", approx(iv));
    }
    println!(
        "unit disk: inside {}, on circle {}, outside {}",
        r.count_inside_unit_disk, r.on_unit_circle, r.count_outside
    );
    match &r.pisot {
        Some(p) => {
            println!(
                "pisot: {:?} (counted on {})",
                p.verdict,
                in_omega(&p.factor).replace('w', "X")
            );
            if let Some(n) = &p.note {
                println!("  note: {n}");
            }
        }
        None => println!("pisot: n/a (no real root above 1)"),
    }
    let neg: Vec<String> = r
        .negative_real_roots
        .iter()
        .map(|iv| format!("{} ~ {iv}", approx(iv)))
        .collect();
    println!(
        "negative real roots: {}",
        if neg.is_empty() { "none".into() } else { neg.join(", ") }
    );
    match &r.max_nonreal_modulus {
        Some(m) => println!(
            "max non-real modulus: {} ~ {} ({})",
            approx(&m.interval),
            m.interval,
            name(&m.method)
        ),
        None => println!("max non-real modulus: no non-real roots"),
    }
    let cyc: Vec<String> = r.cyclotomic_divisors.iter().map(|d| format!("Phi_{d}")).collect();
    println!(
        "cyclotomic divisors: {}",
        if cyc.is_empty() { "none".into() } else { cyc.join(", ") }
    );
    let irr = match &r.irreducibility {
        IrreducibilityVerdict::Irreducible => "irreducible".to_string(),
        IrreducibilityVerdict::Reducible(w) => format!("reducible, factor {}", pretty(&w.0)),
        IrreducibilityVerdict::Unknown => "unknown".to_string(),
    };
    println!("irreducibility: {irr}");
    for f in &r.findings {
        println!("finding: {f}");
    }
}

pub fn analyze(ctx: &Ctx, poly: &str) -> Result<Outcome> {
    let f = parse_poly(poly)?;
    let rep = analyze_poly(&f)?;
    if ctx.json {
        print_json(&rep);
    } else {
        print_root_report(&rep);
    }
    Ok(if rep.findings.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

/// The predicted unit (for unit-constant families) against the product of
/// last coordinates over the period found by the engine.
pub fn unit(ctx: &Ctx, p: &FamilyParams, budget: usize) -> Result<Outcome> {
    let mode = p.mode()?;
    let k = family_field(p)?;
    let predicted = match mode {
        FamilyMode::UnitConstant => Some(expected_unit(p, &k)?),
        FamilyMode::ScaledConstant => None,
    };
    let out = expand_with(
        alpha0(p, &k, Alpha0Form::Sum)?,
        ExpandOptions {
            budget,
            bit_limit: bit_limit_from_env(),
        },
    )?;
    let product = match hasse_bernstein_unit(&out) {
        Ok(u) => Some(u),
        Err(Error::NotPeriodic) => None,
        Err(e) => return Err(e),
    };
    let norm = |e: &FieldElem| e.norm().map(|n| format_rational(&n));
    let predicted_norm = predicted.as_ref().map(norm).transpose()?;
    let product_norm = product.as_ref().map(norm).transpose()?;
    let matches = match (&predicted, &product) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let ok = product_norm.as_deref().is_some_and(is_unit_norm)
        && predicted_norm.as_deref().is_none_or(is_unit_norm)
        && matches != Some(false);
    if ctx.json {
        print_json(&json!({
            "params": p,
            "mode": mode,
            "predicted_unit": predicted.as_ref().map(|e| e.to_string()),
            "predicted_norm": predicted_norm,
            "status": out.status,
            "l0": out.l0,
            "l1": out.l1,
            "period_product": product.as_ref().map(|e| e.to_string()),
            "period_product_norm": product_norm,
            "matches": matches,
            "passed": ok,
        }));
    } else {
        println!("f = {}  ({})", pretty(k.poly()), name(&mode));
        if let (Some(e), Some(nm)) = (&predicted, &predicted_norm) {
            println!("epsilon = {}  norm = {nm}", in_omega(&e.to_string()));
        }
        let lens = match (out.l0, out.l1) {
            (Some(l0), Some(l1)) => format!("  l0 = {l0}  l1 = {l1}"),
            _ => String::new(),
        };
        println!("expansion: {}{lens}", name(&out.status));
        match (&product, &product_norm) {
            (Some(u), Some(nm)) => println!("period product = {}  norm = {nm}", in_omega(&u.to_string())),
            _ => println!("period product: no period within {budget} steps"),
        }
        if let Some(mt) = matches {
            println!(
                "predicted unit {} the period product",
                if mt { "equals" } else { "DIFFERS from" }
            );
        }
    }
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}
