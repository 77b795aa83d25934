//! The purely periodic families: recurrence tables, the family polynomial,
//! its starting vector, the predicted digits and unit, and closed forms for
//! every intermediate state.

mod identities;
mod verify;

pub use identities::{recurrence_checks, root_location_checks, sharpness_witness, RecurrenceReport};
pub use verify::{default_grid, verify_family, verify_grid, Check, GridSpec, VerificationReport};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{field_new, FieldElem, NumberField};
use crate::poly::{shape_coefficients, IntPoly, RootMode};

/// `(n, m, t, c_0..c_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: usize,
    pub m: usize,
    pub t: u64,
    pub c: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    /// `c_0 = 1`.
    UnitConstant,
    /// `c_0 > 1` dividing every other `c_i`.
    ScaledConstant,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.iter().map(u64::to_string).collect();
        write!(f, "n={} m={} t={} c=({})", self.n, self.m, self.t, c.join(","))
    }
}

impl FamilyParams {
    pub fn new(n: usize, m: usize, t: u64, c: &[u64]) -> Self {
        FamilyParams { n, m, t, c: c.to_vec() }
    }

    /// Checks the parameter constraints and reports which statement applies.
    pub fn mode(&self) -> Result<FamilyMode> {
        let bad = |msg: String| Err(Error::ShapeViolation(format!("{self}: {msg}")));
        let n = self.n;
        if n < 2 || self.c.len() != n {
            return bad(format!("need n >= 2 and exactly n coefficients, got {}", self.c.len()));
        }
        if self.m < n {
            return bad("need m >= n".into());
        }
        if self.t < 1 {
            return bad("need t >= 1".into());
        }
        let c = &self.c;
        if c[0] < 1 || c[n - 1] < c[0] {
            return bad("need c_{n-1} >= c_0 >= 1".into());
        }
        if (1..n - 1).any(|i| c[i] > c[i + 1]) {
            return bad("need c_{n-1} >= ... >= c_1 >= 0".into());
        }
        if c[0] == 1 {
            Ok(FamilyMode::UnitConstant)
        } else if c.iter().all(|&ci| ci % c[0] == 0) {
            Ok(FamilyMode::ScaledConstant)
        } else {
            bad("c_0 > 1 must divide every c_i".into())
        }
    }

    pub fn c_big(&self, i: usize) -> BigInt {
        BigInt::from(self.c[i])
    }
}

/// `u[i][k]` for `0 <= i < n`, `0 <= k <= max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceTable {
    n: usize,
    u: Vec<Vec<BigInt>>,
}

impl RecurrenceTable {
    pub fn get(&self, i: usize, k: usize) -> &BigInt {
        &self.u[i][k]
    }

    /// `(u_{0,k}, ..., u_{n-1,k})`.
    pub fn column(&self, k: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.u[i][k].clone()).collect()
    }

    pub fn max_index(&self) -> usize {
        self.u[0].len() - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Kronecker-delta initial block followed by
/// `u_{i,k} = c_{n-1} u_{i,k-1} + ... + c_0 u_{i,k-n}`.
pub fn recurrence_table(c: &[u64], n: usize, max: usize) -> Result<RecurrenceTable> {
    if n < 1 || c.len() != n || max + 1 < n {
        return Err(Error::InvalidInput(format!(
            "recurrence needs n coefficients and max >= n - 1 (n = {n}, {} coefficients, max = {max})",
            c.len()
        )));
    }
    let u = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..n).map(|k| BigInt::from((i == k) as u8)).collect();
            for k in n..=max {
                let v = (0..n).fold(BigInt::zero(), |acc, j| acc + &row[k - n + j] * c[j]);
                row.push(v);
            }
            row
        })
        .collect();
    Ok(RecurrenceTable { n, u })
}

pub fn table_for(p: &FamilyParams) -> Result<RecurrenceTable> {
    recurrence_table(&p.c, p.n, p.m)
}

/// `a_i = u_{i,m} t + c_i`.
pub fn family_coefficients(p: &FamilyParams) -> Result<Vec<BigInt>> {
    p.mode()?;
    let u = table_for(p)?;
    Ok((0..p.n).map(|i| u.get(i, p.m) * p.t + p.c[i]).collect())
}

/// `X^n - a_{n-1} X^{n-1} - ... - a_0`.
pub fn family_poly(p: &FamilyParams) -> Result<IntPoly> {
    p.mode()?;
    recurrence_poly(&p.c, p.m, p.t)
}

/// The same construction without the coefficient-shape checks, for
/// probing what happens outside the valid parameter range.
pub fn recurrence_poly(c: &[u64], m: usize, t: u64) -> Result<IntPoly> {
    let n = c.len();
    let u = recurrence_table(c, n, m.max(n))?;
    let mut coeffs: Vec<BigInt> = (0..n).map(|i| -(u.get(i, m) * t + c[i])).collect();
    coeffs.push(BigInt::from(1));
    Ok(IntPoly::new(coeffs))
}

/// Field over the family polynomial. The dominant-root bracket comes from
/// the coefficient shape when it applies; otherwise (the shape can fail
/// for some valid parameters, e.g. `c = (1, 0, 0, 1)`) the unique positive
/// root is isolated by Sturm counting, which Descartes' rule guarantees.
pub fn family_field(p: &FamilyParams) -> Result<Arc<NumberField>> {
    let f = family_poly(p)?;
    let mode = if shape_coefficients(&f).is_ok() {
        RootMode::Shape
    } else {
        RootMode::PositiveRoot
    };
    field_new(f, mode)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alpha0Form {
    /// `alpha_i = sum_{j <= i} a_j w^{j-i}`.
    Sum,
    /// `alpha_i = w^{n-i} - sum_{j > i} a_j w^{j-i}`.
    Nested,
}

fn check_field(p: &FamilyParams, k: &Arc<NumberField>) -> Result<()> {
    if k.poly() != &family_poly(p)? {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Powers `w^0, w^-1, ..., w^-(n-1)`, inverting `w` once.
fn inverse_powers(k: &Arc<NumberField>) -> Result<Vec<FieldElem>> {
    let wi = k.omega().inv()?;
    let mut out = vec![k.one()];
    for i in 1..k.degree() {
        out.push(&out[i - 1] * &wi);
    }
    Ok(out)
}

fn positive_powers(k: &Arc<NumberField>) -> Vec<FieldElem> {
    let w = k.omega();
    let mut out = vec![k.one()];
    for i in 1..=k.degree() {
        out.push(&out[i - 1] * &w);
    }
    out
}

fn lin(coeffs: &[BigInt], basis: &[FieldElem], k: &Arc<NumberField>) -> FieldElem {
    coeffs
        .iter()
        .zip(basis)
        .filter(|(c, _)| !c.is_zero())
        .fold(k.zero(), |acc, (c, b)| &acc + &b.scale(&c.clone().into()))
}

/// The starting vector `(alpha_1, ..., alpha_{n-1})`.
pub fn alpha0(p: &FamilyParams, k: &Arc<NumberField>, form: Alpha0Form) -> Result<Vec<FieldElem>> {
    check_field(p, k)?;
    let a = family_coefficients(p)?;
    let n = p.n;
    match form {
        Alpha0Form::Sum => {
            let inv = inverse_powers(k)?;
            Ok((1..n)
                .map(|i| {
                    let terms: Vec<BigInt> = (0..=i).rev().map(|j| a[j].clone()).collect();
                    // a_i w^0 + a_{i-1} w^-1 + ... + a_0 w^-i
                    lin(&terms, &inv, k)
                })
                .collect())
        }
        Alpha0Form::Nested => {
            let pw = positive_powers(k);
            Ok((1..n)
                .map(|i| {
                    let mut coeffs = vec![BigInt::zero(); n + 1];
                    coeffs[n - i] += 1;
                    for j in i + 1..n {
                        coeffs[j - i] -= &a[j];
                    }
                    lin(&coeffs, &pw, k)
                })
                .collect())
        }
    }
}

/// The predicted digit rows `a^(0), ..., a^(m-1)`.
pub fn expected_digit_cycle(p: &FamilyParams) -> Result<Vec<Vec<BigInt>>> {
    let a = family_coefficients(p)?;
    let (n, m) = (p.n, p.m);
    Ok((0..m)
        .map(|nu| {
            (1..n)
                .map(|i| {
                    let tail = nu == 0 || (nu >= m - n + 2 && i > m - nu);
                    if tail {
                        a[i].clone()
                    } else {
                        p.c_big(i)
                    }
                })
                .collect()
        })
        .collect())
}

/// `u_{n-1,m} w^{n-1} + ... + u_{1,m} w + u_{0,m}`.
pub fn expected_unit(p: &FamilyParams, k: &Arc<NumberField>) -> Result<FieldElem> {
    check_field(p, k)?;
    let u = table_for(p)?;
    Ok(k.from_poly(&IntPoly::new(u.column(p.m))))
}

/// Which closed-form display produced a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// The `t`-free expression for the first step.
    FirstStep,
    /// The induction formula over the middle block of steps.
    Induction,
    /// The piecewise expression for the last `n - 1` steps.
    Tail,
}

fn quotient(num: Vec<BigInt>, den: Vec<BigInt>, k: &Arc<NumberField>) -> Result<FieldElem> {
    let d = k.from_poly(&IntPoly::new(den));
    k.from_poly(&IntPoly::new(num)).checked_div(&d)
}

fn first_step_form(p: &FamilyParams, u: &RecurrenceTable, k: &Arc<NumberField>) -> Result<Vec<FieldElem>> {
    let (n, m) = (p.n, p.m);
    let den: Vec<BigInt> = u.column(m - 1).into_iter().map(|x| x * p.c[0]).collect();
    (1..n)
        .map(|i| {
            let num = (0..n)
                .map(|kk| (0..=i).map(|j| u.get(kk, m - 1 - i + j) * p.c[j]).sum())
                .collect();
            quotient(num, den.clone(), k)
        })
        .collect()
}

fn induction_form(p: &FamilyParams, u: &RecurrenceTable, k: &Arc<NumberField>, nu: usize) -> Result<Vec<FieldElem>> {
    let (n, m) = (p.n, p.m);
    let r = m - nu;
    (1..n)
        .map(|i| {
            let num = (0..n)
                .map(|kk| {
                    let mut s = u.get(kk, r) * p.c[i] + u.get(kk, r - i) * p.c[0];
                    for j in 1..i {
                        s += u.get(kk, r - i + j) * p.c[j];
                    }
                    s
                })
                .collect();
            quotient(num, u.column(r), k)
        })
        .collect()
}

fn tail_form(p: &FamilyParams, k: &Arc<NumberField>, nu: usize) -> Result<Vec<FieldElem>> {
    let (n, m) = (p.n, p.m);
    let a = family_coefficients(p)?;
    let inv = inverse_powers(k)?;
    let pw = positive_powers(k);
    Ok((1..n)
        .map(|i| {
            if i <= m - nu {
                // w^-i + sum_{j=1}^{i} c_j w^{j-i}
                let mut coeffs = vec![BigInt::zero(); i + 1];
                coeffs[i] += 1;
                for j in 1..=i {
                    coeffs[i - j] += p.c[j];
                }
                lin(&coeffs, &inv, k)
            } else {
                let mut coeffs = vec![BigInt::zero(); n + 1];
                coeffs[n - i] += 1;
                for j in i + 1..n {
                    coeffs[j - i] -= &a[j];
                }
                lin(&coeffs, &pw, k)
            }
        })
        .collect())
}

/// Every closed form that applies at step `nu`, for `1 <= nu <= m - 1`.
///
/// The first-step form is valid for any `c_0`; the other two assume `c_0 = 1`.
pub fn closed_form_variants(
    p: &FamilyParams,
    k: &Arc<NumberField>,
    nu: usize,
) -> Result<Vec<(ClosedForm, Vec<FieldElem>)>> {
    check_field(p, k)?;
    let (n, m) = (p.n, p.m);
    if nu < 1 || nu >= m {
        return Err(Error::InvalidInput(format!(
            "closed forms cover 1 <= nu <= {}, got {nu}",
            m - 1
        )));
    }
    let u = table_for(p)?;
    let mut out = Vec::new();
    if nu == 1 {
        out.push((ClosedForm::FirstStep, first_step_form(p, &u, k)?));
    }
    if p.mode()? == FamilyMode::UnitConstant {
        if nu + n <= m + 1 {
            out.push((ClosedForm::Induction, induction_form(p, &u, k, nu)?));
        }
        if nu + n > m {
            out.push((ClosedForm::Tail, tail_form(p, k, nu)?));
        }
    }
    Ok(out)
}

/// The state at step `nu` from the closed form that governs that step.
pub fn closed_form_state(p: &FamilyParams, k: &Arc<NumberField>, nu: usize) -> Result<Vec<FieldElem>> {
    let mut v = closed_form_variants(p, k, nu)?;
    let pick = if nu + p.n > p.m { v.len() - 1 } else { 0 };
    Ok(v.swap_remove(pick).1)
}

/// `lcm(m, n)`, the period predicted when `c_0 > 1`.
pub fn scaled_period(p: &FamilyParams) -> usize {
    p.m.lcm(&p.n)
}
