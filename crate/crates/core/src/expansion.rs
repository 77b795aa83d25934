//! The Jacobi-Perron stepper with exact cycle detection.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElem;

/// Default per-coefficient bit budget; `JPA_BIT_LIMIT` overrides it.
pub const DEFAULT_BIT_LIMIT: u64 = 1_000_000;

/// Bit limit from `JPA_BIT_LIMIT`, falling back to [`DEFAULT_BIT_LIMIT`].
pub fn bit_limit_from_env() -> u64 {
    std::env::var("JPA_BIT_LIMIT")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BIT_LIMIT)
}

/// The vector `(alpha_1, ..., alpha_{n-1})` at step `step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JpaState {
    pub alphas: Vec<FieldElem>,
    pub step: usize,
}

impl JpaState {
    pub fn new(alphas: Vec<FieldElem>) -> Result<Self> {
        let first = alphas
            .first()
            .ok_or_else(|| Error::InvalidInput("empty starting vector".into()))?;
        let field = first.field();
        if alphas.iter().any(|a| !a.field().same_field(field)) {
            return Err(Error::FieldMismatch);
        }
        Ok(JpaState { alphas, step: 0 })
    }

    pub fn max_bits(&self) -> u64 {
        self.alphas.iter().map(FieldElem::max_bits).max().unwrap_or(0)
    }
}

/// Result of one application of the JPA map.
#[derive(Clone, Debug)]
pub enum Step {
    Next {
        digits: Vec<BigInt>,
        next: JpaState,
    },
    /// `alpha_1` is an integer, so the map is undefined.
    Terminated {
        digits: Vec<BigInt>,
    },
}

/// One JPA step: floors of every coordinate, then
/// `((alpha_2 - a_2) / (alpha_1 - a_1), ..., 1 / (alpha_1 - a_1))`.
pub fn jpa_step(s: &JpaState) -> Result<Step> {
    let digits = s.alphas.iter().map(FieldElem::floor).collect::<Result<Vec<_>>>()?;
    let d = s.alphas[0].sub_integer(&digits[0]);
    if d.is_zero() {
        return Ok(Step::Terminated { digits });
    }
    let inv = d.inv()?;
    let mut alphas: Vec<FieldElem> = s.alphas[1..]
        .iter()
        .zip(&digits[1..])
        .map(|(a, k)| &a.sub_integer(k) * &inv)
        .collect();
    alphas.push(inv);
    Ok(Step::Next {
        digits,
        next: JpaState {
            alphas,
            step: s.step + 1,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    PurelyPeriodic,
    Periodic,
    Terminated,
    BudgetExhausted,
}

impl Status {
    pub fn is_periodic(self) -> bool {
        matches!(self, Status::PurelyPeriodic | Status::Periodic)
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionOutcome {
    pub status: Status,
    /// Preperiod length; set iff periodic.
    pub l0: Option<usize>,
    /// Period length; set iff periodic.
    pub l1: Option<usize>,
    /// `a^(v)` for `v < l0 + l1` when periodic, otherwise every computed step.
    pub digits: Vec<Vec<BigInt>>,
    /// States `l0 ..= l0 + l1 - 1` when periodic.
    pub period_states: Vec<JpaState>,
    pub steps_used: usize,
    /// Largest coefficient size met along the way.
    pub max_bits: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct ExpandOptions {
    pub budget: usize,
    pub bit_limit: u64,
}

impl ExpandOptions {
    pub fn new(budget: usize) -> Self {
        ExpandOptions {
            budget,
            bit_limit: bit_limit_from_env(),
        }
    }
}

/// Expands until the first repeated state, termination, or the budget.
pub fn expand(alpha0: Vec<FieldElem>, budget: usize) -> Result<ExpansionOutcome> {
    expand_with(alpha0, ExpandOptions::new(budget))
}

pub fn expand_with(alpha0: Vec<FieldElem>, opts: ExpandOptions) -> Result<ExpansionOutcome> {
    if opts.budget == 0 {
        return Err(Error::InvalidInput("budget must be at least 1".into()));
    }
    let mut state = JpaState::new(alpha0)?;
    // hashing and equality ignore the field's cached root bracket
    #[allow(clippy::mutable_key_type)]
    let mut seen: HashMap<Vec<FieldElem>, usize> = HashMap::new();
    let mut states = vec![state.clone()];
    let mut digits = Vec::new();
    let mut max_bits = state.max_bits();
    seen.insert(state.alphas.clone(), 0);
    while digits.len() < opts.budget {
        match jpa_step(&state)? {
            Step::Terminated { digits: d } => {
                digits.push(d);
                let steps_used = digits.len();
                return Ok(ExpansionOutcome {
                    status: Status::Terminated,
                    l0: None,
                    l1: None,
                    digits,
                    period_states: Vec::new(),
                    steps_used,
                    max_bits,
                });
            }
            Step::Next { digits: d, next } => {
                digits.push(d);
                let bits = next.max_bits();
                max_bits = max_bits.max(bits);
                if bits > opts.bit_limit {
                    return Err(Error::ResourceLimit {
                        bits,
                        limit: opts.bit_limit,
                    });
                }
                let nu = next.step;
                if let Some(&mu) = seen.get(&next.alphas) {
                    let status = if mu == 0 {
                        Status::PurelyPeriodic
                    } else {
                        Status::Periodic
                    };
                    return Ok(ExpansionOutcome {
                        status,
                        l0: Some(mu),
                        l1: Some(nu - mu),
                        digits,
                        period_states: states.split_off(mu),
                        steps_used: nu,
                        max_bits,
                    });
                }
                seen.insert(next.alphas.clone(), nu);
                states.push(next.clone());
                state = next;
            }
        }
    }
    let steps_used = digits.len();
    Ok(ExpansionOutcome {
        status: Status::BudgetExhausted,
        l0: None,
        l1: None,
        digits,
        period_states: Vec::new(),
        steps_used,
        max_bits,
    })
}

/// Product of the last coordinates over one period.
pub fn hasse_bernstein_unit(out: &ExpansionOutcome) -> Result<FieldElem> {
    if !out.status.is_periodic() {
        return Err(Error::NotPeriodic);
    }
    let mut it = out.period_states.iter().map(|s| s.alphas.last().expect("n >= 2"));
    let first = it.next().ok_or(Error::NotPeriodic)?.clone();
    Ok(it.fold(first, |acc, a| &acc * a))
}

/// Runs `k` steps from `s`, failing on termination.
pub fn advance(s: &JpaState, k: usize) -> Result<JpaState> {
    let mut cur = s.clone();
    for _ in 0..k {
        cur = match jpa_step(&cur)? {
            Step::Next { next, .. } => next,
            Step::Terminated { .. } => return Err(Error::NotPeriodic),
        };
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_new;
    use crate::poly::{IntPoly, RootMode};
    use num_rational::BigRational;

    fn digits(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn quadratic_cycle_and_unit() {
        let k = field_new(IntPoly::from_i64s(&[-2, -3, 1]), RootMode::Shape).unwrap();
        let out = expand(vec![k.omega()], 50).unwrap();
        assert_eq!(out.status, Status::PurelyPeriodic);
        assert_eq!((out.l0, out.l1), (Some(0), Some(3)));
        assert_eq!(out.digits, digits(&[&[3], &[1], &[1]]));
        let eps = hasse_bernstein_unit(&out).unwrap();
        assert_eq!(eps, k.from_ints(&[1, 2]).unwrap());
        assert_eq!(eps.norm().unwrap().numer().magnitude(), &1u32.into());
    }

    #[test]
    fn family_cubic_cycle() {
        // f = X^3 - 2X^2 - X - 2, alpha = (1 + 2/w, 2 + 1/w + 2/w^2)
        let k = field_new(IntPoly::from_i64s(&[-2, -1, -2, 1]), RootMode::Shape).unwrap();
        let wi = k.omega().inv().unwrap();
        let wi2 = &wi * &wi;
        let two = BigRational::from(BigInt::from(2));
        let a1 = wi.scale(&two).add_rational(&BigRational::from(BigInt::from(1)));
        let a2 = (&wi + &wi2.scale(&two)).add_rational(&two);
        let out = expand(vec![a1, a2], 100).unwrap();
        assert_eq!(out.status, Status::PurelyPeriodic);
        assert_eq!(out.l1, Some(4));
        assert_eq!(out.digits, digits(&[&[1, 2], &[0, 1], &[0, 1], &[0, 2]]));
        assert_eq!(hasse_bernstein_unit(&out).unwrap(), k.from_ints(&[1, 1, 1]).unwrap());
    }

    #[test]
    fn cube_root_of_17() {
        let k = field_new(IntPoly::from_i64s(&[-17, 0, 0, 1]), RootMode::PositiveRoot).unwrap();
        let w = k.omega();
        let out = expand(vec![w.clone(), &w * &w], 200).unwrap();
        assert_eq!(out.status, Status::Periodic);
        assert_eq!(out.l0.unwrap() + out.l1.unwrap(), 93);
        let eps = hasse_bernstein_unit(&out).unwrap();
        assert_eq!(eps.norm().unwrap().numer().magnitude(), &1u32.into());
        // replay returns to the first period state
        let start = &out.period_states[0];
        let back = advance(start, out.l1.unwrap()).unwrap();
        assert_eq!(back.alphas, start.alphas);
    }

    #[test]
    fn rational_first_coordinate_terminates() {
        let k = field_new(IntPoly::from_i64s(&[-2, -1, -2, 1]), RootMode::Shape).unwrap();
        let out = expand(vec![k.from_ints(&[3]).unwrap(), k.omega()], 10).unwrap();
        assert_eq!(out.status, Status::Terminated);
        assert_eq!(out.digits, digits(&[&[3, 2]]));
        assert_eq!((out.l0, out.l1), (None, None));
    }

    #[test]
    fn budget_and_bit_guard() {
        let k = field_new(IntPoly::from_i64s(&[-4, 0, 0, 1]), RootMode::PositiveRoot).unwrap();
        let w = k.omega();
        let out = expand(vec![w.clone(), &w * &w], 30).unwrap();
        assert_eq!(out.status, Status::BudgetExhausted);
        assert_eq!((out.steps_used, out.digits.len()), (30, 30));
        assert!(hasse_bernstein_unit(&out).is_err());
        let err = expand_with(
            vec![w.clone(), &w * &w],
            ExpandOptions {
                budget: 500,
                bit_limit: 64,
            },
        );
        assert!(matches!(err, Err(Error::ResourceLimit { limit: 64, .. })));
        assert!(expand(vec![w], 0).is_err());
    }

    #[test]
    fn deterministic() {
        let k = field_new(IntPoly::from_i64s(&[-5, 0, 0, 1]), RootMode::PositiveRoot).unwrap();
        let w = k.omega();
        let a = expand(vec![w.clone(), &w * &w], 150).unwrap();
        let b = expand(vec![w.clone(), &w * &w], 150).unwrap();
        assert_eq!((a.status, a.l0, a.l1, &a.digits), (b.status, b.l0, b.l1, &b.digits));
    }
}
