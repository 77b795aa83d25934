//! Text and JSONL round trips.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use jpa_core::field::{field_new, FieldElem};
use jpa_core::json::Int;
use jpa_core::poly::{IntPoly, Interval, RootMode};
use jpa_core::record::{prepare_resume, read_records, JsonlWriter, Params, RecordStatus, ScanRecord};

fn big() -> impl Strategy<Value = BigInt> {
    prop_oneof![
        any::<i64>().prop_map(BigInt::from),
        (any::<i64>(), any::<u64>()).prop_map(|(a, b)| (BigInt::from(a) << 64) + b),
    ]
}

fn record() -> impl Strategy<Value = ScanRecord> {
    let params = prop_oneof![
        (2u32..9, 2u64..10_000, 1usize..5000).prop_map(|(n, m, budget)| Params::Nthroot { n, m, budget }),
        (2u64..100, 1usize..5000).prop_map(|(x, budget)| Params::Conjecture {
            x,
            m: x * x * x - x,
            budget
        }),
        (prop::collection::vec(0u64..4, 2..5), 1u64..9).prop_map(|(c, t)| Params::Family {
            n: c.len(),
            m: c.len() + 2,
            t,
            c,
            budget: 100
        }),
    ];
    (
        params,
        prop::collection::vec(prop::collection::vec(big(), 2), 0..6),
        proptest::option::of(0usize..50),
        any::<bool>(),
    )
        .prop_map(|(params, digits, l1, trunc)| {
            let mut r = ScanRecord::new(
                params,
                if l1.is_some() {
                    RecordStatus::Periodic
                } else {
                    RecordStatus::BudgetExhausted
                },
            );
            r.l0 = l1.map(|_| 3);
            r.l1 = l1;
            r.steps_used = digits.len();
            r.digits = digits
                .into_iter()
                .map(|row| row.into_iter().map(Int).collect())
                .collect();
            r.digits_truncated = trunc;
            r.unit_coeffs = l1.map(|_| vec!["-7/3".into(), "123456789012345678901234567890".into()]);
            r.findings = vec!["a \"quoted\" finding".into()];
            r
        })
}

proptest! {
    #[test]
    fn poly_text(c in prop::collection::vec(big(), 1..8)) {
        let p = IntPoly::new(c);
        let back: IntPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn element_text(a in big(), b in big(), c in 1i64..1000, d in 1i64..1000) {
        let k = field_new(IntPoly::from_i64s(&[-2, -3, -3, 1]), RootMode::Shape).unwrap();
        let e = k.elem(&[BigRational::new(a, c.into()), BigRational::new(b, d.into()), BigRational::from(BigInt::from(c))]).unwrap();
        let back = FieldElem::parse(&k, &e.to_string()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn record_json(r in record()) {
        let line = r.to_line();
        prop_assert!(!line.contains('\n'));
        let back: ScanRecord = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(back.to_line(), line);
        prop_assert_eq!(back, r);
    }

    #[test]
    fn interval_json(a in big(), b in big(), d in 1u64..u64::MAX) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let iv = Interval::new(BigRational::new(lo, d.into()), BigRational::new(hi, d.into())).unwrap();
        let s = serde_json::to_string(&iv).unwrap();
        let back: Interval = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, iv);
    }
}

#[test]
fn large_integers_are_strings() {
    let v = serde_json::to_value(Int(BigInt::from(1) << 70)).unwrap();
    assert_eq!(v, serde_json::json!("1180591620717411303424"));
    assert_eq!(
        serde_json::to_value(Int(BigInt::from(-5))).unwrap(),
        serde_json::json!(-5)
    );
}

#[test]
fn write_resume_write() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let rec = |m| ScanRecord::new(Params::Nthroot { n: 3, m, budget: 10 }, RecordStatus::BudgetExhausted);
    let mut w = JsonlWriter::create(&path).unwrap();
    for m in 2..5 {
        w.write(&rec(m)).unwrap();
    }
    drop(w);
    let st = prepare_resume(&path).unwrap();
    assert_eq!(st.records, 3);
    let mut w = JsonlWriter::append(&path).unwrap();
    for m in 2..7 {
        if !st.done.contains(&rec(m).params) {
            w.write(&rec(m)).unwrap();
        }
    }
    drop(w);
    let (recs, corrupt) = read_records(&path).unwrap();
    assert!(corrupt.is_empty());
    assert_eq!(recs.len(), 5);
}
