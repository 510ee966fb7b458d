//! CNF conversion and simplification checked against exhaustive truth tables.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satrl_core::{Assignment, CnfFormula};
use satrl_logic::{simplify_cnf, to_cnf, ConvertError, LogicalExpr, SymbolTable};

const NAMES: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

fn arb_expr() -> impl Strategy<Value = LogicalExpr> {
    let leaf = prop::sample::select(NAMES.to_vec()).prop_map(LogicalExpr::atom);
    // Depth bound 5 counts the leaf level.
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(LogicalExpr::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(LogicalExpr::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(LogicalExpr::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LogicalExpr::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LogicalExpr::iff(a, b)),
        ]
    })
}

/// Every assignment to the table's variables, paired with the matching name lookup.
fn for_each_assignment(st: &SymbolTable, mut f: impl FnMut(&Assignment, &dyn Fn(&str) -> bool)) {
    let k = st.len();
    for mask in 0u32..(1 << k) {
        let bits: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let a = Assignment::from_bools(&bits);
        let lookup = |name: &str| bits[st.get(name).unwrap() as usize - 1];
        f(&a, &lookup);
    }
}

fn total_literals(f: &CnfFormula) -> usize {
    f.clauses().iter().map(|c| c.len()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn conversion_and_simplification_preserve_truth_table(e in arb_expr()) {
        prop_assert!(e.depth() <= 5);
        let mut st = SymbolTable::new();
        let raw = match to_cnf(&e, &mut st) {
            Ok(f) => f,
            Err(ConvertError::BlowupExceeded { .. }) => return Err(TestCaseError::reject("blowup")),
        };
        prop_assert_eq!(st.len(), e.atoms().len());
        let simple = simplify_cnf(&raw);
        for_each_assignment(&st, |a, lookup| {
            let want = e.eval(&lookup);
            assert_eq!(raw.is_satisfied_by(a), want, "to_cnf differs on {e}");
            assert_eq!(simple.is_satisfied_by(a), want, "simplify_cnf differs on {e}");
        });
    }

    #[test]
    fn simplification_is_idempotent_and_shrinking(e in arb_expr()) {
        let mut st = SymbolTable::new();
        let Ok(raw) = to_cnf(&e, &mut st) else { return Err(TestCaseError::reject("blowup")) };
        let once = simplify_cnf(&raw);
        prop_assert_eq!(&simplify_cnf(&once), &once);
        prop_assert!(once.num_clauses() <= raw.num_clauses());
        prop_assert!(total_literals(&once) <= total_literals(&raw));
        prop_assert_eq!(once.num_vars(), raw.num_vars());
    }

    #[test]
    fn symbol_table_is_deterministic(es in prop::collection::vec(arb_expr(), 1..4)) {
        let a = SymbolTable::from_exprs(&es);
        let b = SymbolTable::from_exprs(&es);
        prop_assert_eq!(&a, &b);
        let indices: Vec<u32> = a.iter().map(|(v, _)| v).collect();
        prop_assert_eq!(indices, (1..=a.len() as u32).collect::<Vec<_>>());
    }
}

/// Above 12 variables the equivalence is sampled with random assignments.
#[test]
fn simplification_preserves_models_on_wide_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let n = 24;
        let clauses: Vec<Vec<i64>> = (0..60)
            .map(|_| {
                (0..rng.random_range(1..=5))
                    .map(|_| {
                        let v = rng.random_range(1..=n as i64);
                        if rng.random_bool(0.5) { -v } else { v }
                    })
                    .collect()
            })
            .chain((0..10).map(|_| vec![1, -1]))
            .collect();
        let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
        let f = CnfFormula::from_dimacs_clauses(n, &refs).unwrap();
        let s = simplify_cnf(&f);
        for _ in 0..2000 {
            let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let a = Assignment::from_bools(&bits);
            assert_eq!(f.is_satisfied_by(&a), s.is_satisfied_by(&a));
        }
    }
}
