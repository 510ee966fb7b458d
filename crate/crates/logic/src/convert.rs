//! Conversion to CNF by implication elimination, negation normal form and
//! distribution of disjunction over conjunction.

use std::collections::HashSet;

use satrl_core::{Clause, CnfFormula, Literal};
use thiserror::Error;

use crate::expr::LogicalExpr;
use crate::symbols::SymbolTable;

pub const DEFAULT_CLAUSE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("CNF distribution would produce more than {cap} clauses; a Tseytin encoding is needed for inputs this large")]
    BlowupExceeded { cap: usize },
}

enum Nnf {
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

/// Negation normal form of `e` (or of `¬e` when `positive` is false).
fn nnf(e: &LogicalExpr, positive: bool, st: &mut SymbolTable) -> Nnf {
    let both = |a: &LogicalExpr, pa: bool, b: &LogicalExpr, pb: bool, st: &mut SymbolTable| {
        vec![nnf(a, pa, st), nnf(b, pb, st)]
    };
    match e {
        LogicalExpr::Atom(name) => {
            let lit = Literal::positive(st.intern(name));
            Nnf::Lit(if positive { lit } else { !lit })
        }
        LogicalExpr::Not(x) => nnf(x, !positive, st),
        LogicalExpr::And(xs) | LogicalExpr::Or(xs) => {
            let children = xs.iter().map(|x| nnf(x, positive, st)).collect();
            if matches!(e, LogicalExpr::And(_)) == positive {
                Nnf::And(children)
            } else {
                Nnf::Or(children)
            }
        }
        // a → b  ≡  ¬a ∨ b;   ¬(a → b)  ≡  a ∧ ¬b
        LogicalExpr::Implies(a, b) => {
            if positive {
                Nnf::Or(both(a, false, b, true, st))
            } else {
                Nnf::And(both(a, true, b, false, st))
            }
        }
        // a ↔ b  ≡  (¬a ∨ b) ∧ (a ∨ ¬b);   ¬(a ↔ b)  ≡  (a ∨ b) ∧ (¬a ∨ ¬b)
        LogicalExpr::Iff(a, b) => {
            let (first, second) = if positive {
                (both(a, false, b, true, st), both(a, true, b, false, st))
            } else {
                (both(a, true, b, true, st), both(a, false, b, false, st))
            };
            Nnf::And(vec![Nnf::Or(first), Nnf::Or(second)])
        }
    }
}

/// Disjunction of two clauses with duplicate literals removed, or `None` when it
/// is a tautology.
fn merge(l: &[Literal], r: &[Literal]) -> Option<Vec<Literal>> {
    let mut c = l.to_vec();
    for &x in r {
        if c.contains(&!x) {
            return None;
        }
        if !c.contains(&x) {
            c.push(x);
        }
    }
    Some(c)
}

fn clauses(n: &Nnf, cap: usize) -> Result<Vec<Vec<Literal>>, ConvertError> {
    match n {
        Nnf::Lit(l) => Ok(vec![vec![*l]]),
        Nnf::And(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.extend(clauses(x, cap)?);
                if out.len() > cap {
                    return Err(ConvertError::BlowupExceeded { cap });
                }
            }
            Ok(out)
        }
        Nnf::Or(xs) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for x in xs {
                let mut right = clauses(x, cap)?;
                let mut distinct = HashSet::new();
                right.retain(|c| {
                    let mut key = c.clone();
                    key.sort();
                    distinct.insert(key)
                });
                if acc.len().saturating_mul(right.len()) > cap {
                    return Err(ConvertError::BlowupExceeded { cap });
                }
                let mut seen = HashSet::new();
                acc = acc
                    .iter()
                    .flat_map(|l| right.iter().filter_map(move |r| merge(l, r)))
                    .filter(|c| {
                        let mut key = c.clone();
                        key.sort();
                        seen.insert(key)
                    })
                    .collect();
            }
            Ok(acc)
        }
    }
}

/// Equivalent CNF of `e`, interning atoms into `st`. The result ranges over every
/// variable in `st`.
pub fn to_cnf(e: &LogicalExpr, st: &mut SymbolTable) -> Result<CnfFormula, ConvertError> {
    to_cnf_with_cap(e, st, DEFAULT_CLAUSE_CAP)
}

pub fn to_cnf_with_cap(
    e: &LogicalExpr,
    st: &mut SymbolTable,
    cap: usize,
) -> Result<CnfFormula, ConvertError> {
    st.intern_all(e);
    let n = nnf(e, true, st);
    let cs = clauses(&n, cap)?
        .into_iter()
        .map(|c| Clause::new(c).expect("distribution never yields an empty clause"))
        .collect();
    Ok(CnfFormula::new(st.len(), cs).expect("literals come from the symbol table"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn cnf(src: &str) -> (Vec<Vec<i64>>, SymbolTable) {
        let mut st = SymbolTable::new();
        let f = to_cnf(&parse_expression(src).unwrap(), &mut st).unwrap();
        let cs = f
            .clauses()
            .iter()
            .map(|c| c.literals().iter().map(|l| l.to_dimacs()).collect())
            .collect();
        (cs, st)
    }

    #[test]
    fn negation_over_disjunction() {
        // P=1, Q=2, R=3
        let (cs, st) = cnf("And(Not(P), Or(Q, R))");
        assert_eq!(cs, vec![vec![-1], vec![2, 3]]);
        assert_eq!(st.len(), 3);
    }

    #[test]
    fn cnf_input_is_a_fixed_point() {
        assert_eq!(cnf("And(P, Or(Q, R))").0, vec![vec![1], vec![2, 3]]);
    }

    #[test]
    fn implication_elimination() {
        assert_eq!(cnf("Implies(P, Q)").0, vec![vec![-1, 2]]);
        assert_eq!(cnf("Not(Implies(P, Q))").0, vec![vec![1], vec![-2]]);
    }

    #[test]
    fn biconditional() {
        assert_eq!(cnf("Iff(P, Q)").0, vec![vec![-1, 2], vec![1, -2]]);
        assert_eq!(cnf("Not(Iff(P, Q))").0, vec![vec![1, 2], vec![-1, -2]]);
    }

    #[test]
    fn distribution_and_de_morgan() {
        assert_eq!(
            cnf("Or(And(P, Q), R)").0,
            vec![vec![1, 3], vec![2, 3]]
        );
        assert_eq!(cnf("Not(And(P, Not(Q)))").0, vec![vec![-1, 2]]);
    }

    #[test]
    fn distribution_drops_tautologies_and_repeats() {
        assert_eq!(cnf("Or(And(P, Not(P)), P)").0, vec![vec![1]]);
        assert_eq!(cnf("Or(And(P, Q), P, Q)").0, vec![vec![1, 2]]);
        assert_eq!(cnf("Or(P, Not(P))").0, Vec::<Vec<i64>>::new());
    }

    #[test]
    fn blowup_is_reported() {
        // Or of 14 binary conjunctions distributes into 2^14 clauses.
        let parts: Vec<String> = (0..14).map(|i| format!("And(a{i}, b{i})")).collect();
        let e = parse_expression(&format!("Or({})", parts.join(", "))).unwrap();
        let mut st = SymbolTable::new();
        assert_eq!(
            to_cnf(&e, &mut st),
            Err(ConvertError::BlowupExceeded { cap: DEFAULT_CLAUSE_CAP })
        );
        let small: Vec<String> = (0..3).map(|i| format!("And(a{i}, b{i})")).collect();
        let e = parse_expression(&format!("Or({})", small.join(", "))).unwrap();
        assert!(to_cnf_with_cap(&e, &mut SymbolTable::new(), 7).is_err());
        assert_eq!(
            to_cnf_with_cap(&e, &mut SymbolTable::new(), 8).unwrap().num_clauses(),
            8
        );
    }
}
