//! Redundancy removal on CNF formulas.
//!
//! Rules, in order: duplicate literals within a clause, tautological clauses,
//! duplicate clauses, subsumed clauses. Clause and literal order of the survivors
//! follows the input.

use std::collections::HashSet;

use satrl_core::{Clause, CnfFormula, Literal};

pub fn simplify_cnf(f: &CnfFormula) -> CnfFormula {
    let mut kept: Vec<Vec<Literal>> = Vec::new();
    let mut sorted: Vec<Vec<Literal>> = Vec::new();
    let mut seen: HashSet<Vec<Literal>> = HashSet::new();
    for clause in f.clauses() {
        let mut lits: Vec<Literal> = Vec::with_capacity(clause.len());
        for &l in clause.literals() {
            if !lits.contains(&l) {
                lits.push(l);
            }
        }
        if lits.iter().any(|l| lits.contains(&!*l)) {
            continue;
        }
        let mut key = lits.clone();
        key.sort_unstable();
        if seen.insert(key.clone()) {
            kept.push(lits);
            sorted.push(key);
        }
    }

    // A clause is dropped when some other surviving clause is a proper subset of it.
    // Proper subsets form a strict order, so the result does not depend on scan order.
    let subsumed: Vec<bool> = (0..sorted.len())
        .map(|i| {
            (0..sorted.len()).any(|j| {
                j != i && sorted[j].len() < sorted[i].len() && is_subset(&sorted[j], &sorted[i])
            })
        })
        .collect();

    let clauses = kept
        .into_iter()
        .zip(subsumed)
        .filter(|(_, s)| !s)
        .map(|(lits, _)| Clause::new(lits).expect("nonempty"))
        .collect();
    CnfFormula::new(f.num_vars(), clauses).expect("variables unchanged")
}

/// Both slices sorted.
fn is_subset(small: &[Literal], big: &[Literal]) -> bool {
    let mut it = big.iter();
    small.iter().all(|l| it.any(|b| b == l))
}
