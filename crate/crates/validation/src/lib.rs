//! Reference oracles that share no code with the solver or the converter: exhaustive
//! satisfiability by bitmask enumeration, a direct expression evaluator, and a random
//! expression generator.

use std::collections::HashMap;

use rand::Rng;
use satrl_core::{Assignment, CnfFormula, VarValue};
use satrl_logic::{LogicalExpr, SymbolTable};

/// Clause as `(positive, negative)` variable bitmasks; bit `j` is `x_{j+1}`.
fn masks(f: &CnfFormula) -> Vec<(u32, u32)> {
    f.clauses()
        .iter()
        .map(|c| {
            c.literals().iter().fold((0, 0), |(p, n), l| {
                let bit = 1u32 << l.index();
                if l.is_negated() {
                    (p, n | bit)
                } else {
                    (p | bit, n)
                }
            })
        })
        .collect()
}

/// First satisfying assignment in counting order, as bits, or `None` when unsatisfiable.
/// Supports up to 24 variables.
pub fn brute_force_sat(f: &CnfFormula) -> Option<u32> {
    assert!(f.num_vars() <= 24, "exhaustive search is limited to 24 variables");
    let ms = masks(f);
    (0..1u32 << f.num_vars()).find(|&x| ms.iter().all(|&(p, n)| x & p != 0 || !x & n != 0))
}

/// True when every clause has a literal made true by `a`.
pub fn model_satisfies(f: &CnfFormula, a: &Assignment) -> bool {
    f.clauses().iter().all(|c| {
        c.literals().iter().any(|l| match a.get(l.var()) {
            VarValue::True => !l.is_negated(),
            VarValue::False => l.is_negated(),
            VarValue::Unassigned => false,
        })
    })
}

pub fn eval_expr(e: &LogicalExpr, env: &HashMap<String, bool>) -> bool {
    match e {
        LogicalExpr::Atom(a) => env[a],
        LogicalExpr::Not(x) => !eval_expr(x, env),
        LogicalExpr::And(xs) => xs.iter().all(|x| eval_expr(x, env)),
        LogicalExpr::Or(xs) => xs.iter().any(|x| eval_expr(x, env)),
        LogicalExpr::Implies(a, b) => !eval_expr(a, env) || eval_expr(b, env),
        LogicalExpr::Iff(a, b) => eval_expr(a, env) == eval_expr(b, env),
    }
}

/// Compares `e` with `cnf` on all `2^k` assignments of the `k` symbols. Variables of
/// `cnf` are looked up by name in `symbols`. Returns the first disagreeing row.
pub fn truth_table_mismatch(e: &LogicalExpr, cnf: &CnfFormula, symbols: &SymbolTable) -> Option<u32> {
    let names: Vec<(u32, String)> = symbols.iter().map(|(v, n)| (v, n.to_string())).collect();
    let k = names.len();
    assert!(k <= 24 && cnf.num_vars() <= k);
    let ms = masks(cnf);
    (0..1u32 << k).find(|&row| {
        let env: HashMap<String, bool> = names
            .iter()
            .map(|(v, n)| (n.clone(), row >> (v - 1) & 1 == 1))
            .collect();
        let cnf_value = ms.iter().all(|&(p, n)| row & p != 0 || !row & n != 0);
        eval_expr(e, &env) != cnf_value
    })
}

/// Random expression over `atoms` whose depth (atoms count 1) is at most `max_depth`.
pub fn random_expr<R: Rng>(rng: &mut R, atoms: &[&str], max_depth: usize) -> LogicalExpr {
    if max_depth <= 1 || rng.random_bool(0.25) {
        return LogicalExpr::atom(atoms[rng.random_range(0..atoms.len())]);
    }
    let d = max_depth - 1;
    match rng.random_range(0..5) {
        0 => LogicalExpr::Not(Box::new(random_expr(rng, atoms, d))),
        1 => LogicalExpr::And((0..rng.random_range(2..=3)).map(|_| random_expr(rng, atoms, d)).collect()),
        2 => LogicalExpr::Or((0..rng.random_range(2..=3)).map(|_| random_expr(rng, atoms, d)).collect()),
        3 => LogicalExpr::Implies(Box::new(random_expr(rng, atoms, d)), Box::new(random_expr(rng, atoms, d))),
        _ => LogicalExpr::Iff(Box::new(random_expr(rng, atoms, d)), Box::new(random_expr(rng, atoms, d))),
    }
}
