//! Integer-encoded CNF formulas, partial assignments and three-valued evaluation.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("clause must contain at least one literal")]
    EmptyClause,
    #[error("literal {literal} references variable {var} but the formula has {num_vars} variables")]
    VarOutOfRange {
        literal: i64,
        var: usize,
        num_vars: usize,
    },
    #[error("0 is not a literal")]
    ZeroLiteral,
}

/// A propositional variable (1-based) or its negation.
///
/// Externally a literal is the DIMACS integer `+var` or `-var`; `0` is never a literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    negated: bool,
}

impl Literal {
    /// Panics if `var == 0`.
    pub fn new(var: u32, negated: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, negated }
    }

    pub fn positive(var: u32) -> Self {
        Self::new(var, false)
    }

    pub fn negative(var: u32) -> Self {
        Self::new(var, true)
    }

    pub fn from_dimacs(code: i64) -> Result<Self, CnfError> {
        if code == 0 {
            return Err(CnfError::ZeroLiteral);
        }
        let var = u32::try_from(code.unsigned_abs()).map_err(|_| CnfError::VarOutOfRange {
            literal: code,
            var: code.unsigned_abs() as usize,
            num_vars: u32::MAX as usize,
        })?;
        Ok(Literal::new(var, code < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    /// Zero-based variable index.
    pub fn index(self) -> usize {
        self.var as usize - 1
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Value of this literal under `a`.
    pub fn eval(self, a: &Assignment) -> VarValue {
        match a.get(self.var) {
            VarValue::Unassigned => VarValue::Unassigned,
            v if self.negated => v.flip(),
            v => v,
        }
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.negate()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Disjunction of literals. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self, CnfError> {
        if literals.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        Ok(Clause { literals })
    }

    pub fn from_dimacs(codes: &[i64]) -> Result<Self, CnfError> {
        let literals = codes
            .iter()
            .map(|&c| Literal::from_dimacs(c))
            .collect::<Result<Vec<_>, _>>()?;
        Clause::new(literals)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.literals.iter().map(|l| l.var()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, a: &Assignment) -> Eval {
        evaluate_clause(self, a)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            if l.is_negated() {
                write!(f, "¬x{}", l.var())?;
            } else {
                write!(f, "x{}", l.var())?;
            }
        }
        write!(f, ")")
    }
}

/// A conjunction of clauses over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for clause in &clauses {
            for lit in clause.literals() {
                if lit.var() as usize > num_vars {
                    return Err(CnfError::VarOutOfRange {
                        literal: lit.to_dimacs(),
                        var: lit.var() as usize,
                        num_vars,
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Builds a formula from DIMACS-style integer clauses.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Result<Self, CnfError> {
        let clauses = clauses
            .iter()
            .map(|c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>, _>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_literals(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    pub fn evaluate(&self, a: &Assignment) -> Eval {
        evaluate_formula(self, a)
    }

    /// Whether a total or partial assignment satisfies every clause.
    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.evaluate(a) == Eval::True
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "⊤");
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VarValue {
    True,
    False,
    #[default]
    Unassigned,
}

impl VarValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            VarValue::True
        } else {
            VarValue::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            VarValue::True => Some(true),
            VarValue::False => Some(false),
            VarValue::Unassigned => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            VarValue::True => VarValue::False,
            VarValue::False => VarValue::True,
            VarValue::Unassigned => VarValue::Unassigned,
        }
    }

    /// `+1` / `-1` / `0`.
    pub fn code(self) -> i8 {
        match self {
            VarValue::True => 1,
            VarValue::False => -1,
            VarValue::Unassigned => 0,
        }
    }
}

/// Per-variable ternary state, indexed by 1-based variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<VarValue>,
}

impl Assignment {
    pub fn new(num_vars: usize) -> Self {
        Assignment {
            values: vec![VarValue::Unassigned; num_vars],
        }
    }

    /// Total assignment from booleans; `values[i]` is the value of variable `i + 1`.
    pub fn from_bools(values: &[bool]) -> Self {
        Assignment {
            values: values.iter().map(|&b| VarValue::from_bool(b)).collect(),
        }
    }

    /// Builds an assignment from the DIMACS literals that are true.
    pub fn from_literals(num_vars: usize, true_lits: &[i64]) -> Self {
        let mut a = Assignment::new(num_vars);
        for &code in true_lits {
            let lit = Literal::from_dimacs(code).expect("nonzero literal");
            a.set(lit.var(), VarValue::from_bool(!lit.is_negated()));
        }
        a
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of 1-based variable `var`. Out-of-range variables read as unassigned.
    pub fn get(&self, var: u32) -> VarValue {
        self.values
            .get(var as usize - 1)
            .copied()
            .unwrap_or(VarValue::Unassigned)
    }

    pub fn set(&mut self, var: u32, value: VarValue) {
        self.values[var as usize - 1] = value;
    }

    pub fn values(&self) -> &[VarValue] {
        &self.values
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(|v| *v != VarValue::Unassigned)
    }

    pub fn num_assigned(&self) -> usize {
        self.values
            .iter()
            .filter(|v| **v != VarValue::Unassigned)
            .count()
    }

    /// `+1` for true, `-1` for false, `0` for unassigned.
    pub fn encode(&self) -> Vec<i8> {
        self.values.iter().map(|v| v.code()).collect()
    }

    /// The assignment as a DIMACS literal list (assigned variables only).
    pub fn to_literals(&self) -> Vec<i64> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| match v {
                VarValue::True => Some(i as i64 + 1),
                VarValue::False => Some(-(i as i64 + 1)),
                VarValue::Unassigned => None,
            })
            .collect()
    }
}

/// Three-valued truth of a clause or formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Eval {
    True,
    False,
    Unevaluated,
}

impl Eval {
    /// `+1` / `-1` / `0`.
    pub fn code(self) -> i8 {
        match self {
            Eval::True => 1,
            Eval::False => -1,
            Eval::Unevaluated => 0,
        }
    }

    /// Three-valued conjunction: False dominates, then Unevaluated, then True.
    pub fn and(self, other: Eval) -> Eval {
        match (self, other) {
            (Eval::False, _) | (_, Eval::False) => Eval::False,
            (Eval::Unevaluated, _) | (_, Eval::Unevaluated) => Eval::Unevaluated,
            _ => Eval::True,
        }
    }
}

pub fn evaluate_clause(c: &Clause, a: &Assignment) -> Eval {
    let mut pending = false;
    for lit in c.literals() {
        match lit.eval(a) {
            VarValue::True => return Eval::True,
            VarValue::Unassigned => pending = true,
            VarValue::False => {}
        }
    }
    if pending {
        Eval::Unevaluated
    } else {
        Eval::False
    }
}

pub fn evaluate_formula(f: &CnfFormula, a: &Assignment) -> Eval {
    let mut result = Eval::True;
    for c in f.clauses() {
        match evaluate_clause(c, a) {
            Eval::False => return Eval::False,
            e => result = result.and(e),
        }
    }
    result
}
