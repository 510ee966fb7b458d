//! Atom name to DIMACS variable mapping.

use std::collections::HashMap;

use crate::expr::LogicalExpr;

/// Ordered bijection between atom names and variables `1..=len`, assigned in
/// first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table covering the atoms of `exprs`, in order.
    pub fn from_exprs<'a>(exprs: impl IntoIterator<Item = &'a LogicalExpr>) -> Self {
        let mut st = SymbolTable::new();
        for e in exprs {
            st.intern_all(e);
        }
        st
    }

    /// Variable for `name`, allocating the next index on first sight.
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        self.names.push(name.to_string());
        let v = self.names.len() as u32;
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn intern_all(&mut self, e: &LogicalExpr) {
        e.visit_atoms(&mut |name| {
            self.intern(name);
        });
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, var: u32) -> Option<&str> {
        self.names.get((var as usize).checked_sub(1)?).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `(variable, name)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (i as u32 + 1, n.as_str()))
    }
}
