//! Fixed-width global features of a CNF formula.
//!
//! The vector has 48 slots. Slots 0..33 hold permutation-invariant statistics from
//! the SATzilla base families (problem size, clause-variable graph degrees,
//! polarity balance, Horn structure); the remaining slots are reserved and always 0.
//!
//! Clauses are treated as literal sets. Each statistic family reports mean,
//! variation coefficient (population stddev / mean, 0 when the mean is 0), min, max
//! and the Shannon entropy (natural log) of the distribution of observed values.

use std::fmt;

use thiserror::Error;

use crate::cnf::{CnfFormula, Literal};

pub const FEATURE_COUNT: usize = 48;
pub const FEATURE_SCHEMA_VERSION: u32 = 1;
/// Number of populated slots; the rest are `reserved_k`.
pub const IMPLEMENTED_FEATURES: usize = 33;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "num_vars",
    "num_clauses",
    "clause_var_ratio",
    "var_clause_ratio",
    "ratio_distance_4_26",
    "vcg_var_degree_mean",
    "vcg_var_degree_coeff_var",
    "vcg_var_degree_min",
    "vcg_var_degree_max",
    "vcg_var_degree_entropy",
    "vcg_clause_degree_mean",
    "vcg_clause_degree_coeff_var",
    "vcg_clause_degree_min",
    "vcg_clause_degree_max",
    "vcg_clause_degree_entropy",
    "pos_lit_fraction_per_clause_mean",
    "pos_lit_fraction_per_clause_coeff_var",
    "pos_lit_fraction_per_clause_min",
    "pos_lit_fraction_per_clause_max",
    "pos_lit_fraction_per_clause_entropy",
    "pos_occ_fraction_per_var_mean",
    "pos_occ_fraction_per_var_coeff_var",
    "pos_occ_fraction_per_var_min",
    "pos_occ_fraction_per_var_max",
    "pos_occ_fraction_per_var_entropy",
    "binary_clause_fraction",
    "ternary_clause_fraction",
    "horn_clause_fraction",
    "horn_occurrences_per_var_mean",
    "horn_occurrences_per_var_coeff_var",
    "horn_occurrences_per_var_min",
    "horn_occurrences_per_var_max",
    "horn_occurrences_per_var_entropy",
    "reserved_33",
    "reserved_34",
    "reserved_35",
    "reserved_36",
    "reserved_37",
    "reserved_38",
    "reserved_39",
    "reserved_40",
    "reserved_41",
    "reserved_42",
    "reserved_43",
    "reserved_44",
    "reserved_45",
    "reserved_46",
    "reserved_47",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("feature extraction needs at least one variable and one clause (got {num_vars} vars, {num_clauses} clauses)")]
    DegenerateFormula { num_vars: usize, num_clauses: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    values: [f64; FEATURE_COUNT],
}

impl FeatureVector {
    pub fn zeros() -> Self {
        FeatureVector {
            values: [0.0; FEATURE_COUNT],
        }
    }

    pub fn from_values(values: [f64; FEATURE_COUNT]) -> Self {
        FeatureVector { values }
    }

    pub fn values(&self) -> &[f64; FEATURE_COUNT] {
        &self.values
    }

    pub fn schema() -> &'static [&'static str; FEATURE_COUNT] {
        &FEATURE_NAMES
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        FEATURE_NAMES.iter().copied().zip(self.values.iter().copied())
    }
}

impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in self.iter() {
            writeln!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

/// mean, coeff_var, min, max, entropy.
fn summary(values: &[f64]) -> [f64; 5] {
    if values.is_empty() {
        return [0.0; 5];
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let coeff_var = if mean == 0.0 { 0.0 } else { var.sqrt() / mean };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut entropy = 0.0;
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == sorted[start] {
            end += 1;
        }
        let p = (end - start) as f64 / n;
        entropy -= p * p.ln();
        start = end;
    }
    [mean, coeff_var, min, max, entropy.max(0.0)]
}

pub fn extract_features(f: &CnfFormula) -> Result<FeatureVector, FeatureError> {
    let n = f.num_vars();
    let m = f.num_clauses();
    if n == 0 || m == 0 {
        return Err(FeatureError::DegenerateFormula {
            num_vars: n,
            num_clauses: m,
        });
    }

    let mut var_degree = vec![0.0f64; n];
    let mut pos_occ = vec![0.0f64; n];
    let mut occ = vec![0.0f64; n];
    let mut horn_occ = vec![0.0f64; n];
    let mut clause_degree = Vec::with_capacity(m);
    let mut pos_fraction = Vec::with_capacity(m);
    let (mut binary, mut ternary, mut horn) = (0usize, 0usize, 0usize);

    let mut lits: Vec<Literal> = Vec::new();
    let mut vars: Vec<u32> = Vec::new();
    for clause in f.clauses() {
        lits.clear();
        lits.extend_from_slice(clause.literals());
        lits.sort_unstable();
        lits.dedup();
        vars.clear();
        vars.extend(lits.iter().map(|l| l.var()));
        vars.dedup();

        let positives = lits.iter().filter(|l| !l.is_negated()).count();
        let is_horn = positives <= 1;
        clause_degree.push(vars.len() as f64);
        pos_fraction.push(positives as f64 / lits.len() as f64);
        match lits.len() {
            2 => binary += 1,
            3 => ternary += 1,
            _ => {}
        }
        if is_horn {
            horn += 1;
        }
        for &v in &vars {
            let i = v as usize - 1;
            var_degree[i] += 1.0;
            if is_horn {
                horn_occ[i] += 1.0;
            }
        }
        for l in &lits {
            occ[l.index()] += 1.0;
            if !l.is_negated() {
                pos_occ[l.index()] += 1.0;
            }
        }
    }

    let pos_var_fraction: Vec<f64> = occ
        .iter()
        .zip(&pos_occ)
        .filter(|(o, _)| **o > 0.0)
        .map(|(o, p)| p / o)
        .collect();

    let (nf, mf) = (n as f64, m as f64);
    let ratio = mf / nf;
    let mut values = [0.0; FEATURE_COUNT];
    values[0] = nf;
    values[1] = mf;
    values[2] = ratio;
    values[3] = nf / mf;
    values[4] = (ratio - 4.26).abs();
    values[5..10].copy_from_slice(&summary(&var_degree));
    values[10..15].copy_from_slice(&summary(&clause_degree));
    values[15..20].copy_from_slice(&summary(&pos_fraction));
    values[20..25].copy_from_slice(&summary(&pos_var_fraction));
    values[25] = binary as f64 / mf;
    values[26] = ternary as f64 / mf;
    values[27] = horn as f64 / mf;
    values[28..33].copy_from_slice(&summary(&horn_occ));
    Ok(FeatureVector { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_shape() {
        assert_eq!(FEATURE_NAMES.len(), 48);
        for (k, name) in FEATURE_NAMES.iter().enumerate().skip(IMPLEMENTED_FEATURES) {
            assert_eq!(*name, format!("reserved_{k}"));
        }
        let mut names = FEATURE_NAMES.to_vec();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 48);
    }

    #[test]
    fn single_unit_clause() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1]]).unwrap();
        let v = extract_features(&f).unwrap();
        assert_eq!(v.get("vcg_var_degree_mean"), Some(1.0));
        assert_eq!(v.get("vcg_var_degree_coeff_var"), Some(0.0));
        assert_eq!(v.get("horn_clause_fraction"), Some(1.0));
        assert_eq!(v.get("vcg_var_degree_entropy"), Some(0.0));
    }

    #[test]
    fn size_features() {
        let f = CnfFormula::from_dimacs_clauses(4, &[&[1, -2], &[2, 3, -4], &[-1]]).unwrap();
        let v = extract_features(&f).unwrap();
        assert_eq!(v.get("num_vars"), Some(4.0));
        assert_eq!(v.get("num_clauses"), Some(3.0));
        assert_eq!(v.get("clause_var_ratio"), Some(0.75));
        assert_eq!(v.get("var_clause_ratio"), Some(4.0 / 3.0));
        assert_eq!(v.get("binary_clause_fraction"), Some(1.0 / 3.0));
        assert_eq!(v.get("ternary_clause_fraction"), Some(1.0 / 3.0));
        // (1 ∨ ¬2) and (¬1) are Horn; (2 ∨ 3 ∨ ¬4) is not.
        assert_eq!(v.get("horn_clause_fraction"), Some(2.0 / 3.0));
        assert!(v.values()[IMPLEMENTED_FEATURES..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(extract_features(&CnfFormula::default()).is_err());
        let no_clauses = CnfFormula::new(3, vec![]).unwrap();
        assert_eq!(
            extract_features(&no_clauses),
            Err(FeatureError::DegenerateFormula {
                num_vars: 3,
                num_clauses: 0
            })
        );
    }

    #[test]
    fn entropy_of_two_equal_halves() {
        let s = summary(&[1.0, 1.0, 2.0, 2.0]);
        assert!((s[4] - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(s[0], 1.5);
        assert_eq!(s[2], 1.0);
        assert_eq!(s[3], 2.0);
    }
}
