//! Random 3-SAT generation and DIMACS dataset directories.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satrl_core::{read_dimacs, solve, write_dimacs, CnfFormula, DimacsError, Limits, Verdict, VsidsHeuristic};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: DimacsError },
    #[error("{path}: expected {expected_vars} variables and {expected_clauses} clauses, found {vars} and {clauses}")]
    Integrity {
        path: PathBuf,
        expected_vars: usize,
        expected_clauses: usize,
        vars: usize,
        clauses: usize,
    },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Uniform random 3-SAT: each clause has three distinct variables with random signs.
pub fn random_3sat(n: usize, m: usize, rng: &mut impl Rng) -> CnfFormula {
    assert!(n >= 3, "3-SAT needs at least three variables");
    let clauses: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            let mut vars: Vec<i64> = Vec::with_capacity(3);
            while vars.len() < 3 {
                let v = rng.random_range(1..=n as i64);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|v| if rng.random_bool(0.5) { -v } else { v })
                .collect()
        })
        .collect();
    let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
    CnfFormula::from_dimacs_clauses(n, &refs).expect("literals in range")
}

/// `count` satisfiable uniform random 3-SAT instances. Candidates are solved to
/// completion and kept only when the returned model checks out.
pub fn generate_satisfiable(n: usize, m: usize, count: usize, seed: u64) -> Vec<CnfFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_3sat(n, m, &mut rng);
        if let Verdict::Sat(model) = solve(&f, &mut VsidsHeuristic::new(n), Limits::none()).verdict {
            if f.is_satisfied_by(&model) {
                out.push(f);
            }
        }
    }
    out
}

/// Writes `prefix-0001.cnf`, `prefix-0002.cnf`, ... and returns the paths.
pub fn write_dataset(dir: &Path, prefix: &str, formulas: &[CnfFormula]) -> Result<Vec<PathBuf>, DatasetError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| DatasetError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let width = formulas.len().to_string().len().max(4);
    formulas
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = dir.join(format!("{prefix}-{:0width$}.cnf", i + 1));
            fs::write(&path, write_dimacs(f)).map_err(io(&path))?;
            Ok(path)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Abort on the first bad file instead of skipping it.
    pub strict: bool,
    /// Required `(variables, clauses)`, e.g. `(20, 91)` for uf20-91.
    pub expect_shape: Option<(usize, usize)>,
}

#[derive(Debug, Default)]
pub struct Dataset {
    /// `(path, formula)` sorted by file name.
    pub entries: Vec<(PathBuf, CnfFormula)>,
    /// Files that were skipped.
    pub errors: Vec<DatasetError>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn formulas(&self) -> Vec<CnfFormula> {
        self.entries.iter().map(|(_, f)| f.clone()).collect()
    }

    pub fn paths(&self) -> Vec<PathBuf> {
        self.entries.iter().map(|(p, _)| p.clone()).collect()
    }
}

fn load_file(path: &Path, expect: Option<(usize, usize)>) -> Result<CnfFormula, DatasetError> {
    let file = fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let f = read_dimacs(file).map_err(|source| DatasetError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    if let Some((n, m)) = expect {
        if (f.num_vars(), f.num_clauses()) != (n, m) {
            return Err(DatasetError::Integrity {
                path: path.to_path_buf(),
                expected_vars: n,
                expected_clauses: m,
                vars: f.num_vars(),
                clauses: f.num_clauses(),
            });
        }
    }
    Ok(f)
}

/// Loads every `*.cnf` file in `dir`, in file-name order.
pub fn load_dataset(dir: &Path, options: LoadOptions) -> Result<Dataset, DatasetError> {
    let io = |source| DatasetError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "cnf"));
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));

    let mut ds = Dataset::default();
    for path in paths {
        match load_file(&path, options.expect_shape) {
            Ok(f) => ds.entries.push((path, f)),
            Err(e) if options.strict => return Err(e),
            Err(e) => {
                log::warn!("skipping {e}");
                ds.errors.push(e);
            }
        }
    }
    if ds.entries.is_empty() {
        log::warn!("no usable .cnf files in {}", dir.display());
    }
    Ok(ds)
}
