//! Seeded train/test split.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Vec<PathBuf>,
    pub test: Vec<PathBuf>,
    pub seed: u64,
}

/// Sorts `files` by name, shuffles them with `seed` and puts the first
/// `floor(N · ratio)` into the training set.
pub fn split_dataset(files: &[PathBuf], ratio: f64, seed: u64) -> DatasetSplit {
    assert!(ratio > 0.0 && ratio < 1.0, "split ratio must lie in (0, 1)");
    let mut sorted = files.to_vec();
    sorted.sort();
    sorted.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = (sorted.len() as f64 * ratio).floor() as usize;
    let test = sorted.split_off(cut);
    DatasetSplit {
        train: sorted,
        test,
        seed,
    }
}
