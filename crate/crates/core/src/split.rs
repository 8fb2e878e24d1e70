//! Seeded group-level train/val/test assignment.
//!
//! Splitting happens over groups (one clear scene and all of its corrupted
//! variants), so no group straddles two partitions.

use alloc::vec::Vec;

use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{error::invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

pub const DEFAULT_RATIOS: [f64; 3] = [0.8, 0.1, 0.1];

/// Train/val/test sizes: val and test are floored, the remainder goes to train.
pub fn split_sizes(groups: usize, ratios: [f64; 3]) -> Result<[usize; 3]> {
    if ratios.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(invalid("ratios", "must be finite and non-negative"));
    }
    if (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(invalid("ratios", "must sum to 1"));
    }
    let floor = |r: f64| libm::floor(groups as f64 * r + 1e-9) as usize;
    let val = floor(ratios[1]);
    let test = floor(ratios[2]);
    let train = groups.saturating_sub(val + test);
    if train == 0 || val == 0 || test == 0 || train + val + test != groups {
        return Err(Error::TooFewGroups { groups });
    }
    Ok([train, val, test])
}

/// Assigns each of `groups` indices to a split via a seeded permutation.
pub fn assign_splits(groups: usize, ratios: [f64; 3], seed: u64) -> Result<Vec<Split>> {
    let [train, val, _] = split_sizes(groups, ratios)?;
    let mut order: Vec<usize> = (0..groups).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = alloc::vec![Split::Test; groups];
    for (rank, &group) in order.iter().enumerate() {
        out[group] = if rank < train {
            Split::Train
        } else if rank < train + val {
            Split::Val
        } else {
            Split::Test
        };
    }
    Ok(out)
}
