//! Per-cell stability labels.
//!
//! A cell is strongly stable when it sits in a homogeneous run of at least
//! `r + 1` cells, unstable when its state differs two steps later, and weakly
//! stable otherwise. Labels depend only on `step²` and on the run structure,
//! so majority and minority at the same radius label every cell identically.
//!
//! A homogeneous ring is labelled strongly stable even when `n <= r`: its
//! state never changes, which is the defining property of the label.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{step, CellInterval, Configuration, Rule};
use crate::structure::blocks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    StronglyStable,
    WeaklyStable,
    Unstable,
}

impl Stability {
    /// `S`, `W` or `U`.
    pub fn letter(self) -> char {
        match self {
            Stability::StronglyStable => 'S',
            Stability::WeaklyStable => 'W',
            Stability::Unstable => 'U',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityMap {
    pub labels: Vec<Stability>,
    pub rule: Rule,
}

impl StabilityMap {
    pub fn get(&self, i: usize) -> Stability {
        self.labels[i % self.labels.len()]
    }

    pub fn count(&self, label: Stability) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Labels as a string of `S`/`W`/`U` letters.
    pub fn letters(&self) -> String {
        self.labels.iter().map(|l| l.letter()).collect()
    }
}

impl fmt::Display for StabilityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters())
    }
}

pub fn classify_stability(cfg: &Configuration, rule: Rule) -> StabilityMap {
    let n = cfg.n();
    let twice = step(&step(cfg, rule), rule);
    let decomp = blocks(cfg);
    let homogeneous = decomp.is_homogeneous();
    let labels = (0..n)
        .map(|i| {
            let run = decomp.block_of_cell(i as isize).len;
            if homogeneous || run > rule.radius {
                Stability::StronglyStable
            } else if cfg.get(i) != twice.get(i) {
                Stability::Unstable
            } else {
                Stability::WeaklyStable
            }
        })
        .collect();
    StabilityMap { labels, rule }
}

/// Maximal cyclic runs of unstable cells in ring order, each as a reduced
/// `[start, end]` interval. An all-unstable ring is the single run `[0, n-1]`.
pub fn unstable_runs(map: &StabilityMap) -> Vec<CellInterval> {
    let n = map.labels.len();
    let unstable = |i: usize| map.labels[i % n] == Stability::Unstable;
    let Some(anchor) = (0..n).find(|&i| !unstable(i)) else {
        return vec![CellInterval::ring(n)];
    };
    let mut runs = Vec::new();
    let mut k = 1;
    while k <= n {
        let i = (anchor + k) % n;
        if unstable(i) {
            let start = i;
            let mut len = 0;
            while unstable((start + len) % n) {
                len += 1;
            }
            runs.push(CellInterval::new(
                start as isize,
                ((start + len - 1) % n) as isize,
            ));
            k += len;
        } else {
            k += 1;
        }
    }
    runs.sort_by_key(|iv| iv.start);
    runs
}

/// Length of the longest unstable run, 0 when there is none.
pub fn max_unstable_run(map: &StabilityMap) -> usize {
    let n = map.labels.len();
    unstable_runs(map)
        .iter()
        .map(|iv| iv.len(n))
        .max()
        .unwrap_or(0)
}
