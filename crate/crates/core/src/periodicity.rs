//! Temporal classification, spatial period, the three-way classifier for
//! majority dynamics and the doubled potential function.

use serde::{Deserialize, Serialize};

use crate::automaton::{step, CellInterval, Configuration, Rule};
use crate::error::{Error, Result};
use crate::stability::{classify_stability, max_unstable_run};
use crate::structure::{bias, blocks};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemporalClass {
    FixedPoint,
    TwoCycle { partner: Configuration },
    Transient,
}

impl TemporalClass {
    pub fn name(&self) -> &'static str {
        match self {
            TemporalClass::FixedPoint => "FixedPoint",
            TemporalClass::TwoCycle { .. } => "TwoCycle",
            TemporalClass::Transient => "Transient",
        }
    }

    pub fn is_periodic(&self) -> bool {
        !matches!(self, TemporalClass::Transient)
    }
}

pub fn temporal_class(cfg: &Configuration, rule: Rule) -> TemporalClass {
    let once = step(cfg, rule);
    if once == *cfg {
        TemporalClass::FixedPoint
    } else if step(&once, rule) == *cfg {
        TemporalClass::TwoCycle { partner: once }
    } else {
        TemporalClass::Transient
    }
}

/// Least `p >= 1` with `σ(i + p) = σ(i)` for every `i`.
pub fn spatial_period(cfg: &Configuration) -> usize {
    let n = cfg.n();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| cfg.rotate(p as isize) == *cfg)
        .unwrap_or(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassificationCase {
    StronglyStableFixedForm,
    WeaklyStablePeriodic,
    Transient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub case: ClassificationCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spatial_period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_unstable_run: Option<usize>,
}

/// Sorts a configuration into one of the three cases for `maj_r`.
///
/// A temporally periodic configuration mixing short (`<= r`) and long
/// blocks would contradict the block-length dichotomy and is reported as
/// [`Error::InvariantViolated`].
pub fn classify_theorem(cfg: &Configuration, r: usize) -> Result<ClassificationResult> {
    if r == 0 {
        return Err(Error::InvalidRadius);
    }
    let rule = Rule::majority(r);
    if step(&step(cfg, rule), rule) != *cfg {
        let map = classify_stability(cfg, rule);
        return Ok(ClassificationResult {
            case: ClassificationCase::Transient,
            spatial_period: None,
            max_unstable_run: Some(max_unstable_run(&map)),
        });
    }
    let decomp = blocks(cfg);
    if decomp.is_homogeneous() || decomp.blocks().iter().all(|b| b.len > r) {
        return Ok(ClassificationResult {
            case: ClassificationCase::StronglyStableFixedForm,
            spatial_period: None,
            max_unstable_run: None,
        });
    }
    if decomp.blocks().iter().all(|b| b.len <= r) {
        return Ok(ClassificationResult {
            case: ClassificationCase::WeaklyStablePeriodic,
            spatial_period: Some(spatial_period(cfg)),
            max_unstable_run: None,
        });
    }
    Err(Error::InvariantViolated(format!(
        "periodic configuration {cfg} mixes blocks of length <= {r} and > {r}"
    )))
}

/// `2·φ(current, previous)` as an exact integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PotentialValue {
    pub doubled: i64,
}

/// `g(i)`: number of ones in the radius-`r` neighborhood of every cell.
pub(crate) fn neighborhood_ones(cfg: &Configuration, r: usize) -> Vec<i64> {
    let n = cfg.n() as isize;
    let ri = r as isize;
    // prefix sums over one period make each window O(1) even when it wraps
    let mut prefix = vec![0i64; cfg.n() + 1];
    for i in 0..cfg.n() {
        prefix[i + 1] = prefix[i] + cfg.get(i) as i64;
    }
    let total = prefix[cfg.n()];
    let upto = |x: isize| -> i64 {
        // number of ones in cells [0, x) of the periodic extension
        let q = x.div_euclid(n);
        let rem = x.rem_euclid(n) as usize;
        q as i64 * total + prefix[rem]
    };
    (0..n).map(|i| upto(i + ri + 1) - upto(i - ri)).collect()
}

pub fn potential2(
    previous: &Configuration,
    current: &Configuration,
    r: usize,
) -> Result<PotentialValue> {
    if previous.n() != current.n() {
        return Err(Error::LengthMismatch(previous.n(), current.n()));
    }
    let g = neighborhood_ones(previous, r);
    let cross: i64 = (0..current.n())
        .filter(|&i| current.get(i) == 1)
        .map(|i| g[i])
        .sum();
    let ones = (current.count_ones() + previous.count_ones()) as i64;
    Ok(PotentialValue {
        doubled: 2 * cross - (2 * r as i64 + 1) * ones,
    })
}

/// Whether a temporally periodic configuration with every block of length
/// at most `r` has as many zeros as ones.
pub fn is_balanced_weakly_stable(cfg: &Configuration, r: usize) -> Result<bool> {
    let rule = Rule::majority(r);
    if step(&step(cfg, rule), rule) != *cfg {
        return Err(Error::precondition(
            "configuration is not temporally periodic",
        ));
    }
    let decomp = blocks(cfg);
    if decomp.is_homogeneous() || decomp.blocks().iter().any(|b| b.len > r) {
        return Err(Error::precondition(
            "configuration has a block longer than r",
        ));
    }
    Ok(bias(cfg, CellInterval::ring(cfg.n())) == 0)
}
