//! Block mappings between consecutive configurations.
//!
//! For `next = maj_r(prev)` and a block `[i, j]` of `next`, the left mapping
//! picks the block of `prev` containing `j - r` and the right mapping the one
//! containing `i + r`. The blocks of `prev` between them form an odd-sized
//! block interval whose middle element is the image under the (backward)
//! alignment mapping.
//!
//! Positions are tracked on the infinite periodic extension of the ring: for
//! a block of length at most `2r + 1` the span from `j - r` to `i + r` is
//! walked cell by cell, so on very small rings the block interval may visit
//! the same block more than once. Longer blocks (length `>= 2r + 2`) have
//! `j - r` to the right of `i + r`, and their interval runs from the right
//! image to the left image, again following the cells between the two.

use crate::automaton::{step, Configuration, Rule};
use crate::error::{Error, Result};
use crate::structure::{
    block_length_vector, blocks, check_member, check_successor, Block, BlockDecomposition,
    BlockLengthVector,
};

/// A contiguous run of blocks taken from one decomposition, in ring order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockInterval {
    pub blocks: Vec<Block>,
}

impl BlockInterval {
    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    /// Middle block, defined for odd sizes.
    pub fn middle(&self) -> Option<&Block> {
        (self.size() % 2 == 1).then(|| &self.blocks[self.size() / 2])
    }

    /// Total number of cells covered, counting repeats.
    pub fn total_len(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }
}

/// `[from, to]_B`: the blocks of `decomp` met walking the ring from `from`
/// to `to`, both included.
pub fn block_interval(
    decomp: &BlockDecomposition,
    from: &Block,
    to: &Block,
) -> Result<BlockInterval> {
    let first = check_member(decomp, from, "the decomposition")?;
    let last = check_member(decomp, to, "the decomposition")?;
    let k = decomp.count();
    let size = (last + k - first) % k + 1;
    Ok(BlockInterval {
        blocks: (0..size)
            .map(|s| *decomp.get((first + s) as isize))
            .collect(),
    })
}

/// Images of one block of `next` in `prev`, by position in `blocks(prev)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappedBlock {
    /// Position of `f←` (block containing `j - r`).
    pub left: usize,
    /// Position of `f→` (block containing `i + r`).
    pub right: usize,
    /// Position of the first block of the interval in ring order: `left`
    /// for blocks of length at most `2r + 1`, `right` for longer ones.
    pub first: usize,
    /// Number of blocks in the interval.
    pub span: usize,
}

impl MappedBlock {
    /// Position of the middle block of the interval.
    pub fn middle(&self, k: usize) -> Option<usize> {
        (self.span % 2 == 1).then(|| (self.first + self.span / 2) % k)
    }

    pub fn horizon(&self) -> Option<usize> {
        (self.span % 2 == 1).then_some(self.span / 2)
    }
}

/// The mapping data for every block of `next`, computed once.
#[derive(Debug, Clone)]
pub struct Transition {
    pub prev: BlockDecomposition,
    pub next: BlockDecomposition,
    pub radius: usize,
    pub mapped: Vec<MappedBlock>,
}

impl Transition {
    /// Validates `next = maj_r(prev)` and builds the table.
    pub fn new(prev: &Configuration, next: &Configuration, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidRadius);
        }
        check_successor(prev, next, r)?;
        Ok(Self::unchecked(prev, next, r))
    }

    pub(crate) fn unchecked(prev: &Configuration, next: &Configuration, r: usize) -> Self {
        let prev_d = blocks(prev);
        let next_d = blocks(next);
        let mapped = next_d
            .blocks()
            .iter()
            .map(|b| map_block(prev, &prev_d, b, r))
            .collect();
        Self {
            prev: prev_d,
            next: next_d,
            radius: r,
            mapped,
        }
    }

    /// Position in `prev` of the alignment image of `next` block `k`.
    pub fn aligned(&self, k: usize) -> Option<usize> {
        self.mapped[k].middle(self.prev.count())
    }

    /// The block interval between `f←` and `f→` for `next` block `k`.
    pub fn interval(&self, k: usize) -> BlockInterval {
        let m = self.mapped[k];
        BlockInterval {
            blocks: (0..m.span)
                .map(|s| *self.prev.get((m.first + s) as isize))
                .collect(),
        }
    }

    /// Inverse of the alignment table: for each block of `prev`, the block
    /// of `next` aligned to it, if any.
    pub fn forward(&self) -> Result<Vec<Option<usize>>> {
        let mut inverse = vec![None; self.prev.count()];
        for k in 0..self.next.count() {
            if let Some(p) = self.aligned(k) {
                if let Some(other) = inverse[p] {
                    return Err(Error::InvariantViolated(format!(
                        "next blocks {other} and {k} align to the same block {p}"
                    )));
                }
                inverse[p] = Some(k);
            }
        }
        Ok(inverse)
    }
}

fn map_block(
    prev: &Configuration,
    prev_d: &BlockDecomposition,
    block: &Block,
    r: usize,
) -> MappedBlock {
    let ri = r as isize;
    let i = block.start as isize;
    let j = i + block.len as isize - 1;
    let (a, b) = (j - ri, i + ri);
    let (lo, hi) = (a.min(b), a.max(b));
    MappedBlock {
        left: prev_d.index_of_cell(a),
        right: prev_d.index_of_cell(b),
        first: prev_d.index_of_cell(lo),
        span: 1 + (lo..hi).filter(|&l| prev.at(l) != prev.at(l + 1)).count(),
    }
}

/// `(f←(block), f→(block))`.
pub fn left_right_mapping(
    prev: &Configuration,
    next: &Configuration,
    block: &Block,
    r: usize,
) -> Result<(Block, Block)> {
    let t = Transition::new(prev, next, r)?;
    let k = check_member(&t.next, block, "next")?;
    let m = t.mapped[k];
    Ok((t.prev.blocks()[m.left], t.prev.blocks()[m.right]))
}

/// Backward alignment: the middle block of `[f←(block), f→(block)]` in `prev`.
///
/// Fails only when that interval has even size, which can happen solely when
/// `next` is homogeneous.
pub fn alignment(
    prev: &Configuration,
    next: &Configuration,
    block: &Block,
    r: usize,
) -> Result<Block> {
    let t = Transition::new(prev, next, r)?;
    let k = check_member(&t.next, block, "next")?;
    t.aligned(k)
        .map(|p| t.prev.blocks()[p])
        .ok_or_else(|| Error::precondition("block interval has even size"))
}

/// Forward alignment: the block of `next` whose backward image is `block`,
/// or `None` when no block of `next` maps onto it.
pub fn forward_alignment(
    prev: &Configuration,
    next: &Configuration,
    block: &Block,
    r: usize,
) -> Result<Option<Block>> {
    let t = Transition::new(prev, next, r)?;
    let p = check_member(&t.prev, block, "prev")?;
    Ok(t.forward()?[p].map(|k| t.next.blocks()[k]))
}

/// A temporally periodic pair `σ' = maj_r(σ)`, `σ = maj_r(σ')` with its
/// block-length vectors aligned so that the alignment mapping sends `σ'`
/// block `k` to `σ` block `k`.
#[derive(Debug, Clone)]
pub struct AlignedPair {
    pub sigma: Configuration,
    pub sigma_next: Configuration,
    pub radius: usize,
    /// Block-length vector of `σ`, anchored at the block containing cell 0.
    pub v: BlockLengthVector,
    /// Block-length vector of `σ'`, re-indexed to match `v`.
    pub v_next: BlockLengthVector,
    /// Aligned index `k` to position in `blocks(σ')`.
    pub next_index: Vec<usize>,
    /// Common horizon `δ`.
    pub horizon: usize,
    /// Mapping from `σ'` back to `σ`.
    pub backward: Transition,
    /// Mapping from `σ` back to `σ'` (the pair read the other way round).
    pub reverse: Transition,
}

impl AlignedPair {
    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn sigma_block(&self, k: isize) -> &Block {
        self.backward.prev.get(k)
    }

    pub fn next_block(&self, k: isize) -> &Block {
        let idx = self.next_index[k.rem_euclid(self.len() as isize) as usize];
        &self.backward.next.blocks()[idx]
    }

    /// `Σ_{j=-δ}^{δ} (-1)^{j+δ} v_{i+j}`.
    pub fn alternating_sum(&self, i: isize) -> i64 {
        let d = self.horizon as isize;
        (-d..=d)
            .map(|j| {
                let sign = if (j + d) % 2 == 0 { 1 } else { -1 };
                sign * self.v.at(i + j) as i64
            })
            .sum()
    }

    /// Whether every block of both configurations has length at most `r`.
    pub fn is_weakly_stable(&self) -> bool {
        self.v
            .lengths
            .iter()
            .chain(&self.v_next.lengths)
            .all(|&l| l <= self.radius)
    }
}

/// Builds the aligned pair for a temporally periodic, non-homogeneous `sigma`.
pub fn make_aligned_pair(sigma: &Configuration, r: usize) -> Result<AlignedPair> {
    if r == 0 {
        return Err(Error::InvalidRadius);
    }
    let rule = Rule::majority(r);
    let sigma_next = step(sigma, rule);
    if step(&sigma_next, rule) != *sigma {
        return Err(Error::NotTemporallyPeriodic);
    }
    if sigma.is_homogeneous() {
        return Err(Error::HomogeneousConfiguration);
    }
    let backward = Transition::unchecked(sigma, &sigma_next, r);
    let reverse = Transition::unchecked(&sigma_next, sigma, r);
    let k = backward.prev.count();
    if backward.next.count() != k {
        return Err(Error::InvariantViolated(format!(
            "block counts differ: {} vs {}",
            k,
            backward.next.count()
        )));
    }
    let horizon = common_horizon(&backward)?;
    let reverse_horizon = common_horizon(&reverse)?;
    if horizon != reverse_horizon {
        return Err(Error::InvariantViolated(format!(
            "horizon {horizon} differs from reverse horizon {reverse_horizon}"
        )));
    }
    let forward = backward.forward()?;
    let next_index: Vec<usize> = forward
        .iter()
        .enumerate()
        .map(|(p, f)| {
            f.ok_or_else(|| Error::InvariantViolated(format!("block {p} of sigma has no preimage")))
        })
        .collect::<Result<_>>()?;
    let first = backward.next.blocks()[next_index[0]];
    let v_next = BlockLengthVector {
        lengths: next_index
            .iter()
            .map(|&idx| backward.next.blocks()[idx].len)
            .collect(),
        start_value: first.value,
        anchor: first.start,
    };
    Ok(AlignedPair {
        v: block_length_vector(sigma),
        sigma: sigma.clone(),
        sigma_next,
        radius: r,
        v_next,
        next_index,
        horizon,
        backward,
        reverse,
    })
}

fn common_horizon(t: &Transition) -> Result<usize> {
    let mut horizons = t.mapped.iter().map(|m| {
        m.horizon()
            .ok_or_else(|| Error::InvariantViolated("even block interval".into()))
    });
    let first = horizons.next().expect("at least one block")?;
    for h in horizons {
        let h = h?;
        if h != first {
            return Err(Error::InvariantViolated(format!(
                "horizon is not constant ({first} vs {h})"
            )));
        }
    }
    Ok(first)
}

/// `φ^k` starting from a block of `σ'`: odd applications map `σ'` blocks to
/// `σ` blocks, even applications map back.
pub fn iterate_alignment(pair: &AlignedPair, block: &Block, k: usize) -> Result<Block> {
    let mut pos = check_member(&pair.backward.next, block, "sigma_next")?;
    let mut on_next = true;
    for _ in 0..k {
        let table = if on_next {
            &pair.backward
        } else {
            &pair.reverse
        };
        pos = table
            .aligned(pos)
            .ok_or_else(|| Error::InvariantViolated("even block interval".into()))?;
        on_next = !on_next;
    }
    let decomp = if on_next {
        &pair.backward.next
    } else {
        &pair.backward.prev
    };
    Ok(decomp.blocks()[pos])
}

/// The `(δ+1)`-step difference vectors of a weakly stable aligned pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceVectors {
    /// `Δ_i = v'_{i+δ+1} - v_i`.
    pub delta: Vec<i64>,
    /// `Δ'_i = v_{i+δ+1} - v'_i`.
    pub delta_prime: Vec<i64>,
    /// `δ + 1`.
    pub step_size: usize,
}

impl DifferenceVectors {
    pub fn delta_at(&self, i: isize) -> i64 {
        self.delta[i.rem_euclid(self.delta.len() as isize) as usize]
    }

    pub fn delta_prime_at(&self, i: isize) -> i64 {
        self.delta_prime[i.rem_euclid(self.delta_prime.len() as isize) as usize]
    }

    /// `Σ_{j<m} Δ_{i+2j(δ+1)} + Σ_{j<m} Δ'_{i+(2j+1)(δ+1)}`.
    pub fn telescoped(&self, i: isize, m: usize) -> i64 {
        let s = self.step_size as isize;
        (0..m as isize)
            .map(|j| self.delta_at(i + 2 * j * s) + self.delta_prime_at(i + (2 * j + 1) * s))
            .sum()
    }

    /// `ς(i)`: the telescoped sum over `m = 2δ` rounds.
    pub fn varsigma(&self, i: isize) -> i64 {
        self.telescoped(i, 2 * (self.step_size - 1))
    }
}

pub fn difference_vectors(pair: &AlignedPair) -> Result<DifferenceVectors> {
    if !pair.is_weakly_stable() {
        return Err(Error::precondition("pair is not weakly stable"));
    }
    let d = pair.horizon as isize;
    let k = pair.len() as isize;
    let v = |i: isize| pair.v.at(i) as i64;
    let vn = |i: isize| pair.v_next.at(i) as i64;
    Ok(DifferenceVectors {
        delta: (0..k).map(|i| vn(i + d + 1) - v(i)).collect(),
        delta_prime: (0..k).map(|i| v(i + d + 1) - vn(i)).collect(),
        step_size: pair.horizon + 1,
    })
}
