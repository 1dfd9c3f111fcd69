//! Maximal homogeneous blocks, switch points and block-length vectors.

use std::fmt;

use crate::automaton::{count_states, step, CellInterval, Configuration, Rule};
use crate::error::{Error, Result};

/// A maximal run of equal states. `end` is reduced mod `n`, so a block that
/// wraps past cell `n - 1` has `end < start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub len: usize,
    pub value: u8,
}

impl Block {
    /// The block as a cell interval with an unreduced end (`end >= start`).
    pub fn interval(&self) -> CellInterval {
        CellInterval::new(self.start as isize, (self.start + self.len - 1) as isize)
    }

    /// Whether cell `i` (reduced mod `n`) lies in the block.
    pub fn contains(&self, i: usize, n: usize) -> bool {
        (i % n + n - self.start) % n < self.len
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}):{}", self.start, self.end, self.value)
    }
}

/// The tiling `B(σ)` of the ring by maximal homogeneous blocks, in ring
/// order; index 0 is the block containing cell 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    n: usize,
    blocks: Vec<Block>,
    cell_block: Vec<u32>,
}

impl BlockDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `b(σ)`.
    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Block at cyclic position `k`.
    pub fn get(&self, k: isize) -> &Block {
        &self.blocks[k.rem_euclid(self.blocks.len() as isize) as usize]
    }

    /// Position of the block containing cell `i mod n`.
    pub fn index_of_cell(&self, i: isize) -> usize {
        self.cell_block[i.rem_euclid(self.n as isize) as usize] as usize
    }

    pub fn block_of_cell(&self, i: isize) -> &Block {
        &self.blocks[self.index_of_cell(i)]
    }

    /// Position of `block` in the decomposition, if it is one of its blocks.
    pub fn index_of(&self, block: &Block) -> Option<usize> {
        if block.start >= self.n {
            return None;
        }
        let k = self.index_of_cell(block.start as isize);
        (self.blocks[k] == *block).then_some(k)
    }

    /// Pairs `(i, i + 1 mod n)` with different states, ordered by `i`.
    pub fn switch_points(&self) -> Vec<(usize, usize)> {
        if self.is_homogeneous() {
            return Vec::new();
        }
        let mut points: Vec<(usize, usize)> = self
            .blocks
            .iter()
            .map(|b| (b.end, (b.end + 1) % self.n))
            .collect();
        points.sort_unstable();
        points
    }

    /// Block lengths, in decomposition order.
    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len).collect()
    }
}

/// Computes `B(σ)`. A homogeneous ring is one block `[0, n - 1]`.
pub fn blocks(cfg: &Configuration) -> BlockDecomposition {
    let n = cfg.n();
    if cfg.is_homogeneous() {
        return BlockDecomposition {
            n,
            blocks: vec![Block {
                start: 0,
                end: n - 1,
                len: n,
                value: cfg.get(0),
            }],
            cell_block: vec![0; n],
        };
    }
    let mut starts: Vec<usize> = (0..n)
        .filter(|&i| cfg.get(i) != cfg.get((i + n - 1) % n))
        .collect();
    if starts[0] != 0 {
        // the block holding cell 0 wraps around from the last start
        starts.rotate_right(1);
    }
    let k = starts.len();
    let mut cell_block = vec![0u32; n];
    let blocks: Vec<Block> = (0..k)
        .map(|idx| {
            let start = starts[idx];
            let next = starts[(idx + 1) % k];
            let len = (next + n - start) % n;
            for off in 0..len {
                cell_block[(start + off) % n] = idx as u32;
            }
            Block {
                start,
                end: (start + len - 1) % n,
                len,
                value: cfg.get(start),
            }
        })
        .collect();
    BlockDecomposition {
        n,
        blocks,
        cell_block,
    }
}

/// The cyclic sequence of block lengths, anchored at the block containing
/// cell 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockLengthVector {
    pub lengths: Vec<usize>,
    /// Value of the block at index 0.
    pub start_value: u8,
    /// First cell of the block at index 0.
    pub anchor: usize,
}

impl BlockLengthVector {
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Entry at cyclic index `k`.
    pub fn at(&self, k: isize) -> usize {
        self.lengths[k.rem_euclid(self.lengths.len() as isize) as usize]
    }

    /// Rebuilds the configuration the vector was taken from.
    pub fn reconstruct(&self) -> Configuration {
        let n = self.total();
        let mut cfg = Configuration::zeros(n);
        let mut pos = self.anchor;
        let mut value = self.start_value;
        for &len in &self.lengths {
            for _ in 0..len {
                cfg.set(pos % n, value);
                pos += 1;
            }
            value ^= 1;
        }
        cfg
    }
}

pub fn block_length_vector(cfg: &Configuration) -> BlockLengthVector {
    let decomp = blocks(cfg);
    let first = decomp.blocks()[0];
    BlockLengthVector {
        lengths: decomp.lengths(),
        start_value: first.value,
        anchor: first.start,
    }
}

/// `#_0 - #_1` over the interval; the interval is balanced iff this is 0.
pub fn bias(cfg: &Configuration, interval: CellInterval) -> i64 {
    let len = interval.len(cfg.n()) as i64;
    let ones = count_states(cfg, interval, 1) as i64;
    len - 2 * ones
}

pub(crate) fn check_successor(prev: &Configuration, next: &Configuration, r: usize) -> Result<()> {
    if prev.n() != next.n() {
        return Err(Error::LengthMismatch(prev.n(), next.n()));
    }
    if step(prev, Rule::majority(r)) != *next {
        return Err(Error::precondition(
            "next is not the majority successor of prev",
        ));
    }
    Ok(())
}

pub(crate) fn check_member(
    decomp: &BlockDecomposition,
    block: &Block,
    which: &str,
) -> Result<usize> {
    decomp
        .index_of(block)
        .ok_or_else(|| Error::precondition(format!("{block} is not a block of {which}")))
}

/// Length of a short block of `next = maj_r(prev)` computed from `prev`
/// alone: `#_β(prev[i-r, j+r]) - #_β̄(prev[j-r, i+r])`.
pub fn predict_block_length(
    prev: &Configuration,
    next: &Configuration,
    block: &Block,
    r: usize,
) -> Result<usize> {
    if r == 0 {
        return Err(Error::InvalidRadius);
    }
    check_successor(prev, next, r)?;
    let decomp = blocks(next);
    check_member(&decomp, block, "next")?;
    if decomp.is_homogeneous() {
        return Err(Error::precondition(
            "next is homogeneous and has no switch points",
        ));
    }
    if block.len > 2 * r + 1 {
        return Err(Error::precondition(format!(
            "block length {} exceeds 2r+1 = {}",
            block.len,
            2 * r + 1
        )));
    }
    let ri = r as isize;
    let i = block.start as isize;
    let j = i + block.len as isize - 1;
    let beta = block.value;
    let same = count_states(prev, CellInterval::new(i - ri, j + ri), beta) as i64;
    let other = count_states(prev, CellInterval::new(j - ri, i + ri), 1 - beta) as i64;
    let predicted = same - other;
    usize::try_from(predicted).map_err(|_| {
        Error::InvariantViolated(format!("negative predicted block length {predicted}"))
    })
}

/// Predicts a switch point of `maj_r(prev)` at `(i, i+1)` from `prev`: present
/// when `[i-r+1, i+r]` is balanced and `prev(i-r) != prev(i+1+r)`, in which
/// case the successor takes exactly those two values.
pub fn predict_switch_point(prev: &Configuration, i: usize, r: usize) -> Option<(u8, u8)> {
    let i = i as isize;
    let ri = r as isize;
    if bias(prev, CellInterval::new(i - ri + 1, i + ri)) != 0 {
        return None;
    }
    let left = prev.at(i - ri);
    let right = prev.at(i + 1 + ri);
    (left != right).then_some((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn blk(start: usize, end: usize, len: usize, value: u8) -> Block {
        Block {
            start,
            end,
            len,
            value,
        }
    }

    /// Linear scan with a merge of the wrapped first and last runs.
    fn scan_blocks(c: &Configuration) -> Vec<(usize, usize, u8)> {
        let n = c.n();
        let bits = c.to_bits();
        let mut runs: Vec<(usize, usize, u8)> = Vec::new();
        for (i, &b) in bits.iter().enumerate() {
            match runs.last_mut() {
                Some(last) if last.2 == b => last.1 += 1,
                _ => runs.push((i, 1, b)),
            }
        }
        if runs.len() > 1 && runs[0].2 == runs.last().unwrap().2 {
            let (s, l, v) = runs.pop().unwrap();
            runs[0] = (s, l + runs[0].1, v);
        }
        runs.iter()
            .map(|&(s, l, v)| (s, (s + l - 1) % n, v))
            .collect()
    }

    #[test]
    fn block_examples() {
        let d = blocks(&cfg("001011"));
        assert_eq!(
            d.blocks(),
            &[
                blk(0, 1, 2, 0),
                blk(2, 2, 1, 1),
                blk(3, 3, 1, 0),
                blk(4, 5, 2, 1)
            ]
        );
        assert_eq!(d.count(), 4);

        let d = blocks(&Configuration::zeros(5));
        assert_eq!(d.blocks(), &[blk(0, 4, 5, 0)]);
        assert!(d.switch_points().is_empty());

        assert_eq!(blocks(&cfg("0011")).switch_points(), vec![(1, 2), (3, 0)]);

        let wrapped = blocks(&cfg("100011"));
        assert_eq!(wrapped.blocks()[0], blk(4, 0, 3, 1));
        assert!(wrapped.blocks()[0].contains(5, 6));
        assert!(!wrapped.blocks()[0].contains(2, 6));
    }

    #[test]
    fn block_length_vector_examples() {
        let v = block_length_vector(&cfg("0011").repeat(3));
        assert_eq!(v.lengths, vec![2; 6]);
        assert_eq!(v.start_value, 0);
        let v = block_length_vector(&cfg("001011"));
        assert_eq!(v.lengths, vec![2, 1, 1, 2]);
        assert_eq!(v.start_value, 0);
        let v = block_length_vector(&Configuration::zeros(5));
        assert_eq!(v.lengths, vec![5]);
        assert_eq!(v.start_value, 0);
    }

    #[test]
    fn bias_examples() {
        let c = cfg("0011");
        assert_eq!(bias(&c, CellInterval::new(0, 3)), 0);
        assert_eq!(bias(&c, CellInterval::new(0, 1)), 2);
        let alt = cfg("01").repeat(4);
        assert_eq!(bias(&alt, CellInterval::ring(8)), 0);
    }

    #[test]
    fn predict_block_length_example() {
        let prev = cfg("0011").repeat(3);
        let next = step(&prev, Rule::majority(2));
        let b = blocks(&next).blocks()[0];
        assert_eq!(b, blk(0, 1, 2, 1));
        // #_1(prev[-2,3]) = 4, #_0(prev[-1,2]) = 2
        assert_eq!(count_states(&prev, CellInterval::new(-2, 3), 1), 4);
        assert_eq!(count_states(&prev, CellInterval::new(-1, 2), 0), 2);
        assert_eq!(predict_block_length(&prev, &next, &b, 2), Ok(2));
    }

    #[test]
    fn predict_block_length_guards() {
        // strongly stable fixed point with a block longer than 2r+1
        let fixed = cfg("0000001111111");
        assert_eq!(step(&fixed, Rule::majority(1)), fixed);
        let long = blocks(&fixed).blocks()[1];
        assert!(matches!(
            predict_block_length(&fixed, &fixed, &long, 1),
            Err(Error::PreconditionViolated(_))
        ));
        let prev = cfg("0011").repeat(3);
        let b = blocks(&prev).blocks()[0];
        assert!(matches!(
            predict_block_length(&prev, &prev, &b, 2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn predict_switch_point_examples() {
        let prev = cfg("0011").repeat(3);
        assert_eq!(bias(&prev, CellInterval::new(10, 13)), 0);
        assert_eq!(predict_switch_point(&prev, 11, 2), Some((0, 1)));
        let next = step(&prev, Rule::majority(2));
        assert_eq!((next.get(11), next.get(0)), (0, 1));

        for i in 0..8 {
            assert_eq!(predict_switch_point(&Configuration::zeros(8), i, 1), None);
        }
    }

    fn arb_cfg(max_n: usize) -> impl Strategy<Value = Configuration> {
        prop::collection::vec(0u8..=1, 1..=max_n).prop_map(|b| Configuration::from_bits(&b))
    }

    proptest! {
        #[test]
        fn blocks_match_scan(c in arb_cfg(90)) {
            let d = blocks(&c);
            let scanned = scan_blocks(&c);
            let mut ours: Vec<_> = d.blocks().iter().map(|b| (b.start, b.end, b.value)).collect();
            let mut theirs = scanned.clone();
            ours.sort();
            theirs.sort();
            prop_assert_eq!(ours, theirs);
            prop_assert_eq!(d.lengths().iter().sum::<usize>(), c.n());
            prop_assert!(d.count() == 1 || d.count().is_multiple_of(2));
            prop_assert!(d.blocks()[0].contains(0, c.n()));
            for w in 0..d.count() {
                let a = d.get(w as isize);
                let b = d.get(w as isize + 1);
                if d.count() > 1 {
                    prop_assert_ne!(a.value, b.value);
                    prop_assert_eq!((a.end + 1) % c.n(), b.start);
                }
            }
        }

        #[test]
        fn block_length_vector_round_trip(c in arb_cfg(120)) {
            let v = block_length_vector(&c);
            prop_assert_eq!(v.total(), c.n());
            prop_assert_eq!(v.reconstruct(), c);
        }

        #[test]
        fn switch_point_argument_and_balance(c in arb_cfg(100), r in 1usize..7) {
            let next = step(&c, Rule::majority(r));
            let ri = r as isize;
            for (i, _) in blocks(&next).switch_points() {
                let i = i as isize;
                prop_assert_eq!(c.at(i - ri), next.at(i));
                prop_assert_eq!(c.at(i + 1 + ri), next.at(i + 1));
                prop_assert_eq!(bias(&c, CellInterval::new(i - ri + 1, i + ri)), 0);
            }
        }

        #[test]
        fn converse_predictor_is_sound(c in arb_cfg(100), r in 1usize..7) {
            let next = step(&c, Rule::majority(r));
            for i in 0..c.n() {
                let predicted = predict_switch_point(&c, i, r);
                if let Some((a, b)) = predicted {
                    prop_assert_eq!((next.get(i), next.get(i + 1)), (a, b));
                }
                // every actual switch point is predicted
                if next.get(i) != next.get(i + 1) {
                    prop_assert_eq!(predicted, Some((next.get(i), next.get(i + 1))));
                }
            }
        }

        #[test]
        fn block_length_formula(c in arb_cfg(64), r in 1usize..5) {
            let next = step(&c, Rule::majority(r));
            let d = blocks(&next);
            if !d.is_homogeneous() {
                for b in d.blocks().iter().filter(|b| b.len <= 2 * r + 1) {
                    prop_assert_eq!(predict_block_length(&c, &next, b, r).unwrap(), b.len);
                }
            }
        }

        #[test]
        fn block_count_never_increases(c in arb_cfg(100), r in 1usize..7) {
            let next = step(&c, Rule::majority(r));
            prop_assert!(blocks(&next).count() <= blocks(&c).count());
        }
    }
}
