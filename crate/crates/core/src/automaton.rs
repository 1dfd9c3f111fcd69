//! Cyclic binary configurations and the majority/minority rule engine.
//!
//! Cells are indexed by `Z_n`; every index is reduced modulo the ring size.
//! Neighborhoods and cell intervals are *sequences*: when an interval is
//! longer than the ring it visits cells repeatedly and every visit counts.
//! This is exactly the behaviour of the infinite periodic extension of the
//! ring, so a pattern `s` evaluated as a ring of size `|s|` evolves the same
//! way as `s^k` for every `k >= 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// A state assignment `Z_n -> {0,1}`, bit-packed with cell `i` at bit
/// `i % 64` of word `i / 64`. Unused high bits of the last word are zero.
///
/// Equality is positional: rotations of a configuration are distinct values.
/// The ordering sorts by ring size first and then lexicographically by the
/// printed string (cell 0 first).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    n: usize,
    words: Vec<u64>,
}

impl Configuration {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "ring size must be positive");
        Self {
            n,
            words: vec![0; n.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self::zeros(n).complement()
    }

    /// Builds a configuration from a slice of states. Panics on an empty
    /// slice or on values other than 0 and 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut cfg = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            assert!(b <= 1, "state must be 0 or 1, got {b}");
            if b == 1 {
                cfg.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        cfg
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> u8) -> Self {
        let mut cfg = Self::zeros(n);
        for i in 0..n {
            cfg.set(i, f(i));
        }
        cfg
    }

    /// Ring of size `n <= 64` whose cell `i` is bit `i` of `word`.
    pub fn from_word(word: u64, n: usize) -> Self {
        assert!((1..=WORD_BITS).contains(&n));
        Self {
            n,
            words: vec![word & low_mask(n)],
        }
    }

    /// The packed word for rings of size at most 64.
    pub fn word(&self) -> Option<u64> {
        (self.n <= WORD_BITS).then(|| self.words[0])
    }

    /// Ring of size `n <= 64` whose printed string is the `n`-bit binary
    /// expansion of `index`, so ascending indices are ascending strings.
    pub fn from_lex_index(index: u64, n: usize) -> Self {
        assert!((1..=WORD_BITS).contains(&n));
        Self::from_word(index.reverse_bits() >> (WORD_BITS - n), n)
    }

    pub fn lex_index(&self) -> Option<u64> {
        self.word()
            .map(|w| w.reverse_bits() >> (WORD_BITS - self.n))
    }

    /// Ring size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// State of cell `i mod n`.
    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        let i = i % self.n;
        ((self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1) as u8
    }

    /// State of cell `i mod n` for a signed index.
    #[inline]
    pub fn at(&self, i: isize) -> u8 {
        self.get(i.rem_euclid(self.n as isize) as usize)
    }

    pub fn set(&mut self, i: usize, state: u8) {
        assert!(state <= 1, "state must be 0 or 1, got {state}");
        let i = i % self.n;
        let bit = 1u64 << (i % WORD_BITS);
        if state == 1 {
            self.words[i / WORD_BITS] |= bit;
        } else {
            self.words[i / WORD_BITS] &= !bit;
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.n).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.bits().collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_homogeneous(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.n
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.n % WORD_BITS;
        if tail != 0 {
            *words.last_mut().unwrap() &= low_mask(tail);
        }
        Self { n: self.n, words }
    }

    /// Cyclic shift with `rotate(k)(i) = self(i + k)`.
    pub fn rotate(&self, k: isize) -> Self {
        let shift = k.rem_euclid(self.n as isize) as usize;
        self.shifted(shift)
    }

    /// Reflection `mirror()(i) = self(n - 1 - i)`.
    pub fn mirror(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i| self.get(n - 1 - i))
    }

    /// The configuration repeated `copies` times around a larger ring.
    pub fn repeat(&self, copies: usize) -> Self {
        assert!(copies >= 1);
        let n = self.n;
        Self::from_fn(n * copies, |i| self.get(i % n))
    }

    /// Number of cells where the two configurations differ.
    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// `count` consecutive cells starting at `pos`, wrapping around the ring
    /// as often as needed; bit `k` of the result is cell `pos + k`.
    #[inline]
    pub(crate) fn read_bits(&self, pos: usize, count: usize) -> u64 {
        debug_assert!(count <= WORD_BITS);
        let mut out = 0u64;
        let mut filled = 0;
        let mut p = pos % self.n;
        while filled < count {
            let off = p % WORD_BITS;
            let take = (count - filled).min(WORD_BITS - off).min(self.n - p);
            let chunk = (self.words[p / WORD_BITS] >> off) & low_mask(take);
            out |= chunk << filled;
            filled += take;
            p += take;
            if p == self.n {
                p = 0;
            }
        }
        out
    }

    fn shifted(&self, shift: usize) -> Self {
        if shift == 0 {
            return self.clone();
        }
        let mut words = vec![0u64; self.words.len()];
        for (w, slot) in words.iter_mut().enumerate() {
            let start = w * WORD_BITS;
            let count = (self.n - start).min(WORD_BITS);
            *slot = self.read_bits((start + shift) % self.n, count);
        }
        Self { n: self.n, words }
    }
}

impl Ord for Configuration {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                let diff = a ^ b;
                if diff != 0 {
                    let bit = diff.trailing_zeros();
                    return if (a >> bit) & 1 == 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits()
            .map(|b| if b == 1 { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({self})")
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_configuration(s, 1)
    }
}

/// Parses a string over `{0,1}` and repeats it `copies` times.
pub fn parse_configuration(text: &str, copies: usize) -> Result<Configuration> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    if copies == 0 {
        return Err(Error::ZeroCopies);
    }
    let mut bits = Vec::with_capacity(text.len());
    for (position, ch) in text.chars().enumerate() {
        match ch {
            '0' => bits.push(0),
            '1' => bits.push(1),
            found => return Err(Error::InvalidCharacter { found, position }),
        }
    }
    let base = Configuration::from_bits(&bits);
    Ok(if copies == 1 {
        base
    } else {
        base.repeat(copies)
    })
}

/// The cell sequence `start, start+1, ..., end` (indices taken mod `n`).
///
/// Endpoints are kept unreduced. If `end >= start` the interval has
/// `end - start + 1` cells, which may exceed `n`; otherwise it wraps once
/// and has `((end - start) mod n) + 1` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellInterval {
    pub start: isize,
    pub end: isize,
}

impl CellInterval {
    pub fn new(start: isize, end: isize) -> Self {
        Self { start, end }
    }

    /// `Γ_r(i) = [i - r, i + r]`.
    pub fn neighborhood(i: isize, radius: usize) -> Self {
        let r = radius as isize;
        Self::new(i - r, i + r)
    }

    /// The whole ring `[0, n - 1]`.
    pub fn ring(n: usize) -> Self {
        Self::new(0, n as isize - 1)
    }

    pub fn len(&self, n: usize) -> usize {
        if self.end >= self.start {
            (self.end - self.start + 1) as usize
        } else {
            (self.end - self.start).rem_euclid(n as isize) as usize + 1
        }
    }

    /// Reduced cell indices in sequence order, with repetitions.
    pub fn cells(&self, n: usize) -> impl Iterator<Item = usize> {
        let start = self.start;
        (0..self.len(n)).map(move |k| (start + k as isize).rem_euclid(n as isize) as usize)
    }
}

/// `#_state(cfg[interval])`, counting repeated visits.
pub fn count_states(cfg: &Configuration, interval: CellInterval, state: u8) -> usize {
    let n = cfg.n();
    let len = interval.len(n);
    let mut pos = interval.start.rem_euclid(n as isize) as usize;
    let mut remaining = len;
    let mut ones = 0usize;
    while remaining > 0 {
        let take = remaining.min(WORD_BITS);
        ones += cfg.read_bits(pos, take).count_ones() as usize;
        pos = (pos + take) % n;
        remaining -= take;
    }
    if state == 1 {
        ones
    } else {
        len - ones
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Majority,
    Minority,
}

impl RuleKind {
    pub fn short_name(self) -> &'static str {
        match self {
            RuleKind::Majority => "maj",
            RuleKind::Minority => "min",
        }
    }
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "maj" | "majority" => Ok(RuleKind::Majority),
            "min" | "minority" => Ok(RuleKind::Minority),
            other => Err(format!("unknown rule {other:?}, expected maj or min")),
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Majority or minority rule over the `2r + 1` cells centred on each cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub kind: RuleKind,
    pub radius: usize,
}

impl Rule {
    pub fn new(kind: RuleKind, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidRadius);
        }
        Ok(Self { kind, radius })
    }

    /// Panics if `radius == 0`.
    pub fn majority(radius: usize) -> Self {
        Self::new(RuleKind::Majority, radius).expect("radius must be at least 1")
    }

    /// Panics if `radius == 0`.
    pub fn minority(radius: usize) -> Self {
        Self::new(RuleKind::Minority, radius).expect("radius must be at least 1")
    }

    /// Same radius, opposite kind.
    pub fn dual(self) -> Self {
        let kind = match self.kind {
            RuleKind::Majority => RuleKind::Minority,
            RuleKind::Minority => RuleKind::Majority,
        };
        Self { kind, ..self }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} r={}", self.kind, self.radius)
    }
}

/// Vertical (bit-sliced) counter: bit `b` of the count for lane `j` lives in
/// bit `j` of `planes[b]`.
struct SlicedCounter {
    planes: [u64; WORD_BITS],
    depth: usize,
}

impl SlicedCounter {
    fn new(max_count: usize) -> Self {
        let depth = (usize::BITS - max_count.leading_zeros()) as usize;
        Self {
            planes: [0; WORD_BITS],
            depth,
        }
    }

    #[inline]
    fn add(&mut self, mut carry: u64) {
        for plane in &mut self.planes[..self.depth] {
            let next = *plane & carry;
            *plane ^= carry;
            carry = next;
            if carry == 0 {
                break;
            }
        }
    }

    /// Lanes whose count is at least `threshold`.
    #[inline]
    fn at_least(&self, threshold: usize) -> u64 {
        let mut greater = 0u64;
        let mut equal = u64::MAX;
        for b in (0..self.depth).rev() {
            let plane = self.planes[b];
            if (threshold >> b) & 1 == 1 {
                equal &= plane;
            } else {
                greater |= equal & plane;
                equal &= !plane;
            }
        }
        greater | equal
    }
}

/// One majority/minority step on a ring of size `n <= 64` packed into a
/// word (cell `i` at bit `i`).
#[inline]
pub fn step_word(word: u64, n: usize, rule: Rule) -> u64 {
    debug_assert!((1..=WORD_BITS).contains(&n));
    let mask = low_mask(n);
    let r = rule.radius;
    let mut counter = SlicedCounter::new(2 * r + 1);
    for d in 0..=2 * r {
        // offset d - r, reduced into [0, n)
        let shift = (d + n * (r / n + 1) - r) % n;
        let rotated = if shift == 0 {
            word
        } else {
            ((word >> shift) | (word << (n - shift))) & mask
        };
        counter.add(rotated);
    }
    let majority = counter.at_least(r + 1) & mask;
    match rule.kind {
        RuleKind::Majority => majority,
        RuleKind::Minority => !majority & mask,
    }
}

/// Applies the rule once to every cell simultaneously.
pub fn step(cfg: &Configuration, rule: Rule) -> Configuration {
    let n = cfg.n();
    if let Some(word) = cfg.word() {
        return Configuration::from_word(step_word(word, n, rule), n);
    }
    let r = rule.radius;
    let mut words = vec![0u64; cfg.words.len()];
    for (w, slot) in words.iter_mut().enumerate() {
        let start = w * WORD_BITS;
        let lanes = (n - start).min(WORD_BITS);
        let mut counter = SlicedCounter::new(2 * r + 1);
        for d in 0..=2 * r {
            let pos = (start + d + n * (r / n + 1) - r) % n;
            counter.add(cfg.read_bits(pos, lanes));
        }
        let majority = counter.at_least(r + 1) & low_mask(lanes);
        *slot = match rule.kind {
            RuleKind::Majority => majority,
            RuleKind::Minority => !majority & low_mask(lanes),
        };
    }
    Configuration { n, words }
}

/// `step` applied `times` times.
pub fn step_n(cfg: &Configuration, rule: Rule, times: usize) -> Configuration {
    let mut cur = cfg.clone();
    for _ in 0..times {
        cur = step(&cur, rule);
    }
    cur
}

/// A recorded evolution `σ_0, ..., σ_T` ending in a detected cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    states: Vec<Configuration>,
    preperiod: usize,
    period: usize,
}

impl Trajectory {
    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    /// Index of the first state on the cycle.
    pub fn preperiod(&self) -> usize {
        self.preperiod
    }

    /// 1 for a fixed point, 2 for a 2-cycle.
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn initial(&self) -> &Configuration {
        &self.states[0]
    }

    pub fn last(&self) -> &Configuration {
        self.states.last().unwrap()
    }

    /// The states of the terminal cycle.
    pub fn cycle(&self) -> &[Configuration] {
        &self.states[self.preperiod..self.preperiod + self.period]
    }

    /// Number of rule applications recorded.
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }
}

/// Default step budget for [`evolve`]: `4n`.
pub fn default_max_steps(n: usize) -> usize {
    4 * n
}

/// Iterates the rule until a cycle of period 1 or 2 appears.
///
/// Only `σ_t` against `σ_{t-1}` and `σ_{t-2}` is compared; longer periods do
/// not occur for majority or minority dynamics.
pub fn evolve(cfg: &Configuration, rule: Rule, max_steps: usize) -> Result<Trajectory> {
    if max_steps == 0 {
        return Err(Error::precondition("max_steps must be at least 1"));
    }
    let mut states = vec![cfg.clone()];
    for _ in 0..max_steps {
        let next = step(states.last().unwrap(), rule);
        states.push(next);
        let t = states.len() - 1;
        if states[t] == states[t - 1] {
            return Ok(Trajectory {
                states,
                preperiod: t - 1,
                period: 1,
            });
        }
        if t >= 2 && states[t] == states[t - 2] {
            return Ok(Trajectory {
                states,
                preperiod: t - 2,
                period: 2,
            });
        }
    }
    Err(Error::StepBudgetExceeded(max_steps))
}
