//! Listing temporally periodic configurations.
//!
//! Two independent routes are provided. [`enumerate_bruteforce`] scans all
//! `2^n` rings in parallel. [`enumerate_from_patterns`] rebuilds the same set
//! from the run-length form of strongly stable rings plus a finite list of
//! short spatial generators produced by [`generate_patterns`].

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::automaton::{step, step_word, Configuration, Rule};
use crate::error::{Error, Result};
use crate::periodicity::spatial_period;

/// Largest `n` accepted by [`enumerate_bruteforce`].
pub const BRUTE_FORCE_MAX_BITS: usize = 26;

const CHUNK_BITS: usize = 14;

/// All `σ` on `Z_n` with `step²(σ) = σ`, in lexicographic order.
pub fn enumerate_bruteforce(n: usize, r: usize, rule: Rule) -> Result<Vec<Configuration>> {
    if r == 0 || rule.radius != r {
        return Err(Error::InvalidRadius);
    }
    if n == 0 {
        return Err(Error::precondition("ring size must be positive"));
    }
    if n > BRUTE_FORCE_MAX_BITS {
        return Err(Error::EnumerationBudgetExceeded {
            n,
            max_bits: BRUTE_FORCE_MAX_BITS,
        });
    }
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n);
    let shift = 64 - n;
    let found: Vec<Vec<u64>> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            (c * chunk..(c + 1) * chunk)
                .filter_map(|index| {
                    let word = index.reverse_bits() >> shift;
                    let once = step_word(word, n, rule);
                    (step_word(once, n, rule) == word).then_some(word)
                })
                .collect()
        })
        .collect();
    Ok(found
        .into_iter()
        .flatten()
        .map(|w| Configuration::from_word(w, n))
        .collect())
}

/// Least representative of a ring under rotation, mirror and complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub representative: Configuration,
    pub symmetry_class_size: usize,
}

/// Every image of `cfg` under the `4n` symmetries, with repeats.
pub fn symmetry_orbit(cfg: &Configuration) -> Vec<Configuration> {
    let mirrored = cfg.mirror();
    let bases = [
        cfg.clone(),
        mirrored.clone(),
        cfg.complement(),
        mirrored.complement(),
    ];
    bases
        .iter()
        .flat_map(|b| (0..cfg.n() as isize).map(move |k| b.rotate(k)))
        .collect()
}

pub fn canonicalize(cfg: &Configuration) -> CanonicalForm {
    let orbit: BTreeSet<Configuration> = symmetry_orbit(cfg).into_iter().collect();
    CanonicalForm {
        symmetry_class_size: orbit.len(),
        representative: orbit.into_iter().next().expect("orbit is never empty"),
    }
}

/// Canonical primitive generators of the weakly stable periodic family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub radius: usize,
    /// Sorted by length, then lexicographically.
    pub generators: Vec<Configuration>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Longest length a generator may have.
    pub fn max_length(&self) -> usize {
        2 * self.radius * (self.radius + 1)
    }
}

/// Depth-first search over run-length compositions, starting at a run of
/// zeros, with every run in `[1, r]`.
///
/// Any linear prefix of a valid ring is a factor of its periodic extension,
/// so each cell whose `2r`-neighborhood fits inside the prefix must already
/// satisfy `step²` locally; failing prefixes are cut.
struct PatternSearch {
    r: usize,
    max_len: usize,
    bits: Vec<u8>,
    /// `once[j]` is one step of the prefix at `j`, valid for `j >= r`.
    once: Vec<u8>,
    found: BTreeSet<Configuration>,
}

impl PatternSearch {
    fn majority_at(&self, cells: &[u8], j: usize) -> u8 {
        let ones: usize = cells[j - self.r..=j + self.r]
            .iter()
            .map(|&b| b as usize)
            .sum();
        (ones > self.r) as u8
    }

    fn push_run(&mut self, len: usize, value: u8) -> bool {
        let r = self.r;
        let old_len = self.bits.len();
        self.bits.extend(std::iter::repeat_n(value, len));
        let new_len = self.bits.len();
        for j in self.once.len()..new_len.saturating_sub(r) {
            let v = if j < r {
                0
            } else {
                self.majority_at(&self.bits, j)
            };
            self.once.push(v);
        }
        let lo = (2 * r).max(old_len.saturating_sub(2 * r));
        (lo..new_len.saturating_sub(2 * r)).all(|i| self.majority_at(&self.once, i) == self.bits[i])
    }

    fn pop_to(&mut self, len: usize) {
        self.bits.truncate(len);
        self.once.truncate(len.saturating_sub(self.r));
    }

    fn extend(&mut self, parts: usize) {
        let value = (parts % 2) as u8;
        let mark = self.bits.len();
        for len in 1..=self.r {
            if mark + len > self.max_len {
                break;
            }
            if self.push_run(len, value) {
                if parts % 2 == 1 {
                    self.test_ring();
                }
                self.extend(parts + 1);
            }
            self.pop_to(mark);
        }
    }

    fn test_ring(&mut self) {
        let cfg = Configuration::from_bits(&self.bits);
        let rule = Rule::majority(self.r);
        if step(&step(&cfg, rule), rule) == cfg && spatial_period(&cfg) == cfg.n() {
            self.found.insert(canonicalize(&cfg).representative);
        }
    }
}

pub fn generate_patterns(r: usize) -> Result<GeneratorSet> {
    if r == 0 {
        return Err(Error::InvalidRadius);
    }
    let mut search = PatternSearch {
        r,
        max_len: 2 * r * (r + 1),
        bits: Vec::new(),
        once: Vec::new(),
        found: BTreeSet::new(),
    };
    search.extend(0);
    Ok(GeneratorSet {
        radius: r,
        generators: search.found.into_iter().collect(),
    })
}

/// Compositions of `n` into an even number of parts, each at least `min`.
fn even_compositions(n: usize, min: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.len().is_multiple_of(2) {
                out.push(cur.clone());
            }
            return;
        }
        for p in min..=left {
            cur.push(p);
            go(left - p, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, min, &mut Vec::new(), &mut out);
    out
}

/// Rings of size `n` whose every run has length at least `r + 1`.
pub fn strongly_stable_family(n: usize, r: usize) -> Vec<Configuration> {
    let mut out = vec![Configuration::zeros(n), Configuration::ones(n)];
    for parts in even_compositions(n, r + 1) {
        for phase in 0..2u8 {
            let mut bits = Vec::with_capacity(n);
            for (k, &p) in parts.iter().enumerate() {
                bits.extend(std::iter::repeat_n(phase ^ (k % 2) as u8, p));
            }
            let base = Configuration::from_bits(&bits);
            // cell 0 at offset o inside the first run
            out.extend((0..parts[0]).map(|o| base.rotate(o as isize)));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every temporally periodic ring of size `n` under `maj_r`, rebuilt from
/// the two families, sorted lexicographically.
pub fn enumerate_from_patterns(n: usize, r: usize) -> Result<Vec<Configuration>> {
    let gens = generate_patterns(r)?;
    enumerate_from_generators(n, &gens)
}

/// As [`enumerate_from_patterns`] with a precomputed generator set.
pub fn enumerate_from_generators(n: usize, gens: &GeneratorSet) -> Result<Vec<Configuration>> {
    if n == 0 {
        return Err(Error::precondition("ring size must be positive"));
    }
    let mut out = strongly_stable_family(n, gens.radius);
    for g in &gens.generators {
        if n.is_multiple_of(g.n()) {
            out.extend(symmetry_orbit(g).into_iter().map(|s| s.repeat(n / g.n())));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn strings(v: &[Configuration]) -> Vec<String> {
        v.iter().map(|c| c.to_string()).collect()
    }

    fn naive_periodic(n: usize, rule: Rule) -> Vec<Configuration> {
        (0..1u64 << n)
            .map(|i| Configuration::from_lex_index(i, n))
            .filter(|c| step(&step(c, rule), rule) == *c)
            .collect()
    }

    #[test]
    fn bruteforce_examples() {
        let four = enumerate_bruteforce(4, 1, Rule::majority(1)).unwrap();
        assert_eq!(
            strings(&four),
            ["0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"]
        );
        assert_eq!(
            strings(&enumerate_bruteforce(3, 1, Rule::majority(1)).unwrap()),
            ["000", "111"]
        );
        assert_eq!(
            enumerate_bruteforce(5, 1, Rule::majority(1)).unwrap().len(),
            12
        );
        assert!(matches!(
            enumerate_bruteforce(27, 1, Rule::majority(1)),
            Err(Error::EnumerationBudgetExceeded { n: 27, .. })
        ));
    }

    #[test]
    fn bruteforce_matches_naive_scan() {
        for n in 1..=12 {
            for r in 1..=3 {
                for rule in [Rule::majority(r), Rule::minority(r)] {
                    assert_eq!(
                        enumerate_bruteforce(n, r, rule).unwrap(),
                        naive_periodic(n, rule)
                    );
                }
            }
        }
    }

    #[test]
    fn generator_lists() {
        let g1 = generate_patterns(1).unwrap();
        assert_eq!(strings(&g1.generators), ["01"]);

        let g2 = generate_patterns(2).unwrap();
        let expected2: BTreeSet<_> = ["01", "0011", "001101", "001011"]
            .iter()
            .map(|s| canonicalize(&cfg(s)).representative)
            .collect();
        assert_eq!(g2.generators, expected2.into_iter().collect::<Vec<_>>());
        assert_eq!(g2.len(), 3);

        let g3 = generate_patterns(3).unwrap();
        assert_eq!(
            strings(&g3.generators),
            [
                "01",
                "0011",
                "000111",
                "001011",
                "00010111",
                "00011011",
                "00101011",
                "00101101",
                "0001100111"
            ]
        );
        for g in &g3.generators {
            assert!(g.n() <= g3.max_length());
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&cfg("1010")).representative, cfg("0101"));
        let base = canonicalize(&cfg("010011"));
        assert_eq!(canonicalize(&cfg("110010")), base);
        assert_eq!(canonicalize(&cfg("101100")), base);
        assert_eq!(canonicalize(&cfg("0101")).symmetry_class_size, 2);
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(
            enumerate_from_patterns(4, 1).unwrap(),
            enumerate_bruteforce(4, 1, Rule::majority(1)).unwrap()
        );
        assert_eq!(
            strings(&enumerate_from_patterns(5, 2).unwrap()),
            ["00000", "11111"]
        );
        let eighteen = enumerate_from_patterns(18, 3).unwrap();
        let g = cfg("010011").repeat(3);
        for k in 0..18 {
            assert!(eighteen.binary_search(&g.rotate(k)).is_ok());
        }
    }

    #[test]
    fn patterns_match_bruteforce() {
        for r in 1..=3 {
            let gens = generate_patterns(r).unwrap();
            for n in 1..=14 {
                assert_eq!(
                    enumerate_from_generators(n, &gens).unwrap(),
                    enumerate_bruteforce(n, r, Rule::majority(r)).unwrap(),
                    "n={n} r={r}"
                );
            }
        }
    }

    #[test]
    fn generators_are_closed_and_sound() {
        for r in 1..=3 {
            let gens = generate_patterns(r).unwrap();
            let rule = Rule::majority(r);
            for g in &gens.generators {
                for image in symmetry_orbit(g) {
                    assert!(gens
                        .generators
                        .contains(&canonicalize(&image).representative));
                }
                for k in 1..=64 / g.n() {
                    let s = g.repeat(k);
                    assert_eq!(step(&step(&s, rule), rule), s);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn canonical_form_is_orbit_invariant(
            bits in prop::collection::vec(0u8..=1, 1..40),
            k in 0isize..40,
            m in any::<bool>(),
            c in any::<bool>(),
        ) {
            let a = Configuration::from_bits(&bits);
            let mut b = a.rotate(k);
            if m { b = b.mirror(); }
            if c { b = b.complement(); }
            let ca = canonicalize(&a);
            prop_assert_eq!(&ca, &canonicalize(&b));
            prop_assert!(ca.representative <= a);
            prop_assert_eq!((4 * a.n()) % ca.symmetry_class_size, 0);
        }
    }
}
