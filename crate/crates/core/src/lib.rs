//! Majority and minority cellular automata on cyclic binary rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`automaton`] holds configurations, cell intervals and the rule engine.
//! * [`structure`] decomposes a configuration into maximal homogeneous blocks
//!   and evaluates the switch-point and block-length identities.
//! * [`stability`] labels every cell as strongly stable, weakly stable or
//!   unstable.
//! * [`mappings`] implements the left/right block mappings, the alignment
//!   mapping and the vector machinery built on top of them.
//! * [`periodicity`] classifies configurations temporally and spatially.
//! * [`enumeration`] lists every temporally periodic configuration, either
//!   by brute force or from the finite set of spatial generators.
//! * [`verify`] runs the structural properties as executable checks.

pub mod automaton;
pub mod enumeration;
mod error;
pub mod mappings;
pub mod periodicity;
pub mod stability;
pub mod structure;
pub mod verify;

pub use automaton::{
    count_states, evolve, parse_configuration, step, CellInterval, Configuration, Rule, RuleKind,
    Trajectory,
};
pub use enumeration::{
    canonicalize, enumerate_bruteforce, enumerate_from_patterns, generate_patterns, CanonicalForm,
    GeneratorSet,
};
pub use error::{Error, Result};
pub use mappings::{
    alignment, block_interval, difference_vectors, forward_alignment, iterate_alignment,
    left_right_mapping, make_aligned_pair, AlignedPair, BlockInterval, DifferenceVectors,
    MappedBlock, Transition,
};
pub use periodicity::{
    classify_theorem, is_balanced_weakly_stable, potential2, spatial_period, temporal_class,
    ClassificationCase, ClassificationResult, PotentialValue, TemporalClass,
};
pub use stability::{classify_stability, unstable_runs, Stability, StabilityMap};
pub use structure::{
    bias, block_length_vector, blocks, predict_block_length, predict_switch_point, Block,
    BlockDecomposition, BlockLengthVector,
};
