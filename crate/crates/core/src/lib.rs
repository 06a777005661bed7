//! Operator calculus for the simplicial and symmetric-simplicial categories,
//! together with semidirect-product decompositions of (symmetric-)simplicial
//! groups into their Moore complex components.
//!
//! The crate is organized around one principle: operator words are syntax,
//! function tables are semantics.  Every rewriting procedure here
//! (push-through normalization, canonical factorizations, the decomposition
//! recursion) is checked against composition of [`finmap::FinMap`]s, which is
//! the single source of truth for operator equality.
//!
//! Modules:
//! - [`finmap`]: maps of finite ordinals as value tables, the exact oracle;
//! - [`opcalc`]: named operators, words, presentations, push-through;
//! - [`orders`]: multi-indices, the length-product and inclusion partial
//!   orders, the binary total order, linear extensions;
//! - [`sgroup`]: the abstract (symmetric-)simplicial group interface, two
//!   concrete instances, Moore complex machinery;
//! - [`dkengine`]: the component decomposition recursion, its verification,
//!   and the closed-form component formulas;
//! - [`explorer`]: classification of total orders by decomposition behavior,
//!   with replayable counterexample witnesses.

pub mod dkengine;
pub mod error;
pub mod explorer;
pub mod finmap;
pub mod opcalc;
pub mod orders;
pub mod report;
pub mod seeding;
pub mod sgroup;

pub use error::{Error, Result};
pub use finmap::{compose_maps, FinMap};
pub use opcalc::{
    face_absorb_face, map_to_word_delta, map_to_word_fin, multi_operator, named_operator,
    push_face_through_degens, push_face_through_quasidegens, push_word_through,
    verify_presentations, word_to_map, Generator, Kind, MultiOperatorFlavor, NormalizedPush,
    OperatorWord, PushResult, RelationReport,
};
pub use orders::{
    binary_order, enumerate_indices, incl_leq, is_order_reflecting, linear_extensions, lp_leq,
    MultiIndex, PartialOrderKind, TotalOrder, Variant,
};
pub use dkengine::{
    closed_form_binary, closed_form_symmetric, closed_form_symmetric_sorted, decompose,
    exact_normality, exact_unique_factorization, reconstruct, verify_kernel_characterization,
    verify_replacement_projections, verify_unique_factorization, Decomposition,
};
pub use explorer::{
    replay_witness, search_orders, OrderVerdict, ReplayReport, SearchConfig, SearchMode,
    SearchSummary, VerdictStatus,
};
pub use report::{CheckReport, VerifyReport, Witness};
pub use sgroup::{
    cycle_membership, exponential_instance, gamma::gamma_instance, moore_membership,
    moore_project, parse_instance_spec, verify_instance, verify_symmetric_chain_condition,
    verify_symmetric_invariance, AnyInstance, ChainComplexData, ExpInstance, FiniteGroup,
    GammaInstance, SGroup,
};
