//! Linear generalized index coding over small prime fields, together with the
//! matroid and discrete polymatroid machinery used to relate perfect codes to
//! representable rank functions.

pub mod catalog;
pub mod constructions;
pub mod error;
pub mod gf;
pub mod gic;
pub mod matroid;
pub mod polymatroid;
pub mod solver;
pub mod subset;

pub use constructions::{
    code_from_matroid_rep, gic_from_matroid, gic_from_polymatroid, matroid_rep_from_code, polymatroid_rep_from_code,
    Construction, ConstructionTrace, MessageIndex, MessageLayout, Origin,
};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldMatrix, MatrixJson, Modulus};
pub use gic::{
    check_c1_c2, code_to_representation, decoding_matrix, is_perfect, mu, representation_to_code, verify_code,
    CodeJson, ConditionReport, GicProblem, GicRepresentation, IndexCode, ProblemJson, Receiver, ReceiverJson,
    VerificationReport,
};
pub use matroid::{Matroid, MatroidJson, Representability};
pub use polymatroid::{DiscretePolymatroid, IntVector, PolymatroidJson, RepresentationJson, SubspaceRepresentation};
pub use solver::{
    all_solutions, candidate_space, count_solutions, solve_perfect_scalar_binary, CandidateSpace, SearchConfig,
    SolveOutcome, Verdict,
};
