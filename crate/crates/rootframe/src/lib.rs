//! Root systems viewed as finite frames.
//!
//! The crate constructs and verifies reflection-closed vector sets, selects
//! positive subsystems with generic separating functionals, analyzes the
//! frame operator of the resulting root frames (optimal bounds, eigenvalue
//! clusters, tightness), detects and decomposes eigenframes, rescales frames
//! to Parseval form, closes arbitrary unit-norm frames under their own
//! reflections, enumerates the generated reflection groups, and reads and
//! writes strict versioned interchange documents for frames and analysis
//! reports.
//!
//! Numeric verdicts are tolerance-based; thresholds live in [`tol`] and the
//! operations that depend on the generic matching tolerance take it as an
//! explicit `eps` argument (default [`tol::EPS`]).

pub mod closure;
pub mod error;
pub mod frame_analysis;
pub mod io;
pub mod root_systems;
pub mod tol;

mod matching;
mod rng;

pub use closure::{
    group_enumerate, is_root_frame_closure, reflection_closure, ClosureCaps, ClosureResult,
    ClosureStatus, GroupEnumeration, RootFrameClosure, RootFrameVerdict,
    DEFAULT_MAX_GROUP_ELEMENTS,
};
pub use error::{Error, Result};
pub use frame_analysis::{
    commutation_check, eigenframe_decomposition, frame_bounds, frame_operator, gram_analysis,
    lambda_by_sum, multiplicity_bound_check, parseval_scaling, root_frame_invariants,
    spark_obstruction, spectral_analysis, CommutationReport, EigenCluster, EigenComponent,
    EigenframeDecomposition, Frame, GramAnalysis, GramVerdict, MultiplicityReport,
    ParsevalScaling, RootFrameReport, SparkReport, SpectralReport, Verdicts,
};
pub use io::{
    emit_report, frame_digest, load_frame, parse_frame, save_frame, ClosureBlock, FailureWitness,
    FrameDocument, LoadedFrame, ReportDocument, FORMAT_VERSION,
};
pub use root_systems::{
    construct_classical, orbit_partition, positive_subsystem, reflect, sign_symmetrize,
    validate_parameter_function, verify_root_system, Family, OrbitPartition, PositiveSystem,
    RootSystem, VerificationReport,
};

pub use rng::SplitMix64;
