//! Default numeric tolerances used across the crate.
//!
//! Every threshold that a verdict depends on is named here; operations take
//! an explicit `eps` only where callers legitimately need to vary it
//! (document verification, degeneracy tests). The CLI `--tol` flag feeds
//! those call sites.

/// Coordinatewise vector matching, sign canonicalization, degeneracy of a
/// separating functional, and orthogonality tests.
pub const EPS: f64 = 1e-9;

/// Relative floor separating frames from non-frames: a frame operator with
/// smallest eigenvalue `> EPS_FRAME * largest` counts as invertible.
pub const EPS_FRAME: f64 = 1e-9;

/// Per-vector eigen-residual bound for the eigenframe verdict,
/// `||S phi - lambda phi|| / ||phi||`.
pub const EIGENFRAME_RESIDUAL: f64 = 1e-8;

/// Relative spectral width for tightness: tight iff `(B - A) <= TIGHTNESS_GAP * B`.
pub const TIGHTNESS_GAP: f64 = 1e-9;

/// Eigenvalue clustering: a new cluster starts when the descending gap
/// exceeds `max(CLUSTER_GAP_REL * B, CLUSTER_GAP_FLOOR)`.
pub const CLUSTER_GAP_REL: f64 = 1e-6;
pub const CLUSTER_GAP_FLOOR: f64 = 1e-12;

/// Subspace-level checks: projector reconstruction and cross-cluster Gram
/// entries of an eigenframe.
pub const SUBSPACE_RESIDUAL: f64 = 1e-8;

/// Entrywise bound on `sum w' phi phi^T - I` after Parseval rescaling.
pub const PARSEVAL_RESIDUAL: f64 = 1e-9;

/// Bound on `|sum 1/lambda - d|` when rescaling a unit-norm eigenframe.
pub const DIMENSION_DEFECT: f64 = 1e-8;

/// Counting identity `lambda_i * d_i = #R_{i,+}` is enforced to this bound.
pub const COUNTING_IDENTITY: f64 = 1e-6;

/// Commutator verdict threshold, relative to the largest eigenvalue.
pub const COMMUTATOR_REL: f64 = 1e-9;

/// Multiplicity bound slack: `lambda >= c(u) ||u||^2 - MULTIPLICITY_SLACK`,
/// with equality declared inside the same band.
pub const MULTIPLICITY_SLACK: f64 = 1e-9;

/// Cluster mass identity: `lambda_n * d_n` matches the weighted norm mass
/// `sum w ||phi||^2` over the cluster's members to this bound.
pub const CLUSTER_MASS: f64 = 1e-8;

/// Trace identity `trace(S) = #R_+` for unit-norm positive systems.
pub const TRACE_DEFECT: f64 = 1e-9;

/// Norm at or below which a vector is rejected as zero.
pub const ZERO_NORM: f64 = 1e-12;

/// Rounding grid for hash-based dedup in orbit and group enumeration.
/// Coarser than EPS on purpose: BFS always re-reflects from stored canonical
/// representatives, so floating error stays far below the grid.
pub const DEDUP_GRID: f64 = 1e-8;
