//! Frame operators and their spectra: optimal bounds, tightness and
//! eigenframe verdicts, decomposition of eigenframes into orthogonal tight
//! components, Parseval rescaling, root-frame invariants, the reflection
//! (spark) obstruction, Gram structure, multiplicity bounds, and the
//! commutation characterization of eigenframes.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matching::{coords_match, find_match_up_to_sign, max_abs_entry};
use crate::root_systems::{reflect, verify_root_system, PositiveSystem};
use crate::tol;

/// An ordered list of nonzero vectors with positive weights. Weight `w` on
/// vector `phi` means the effective vector `sqrt(w) * phi`: the frame
/// operator accumulates `w * phi phi^T`, while the stored vectors keep their
/// own (typically unit) norms.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    dim: usize,
    vectors: Vec<DVector<f64>>,
    weights: Vec<f64>,
}

impl Frame {
    pub fn new(
        dim: usize,
        vectors: Vec<DVector<f64>>,
        weights: Option<Vec<f64>>,
    ) -> Result<Frame> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if vectors.is_empty() {
            return Err(Error::InvalidInput("frame has no vectors".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "vector {i} has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("vector {i} has a non-finite coordinate")));
            }
            if v.norm() <= tol::ZERO_NORM {
                return Err(Error::InvalidInput(format!("vector {i} is zero")));
            }
        }
        let weights = match weights {
            Some(w) => {
                if w.len() != vectors.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} weights for {} vectors",
                        w.len(),
                        vectors.len()
                    )));
                }
                for (index, &value) in w.iter().enumerate() {
                    if !value.is_finite() || value <= 0.0 {
                        return Err(Error::InvalidWeight { index, value });
                    }
                }
                w
            }
            None => vec![1.0; vectors.len()],
        };
        Ok(Frame { dim, vectors, weights })
    }

    pub fn unweighted(dim: usize, vectors: Vec<DVector<f64>>) -> Result<Frame> {
        Frame::new(dim, vectors, None)
    }

    /// The positive roots as an unweighted frame.
    pub fn from_positives(p: &PositiveSystem) -> Frame {
        Frame {
            dim: p.dim(),
            vectors: p.positives().to_vec(),
            weights: vec![1.0; p.len()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_unit_norm(&self, eps: f64) -> bool {
        self.vectors.iter().all(|v| (v.norm() - 1.0).abs() <= eps)
    }
}

/// `S = sum_k w_k phi_k phi_k^T`: symmetric, positive semidefinite, with
/// `trace(S) = sum_k w_k ||phi_k||^2`.
pub fn frame_operator(f: &Frame) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(f.dim(), f.dim());
    for (v, &w) in f.vectors().iter().zip(f.weights()) {
        s.ger(w, v, v, 1.0);
    }
    s
}

/// Optimal frame bounds `(A, B)`: the extreme eigenvalues of the frame
/// operator. `A > 0` exactly when the vectors span.
pub fn frame_bounds(f: &Frame) -> (f64, f64) {
    let (values, _) = sorted_eigen(&frame_operator(f));
    (*values.last().expect("nonempty frame"), values[0])
}

/// Symmetric eigendecomposition with eigenvalues sorted descending and the
/// eigenvector columns carried along in the same order.
fn sorted_eigen(s: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(s.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = eig.eigenvectors.select_columns(order.iter());
    (values, vectors)
}

/// One eigenvalue cluster of the frame operator.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    /// Mean of the clustered eigenvalues.
    pub lambda: f64,
    /// Eigenspace dimension `d_i`.
    pub multiplicity: usize,
    /// Orthonormal basis of the eigenspace, one column per dimension.
    pub basis: DMatrix<f64>,
}

/// Eigen-assignment of one frame vector.
#[derive(Debug, Clone, Copy)]
pub struct VectorAssignment {
    pub index: usize,
    /// Position of the assigned cluster in `eigen_clusters`.
    pub cluster: usize,
    /// The assigned eigenvalue (the cluster's lambda).
    pub lambda: f64,
    /// `||S phi - lambda phi|| / ||phi||`, minimized over clusters.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Verdicts {
    /// Smallest eigenvalue exceeds `eps * largest`.
    pub is_frame: bool,
    /// `(B - A) / B` within the tightness gap.
    pub is_tight: bool,
    /// Every per-vector residual within the eigenframe bound.
    pub is_eigenframe: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// Clusters sorted descending by eigenvalue; multiplicities sum to dim.
    pub eigen_clusters: Vec<EigenCluster>,
    pub per_vector: Vec<VectorAssignment>,
    /// `(A, B)`: smallest and largest eigenvalue of the frame operator.
    pub optimal_bounds: (f64, f64),
    pub verdicts: Verdicts,
    /// Largest per-vector residual: the eigenframe verdict's witness.
    pub worst_residual: f64,
    /// For unit-norm frames: max over k of the gap between the eigen-assigned
    /// lambda and the independent sum route `sum_j w_j <phi_k, phi_j>^2`.
    /// The two routes agree exactly when the frame is an eigenframe.
    pub lambda_discrepancy: Option<f64>,
}

/// Full spectral decomposition of the frame operator: eigenvalue clusters,
/// per-vector eigen-assignments by minimal residual, optimal bounds, and the
/// frame / tightness / eigenframe verdicts.
pub fn spectral_analysis(f: &Frame, eps: f64) -> SpectralReport {
    let s = frame_operator(f);
    let (values, vectors) = sorted_eigen(&s);
    let b = values[0];
    let a = *values.last().expect("nonempty frame");

    // New cluster when the descending gap exceeds the relative threshold.
    let gap = (tol::CLUSTER_GAP_REL * b.abs()).max(tol::CLUSTER_GAP_FLOOR);
    let mut eigen_clusters = Vec::new();
    let mut start = 0;
    for end in 1..=values.len() {
        if end == values.len() || values[end - 1] - values[end] > gap {
            let lambda = values[start..end].iter().sum::<f64>() / (end - start) as f64;
            let basis = vectors.columns(start, end - start).into_owned();
            eigen_clusters.push(EigenCluster { lambda, multiplicity: end - start, basis });
            start = end;
        }
    }

    let mut per_vector = Vec::with_capacity(f.len());
    let mut worst_residual = 0.0_f64;
    for (index, phi) in f.vectors().iter().enumerate() {
        let s_phi = &s * phi;
        let norm = phi.norm();
        let (cluster, residual) = eigen_clusters
            .iter()
            .enumerate()
            .map(|(ci, c)| (ci, (&s_phi - phi * c.lambda).norm() / norm))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("at least one cluster");
        worst_residual = worst_residual.max(residual);
        per_vector.push(VectorAssignment {
            index,
            cluster,
            lambda: eigen_clusters[cluster].lambda,
            residual,
        });
    }

    let lambda_discrepancy = f.is_unit_norm(eps).then(|| {
        per_vector
            .iter()
            .map(|pv| (pv.lambda - quadratic_form_sum(f, pv.index)).abs())
            .fold(0.0_f64, f64::max)
    });

    let verdicts = Verdicts {
        is_frame: a > eps * b,
        is_tight: b - a <= tol::TIGHTNESS_GAP * b,
        is_eigenframe: worst_residual <= tol::EIGENFRAME_RESIDUAL,
    };
    SpectralReport {
        eigen_clusters,
        per_vector,
        optimal_bounds: (a, b),
        verdicts,
        worst_residual,
        lambda_discrepancy,
    }
}

fn quadratic_form_sum(f: &Frame, k: usize) -> f64 {
    let phi = &f.vectors()[k];
    f.vectors()
        .iter()
        .zip(f.weights())
        .map(|(psi, &w)| {
            let ip = phi.dot(psi);
            w * ip * ip
        })
        .sum()
}

/// `lambda_k = sum_j w_j <phi_k, phi_j>^2`, the quadratic form
/// `<S phi_k, phi_k>` of a unit-norm frame. Matches the eigen-assigned
/// lambda exactly when the frame is an eigenframe.
pub fn lambda_by_sum(f: &Frame, k: usize, eps: f64) -> Result<f64> {
    if k >= f.len() {
        return Err(Error::IndexOutOfRange { index: k, len: f.len() });
    }
    if !f.is_unit_norm(eps) {
        return Err(Error::InvalidInput(
            "the eigenvalue sum formula needs unit-norm vectors".into(),
        ));
    }
    Ok(quadratic_form_sum(f, k))
}

fn require_eigenframe(report: &SpectralReport) -> Result<()> {
    if report.verdicts.is_eigenframe {
        Ok(())
    } else {
        Err(Error::NotAnEigenframe {
            worst_residual: report.worst_residual,
            tolerance: tol::EIGENFRAME_RESIDUAL,
        })
    }
}

/// One orthogonal component of an eigenframe.
#[derive(Debug, Clone)]
pub struct EigenComponent {
    pub lambda: f64,
    /// Orthonormal basis of the component subspace `W_i` (the eigenspace).
    pub basis: DMatrix<f64>,
    /// Indices of the frame vectors lying in this component.
    pub member_indices: Vec<usize>,
    /// Entrywise gap between `(1/lambda) sum w phi phi^T` over the members
    /// and the eigenprojector onto the cluster's eigenspace.
    pub projector_residual: f64,
}

#[derive(Debug, Clone)]
pub struct EigenframeDecomposition {
    /// Components sorted descending by eigenvalue; their member index sets
    /// partition the frame. Clusters without member vectors (in particular
    /// the kernel of a non-spanning eigenframe) are omitted.
    pub components: Vec<EigenComponent>,
    /// max `|<phi, psi>|` over frame vectors in different components.
    pub cross_gram_norm: f64,
}

/// Splits an eigenframe into its orthogonal tight components, one per
/// eigenvalue cluster: the members of cluster `n` form a tight frame for the
/// eigenspace with bound `lambda_n`, witnessed by reconstructing the
/// eigenprojector as `(1/lambda_n) sum w phi phi^T`.
pub fn eigenframe_decomposition(f: &Frame, eps: f64) -> Result<EigenframeDecomposition> {
    let report = spectral_analysis(f, eps);
    require_eigenframe(&report)?;

    let mut components = Vec::new();
    for (ci, cluster) in report.eigen_clusters.iter().enumerate() {
        let member_indices: Vec<usize> = report
            .per_vector
            .iter()
            .filter(|pv| pv.cluster == ci)
            .map(|pv| pv.index)
            .collect();
        if member_indices.is_empty() {
            continue;
        }
        let projector = &cluster.basis * cluster.basis.transpose();
        let mut reconstructed = DMatrix::zeros(f.dim(), f.dim());
        for &k in &member_indices {
            reconstructed.ger(
                f.weights()[k] / cluster.lambda,
                &f.vectors()[k],
                &f.vectors()[k],
                1.0,
            );
        }
        let projector_residual = max_abs_entry(&(&reconstructed - &projector));
        components.push(EigenComponent {
            lambda: cluster.lambda,
            basis: cluster.basis.clone(),
            member_indices,
            projector_residual,
        });
    }

    let mut cross_gram_norm = 0.0_f64;
    for (i, first) in components.iter().enumerate() {
        for second in components.iter().skip(i + 1) {
            for &k in &first.member_indices {
                for &l in &second.member_indices {
                    cross_gram_norm =
                        cross_gram_norm.max(f.vectors()[k].dot(&f.vectors()[l]).abs());
                }
            }
        }
    }
    Ok(EigenframeDecomposition { components, cross_gram_norm })
}

#[derive(Debug, Clone)]
pub struct ParsevalScaling {
    /// Same vectors, weights `w_k / lambda_k`.
    pub scaled: Frame,
    /// `|| sum w' phi phi^T - I ||_max` for the scaled frame.
    pub residual: f64,
    /// `sum_k w_k / lambda_k`; equals dim for unit-norm eigenframes.
    pub inverse_lambda_sum: f64,
    /// `| inverse_lambda_sum - dim |`.
    pub dimension_defect: f64,
}

/// Rescales an eigenframe to Parseval form by dividing each weight by the
/// vector's eigenvalue. Requires an invertible frame operator (every
/// eigenvalue positive) and the eigenframe property.
pub fn parseval_scaling(f: &Frame, eps: f64) -> Result<ParsevalScaling> {
    let report = spectral_analysis(f, eps);
    if !report.verdicts.is_frame {
        return Err(Error::NotAFrame { lambda_min: report.optimal_bounds.0 });
    }
    require_eigenframe(&report)?;

    let weights: Vec<f64> = report
        .per_vector
        .iter()
        .map(|pv| f.weights()[pv.index] / pv.lambda)
        .collect();
    let scaled = Frame::new(f.dim(), f.vectors().to_vec(), Some(weights))?;
    let s = frame_operator(&scaled);
    let residual = max_abs_entry(&(&s - DMatrix::identity(f.dim(), f.dim())));
    let inverse_lambda_sum: f64 = scaled.weights().iter().sum();
    let dimension_defect = (inverse_lambda_sum - f.dim() as f64).abs();
    Ok(ParsevalScaling { scaled, residual, inverse_lambda_sum, dimension_defect })
}

/// Per-cluster invariants of a positive system viewed as a frame.
#[derive(Debug, Clone)]
pub struct ClusterInvariant {
    pub lambda: f64,
    pub multiplicity: usize,
    /// Number of positive roots assigned to the cluster (`#R_{i,+}`).
    pub member_count: usize,
    /// `| lambda * multiplicity - member_count |` (the counting identity).
    pub counting_defect: f64,
    /// The members together with their negatives pass the root-system axiom.
    pub closed_subsystem: bool,
}

#[derive(Debug, Clone)]
pub struct RootFrameReport {
    pub clusters: Vec<ClusterInvariant>,
    pub optimal_bounds: (f64, f64),
    /// `#R_+ / dim`, sandwiched between the optimal bounds.
    pub ratio: f64,
    pub sandwich_pass: bool,
    /// `| trace(S) - #R_+ |`.
    pub trace_defect: f64,
    /// max `|<alpha, beta>|` over positive roots in different clusters.
    pub cross_orthogonality: f64,
    pub is_frame: bool,
    /// Tightness doubles as the operational regularity verdict.
    pub is_tight: bool,
    /// Every check passed at its tolerance (tightness and spanning are
    /// classifications, not checks).
    pub pass: bool,
}

/// Structural invariants of a unit-norm positive system: the counting
/// identity `lambda_i * d_i = #R_{i,+}` per eigenvalue cluster, the
/// `A <= #R_+/d <= B` sandwich, `trace(S) = #R_+`, pairwise orthogonality of
/// the clusters' root sets, per-cluster reflection closure, and the
/// tightness verdict. A non-spanning system is reported with
/// `is_frame: false`, not an error.
pub fn root_frame_invariants(p: &PositiveSystem, eps: f64) -> Result<RootFrameReport> {
    let frame = Frame::from_positives(p);
    if !frame.is_unit_norm(eps) {
        return Err(Error::InvalidInput(
            "root-frame invariants need unit-norm roots (construct with normalization)".into(),
        ));
    }
    let report = spectral_analysis(&frame, eps);
    let s = frame_operator(&frame);
    let n_pos = frame.len() as f64;
    let (a, b) = report.optimal_bounds;
    let ratio = n_pos / frame.dim() as f64;
    let sandwich_pass = a - eps <= ratio && ratio <= b + eps;
    let trace_defect = (s.trace() - n_pos).abs();

    let mut clusters = Vec::new();
    let mut all_counting = true;
    let mut all_closed = true;
    for (ci, cluster) in report.eigen_clusters.iter().enumerate() {
        let members: Vec<DVector<f64>> = report
            .per_vector
            .iter()
            .filter(|pv| pv.cluster == ci)
            .map(|pv| frame.vectors()[pv.index].clone())
            .collect();
        let member_count = members.len();
        let counting_defect =
            (cluster.lambda * cluster.multiplicity as f64 - member_count as f64).abs();
        let closed_subsystem = if members.is_empty() {
            true
        } else {
            let mut signed = members.clone();
            signed.extend(members.iter().map(|v| -v));
            verify_root_system(&signed, eps)?.pass
        };
        all_counting &= counting_defect <= tol::COUNTING_IDENTITY;
        all_closed &= closed_subsystem;
        clusters.push(ClusterInvariant {
            lambda: cluster.lambda,
            multiplicity: cluster.multiplicity,
            member_count,
            counting_defect,
            closed_subsystem,
        });
    }

    let mut cross_orthogonality = 0.0_f64;
    for x in &report.per_vector {
        for y in &report.per_vector {
            if x.cluster != y.cluster {
                cross_orthogonality = cross_orthogonality
                    .max(frame.vectors()[x.index].dot(&frame.vectors()[y.index]).abs());
            }
        }
    }

    let pass = sandwich_pass
        && trace_defect <= tol::TRACE_DEFECT
        && all_counting
        && all_closed
        && cross_orthogonality <= tol::SUBSPACE_RESIDUAL;
    Ok(RootFrameReport {
        clusters,
        optimal_bounds: (a, b),
        ratio,
        sandwich_pass,
        trace_defect,
        cross_orthogonality,
        is_frame: report.verdicts.is_frame,
        is_tight: report.verdicts.is_tight,
        pass,
    })
}

/// A reflection that escaped the signed vector set.
#[derive(Debug, Clone)]
pub struct SparkFailure {
    pub axis_index: usize,
    pub argument_index: usize,
    pub reflected: DVector<f64>,
}

pub const SPARK_INTERPRETATION: &str = "an empty failure list is necessary but NOT sufficient \
     for the vectors together with their negatives to form a root system";

#[derive(Debug, Clone)]
pub struct SparkReport {
    pub failures: Vec<SparkFailure>,
    pub pass: bool,
    /// What a pass means; recorded in every report.
    pub interpretation: &'static str,
}

/// The pairwise reflection obstruction behind the spark <= 3 property of
/// root frames: for every ordered non-orthogonal pair, the reflection of one
/// vector through the other must match `+-phi_j` for some `j` (forcing a
/// dependent triple). Failures witness that the signed set cannot be a root
/// system.
pub fn spark_obstruction(f: &Frame, eps: f64) -> Result<SparkReport> {
    if f.len() < 2 {
        return Err(Error::InvalidParameter(
            "the reflection obstruction needs at least two vectors".into(),
        ));
    }
    if !f.is_unit_norm(eps) {
        return Err(Error::InvalidInput(
            "the reflection obstruction needs unit-norm vectors".into(),
        ));
    }
    let vs = f.vectors();
    let mut failures = Vec::new();
    for (k, axis) in vs.iter().enumerate() {
        for (l, x) in vs.iter().enumerate() {
            if k == l || axis.dot(x).abs() <= eps {
                continue;
            }
            let reflected = reflect(axis, x)?;
            if find_match_up_to_sign(vs, &reflected, eps).is_none() {
                failures.push(SparkFailure { axis_index: k, argument_index: l, reflected });
            }
        }
    }
    Ok(SparkReport { pass: failures.is_empty(), failures, interpretation: SPARK_INTERPRETATION })
}

#[derive(Debug, Clone, PartialEq)]
pub enum GramVerdict {
    /// Eigenframe with all cross-cluster entries within tolerance.
    BlockDiagonal { max_cross_entry: f64 },
    /// Eigenframe with an out-of-tolerance cross-cluster entry (numerically
    /// unreachable for a genuine eigenframe; reported for honesty).
    CrossTermsPresent { max_cross_entry: f64 },
    /// Not an eigenframe: no cluster ordering exists.
    NotApplicable,
}

#[derive(Debug, Clone)]
pub struct GramAnalysis {
    /// `G[k][l] = sqrt(w_k w_l) <phi_k, phi_l>`, in input order.
    pub gram: DMatrix<f64>,
    /// Indices sorted by assigned eigen-cluster (descending eigenvalue),
    /// input order within a cluster. Identity order when not an eigenframe.
    pub ordering: Vec<usize>,
    pub verdict: GramVerdict,
}

/// The weighted Gram matrix, plus the block-diagonality verdict under
/// eigen-cluster ordering when the frame is an eigenframe.
pub fn gram_analysis(f: &Frame, eps: f64) -> GramAnalysis {
    let n = f.len();
    let mut gram = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            gram[(k, l)] =
                (f.weights()[k] * f.weights()[l]).sqrt() * f.vectors()[k].dot(&f.vectors()[l]);
        }
    }
    let report = spectral_analysis(f, eps);
    if !report.verdicts.is_eigenframe {
        return GramAnalysis {
            gram,
            ordering: (0..n).collect(),
            verdict: GramVerdict::NotApplicable,
        };
    }
    let mut ordering: Vec<usize> = (0..n).collect();
    ordering.sort_by_key(|&k| report.per_vector[k].cluster);
    let mut max_cross = 0.0_f64;
    for k in 0..n {
        for l in 0..n {
            if report.per_vector[k].cluster != report.per_vector[l].cluster {
                max_cross = max_cross.max(gram[(k, l)].abs());
            }
        }
    }
    let verdict = if max_cross <= tol::SUBSPACE_RESIDUAL {
        GramVerdict::BlockDiagonal { max_cross_entry: max_cross }
    } else {
        GramVerdict::CrossTermsPresent { max_cross_entry: max_cross }
    };
    GramAnalysis { gram, ordering, verdict }
}

/// One duplicate group's multiplicity bound.
#[derive(Debug, Clone)]
pub struct MultiplicityEntry {
    /// Index of the group's first occurrence.
    pub representative: usize,
    /// All indices whose vectors are eps-equal to the representative
    /// (literal equality; `u` and `-u` are distinct groups).
    pub occurrences: Vec<usize>,
    /// `c(u)`: total weight of the occurrences (the appearance count for an
    /// unweighted frame).
    pub weighted_count: f64,
    /// Eigenvalue of the cluster holding the group.
    pub lambda: f64,
    /// `c(u) * ||u||^2`.
    pub bound: f64,
    pub bound_holds: bool,
    pub equality: bool,
    /// `u` is eps-orthogonal to every frame vector outside its group.
    pub orthogonal_to_rest: bool,
    /// Equality and orthogonality agree, as the bound's equality condition
    /// demands.
    pub consistent: bool,
}

/// The mass identity of one eigenvalue cluster.
#[derive(Debug, Clone)]
pub struct ClusterMass {
    pub lambda: f64,
    pub multiplicity: usize,
    /// `sum w ||phi||^2` over the cluster's members.
    pub weighted_mass: f64,
    /// `| lambda * multiplicity - weighted_mass |`.
    pub defect: f64,
}

#[derive(Debug, Clone)]
pub struct MultiplicityReport {
    pub entries: Vec<MultiplicityEntry>,
    pub cluster_masses: Vec<ClusterMass>,
    pub pass: bool,
}

/// Checks the eigenvalue lower bound `lambda >= c(u) ||u||^2` for every
/// distinct vector `u` of an eigenframe (duplicates counted by weight, signs
/// not identified), its equality condition (equality holds exactly when `u`
/// is orthogonal to every vector outside its duplicate group), and the
/// per-cluster mass identity `lambda_n * d_n = sum w ||phi||^2`.
pub fn multiplicity_bound_check(f: &Frame, eps: f64) -> Result<MultiplicityReport> {
    let report = spectral_analysis(f, eps);
    require_eigenframe(&report)?;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, v) in f.vectors().iter().enumerate() {
        match groups.iter_mut().find(|g| coords_match(&f.vectors()[g[0]], v, eps)) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }

    let mut entries = Vec::new();
    let mut pass = true;
    for group in &groups {
        let representative = group[0];
        let u = &f.vectors()[representative];
        let weighted_count: f64 = group.iter().map(|&i| f.weights()[i]).sum();
        let lambda = report.per_vector[representative].lambda;
        let bound = weighted_count * u.norm_squared();
        let bound_holds = lambda >= bound - tol::MULTIPLICITY_SLACK;
        let equality = (lambda - bound).abs() <= tol::MULTIPLICITY_SLACK;
        let orthogonal_to_rest = f
            .vectors()
            .iter()
            .enumerate()
            .filter(|(j, _)| !group.contains(j))
            .all(|(_, w)| u.dot(w).abs() <= eps);
        let consistent = equality == orthogonal_to_rest;
        pass &= bound_holds && consistent;
        entries.push(MultiplicityEntry {
            representative,
            occurrences: group.clone(),
            weighted_count,
            lambda,
            bound,
            bound_holds,
            equality,
            orthogonal_to_rest,
            consistent,
        });
    }

    let mut cluster_masses = Vec::new();
    for (ci, cluster) in report.eigen_clusters.iter().enumerate() {
        let weighted_mass: f64 = report
            .per_vector
            .iter()
            .filter(|pv| pv.cluster == ci)
            .map(|pv| f.weights()[pv.index] * f.vectors()[pv.index].norm_squared())
            .sum();
        let defect = (cluster.lambda * cluster.multiplicity as f64 - weighted_mass).abs();
        pass &= defect <= tol::CLUSTER_MASS;
        cluster_masses.push(ClusterMass {
            lambda: cluster.lambda,
            multiplicity: cluster.multiplicity,
            weighted_mass,
            defect,
        });
    }

    Ok(MultiplicityReport { entries, cluster_masses, pass })
}

#[derive(Debug, Clone, Copy)]
pub struct CommutationReport {
    /// max over k of `|| S sigma_k - sigma_k S ||_max`.
    pub reflection_commutator: f64,
    /// max over k of `|| S (phi phi^T) - (phi phi^T) S ||_max`.
    pub rank_one_commutator: f64,
    /// Commutator bound, relative to the largest eigenvalue.
    pub threshold: f64,
    /// Both commutators within the threshold.
    pub commutes: bool,
}

/// The commutation characterization of eigenframes: a frame is an eigenframe
/// exactly when its frame operator commutes with every reflection
/// `sigma_{phi_k}`, equivalently with every rank-one `phi_k phi_k^T`. The
/// verdict must agree with the spectral eigenframe verdict on every input.
pub fn commutation_check(f: &Frame) -> CommutationReport {
    let s = frame_operator(f);
    let (values, _) = sorted_eigen(&s);
    let b = values[0];
    let identity = DMatrix::<f64>::identity(f.dim(), f.dim());
    let mut reflection_commutator = 0.0_f64;
    let mut rank_one_commutator = 0.0_f64;
    for phi in f.vectors() {
        let mut pi = DMatrix::zeros(f.dim(), f.dim());
        pi.ger(1.0, phi, phi, 0.0);
        let sigma = &identity - &pi * (2.0 / phi.norm_squared());
        reflection_commutator =
            reflection_commutator.max(max_abs_entry(&(&s * &sigma - &sigma * &s)));
        rank_one_commutator = rank_one_commutator.max(max_abs_entry(&(&s * &pi - &pi * &s)));
    }
    let threshold = tol::COMMUTATOR_REL * b;
    CommutationReport {
        reflection_commutator,
        rank_one_commutator,
        threshold,
        commutes: reflection_commutator <= threshold && rank_one_commutator <= threshold,
    }
}
