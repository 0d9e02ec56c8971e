//! Reflection-orbit closure: decide whether a unit-norm frame generates a
//! finite reflection orbit, recover the enclosing root system when it does,
//! and enumerate the reflection group.
//!
//! Correctness of the sweep: reflections through orbit vectors are exactly
//! the conjugates `g sigma_phi g^{-1} = sigma_{g phi}` of reflections through
//! the starting vectors, so the fixed point of `V <- V u {sigma_v(w)}` is the
//! orbit of the input under the group those reflections generate. A capped
//! run is reported as *unknown* — the sweep is a semi-decision procedure and
//! cannot certify infiniteness.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frame_analysis::Frame;
use crate::matching::{coords_match, find_match, grid_key, sign_canonical};
use crate::rng::SplitMix64;
use crate::root_systems::{positive_subsystem, reflect, PositiveSystem, RootSystem};
use crate::tol;

/// Sweep and size limits for the orbit BFS.
#[derive(Debug, Clone, Copy)]
pub struct ClosureCaps {
    /// Signed orbit size (canonical count times two) above which the run stops.
    pub max_vectors: usize,
    pub max_sweeps: usize,
}

impl Default for ClosureCaps {
    fn default() -> Self {
        Self { max_vectors: 10_000, max_sweeps: 64 }
    }
}

/// Group-element limit for [`group_enumerate`].
pub const DEFAULT_MAX_GROUP_ELEMENTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    Closed,
    CapExceeded,
}

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub status: ClosureStatus,
    /// Sign-canonical orbit representatives; present only when closed.
    pub orbit: Option<Vec<DVector<f64>>>,
    /// Signed orbit size, counting each `{v, -v}` pair as two.
    pub orbit_size: usize,
    /// Sweeps performed; the final sweep of a closed run is the one that
    /// detects the fixed point.
    pub iterations: usize,
    /// Signed size before sweeping, then after every sweep. Nondecreasing;
    /// the final two entries are equal exactly when the run closed, and the
    /// last entry of a capped run is the size that crossed the cap.
    pub growth_trace: Vec<usize>,
    /// Filled in by callers that also run group enumeration.
    pub group_order: Option<usize>,
    /// Input vectors that coincided (up to sign) with an earlier one.
    pub duplicates_collapsed: usize,
}

fn insert_if_new(
    orbit: &mut Vec<DVector<f64>>,
    keys: &mut HashSet<Vec<i64>>,
    canon: DVector<f64>,
    eps: f64,
) -> bool {
    let key = grid_key(&canon, tol::DEDUP_GRID);
    if keys.contains(&key) {
        return false;
    }
    // Grid miss: rule out a near-duplicate straddling a cell boundary.
    if orbit.iter().any(|v| coords_match(v, &canon, eps)) {
        return false;
    }
    keys.insert(key);
    orbit.push(canon);
    true
}

/// Fixed-point sweep over sign-canonical representatives: each sweep adjoins
/// every reflection of an orbit vector through an orbit vector. Stops when
/// the set stabilizes (closed) or a cap is hit. Pairs wholly inside the
/// previous sweep's snapshot are skipped — their images are already present —
/// so each pair is reflected exactly once across the run.
pub fn reflection_closure(f: &Frame, caps: ClosureCaps, eps: f64) -> Result<ClosureResult> {
    if !f.is_unit_norm(eps) {
        return Err(Error::InvalidInput("reflection closure needs unit-norm vectors".into()));
    }
    if caps.max_vectors == 0 || caps.max_sweeps == 0 {
        return Err(Error::InvalidParameter("closure caps must be positive".into()));
    }

    let mut orbit: Vec<DVector<f64>> = Vec::new();
    let mut keys: HashSet<Vec<i64>> = HashSet::new();
    let mut duplicates_collapsed = 0;
    for v in f.vectors() {
        if !insert_if_new(&mut orbit, &mut keys, sign_canonical(v, eps), eps) {
            duplicates_collapsed += 1;
        }
    }

    let mut growth_trace = vec![2 * orbit.len()];
    if 2 * orbit.len() > caps.max_vectors {
        return Ok(ClosureResult {
            status: ClosureStatus::CapExceeded,
            orbit: None,
            orbit_size: 2 * orbit.len(),
            iterations: 0,
            growth_trace,
            group_order: None,
            duplicates_collapsed,
        });
    }

    let mut prev_len = 0;
    let mut iterations = 0;
    for _ in 0..caps.max_sweeps {
        iterations += 1;
        let snapshot_len = orbit.len();
        let mut added = 0usize;
        for i in 0..snapshot_len {
            for j in 0..snapshot_len {
                if i < prev_len && j < prev_len {
                    continue;
                }
                let reflected =
                    reflect(&orbit[i], &orbit[j]).expect("orbit vectors are unit norm");
                let canon = sign_canonical(&reflected, eps);
                if insert_if_new(&mut orbit, &mut keys, canon, eps) {
                    added += 1;
                    if 2 * orbit.len() > caps.max_vectors {
                        growth_trace.push(2 * orbit.len());
                        return Ok(ClosureResult {
                            status: ClosureStatus::CapExceeded,
                            orbit: None,
                            orbit_size: 2 * orbit.len(),
                            iterations,
                            growth_trace,
                            group_order: None,
                            duplicates_collapsed,
                        });
                    }
                }
            }
        }
        growth_trace.push(2 * orbit.len());
        prev_len = snapshot_len;
        if added == 0 {
            let orbit_size = 2 * orbit.len();
            return Ok(ClosureResult {
                status: ClosureStatus::Closed,
                orbit: Some(orbit),
                orbit_size,
                iterations,
                growth_trace,
                group_order: None,
                duplicates_collapsed,
            });
        }
    }
    Ok(ClosureResult {
        status: ClosureStatus::CapExceeded,
        orbit: None,
        orbit_size: 2 * orbit.len(),
        iterations,
        growth_trace,
        group_order: None,
        duplicates_collapsed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFrameVerdict {
    /// The orbit closed and spans: the input embeds in a root frame.
    Yes,
    /// The orbit closed onto a valid root system that spans only a proper
    /// subspace.
    NoSpan,
    /// A cap stopped the sweep; finiteness is undecided (NOT refuted).
    UnknownCap,
}

#[derive(Debug, Clone)]
pub struct RootFrameClosure {
    pub verdict: RootFrameVerdict,
    pub closure: ClosureResult,
    /// The signed orbit as a validated root system; present when closed.
    pub root_system: Option<RootSystem>,
    /// A positive subsystem keeping as many input directions as the
    /// candidate functionals managed; present when the verdict is yes.
    pub positive: Option<PositiveSystem>,
}

/// Runs the orbit sweep and classifies the outcome: `yes` (with the
/// enclosing root system and a positive subsystem covering a maximal
/// found subset of the input directions), `no_span`, or `unknown_cap`.
pub fn is_root_frame_closure(f: &Frame, caps: ClosureCaps, eps: f64) -> Result<RootFrameClosure> {
    let closure = reflection_closure(f, caps, eps)?;
    if closure.status == ClosureStatus::CapExceeded {
        return Ok(RootFrameClosure {
            verdict: RootFrameVerdict::UnknownCap,
            closure,
            root_system: None,
            positive: None,
        });
    }
    let orbit = closure.orbit.as_ref().expect("closed result carries its orbit");
    let mut signed = Vec::with_capacity(orbit.len() * 2);
    for v in orbit {
        signed.push(v.clone());
        signed.push(-v);
    }
    let system = RootSystem::new(f.dim(), signed, None)?;

    let spans = orbit.len() >= f.dim() && {
        let m = DMatrix::from_columns(orbit);
        let smallest = m
            .svd(false, false)
            .singular_values
            .iter()
            .fold(f64::INFINITY, |acc, &s| acc.min(s));
        smallest > eps
    };
    if !spans {
        return Ok(RootFrameClosure {
            verdict: RootFrameVerdict::NoSpan,
            closure,
            root_system: Some(system),
            positive: None,
        });
    }
    let positive = select_positive_covering(&system, f, eps)?;
    Ok(RootFrameClosure {
        verdict: RootFrameVerdict::Yes,
        closure,
        root_system: Some(system),
        positive: Some(positive),
    })
}

/// Chooses a separating functional whose positive side keeps as many input
/// directions as possible: the input sum is tried first (it covers every
/// input whenever one functional can), then seeded sphere draws. Best-effort
/// over this candidate pool, not a combinatorial optimum.
fn select_positive_covering(
    system: &RootSystem,
    f: &Frame,
    eps: f64,
) -> Result<PositiveSystem> {
    const DRAWS: usize = 256;
    let mut candidates = Vec::with_capacity(DRAWS + 1);
    let sum = f
        .vectors()
        .iter()
        .fold(DVector::zeros(f.dim()), |acc: DVector<f64>, v| acc + v);
    let sum_norm = sum.norm();
    if sum_norm > tol::ZERO_NORM {
        candidates.push(sum / sum_norm);
    }
    let mut rng = SplitMix64::new(0);
    for _ in 0..DRAWS {
        candidates.push(rng.unit_vector(f.dim()));
    }

    let mut best: Option<(usize, PositiveSystem)> = None;
    for beta in candidates {
        match positive_subsystem(system, Some(&beta), None, eps) {
            Ok(p) => {
                let score = f.vectors().iter().filter(|v| v.dot(&beta) > eps).count();
                if best.as_ref().is_none_or(|(s, _)| score > *s) {
                    let covers_all = score == f.len();
                    best = Some((score, p));
                    if covers_all {
                        break;
                    }
                }
            }
            Err(Error::DegenerateFunctional { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    best.map(|(_, p)| p).ok_or(Error::RetryExhausted { attempts: DRAWS + 1 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupEnumeration {
    Complete {
        order: usize,
        /// Every enumerated element permutes the root set.
        root_set_invariant: bool,
    },
    /// More elements exist than the cap allows; `explored` were found.
    CapExceeded { explored: usize },
}

fn reflection_matrix(alpha: &DVector<f64>) -> DMatrix<f64> {
    let dim = alpha.len();
    let mut m = DMatrix::identity(dim, dim);
    m.ger(-2.0 / alpha.norm_squared(), alpha, alpha, 1.0);
    m
}

fn matrix_key(m: &DMatrix<f64>) -> Vec<i64> {
    m.iter().map(|&x| (x / tol::DEDUP_GRID).round() as i64).collect()
}

/// Breadth-first enumeration of the group generated by the reflections
/// through the roots, deduplicating matrices on a rounded-entry grid.
/// Generators come from a positive subsystem (`sigma_alpha = sigma_{-alpha}`,
/// so half the roots suffice). On completion, also checks that every group
/// element maps the root set onto itself.
pub fn group_enumerate(
    r: &RootSystem,
    max_elements: usize,
    eps: f64,
) -> Result<GroupEnumeration> {
    if max_elements == 0 {
        return Err(Error::InvalidParameter("group element cap must be positive".into()));
    }
    let positives = positive_subsystem(r, None, Some(0), eps)?;
    let generators: Vec<DMatrix<f64>> =
        positives.positives().iter().map(reflection_matrix).collect();

    let identity = DMatrix::<f64>::identity(r.dim(), r.dim());
    let mut keys = HashSet::new();
    keys.insert(matrix_key(&identity));
    let mut elements = vec![identity];
    let mut next = 0;
    while next < elements.len() {
        for generator in &generators {
            let product = generator * &elements[next];
            let key = matrix_key(&product);
            if !keys.contains(&key) {
                if elements.len() >= max_elements {
                    return Ok(GroupEnumeration::CapExceeded { explored: elements.len() });
                }
                keys.insert(key);
                elements.push(product);
            }
        }
        next += 1;
    }

    let root_set_invariant = elements.iter().all(|g| {
        r.roots().iter().all(|alpha| find_match(r.roots(), &(g * alpha), eps).is_some())
    });
    Ok(GroupEnumeration::Complete { order: elements.len(), root_set_invariant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{construct_classical, verify_root_system, Family};
    use nalgebra::dvector;

    fn unit_frame(vectors: Vec<DVector<f64>>) -> Frame {
        let dim = vectors[0].len();
        Frame::unweighted(dim, vectors).unwrap()
    }

    fn b2_seed_frame() -> Frame {
        let s = 0.5_f64.sqrt();
        unit_frame(vec![dvector![1.0, 0.0], dvector![0.0, 1.0], dvector![s, s]])
    }

    fn irrational_pair() -> Frame {
        unit_frame(vec![dvector![1.0, 0.0], dvector![1.0_f64.cos(), 1.0_f64.sin()]])
    }

    #[test]
    fn three_vectors_close_to_b2() {
        let result = reflection_closure(&b2_seed_frame(), ClosureCaps::default(), tol::EPS).unwrap();
        assert_eq!(result.status, ClosureStatus::Closed);
        assert_eq!(result.orbit_size, 8);
        assert!(result.iterations <= 4);
        assert_eq!(result.growth_trace, vec![6, 8, 8]);
        assert_eq!(result.duplicates_collapsed, 0);
        let orbit = result.orbit.unwrap();
        let mut signed: Vec<DVector<f64>> = orbit.iter().map(|v| -v).collect();
        signed.extend(orbit);
        assert!(verify_root_system(&signed, tol::EPS).unwrap().pass);
    }

    #[test]
    fn orthogonal_axes_are_already_closed() {
        let f = unit_frame(vec![dvector![1.0, 0.0], dvector![0.0, 1.0]]);
        let result = reflection_closure(&f, ClosureCaps::default(), tol::EPS).unwrap();
        assert_eq!(result.status, ClosureStatus::Closed);
        assert_eq!(result.orbit_size, 4);
        assert_eq!(result.iterations, 1);
        assert_eq!(result.growth_trace, vec![4, 4]);
    }

    #[test]
    fn closure_is_idempotent_on_classical_positives() {
        for (family, rank) in
            [(Family::A, 3), (Family::B, 4), (Family::C, 3), (Family::D, 4), (Family::I2, 8)]
        {
            let r = construct_classical(family, rank, true).unwrap();
            let p = positive_subsystem(&r, None, Some(3), tol::EPS).unwrap();
            let f = Frame::from_positives(&p);
            let result = reflection_closure(&f, ClosureCaps::default(), tol::EPS).unwrap();
            assert_eq!(result.status, ClosureStatus::Closed, "{family}{rank} did not close");
            assert_eq!(result.orbit_size, r.len(), "{family}{rank} orbit size");
            let orbit = result.orbit.unwrap();
            for root in r.roots() {
                let canon = sign_canonical(root, tol::EPS);
                assert!(
                    find_match(&orbit, &canon, tol::EPS).is_some(),
                    "{family}{rank}: root missing from its own closure"
                );
            }
        }
    }

    #[test]
    fn irrational_angle_exceeds_the_cap() {
        let caps = ClosureCaps { max_vectors: 200, max_sweeps: 64 };
        let result = reflection_closure(&irrational_pair(), caps, tol::EPS).unwrap();
        assert_eq!(result.status, ClosureStatus::CapExceeded);
        assert!(result.orbit.is_none());
        assert!(result.orbit_size > 200);
        for pair in result.growth_trace.windows(2) {
            assert!(pair[0] < pair[1], "growth trace not strictly increasing: {pair:?}");
        }
    }

    #[test]
    fn sign_duplicates_are_collapsed() {
        let f = unit_frame(vec![
            dvector![1.0, 0.0],
            dvector![1.0, 0.0],
            dvector![-1.0, 0.0],
            dvector![0.0, 1.0],
        ]);
        let result = reflection_closure(&f, ClosureCaps::default(), tol::EPS).unwrap();
        assert_eq!(result.duplicates_collapsed, 2);
        assert_eq!(result.orbit_size, 4);
    }

    #[test]
    fn non_unit_vectors_are_rejected() {
        let f = unit_frame(vec![dvector![1.0, 0.0], dvector![0.0, 1.0]]);
        let stretched = Frame::unweighted(
            2,
            f.vectors().iter().map(|v| v * 2.0).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(matches!(
            reflection_closure(&stretched, ClosureCaps::default(), tol::EPS),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn root_frame_verdict_yes_recovers_b2() {
        let result = is_root_frame_closure(&b2_seed_frame(), ClosureCaps::default(), tol::EPS)
            .unwrap();
        assert_eq!(result.verdict, RootFrameVerdict::Yes);
        let system = result.root_system.unwrap();
        assert_eq!(system.len(), 8);
        let positive = result.positive.unwrap();
        assert_eq!(positive.len(), 4);
        // The chosen functional keeps every input direction positive.
        for v in b2_seed_frame().vectors() {
            assert!(find_match(positive.positives(), v, tol::EPS).is_some());
        }
    }

    #[test]
    fn single_direction_closes_without_spanning() {
        let f = unit_frame(vec![dvector![1.0, 0.0]]);
        let result = is_root_frame_closure(&f, ClosureCaps::default(), tol::EPS).unwrap();
        assert_eq!(result.verdict, RootFrameVerdict::NoSpan);
        let system = result.root_system.unwrap();
        assert_eq!(system.len(), 2);
        assert!(result.positive.is_none());
    }

    #[test]
    fn capped_run_stays_unknown() {
        let caps = ClosureCaps { max_vectors: 100, max_sweeps: 8 };
        let result = is_root_frame_closure(&irrational_pair(), caps, tol::EPS).unwrap();
        assert_eq!(result.verdict, RootFrameVerdict::UnknownCap);
        assert!(result.root_system.is_none());
        assert!(result.positive.is_none());
    }

    #[test]
    fn group_orders_match_the_classical_counts() {
        let cases = [
            (construct_classical(Family::B, 2, true).unwrap(), 8),
            (construct_classical(Family::B, 3, true).unwrap(), 48),
            (construct_classical(Family::A, 2, true).unwrap(), 6),
            (construct_classical(Family::I2, 5, true).unwrap(), 10),
        ];
        for (system, expected) in cases {
            match group_enumerate(&system, DEFAULT_MAX_GROUP_ELEMENTS, tol::EPS).unwrap() {
                GroupEnumeration::Complete { order, root_set_invariant } => {
                    assert_eq!(order, expected, "{:?}", system.family_tag());
                    assert!(root_set_invariant);
                }
                GroupEnumeration::CapExceeded { .. } => {
                    panic!("{:?} hit the cap", system.family_tag())
                }
            }
        }
    }

    #[test]
    fn group_cap_is_reported_not_errored() {
        let b2 = construct_classical(Family::B, 2, true).unwrap();
        match group_enumerate(&b2, 5, tol::EPS).unwrap() {
            GroupEnumeration::CapExceeded { explored } => assert_eq!(explored, 5),
            other => panic!("expected a capped enumeration, got {other:?}"),
        }
    }
}
