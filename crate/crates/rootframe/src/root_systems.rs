//! Root systems: classical constructors, axiom verification, positive
//! subsystems, reflection orbits and orbit-constant weight validation.
//!
//! A root system is a finite set of nonzero vectors closed under reflection
//! through each of its members; sign symmetry (`-v` present for every `v`)
//! is a consequence of closure, since reflecting a root through itself
//! negates it.

use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matching::{coords_match, find_match, sign_canonical};
use crate::rng::SplitMix64;
use crate::tol;

/// Classical families with built-in constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
    C,
    D,
    I2,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Some(Family::A),
            "B" => Some(Family::B),
            "C" => Some(Family::C),
            "D" => Some(Family::D),
            "I2" => Some(Family::I2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
            Family::C => write!(f, "C"),
            Family::D => write!(f, "D"),
            Family::I2 => write!(f, "I2"),
        }
    }
}

/// A finite sign-symmetric vector set closed under its own reflections.
///
/// Construction validates the closure axiom at [`tol::EPS`], so a value of
/// this type is always a genuine root system. Unit norms are not required
/// here; operations that need them state it and check.
#[derive(Debug, Clone)]
pub struct RootSystem {
    dim: usize,
    roots: Vec<DVector<f64>>,
    family_tag: Option<String>,
}

impl RootSystem {
    /// Validates and wraps a root set. Fails if any vector is zero, if
    /// dimensions are inconsistent, or if the reflection-closure axiom does
    /// not hold at [`tol::EPS`].
    pub fn new(
        dim: usize,
        roots: Vec<DVector<f64>>,
        family_tag: Option<String>,
    ) -> Result<RootSystem> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if roots.is_empty() {
            return Err(Error::InvalidInput("root set is empty".into()));
        }
        let report = verify_root_system_in_dim(&roots, dim, tol::EPS)?;
        if !report.pass {
            let v = &report.violations[0];
            return Err(Error::InvalidInput(format!(
                "not a root system: {} reflection(s) land outside the set, first witness \
                 sigma_[{}]([{}])",
                report.violations.len(),
                v.alpha_index,
                v.beta_index
            )));
        }
        Ok(RootSystem { dim, roots, family_tag })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[DVector<f64>] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn family_tag(&self) -> Option<&str> {
        self.family_tag.as_deref()
    }

    pub fn is_unit_norm(&self, eps: f64) -> bool {
        self.roots.iter().all(|r| (r.norm() - 1.0).abs() <= eps)
    }

    /// Block-diagonal union: each part is embedded in its own coordinate
    /// block of the sum space. The union of root systems on orthogonal
    /// subspaces is again a root system.
    pub fn direct_sum(parts: &[RootSystem]) -> Result<RootSystem> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("direct sum of no systems".into()));
        }
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let mut roots = Vec::new();
        let mut offset = 0;
        for part in parts {
            for root in &part.roots {
                let mut v = DVector::zeros(dim);
                v.rows_mut(offset, part.dim).copy_from(root);
                roots.push(v);
            }
            offset += part.dim;
        }
        let tag = parts
            .iter()
            .map(|p| p.family_tag().unwrap_or("custom"))
            .collect::<Vec<_>>()
            .join("+");
        RootSystem::new(dim, roots, Some(tag))
    }
}

/// A choice of half of a root system: the roots on the positive side of a
/// separating functional `beta`.
#[derive(Debug, Clone)]
pub struct PositiveSystem {
    parent: RootSystem,
    beta: DVector<f64>,
    positives: Vec<DVector<f64>>,
    positive_indices: Vec<usize>,
}

impl PositiveSystem {
    pub fn parent(&self) -> &RootSystem {
        &self.parent
    }

    pub fn beta(&self) -> &DVector<f64> {
        &self.beta
    }

    pub fn positives(&self) -> &[DVector<f64>] {
        &self.positives
    }

    /// Indices of the positive roots inside `parent.roots()`.
    pub fn indices(&self) -> &[usize] {
        &self.positive_indices
    }

    pub fn len(&self) -> usize {
        self.positives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.parent.dim()
    }
}

/// Builds the classical family `family` at the given rank (for `I2`, the
/// polygon order `n`). `A` at rank `r` lives in ambient `R^{r+1}` and does
/// not span it; `B`/`C`/`D` need rank >= 2; `I2` needs n >= 2.
///
/// With `normalize`, every root is divided by its computed norm; normalized
/// `C` coincides with normalized `B`, and the tag records what was asked for.
pub fn construct_classical(family: Family, rank: usize, normalize: bool) -> Result<RootSystem> {
    let roots = match family {
        Family::A => {
            if rank < 1 {
                return Err(Error::InvalidParameter("A requires rank >= 1".into()));
            }
            let dim = rank + 1;
            let mut roots = Vec::new();
            for i in 0..dim {
                for j in (i + 1)..dim {
                    roots.push(e_minus(dim, i, j));
                }
            }
            with_negatives(roots)
        }
        Family::B => {
            if rank < 2 {
                return Err(Error::InvalidParameter("B requires rank >= 2".into()));
            }
            let mut roots = axis_roots(rank, 1.0);
            roots.extend(diagonal_roots(rank));
            with_negatives(roots)
        }
        Family::C => {
            if rank < 2 {
                return Err(Error::InvalidParameter("C requires rank >= 2".into()));
            }
            let mut roots = axis_roots(rank, 2.0);
            roots.extend(diagonal_roots(rank));
            with_negatives(roots)
        }
        Family::D => {
            if rank < 2 {
                return Err(Error::InvalidParameter("D requires rank >= 2".into()));
            }
            with_negatives(diagonal_roots(rank))
        }
        Family::I2 => {
            if rank < 2 {
                return Err(Error::InvalidParameter("I2 requires n >= 2".into()));
            }
            // Positive roots of the dihedral system: i * w^j for w = e^{i pi/n},
            // identified with unit vectors at angles pi/2 + j pi/n.
            let n = rank;
            let mut roots = Vec::new();
            for j in 0..n {
                let theta = std::f64::consts::FRAC_PI_2 + (j as f64) * std::f64::consts::PI / n as f64;
                roots.push(DVector::from_vec(vec![theta.cos(), theta.sin()]));
            }
            with_negatives(roots)
        }
    };

    let roots = if normalize {
        roots.into_iter().map(|r| {
            let n = r.norm();
            r / n
        }).collect()
    } else {
        roots
    };

    let dim = roots[0].len();
    let tag = if family == Family::I2 {
        format!("I2({rank})")
    } else {
        format!("{family}{rank}")
    };
    RootSystem::new(dim, roots, Some(tag))
}

fn e_minus(dim: usize, i: usize, j: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v[j] = -1.0;
    v
}

fn axis_roots(dim: usize, scale: f64) -> Vec<DVector<f64>> {
    (0..dim)
        .map(|i| {
            let mut v = DVector::zeros(dim);
            v[i] = scale;
            v
        })
        .collect()
}

fn diagonal_roots(dim: usize) -> Vec<DVector<f64>> {
    let mut roots = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            roots.push(e_minus(dim, i, j));
            let mut plus = DVector::zeros(dim);
            plus[i] = 1.0;
            plus[j] = 1.0;
            roots.push(plus);
        }
    }
    roots
}

fn with_negatives(half: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let mut all = Vec::with_capacity(half.len() * 2);
    for v in half {
        all.push(-&v);
        all.insert(all.len() - 1, v);
    }
    all
}

/// One reflection that lands outside the candidate set:
/// `sigma_[alpha_index]([beta_index])` produced `reflected`, which matches
/// no listed vector.
#[derive(Debug, Clone)]
pub struct Violation {
    pub alpha_index: usize,
    pub beta_index: usize,
    pub reflected: DVector<f64>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Checks the root-system axiom: every reflection of a listed vector through
/// a listed vector matches some listed vector within `eps` (coordinatewise).
/// Sign symmetry is covered by the `alpha == beta` pairs, since
/// `sigma_alpha(alpha) = -alpha`.
pub fn verify_root_system(vectors: &[DVector<f64>], eps: f64) -> Result<VerificationReport> {
    if vectors.is_empty() {
        return Err(Error::InvalidInput("empty vector set".into()));
    }
    verify_root_system_in_dim(vectors, vectors[0].len(), eps)
}

fn verify_root_system_in_dim(
    vectors: &[DVector<f64>],
    dim: usize,
    eps: f64,
) -> Result<VerificationReport> {
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
    let mut violations = Vec::new();
    for (i, alpha) in vectors.iter().enumerate() {
        for (j, beta) in vectors.iter().enumerate() {
            let reflected = reflect(alpha, beta)?;
            if find_match(vectors, &reflected, eps).is_none() {
                violations.push(Violation { alpha_index: i, beta_index: j, reflected });
            }
        }
    }
    Ok(VerificationReport { pass: violations.is_empty(), violations })
}

/// The reflection `sigma_alpha(x) = x - 2 <x, alpha> alpha / ||alpha||^2`.
/// An isometric involution fixing the hyperplane orthogonal to `alpha`.
pub fn reflect(alpha: &DVector<f64>, x: &DVector<f64>) -> Result<DVector<f64>> {
    let norm_sq = alpha.norm_squared();
    if norm_sq <= tol::ZERO_NORM * tol::ZERO_NORM {
        return Err(Error::InvalidInput("reflection axis is zero".into()));
    }
    if alpha.len() != x.len() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: axis has {} coordinates, argument has {}",
            alpha.len(),
            x.len()
        )));
    }
    Ok(x - alpha * (2.0 * x.dot(alpha) / norm_sq))
}

/// Selects the half of `r` on the positive side of a separating functional.
///
/// With `beta` given, it must be non-degenerate: every root needs
/// `|<alpha, beta>| > eps`. With `beta` omitted, directions are drawn from
/// the unit sphere with a [`SplitMix64`] seeded by `seed` (default 0) until
/// one is accepted, up to 64 attempts. The accepted functional is recorded
/// in the result.
pub fn positive_subsystem(
    r: &RootSystem,
    beta: Option<&DVector<f64>>,
    seed: Option<u64>,
    eps: f64,
) -> Result<PositiveSystem> {
    const MAX_DRAWS: usize = 64;

    let beta = match beta {
        Some(b) => {
            if b.len() != r.dim() {
                return Err(Error::InvalidParameter(format!(
                    "beta has {} coordinates, expected {}",
                    b.len(),
                    r.dim()
                )));
            }
            if let Some((index, inner)) = degenerate_root(r, b, eps) {
                return Err(Error::DegenerateFunctional { index, inner, eps });
            }
            b.clone()
        }
        None => {
            let mut rng = SplitMix64::new(seed.unwrap_or(0));
            let mut accepted = None;
            for _ in 0..MAX_DRAWS {
                let candidate = rng.unit_vector(r.dim());
                if degenerate_root(r, &candidate, eps).is_none() {
                    accepted = Some(candidate);
                    break;
                }
            }
            accepted.ok_or(Error::RetryExhausted { attempts: MAX_DRAWS })?
        }
    };

    let mut positives = Vec::new();
    let mut positive_indices = Vec::new();
    for (i, root) in r.roots().iter().enumerate() {
        if root.dot(&beta) > 0.0 {
            positives.push(root.clone());
            positive_indices.push(i);
        }
    }
    if positives.len() * 2 != r.len() {
        return Err(Error::InvalidInput(format!(
            "positive side holds {} of {} roots; a sign-symmetric system must split in half",
            positives.len(),
            r.len()
        )));
    }
    Ok(PositiveSystem { parent: r.clone(), beta, positives, positive_indices })
}

fn degenerate_root(r: &RootSystem, beta: &DVector<f64>, eps: f64) -> Option<(usize, f64)> {
    r.roots()
        .iter()
        .enumerate()
        .find_map(|(i, root)| {
            let inner = root.dot(beta).abs();
            (inner <= eps).then_some((i, inner))
        })
}

/// Partition of the root indices into reflection-group orbits.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    classes: Vec<Vec<usize>>,
}

impl OrbitPartition {
    /// Disjoint index classes, each sorted, ordered by smallest member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, index: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&index).is_ok())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Union-find closure of `alpha ~ sigma_gamma(alpha)` over all roots. The
/// classes are the domains on which a reflection-invariant parameter
/// function must be constant.
pub fn orbit_partition(r: &RootSystem) -> OrbitPartition {
    let roots = r.roots();
    let mut uf = UnionFind::new(roots.len());
    for gamma in roots {
        for (i, alpha) in roots.iter().enumerate() {
            let reflected = reflect(gamma, alpha)
                .expect("roots of a validated system are nonzero");
            let j = find_match(roots, &reflected, tol::EPS)
                .expect("validated root system is closed under its own reflections");
            uf.union(i, j);
        }
    }
    let mut by_rep: Vec<Vec<usize>> = Vec::new();
    let mut rep_order: Vec<usize> = Vec::new();
    for i in 0..roots.len() {
        let rep = uf.find(i);
        match rep_order.iter().position(|&r0| r0 == rep) {
            Some(k) => by_rep[k].push(i),
            None => {
                rep_order.push(rep);
                by_rep.push(vec![i]);
            }
        }
    }
    OrbitPartition { classes: by_rep }
}

#[derive(Debug, Clone)]
pub struct ParameterViolation {
    pub class_index: usize,
    pub min_weight: f64,
    pub max_weight: f64,
}

#[derive(Debug, Clone)]
pub struct ParameterFunctionReport {
    pub pass: bool,
    pub violations: Vec<ParameterViolation>,
}

/// Checks that `weights[i]` (the parameter value attached to root `i`) is
/// constant on every reflection orbit, within relative tolerance
/// [`tol::EPS`]. Sign symmetry `k(alpha) = k(-alpha)` is covered because
/// `alpha` and `-alpha` always share an orbit.
pub fn validate_parameter_function(
    r: &RootSystem,
    weights: &[f64],
) -> Result<ParameterFunctionReport> {
    if weights.len() != r.len() {
        return Err(Error::InvalidParameter(format!(
            "{} weights for {} roots",
            weights.len(),
            r.len()
        )));
    }
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    let partition = orbit_partition(r);
    let mut violations = Vec::new();
    for (class_index, class) in partition.classes().iter().enumerate() {
        let mut min_w = f64::INFINITY;
        let mut max_w = f64::NEG_INFINITY;
        for &i in class {
            min_w = min_w.min(weights[i]);
            max_w = max_w.max(weights[i]);
        }
        if max_w - min_w > tol::EPS * max_w {
            violations.push(ParameterViolation {
                class_index,
                min_weight: min_w,
                max_weight: max_w,
            });
        }
    }
    Ok(ParameterFunctionReport { pass: violations.is_empty(), violations })
}

/// The input directions together with their negatives, deduped up to sign:
/// the smallest sign-symmetric superset of the input.
pub fn sign_symmetrize(vectors: &[DVector<f64>], eps: f64) -> Vec<DVector<f64>> {
    let mut canon: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let c = sign_canonical(v, eps);
        if !canon.iter().any(|u| coords_match(u, &c, eps)) {
            canon.push(c);
        }
    }
    let mut out = Vec::with_capacity(canon.len() * 2);
    for c in canon {
        out.push(-&c);
        out.insert(out.len() - 1, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn b2() -> RootSystem {
        construct_classical(Family::B, 2, true).unwrap()
    }

    #[test]
    fn b2_has_eight_unit_roots() {
        let r = b2();
        assert_eq!(r.len(), 8);
        assert!(r.is_unit_norm(1e-12));
        let s = 0.5_f64.sqrt();
        for expected in [
            dvector![1.0, 0.0],
            dvector![0.0, 1.0],
            dvector![s, s],
            dvector![s, -s],
        ] {
            assert!(find_match(r.roots(), &expected, 1e-9).is_some());
            assert!(find_match(r.roots(), &(-&expected), 1e-9).is_some());
        }
    }

    #[test]
    fn i2_2_is_the_axis_pair() {
        let r = construct_classical(Family::I2, 2, true).unwrap();
        assert_eq!(r.len(), 4);
        for expected in [dvector![0.0, 1.0], dvector![-1.0, 0.0]] {
            assert!(find_match(r.roots(), &expected, 1e-9).is_some());
            assert!(find_match(r.roots(), &(-&expected), 1e-9).is_some());
        }
    }

    #[test]
    fn a2_lives_in_r3() {
        let r = construct_classical(Family::A, 2, true).unwrap();
        assert_eq!(r.dim(), 3);
        assert_eq!(r.len(), 6);
        let s = 0.5_f64.sqrt();
        assert!(find_match(r.roots(), &dvector![s, -s, 0.0], 1e-9).is_some());
        assert!(find_match(r.roots(), &dvector![s, 0.0, -s], 1e-9).is_some());
        assert!(find_match(r.roots(), &dvector![0.0, s, -s], 1e-9).is_some());
    }

    #[test]
    fn normalized_c_equals_b_with_its_own_tag() {
        let b = construct_classical(Family::B, 3, true).unwrap();
        let c = construct_classical(Family::C, 3, true).unwrap();
        assert_eq!(c.family_tag(), Some("C3"));
        assert_eq!(b.family_tag(), Some("B3"));
        assert_eq!(b.len(), c.len());
        for root in c.roots() {
            assert!(find_match(b.roots(), root, 1e-12).is_some());
        }
    }

    #[test]
    fn unnormalized_families_are_still_root_systems() {
        for (family, rank) in [(Family::A, 3), (Family::B, 3), (Family::C, 3), (Family::D, 4)] {
            let r = construct_classical(family, rank, false).unwrap();
            let report = verify_root_system(r.roots(), 1e-9).unwrap();
            assert!(report.pass, "{family}{rank} failed closure");
        }
    }

    #[test]
    fn rank_below_minimum_is_rejected() {
        assert!(matches!(
            construct_classical(Family::B, 1, true),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            construct_classical(Family::I2, 1, true),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            construct_classical(Family::A, 0, true),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn verify_passes_b2_and_the_rank_one_line() {
        let r = b2();
        assert!(verify_root_system(r.roots(), 1e-9).unwrap().pass);
        let line = vec![dvector![1.0, 0.0], dvector![-1.0, 0.0]];
        assert!(verify_root_system(&line, 1e-9).unwrap().pass);
    }

    #[test]
    fn verify_reports_witnesses_for_broken_b2() {
        // B_2 with the (e1 - e2) pair removed. Brute-force oracle over all
        // pairs: reflections that should land on +-(e1-e2)/sqrt(2) now have
        // no home.
        let s = 0.5_f64.sqrt();
        let broken = vec![
            dvector![1.0, 0.0],
            dvector![-1.0, 0.0],
            dvector![0.0, 1.0],
            dvector![0.0, -1.0],
            dvector![s, s],
            dvector![-s, -s],
        ];
        let report = verify_root_system(&broken, 1e-9).unwrap();
        assert!(!report.pass);
        // Oracle: sigma_{(e1+e2)/sqrt2}(e1) = -e2 is fine, but
        // sigma_{e1}((e1+e2)/sqrt2) = (-e1+e2)/sqrt2 is missing.
        let missing = dvector![-s, s];
        assert!(report
            .violations
            .iter()
            .any(|v| coords_match(&v.reflected, &missing, 1e-9)
                || coords_match(&v.reflected, &(-&missing), 1e-9)));
        // Every reported reflection really is absent from the set.
        for v in &report.violations {
            assert!(find_match(&broken, &v.reflected, 1e-9).is_none());
        }
    }

    #[test]
    fn verify_rejects_zero_vectors() {
        let bad = vec![dvector![0.0, 0.0], dvector![1.0, 0.0]];
        assert!(matches!(verify_root_system(&bad, 1e-9), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn reflect_matches_hand_values() {
        let e1 = dvector![1.0, 0.0];
        let e2 = dvector![0.0, 1.0];
        assert_eq!(reflect(&e1, &e1).unwrap(), dvector![-1.0, 0.0]);
        assert_eq!(reflect(&e1, &e2).unwrap(), e2);
        let s = 0.5_f64.sqrt();
        let diag = dvector![s, s];
        let r = reflect(&diag, &e1).unwrap();
        assert!(coords_match(&r, &dvector![0.0, -1.0], 1e-12));
    }

    #[test]
    fn reflect_rejects_zero_axis() {
        let zero = dvector![0.0, 0.0];
        assert!(matches!(reflect(&zero, &dvector![1.0, 0.0]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn positive_subsystem_with_explicit_beta() {
        // Signs of <alpha, (2,1)> for the eight normalized B_2 roots, by hand.
        let r = b2();
        let beta = dvector![2.0, 1.0];
        let p = positive_subsystem(&r, Some(&beta), None, 1e-9).unwrap();
        assert_eq!(p.len(), 4);
        let s = 0.5_f64.sqrt();
        for expected in [
            dvector![1.0, 0.0],
            dvector![0.0, 1.0],
            dvector![s, s],
            dvector![s, -s],
        ] {
            assert!(find_match(p.positives(), &expected, 1e-9).is_some());
        }
    }

    #[test]
    fn orthogonal_beta_is_degenerate() {
        let r = b2();
        let s = 0.5_f64.sqrt();
        let beta = dvector![s, s];
        assert!(matches!(
            positive_subsystem(&r, Some(&beta), None, 1e-9),
            Err(Error::DegenerateFunctional { .. })
        ));
    }

    #[test]
    fn seeded_beta_selects_exactly_half() {
        for family in [Family::A, Family::B, Family::D, Family::I2] {
            let r = construct_classical(family, 3, true).unwrap();
            for seed in 0..20 {
                let p = positive_subsystem(&r, None, Some(seed), 1e-9).unwrap();
                assert_eq!(p.len() * 2, r.len());
                for root in p.positives() {
                    assert!(root.dot(p.beta()) > 0.0);
                }
            }
        }
    }

    #[test]
    fn b2_splits_into_axis_and_diagonal_orbits() {
        // Oracle: brute-force closure. Long and short roots of B_2 stay in
        // separate orbits even after normalization.
        let r = b2();
        let partition = orbit_partition(&r);
        assert_eq!(partition.len(), 2);
        let axis = dvector![1.0, 0.0];
        let s = 0.5_f64.sqrt();
        let diag = dvector![s, s];
        let axis_idx = find_match(r.roots(), &axis, 1e-9).unwrap();
        let diag_idx = find_match(r.roots(), &diag, 1e-9).unwrap();
        assert_ne!(partition.class_of(axis_idx), partition.class_of(diag_idx));
        for class in partition.classes() {
            assert_eq!(class.len(), 4);
        }
    }

    #[test]
    fn a2_is_a_single_orbit() {
        let r = construct_classical(Family::A, 2, true).unwrap();
        let partition = orbit_partition(&r);
        assert_eq!(partition.len(), 1);
        assert_eq!(partition.classes()[0].len(), 6);
    }

    #[test]
    fn orthogonal_pair_gives_two_orbits() {
        let roots = vec![
            dvector![1.0, 0.0],
            dvector![-1.0, 0.0],
            dvector![0.0, 1.0],
            dvector![0.0, -1.0],
        ];
        let r = RootSystem::new(2, roots, None).unwrap();
        assert_eq!(orbit_partition(&r).len(), 2);
    }

    #[test]
    fn orbit_classes_are_reflection_invariant() {
        for (family, rank) in [(Family::A, 3), (Family::B, 4), (Family::D, 4), (Family::I2, 6)] {
            let r = construct_classical(family, rank, true).unwrap();
            let partition = orbit_partition(&r);
            for class in partition.classes() {
                for gamma in r.roots() {
                    for &i in class {
                        let image = reflect(gamma, &r.roots()[i]).unwrap();
                        let j = find_match(r.roots(), &image, 1e-9).unwrap();
                        assert!(class.binary_search(&j).is_ok() || class.contains(&j));
                    }
                }
            }
        }
    }

    #[test]
    fn parameter_function_constant_on_orbits() {
        let r = b2();
        let ones = vec![1.0; r.len()];
        assert!(validate_parameter_function(&r, &ones).unwrap().pass);

        // 2 on axis roots, 3 on diagonals: exactly the two orbits.
        let weights: Vec<f64> = r
            .roots()
            .iter()
            .map(|root| if root.iter().any(|x| x.abs() > 0.9) { 2.0 } else { 3.0 })
            .collect();
        assert!(validate_parameter_function(&r, &weights).unwrap().pass);
    }

    #[test]
    fn parameter_function_fails_across_one_orbit() {
        let r = construct_classical(Family::A, 2, true).unwrap();
        let mut weights = vec![1.0; r.len()];
        weights[0] = 2.0;
        let report = validate_parameter_function(&r, &weights).unwrap();
        assert!(!report.pass);
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn nonpositive_weights_are_rejected() {
        let r = b2();
        let mut weights = vec![1.0; r.len()];
        weights[3] = 0.0;
        assert!(matches!(
            validate_parameter_function(&r, &weights),
            Err(Error::InvalidWeight { index: 3, .. })
        ));
    }

    #[test]
    fn direct_sum_is_block_diagonal() {
        let b2 = b2();
        let i23 = construct_classical(Family::I2, 3, true).unwrap();
        let union = RootSystem::direct_sum(&[b2.clone(), i23.clone()]).unwrap();
        assert_eq!(union.dim(), 4);
        assert_eq!(union.len(), b2.len() + i23.len());
    }

    #[test]
    fn sign_symmetrize_restores_the_full_system() {
        let r = b2();
        let p = positive_subsystem(&r, None, Some(1), 1e-9).unwrap();
        let full = sign_symmetrize(p.positives(), 1e-9);
        assert_eq!(full.len(), 8);
        assert!(verify_root_system(&full, 1e-9).unwrap().pass);
    }
}
