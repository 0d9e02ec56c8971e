//! Property-based checks: reflection algebra, frame-operator structure,
//! functional independence, serialization round-trips, and synthetic
//! eigenframes built from orthonormal vectors.

use nalgebra::DVector;
use proptest::prelude::*;

use rootframe::tol;
use rootframe::{
    commutation_check, construct_classical, eigenframe_decomposition, frame_bounds,
    frame_operator, gram_analysis, load_frame, parseval_scaling, positive_subsystem, reflect,
    reflection_closure, save_frame, spectral_analysis, ClosureCaps, Family, Frame, FrameDocument,
    GramVerdict, SplitMix64,
};

fn arb_axis_and_point() -> impl Strategy<Value = (DVector<f64>, DVector<f64>)> {
    (2usize..=8)
        .prop_flat_map(|dim| {
            (
                prop::collection::vec(-10.0f64..10.0, dim),
                prop::collection::vec(-10.0f64..10.0, dim),
            )
        })
        .prop_map(|(a, x)| (DVector::from_vec(a), DVector::from_vec(x)))
        .prop_filter("axis must be well away from zero", |(a, _)| a.norm() > 0.1)
}

fn arb_frame() -> impl Strategy<Value = Frame> {
    (2usize..=8)
        .prop_flat_map(|dim| {
            (3usize..=12).prop_flat_map(move |count| {
                (
                    prop::collection::vec(prop::collection::vec(-5.0f64..5.0, dim), count),
                    prop::collection::vec(0.1f64..4.0, count),
                )
            })
        })
        .prop_filter_map("vectors must be nonzero", |(rows, weights)| {
            let dim = rows[0].len();
            let vectors: Vec<DVector<f64>> = rows.into_iter().map(DVector::from_vec).collect();
            if vectors.iter().any(|v| v.norm() <= 1e-6) {
                return None;
            }
            Frame::new(dim, vectors, Some(weights)).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reflection_is_an_isometric_involution((alpha, x) in arb_axis_and_point()) {
        let once = reflect(&alpha, &x).unwrap();
        let twice = reflect(&alpha, &once).unwrap();
        let scale = 1.0 + x.norm();
        prop_assert!((once.norm() - x.norm()).abs() <= 1e-12 * scale);
        prop_assert!((&twice - &x).norm() <= 1e-12 * scale);
        let negated = reflect(&alpha, &alpha).unwrap();
        prop_assert!((&negated + &alpha).norm() <= 1e-12 * (1.0 + alpha.norm()));
    }
}

proptest! {
    #[test]
    fn frame_operator_is_symmetric_psd_with_the_weighted_norm_trace(f in arb_frame()) {
        let s = frame_operator(&f);
        prop_assert!((&s - s.transpose()).amax() <= 1e-12 * (1.0 + s.amax()));
        let (a, b) = frame_bounds(&f);
        prop_assert!(a >= -1e-12 * (1.0 + b));
        let mass: f64 = f
            .vectors()
            .iter()
            .zip(f.weights())
            .map(|(v, w)| w * v.norm_squared())
            .sum();
        prop_assert!((s.trace() - mass).abs() <= 1e-12 * (1.0 + mass));
    }

    #[test]
    fn the_functional_never_changes_the_operator(
        seed_a in 0u64..(1 << 48),
        seed_b in 0u64..(1 << 48),
    ) {
        for system in [
            construct_classical(Family::B, 3, true).unwrap(),
            construct_classical(Family::A, 3, true).unwrap(),
            construct_classical(Family::I2, 7, true).unwrap(),
        ] {
            let pa = positive_subsystem(&system, None, Some(seed_a), tol::EPS).unwrap();
            let pb = positive_subsystem(&system, None, Some(seed_b), tol::EPS).unwrap();
            let sa = frame_operator(&Frame::from_positives(&pa));
            let sb = frame_operator(&Frame::from_positives(&pb));
            prop_assert!((&sa - &sb).amax() <= 1e-12, "{:?}", system.family_tag());
        }
    }
}

#[test]
fn two_hundred_random_frames_round_trip_bitwise() {
    let mut rng = SplitMix64::new(0xD0C5);
    let dir = tempfile::tempdir().unwrap();
    for i in 0..200 {
        let dim = 2 + (rng.next_u64() % 7) as usize;
        let count = 1 + (rng.next_u64() % 12) as usize;
        let vectors: Vec<DVector<f64>> = (0..count)
            .map(|_| {
                let scale = 10f64.powi((rng.next_u64() % 13) as i32 - 6);
                DVector::from_iterator(dim, (0..dim).map(|_| rng.next_gaussian() * scale))
            })
            .collect();
        if vectors.iter().any(|v| v.norm() <= tol::ZERO_NORM) {
            continue;
        }
        let weights = rng
            .next_u64()
            .is_multiple_of(2)
            .then(|| (0..count).map(|_| rng.next_f64() * 3.0 + 1e-3).collect::<Vec<_>>());
        let frame = Frame::new(dim, vectors, weights).unwrap();
        let beta = rng.next_u64().is_multiple_of(2).then(|| rng.unit_vector(dim));
        let doc = FrameDocument::from_frame(&frame, Some("random"), beta.as_ref());

        let path = dir.path().join(format!("frame_{i}.json"));
        save_frame(&doc, std::fs::File::create(&path).unwrap()).unwrap();
        let loaded = load_frame(std::fs::File::open(&path).unwrap()).unwrap();

        assert_eq!(loaded.document, doc, "frame {i}: document round trip");
        for (a, b) in loaded.frame.vectors().iter().zip(frame.vectors()) {
            for (x, y) in a.iter().zip(b.iter()) {
                assert_eq!(x.to_bits(), y.to_bits(), "frame {i}: vector payload");
            }
        }
        for (a, b) in loaded.frame.weights().iter().zip(frame.weights()) {
            assert_eq!(a.to_bits(), b.to_bits(), "frame {i}: weight payload");
        }
    }
}

fn random_orthonormal_basis(rng: &mut SplitMix64, dim: usize) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v = rng.unit_vector(dim);
        for b in &basis {
            let overlap = v.dot(b);
            v -= b * overlap;
        }
        let norm = v.norm();
        // A draw nearly inside the current span would lose precision; redraw.
        if norm > 1e-3 {
            basis.push(v / norm);
        }
    }
    basis
}

#[test]
fn synthetic_orthogonal_eigenframes_rescale_to_parseval() {
    let mut rng = SplitMix64::new(0xE16E);
    for round in 0..20 {
        let dim = 2 + (rng.next_u64() % 5) as usize;
        let mut vectors = Vec::new();
        let mut weights = Vec::new();
        for b in random_orthonormal_basis(&mut rng, dim) {
            let copies = 1 + (rng.next_u64() % 2) as usize;
            for _ in 0..copies {
                vectors.push(b.clone());
                weights.push(0.5 + 1.5 * rng.next_f64());
            }
        }
        let f = Frame::new(dim, vectors, Some(weights)).unwrap();

        let spectral = spectral_analysis(&f, tol::EPS);
        assert!(spectral.verdicts.is_frame, "round {round}");
        assert!(spectral.verdicts.is_eigenframe, "round {round}");
        assert!(commutation_check(&f).commutes, "round {round}");

        let scaling = parseval_scaling(&f, tol::EPS).unwrap();
        assert!(scaling.residual <= tol::PARSEVAL_RESIDUAL, "round {round}");
        assert!(scaling.dimension_defect <= tol::DIMENSION_DEFECT, "round {round}");

        match gram_analysis(&f, tol::EPS).verdict {
            GramVerdict::BlockDiagonal { .. } => {}
            other => panic!("round {round}: expected a block-diagonal Gram, got {other:?}"),
        }
        for component in eigenframe_decomposition(&f, tol::EPS).unwrap().components {
            assert!(component.projector_residual <= tol::SUBSPACE_RESIDUAL, "round {round}");
        }
    }
}

#[test]
fn closure_results_are_reproducible() {
    let caps = ClosureCaps { max_vectors: 300, max_sweeps: 64 };
    let theta = 2.0_f64.sqrt();
    let pair = Frame::unweighted(
        2,
        vec![
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![theta.cos(), theta.sin()]),
        ],
    )
    .unwrap();
    let first = reflection_closure(&pair, caps, tol::EPS).unwrap();
    let second = reflection_closure(&pair, caps, tol::EPS).unwrap();
    assert_eq!(first.status, second.status);
    assert_eq!(first.growth_trace, second.growth_trace);
    assert_eq!(first.orbit_size, second.orbit_size);
}
