//! Property suites for the library-level invariants: embedding shape law,
//! threshold monotonicity, normalization behavior, filter linearity and the
//! scale invariances of the estimators.

use proptest::prelude::*;

use rqa_core::embedding::{ami_curve, cao_curves, utde_embed, EmbeddingParams};
use rqa_core::preprocess::{sg_smooth, zmuv_normalize, SmoothingSpec};
use rqa_core::rqa::{recurrence_matrix, rqa_all, Norm};
use rqa_core::TimeSeries;

fn series(samples: Vec<f64>) -> TimeSeries {
    TimeSeries::new(samples, 1.0, "prop").unwrap()
}

fn sample_vec(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Row/column law: N − (m−1)τ rows of m entries, each a source sample.
    #[test]
    fn utde_shape_law(
        samples in sample_vec(2..400),
        m in 1usize..8,
        tau in 1usize..10,
    ) {
        let n = samples.len();
        prop_assume!(n > (m - 1) * tau);
        let x = series(samples);
        let emb = utde_embed(&x, EmbeddingParams::new(m, tau).unwrap()).unwrap();
        prop_assert_eq!(emb.n_rows(), n - (m - 1) * tau);
        prop_assert_eq!(emb.dim(), m);
        for r in 0..emb.n_rows() {
            for c in 0..m {
                prop_assert_eq!(emb.row(r)[c], x.samples()[r + c * tau]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // ε₁ ≤ ε₂ implies R(ε₁) ⊆ R(ε₂) bitwise, hence REC(ε₁) ≤ REC(ε₂).
    #[test]
    fn recurrences_grow_with_the_threshold(
        samples in sample_vec(30..90),
        m in 1usize..5,
        tau in 1usize..4,
        eps_lo in 0.1f64..3.0,
        delta in 0.0f64..3.0,
    ) {
        let n = samples.len();
        prop_assume!(n >= (m - 1) * tau + 2);
        let x = series(samples);
        let emb = utde_embed(&x, EmbeddingParams::new(m, tau).unwrap()).unwrap();
        let small = recurrence_matrix(&emb, eps_lo, Norm::Euclidean).unwrap();
        let large = recurrence_matrix(&emb, eps_lo + delta, Norm::Euclidean).unwrap();
        let mut subset = true;
        for i in 0..small.size() {
            for j in 0..small.size() {
                subset &= !small.bit(i, j) || large.bit(i, j);
            }
        }
        prop_assert!(subset);
        let rec_small = rqa_core::rqa::rec_rate(&small);
        let rec_large = rqa_core::rqa::rec_rate(&large);
        prop_assert!(rec_small <= rec_large);
    }

    #[test]
    fn zmuv_is_a_projection(samples in sample_vec(3..200)) {
        let spread = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - samples.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assume!(spread > 1e-6);
        let x = series(samples);
        let once = zmuv_normalize(&x).unwrap();
        let twice = zmuv_normalize(&once).unwrap();
        for (a, b) in once.samples().iter().zip(twice.samples()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let n = once.len() as f64;
        let mean = once.samples().iter().sum::<f64>() / n;
        let var = once.samples().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        prop_assert!(mean.abs() < 1e-12);
        prop_assert!((var.sqrt() - 1.0).abs() < 1e-12);
    }

    // sg(a·x + b·y) == a·sg(x) + b·sg(y), including the fitted boundaries.
    #[test]
    fn savitzky_golay_is_linear(
        x in sample_vec(40..100),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let len = x.len();
        let y: Vec<f64> = (0..len).map(|i| ((i * 37 + 11) % 17) as f64 - 8.0).collect();
        let spec = SmoothingSpec::new(5, 29, 0).unwrap();
        let combo: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let lhs = sg_smooth(&series(combo), &spec).unwrap();
        let sx = sg_smooth(&series(x), &spec).unwrap();
        let sy = sg_smooth(&series(y), &spec).unwrap();
        for i in 0..len {
            let rhs = a * sx.samples()[i] + b * sy.samples()[i];
            prop_assert!((lhs.samples()[i] - rhs).abs() < 1e-9, "index {}", i);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    // E1/E2 are ratios of distances, so affine maps of the series cancel.
    #[test]
    fn cao_curves_are_affine_invariant(
        seed in 0u64..1000,
        scale in 0.5f64..3.0,
        shift in -5.0f64..5.0,
        negate in proptest::bool::ANY,
    ) {
        let base = rqa_core::signals::gen_gaussian_noise(seed, 120).unwrap();
        let a = if negate { -scale } else { scale };
        let mapped = series(base.samples().iter().map(|v| a * v + shift).collect());
        let c1 = cao_curves(&base, 2, 4).unwrap();
        let c2 = cao_curves(&mapped, 2, 4).unwrap();
        for (u, v) in c1.e1().iter().zip(c2.e1()) {
            prop_assert!((u - v).abs() < 1e-9);
        }
        for (u, v) in c1.e2().iter().zip(c2.e2()) {
            prop_assert!((u - v).abs() < 1e-9);
        }
    }

    // Normalization rescales all distances by 1/σ, so thresholding the
    // normalized series at ε equals thresholding the raw series at ε·σ.
    // ε is nudged to the midpoint between attained distances to stay off
    // the boundary.
    #[test]
    fn zmuv_rescales_the_recurrence_threshold(
        seed in 0u64..1000,
        m in 1usize..4,
        tau in 1usize..4,
    ) {
        let x = rqa_core::signals::gen_gaussian_noise(seed.wrapping_add(77), 60).unwrap();
        let z = zmuv_normalize(&x).unwrap();
        let params = EmbeddingParams::new(m, tau).unwrap();
        let emb_raw = utde_embed(&x, params).unwrap();
        let emb_z = utde_embed(&z, params).unwrap();

        let n = x.len() as f64;
        let mean = x.samples().iter().sum::<f64>() / n;
        let sigma = (x.samples().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();

        // Collect the distances attained by the normalized embedding and
        // pick a boundary-free threshold between two of them.
        let mut dists: Vec<f64> = Vec::new();
        for i in 0..emb_z.n_rows() {
            for j in 0..i {
                dists.push(rqa_core::rqa::state_distance(emb_z.row(i), emb_z.row(j), Norm::Euclidean));
            }
        }
        dists.sort_by(f64::total_cmp);
        dists.dedup();
        prop_assume!(dists.len() > 4);
        let mid = dists.len() / 2;
        let eps = 0.5 * (dists[mid] + dists[mid + 1]);
        prop_assume!((dists[mid + 1] - dists[mid]) > 1e-9);

        let r_norm = recurrence_matrix(&emb_z, eps, Norm::Euclidean).unwrap();
        let r_raw = recurrence_matrix(&emb_raw, eps * sigma, Norm::Euclidean).unwrap();
        for i in 0..r_norm.size() {
            for j in 0..r_norm.size() {
                prop_assert_eq!(r_norm.bit(i, j), r_raw.bit(i, j), "cell ({}, {})", i, j);
            }
        }
    }

    // AMI of a reversed pair ordering is the same function.
    #[test]
    fn ami_zero_when_joint_factorizes(k in 10usize..40) {
        let mut samples = Vec::with_capacity(4 * k + 1);
        for i in 0..4 * k + 1 {
            samples.push(if (i / 2) % 2 == 0 { -1.0 } else { 1.0 });
        }
        let curve = ami_curve(&series(samples), 1, 8).unwrap();
        prop_assert_eq!(curve.values_bits()[1], 0.0);
    }

    // Batch-style determinism: the composed pipeline returns identical
    // metrics when run twice.
    #[test]
    fn rqa_all_is_deterministic(seed in 0u64..200) {
        let x = rqa_core::signals::gen_gaussian_noise(seed, 150).unwrap();
        let params = EmbeddingParams::new(3, 2).unwrap();
        let a = rqa_all(&x, params, 1.2, Norm::Euclidean, 2).unwrap();
        let b = rqa_all(&x, params, 1.2, Norm::Euclidean, 2).unwrap();
        prop_assert_eq!(a, b);
    }
}
