use curie_core::curie::{CurieConfig, CurieDetector};
use curie_core::detectors::{
    Adwin, AdwinConfig, Ddm, DdmConfig, DriftDetector, Eddm, EddmConfig, PageHinkley, PageHinkleyConfig,
};
use curie_core::eval::{mcc, rank_with_ties, score_detections, Direction};
use curie_core::grid::{Coords, Grid, GridConfig};
use curie_core::learners::{GaussianNb, Knn, Learner};
use curie_core::stream::DriftKind;
use curie_core::{Instance, Label};
use proptest::prelude::*;

fn detectors() -> Vec<Box<dyn DriftDetector>> {
    vec![
        Box::new(Ddm::new(DdmConfig::default()).unwrap()),
        Box::new(Eddm::new(EddmConfig::default()).unwrap()),
        Box::new(Adwin::new(AdwinConfig::default()).unwrap()),
        Box::new(PageHinkley::new(PageHinkleyConfig::default()).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reset_matches_fresh_detector(warm in prop::collection::vec(any::<bool>(), 0..600),
                                    after in prop::collection::vec(any::<bool>(), 1..600)) {
        for (mut used, mut fresh) in detectors().into_iter().zip(detectors()) {
            for &b in &warm {
                used.add_element(f64::from(u8::from(b))).unwrap();
            }
            used.reset();
            prop_assert!(!used.detected_change());
            for &b in &after {
                let v = f64::from(u8::from(b));
                prop_assert_eq!(used.add_element(v).unwrap(), fresh.add_element(v).unwrap());
                prop_assert_eq!(used.detected_change(), fresh.detected_change());
            }
        }
    }

    #[test]
    fn detected_change_is_edge_triggered(bits in prop::collection::vec(prop::bool::weighted(0.3), 1..2000)) {
        for mut d in detectors() {
            for &b in &bits {
                let verdict = d.add_element(f64::from(u8::from(b))).unwrap();
                prop_assert_eq!(d.detected_change(), verdict.is_drift());
                prop_assert!(!d.detected_change());
                if verdict.is_drift() {
                    d.reset();
                }
            }
        }
    }

    #[test]
    fn adwin_mean_matches_retained_elements(values in prop::collection::vec(0.0f64..=1.0, 1..4000)) {
        let mut a = Adwin::new(AdwinConfig::default()).unwrap();
        let mut kept: Vec<f64> = Vec::new();
        for &v in &values {
            a.add_element(v).unwrap();
            kept.push(v);
            let width = a.width() as usize;
            kept.drain(..kept.len() - width);
            if a.detected_change() {
                // the window shrank; `kept` was already trimmed to the new width
            }
        }
        let mean = kept.iter().sum::<f64>() / kept.len() as f64;
        prop_assert!((a.mean() - mean).abs() <= 1e-9 * mean.abs().max(1.0), "{} vs {}", a.mean(), mean);
        prop_assert!(a.level_sizes().iter().all(|&n| n <= AdwinConfig::default().max_buckets + 1));
    }

    #[test]
    fn page_hinkley_statistic_non_negative(values in prop::collection::vec(-5.0f64..5.0, 1..1000)) {
        let mut ph = PageHinkley::new(PageHinkleyConfig::default()).unwrap();
        for &v in &values {
            ph.add_element(v).unwrap();
            prop_assert!(ph.statistic() >= 0.0);
            if ph.detected_change() {
                ph.reset();
            }
        }
    }

    #[test]
    fn scoring_conservation(mut dets in prop::collection::btree_set(50u64..40_000, 0..40), gradual in any::<bool>()) {
        let drifts = [10_000, 20_000, 30_000];
        let kind = if gradual { DriftKind::Gradual } else { DriftKind::Abrupt };
        let dets: Vec<u64> = std::mem::take(&mut dets).into_iter().collect();
        let s = score_detections(&dets, &drifts, kind, 10_000, 39_950);
        prop_assert_eq!(s.tp + s.fn_, 3);
        prop_assert_eq!(s.tp + s.fp, dets.len() as u64);
        prop_assert_eq!(s.tp + s.fp + s.fn_ + s.tn, 39_950);
        prop_assert!((-1.0..=1.0).contains(&s.mcc));
        if s.tp + s.fp > 0 {
            prop_assert_eq!(s.precision, s.tp as f64 / (s.tp + s.fp) as f64);
        }
        prop_assert_eq!(s.recall, s.tp as f64 / 3.0);
        if s.tp > 0 {
            let w = if gradual { 1000.0 } else { 200.0 };
            prop_assert!(s.mu_d >= 0.0 && s.mu_d < w);
        } else {
            prop_assert_eq!(s.mu_d, 1000.0);
        }
    }

    #[test]
    fn mcc_bounds(tp in 0u64..1000, fp in 0u64..1000, fn_ in 0u64..1000, tn in 0u64..100_000) {
        let m = mcc(tp, fp, fn_, tn);
        prop_assert!((-1.0..=1.0).contains(&m));
        if tp == 0 && fp == 0 || tp == 0 && fn_ == 0 || tn == 0 && fp == 0 || tn == 0 && fn_ == 0 {
            prop_assert_eq!(m, 0.0);
        }
        if fp == 0 && fn_ == 0 && tp > 0 && tn > 0 {
            prop_assert_eq!(m, 1.0);
        }
    }

    #[test]
    fn ranks_sum_to_triangular(values in prop::collection::vec(0u8..5, 2..12), higher in any::<bool>()) {
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        let dir = if higher { Direction::HigherIsBetter } else { Direction::LowerIsBetter };
        let ranks = rank_with_ties(&values, dir);
        let k = values.len() as f64;
        prop_assert!((ranks.iter().sum::<f64>() - k * (k + 1.0) / 2.0).abs() < 1e-9);
        for i in 0..values.len() {
            for j in 0..values.len() {
                let better = if higher { values[i] > values[j] } else { values[i] < values[j] };
                if better {
                    prop_assert!(ranks[i] < ranks[j]);
                }
                if values[i] == values[j] {
                    prop_assert_eq!(ranks[i], ranks[j]);
                }
            }
        }
    }

    #[test]
    fn located_cells_are_in_bounds(dims in 1usize..4, bins in 2usize..12,
                                   points in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 3), 1..40)) {
        let mut g = Grid::new(GridConfig::new(dims, bins, 1, vec![0, 1]).unwrap()).unwrap();
        for p in &points {
            g.expand_limits(&p[..dims]).unwrap();
        }
        for p in &points {
            let c = g.locate_cell(&p[..dims]).unwrap();
            prop_assert!(c.0.iter().all(|&b| b < bins));
        }
        // points outside the limits clamp to edge cells; a flat axis stays at bin 0
        let far: Vec<f64> = vec![1e9; dims];
        let edge: Vec<usize> = (0..dims)
            .map(|i| if points.iter().all(|p| p[i] == points[0][i]) { 0 } else { bins - 1 })
            .collect();
        prop_assert_eq!(g.locate_cell(&far).unwrap(), Coords(edge));
    }

    #[test]
    fn curie_mutation_logs_stay_ordered(seed in any::<u64>(), steps in 50usize..600) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut d = CurieDetector::new(CurieConfig::with_defaults(2, 8).unwrap()).unwrap();
        let prep: Vec<Instance> = (0..50).map(|t| Instance::new(t, vec![rng.random(), rng.random()], rng.random_range(0..2))).collect();
        d.prepare(&prep).unwrap();
        for _ in 0..steps {
            let x = vec![rng.random::<f64>(), rng.random::<f64>()];
            let y: Label = rng.random_range(0..2);
            let before = d.clock();
            let verdict = d.update(&x, y).unwrap();
            prop_assert_eq!(d.clock(), before + 1);
            prop_assert!(d.window().len() <= 50);
            prop_assert_eq!(d.predict(&x).unwrap(), if verdict.is_drift() { d.predict(&x).unwrap() } else { y });
            for (_, cell) in d.grid().iter() {
                prop_assert!(cell.mutation_times.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(cell.state.is_some());
            }
            if verdict.is_drift() {
                prop_assert!(d.grid().iter().all(|(_, c)| c.mutation_times.is_empty()));
            }
        }
    }

    #[test]
    fn naive_bayes_matches_batch_moments(xs in prop::collection::vec((-50.0f64..50.0, 0u32..2), 2..200)) {
        let mut nb = GaussianNb::new();
        for (x, y) in &xs {
            nb.partial_fit(&[*x], *y).unwrap();
        }
        for label in [0, 1] {
            let vals: Vec<f64> = xs.iter().filter(|p| p.1 == label).map(|p| p.0).collect();
            if vals.is_empty() {
                continue;
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
            prop_assert!((nb.mean(label).unwrap()[0] - mean).abs() < 1e-9);
            prop_assert!((nb.variance(label).unwrap()[0] - var).abs() < 1e-6);
            prop_assert_eq!(nb.class_count(label), vals.len() as u64);
        }
    }

    #[test]
    fn knn_window_is_bounded(n in 1usize..300, w in 1usize..60) {
        let mut knn = Knn::new(5, w).unwrap();
        for i in 0..n {
            knn.partial_fit(&[i as f64], (i % 2) as Label).unwrap();
        }
        prop_assert_eq!(knn.window().len(), n.min(w));
        let first = knn.window().next().unwrap().0[0];
        prop_assert_eq!(first, n.saturating_sub(w) as f64);
    }
}
