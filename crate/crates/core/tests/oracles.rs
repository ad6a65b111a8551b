mod support;

use std::sync::Arc;

use rand::Rng;
use synaudit::attacks::{roc_auc, tpr_at_fpr_zero, ClassifierConfig, LogisticProblem};
use synaudit::generators::{self, mutual_information, GeneratorKind, GeneratorSpec};
use synaudit::harness::pearson;
use synaudit::metrics::{self, DistanceConfig, NumericScaling};
use synaudit::rng::seeded;
use synaudit::tabular::{Dataset, FeatureSpec, Record, Role, Schema, Value};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

fn random_cfg<R: Rng>(rng: &mut R) -> DistanceConfig {
    let scaling = if rng.gen_bool(0.5) {
        NumericScaling::None
    } else {
        NumericScaling::MinMaxOnTarget
    };
    DistanceConfig {
        numeric_scaling: scaling,
        percentile_p: [0.0, 0.05, 0.1, 0.5, 1.0, rng.gen_range(0.0..=1.0)][rng.gen_range(0..6)],
        ..DistanceConfig::default()
    }
}

#[test]
fn distance_metrics_match_brute_force() {
    let mut rng = seeded(101);
    for _ in 0..30 {
        let schema = support::random_schema(&mut rng);
        let cfg = random_cfg(&mut rng);
        let d1 = support::random_dataset(&schema, rng.gen_range(1..80), Role::Synthetic, &mut rng);
        let d2 = support::random_dataset(&schema, rng.gen_range(2..80), Role::Target, &mut rng);
        let dcr = metrics::dcr_vector::<f64>(&d1, &d2, &cfg).unwrap();
        let nndr = metrics::nndr_vector::<f64>(&d1, &d2, &cfg).unwrap();
        for (got, want) in dcr.values.iter().zip(support::dcr(&d1, &d2, &cfg)) {
            assert!(close(*got, want), "dcr {got} vs {want}");
        }
        for (got, want) in nndr.values.iter().zip(support::nndr(&d1, &d2, &cfg)) {
            assert!(close(*got, want), "nndr {got} vs {want}");
        }
        assert_eq!(
            metrics::ims_count(&d1, &d2).unwrap(),
            support::ims(&d1, &d2)
        );
        let p = cfg.percentile_p;
        assert!(close(
            dcr.percentile(p).unwrap(),
            support::percentile(&dcr.values, p)
        ));
    }
}

#[test]
fn f32_distances_track_f64() {
    let mut rng = seeded(7);
    for _ in 0..10 {
        let schema = support::random_schema(&mut rng);
        let cfg = random_cfg(&mut rng);
        let d1 = support::random_dataset(&schema, 40, Role::Synthetic, &mut rng);
        let d2 = support::random_dataset(&schema, 40, Role::Target, &mut rng);
        let single = metrics::dcr_vector::<f32>(&d1, &d2, &cfg).unwrap();
        for (a, b) in single.values.iter().zip(support::dcr(&d1, &d2, &cfg)) {
            assert!((f64::from(*a) - b).abs() <= 1e-4 * (1.0 + b), "{a} vs {b}");
        }
    }
}

#[test]
fn privacy_tests_match_brute_force() {
    let mut rng = seeded(202);
    for _ in 0..30 {
        let schema = support::random_schema(&mut rng);
        let cfg = random_cfg(&mut rng);
        let target = support::random_dataset(&schema, rng.gen_range(2..60), Role::Target, &mut rng);
        let holdout =
            support::random_dataset(&schema, rng.gen_range(1..60), Role::Holdout, &mut rng);
        let syn = support::random_dataset(&schema, rng.gen_range(1..60), Role::Synthetic, &mut rng);
        let got = metrics::privacy_tests::<f64>(&syn, &target, &holdout, &cfg).unwrap();
        let want = support::privacy_tests(&syn, &target, &holdout, &cfg);
        assert_eq!(
            (got.tau_dcr, got.tau_nndr, got.tau_ims, got.tau_combined),
            (want.tau_dcr, want.tau_nndr, want.tau_ims, want.tau_combined)
        );
        assert_eq!(
            (got.ims_synthetic, got.ims_holdout),
            (want.ims_synthetic, want.ims_holdout)
        );
        assert!(close(got.mu_dcr, want.mu_dcr));
        assert!(close(got.dcr_percentile_synthetic, want.dcr_syn));
        assert!(close(got.dcr_percentile_holdout, want.dcr_hold));
        assert!(close(got.nndr_percentile_synthetic, want.nndr_syn));
        assert!(close(got.nndr_percentile_holdout, want.nndr_hold));
    }
}

#[test]
fn margin_sweep_matches_percentile_difference() {
    let mut rng = seeded(303);
    let schema = support::random_schema(&mut rng);
    let cfg = DistanceConfig::default();
    let target = support::random_dataset(&schema, 50, Role::Target, &mut rng);
    let holdout = support::random_dataset(&schema, 30, Role::Holdout, &mut rng);
    let syn = support::random_dataset(&schema, 40, Role::Synthetic, &mut rng);
    let grid = metrics::default_p_grid();
    let sweep = metrics::dcr_margin_sweep::<f64>(&syn, &target, &holdout, &cfg, &grid).unwrap();
    let ds = support::dcr(&syn, &target, &cfg);
    let dh = support::dcr(&holdout, &target, &cfg);
    for (p, m) in sweep {
        let want = support::percentile(&ds, p) - support::percentile(&dh, p);
        assert!(close(m, want));
        let verdict =
            metrics::privacy_tests::<f64>(&syn, &target, &holdout, &cfg.with_p(p)).unwrap();
        assert_eq!(verdict.tau_dcr, m >= 0.0);
    }
}

#[test]
fn roc_metrics_match_pair_count_and_threshold_scan() {
    let mut rng = seeded(404);
    for _ in 0..100 {
        let n = rng.gen_range(2..60);
        let mut scores: Vec<(f64, bool)> = (0..n)
            .map(|_| (f64::from(rng.gen_range(0..12u32)) / 4.0, rng.gen_bool(0.5)))
            .collect();
        scores[0].1 = true;
        scores[1].1 = false;
        assert!(close(roc_auc(&scores).unwrap(), support::auc(&scores)));
        assert!(close(
            tpr_at_fpr_zero(&scores).unwrap(),
            support::tpr_at_fpr_zero(&scores)
        ));
    }
}

#[test]
fn pearson_matches_exact_rational_formula() {
    let mut rng = seeded(505);
    for _ in 0..200 {
        let n = rng.gen_range(2..50);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e3..1e3)).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 0.3 * x + rng.gen_range(-500.0..500.0))
            .collect();
        let got = pearson(&xs, &ys).unwrap().unwrap();
        let want = support::pearson_exact(&xs, &ys).unwrap();
        assert!(close(got, want), "{got} vs {want}");
        assert!((-1.0..=1.0).contains(&got));
    }
    assert_eq!(pearson(&[1.0, 2.0, 3.0], &[5.0; 3]).unwrap(), None);
    assert_eq!(support::pearson_exact(&[1.0, 2.0, 3.0], &[5.0; 3]), None);
}

fn binary_pair(counts: [[usize; 3]; 3]) -> Dataset {
    let schema = Arc::new(
        Schema::new(vec![
            FeatureSpec::categorical("a", ["0", "1", "2"]),
            FeatureSpec::categorical("b", ["0", "1", "2"]),
        ])
        .unwrap(),
    );
    let mut rows = Vec::new();
    for (a, row) in counts.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            rows.extend(
                (0..c).map(|_| Record::new(vec![Value::Cat(a as u32), Value::Cat(b as u32)])),
            );
        }
    }
    Dataset::new(schema, rows, Role::Unlabeled).unwrap()
}

#[test]
fn mutual_information_matches_joint_table_oracle() {
    let d = binary_pair([[30, 5, 1], [4, 20, 9], [2, 2, 27]]);
    let want =
        support::mutual_information(&support::cat_column(&d, 0), &support::cat_column(&d, 1));
    assert!(close(mutual_information(&d, 0, 1, 10).unwrap(), want));
    let independent = binary_pair([[4, 8, 12], [2, 4, 6], [6, 12, 18]]);
    assert!(mutual_information(&independent, 0, 1, 10).unwrap().abs() < 1e-12);
}

#[test]
fn generators_on_correlated_pair() {
    let train = synaudit::fixtures::correlated_binary(500, 55);
    let mi_train = support::mutual_information(
        &support::cat_column(&train, 0),
        &support::cat_column(&train, 1),
    );
    let mi_of = |kind: GeneratorKind| {
        let g = generators::fit(&GeneratorSpec::new(kind, 3), &train).unwrap();
        let syn = g.sample(20_000, 1);
        support::mutual_information(&support::cat_column(&syn, 0), &support::cat_column(&syn, 1))
    };
    assert!(mi_of(GeneratorKind::indhist()) <= 0.01);
    assert!(mi_of(GeneratorKind::baynet()) >= 0.5 * mi_train);
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    let mut rng = seeded(606);
    let rows: Vec<Vec<f64>> = (0..40)
        .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let labels: Vec<bool> = rows
        .iter()
        .map(|r| r[0] + 0.5 * r[1] + rng.gen_range(-1.0..1.0) > 0.0)
        .collect();
    let problem = LogisticProblem::new(rows, &labels, ClassifierConfig::default().l2_penalty);
    let theta: Vec<f64> = (0..problem.dim())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    let grad = problem.gradient(&theta);
    let h = 1e-6;
    for j in 0..theta.len() {
        let mut up = theta.clone();
        let mut down = theta.clone();
        up[j] += h;
        down[j] -= h;
        let numeric = (problem.objective(&up) - problem.objective(&down)) / (2.0 * h);
        assert!(
            (numeric - grad[j]).abs() <= 1e-5,
            "coordinate {j}: {numeric} vs {}",
            grad[j]
        );
    }
}
