//! Fast paths against the brute-force reference, plus worked examples.

use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::seed;

fn cfg() -> ComplexityConfig {
    ComplexityConfig::with_seed(7)
}

fn check_against_oracle(x: &[f64], d: usize, y: &[u8], config: &ComplexityConfig) {
    let got = compute_all(x, d, y, config);
    let reference = reference::compute_all(x, d, y, config);
    for m in MetricId::ALL {
        match (got.get(m), reference.get(m)) {
            (None, None) => {}
            (Some(g), Some(w)) => assert!((g - w).abs() <= 1e-9, "{m}: got {g}, oracle {w} (x={x:?}, d={d}, y={y:?})"),
            (g, w) => panic!("{m}: got {g:?}, oracle {w:?} (x={x:?}, d={d}, y={y:?})"),
        }
        // single-metric entry point agrees with the shared-work path
        assert_eq!(compute_metric(m, x, d, y, config), got.get(m), "{m}");
    }
}

#[test]
fn matches_brute_force_on_random_small_sets() {
    let mut rng = seed::rng(2024);
    for case in 0..300 {
        let n = rng.random_range(2..=12);
        let d = rng.random_range(1..=3);
        let x: Vec<f64> = (0..n * d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<u8> = match case % 10 {
            0 => vec![1; n],
            _ => (0..n).map(|_| rng.random_range(0..2)).collect(),
        };
        check_against_oracle(&x, d, &y, &ComplexityConfig::with_seed(case));
    }
}

#[test]
fn separated_blocks() {
    let x: Vec<f64> = (0..20).map(|i| if i < 10 { -10.0 } else { 10.0 }).collect();
    let y: Vec<u8> = (0..20).map(|i| u8::from(i >= 10)).collect();
    let v = compute_all(&x, 1, &y, &cfg());
    assert_eq!(v.get(MetricId::N1), Some(0.1));
    assert_eq!(v.get(MetricId::N3), Some(0.0));
    assert_eq!(v.get(MetricId::C1), Some(0.0));
    assert_eq!(v.get(MetricId::C2), Some(0.0));
    assert_eq!(v.get(MetricId::L2), Some(0.0));
}

#[test]
fn interleaved_points_are_all_misclassified() {
    let x = [0.0, 2.0, 4.0, 1.0, 3.0, 5.0];
    let y = [0, 0, 0, 1, 1, 1];
    assert_eq!(compute_metric(MetricId::N3, &x, 1, &y, &cfg()), Some(1.0));
}

#[test]
fn single_class_view() {
    let x = [0.0, 1.0, 2.0, 3.0];
    let y = [1, 1, 1, 1];
    let v = compute_all(&x, 1, &y, &cfg());
    assert_eq!(v.get(MetricId::C2), Some(1.0));
    assert_eq!(v.get(MetricId::C1), Some(1.0));
    assert_eq!(v.get(MetricId::N1), None);
    assert_eq!(v.get(MetricId::T1), None);
    assert!(v.get(MetricId::Density).is_some());
}

#[test]
fn fewer_than_two_points_is_undefined() {
    let v = compute_all(&[1.0], 1, &[0], &cfg());
    assert!(v.iter().all(|(_, x)| x.is_none()));
}

fn dataset(rows: &[(f64, u8, u8)]) -> TabularDataset {
    TabularDataset::new(
        rows.iter().map(|r| r.0).collect(),
        vec!["x".into()],
        rows.iter().map(|r| r.1).collect(),
        rows.iter().map(|r| r.2).collect(),
    )
    .unwrap()
}

#[test]
fn imbalance_gap_between_groups() {
    // privileged 10/10, unprivileged 36/4
    let mut rows = Vec::new();
    for i in 0..20 {
        rows.push((i as f64, u8::from(i % 2 == 0), 1));
    }
    for i in 0..40 {
        rows.push((i as f64 * 0.5, u8::from(i < 4), 0));
    }
    let profile = compute_profile(&dataset(&rows), &cfg());
    let ir = 0.5 * (36.0 / 4.0 + 4.0 / 36.0);
    let want = 1.0 - 1.0 / ir;
    assert!((profile.cmd(MetricId::C2).unwrap() - want).abs() < 1e-12);
    assert!((want - 0.780_487_8).abs() < 1e-7);
}

#[test]
fn identical_groups_have_zero_cmd() {
    let mut rng = seed::rng(5);
    let base: Vec<(f64, u8)> = (0..30).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(0..2))).collect();
    let rows: Vec<(f64, u8, u8)> = base
        .iter()
        .map(|&(x, y)| (x, y, 1))
        .chain(base.iter().map(|&(x, y)| (x, y, 0)))
        .collect();
    let profile = compute_profile(&dataset(&rows), &cfg());
    for m in MetricId::ALL {
        assert_eq!(profile.cmd(m), Some(0.0), "{m}");
    }
}

#[test]
fn empty_group_makes_profile_degenerate() {
    let rows: Vec<(f64, u8, u8)> = (0..10).map(|i| (i as f64, (i % 2) as u8, 1)).collect();
    let profile = compute_profile(&dataset(&rows), &cfg());
    assert!(profile.is_degenerate());
    assert_eq!(profile.undefined().len(), 14);
}

#[test]
fn imbalance_is_monotone() {
    let n = 40;
    let mut last = -1.0;
    for minority in (1..=20).rev() {
        let y: Vec<u8> = (0..n).map(|i| u8::from(i < minority)).collect();
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let c2 = compute_metric(MetricId::C2, &x, 1, &y, &cfg()).unwrap();
        if minority < 20 {
            assert!(c2 > last, "minority {minority}: {c2} <= {last}");
        }
        last = c2;
    }
}

#[test]
fn profile_serializes_with_short_names() {
    let rows: Vec<(f64, u8, u8)> = (0..12).map(|i| (i as f64, (i % 2) as u8, (i % 3 == 0) as u8)).collect();
    let profile = compute_profile(&dataset(&rows), &cfg());
    let json = serde_json::to_value(&profile).unwrap();
    assert!(json["LSC"]["priv"].is_number() || json["LSC"]["priv"].is_null());
    assert!(json["cls_coef"].get("cmd").is_some());
    let back: ComplexityProfile = serde_json::from_value(json).unwrap();
    assert_eq!(back, profile);
}

fn small_set() -> impl Strategy<Value = (Vec<f64>, usize, Vec<u8>)> {
    (2usize..=14, 1usize..=3).prop_flat_map(|(n, d)| {
        (
            proptest::collection::vec(-3.0f64..3.0, n * d),
            Just(d),
            proptest::collection::vec(0u8..2, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_stay_in_range((x, d, y) in small_set()) {
        for (m, v) in compute_all(&x, d, &y, &cfg()).iter() {
            if let Some(v) = v {
                let (lo, hi) = m.range();
                prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12, "{} = {}", m, v);
            }
        }
    }

    #[test]
    fn row_order_is_irrelevant((x, d, y) in small_set(), shuffle_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..y.len()).collect();
        perm.shuffle(&mut seed::rng(shuffle_seed));
        let px: Vec<f64> = perm.iter().flat_map(|&i| x[i * d..(i + 1) * d].to_vec()).collect();
        let py: Vec<u8> = perm.iter().map(|&i| y[i]).collect();
        prop_assert_eq!(compute_all(&x, d, &y, &cfg()), compute_all(&px, d, &py, &cfg()));
    }

    #[test]
    fn swapping_groups_keeps_cmd(rows in proptest::collection::vec((-3.0f64..3.0, 0u8..2, 0u8..2), 4..30)) {
        let ds = dataset(&rows);
        let a = compute_profile(&ds, &cfg());
        let b = compute_profile(&ds.swap_groups(), &cfg());
        for m in MetricId::ALL {
            prop_assert_eq!(a.cmd(m), b.cmd(m));
            prop_assert_eq!(a.entry(m).privileged, b.entry(m).unprivileged);
        }
    }
}
