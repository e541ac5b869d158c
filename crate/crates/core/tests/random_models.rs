use std::collections::HashMap;

use forge_core::nonbacktracking::count_k_cycles;
use forge_core::random::{
    apply_local_resampling, build_resampling_data, kesten_stigum_stats, percolate, reverse_resampling_data,
    sample_configuration_model, sample_simple_configuration_model,
};
use forge_core::{MultiGraph, RngSpec};
use proptest::prelude::*;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Every perfect matching of `0..k`, as sorted pair lists.
fn matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let rest: Vec<usize> = items[1..].iter().enumerate().filter(|&(j, _)| j + 1 != i).map(|(_, &x)| x).collect();
        for mut m in matchings(&rest) {
            m.push((first, items[i]));
            out.push(m);
        }
    }
    out
}

fn key(g: &MultiGraph) -> Vec<(usize, usize)> {
    g.sorted_edges()
}

fn chi_square_pvalue(stat: f64, df: usize) -> f64 {
    1.0 - ChiSquared::new(df as f64).unwrap().cdf(stat)
}

#[test]
fn configuration_model_matches_pairing_law() {
    let (n, d) = (4usize, 3usize);
    let half: Vec<usize> = (0..n * d).collect();
    let mut expected: HashMap<Vec<(usize, usize)>, f64> = HashMap::new();
    let all = matchings(&half);
    for m in &all {
        let edges: Vec<(usize, usize)> = m.iter().map(|&(a, b)| (a / d, b / d)).collect();
        *expected.entry(key(&MultiGraph::from_edge_list(n, &edges).unwrap())).or_default() += 1.0;
    }
    let draws = 30_000;
    let mut seen: HashMap<Vec<(usize, usize)>, f64> = HashMap::new();
    let root = RngSpec::from_seed(77);
    for t in 0..draws {
        let g = sample_configuration_model(n, d, root.child(t)).unwrap();
        *seen.entry(key(&g)).or_default() += 1.0;
    }
    assert!(seen.keys().all(|k| expected.contains_key(k)));
    let total = all.len() as f64;
    let stat: f64 = expected
        .iter()
        .map(|(k, &c)| {
            let e = c / total * draws as f64;
            let o = seen.get(k).copied().unwrap_or(0.0);
            (o - e).powi(2) / e
        })
        .sum();
    let p = chi_square_pvalue(stat, expected.len() - 1);
    assert!(p > 1e-3, "chi-square {stat} over {} classes, p = {p}", expected.len());
}

#[test]
fn percolation_indicators_are_independent() {
    let (h, _) = sample_simple_configuration_model(30, 3, RngSpec::from_seed(1), 1000).unwrap();
    let p = 0.7;
    let m = h.edge_count();
    let draws = 20_000;
    let mut kept = vec![0.0f64; m];
    let mut both = 0.0;
    let mut total_sq = 0.0;
    let mut total = 0.0;
    for t in 0..draws {
        let g = percolate(&h, p, RngSpec::new(9, t)).unwrap();
        let set: std::collections::HashSet<(usize, usize)> = g.edges().iter().copied().collect();
        let ind: Vec<bool> = h.edges().iter().map(|e| set.contains(e)).collect();
        for (k, &x) in ind.iter().enumerate() {
            kept[k] += x as u8 as f64;
        }
        both += (ind[0] && ind[1]) as u8 as f64;
        let c = g.edge_count() as f64;
        total += c;
        total_sq += c * c;
    }
    let n = draws as f64;
    let sd = (p * (1.0 - p) / n).sqrt();
    for &k in &kept {
        assert!((k / n - p).abs() < 5.0 * sd);
    }
    let cov = both / n - (kept[0] / n) * (kept[1] / n);
    assert!(cov.abs() < 5.0 * p * (1.0 - p) / n.sqrt(), "covariance {cov}");
    let mean = total / n;
    let var = total_sq / n - mean * mean;
    assert!((mean - m as f64 * p).abs() < 5.0 * (m as f64 * p * (1.0 - p) / n).sqrt());
    assert!((var / (m as f64 * p * (1.0 - p)) - 1.0).abs() < 0.05);
}

fn statistic(g: &MultiGraph) -> usize {
    let defects = (g.loop_count() + g.parallel_excess()).min(3);
    let triangles = (count_k_cycles(g, 3).unwrap().geometric_count as usize).min(3);
    defects * 4 + triangles
}

fn bowker_pvalue(table: &HashMap<(usize, usize), f64>) -> f64 {
    let mut stat = 0.0;
    let mut df = 0;
    for (&(a, b), &nab) in table {
        let nba = table.get(&(b, a)).copied().unwrap_or(0.0);
        if a < b || (a > b && nba == 0.0) {
            stat += (nab - nba).powi(2) / (nab + nba);
            df += 1;
        }
    }
    chi_square_pvalue(stat, df.max(1))
}

/// Tabulates (S(G), S(G')) over draws. `biased` keeps the move only when
/// it does not lower the statistic, which breaks exchangeability.
fn switching_table(draws: u64, biased: bool) -> (HashMap<(usize, usize), f64>, usize) {
    let mut table: HashMap<(usize, usize), f64> = HashMap::new();
    let mut switched = 0;
    let root = RngSpec::from_seed(2024);
    for t in 0..draws {
        let spec = root.child(t);
        let g = sample_configuration_model(10, 3, spec).unwrap();
        let o = spec.child(1).rng().random_range(0..10);
        let data = build_resampling_data(&g, None, o, 0, 0, spec.child(2)).unwrap();
        let h = apply_local_resampling(&g, None, &data).unwrap();
        if !data.admissible.is_empty() {
            switched += 1;
        }
        let (sg, mut sh) = (statistic(&g), statistic(&h));
        if biased && sh < sg {
            sh = sg;
        }
        *table.entry((sg, sh)).or_default() += 1.0;
    }
    (table, switched)
}

#[test]
fn switching_gives_an_exchangeable_pair() {
    let (table, switched) = switching_table(100_000, false);
    assert!(switched > 5000, "only {switched} switched draws");
    let p = bowker_pvalue(&table);
    assert!(p > 1e-3, "Bowker p = {p}");
}

#[test]
fn biased_switching_is_detected() {
    let (table, _) = switching_table(100_000, true);
    assert!(bowker_pvalue(&table) < 1e-6);
}

#[test]
fn branching_mean_is_one() {
    let s = kesten_stigum_stats(3, 0.8850781, 12, 10_000, RngSpec::from_seed(5));
    assert!((s.mean - 1.0).abs() <= 3.0 * s.standard_error());
    assert!(s.tail_decays_at_least_linearly());
    assert!(s.warning.is_none());
    let sub = kesten_stigum_stats(3, 0.6, 4, 100, RngSpec::from_seed(5));
    assert!(sub.warning.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn configuration_model_is_regular(half in 1usize..60, d in 1usize..6, seed in any::<u64>()) {
        let n = if d % 2 == 1 { 2 * half } else { half };
        let g = sample_configuration_model(n, d, RngSpec::from_seed(seed)).unwrap();
        prop_assert!(g.is_regular(d));
        prop_assert_eq!(g.edge_count(), n * d / 2);
    }

    #[test]
    fn percolation_extremes(seed in any::<u64>(), n in 2usize..40) {
        let h = sample_configuration_model(2 * n, 3, RngSpec::from_seed(seed)).unwrap();
        let all = percolate(&h, 1.0, RngSpec::new(seed, 1)).unwrap();
        prop_assert_eq!(all.edges(), h.edges());
        prop_assert_eq!(percolate(&h, 0.0, RngSpec::new(seed, 1)).unwrap().edge_count(), 0);
        let some = percolate(&h, 0.5, RngSpec::new(seed, 1)).unwrap();
        prop_assert!((0..2 * n).all(|v| some.degree(v) <= h.degree(v)));
    }

    #[test]
    fn forward_then_reverse_is_identity(seed in any::<u64>(), o in 0usize..200) {
        let g = sample_configuration_model(200, 3, RngSpec::from_seed(seed)).unwrap();
        let data = build_resampling_data(&g, None, o, 2, 1, RngSpec::new(seed, 3)).unwrap();
        let h = apply_local_resampling(&g, None, &data).unwrap();
        prop_assert!(h.is_regular(3));
        let rev = reverse_resampling_data(&h, None, &data).unwrap();
        let back = apply_local_resampling(&h, None, &rev).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }
}
