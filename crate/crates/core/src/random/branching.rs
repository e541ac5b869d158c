use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::rng::RngSpec;

/// Thresholds `x` at which the empirical tail `#{W >= x}` is reported.
pub const TAIL_GRID: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Generation sizes `Z_0..=Z_depth` of the percolated (d-1)-ary tree:
/// every vertex has `d-1` children, each edge kept with probability `p`.
pub fn sample_branching_tree(d: usize, p: f64, depth: usize, rng: RngSpec) -> Vec<u64> {
    let mut r = rng.rng();
    let mut z = Vec::with_capacity(depth + 1);
    z.push(1u64);
    for _ in 0..depth {
        let trials = z.last().copied().unwrap_or(0) * (d as u64 - 1);
        let next = if trials == 0 || p <= 0.0 {
            0
        } else if p >= 1.0 {
            trials
        } else {
            Binomial::new(trials, p).expect("valid binomial").sample(&mut r)
        };
        z.push(next);
    }
    z
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailCount {
    pub x: f64,
    pub count: usize,
}

/// Monte-Carlo summary of `W = Z_depth / (p(d-1))^depth`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchingStats {
    pub d: usize,
    pub p: f64,
    pub depth: usize,
    pub trials: usize,
    #[serde(skip)]
    pub normalized_sizes: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub tails: Vec<TailCount>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

impl BranchingStats {
    pub fn standard_error(&self) -> f64 {
        (self.variance / self.trials as f64).sqrt()
    }

    /// Log tail counts fall at least as fast as the line through the first
    /// two grid points, and strictly decrease while positive.
    pub fn tail_decays_at_least_linearly(&self) -> bool {
        let logs: Vec<f64> = self
            .tails
            .iter()
            .map(|t| if t.count == 0 { f64::NEG_INFINITY } else { (t.count as f64).ln() })
            .collect();
        if logs.len() < 2 || !logs[0].is_finite() {
            return false;
        }
        let decreasing = logs.windows(2).all(|w| w[1] < w[0] || w[1] == f64::NEG_INFINITY);
        if !decreasing {
            return false;
        }
        if !logs[1].is_finite() {
            return true;
        }
        let (x0, x1) = (self.tails[0].x, self.tails[1].x);
        let slope = (logs[1] - logs[0]) / (x1 - x0);
        self.tails
            .iter()
            .zip(&logs)
            .skip(2)
            .all(|(t, &l)| l <= logs[0] + slope * (t.x - x0) + 1e-12)
    }
}

pub fn kesten_stigum_stats(d: usize, p: f64, depth: usize, trials: usize, rng: RngSpec) -> BranchingStats {
    let growth = p * (d as f64 - 1.0);
    let scale = growth.powi(depth as i32);
    let normalized_sizes: Vec<f64> = (0..trials)
        .map(|t| {
            let z = sample_branching_tree(d, p, depth, rng.child(t as u64));
            z[depth] as f64 / scale
        })
        .collect();
    let n = trials.max(1) as f64;
    let mean = normalized_sizes.iter().sum::<f64>() / n;
    let variance = if trials > 1 {
        normalized_sizes.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let tails = TAIL_GRID
        .iter()
        .map(|&x| TailCount {
            x,
            count: normalized_sizes.iter().filter(|&&w| w >= x - 1e-12).count(),
        })
        .collect();
    let threshold = 1.0 / ((d as f64) - 1.0).sqrt();
    let warning = (p <= threshold).then(|| {
        format!("p = {p} is not above 1/sqrt(d-1) = {threshold:.6}; outside the supercritical regime")
    });
    BranchingStats {
        d,
        p,
        depth,
        trials,
        normalized_sizes,
        mean,
        variance,
        tails,
        warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_tree_is_deterministic() {
        let z = sample_branching_tree(3, 1.0, 6, RngSpec::from_seed(1));
        assert_eq!(z, vec![1, 2, 4, 8, 16, 32, 64]);
        let stats = kesten_stigum_stats(3, 1.0, 6, 50, RngSpec::from_seed(1));
        assert_eq!(stats.variance, 0.0);
        assert!((stats.mean - 1.0).abs() < 1e-15);
        assert_eq!(stats.tails[0].count, 50);
        assert_eq!(stats.tails[1].count, 0);
    }

    #[test]
    fn empty_percolation_dies() {
        let z = sample_branching_tree(4, 0.0, 3, RngSpec::from_seed(1));
        assert_eq!(z, vec![1, 0, 0, 0]);
    }

    #[test]
    fn subcritical_gets_warning() {
        let s = kesten_stigum_stats(3, 0.5, 4, 10, RngSpec::from_seed(2));
        assert!(s.warning.is_some());
        let s = kesten_stigum_stats(3, 0.9, 4, 10, RngSpec::from_seed(2));
        assert!(s.warning.is_none());
    }

    #[test]
    fn json_schema_fields() {
        let s = kesten_stigum_stats(3, 0.9, 3, 5, RngSpec::from_seed(2));
        let v = serde_json::to_value(&s).unwrap();
        for key in ["d", "p", "depth", "trials", "mean", "variance", "tails"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v["tails"][0].get("x").is_some() && v["tails"][0].get("count").is_some());
    }
}
