use serde::{Deserialize, Serialize};

use super::gadget::{construct_gadget, gadget_core, verify_gadget_lambda1, verify_gadget_lambda2, GadgetSpec, Lambda2Method};
use super::patch::{pad_length, path_gadget, r_patch, spread_with_fallback};
use crate::error::{ForgeError, Result};
use crate::graph::{girth_at_least, MultiGraph};
use crate::random::sample_simple_configuration_model;
use crate::rng::RngSpec;
use crate::spectral::{extreme_nontrivial, lanczos_largest, LanczosOptions};
use crate::tree::{target_from_mu, tree_extend, RadialQuotient, SpectralTarget};

/// Targets this close to `2 sqrt(d-1)` or `d` without being equal are rejected.
pub const ENDPOINT_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthOptions {
    pub d: usize,
    /// `mu_2 >= ... >= mu_k`; `mu_1 = d` is implicit.
    pub targets: Vec<f64>,
    pub base_size: usize,
    pub depth: usize,
    pub girth: usize,
    /// Parent size of each gadget; chosen from the leaf budget when absent.
    pub gadget_size: Option<usize>,
    pub seed: u64,
    /// Accepted `|lambda1_hat - mu|` for a gadget.
    pub gadget_tol: f64,
    pub max_gadget_attempts: usize,
    pub max_girth_retries: usize,
    pub solver_tol: f64,
}

impl SynthOptions {
    pub fn new(d: usize, targets: Vec<f64>, base_size: usize, seed: u64) -> Self {
        Self {
            d,
            targets,
            base_size,
            depth: 10,
            girth: 4,
            gadget_size: None,
            seed,
            gadget_tol: 0.02,
            max_gadget_attempts: 400,
            max_girth_retries: 1000,
            solver_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetReport {
    pub mu: f64,
    pub seed: u64,
    pub stream: u64,
    pub attempt: usize,
    pub n: usize,
    pub core_size: usize,
    pub deficiency: usize,
    pub p: f64,
    pub theta_hat: f64,
    pub lambda1_hat: f64,
    #[serde(rename = "lambda1_TL")]
    pub lambda1_tl: f64,
    #[serde(rename = "lambda2_TL")]
    pub lambda2_tl: f64,
    pub girth: Option<usize>,
    pub accepted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseReport {
    pub n: usize,
    pub seed: u64,
    pub stream: u64,
    pub lambda2: f64,
    pub lambda_min: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct PatchReport {
    pub M: usize,
    pub min_dist_achieved: Option<usize>,
    pub threshold: usize,
    pub requested_threshold: usize,
    pub pad_path: usize,
    /// `max(sqrt(d-1)/R, 2 d^3 sum|V(T^L F_i)| / |V(F_0)|)`.
    pub lemma_slack: f64,
    pub size_ratio: f64,
    pub girth_hypotheses_met: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinalReport {
    pub n: usize,
    pub components: usize,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub regular: bool,
    pub simple: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Deviation {
    pub index: usize,
    pub target: f64,
    pub measured: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthReport {
    pub d: usize,
    pub seed: u64,
    pub depth: usize,
    pub targets: Vec<f64>,
    pub gadgets: Vec<GadgetReport>,
    pub base: BaseReport,
    pub patch: PatchReport,
    #[serde(rename = "final")]
    pub final_: FinalReport,
    pub deviations: Vec<Deviation>,
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub graph: MultiGraph,
    pub report: SynthReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TargetKind {
    Degree,
    Edge,
    Interior(SpectralTarget),
}

fn classify(d: usize, mu: f64) -> Result<TargetKind> {
    let edge = 2.0 * (d as f64 - 1.0).sqrt();
    if mu == d as f64 {
        return Ok(TargetKind::Degree);
    }
    if mu == edge {
        return Ok(TargetKind::Edge);
    }
    if (mu - d as f64).abs() < ENDPOINT_GAP || (mu - edge).abs() < ENDPOINT_GAP {
        return Err(ForgeError::Parameter(format!("target {mu} is within {ENDPOINT_GAP} of an endpoint")));
    }
    target_from_mu(d, mu).map(TargetKind::Interior)
}

/// Parent size whose expected deficiency uses an equal share of a leaf
/// budget of `base_size * d / 10`.
pub fn default_gadget_size(d: usize, p: f64, base_size: usize, depth: usize, gadgets: usize) -> usize {
    let leaves = base_size as f64 * d as f64 / 10.0 / gadgets.max(1) as f64;
    let deficiency = leaves / (d as f64 - 1.0).powi(depth as i32);
    let raw = (deficiency / (d as f64 * (1.0 - p)).max(1e-9)).clamp(20.0, 1e6) as usize;
    if (raw * d) % 2 == 1 {
        raw + 1
    } else {
        raw
    }
}

struct BuiltGadget {
    core: MultiGraph,
    report: GadgetReport,
}

fn build_gadget(opts: &SynthOptions, t: SpectralTarget, n: usize, lambda2_cap: f64, rng: RngSpec) -> Result<BuiltGadget> {
    let spec = GadgetSpec { target: t, n, girth: opts.girth, depth: opts.depth, max_girth_retries: opts.max_girth_retries };
    let mut best: Option<(f64, BuiltGadget)> = None;
    for attempt in 0..opts.max_gadget_attempts {
        let (g0, prov) = construct_gadget(&spec, rng.child(attempt as u64))?;
        let (core, _) = gadget_core(&g0);
        if core.vertex_count() == 0 {
            continue;
        }
        let c = verify_gadget_lambda1(&core, opts.d, Some(&t), 1e-12)?;
        let Some(l1) = c.lambda1_hat else { continue };
        let miss = (l1 - t.mu).abs();
        if best.as_ref().is_some_and(|(m, _)| *m <= miss) && miss > opts.gadget_tol {
            continue;
        }
        let l2 = verify_gadget_lambda2(&core, opts.d, opts.depth, opts.solver_tol, Lambda2Method::Quotient)?;
        if l2 > lambda2_cap {
            continue;
        }
        let rq = RadialQuotient::new(&core, opts.d, opts.depth)?;
        let l1_tl = lanczos_largest(&rq, &LanczosOptions::new(1).tol(opts.solver_tol).seed(opts.seed), &[])?.values[0];
        let report = GadgetReport {
            mu: t.mu,
            seed: prov.rng.seed,
            stream: prov.rng.stream,
            attempt,
            n,
            core_size: core.vertex_count(),
            deficiency: core.degrees().iter().map(|&k| opts.d - k).sum(),
            p: t.p,
            theta_hat: c.theta_hat,
            lambda1_hat: l1,
            lambda1_tl: l1_tl,
            lambda2_tl: l2,
            girth: prov.girth,
            accepted: miss <= opts.gadget_tol,
        };
        let done = report.accepted;
        best = Some((miss, BuiltGadget { core, report }));
        if done {
            break;
        }
    }
    best.map(|b| b.1).ok_or_else(|| {
        ForgeError::Construction(format!("no supercritical gadget for mu = {} in {} attempts", t.mu, opts.max_gadget_attempts))
    })
}

/// Builds a d-regular graph whose top eigenvalues approximate `d, targets...`.
pub fn synthesize(opts: &SynthOptions) -> Result<Synthesis> {
    let d = opts.d;
    if d < 3 {
        return Err(ForgeError::Parameter("d must be at least 3".into()));
    }
    if opts.targets.is_empty() {
        return Err(ForgeError::Parameter("empty target list".into()));
    }
    let mut targets = opts.targets.clone();
    targets.sort_by(|a, b| b.total_cmp(a));
    let kinds = targets.iter().map(|&mu| classify(d, mu)).collect::<Result<Vec<_>>>()?;
    let interior: Vec<SpectralTarget> = kinds
        .iter()
        .filter_map(|k| if let TargetKind::Interior(t) = k { Some(*t) } else { None })
        .collect();
    let extra_components = kinds.iter().filter(|k| **k == TargetKind::Degree).count();
    let root = RngSpec::from_seed(opts.seed);
    let edge = 2.0 * (d as f64 - 1.0).sqrt();
    let lambda2_cap = interior.iter().map(|t| t.mu).fold(f64::INFINITY, f64::min) - 0.03;
    let lambda2_cap = lambda2_cap.max(edge + 0.01);

    let mut gadgets = Vec::with_capacity(interior.len());
    for (i, t) in interior.iter().enumerate() {
        let n = opts
            .gadget_size
            .unwrap_or_else(|| default_gadget_size(d, t.p, opts.base_size, opts.depth, interior.len()));
        let g = build_gadget(opts, *t, n, lambda2_cap, root.child(100 + i as u64))
            .map_err(|e| e.at_stage(format!("gadget {i} (mu = {})", t.mu)))?;
        gadgets.push(g);
    }

    let base_rng = root.child(1);
    let (f0, _) = sample_simple_configuration_model(opts.base_size, d, base_rng, 10_000).map_err(|e| e.at_stage("base"))?;
    let fr = extreme_nontrivial(&f0, opts.seed).map_err(|e| e.at_stage("base spectrum"))?;

    let mut extended: Vec<_> = gadgets
        .iter()
        .map(|g| tree_extend(&g.core, d, opts.depth + 1))
        .collect::<Result<_>>()
        .map_err(|e| e.at_stage("extension"))?;
    let leaves: usize = extended.iter().map(|g| g.level_size(opts.depth + 1)).sum();
    let pad = pad_length(leaves, d, opts.depth).map_err(|e| e.at_stage("padding"))?;
    if pad > 0 {
        extended.push(tree_extend(&path_gadget(pad), d, opts.depth + 1)?);
    }
    let leaves: usize = extended.iter().map(|g| g.level_size(opts.depth + 1)).sum();
    let m = leaves / d;
    let requested = 4 * opts.girth;
    let (spread, threshold) = spread_with_fallback(&f0, m, requested, 2).map_err(|e| e.at_stage("spread set"))?;
    let patched = r_patch(&f0, &extended, &spread.vertices).map_err(|e| e.at_stage("patch"))?;

    let k = 1 + targets.len();
    let main = lanczos_largest(&patched.graph, &LanczosOptions::new(k).tol(opts.solver_tol).seed(opts.seed), &[])
        .map_err(|e| e.at_stage("final spectrum"))?;
    let mut graph = patched.graph;
    for _ in 0..extra_components {
        graph = graph.disjoint_union(&MultiGraph::complete(d + 1));
    }
    let mut spectrum: Vec<(f64, f64)> = main.values.iter().copied().zip(main.residuals.iter().copied()).collect();
    spectrum.extend(std::iter::repeat_n((d as f64, 0.0), extra_components));
    spectrum.sort_by(|a, b| b.0.total_cmp(&a.0));
    spectrum.truncate(k);

    let deviations = targets
        .iter()
        .enumerate()
        .map(|(i, &mu)| {
            let measured = spectrum.get(i + 1).map_or(f64::NAN, |s| s.0);
            Deviation { index: i + 2, target: mu, measured, deviation: measured - mu }
        })
        .collect();
    let hypotheses = girth_at_least(&f0, 8 * opts.girth)
        && gadgets.iter().all(|g| girth_at_least(&g.core, 4 * opts.girth));
    let ext_vertices: usize = extended.iter().map(|g| g.level_start[opts.depth]).sum();
    let size_ratio = 2.0 * (d as f64).powi(3) * ext_vertices as f64 / opts.base_size as f64;
    let report = SynthReport {
        d,
        seed: opts.seed,
        depth: opts.depth,
        targets: targets.clone(),
        gadgets: gadgets.into_iter().map(|g| g.report).collect(),
        base: BaseReport { n: opts.base_size, seed: base_rng.seed, stream: base_rng.stream, lambda2: fr.lambda2, lambda_min: fr.lambda_min },
        patch: PatchReport {
            M: m,
            min_dist_achieved: spread.min_dist_achieved,
            threshold,
            requested_threshold: requested,
            pad_path: pad,
            lemma_slack: ((d as f64 - 1.0).sqrt() / opts.girth as f64).max(size_ratio),
            size_ratio,
            girth_hypotheses_met: hypotheses,
        },
        final_: FinalReport {
            n: graph.vertex_count(),
            components: graph.components().1,
            eigenvalues: spectrum.iter().map(|s| s.0).collect(),
            residuals: spectrum.iter().map(|s| s.1).collect(),
            regular: graph.is_regular(d),
            simple: graph.is_simple(),
        },
        deviations,
    };
    if !report.final_.regular {
        return Err(ForgeError::Consistency("output is not regular".into()));
    }
    Ok(Synthesis { graph, report })
}
