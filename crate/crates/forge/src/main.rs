use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use forge_core::graph::{read_edge_list, write_edge_list};
use forge_core::greens::{green_law, GreenLawOptions};
use forge_core::nonbacktracking::{build_nb_operator, nb_spectral_radius, NbSpectrum};
use forge_core::pipeline::{construct_gadget, synthesize, verify_gadget_lambda1, GadgetSpec, SynthOptions};
use forge_core::random::{kesten_stigum_stats, percolate, sample_configuration_model, sample_simple_configuration_model};
use forge_core::spectral::lanczos_topk;
use forge_core::tree::target_from_mu;
use forge_core::{MultiGraph, RngSpec};

#[derive(Parser)]
#[command(name = "forge", version, about = "Build regular graphs with prescribed top eigenvalues")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Patch gadgets into a random regular base graph.
    Synth {
        #[arg(long)]
        d: usize,
        /// Comma-separated targets for the second, third, ... eigenvalues.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<f64>,
        #[arg(long)]
        base_size: usize,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        girth: usize,
        #[arg(long)]
        gadget_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample one percolated gadget.
    Gadget {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        girth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Top eigenvalues of a graph plus regularity and simplicity checks.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        topk: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Top eigenvalues of the adjacency matrix.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        topk: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Local-law statistics of the finitized tree extension on a grid of z.
    GreenLaw {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        /// `label:start:stop:step` or a comma-separated list of energies.
        #[arg(long)]
        z_grid: String,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Perron value of the nonbacktracking operator.
    NbSpectrum {
        #[arg(long)]
        input: PathBuf,
        /// JSON array of vertex ids to restrict to.
        #[arg(long)]
        restrict: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Degree used to map back to an adjacency eigenvalue; defaults to the maximum degree.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Galton-Watson generation sizes of the percolated tree.
    BranchingStats {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Configuration-model random regular graph.
    SampleRrg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reject draws with loops or parallel edges.
        #[arg(long)]
        simple: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keep each edge independently with probability p.
    Percolate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<MultiGraph> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_edge_list(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))?)
}

fn save(g: &MultiGraph, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(f);
            write_edge_list(g, &mut w)?;
            w.flush()?;
        }
        None => write_edge_list(g, std::io::stdout().lock())?,
    }
    Ok(())
}

fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 4 {
        let num = |s: &str| s.parse::<f64>().with_context(|| format!("bad number `{s}` in z grid"));
        let (a, b, h) = (num(parts[1])?, num(parts[2])?, num(parts[3])?);
        if !(h > 0.0) || b < a {
            bail!("z grid needs start <= stop and a positive step");
        }
        let count = ((b - a) / h + 1e-9).floor() as usize;
        return Ok((0..=count).map(|k| a + k as f64 * h).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad energy `{s}`")))
        .collect()
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(flatten)]
    spectrum: forge_core::spectral::SpectralReport,
    regular_degree: Option<usize>,
    simple: bool,
    components: usize,
}

#[derive(Serialize)]
struct GadgetOutput {
    spec: GadgetSpec,
    provenance: forge_core::pipeline::GadgetProvenance,
    n: usize,
    m: usize,
    lambda1: forge_core::pipeline::Lambda1Check,
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Synth { d, targets, base_size, depth, girth, gadget_size, seed, out, report } => {
            let mut o = SynthOptions::new(d, targets, base_size, seed);
            o.depth = depth;
            o.girth = girth;
            o.gadget_size = gadget_size;
            let s = synthesize(&o)?;
            save(&s.graph, out.as_deref())?;
            if report.is_some() || out.is_some() {
                emit(&s.report, report.as_deref())?;
            }
        }
        Cmd::Gadget { d, mu, n, girth, seed, out, json } => {
            let t = target_from_mu(d, mu)?;
            let spec = GadgetSpec { girth, ..GadgetSpec::new(t, n) };
            let (g0, provenance) = construct_gadget(&spec, RngSpec::from_seed(seed))?;
            save(&g0, out.as_deref())?;
            if json.is_some() || out.is_some() {
                let lambda1 = verify_gadget_lambda1(&g0, d, Some(&t), 1e-10)?;
                emit(&GadgetOutput { spec, provenance, n: g0.vertex_count(), m: g0.edge_count(), lambda1 }, json.as_deref())?;
            }
        }
        Cmd::Verify { input, topk, tol, seed, json } => {
            let g = load(&input)?;
            let spectrum = lanczos_topk(&g, topk, tol, seed)?;
            let d = g.max_degree();
            let rep = VerifyReport {
                spectrum,
                regular_degree: g.is_regular(d).then_some(d),
                simple: g.is_simple(),
                components: g.components().1,
            };
            emit(&rep, json.as_deref())?;
        }
        Cmd::Spectrum { input, topk, tol, seed, json } => {
            let g = load(&input)?;
            emit(&lanczos_topk(&g, topk, tol, seed)?, json.as_deref())?;
        }
        Cmd::GreenLaw { input, d, p, z_grid, eta, ell, radius, samples, seed, json } => {
            let g0 = load(&input)?;
            let opts = GreenLawOptions { d, p, ell, radius, samples, rng: RngSpec::from_seed(seed) };
            let rows = parse_grid(&z_grid)?
                .into_iter()
                .map(|e| green_law(&g0, Complex64::new(e, eta), &opts))
                .collect::<forge_core::Result<Vec<_>>>()?;
            emit(&rows, json.as_deref())?;
        }
        Cmd::NbSpectrum { input, restrict, tol, d, json } => {
            let g = load(&input)?;
            let mask = match restrict {
                Some(p) => {
                    let ids: Vec<usize> = serde_json::from_reader(BufReader::new(File::open(&p)?))
                        .with_context(|| format!("reading vertex list {}", p.display()))?;
                    if let Some(&bad) = ids.iter().find(|&&v| v >= g.vertex_count()) {
                        bail!("vertex {bad} out of range");
                    }
                    Some(g.mask(&ids))
                }
                None => None,
            };
            let b = build_nb_operator(&g, mask.as_deref());
            let (rho, iterations) = nb_spectral_radius(&b, tol, 1_000_000)?;
            let q = d.unwrap_or(g.max_degree()) as f64 - 1.0;
            let mapped_mu = (q > 0.0 && rho > q.sqrt()).then(|| rho + q / rho);
            emit(&NbSpectrum { rho, iterations, mapped_mu }, json.as_deref())?;
        }
        Cmd::BranchingStats { d, p, depth, trials, seed, json } => {
            let stats = kesten_stigum_stats(d, p, depth, trials, RngSpec::from_seed(seed));
            if let Some(w) = &stats.warning {
                eprintln!("warning: {w}");
            }
            emit(&stats, json.as_deref())?;
        }
        Cmd::SampleRrg { n, d, seed, simple, out } => {
            let rng = RngSpec::from_seed(seed);
            let g = if simple {
                sample_simple_configuration_model(n, d, rng, 100_000)?.0
            } else {
                sample_configuration_model(n, d, rng)?
            };
            save(&g, out.as_deref())?;
        }
        Cmd::Percolate { input, p, seed, out } => {
            let g = load(&input)?;
            save(&percolate(&g, p, RngSpec::from_seed(seed))?, out.as_deref())?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
