use anyhow::{anyhow, bail, Context, Result};
use bergman::experiments::{self, ExperimentConfig, ExperimentReport, P_GRID};
use bergman::moments::{build_table, default_degree_cap, save_table};
use bergman::transforms::{bell_residual, riemann_derivative, transformation_residual, HoloMap};
use bergman::zerofinder::{find_zeros_on_slice, zero_free_verdict, Cell, SearchBudget, SliceSpec, VerdictBudget};
use bergman::{DomainSpec, KernelEvaluator};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "bergman", version, about = "Bergman kernels: moments, evaluation, identities and zero search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moment tables.
    Moments {
        #[command(subcommand)]
        action: MomentsCmd,
    },
    /// Kernel evaluation.
    Kernel {
        #[command(subcommand)]
        action: KernelCmd,
    },
    /// Numerical checks of kernel identities.
    Verify(VerifyArgs),
    /// Zero search.
    Zeros {
        #[command(subcommand)]
        action: ZerosCmd,
    },
    /// Experiment drivers.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum MomentsCmd {
    Build {
        /// Domain as inline JSON or a path to a JSON file.
        #[arg(long)]
        domain: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum KernelCmd {
    Eval {
        #[arg(long)]
        domain: String,
        /// Comma-separated complex coordinates, e.g. `0.1+0.2i,0.3`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Series truncation degree.
        #[arg(long)]
        budget: Option<usize>,
        /// Degree cap of the moment table for series kernels.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Transform,
    Bell,
    Riemann,
}

#[derive(Args)]
struct VerifyArgs {
    identity: Identity,
    /// JSON parameters; see the README for the keys of each identity.
    #[arg(long, default_value = "{}")]
    params: String,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum ZerosCmd {
    Find {
        #[arg(long)]
        domain: String,
        /// Slice as JSON, e.g. `{"kind":"product","axis":0,"pinned":[[0,0]]}`.
        #[arg(long)]
        slice: String,
        /// Region as JSON, e.g. `{"shape":"disk","center":[0,0],"radius":0.9}`.
        #[arg(long)]
        region: String,
        /// Maximum number of quadtree cells.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
    },
    Verdict {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        budget: Option<usize>,
        /// Degree cap of the axis moment tables.
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    QThreshold,
    Convex,
    Anh,
    Englis,
    Ramadanov,
}

#[derive(Args)]
struct ExperimentArgs {
    experiment: Experiment,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for the CSV output.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of quadtree cells per search.
    #[arg(long)]
    budget: Option<usize>,
    /// Directory for cached moment tables.
    #[arg(long)]
    cache: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(|t| t.trim().parse::<Complex64>().map_err(|e| anyhow!("bad coordinate {t:?}: {e}"))).collect()
}

fn parse_json<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with(['{', '[']) { arg.to_string() } else { std::fs::read_to_string(arg)? };
    serde_json::from_str(&text).with_context(|| format!("parsing {what}"))
}

fn print(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn evaluator(spec: &DomainSpec, degree: Option<usize>, tol: f64) -> Result<KernelEvaluator> {
    Ok(match degree {
        Some(d) => KernelEvaluator::series(build_table(spec, d, tol)?),
        None => KernelEvaluator::for_domain(spec, default_degree_cap(spec.dim()), tol)?,
    })
}

/// Rejection sample of a point of the domain.
fn sample_point(spec: &DomainSpec, rng: &mut ChaCha8Rng, shrink: f64) -> Result<Vec<Complex64>> {
    let bounds: Vec<f64> = spec.radial_bounds().iter().map(|b| b.min(4.0) * shrink).collect();
    for _ in 0..100_000 {
        let z: Vec<Complex64> = bounds
            .iter()
            .map(|b| Complex64::from_polar(b * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>()))
            .collect();
        let scaled: Vec<Complex64> = z.iter().map(|x| x / shrink).collect();
        if spec.contains(&scaled)? && spec.contains(&z)? {
            return Ok(z);
        }
    }
    bail!("could not sample a point of {spec}")
}

#[derive(Deserialize)]
struct MapParams {
    map: Option<HoloMap>,
    domain1: Option<serde_json::Value>,
    domain2: Option<serde_json::Value>,
    degree: Option<usize>,
}

#[derive(Deserialize)]
struct RiemannParams {
    a: Option<Complex64>,
    domain: Option<serde_json::Value>,
}

fn domain_or(v: Option<serde_json::Value>, default: DomainSpec) -> Result<DomainSpec> {
    Ok(match v {
        Some(v) => DomainSpec::from_json(&v)?,
        None => default,
    })
}

fn verify(args: VerifyArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    match args.identity {
        Identity::Transform => {
            let p: MapParams = parse_json(&args.params, "params")?;
            let map = p.map.unwrap_or(HoloMap::Mobius { a: Complex64::new(0.3, 0.0) });
            let d1 = domain_or(p.domain1, DomainSpec::UnitDisk)?;
            let d2 = domain_or(p.domain2, d1.clone())?;
            let k1 = evaluator(&d1, p.degree, 1e-12)?;
            let k2 = evaluator(&d2, p.degree, 1e-12)?;
            let samples: Vec<_> = (0..args.samples)
                .map(|_| Ok((sample_point(&d1, &mut rng, 0.9)?, sample_point(&d1, &mut rng, 0.9)?)))
                .collect::<Result<_>>()?;
            let r = transformation_residual(&map, &k1, &k2, &samples)?;
            print(&json!({ "identity": "transform", "map": map, "seed": args.seed, "residual": r }))
        }
        Identity::Bell => {
            let p: MapParams = parse_json(&args.params, "params")?;
            let map = p.map.unwrap_or(HoloMap::Squaring);
            let d = domain_or(p.domain1, DomainSpec::UnitDisk)?;
            let k1 = evaluator(&d, p.degree, 1e-12)?;
            let k2 = evaluator(&domain_or(p.domain2, d.clone())?, p.degree, 1e-12)?;
            let samples: Vec<_> = (0..args.samples)
                .map(|_| {
                    let z = sample_point(&d, &mut rng, 0.9)?;
                    let r = 0.1 + 0.7 * rng.random::<f64>();
                    let w = vec![Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())];
                    Ok((z, w))
                })
                .collect::<Result<_>>()?;
            let r = bell_residual(&map, &k1, &k2, &samples)?;
            print(&json!({ "identity": "bell", "map": map, "seed": args.seed, "residual": r }))
        }
        Identity::Riemann => {
            let p: RiemannParams = parse_json(&args.params, "params")?;
            let a = p.a.unwrap_or(Complex64::new(0.3, 0.0));
            let d = domain_or(p.domain, DomainSpec::UnitDisk)?;
            let k = evaluator(&d, None, 1e-12)?;
            let mut max_diff: Option<f64> = None;
            let mut values = Vec::new();
            for _ in 0..args.samples {
                let z = sample_point(&d, &mut rng, 0.9)?[0];
                let v = riemann_derivative(&k, a, z)?;
                if d == DomainSpec::UnitDisk {
                    let exact =
                        Complex64::new(1.0 - a.norm_sqr(), 0.0) / (Complex64::new(1.0, 0.0) - a.conj() * z).powi(2);
                    let diff = (v - exact).norm();
                    max_diff = Some(max_diff.map_or(diff, |m: f64| m.max(diff)));
                }
                values.push(json!({ "z": z, "derivative": v }));
            }
            let at_a = riemann_derivative(&k, a, a)?;
            print(&json!({
                "identity": "riemann",
                "a": a,
                "seed": args.seed,
                "derivative_at_a": at_a,
                "max_diff_vs_disk_automorphism": max_diff,
                "samples": values,
            }))
        }
    }
}

fn search_budget(cells: Option<usize>) -> SearchBudget {
    let mut b = SearchBudget::default();
    if let Some(c) = cells {
        b.max_cells = c;
    }
    b
}

fn run_experiment(args: ExperimentArgs) -> Result<()> {
    let mut cfg = ExperimentConfig { seed: args.seed, cache_dir: args.cache, ..ExperimentConfig::default() };
    cfg.budget.search = search_budget(args.budget);
    let report: ExperimentReport = match args.experiment {
        Experiment::QThreshold => experiments::run_q_threshold(&[0.5, 1.0, 2.0, 2.5, 3.0, 4.0, 6.0, 10.0, 14.0], &cfg)?,
        Experiment::Convex => experiments::run_convex(&P_GRID, &cfg)?,
        Experiment::Anh => experiments::run_anh_search(&[1, 2, 3, 4, 5, 6], &cfg)?,
        Experiment::Englis => experiments::run_englis(&[0.0, 25.0, 50.0, 100.0], &[0.3, 0.6], &cfg)?,
        Experiment::Ramadanov => experiments::run_ramadanov(&[0.9, 0.99, 0.999], &[1, 2, 3, 4], &cfg)?,
    };
    if let Some(path) = &args.out {
        report.write_json(path)?;
    }
    if let Some(dir) = &args.csv {
        let path = report.write_csv(dir)?;
        eprintln!("wrote {}", path.display());
    }
    if args.out.is_none() {
        print(&report)?;
    }
    for r in &report.rows {
        let status = match r.agrees {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None => "-",
        };
        eprintln!("[{}] {} {} {}", r.kind.as_str(), status, r.case, r.verdict.as_deref().unwrap_or(""));
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Moments { action: MomentsCmd::Build { domain, degree, tol, out } } => {
            let spec = DomainSpec::parse_arg(&domain)?;
            let table = build_table(&spec, degree, tol)?;
            save_table(&table, &out)?;
            print(&json!({
                "domain": spec.to_json(),
                "domain_hash": table.domain_hash,
                "degree_cap": degree,
                "entries": table.len(),
                "excluded": table.excluded.len(),
                "out": out,
            }))
        }
        Command::Kernel { action: KernelCmd::Eval { domain, z, w, budget, degree, tol } } => {
            let spec = DomainSpec::parse_arg(&domain)?;
            let k = evaluator(&spec, degree, tol)?;
            let v = k.eval_budget(&parse_point(&z)?, &parse_point(&w)?, budget)?;
            print(&json!({
                "value_re": v.value.re,
                "value_im": v.value.im,
                "tail_bound": v.tail_bound,
                "certified": v.certified,
            }))
        }
        Command::Verify(args) => verify(args),
        Command::Zeros { action: ZerosCmd::Find { domain, slice, region, budget, degree, tol } } => {
            let spec = DomainSpec::parse_arg(&domain)?;
            let slice: SliceSpec = parse_json(&slice, "slice")?;
            let region: Cell = parse_json(&region, "region")?;
            let k = match (&slice, degree) {
                (SliceSpec::Product { axis, pinned }, Some(d))
                    if pinned.iter().enumerate().all(|(i, p)| i == *axis || p.norm() == 0.0) =>
                {
                    KernelEvaluator::axis_restriction(&spec, *axis, d, tol)?
                }
                _ => evaluator(&spec, degree, tol)?,
            };
            let r = find_zeros_on_slice(&k, slice, region, None, &search_budget(budget))?;
            print(&r)
        }
        Command::Zeros { action: ZerosCmd::Verdict { domain, budget, degree } } => {
            let spec = DomainSpec::parse_arg(&domain)?;
            let mut b = VerdictBudget { search: search_budget(budget), ..VerdictBudget::default() };
            if let Some(d) = degree {
                b.series_cap = d;
            }
            print(&zero_free_verdict(&spec, &b)?)
        }
        Command::Experiment(args) => run_experiment(args),
    }
}
