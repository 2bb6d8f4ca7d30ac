use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use covfix::harness::{self, RunConfig, UbSource};
use covfix::orlib::{read_orlib, read_ub_table, write_orlib};
use covfix::pipeline::{NamedInstance, PipelineConfig, Procedure};
use covfix::simplex::{Pricing, SolverConfig};
use covfix::sls::{generate_batch, CostModel, SlsParams};
use covfix::Execution;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UbChoice {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Generator {
    Sls,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CostArg {
    Uniform,
    Area,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PricingArg {
    Dantzig,
    Bland,
}

/// Variable fixing experiments on set-covering instances.
#[derive(Debug, Parser)]
#[command(name = "covfix", version)]
struct Args {
    /// OR-Library instance files (glob patterns, repeatable).
    #[arg(long, value_name = "GLOB")]
    instances: Vec<String>,

    /// File with one `name value` upper bound per line.
    #[arg(long, value_name = "PATH", conflicts_with = "ub")]
    ub_file: Option<PathBuf>,

    /// Compute upper bounds instead of reading them.
    #[arg(long, value_enum)]
    ub: Option<UbChoice>,

    /// Procedures to run: rcf, dpf, irc, idpf, sf.
    #[arg(long, value_delimiter = ',', default_value = "rcf,dpf,irc,idpf,sf")]
    procedures: Vec<String>,

    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Seed for generated instances.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,

    /// Generate instances instead of (or in addition to) reading them.
    #[arg(long, value_enum)]
    generate: Option<Generator>,

    /// Candidate sites of generated instances.
    #[arg(long, default_value_t = 500)]
    n: usize,

    /// Network nodes (default: 0.3 n).
    #[arg(long)]
    nu: Option<usize>,

    #[arg(long, default_value_t = 0.11)]
    rmin: f64,

    #[arg(long, default_value_t = 0.19)]
    rmax: f64,

    /// Sample spacing along network edges.
    #[arg(long, default_value_t = 2e-4)]
    spacing: f64,

    /// Cost model of generated instances.
    #[arg(long, value_enum, default_value = "uniform")]
    costs: CostArg,

    /// Number of generated instances.
    #[arg(long, default_value_t = 1)]
    count: usize,

    #[arg(long, value_enum, default_value = "dantzig")]
    pricing: PricingArg,

    #[arg(long, default_value_t = 1e-7)]
    tol_feas: f64,

    /// Strong fixing without cross-certificates.
    #[arg(long)]
    no_cross: bool,

    /// Skip SVG output.
    #[arg(long)]
    no_figures: bool,
}

fn load_instances(patterns: &[String]) -> Result<Vec<NamedInstance>> {
    let mut paths = BTreeSet::new();
    for pat in patterns {
        let before = paths.len();
        for entry in glob::glob(pat).with_context(|| format!("bad pattern `{pat}`"))? {
            paths.insert(entry?);
        }
        if paths.len() == before {
            bail!("no files match `{pat}`");
        }
    }
    let mut out = Vec::new();
    let mut names = BTreeSet::new();
    for path in paths {
        let name = instance_name(&path);
        if !names.insert(name.clone()) {
            return Err(covfix::Error::DuplicateName(name).into());
        }
        let instance = read_orlib(&path).with_context(|| format!("reading {}", path.display()))?;
        log::info!("{name}: {} rows, {} columns", instance.n_rows(), instance.n_cols());
        out.push(NamedInstance { name, instance });
    }
    Ok(out)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn generate(args: &Args) -> Result<Vec<NamedInstance>> {
    let mut params = SlsParams::with_sites(args.n);
    if let Some(nu) = args.nu {
        params.n_nodes = nu;
    }
    params.r_min = args.rmin;
    params.r_max = args.rmax;
    params.seed = args.seed;
    params.spacing = args.spacing;
    params.costs = match args.costs {
        CostArg::Uniform => CostModel::Uniform,
        CostArg::Area => CostModel::Area,
    };
    let batch = generate_batch(&params, args.count)?;
    let dir = args.out.join("instances");
    fs::create_dir_all(&dir)?;
    let mut out = Vec::new();
    for (k, instance) in batch.into_iter().enumerate() {
        let name = format!("sls{}_s{}_{k}", args.n, args.seed);
        fs::write(dir.join(format!("{name}.txt")), write_orlib(&instance))?;
        log::info!(
            "generated {name}: {} rows, {} columns (analogue generator)",
            instance.n_rows(),
            instance.n_cols()
        );
        out.push(NamedInstance { name, instance });
    }
    Ok(out)
}

fn run(args: Args) -> Result<()> {
    let mut instances = load_instances(&args.instances)?;
    if args.generate.is_some() {
        instances.extend(generate(&args)?);
    }
    if instances.is_empty() {
        bail!("nothing to do: pass --instances or --generate");
    }
    let procedures = args
        .procedures
        .iter()
        .map(|s| s.trim().parse::<Procedure>())
        .collect::<Result<Vec<_>, _>>()?;
    let ub_source = match (&args.ub_file, args.ub) {
        (Some(path), _) => UbSource::Table(read_ub_table(path).with_context(|| format!("reading {}", path.display()))?),
        (None, Some(UbChoice::Exact)) => UbSource::Exact,
        (None, _) => UbSource::Greedy,
    };
    let solver = SolverConfig {
        feas_tol: args.tol_feas,
        pricing: match args.pricing {
            PricingArg::Dantzig => Pricing::Dantzig,
            PricingArg::Bland => Pricing::Bland,
        },
        ..SolverConfig::default()
    };
    let exec = if args.jobs == Some(1) {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let cfg = RunConfig {
        ub_source,
        procedures,
        pipeline: PipelineConfig {
            solver,
            cross_certificates: !args.no_cross,
            exec,
        },
        out_dir: args.out.clone(),
        exec,
        write_figures: !args.no_figures,
    };
    let rows = covfix::exec::with_threads(args.jobs, || harness::run(&instances, &cfg))?;
    println!("instance,procedure,n,m,outer");
    for r in &rows {
        println!(
            "{},{},{},{},{}",
            r.instance,
            r.result.procedure.name(),
            r.result.n_final(),
            r.result.m_final(),
            r.result.outer_iterations
        );
    }
    log::info!("reports written to {}", args.out.display());
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("COVFIX_LOG", "warn")).init();
    if let Err(e) = run(Args::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
