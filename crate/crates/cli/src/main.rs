//! Command-line frontend for the harmonic-centrality estimator.
//!
//! Subcommands cover the whole pipeline: synthetic graph generation,
//! exact centrality, power-law fitting, model training and prediction,
//! and the benchmark scenarios. Every stochastic command takes an
//! explicit `--seed`, so each output file is fully determined by its
//! inputs and flags. Exit codes: 0 on success, 1 on a runtime error,
//! 2 on a usage error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quickcent_core::digraph::Digraph;
use quickcent_core::error::Error;
use quickcent_core::experiments::{
    run_assumptions, run_compare, run_empirical, run_er_null, run_randomize, run_robustness,
    ExperimentConfig, ExperimentReport, GraphSource,
};
use quickcent_core::generators::{gen_er, gen_pa, ErConfig, PaConfig};
use quickcent_core::powerlaw::{bootstrap_pvalue, fit_xmin, mle_alpha, PowerLawFit, PowerLawModel};
use quickcent_core::quickcent::{load_model, predict_all, save_model, train, XminMode};
use quickcent_core::rng::{rng_from_seed, sample_without_replacement};

#[derive(Parser)]
#[command(
    name = "quickcent",
    version,
    about = "Estimate harmonic centrality from in-degree clues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic digraph and write it as an edge list.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compute exact harmonic centrality for every node.
    Exact {
        /// Input edge-list file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output CSV (node,in_degree,harmonic); stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a power law to the exact centralities of a graph.
    Fit {
        /// Input edge-list file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Lower cutoff: `fixed:X` pins x_min, `fit:P` scans
        /// candidates up to the P-th percentile.
        #[arg(long, default_value = "fit:20", value_parser = parse_xmin)]
        xmin: XminMode,
        /// Bootstrap replicates for the goodness-of-fit p-value
        /// (0 skips the bootstrap).
        #[arg(long, default_value_t = 0)]
        boot: usize,
        /// RNG seed; required when --boot is nonzero.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Train an estimator from a random node sample and save it.
    Train {
        /// Input edge-list file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Fraction of nodes whose exact centrality is computed.
        #[arg(long, default_value_t = 0.1)]
        train_frac: f64,
        /// Number of interior quantile bands.
        #[arg(long, default_value_t = 8)]
        n_props: usize,
        /// Lower cutoff: `fixed:X` or `fit:P`.
        #[arg(long, default_value = "fixed:1", value_parser = parse_xmin)]
        xmin: XminMode,
        /// RNG seed for the training sample.
        #[arg(long)]
        seed: u64,
        /// Output model file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate centrality for every node with a trained model.
    Predict {
        /// Trained model file.
        #[arg(long)]
        model: PathBuf,
        /// Input edge-list file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output CSV (node,in_degree,estimate); stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark scenario and write a per-replicate CSV report.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Check the method's distributional assumptions on synthetic
    /// graphs: tail fit, bootstrap p-value, degree/centrality
    /// rank correlation.
    Assumptions {
        #[command(flatten)]
        pa: PaArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Bootstrap replicates per graph.
        #[arg(long, default_value_t = 100)]
        boot: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Preferential attachment: each new node attaches with
    /// probability proportional to in-degree^beta + 1.
    Pa {
        /// Number of nodes.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Attachment exponent.
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Output edge-list file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Erdős–Rényi: every ordered pair gets an arc independently
    /// with probability p.
    Er {
        /// Number of nodes.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Arc probability.
        #[arg(long)]
        p: f64,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Output edge-list file.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Flags shared by the synthetic-graph scenarios.
#[derive(Args)]
struct PaArgs {
    /// Number of nodes per generated graph.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Preferential-attachment exponent.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

/// Flags shared by every experiment run.
#[derive(Args)]
struct RunArgs {
    /// Number of replicates.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    replicates: u64,
    /// Fraction of nodes in each training sample.
    #[arg(long, default_value_t = 0.1)]
    train_frac: f64,
    /// Number of interior quantile bands.
    #[arg(long, default_value_t = 8)]
    n_props: usize,
    /// Lower cutoff: `fixed:X` or `fit:P`.
    #[arg(long, default_value = "fixed:1", value_parser = parse_xmin)]
    xmin: XminMode,
    /// RNG seed; every replicate derives its own stream from it.
    #[arg(long)]
    seed: u64,
    /// Worker threads for the replicate queue (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Record wall-clock fit+predict times (makes reports
    /// run-dependent).
    #[arg(long)]
    timing: bool,
    /// Output CSV report.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Accuracy of the estimator vs. linear and tree regressors on
    /// preferential-attachment graphs.
    Compare {
        #[command(flatten)]
        pa: PaArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Error as the training fraction sweeps 10%..100%.
    Robustness {
        #[command(flatten)]
        pa: PaArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Accuracy before and after degree-preserving randomization.
    Randomize {
        #[command(flatten)]
        pa: PaArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Arc-swap attempts per graph.
        #[arg(long, default_value_t = 10_000)]
        swaps: usize,
    },
    /// Null model: the same contest on Erdős–Rényi graphs, sweeping
    /// the band count.
    ErNull {
        /// Number of nodes per graph.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Arc probability.
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare protocol on a fixed graph loaded from an edge list;
    /// replicates resample the training set.
    Empirical {
        /// Input edge-list file.
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn parse_xmin(s: &str) -> Result<XminMode, String> {
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| format!("expected fixed:X or fit:P, got `{s}`"))?;
    let value: f64 = value
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    match kind {
        "fixed" if value > 0.0 => Ok(XminMode::Fixed(value)),
        "fixed" => Err("fixed x_min must be positive".into()),
        "fit" if (0.0..=100.0).contains(&value) => Ok(XminMode::Fitted(value)),
        "fit" => Err("fit percentile must be in [0, 100]".into()),
        other => Err(format!("unknown cutoff mode `{other}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Input(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Gen(gen) => cmd_gen(gen),
        Command::Exact { input, out } => cmd_exact(&input, out.as_deref()),
        Command::Fit {
            input,
            xmin,
            boot,
            seed,
        } => cmd_fit(&input, xmin, boot, seed),
        Command::Train {
            input,
            train_frac,
            n_props,
            xmin,
            seed,
            out,
        } => cmd_train(&input, train_frac, n_props, xmin, seed, &out),
        Command::Predict { model, input, out } => cmd_predict(&model, &input, out.as_deref()),
        Command::Bench(bench) => cmd_bench(bench),
        Command::Assumptions { pa, run, boot } => {
            let mut cfg = experiment_config(pa_source(&pa), &run)?;
            cfg.n_boot = boot;
            run_report(run_assumptions(&cfg)?, &run.out)
        }
    }
}

fn cmd_gen(gen: GenCommand) -> Result<(), Error> {
    let (g, out) = match gen {
        GenCommand::Pa { n, beta, seed, out } => {
            (gen_pa(&PaConfig::new(n as usize, beta, seed))?, out)
        }
        GenCommand::Er { n, p, seed, out } => (
            gen_er(&ErConfig {
                n_nodes: n as usize,
                p,
                seed,
            })?,
            out,
        ),
    };
    g.write_edge_list(BufWriter::new(File::create(&out)?))?;
    println!("{} nodes, {} arcs -> {}", g.n_nodes(), g.n_arcs(), out.display());
    Ok(())
}

fn cmd_exact(input: &std::path::Path, out: Option<&std::path::Path>) -> Result<(), Error> {
    let g = Digraph::read_edge_list_path(input, false)?;
    let h = g.harmonic_all();
    let mut text = String::from("node,in_degree,harmonic\n");
    for v in 0..g.n_nodes() {
        text.push_str(&format!("{},{},{:?}\n", v, g.in_degree(v), h[v]));
    }
    write_text(&text, out)
}

fn cmd_fit(
    input: &std::path::Path,
    xmin: XminMode,
    boot: usize,
    seed: Option<u64>,
) -> Result<(), Error> {
    if boot > 0 && seed.is_none() {
        return Err(Error::Input("--boot needs an explicit --seed".into()));
    }
    let g = Digraph::read_edge_list_path(input, false)?;
    let h = g.harmonic_all();
    let fit = match xmin {
        XminMode::Fixed(x_min) => {
            let alpha = mle_alpha(h.values(), x_min)?;
            let model = PowerLawModel::new(alpha, x_min)?;
            let ks = quickcent_core::powerlaw::ks_distance(h.values(), &model)?;
            let n_tail = h.values().iter().filter(|&&x| x >= x_min).count();
            PowerLawFit {
                model,
                ks_distance: ks,
                n_tail,
                percentile_bound: 0.0,
            }
        }
        XminMode::Fitted(bound) => fit_xmin(h.values(), bound)?,
    };
    println!("alpha = {:?}", fit.model.alpha());
    println!("x_min = {:?}", fit.model.x_min());
    println!("ks_distance = {:?}", fit.ks_distance);
    println!("n_tail = {}", fit.n_tail);
    if boot > 0 {
        let p = bootstrap_pvalue(h.values(), &fit, boot, seed.unwrap())?;
        println!("bootstrap_pvalue = {:?}", p);
    }
    Ok(())
}

fn cmd_train(
    input: &std::path::Path,
    train_frac: f64,
    n_props: usize,
    xmin: XminMode,
    seed: u64,
    out: &std::path::Path,
) -> Result<(), Error> {
    if !(train_frac > 0.0 && train_frac <= 1.0) {
        return Err(Error::Input(format!(
            "train_frac = {train_frac} not in (0, 1]"
        )));
    }
    let g = Digraph::read_edge_list_path(input, false)?;
    let n = g.n_nodes();
    let k = ((train_frac * n as f64).round() as usize).clamp(1, n.max(1));
    let mut rng = rng_from_seed(seed);
    let nodes = sample_without_replacement(n, k, &mut rng);
    let model = train(&g, &nodes, n_props, xmin)?;
    save_model(&model, out)?;
    println!(
        "trained on {} of {} nodes: alpha = {:?}, {} bands -> {}",
        k,
        n,
        model.alpha(),
        model.n_bands(),
        out.display()
    );
    Ok(())
}

fn cmd_predict(
    model_path: &std::path::Path,
    input: &std::path::Path,
    out: Option<&std::path::Path>,
) -> Result<(), Error> {
    let model = load_model(model_path)?;
    let g = Digraph::read_edge_list_path(input, false)?;
    let est = predict_all(&model, &g);
    let mut text = String::from("node,in_degree,estimate\n");
    for v in 0..g.n_nodes() {
        text.push_str(&format!("{},{},{:?}\n", v, g.in_degree(v), est[v]));
    }
    write_text(&text, out)
}

fn cmd_bench(bench: BenchCommand) -> Result<(), Error> {
    match bench {
        BenchCommand::Compare { pa, run } => {
            let cfg = experiment_config(pa_source(&pa), &run)?;
            run_report(run_compare(&cfg)?, &run.out)
        }
        BenchCommand::Robustness { pa, run } => {
            let cfg = experiment_config(pa_source(&pa), &run)?;
            run_report(run_robustness(&cfg)?, &run.out)
        }
        BenchCommand::Randomize { pa, run, swaps } => {
            let mut cfg = experiment_config(pa_source(&pa), &run)?;
            cfg.n_swap_attempts = swaps;
            run_report(run_randomize(&cfg)?, &run.out)
        }
        BenchCommand::ErNull { n, p, run } => {
            let cfg = experiment_config(
                GraphSource::Er {
                    n_nodes: n as usize,
                    p,
                },
                &run,
            )?;
            run_report(run_er_null(&cfg)?, &run.out)
        }
        BenchCommand::Empirical { input, run } => {
            let cfg = experiment_config(GraphSource::EdgeList(input), &run)?;
            run_report(run_empirical(&cfg)?, &run.out)
        }
    }
}

fn pa_source(pa: &PaArgs) -> GraphSource {
    GraphSource::Pa {
        n_nodes: pa.n as usize,
        beta: pa.beta,
    }
}

fn experiment_config(source: GraphSource, run: &RunArgs) -> Result<ExperimentConfig, Error> {
    if run.workers > 0 {
        // ignore the error if a pool already exists (tests call run()
        // more than once in-process)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(run.workers)
            .build_global();
    }
    let mut cfg = ExperimentConfig::new(source, run.seed);
    cfg.replicates = run.replicates as usize;
    cfg.train_fraction = run.train_frac;
    cfg.n_proportions = run.n_props;
    cfg.xmin_mode = run.xmin;
    cfg.timing = run.timing;
    Ok(cfg)
}

fn run_report(report: ExperimentReport, out: &std::path::Path) -> Result<(), Error> {
    report.write_csv(out)?;
    println!("{} records -> {}", report.records.len(), out.display());
    Ok(())
}

fn write_text(text: &str, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(text.as_bytes())?;
            f.flush()?;
        }
        None => print!("{text}"),
    }
    Ok(())
}
