//! Command-line front end. Single reports print JSON to stdout; grids and
//! sweeps print CSV to --out (or stdout). Exit code 0 on success, 1 on any
//! validation or numerical error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use lsmcd::certificate::{certify, concentration_margins, expected_matrix_lambda2};
use lsmcd::error::{Error, Result};
use lsmcd::harness::{
    ingest_edge_list, monotone_trend_violations, replicate_appendix_d, run_sweep, score_real,
    write_regime_grid_csv, write_sweep_csv, GridRange, ReplicationConfig, SweepSpec,
};
use lsmcd::mle::brute_force_mle;
use lsmcd::model::{
    generate, read_edge_list, read_labels, write_instance, write_labels, ModelParams,
};
use lsmcd::moments::{closed_form, monte_carlo};
use lsmcd::regimes::{classify, Constants};
use lsmcd::solver::{solve, SolverConfig};

#[derive(Parser)]
#[command(
    name = "lsmcd",
    version,
    about = "Community detection in the latent space model: generation, \
             moments, regime classification, SDP solving, certification, \
             exact MLE, and experiment sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ConstantFlags {
    /// MLE theorem constant c0 (must exceed 12.5)
    #[arg(long = "mle-c0", default_value_t = 13.0)]
    mle_c0: f64,
    /// MLE theorem constant c1
    #[arg(long = "mle-c1", default_value_t = 500.0)]
    mle_c1: f64,
    /// SDP theorem constant c0
    #[arg(long, default_value_t = 1.0)]
    c0: f64,
    /// SDP theorem constant c1 (degree concentration budget)
    #[arg(long, default_value_t = 500.0)]
    c1: f64,
    /// SDP theorem constant c2 (adjacency concentration budget)
    #[arg(long, default_value_t = 500.0)]
    c2: f64,
}

impl From<ConstantFlags> for Constants {
    fn from(f: ConstantFlags) -> Constants {
        Constants {
            mle_c0: f.mle_c0,
            mle_c1: f.mle_c1,
            sdp_c0: f.c0,
            sdp_c1: f.c1,
            sdp_c2: f.c2,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct SolverFlags {
    /// ADMM iteration cap
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Residual threshold for convergence
    #[arg(long = "tol", default_value_t = 1e-6)]
    feas_tol: f64,
    /// Entrywise threshold for declaring the solution exactly rank one
    #[arg(long, default_value_t = 1e-3)]
    round_tol: f64,
    /// Initial ADMM penalty parameter
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
}

impl SolverFlags {
    fn config(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            max_iters: self.max_iters,
            feas_tol: self.feas_tol,
            round_tol: self.round_tol,
            rho: self.rho,
            seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance and write its files
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Mean separation ||mu||
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path prefix; writes <prefix>.json/.edges/.labels/.latents.csv
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the seven closed-form moments (plus Monte-Carlo estimates if
    /// --samples is given) as JSON
    Moments {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        /// Monte-Carlo sample count per moment (omit for closed form only)
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify one parameter point into impossible / MLE / SDP regimes
    Regime {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        #[command(flatten)]
        constants: ConstantFlags,
    },
    /// Regime classification over a (mu, sigma) grid, as CSV
    RegimeGrid {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Mean separation: single value or start:stop:step
        #[arg(long, default_value = "1.0")]
        mu: String,
        /// Noise level: single value or start:stop:step
        #[arg(long, default_value = "0.05:0.5:0.05")]
        sigma: String,
        /// Shorthand setting both ranges at once: "MU_RANGE,SIGMA_RANGE"
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        constants: ConstantFlags,
        /// CSV output path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the SDP relaxation on an edge-list graph
    Solve {
        /// Edge-list file, one "i j" pair per line
        edges: PathBuf,
        /// Ground-truth labels file for accuracy scoring
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Number of nodes (inferred from the edge list if omitted)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverFlags,
        /// Write the rounded labels to this file
        #[arg(long)]
        rounded_out: Option<PathBuf>,
    },
    /// Check the dual certificate for a labeled graph
    Certify {
        /// Edge-list file (omit to certify a freshly generated instance)
        edges: Option<PathBuf>,
        /// Labels file (required with an edge list)
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Number of nodes (inferred from the edge list if omitted)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Eigenvalue tolerance (default 1e-8 * n)
        #[arg(long)]
        eig_tol: Option<f64>,
    },
    /// Exhaustive maximum-likelihood search (n capped at 24)
    Mle {
        /// Edge-list file
        edges: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Restrict the search to balanced labelings
        #[arg(long)]
        balanced: bool,
    },
    /// Monte-Carlo phase diagram: certificate and SDP success rates over a
    /// (mu, sigma) grid, as CSV
    Sweep {
        #[arg(long, default_value_t = 300)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Mean separation: single value or start:stop:step
        #[arg(long, default_value = "1.0")]
        mu: String,
        /// Noise level: single value or start:stop:step
        #[arg(long, default_value = "0.05:0.5:0.05")]
        sigma: String,
        /// Shorthand setting both ranges at once: "MU_RANGE,SIGMA_RANGE"
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials_cert: usize,
        #[arg(long, default_value_t = 10)]
        trials_sdp: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        constants: ConstantFlags,
        #[command(flatten)]
        solver: SolverFlags,
        /// CSV output path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Large-n certificate replication: positive-lambda2 counts per sigma
    #[command(name = "replicate-appendix-d")]
    ReplicateAppendixD {
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Comma-separated sigma values
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.3])]
        sigma: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the SDP per trial (very slow at large n)
        #[arg(long)]
        run_sdp: bool,
    },
    /// Ingest a real edge list with cluster labels, solve, and score
    #[command(name = "score-real")]
    ScoreReal {
        /// Edge-list file
        edges: PathBuf,
        /// Cluster labels file ("node label" pairs or one label per line)
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverFlags,
    },
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn parse_grids(mu: &str, sigma: &str, combined: Option<&str>) -> Result<(GridRange, GridRange)> {
    match combined {
        Some(spec) => {
            let (a, b) = spec.split_once(',').ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "--grid expects 'MU_RANGE,SIGMA_RANGE', got '{spec}'"
                ))
            })?;
            Ok((GridRange::parse(a)?, GridRange::parse(b)?))
        }
        None => Ok((GridRange::parse(mu)?, GridRange::parse(sigma)?)),
    }
}

/// CSV goes to the file when a path is given, to stdout otherwise.
fn with_csv_out<F>(out: Option<&PathBuf>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            n,
            d,
            mu,
            sigma,
            seed,
            out,
        } => {
            let params = ModelParams::new(n, d, mu, sigma)?;
            let instance = generate(&params, seed)?;
            let files = write_instance(&instance, &out)?;
            print_json(&serde_json::json!({
                "params": params,
                "seed": seed,
                "files": {
                    "header": files.header,
                    "edges": files.edges,
                    "labels": files.labels,
                    "latents": files.latents,
                },
                "num_edges": instance.adjacency.iter().filter(|&&v| v == 1).count() / 2,
            }))
        }
        Command::Moments {
            d,
            mu,
            sigma,
            samples,
            seed,
        } => {
            let closed = closed_form(d, mu, sigma)?;
            let mc = match samples {
                // The model requires n >= 4; moment estimation only draws
                // pairs and triples, so any valid n works here.
                Some(s) => Some(monte_carlo(&ModelParams::new(4, d, mu, sigma)?, s, seed)?),
                None => None,
            };
            print_json(&serde_json::json!({
                "closed_form": closed,
                "monte_carlo": mc,
            }))
        }
        Command::Regime {
            n,
            d,
            mu,
            sigma,
            constants,
        } => {
            let moments = closed_form(d, mu, sigma)?;
            let report = classify(n, &moments, &constants.into())?;
            let lambda2 = expected_matrix_lambda2(n, &moments).ok();
            print_json(&serde_json::json!({
                "report": report,
                "summary": report.summary(),
                "expected_matrix_lambda2": lambda2,
            }))
        }
        Command::RegimeGrid {
            n,
            d,
            mu,
            sigma,
            grid,
            constants,
            out,
        } => {
            let (mu_grid, sigma_grid) = parse_grids(&mu, &sigma, grid.as_deref())?;
            with_csv_out(out.as_ref(), |w| {
                write_regime_grid_csv(n, d, &mu_grid, &sigma_grid, &constants.into(), w)
            })
        }
        Command::Solve {
            edges,
            labels,
            n,
            seed,
            solver,
            rounded_out,
        } => {
            let a = read_edge_list(&edges, n)?;
            let solution = solve(&a, &solver.config(seed))?;
            let accuracy = match &labels {
                Some(path) => {
                    let truth = read_labels(path)?;
                    Some(solution.rounded_labels.accuracy_vs(&truth)?)
                }
                None => None,
            };
            if let Some(path) = &rounded_out {
                let mut w = BufWriter::new(File::create(path)?);
                write_labels(&solution.rounded_labels, &mut w)?;
                w.flush()?;
            }
            print_json(&serde_json::json!({
                "n": a.nrows(),
                "objective": solution.objective,
                "iterations": solution.iterations,
                "converged": solution.converged,
                "primal_residual": solution.primal_residual,
                "dual_residual": solution.dual_residual,
                "exact_flag": solution.exact_flag,
                "rounded_labels": solution.rounded_labels.as_slice(),
                "accuracy": accuracy,
            }))
        }
        Command::Certify {
            edges,
            labels,
            n,
            d,
            mu,
            sigma,
            seed,
            eig_tol,
        } => {
            let report = match edges {
                Some(edge_path) => {
                    let labels_path = labels.ok_or_else(|| {
                        Error::InvalidParameter(
                            "certifying an edge list requires --labels".into(),
                        )
                    })?;
                    let a = read_edge_list(&edge_path, n)?;
                    let y = read_labels(&labels_path)?;
                    certify(&a, &y, eig_tol)?
                }
                None => {
                    let (mu, sigma, n) = match (mu, sigma, n) {
                        (Some(mu), Some(sigma), Some(n)) => (mu, sigma, n),
                        _ => {
                            return Err(Error::InvalidParameter(
                                "without an edge list, --n, --mu, and --sigma are required \
                                 to generate an instance"
                                    .into(),
                            ))
                        }
                    };
                    let params = ModelParams::new(n, d, mu, sigma)?;
                    let instance = generate(&params, seed)?;
                    let mut report = certify(&instance.adjacency, &instance.labels, eig_tol)?;
                    let moments = closed_form(d, mu, sigma)?;
                    report.margins = concentration_margins(
                        &instance.adjacency,
                        Some(&instance.latents),
                        &params.kernel,
                        &instance.labels,
                        &moments,
                    )?;
                    report
                }
            };
            print_json(&report)
        }
        Command::Mle { edges, n, balanced } => {
            let a = read_edge_list(&edges, n)?;
            let result = brute_force_mle(&a, balanced)?;
            print_json(&result)
        }
        Command::Sweep {
            n,
            d,
            mu,
            sigma,
            grid,
            trials_cert,
            trials_sdp,
            seed,
            constants,
            solver,
            out,
        } => {
            let (mu_grid, sigma_grid) = parse_grids(&mu, &sigma, grid.as_deref())?;
            let spec = SweepSpec {
                n,
                d,
                mu_grid,
                sigma_grid,
                trials_cert,
                trials_sdp,
                seed,
                constants: constants.into(),
                solver: solver.config(seed),
            };
            let cells = run_sweep(&spec)?;
            // Per-mu trend report on stderr; the CSV stays pure data.
            for mu in spec.mu_grid.values() {
                let points: Vec<(usize, usize)> = cells
                    .iter()
                    .filter(|c| c.mu_norm == mu)
                    .map(|c| (c.sdp_successes, c.trials_sdp))
                    .collect();
                for v in monotone_trend_violations(&points) {
                    eprintln!(
                        "trend: at mu={mu}, SDP success rises from sigma index {} to {} \
                         (z = {:.2})",
                        v.earlier, v.later, v.z
                    );
                }
            }
            with_csv_out(out.as_ref(), |w| write_sweep_csv(&cells, w))
        }
        Command::ReplicateAppendixD {
            n,
            d,
            mu,
            sigma,
            trials,
            seed,
            run_sdp,
        } => {
            let config = ReplicationConfig {
                n,
                d,
                mu_norm: mu,
                sigmas: sigma,
                trials,
                seed,
                run_sdp,
            };
            let conditions = replicate_appendix_d(&config)?;
            print_json(&conditions)
        }
        Command::ScoreReal {
            edges,
            labels,
            seed,
            solver,
        } => {
            let graph = ingest_edge_list(&edges, Some(&labels))?;
            let result = score_real(&graph, &solver.config(seed))?;
            print_json(&serde_json::json!({
                "result": result,
                "ingest": {
                    "num_raw_nodes": graph.num_raw_nodes,
                    "dropped_self_loops": graph.dropped_self_loops,
                    "duplicate_edges": graph.duplicate_edges,
                    "dropped_edges": graph.dropped_edges,
                },
            }))
        }
    }
}
