use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matfree::boolfn::{regularity_decompose, wht};
use matfree::matroid::{
    canonical_function, circuits, cographic_from_graph, complexity, find_homomorphism, graphic_from_graph,
    odd_girth, Complexity, HOMOMORPHISM_DEFAULT_BUDGET,
};
use matfree::tester::{count_patterns, find_pattern, min_repair_distance, pattern_hitting_number, run_tester};
use matfree::{BinaryMatroid, BooleanFunction, PatternSpec, Rational};
use matfree_lab::experiment::parse_rational;
use matfree_lab::format::{parse_function, parse_graph, parse_matroid, serialize_function, serialize_matroid};
use matfree_lab::report::{exact, ratio, sampled, Report};
use matfree_lab::{emit_plot_data, exit, read_file, run_experiment, write_file, ExperimentConfig, LabError};
use serde_json::json;

const WORKERS_ENV: &str = "MATFREE_WORKERS";

#[derive(Parser)]
#[command(name = "matfree", version, about = "Matroid-freeness of Boolean functions: search, counting and testing")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Target {
    function: PathBuf,
    matroid: PathBuf,
    /// Pattern, one character per matroid element; defaults to all ones.
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Hierarchy {
    Cycles,
    Cliques,
}

#[derive(Subcommand)]
enum Command {
    /// Complexity of a matroid, up to a cap.
    Complexity {
        matroid: PathBuf,
        #[arg(long, default_value_t = 1)]
        cap: usize,
    },
    /// Graphic matroid of a graph file.
    Graphic { graph: PathBuf },
    /// Cographic matroid of a graph file.
    Cographic { graph: PathBuf },
    Circuits { matroid: PathBuf },
    Oddgirth { matroid: PathBuf },
    /// Search for a homomorphism between two matroids.
    Hom { source: PathBuf, target: PathBuf },
    /// Canonical function of a matroid on n variables.
    Canonical {
        matroid: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Look for a pattern instance; with --assert, finding one exits with 2.
    Free {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        assert: bool,
    },
    /// Exact count of pattern-showing assignments.
    Count {
        #[command(flatten)]
        target: Target,
    },
    /// Run the randomized tester.
    Test {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Exact distance to the free functions.
    Distance {
        #[command(flatten)]
        target: Target,
    },
    /// Walsh-Hadamard spectrum.
    Fourier { function: PathBuf },
    /// Smallest-codimension regular subspace.
    Regularity {
        function: PathBuf,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long)]
        max_codim: Option<usize>,
    },
    /// Compare free sets with the family table.
    Characterize {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Separation experiments between cycle or clique properties.
    Hierarchy {
        #[arg(value_enum)]
        kind: Hierarchy,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run an experiment from a JSON configuration.
    Experiment { config: PathBuf },
    /// Plot data from a saved report.
    Plot { report: PathBuf },
}

fn emit(common: &Common, text: &str) -> Result<(), LabError> {
    match &common.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_target(t: &Target) -> Result<(BooleanFunction, BinaryMatroid, PatternSpec), LabError> {
    let f = load_function(&t.function)?;
    let m = load_matroid(&t.matroid)?;
    let sigma = match &t.sigma {
        Some(s) => PatternSpec::parse(s)?,
        None => PatternSpec::all_ones(m.k())?,
    };
    Ok((f, m, sigma))
}

fn load_function(path: &Path) -> Result<BooleanFunction, LabError> {
    Ok(parse_function(&read_file(path)?)?)
}

fn load_matroid(path: &Path) -> Result<BinaryMatroid, LabError> {
    Ok(parse_matroid(&read_file(path)?)?)
}

fn complexity_value(c: Complexity) -> serde_json::Value {
    match c {
        Complexity::Exactly(c) => exact(c as u64),
        Complexity::ExceedsCap(cap) => json!(format!(">{cap}")),
    }
}

/// Runs one subcommand, returning the exit code for a completed run.
fn run(command: Command, common: &Common) -> Result<i32, LabError> {
    let seed = common.seed.unwrap_or(0);
    let report = |name: &str| Report::new(name, seed);
    let mut code = exit::SUCCESS;
    let r = match command {
        Command::Complexity { matroid, cap } => {
            let m = load_matroid(&matroid)?;
            let mut r = report("complexity");
            r.param("cap", cap).result("complexity", complexity_value(complexity(&m, cap)?));
            r
        }
        Command::Graphic { graph } => {
            let g = parse_graph(&read_file(&graph)?)?;
            emit(common, &serialize_matroid(&graphic_from_graph(&g)?))?;
            return Ok(code);
        }
        Command::Cographic { graph } => {
            let g = parse_graph(&read_file(&graph)?)?;
            emit(common, &serialize_matroid(&cographic_from_graph(&g)?))?;
            return Ok(code);
        }
        Command::Circuits { matroid } => {
            let m = load_matroid(&matroid)?;
            let cs = circuits(&m)?;
            let mut r = report("circuits");
            r.result("count", exact(cs.len() as u64)).result("circuits", json!(cs));
            r
        }
        Command::Oddgirth { matroid } => {
            let m = load_matroid(&matroid)?;
            let mut r = report("oddgirth");
            r.result("odd_girth", odd_girth(&m)?.map_or(json!("none"), |g| exact(g as u64)));
            r
        }
        Command::Hom { source, target } => {
            let (s, t) = (load_matroid(&source)?, load_matroid(&target)?);
            let budget = common.budget.unwrap_or(HOMOMORPHISM_DEFAULT_BUDGET);
            let mut r = report("hom");
            r.param("budget", budget);
            r.result("homomorphism", find_homomorphism(&s, &t, budget)?.map_or(json!("none"), |h| json!(h.assignment)));
            r
        }
        Command::Canonical { matroid, n } => {
            let m = load_matroid(&matroid)?;
            emit(common, &serialize_function(&canonical_function(&m, n)?))?;
            return Ok(code);
        }
        Command::Free { target, assert } => {
            let (f, m, sigma) = load_target(&target)?;
            let found = find_pattern(&f, &m, &sigma)?;
            let mut r = report("free");
            r.param("sigma", sigma.to_string()).result("free", found.is_none());
            if let Some(inst) = found {
                let points: Vec<String> = inst.points.iter().map(|p| p.to_string()).collect();
                r.result("witness", json!(points));
                if assert {
                    code = exit::PROPERTY_VIOLATED;
                }
            }
            r
        }
        Command::Count { target } => {
            let (f, m, sigma) = load_target(&target)?;
            let c = count_patterns(&f, &m, &sigma)?;
            let mut r = report("count");
            r.param("sigma", sigma.to_string())
                .result("span_count", exact(c.span_count))
                .result("rank", exact(c.rank as u64))
                .result("density", exact(ratio(c.density())))
                .result("full_map_count", exact(c.full_map_count.to_string()));
            r
        }
        Command::Test { target, samples } => {
            let (f, m, sigma) = load_target(&target)?;
            let out = run_tester(&f, &m, &sigma, samples, seed)?;
            let mut r = report("test");
            r.param("sigma", sigma.to_string())
                .param("samples", samples)
                .result("rejections", sampled(out.rejections))
                .result("rate", sampled(ratio(out.rate)));
            r
        }
        Command::Distance { target } => {
            let (f, m, sigma) = load_target(&target)?;
            let repair = min_repair_distance(&f, &m, &sigma)?;
            let mut r = report("distance");
            r.param("sigma", sigma.to_string())
                .result("flips", exact(repair.flips))
                .result("distance", exact(ratio(repair.distance)))
                .result("witness", serialize_function(&repair.witness));
            if sigma.is_all_ones() {
                let budget = common.budget.unwrap_or(10_000_000);
                r.result("hitting_number", exact(pattern_hitting_number(&f, &m, budget)?.size as u64));
            }
            r
        }
        Command::Fourier { function } => {
            let spectrum = wht(&load_function(&function)?)?;
            let mut r = report("fourier");
            r.result("coefficients", json!(spectrum.coeffs()))
                .result("max_nonzero_abs", exact(spectrum.max_nonzero_abs()));
            r
        }
        Command::Regularity { function, eps, max_codim } => {
            let f = load_function(&function)?;
            let eps: Rational = parse_rational(&eps)?;
            let reg = regularity_decompose(&f, eps, max_codim.unwrap_or(f.n()))?;
            let basis: Vec<String> = reg.subspace.basis().iter().map(|v| v.to_string()).collect();
            let mut r = report("regularity");
            r.param("eps", ratio(eps))
                .result("codim", exact(reg.subspace.codim() as u64))
                .result("basis", json!(basis))
                .result("uniform_fraction", exact(ratio(reg.uniform_fraction)));
            r
        }
        Command::Characterize { n, k } => {
            let mut cfg = ExperimentConfig::new(matfree_lab::ExperimentKind::Characterize);
            cfg.n = Some(n);
            cfg.k = Some(k);
            cfg.seed = seed;
            let r = run_experiment(&cfg)?;
            if r.results.get("mismatches").and_then(|v| v["value"].as_u64()) != Some(0) {
                code = exit::PROPERTY_VIOLATED;
            }
            r
        }
        Command::Hierarchy { kind, n, k } => {
            let mut cfg = ExperimentConfig::new(match kind {
                Hierarchy::Cycles => matfree_lab::ExperimentKind::HierarchyCycles,
                Hierarchy::Cliques => matfree_lab::ExperimentKind::HierarchyCliques,
            });
            cfg.n = n;
            cfg.k = k;
            cfg.budget = common.budget;
            cfg.seed = seed;
            run_experiment(&cfg)?
        }
        Command::Experiment { config } => {
            let mut cfg = ExperimentConfig::from_json(&read_file(&config)?)?;
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            if common.budget.is_some() {
                cfg.budget = common.budget;
            }
            let out = common.out.clone().or(cfg.out.clone());
            let r = run_experiment(&cfg)?;
            match out {
                Some(path) => write_file(&path, &r.to_json())?,
                None => print!("{}", r.to_json()),
            }
            return Ok(if r.partial { exit::BUDGET_EXCEEDED } else { code });
        }
        Command::Plot { report: path } => {
            let r = Report::from_json(&read_file(&path)?)?;
            emit(common, &emit_plot_data(&r)?)?;
            return Ok(code);
        }
    };
    emit(common, &r.to_json())?;
    if r.partial {
        code = exit::BUDGET_EXCEEDED;
    }
    Ok(code)
}

fn configure_workers() -> Result<(), String> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&w| w > 0)
        .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::MALFORMED_INPUT as u8 } else { 0 });
        }
    };
    if let Err(msg) = configure_workers() {
        eprintln!("error: {msg}");
        return ExitCode::from(exit::MALFORMED_INPUT as u8);
    }
    match run(cli.command, &cli.common) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
