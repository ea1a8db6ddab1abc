//! Seeded experiment pipelines. Every random choice is drawn from ChaCha8
//! generators derived from the configured seed, so a configuration fully
//! determines its report apart from `runtime_ms`.

use std::path::PathBuf;
use std::time::Instant;

use matfree::boolfn::regularity_decompose;
use matfree::families::{classify_sigma, verify_characterization};
use matfree::matroid::{
    canonical_function, cog_endpoint_criterion, cog_partition_criterion, cographic_from_graph, complexity,
    connected_graphs, find_homomorphism, graphic_from_graph, Complexity, HOMOMORPHISM_DEFAULT_BUDGET,
};
use matfree::tester::{
    count_patterns, find_pattern, is_free, min_repair_distance, pattern_hitting_number, run_tester, von_neumann_gap,
    PatternSpec,
};
use matfree::{BinaryMatroid, BooleanFunction, Graph, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::format::{parse_function, parse_matroid, serialize_function};
use crate::report::{exact, ratio, sampled, Report, Series};
use crate::{read_file, LabError};

const DEFAULT_HITTING_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ComplexitySweep,
    HierarchyCycles,
    HierarchyCliques,
    Characterize,
    TesterCalibration,
    VonNeumann,
    RegularitySearch,
    Distance,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ComplexitySweep => "complexity-sweep",
            ExperimentKind::HierarchyCycles => "hierarchy-cycles",
            ExperimentKind::HierarchyCliques => "hierarchy-cliques",
            ExperimentKind::Characterize => "characterize",
            ExperimentKind::TesterCalibration => "tester-calibration",
            ExperimentKind::VonNeumann => "von-neumann",
            ExperimentKind::RegularitySearch => "regularity-search",
            ExperimentKind::Distance => "distance",
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        serde_json::from_value(Value::String(s.to_string()))
            .map_err(|_| LabError::Config(format!("unknown experiment {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    /// A rational such as `"1/4"`.
    #[serde(default)]
    pub eps: Option<String>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub budget: Option<u64>,
    /// Pattern string; defaults to all ones.
    #[serde(default)]
    pub sigma: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            inputs: Vec::new(),
            n: None,
            k: None,
            eps: None,
            samples: None,
            trials: None,
            budget: None,
            sigma: None,
            seed: 0,
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, LabError> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    fn eps(&self, default: Rational) -> Result<Rational, LabError> {
        match &self.eps {
            None => Ok(default),
            Some(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, LabError> {
    let bad = || LabError::Config(format!("expected a rational like 1/4, found {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1u64),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), LabError> {
    if cond {
        Ok(())
    } else {
        Err(LabError::Config(msg()))
    }
}

fn cycle(k: usize) -> Result<BinaryMatroid, LabError> {
    Ok(graphic_from_graph(&Graph::cycle(k)?)?)
}

fn clique(v: usize) -> Result<BinaryMatroid, LabError> {
    Ok(graphic_from_graph(&Graph::complete(v)?)?)
}

fn biased_function(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Result<BooleanFunction, LabError> {
    let ones: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen_bool(p)).collect();
    Ok(BooleanFunction::from_ones(n, &ones)?)
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Generator for one named stage of an experiment.
fn stage_rng(seed: u64, stage: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage);
    rng
}

/// Checks parameters against the library's limits before any heavy work.
fn validate(cfg: &ExperimentConfig) -> Result<(), LabError> {
    use ExperimentKind::*;
    match cfg.experiment {
        ComplexitySweep => {
            let v = cfg.n.unwrap_or(5);
            check((2..=6).contains(&v), || format!("complexity-sweep needs 2 <= n <= 6 vertices, got {v}"))?;
        }
        HierarchyCycles => {
            let k = cfg.k.unwrap_or(3);
            let n = cfg.n.unwrap_or(k + 4);
            check(k >= 3 && k % 2 == 1, || format!("hierarchy-cycles needs an odd k >= 3, got {k}"))?;
            check(n >= k + 2, || format!("hierarchy-cycles needs n >= k + 2, got n={n}"))?;
            check(n * (k + 1) <= 30, || format!("search over {} bits exceeds 30", n * (k + 1)))?;
            check((k + 2) << (n - k - 2) <= 128, || "canonical function has more than 128 ones".into())?;
        }
        HierarchyCliques => {
            let n = cfg.n.unwrap_or(5);
            check((3..=7).contains(&n), || format!("hierarchy-cliques needs 3 <= n <= 7, got {n}"))?;
        }
        Characterize => {
            let k = cfg.k.unwrap_or(4);
            let n = cfg.n.unwrap_or(3);
            check(k >= 3, || format!("characterize needs k >= 3, got {k}"))?;
            let cap = if k <= 4 { 4 } else { 3 };
            check(n <= cap, || format!("characterize at k={k} supports n <= {cap}, got {n}"))?;
        }
        TesterCalibration => {
            let k = cfg.k.unwrap_or(3);
            let n = cfg.n.unwrap_or(4);
            check(k >= 3, || format!("tester-calibration needs k >= 3, got {k}"))?;
            check((1..=4).contains(&n), || format!("exact distances need 1 <= n <= 4, got {n}"))?;
            check(n * (k - 1) <= 30, || "search space too large".into())?;
            check(cfg.samples.unwrap_or(1) > 0, || "samples must be positive".into())?;
        }
        VonNeumann => {
            let n = cfg.n.unwrap_or(6);
            check((1..=8).contains(&n), || format!("von-neumann needs 1 <= n <= 8, got {n}"))?;
        }
        RegularitySearch => {
            let n = cfg.n.unwrap_or(6);
            check((1..=matfree::boolfn::REGULARITY_MAX_VARS).contains(&n), || {
                format!("regularity-search needs 1 <= n <= {}, got {n}", matfree::boolfn::REGULARITY_MAX_VARS)
            })?;
            check(cfg.k.unwrap_or(n) <= n, || "max codimension exceeds n".into())?;
            cfg.eps(Rational::new(1, 8))?;
        }
        Distance => {
            check(cfg.inputs.is_empty() || cfg.inputs.len() == 2, || {
                "distance takes a function file and a matroid file".into()
            })?;
        }
    }
    if let Some(s) = &cfg.sigma {
        PatternSpec::parse(s)?;
    }
    Ok(())
}

/// Runs the configured pipeline. A budget or resource error part-way through
/// yields a report flagged `partial` instead of an error.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, LabError> {
    validate(cfg)?;
    let start = Instant::now();
    let mut report = Report::new(cfg.experiment.name(), cfg.seed);
    let outcome = match cfg.experiment {
        ExperimentKind::ComplexitySweep => complexity_sweep(cfg, &mut report),
        ExperimentKind::HierarchyCycles => hierarchy_cycles(cfg, &mut report),
        ExperimentKind::HierarchyCliques => hierarchy_cliques(cfg, &mut report),
        ExperimentKind::Characterize => characterize(cfg, &mut report),
        ExperimentKind::TesterCalibration => tester_calibration(cfg, &mut report),
        ExperimentKind::VonNeumann => von_neumann(cfg, &mut report),
        ExperimentKind::RegularitySearch => regularity_search(cfg, &mut report),
        ExperimentKind::Distance => distance(cfg, &mut report),
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok(()) => Ok(report),
        Err(e @ LabError::Core(matfree::Error::BudgetExceeded { .. } | matfree::Error::ResourceLimit { .. })) => {
            report.partial = true;
            report.error = Some(e.to_string());
            Ok(report)
        }
        Err(e) => Err(e),
    }
}

fn complexity_label(c: Complexity) -> String {
    match c {
        Complexity::Exactly(c) => c.to_string(),
        Complexity::ExceedsCap(cap) => format!(">{cap}"),
    }
}

fn complexity_sweep(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let max_v = cfg.n.unwrap_or(5);
    r.param("max_vertices", max_v);
    for path in &cfg.inputs {
        let m = parse_matroid(&read_file(path)?)?;
        let c = complexity(&m, cfg.k.unwrap_or(1))?;
        r.result(&format!("input:{}", path.display()), exact(complexity_label(c)));
    }
    let k5 = complexity(&cographic_from_graph(&Graph::complete(5)?)?, 1)?;
    let k33 = complexity(&cographic_from_graph(&Graph::complete_bipartite(3, 3)?)?, 1)?;
    r.result("k5_cographic_complexity", exact(complexity_label(k5)));
    r.result("k33_cographic_complexity", exact(complexity_label(k33)));

    let mut series = Series::new(&["vertices", "edges", "graphic", "cographic", "partition_criterion", "endpoint_criterion"]);
    let (mut graphs, mut graphic_le1, mut cographic_1, mut partition_agree, mut endpoint_agree) = (0u64, 0u64, 0u64, 0u64, 0u64);
    for v in 2..=max_v {
        for g in connected_graphs(v)? {
            graphs += 1;
            let gc = complexity(&graphic_from_graph(&g)?, 1)?;
            let cc = complexity(&cographic_from_graph(&g)?, 1)?;
            let c1 = matches!(cc, Complexity::Exactly(c) if c <= 1);
            let partition = (0..g.edge_count()).try_fold(true, |acc, e| cog_partition_criterion(&g, e).map(|b| acc && b))?;
            let endpoint = (0..g.edge_count()).try_fold(true, |acc, e| cog_endpoint_criterion(&g, e).map(|b| acc && b))?;
            graphic_le1 += matches!(gc, Complexity::Exactly(c) if c <= 1) as u64;
            cographic_1 += c1 as u64;
            partition_agree += (partition == c1) as u64;
            endpoint_agree += (endpoint == c1) as u64;
            series.push(vec![
                json!(v),
                json!(g.edge_count()),
                json!(complexity_label(gc)),
                json!(complexity_label(cc)),
                json!(partition),
                json!(endpoint),
            ]);
        }
    }
    r.result("graphs", exact(graphs));
    r.result("graphic_complexity_at_most_one", exact(graphic_le1));
    r.result("cographic_complexity_at_most_one", exact(cographic_1));
    r.result("partition_criterion_agreements", exact(partition_agree));
    r.result("endpoint_criterion_agreements", exact(endpoint_agree));
    r.series = Some(series);
    Ok(())
}

fn hierarchy_cycles(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let k = cfg.k.unwrap_or(3);
    let n = cfg.n.unwrap_or(k + 4);
    let budget = cfg.budget.unwrap_or(DEFAULT_HITTING_BUDGET);
    r.param("k", k).param("n", n).param("budget", budget);
    let long = cycle(k + 2)?;
    let short = cycle(k)?;
    let f = canonical_function(&long, n)?;
    let contains = find_pattern(&f, &long, &PatternSpec::all_ones(k + 2)?)?.is_some();
    r.result(&format!("c{}_canonical_contains_c{}", k + 2, k + 2), contains);
    let free = is_free(&f, &short, &PatternSpec::all_ones(k)?)?;
    r.result(&format!("c{k}_free"), free);
    let bound = 1u64 << (n - long.m());
    r.result("hitting_bound", exact(bound));
    let hitting = pattern_hitting_number(&f, &long, budget)?;
    r.result("hitting_number", exact(hitting.size as u64));
    r.result("distinct_instances", exact(hitting.distinct_instances as u64));
    r.result("distance_lower_bound", exact(ratio(Rational::new(hitting.size as u64, f.size()))));
    Ok(())
}

fn hierarchy_cliques(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let n = cfg.n.unwrap_or(5);
    let budget = cfg.budget.unwrap_or(HOMOMORPHISM_DEFAULT_BUDGET);
    r.param("n", n).param("budget", budget);
    let k5 = clique(5)?;
    let k3 = clique(3)?;
    let hom = find_homomorphism(&k5, &k3, budget)?;
    r.result("hom_k5_to_k3", match hom {
        Some(h) => json!(h.assignment),
        None => json!("none"),
    });
    let k4_hom = find_homomorphism(&clique(4)?, &k3, budget)?;
    r.result("hom_k4_to_k3", match k4_hom {
        Some(h) => json!(h.assignment),
        None => json!("none"),
    });
    let f = canonical_function(&k3, n)?;
    let counted = count_patterns(&f, &k5, &PatternSpec::all_ones(k5.k())?)?;
    r.result("canonical_k3_is_k5_free", counted.span_count == 0);
    r.result("k5_instances", exact(counted.span_count));
    r.result("search_rank", exact(counted.rank as u64));
    Ok(())
}

fn characterize(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let k = cfg.k.unwrap_or(4);
    let n = cfg.n.unwrap_or(3);
    r.param("k", k).param("n", n);
    let report = verify_characterization(n, k)?;
    r.result("sigmas", exact(report.checks.len() as u64));
    r.result("mismatches", exact(report.mismatch_count() as u64));
    r.result("containment_failures", exact(report.containment_failures() as u64));
    let mut series = Series::new(&["sigma", "family", "free_count", "family_count", "mismatches"]);
    let mut counterexamples = Vec::new();
    for c in &report.checks {
        series.push(vec![
            json!(c.sigma.to_string()),
            json!(classify_sigma(k, &c.sigma)?.name()),
            json!(c.free_count),
            json!(c.family_count),
            json!(c.mismatches.len()),
        ]);
        for m in &c.mismatches {
            counterexamples.push(json!({
                "sigma": c.sigma.to_string(),
                "function": serialize_function(&m.function),
                "free": m.free,
            }));
        }
        for cont in &c.containments {
            for f in &cont.counterexamples {
                counterexamples.push(json!({
                    "sigma": format!("{}{}", c.sigma, cont.suffix),
                    "function": serialize_function(f),
                    "containment": true,
                }));
            }
        }
    }
    r.result("counterexamples", Value::Array(counterexamples));
    r.series = Some(series);
    Ok(())
}

fn tester_calibration(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let k = cfg.k.unwrap_or(3);
    let n = cfg.n.unwrap_or(4);
    let samples = cfg.samples.unwrap_or(20_000);
    let trials = cfg.trials.unwrap_or(16);
    r.param("k", k).param("n", n).param("samples", samples).param("trials", trials);
    let m = cycle(k)?;
    let sigma = PatternSpec::all_ones(k)?;
    let mut rng = stage_rng(cfg.seed, 0);
    let mut rows = Vec::new();
    let mut free_rejections = 0u64;
    let mut max_z: f64 = 0.0;
    for trial in 0..trials {
        let p = (trial + 1) as f64 / (trials + 1) as f64;
        let f = biased_function(&mut rng, n, p)?;
        let tester_seed: u64 = rng.gen();
        let repair = min_repair_distance(&f, &m, &sigma)?;
        let density = count_patterns(&f, &m, &sigma)?.density();
        let out = run_tester(&f, &m, &sigma, samples, tester_seed)?;
        let rate = out.rejections as f64 / samples as f64;
        let pd = to_f64(density);
        let sd = (pd * (1.0 - pd) / samples as f64).sqrt();
        if sd > 0.0 {
            max_z = max_z.max((rate - pd).abs() / sd);
        } else if out.rejections as f64 != pd * samples as f64 {
            max_z = f64::INFINITY;
        }
        free_rejections += run_tester(&repair.witness, &m, &sigma, samples, tester_seed)?.rejections;
        rows.push((repair.distance, out.rate, density, trial));
    }
    rows.sort();
    let mut series = Series::new(&["distance_bucket", "empirical_rate", "exact_density"]);
    for (d, rate, density, _) in rows {
        series.push(vec![ratio(d), sampled(format!("{:.6}", to_f64(rate))), exact(ratio(density))]);
    }
    r.result("free_rejections", sampled(free_rejections));
    r.result("max_abs_z", sampled(format!("{max_z:.3}")));
    r.series = Some(series);
    Ok(())
}

fn von_neumann(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let n = cfg.n.unwrap_or(6);
    let trials = cfg.trials.unwrap_or(100);
    r.param("n", n).param("trials", trials);
    let matroids = [("C3", cycle(3)?), ("C4", cycle(4)?), ("K4", clique(4)?)];
    let mut series = Series::new(&["matroid", "trial", "lhs", "rhs", "holds"]);
    for (stage, (name, m)) in matroids.iter().enumerate() {
        let mut rng = stage_rng(cfg.seed, stage as u64);
        let mut violations = 0u64;
        let mut min_slack = f64::INFINITY;
        for trial in 0..trials {
            let p = rng.gen_range(0.05..0.95);
            let fs = (0..m.k()).map(|_| biased_function(&mut rng, n, p)).collect::<Result<Vec<_>, _>>()?;
            let gap = von_neumann_gap(&fs, m)?;
            violations += (!gap.holds) as u64;
            min_slack = min_slack.min(gap.rhs - to_f64(gap.lhs));
            series.push(vec![
                json!(name),
                json!(trial),
                exact(ratio(gap.lhs)),
                json!(format!("{:.12}", gap.rhs)),
                json!(gap.holds),
            ]);
        }
        r.result(&format!("{name}_violations"), exact(violations));
        r.result(&format!("{name}_min_slack"), json!(format!("{min_slack:.12}")));
    }
    r.series = Some(series);
    Ok(())
}

fn regularity_search(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let n = cfg.n.unwrap_or(6);
    let eps = cfg.eps(Rational::new(1, 8))?;
    let max_codim = cfg.k.unwrap_or(n);
    let trials = cfg.trials.unwrap_or(10);
    r.param("n", n).param("eps", ratio(eps)).param("max_codim", max_codim).param("trials", trials);
    let mut rng = stage_rng(cfg.seed, 0);
    let mut series = Series::new(&["trial", "density", "codim", "uniform_fraction"]);
    let mut worst = 0;
    for trial in 0..trials {
        let p = rng.gen_range(0.05..0.95);
        let f = biased_function(&mut rng, n, p)?;
        let reg = regularity_decompose(&f, eps, max_codim)?;
        worst = worst.max(reg.subspace.codim());
        series.push(vec![
            json!(trial),
            ratio(f.density(true)),
            json!(reg.subspace.codim()),
            ratio(reg.uniform_fraction),
        ]);
    }
    r.result("max_codim_found", exact(worst as u64));
    r.series = Some(series);
    Ok(())
}

fn distance(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), LabError> {
    let (f, m) = if cfg.inputs.len() == 2 {
        (parse_function(&read_file(&cfg.inputs[0])?)?, parse_matroid(&read_file(&cfg.inputs[1])?)?)
    } else {
        let m = cycle(3)?;
        let n = cfg.n.unwrap_or(4);
        (canonical_function(&m, n)?, m)
    };
    let sigma = match &cfg.sigma {
        Some(s) => PatternSpec::parse(s)?,
        None => PatternSpec::all_ones(m.k())?,
    };
    r.param("n", f.n()).param("sigma", sigma.to_string()).param("ambient_dim", m.m());
    let repair = min_repair_distance(&f, &m, &sigma)?;
    r.result("flips", exact(repair.flips));
    r.result("distance", exact(ratio(repair.distance)));
    r.result("witness", serialize_function(&repair.witness));
    if sigma.is_all_ones() {
        let hitting = pattern_hitting_number(&f, &m, cfg.budget.unwrap_or(DEFAULT_HITTING_BUDGET))?;
        r.result("hitting_number", exact(hitting.size as u64));
    }
    Ok(())
}
