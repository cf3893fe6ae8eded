//! Library surface of the command-line tool: configuration handling,
//! deterministic run orchestration, and result persistence. The binary in
//! `main.rs` is a thin argument parser over these functions.

pub mod config;
pub mod output;

use anyhow::{anyhow, Context, Result};
use config::RunConfig;
use serde::Serialize;
use std::path::Path;
use sweepdec::complex::{json as cjson, Chain};
use sweepdec::lattices::{self, Lattice, LatticeSpec};
use sweepdec::montecarlo::{
    self, estimate_curve, CurvePlan, FailureCurve, MeasNoise, SustainableFit, ThresholdEstimate,
};
use sweepdec::sweep::{Rule, Ruleset, SweepConfig};
use sweepdec::verify;

/// Build the global worker pool. Precedence: explicit argument, then the
/// SWEEPDEC_THREADS environment variable, then one worker per core.
pub fn init_parallelism(threads: Option<usize>) -> Result<()> {
    let n = match threads {
        Some(n) => Some(n),
        None => std::env::var("SWEEPDEC_THREADS")
            .ok()
            .map(|v| v.parse::<usize>())
            .transpose()
            .context("SWEEPDEC_THREADS must be an integer")?,
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .ok();
    }
    Ok(())
}

pub fn build_lattice(spec: &LatticeSpec) -> Result<Lattice> {
    lattices::build(spec).map_err(|e| anyhow!("lattice build failed: {e}"))
}

/// `lattice build`: construct and validate, then export the complex.
pub fn cmd_lattice_build(spec: &LatticeSpec, out: &Path) -> Result<()> {
    let lat = build_lattice(spec)?;
    lat.complex
        .validate()
        .map_err(|e| anyhow!("built complex failed validation: {e}"))?;
    let doc = cjson::export(&lat.complex, Some(spec.clone()));
    let body = serde_json::to_string(&doc)?;
    output::write_with_meta(out, &body, spec, &spec_digest(spec))?;
    Ok(())
}

fn spec_digest<T: Serialize>(value: &T) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_string(value).expect("serializable").as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Load a lattice from an exported complex document: rebuild from the
/// embedded spec and verify the file matches the rebuilt complex.
pub fn load_lattice(path: &Path) -> Result<Lattice> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read lattice file {}", path.display()))?;
    let doc: cjson::ComplexDoc = serde_json::from_str(&text).context("lattice file schema")?;
    let spec = doc
        .lattice
        .clone()
        .ok_or_else(|| anyhow!("lattice file carries no builder spec; cannot decode with it"))?;
    let lat = build_lattice(&spec)?;
    let d = lat.complex.dimension();
    let counts: Vec<u32> = (0..=d).map(|k| lat.complex.ncells(k)).collect();
    if counts != doc.cell_counts {
        anyhow::bail!(
            "lattice file does not match its spec (cell counts {:?} vs {:?})",
            doc.cell_counts,
            counts
        );
    }
    Ok(lat)
}

pub fn read_cell_list(path: &Path, lat: &Lattice, dim: u8) -> Result<Chain> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let doc: output::CellListDoc = serde_json::from_str(&text).context("cell list schema")?;
    if doc.dim != dim {
        anyhow::bail!("expected {dim}-cells, file carries dimension {}", doc.dim);
    }
    Chain::from_cells(&lat.complex, dim, doc.cells).map_err(|e| anyhow!("invalid cell list: {e}"))
}

/// `sweep trace`.
pub fn cmd_sweep_trace(
    lattice_file: &Path,
    error_file: &Path,
    rule: Rule,
    max_steps: u32,
    out: Option<&Path>,
) -> Result<String> {
    let lat = load_lattice(lattice_file)?;
    let eps = read_cell_list(error_file, &lat, lat.k())?;
    let ruleset = Ruleset::new(&lat, SweepConfig::new(rule))
        .map_err(|e| anyhow!("ruleset: {e}"))?;
    let sigma = lat.complex.boundary(&eps).unwrap();
    let doc = sweepdec::sweep::trace(&ruleset, &sigma, max_steps);
    let body = serde_json::to_string(&doc)?;
    if let Some(out) = out {
        output::write_with_meta(out, &body, &doc.rule, &spec_digest(&lat.spec))?;
    }
    Ok(body)
}

/// `decode`.
pub fn cmd_decode(
    lattice_file: &Path,
    syndrome_file: &Path,
    rule: Rule,
    t_max: Option<u32>,
    out: Option<&Path>,
) -> Result<String> {
    let lat = load_lattice(lattice_file)?;
    let sigma = read_cell_list(syndrome_file, &lat, lat.k() - 1)?;
    let ruleset = Ruleset::new(&lat, SweepConfig::new(rule))
        .map_err(|e| anyhow!("ruleset: {e}"))?;
    let t_max = t_max.unwrap_or_else(|| sweepdec::decoder::default_t_max(&lat));
    let outcome = sweepdec::decoder::decode(&lat, &ruleset, &sigma, t_max);
    let body = serde_json::to_string(&outcome)?;
    if let Some(out) = out {
        output::write_with_meta(out, &body, &lat.spec, &spec_digest(&lat.spec))?;
    }
    Ok(body)
}

/// Shared engine of `memory run` and `threshold scan`: estimate the failure
/// curves named by the configuration.
pub fn run_scan(cfg: &RunConfig) -> Result<Vec<FailureCurve>> {
    cfg.validate()?;
    let sizes = cfg.lattice.sizes().map_err(|e| anyhow!(e))?;
    let series = cfg.plan.series().map_err(|e| anyhow!(e))?;
    let sweep_cfg = cfg.sweep.config();
    let mut curves = Vec::new();
    for &l in &sizes {
        let lat = build_lattice(&cfg.lattice.spec(l))?;
        let ruleset = Ruleset::new(&lat, sweep_cfg.clone())
            .map_err(|e| anyhow!("ruleset: {e}"))?;
        for s in &series {
            let plan = CurvePlan {
                p_grid: s.p_grid.clone(),
                n_cyc: s.n_cyc,
                trials: s.trials.unwrap_or(cfg.plan.trials),
                meas: s
                    .measurement
                    .or(cfg.plan.measurement)
                    .unwrap_or(MeasNoise::Equal),
                sweeps_per_cycle: cfg.plan.sweeps_per_cycle,
                master_seed: cfg.plan.seed,
                confidence: cfg.plan.confidence,
            };
            curves.push(estimate_curve(&lat, &ruleset, &plan).map_err(|e| anyhow!(e))?);
        }
    }
    Ok(curves)
}

/// `memory run` / `threshold scan`.
pub fn cmd_scan(
    config_path: &Path,
    trials_override: Option<u64>,
    seed_override: Option<u64>,
    out: &Path,
) -> Result<()> {
    let mut cfg = RunConfig::load(config_path)?;
    if let Some(t) = trials_override {
        cfg.plan.trials = t;
        for s in cfg.plan.series.iter_mut() {
            s.trials = None;
        }
    }
    if let Some(s) = seed_override {
        cfg.plan.seed = s;
    }
    cfg.validate()?;
    let digest = cfg.digest();
    let curves = run_scan(&cfg)?;
    let body = output::curves_to_csv(&curves);
    output::write_with_meta(out, &body, &cfg, &digest)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ThresholdFitDoc {
    pub schema_version: u32,
    pub estimates: Vec<(u32, ThresholdEstimate)>,
}

/// `threshold fit`: group curves by cycle count and fit each group.
pub fn cmd_threshold_fit(
    input: &Path,
    out: &Path,
    window: Option<(f64, f64)>,
    thresholds_out: Option<&Path>,
) -> Result<String> {
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let curves = output::curves_from_csv(&text)?;
    if curves.is_empty() {
        anyhow::bail!("no curves in {}", input.display());
    }
    let mut n_cycs: Vec<u32> = curves.iter().map(|c| c.n_cyc).collect();
    n_cycs.sort_unstable();
    n_cycs.dedup();
    let mut estimates = Vec::new();
    for n in n_cycs {
        let group: Vec<FailureCurve> = curves
            .iter()
            .filter(|c| c.n_cyc == n)
            .cloned()
            .collect();
        let est = montecarlo::find_threshold(&group, window)
            .map_err(|e| anyhow!("fit for n_cyc = {n}: {e}"))?;
        estimates.push((n, est));
    }
    let doc = ThresholdFitDoc {
        schema_version: 1,
        estimates,
    };
    let body = serde_json::to_string_pretty(&doc)?;
    output::write_with_meta(out, &body, &input.display().to_string(), &spec_digest(&text))?;
    if let Some(tout) = thresholds_out {
        let rows: Vec<(u32, f64, f64)> = doc
            .estimates
            .iter()
            .map(|(n, e)| (*n, e.p_th, e.p_th_err))
            .collect();
        let tbody = output::thresholds_to_csv(&rows);
        output::write_with_meta(tout, &tbody, &input.display().to_string(), &spec_digest(&text))?;
    }
    Ok(body)
}

/// `sustainable fit`.
pub fn cmd_sustainable_fit(input: &Path, out: &Path, cofit_p_th1: bool) -> Result<String> {
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let points = output::thresholds_from_csv(&text)?;
    let fit: SustainableFit = montecarlo::fit_sustainable(&points, !cofit_p_th1)
        .map_err(|e| anyhow!("sustainable fit: {e}"))?;
    let body = serde_json::to_string_pretty(&fit)?;
    output::write_with_meta(out, &body, &input.display().to_string(), &spec_digest(&text))?;
    Ok(body)
}

#[derive(Debug, Serialize)]
pub struct VerifyLatticeDoc {
    pub conditions: verify::ConditionsReport,
    pub structural_ok: bool,
}

/// `verify lattice`.
pub fn cmd_verify_lattice(
    spec: &LatticeSpec,
    samples: u64,
    seed: u64,
    out: Option<&Path>,
) -> Result<String> {
    let lat = build_lattice(spec)?;
    let structural_ok = lat.complex.validate().is_ok();
    let report = verify::check_causal_conditions(&lat, samples, seed);
    let doc = VerifyLatticeDoc {
        conditions: report,
        structural_ok,
    };
    let body = serde_json::to_string_pretty(&doc)?;
    if let Some(out) = out {
        output::write_with_meta(out, &body, spec, &spec_digest(spec))?;
    }
    if !structural_ok || !doc.conditions.passed() {
        anyhow::bail!("lattice validation failed:\n{body}");
    }
    Ok(body)
}

#[derive(Debug, Serialize)]
pub struct VerifyLemmasDoc {
    pub sweep: verify::SuiteReport,
    pub greedy: verify::SuiteReport,
}

/// `verify lemmas`: the dynamical suite for both rules. Sweep-rule
/// violations are failures; greedy-rule violations are reported as
/// counterexamples without failing the run.
pub fn cmd_verify_lemmas(
    spec: &LatticeSpec,
    trials: u64,
    p: f64,
    radius: u32,
    seed: u64,
    out: Option<&Path>,
) -> Result<String> {
    let lat = build_lattice(spec)?;
    let sweep = verify::lemma_suite(&lat, Rule::Sweep, trials, p, radius, seed);
    let greedy = verify::lemma_suite(&lat, Rule::Greedy, trials, p, radius, seed);
    let doc = VerifyLemmasDoc { sweep, greedy };
    let body = serde_json::to_string_pretty(&doc)?;
    if let Some(out) = out {
        output::write_with_meta(out, &body, spec, &spec_digest(spec))?;
    }
    if !doc.sweep.violations.is_empty() {
        anyhow::bail!("sweep-rule dynamical checks failed:\n{body}");
    }
    Ok(body)
}
