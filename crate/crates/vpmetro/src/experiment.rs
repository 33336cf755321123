//! Configuration-driven sweeps, scaling reports and calibration tables.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{evaluate_point, logspace, linspace, scaling_exponent, Accounting, ProbeContext, ScalingFit, Scheme};
use crate::noise::{CalibrationCache, NoiseJson, NoiseKind, NoiseSpec, CALIBRATION_PHI};
use crate::sampler::{run_with_report, ExperimentRecord, SamplingMode, ShotPlan};
use crate::stabilizer::{builtin_probe, load_probes, Probe};

pub const CSV_COLUMNS: [&str; 16] = [
    "probe",
    "scheme",
    "n",
    "phi",
    "delta",
    "lambda",
    "M",
    "accounting",
    "seed",
    "mu_ideal",
    "mu_scheme",
    "bias_theory",
    "bias_emp",
    "stat_theory",
    "stat_emp",
    "mse",
];

pub const WORKERS_ENV: &str = "VPMETRO_WORKERS";

/// Grid of phase values. Without `start`/`stop` the grid spans the probe's
/// inversion domain scaled by `domain_scale`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PhiGrid {
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    pub count: usize,
    #[serde(default = "one")]
    pub domain_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl PhiGrid {
    pub fn points(&self, probe: &Probe) -> Result<Vec<f64>> {
        if self.count < 1 {
            return Err(Error::Config("phi grid needs at least one point".into()));
        }
        let (lo, hi) = probe.domain;
        let start = self.start.unwrap_or(lo * self.domain_scale);
        let stop = self.stop.unwrap_or(hi * self.domain_scale);
        if start < lo - 1e-12 || stop > hi + 1e-12 || start > stop {
            return Err(Error::Config(format!(
                "phi grid [{start}, {stop}] outside the {} domain [{lo}, {hi}]",
                probe.name
            )));
        }
        Ok(linspace(start, stop, self.count))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DeltaGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Either a preset family name or a full noise JSON object.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NoiseEntry {
    Kind(NoiseKind),
    Spec(NoiseJson),
}

impl NoiseEntry {
    fn label(&self) -> String {
        match self {
            NoiseEntry::Kind(k) => k.to_string(),
            NoiseEntry::Spec(NoiseJson::Depolarizing { .. }) => "depolarizing".into(),
            NoiseEntry::Spec(NoiseJson::Dephasing { .. }) => "dephasing".into(),
            NoiseEntry::Spec(NoiseJson::Custom { .. }) => "custom".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub probes: Vec<String>,
    /// Extra probe definitions (one object or an array).
    #[serde(default)]
    pub probe_file: Option<PathBuf>,
    pub schemes: Vec<Scheme>,
    #[serde(default)]
    pub phi: Option<PhiGrid>,
    /// Fixed phase values for scaling reports.
    #[serde(default)]
    pub phis: Vec<f64>,
    pub noise: Vec<NoiseEntry>,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub delta_grid: Option<DeltaGrid>,
    /// Target dominant eigenvalues; each is calibrated to a strength.
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default = "default_m")]
    pub m: Vec<u64>,
    #[serde(default = "one_usize")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub accounting: Accounting,
    #[serde(default)]
    pub sampling: Option<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_phi_ref")]
    pub phi_ref: f64,
}

fn default_m() -> Vec<u64> {
    vec![1_000_000_000]
}
fn one_usize() -> usize {
    1
}
fn default_phi_ref() -> f64 {
    CALIBRATION_PHI
}

pub const PRESET_FIG4: &str = include_str!("../presets/fig4.json");
pub const PRESET_SM_FIGS: &str = include_str!("../presets/sm-figs.json");
pub const PRESET_SCALING: &str = include_str!("../presets/scaling.json");

pub fn preset(name: &str) -> Result<SweepConfig> {
    let text = match name {
        "fig4" => PRESET_FIG4,
        "sm-figs" => PRESET_SM_FIGS,
        "scaling" => PRESET_SCALING,
        _ => return Err(Error::Config(format!("unknown preset {name:?}"))),
    };
    Ok(serde_json::from_str(text)?)
}

pub fn load_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

impl SweepConfig {
    pub fn sampling_mode(&self) -> Result<SamplingMode> {
        match self.sampling.as_deref() {
            None | Some("auto") => Ok(SamplingMode::Auto),
            Some("exact") => Ok(SamplingMode::Exact),
            Some("gaussian") => Ok(SamplingMode::Gaussian),
            Some(s) => Err(Error::Config(format!("unknown sampling mode {s:?}"))),
        }
    }

    pub fn resolve_probes(&self) -> Result<Vec<Probe>> {
        let mut out = Vec::new();
        for name in &self.probes {
            out.push(builtin_probe(name).map_err(|e| Error::Config(e.to_string()))?);
        }
        if let Some(path) = &self.probe_file {
            out.extend(load_probes(path).map_err(|e| Error::Config(e.to_string()))?);
        }
        if out.is_empty() {
            return Err(Error::Config("no probes selected".into()));
        }
        Ok(out)
    }

    fn validate_common(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("empty scheme list".into()));
        }
        if self.noise.is_empty() {
            return Err(Error::Config("empty noise list".into()));
        }
        if self.m.is_empty() || self.m.contains(&0) {
            return Err(Error::Config("M list must be nonempty and positive".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        for &l in &self.lambdas {
            if !(l > 0.5 && l <= 1.0) {
                return Err(Error::Config(format!("target lambda {l} outside (0.5, 1]")));
            }
        }
        for &d in &self.deltas {
            if !(0.0..1.0).contains(&d) {
                return Err(Error::Config(format!("delta {d} outside [0, 1)")));
            }
        }
        self.sampling_mode()?;
        Ok(())
    }

    /// Strength list for a noise entry: explicit deltas, a log grid, or calibrated lambdas.
    fn noise_specs(&self, entry: &NoiseEntry, probe: &Probe, cache: &CalibrationCache) -> Result<Vec<NoiseSpec>> {
        let kind = match entry {
            NoiseEntry::Spec(j) => return Ok(vec![j.to_spec().map_err(|e| Error::Config(e.to_string()))?]),
            NoiseEntry::Kind(NoiseKind::Custom) => {
                return Err(Error::Config("custom noise needs explicit probabilities".into()))
            }
            NoiseEntry::Kind(k) => *k,
        };
        let mut deltas = self.deltas.clone();
        if let Some(g) = &self.delta_grid {
            if g.count < 2 || !(g.lo > 0.0 && g.hi > g.lo && g.hi < 1.0) {
                return Err(Error::Config(format!("bad delta grid {g:?}")));
            }
            deltas.extend(logspace(g.lo, g.hi, g.count));
        }
        for &l in &self.lambdas {
            deltas.push(cache.get_or_calibrate(probe, kind, self.phi_ref, l)?);
        }
        if deltas.is_empty() {
            return Err(Error::Config("no deltas, delta_grid or lambdas given".into()));
        }
        deltas.into_iter().map(|d| NoiseSpec::preset(kind, d)).collect()
    }
}

struct Cell {
    probe: usize,
    phi: f64,
    noise: NoiseSpec,
}

/// Sweep results grouped by noise label.
pub struct SweepOutput {
    pub tables: BTreeMap<String, Vec<ExperimentRecord>>,
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Error::Config(e.to_string()))
}

fn sort_key(r: &ExperimentRecord) -> (String, String, u64, u64, u64) {
    (r.probe.clone(), r.scheme.to_string(), order_bits(r.delta), order_bits(r.phi), r.m)
}

/// Monotone map from finite floats to `u64` for sorting.
fn order_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate_common()?;
    let probes = cfg.resolve_probes()?;
    let grid = cfg.phi.as_ref().ok_or_else(|| Error::Config("sweep needs a phi grid".into()))?;
    if grid.count < 2 {
        return Err(Error::Config("phi grid count must be at least 2".into()));
    }
    let mode = cfg.sampling_mode()?;
    let pool = thread_pool(cfg.workers)?;
    let cache = CalibrationCache::new();
    let contexts: Vec<Arc<ProbeContext>> = pool.install(|| {
        probes
            .into_par_iter()
            .map(|p| ProbeContext::new(p).map(Arc::new))
            .collect::<Result<Vec<_>>>()
    })?;
    for ctx in &contexts {
        if cfg.schemes.contains(&Scheme::Qec) && ctx.logical.is_none() {
            return Err(Error::Config(format!("probe {} has no QEC encoding", ctx.probe.name)));
        }
    }
    let mut tables = BTreeMap::new();
    for entry in &cfg.noise {
        let mut cells = Vec::new();
        for (pi, ctx) in contexts.iter().enumerate() {
            let specs = pool.install(|| cfg.noise_specs(entry, &ctx.probe, &cache))?;
            for spec in specs {
                for phi in grid.points(&ctx.probe)? {
                    cells.push(Cell { probe: pi, phi, noise: spec });
                }
            }
        }
        let n_sch = cfg.schemes.len() as u64;
        let n_m = cfg.m.len() as u64;
        let records: Vec<Vec<ExperimentRecord>> = pool.install(|| {
            cells
                .par_iter()
                .enumerate()
                .map(|(ci, cell)| {
                    let ctx = &contexts[cell.probe];
                    let reports = evaluate_point(ctx, cell.phi, &cell.noise, &cfg.schemes)?;
                    let mut out = Vec::new();
                    for (si, rep) in reports.iter().enumerate() {
                        for (mi, &m) in cfg.m.iter().enumerate() {
                            let plan = ShotPlan { m, scheme: rep.scheme, accounting: cfg.accounting, seed: cfg.seed, mode };
                            let index = (ci as u64 * n_sch + si as u64) * n_m + mi as u64;
                            out.push(run_with_report(ctx, rep, &plan, cfg.repeats, index)?);
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let mut flat: Vec<ExperimentRecord> = records.into_iter().flatten().collect();
        flat.sort_by_key(sort_key);
        if flat.iter().any(|r| !r.bias_theory.is_finite() || !r.mu_scheme.is_finite()) {
            return Err(Error::InvalidState("non-finite result in sweep".into()));
        }
        tables.insert(entry.label(), flat);
    }
    Ok(SweepOutput { tables })
}

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn write_csv<W: Write>(w: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_COLUMNS)?;
    for r in records {
        wr.write_record([
            r.probe.clone(),
            r.scheme.to_string(),
            r.n.to_string(),
            fmt_float(r.phi),
            fmt_float(r.delta),
            fmt_float(r.lambda),
            r.m.to_string(),
            r.accounting.to_string(),
            r.seed.to_string(),
            fmt_float(r.mu_ideal),
            fmt_float(r.mu_scheme),
            fmt_float(r.bias_theory),
            fmt_float(r.bias_emp),
            fmt_float(r.stat_theory),
            fmt_float(r.stat_emp),
            fmt_float(r.mse),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Output paths: `out` itself for one table, `stem_<label>.ext` otherwise.
pub fn table_paths(out: &Path, labels: &[String]) -> Vec<PathBuf> {
    if labels.len() == 1 {
        return vec![out.to_path_buf()];
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    labels.iter().map(|l| out.with_file_name(format!("{stem}_{l}.{ext}"))).collect()
}

/// Writes every table; on failure removes whatever was written.
pub fn write_sweep(output: &SweepOutput, out: &Path) -> Result<Vec<PathBuf>> {
    let labels: Vec<String> = output.tables.keys().cloned().collect();
    let paths = table_paths(out, &labels);
    let mut written = Vec::new();
    let res = (|| -> Result<()> {
        for (path, label) in paths.iter().zip(&labels) {
            written.push(path.clone());
            let f = File::create(path)?;
            write_csv(std::io::BufWriter::new(f), &output.tables[label])?;
        }
        Ok(())
    })();
    if let Err(e) = res {
        for p in &written {
            let _ = std::fs::remove_file(p);
        }
        return Err(e);
    }
    Ok(paths)
}

/// Expected bias order for a scheme under a preset noise family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ExpectedOrder {
    Near { slope: f64, tol: f64 },
    AtLeast { slope: f64 },
}

impl ExpectedOrder {
    pub fn accepts(&self, slope: f64) -> bool {
        match *self {
            ExpectedOrder::Near { slope: s, tol } => (slope - s).abs() <= tol,
            ExpectedOrder::AtLeast { slope: s } => slope >= s,
        }
    }
}

pub fn expected_order(scheme: Scheme, kind: NoiseKind) -> Option<ExpectedOrder> {
    match (scheme, kind) {
        (_, NoiseKind::Custom) => None,
        (Scheme::Noisy | Scheme::Qec | Scheme::Vp(1), _) => Some(ExpectedOrder::Near { slope: 1.0, tol: 0.1 }),
        (Scheme::Vp(n), NoiseKind::Dephasing) => Some(ExpectedOrder::AtLeast { slope: n as f64 - 0.15 }),
        (Scheme::Vp(2), NoiseKind::Depolarizing) => Some(ExpectedOrder::Near { slope: 2.0, tol: 0.15 }),
        (Scheme::Vp(_), NoiseKind::Depolarizing) => Some(ExpectedOrder::AtLeast { slope: 2.85 }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingEntry {
    pub probe: String,
    pub noise: String,
    pub scheme: Scheme,
    pub phi: f64,
    pub fit: Option<ScalingFit>,
    pub expected: Option<ExpectedOrder>,
    pub passed: bool,
    pub error: Option<String>,
}

/// Bias scaling fit for one (probe, noise family, phi) over a strength grid, all schemes at once.
pub fn scaling_entries(
    ctx: &ProbeContext,
    kind: NoiseKind,
    phi: f64,
    deltas: &[f64],
    schemes: &[Scheme],
) -> Result<Vec<ScalingEntry>> {
    let mut cols: Vec<Vec<(f64, f64)>> = vec![Vec::new(); schemes.len()];
    for &d in deltas {
        let reps = evaluate_point(ctx, phi, &NoiseSpec::preset(kind, d)?, schemes)?;
        for (c, r) in cols.iter_mut().zip(reps) {
            c.push((d, r.bias));
        }
    }
    Ok(schemes
        .iter()
        .zip(cols)
        .map(|(&scheme, pts)| {
            let expected = expected_order(scheme, kind);
            let (fit, error) = match scaling_exponent(&pts) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let passed = match (&fit, expected) {
                (Some(f), Some(e)) => f.r2 >= crate::estimation::FIT_R2_MIN && e.accepts(f.slope),
                _ => false,
            };
            ScalingEntry { probe: ctx.probe.name.clone(), noise: kind.to_string(), scheme, phi, fit, expected, passed, error }
        })
        .collect())
}

pub fn run_scaling(cfg: &SweepConfig) -> Result<Vec<ScalingEntry>> {
    cfg.validate_common()?;
    let probes = cfg.resolve_probes()?;
    let g = cfg
        .delta_grid
        .as_ref()
        .ok_or_else(|| Error::Config("scaling needs a delta_grid".into()))?;
    if g.count < 6 || !(g.lo > 0.0 && g.hi > g.lo && g.hi < 1.0) {
        return Err(Error::Config("delta_grid must be log-spaced with at least 6 points".into()));
    }
    let deltas = logspace(g.lo, g.hi, g.count);
    let phis = if cfg.phis.is_empty() { vec![0.05] } else { cfg.phis.clone() };
    let pool = thread_pool(cfg.workers)?;
    let mut jobs = Vec::new();
    for p in &probes {
        for e in &cfg.noise {
            let kind = match e {
                NoiseEntry::Kind(k) if *k != NoiseKind::Custom => *k,
                _ => return Err(Error::Config("scaling needs preset noise families".into())),
            };
            for &phi in &phis {
                jobs.push((p.clone(), kind, phi));
            }
        }
    }
    let results: Vec<Vec<ScalingEntry>> = pool.install(|| {
        jobs.par_iter()
            .map(|(p, kind, phi)| {
                let ctx = ProbeContext::new(p.clone())?;
                let schemes: Vec<Scheme> =
                    cfg.schemes.iter().copied().filter(|s| *s != Scheme::Qec || ctx.logical.is_some()).collect();
                match scaling_entries(&ctx, *kind, *phi, &deltas, &schemes) {
                    Ok(v) => Ok(v),
                    Err(e) => Ok(schemes
                        .iter()
                        .map(|&scheme| ScalingEntry {
                            probe: p.name.clone(),
                            noise: kind.to_string(),
                            scheme,
                            phi: *phi,
                            fit: None,
                            expected: expected_order(scheme, *kind),
                            passed: false,
                            error: Some(e.to_string()),
                        })
                        .collect()),
                }
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(results.into_iter().flatten().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationRow {
    pub probe: String,
    pub noise: NoiseKind,
    pub phi_ref: f64,
    pub target_lambda: f64,
    pub delta: f64,
    pub lambda_at_delta: f64,
}

pub fn run_calibrate(probe: &Probe, kind: NoiseKind, phi_ref: f64, targets: &[f64]) -> Result<Vec<CalibrationRow>> {
    for &t in targets {
        if !(t > 0.5 && t <= 1.0) {
            return Err(Error::Config(format!("target lambda {t} outside (0.5, 1]")));
        }
    }
    if kind == NoiseKind::Custom {
        return Err(Error::Config("custom noise cannot be calibrated".into()));
    }
    targets
        .iter()
        .map(|&t| {
            let delta = crate::noise::calibrate_strength(probe, kind, phi_ref, t)?;
            let lambda_at_delta = crate::noise::dominant_eigenvalue(probe, phi_ref, &NoiseSpec::preset(kind, delta)?)?;
            Ok(CalibrationRow { probe: probe.name.clone(), noise: kind, phi_ref, target_lambda: t, delta, lambda_at_delta })
        })
        .collect()
}
