//! Experiment configs, K-sweeps and their CSV output.
//!
//! A config is a TOML document. Relative output directories resolve against
//! the directory holding the config file.
//!
//! ```toml
//! model.claim.family = "lomax"
//! model.claim.scale = 1.0
//! model.claim.alpha = 1.5
//! model.interarrival.family = "exponential"
//! model.interarrival.rate = 1.0
//! model.p1 = 4.0
//! model.p2 = 3.0
//! instance.a = 0.5
//! instance.k = [25, 50, 100]
//! simulation.replications = 100000
//! simulation.seed = 1
//! output.directory = "out"
//! ```

use std::fmt::Write as _;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;
use thiserror::Error;

use crate::asymptotics::{psi_asymptotes, AsymptoteReport};
use crate::heavy_tails::{DistributionError, HeavyTailDistribution};
use crate::identities::{all_passed, asymptotic_identities, simulation_identities, IdentityCheck};
use crate::risk_model::{BarrierInstance, ModelError, Regime, RiskModel};
use crate::simulator::{
    estimate_psi_sweep, importance_sweep, Estimate, InstanceResult, PsiEstimates, SimOptions,
    SimulationError, TruncationPolicy, MAX_CENSORED_FRACTION,
};

pub const MIN_REPLICATIONS: u64 = 1000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Config {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A claim or inter-arrival law as written in a config.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum LawConfig {
    Lomax { scale: f64, alpha: f64 },
    Weibull { shape: f64, scale: f64 },
    Lognormal { location: f64, scale: f64 },
    Exponential { rate: f64 },
    Deterministic { value: f64 },
    /// `atoms = [[value, probability], ...]`
    Discrete { atoms: Vec<(f64, f64)> },
}

impl LawConfig {
    pub fn build(&self) -> Result<HeavyTailDistribution, DistributionError> {
        match self {
            LawConfig::Lomax { scale, alpha } => HeavyTailDistribution::lomax(*scale, *alpha),
            LawConfig::Weibull { shape, scale } => HeavyTailDistribution::weibull(*shape, *scale),
            LawConfig::Lognormal { location, scale } => {
                HeavyTailDistribution::lognormal(*location, *scale)
            }
            LawConfig::Exponential { rate } => HeavyTailDistribution::exponential(*rate),
            LawConfig::Deterministic { value } => HeavyTailDistribution::deterministic(*value),
            LawConfig::Discrete { atoms } => HeavyTailDistribution::discrete(atoms),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub claim: LawConfig,
    pub interarrival: LawConfig,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub a: f64,
    pub k: toml::Spanned<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub replications: toml::Spanned<u64>,
    pub seed: u64,
    pub time_factor: Option<f64>,
    pub deficit_margin: Option<f64>,
    pub hard_step_cap: Option<u64>,
    pub tilt_alpha: Option<f64>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub instance: InstanceConfig,
    pub simulation: SimulationConfig,
    pub output: OutputConfig,
    /// Directory relative output paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let head = &src[..offset.min(src.len())];
    let line = head.matches('\n').count() + 1;
    let column = head.len() - head.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn config_error(origin: &str, src: &str, span: Option<Range<usize>>, message: String) -> HarnessError {
    let (line, column) = span.map_or((1, 1), |s| line_col(src, s.start));
    HarnessError::Config {
        origin: origin.to_string(),
        line,
        column,
        message,
    }
}

impl ExperimentConfig {
    /// Parses and validates `src`; `origin` names it in diagnostics.
    pub fn parse(src: &str, origin: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = toml::from_str(src)
            .map_err(|e| config_error(origin, src, e.span(), e.message().trim().to_string()))?;
        let ks = cfg.instance.k.get_ref();
        if ks.is_empty() {
            return Err(config_error(origin, src, Some(cfg.instance.k.span()), "instance.k is empty".into()));
        }
        if ks.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
            return Err(config_error(
                origin,
                src,
                Some(cfg.instance.k.span()),
                "instance.k values must be positive and finite".into(),
            ));
        }
        if ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_error(
                origin,
                src,
                Some(cfg.instance.k.span()),
                "instance.k must be strictly increasing".into(),
            ));
        }
        let reps = *cfg.simulation.replications.get_ref();
        if reps < MIN_REPLICATIONS {
            return Err(config_error(
                origin,
                src,
                Some(cfg.simulation.replications.span()),
                format!("simulation.replications must be >= {MIN_REPLICATIONS}, got {reps}"),
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let src = fs::read_to_string(path).map_err(io_error(path))?;
        let mut cfg = Self::parse(&src, &path.display().to_string())?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn build_model(&self) -> Result<RiskModel, HarnessError> {
        let m = &self.model;
        Ok(RiskModel::new(m.claim.build()?, m.interarrival.build()?, m.p1, m.p2)?)
    }

    pub fn instances(&self, model: &RiskModel) -> Result<Vec<BarrierInstance>, HarnessError> {
        self.instance
            .k
            .get_ref()
            .iter()
            .map(|&k| model.instance(self.instance.a, k).map_err(HarnessError::from))
            .collect()
    }

    pub fn replications(&self) -> u64 {
        *self.simulation.replications.get_ref()
    }

    pub fn policy(&self, model: &RiskModel) -> TruncationPolicy {
        let mut p = TruncationPolicy::default_for(model);
        let s = &self.simulation;
        if let Some(v) = s.time_factor {
            p.time_factor = v;
        }
        if let Some(v) = s.deficit_margin {
            p.deficit_margin = v;
        }
        if let Some(v) = s.hard_step_cap {
            p.hard_step_cap = v;
        }
        p
    }

    pub fn output_dir(&self) -> PathBuf {
        self.base_dir.join(&self.output.directory)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.simulation.seed = seed;
        }
        if let Some(reps) = o.replications {
            self.simulation.replications = toml::Spanned::new(0..0, reps);
        }
        if let Some(out) = &o.out {
            self.output.directory = out.clone();
            self.base_dir = PathBuf::new();
        }
        if let Some(w) = o.workers {
            self.simulation.workers = Some(w);
        }
    }
}

/// Command-line overrides of config values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub replications: Option<u64>,
    /// Used as given, not relative to the config.
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// One K of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: f64,
    pub ak: f64,
    pub t: f64,
    pub regime: Regime,
    pub psi: PsiEstimates,
    pub asymptotes: AsymptoteReport,
}

impl SweepRow {
    pub fn ratio_wedge(&self) -> f64 {
        self.psi.wedge.value / self.asymptotes.psi_wedge_asym
    }

    pub fn ratio_vee(&self) -> f64 {
        self.psi.vee.value / self.asymptotes.psi_vee_asym
    }

    pub fn ratio_times(&self) -> f64 {
        self.psi.times.value / self.asymptotes.psi_times_asym
    }
}

pub const SWEEP_HEADER: &str = "K,aK,T,regime,\
psi_hat_wedge,half_width_wedge,psi_hat_vee,half_width_vee,psi_hat_times,half_width_times,\
psi_hat_1,half_width_1,psi_hat_2,half_width_2,\
asym_wedge,asym_vee,asym_times,ratio_wedge,ratio_vee,ratio_times,\
residual_bias_wedge,residual_bias_vee,residual_bias_times,residual_bias_1,residual_bias_2,\
censored_fraction";

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_estimate(line: &mut String, e: &Estimate) {
    let _ = write!(line, ",{},{}", fmt_float(e.value), fmt_float(e.half_width_95));
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let mut line = format!(
            "{},{},{},{}",
            fmt_float(r.k),
            fmt_float(r.ak),
            fmt_float(r.t),
            r.regime.name()
        );
        let p = &r.psi;
        for e in [&p.wedge, &p.vee, &p.times, &p.first, &p.second] {
            push_estimate(&mut line, e);
        }
        let a = &r.asymptotes;
        for v in [
            a.psi_wedge_asym,
            a.psi_vee_asym,
            a.psi_times_asym,
            r.ratio_wedge(),
            r.ratio_vee(),
            r.ratio_times(),
        ] {
            let _ = write!(line, ",{}", fmt_float(v));
        }
        for e in [&p.wedge, &p.vee, &p.times, &p.first, &p.second] {
            let _ = write!(line, ",{}", fmt_float(e.residual_bias_bound));
        }
        let _ = write!(line, ",{}", fmt_float(p.censored_fraction()));
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub const IDENTITIES_HEADER: &str = "K,source,name,kind,lhs,rhs,residual,tolerance,passed";

/// Identity checks tagged with the K they were evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedCheck {
    pub k: f64,
    pub source: &'static str,
    pub check: IdentityCheck,
}

pub fn identities_csv(checks: &[TaggedCheck]) -> String {
    let mut out = String::from(IDENTITIES_HEADER);
    out.push('\n');
    for t in checks {
        let c = &t.check;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_float(t.k),
            t.source,
            c.name,
            c.kind.name(),
            fmt_float(c.lhs),
            fmt_float(c.rhs),
            fmt_float(c.residual),
            fmt_float(c.tolerance),
            c.passed
        );
    }
    out
}

/// Simulated sweep with everything derived from it.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub model: RiskModel,
    pub instances: Vec<BarrierInstance>,
    pub policy: TruncationPolicy,
    pub results: Vec<InstanceResult>,
    pub rows: Vec<SweepRow>,
    pub wall_time: f64,
}

pub fn simulate_sweep(cfg: &ExperimentConfig) -> Result<Sweep, HarnessError> {
    let model = cfg.build_model()?;
    let instances = cfg.instances(&model)?;
    let policy = cfg.policy(&model);
    let opts = SimOptions {
        workers: cfg.simulation.workers,
    };
    let start = Instant::now();
    let results = estimate_psi_sweep(
        &model,
        &instances,
        &policy,
        cfg.replications(),
        cfg.simulation.seed,
        opts,
    )?;
    let wall_time = start.elapsed().as_secs_f64();
    let rows = instances
        .iter()
        .zip(&results)
        .map(|(inst, res)| SweepRow {
            k: inst.k(),
            ak: inst.x1(),
            t: inst.t(),
            regime: inst.regime(),
            psi: res.psi.clone(),
            asymptotes: psi_asymptotes(&model, inst),
        })
        .collect();
    Ok(Sweep {
        model,
        instances,
        policy,
        results,
        rows,
        wall_time,
    })
}

/// Every identity check of a sweep.
pub fn sweep_identities(sweep: &Sweep) -> Vec<TaggedCheck> {
    let mut out = Vec::new();
    for (inst, res) in sweep.instances.iter().zip(&sweep.results) {
        for check in asymptotic_identities(&sweep.model, inst) {
            out.push(TaggedCheck {
                k: inst.k(),
                source: "asymptotics",
                check,
            });
        }
        for check in simulation_identities(&res.psi, &res.decomposition) {
            out.push(TaggedCheck {
                k: inst.k(),
                source: "simulator",
                check,
            });
        }
    }
    out
}

/// Whether `|ratio - 1|` failed to shrink from the previous K, ignoring
/// changes that the two ratio intervals cannot resolve.
pub fn non_shrinking(prev: (f64, f64), cur: (f64, f64)) -> bool {
    let (r0, h0) = prev;
    let (r1, h1) = cur;
    let overlap = (r0 - r1).abs() <= h0 + h1;
    (r1 - 1.0).abs() > (r0 - 1.0).abs() && !overlap
}

/// Ratio and 95% half-width of `estimate / asymptote`.
fn ratio_interval(e: &Estimate, asym: f64) -> (f64, f64) {
    (e.value / asym, e.half_width_95 / asym)
}

type RatioPick = fn(&SweepRow) -> (f64, f64);

const RATIO_PICKS: [(&str, RatioPick); 3] = [
    ("wedge", |r| ratio_interval(&r.psi.wedge, r.asymptotes.psi_wedge_asym)),
    ("vee", |r| ratio_interval(&r.psi.vee, r.asymptotes.psi_vee_asym)),
    ("times", |r| ratio_interval(&r.psi.times, r.asymptotes.psi_times_asym)),
];

/// Per-K trend flags for wedge, vee and times; the first K is never flagged.
pub fn trend_flags(rows: &[SweepRow]) -> Vec<[bool; 3]> {
    let mut flags = vec![[false; 3]; rows.len()];
    for i in 1..rows.len() {
        for (j, (_, pick)) in RATIO_PICKS.iter().enumerate() {
            flags[i][j] = non_shrinking(pick(&rows[i - 1]), pick(&rows[i]));
        }
    }
    flags
}

pub const RATIOS_HEADER: &str = "K,regime,\
ratio_wedge,ratio_half_width_wedge,ratio_vee,ratio_half_width_vee,ratio_times,ratio_half_width_times,\
times_over_vee,non_shrinking_wedge,non_shrinking_vee,non_shrinking_times";

pub fn ratios_csv(rows: &[SweepRow]) -> String {
    let flags = trend_flags(rows);
    let mut out = String::from(RATIOS_HEADER);
    out.push('\n');
    for (r, f) in rows.iter().zip(&flags) {
        let mut line = format!("{},{}", fmt_float(r.k), r.regime.name());
        for (_, pick) in RATIO_PICKS {
            let (v, h) = pick(r);
            let _ = write!(line, ",{},{}", fmt_float(v), fmt_float(h));
        }
        let tv = r.psi.times.value / r.psi.vee.value;
        let _ = write!(line, ",{},{},{},{}", fmt_float(tv), f[0], f[1], f[2]);
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub const IMPORTANCE_HEADER: &str = "K,tilt_alpha,\
is_wedge,is_half_width_wedge,is_vee,is_half_width_vee,is_times,is_half_width_times,\
crude_wedge,crude_half_width_wedge,effective_sample_size,variance_ratio_wedge";

/// Importance-sampling estimates per K next to the crude ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceRow {
    pub k: f64,
    pub tilt_alpha: f64,
    pub is: PsiEstimates,
    pub crude: Estimate,
}

pub fn importance_csv(rows: &[ImportanceRow]) -> String {
    let mut out = String::from(IMPORTANCE_HEADER);
    out.push('\n');
    for r in rows {
        let mut line = format!("{},{}", fmt_float(r.k), fmt_float(r.tilt_alpha));
        for e in [&r.is.wedge, &r.is.vee, &r.is.times, &r.crude] {
            push_estimate(&mut line, e);
        }
        let ratio = (r.is.wedge.half_width_95 / r.crude.half_width_95).powi(2);
        let _ = write!(
            line,
            ",{},{}",
            fmt_float(r.is.effective_sample_size),
            fmt_float(ratio)
        );
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, HarnessError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io_error(&path))?;
    Ok(path)
}

fn report_text(
    cfg: &ExperimentConfig,
    sweep: &Sweep,
    checks: &[TaggedCheck],
    importance: &[ImportanceRow],
) -> String {
    let m = &sweep.model;
    let p = &sweep.policy;
    let mut s = String::new();
    let _ = writeln!(s, "claim: {}", m.claim().family().name());
    let _ = writeln!(s, "interarrival: {}", m.interarrival().family().name());
    let _ = writeln!(s, "p1 = {}, p2 = {}", m.p1(), m.p2());
    let _ = writeln!(
        s,
        "stability: rho = {:.6} < p2 = {} (m1 = {:.6}, m2 = {:.6})",
        m.rho(),
        m.p2(),
        m.m1(),
        m.m2()
    );
    let _ = writeln!(s, "a = {}", cfg.instance.a);
    let regime = sweep.instances.first().map_or(Regime::TwoDim, |i| i.regime());
    let _ = writeln!(s, "regime: {}", regime.name());
    let _ = writeln!(s, "hypotheses:");
    let _ = writeln!(s, "  a < 1: {}", cfg.instance.a < 1.0);
    let _ = writeln!(
        s,
        "  claim regularly varying with index in (1, 2): {}",
        m.claim_index_in_stable_range()
    );
    let _ = writeln!(
        s,
        "  interarrival third moment finite: {}",
        m.interarrival_third_moment_finite()
    );
    let _ = writeln!(
        s,
        "simulation: replications = {}, seed = {}, time_factor = {}, deficit_margin = {}, hard_step_cap = {}",
        cfg.replications(),
        cfg.simulation.seed,
        p.time_factor,
        p.deficit_margin,
        p.hard_step_cap
    );
    let _ = writeln!(s, "wall_time_seconds: {:.3}", sweep.wall_time);
    let censored = sweep.rows.first().map_or(0.0, |r| r.psi.censored_fraction());
    let _ = writeln!(
        s,
        "censored_fraction: {censored:.6} (limit {MAX_CENSORED_FRACTION})"
    );
    let failed: Vec<&TaggedCheck> = checks.iter().filter(|c| !c.check.passed).collect();
    let _ = writeln!(
        s,
        "identities: {} checked, {} failed",
        checks.len(),
        failed.len()
    );
    for f in &failed {
        let _ = writeln!(s, "  K = {}: {}", f.k, f.check);
    }
    let _ = writeln!(s, "ratios (estimate / asymptote):");
    let flags = trend_flags(&sweep.rows);
    for (r, f) in sweep.rows.iter().zip(&flags) {
        let _ = writeln!(
            s,
            "  K = {}: wedge {:.4}, vee {:.4}, times {:.4}{}",
            r.k,
            r.ratio_wedge(),
            r.ratio_vee(),
            r.ratio_times(),
            if f.iter().any(|&x| x) {
                "  [|ratio - 1| not shrinking]"
            } else {
                ""
            }
        );
    }
    for r in importance {
        let _ = writeln!(
            s,
            "importance K = {}: wedge {:.6e} (crude {:.6e}), ESS {:.1}",
            r.k, r.is.wedge.value, r.crude.value, r.is.effective_sample_size
        );
    }
    s
}

/// Outcome of [`run`].
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub rows: Vec<SweepRow>,
    pub checks: Vec<TaggedCheck>,
    pub identities_passed: bool,
    pub censored_fraction: f64,
}

impl RunSummary {
    pub fn success(&self) -> bool {
        self.identities_passed && self.censored_fraction < MAX_CENSORED_FRACTION
    }
}

fn prepare(config_path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::load(config_path)?;
    cfg.apply(overrides);
    Ok(cfg)
}

fn create_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(io_error(dir))
}

/// Runs the sweep and writes `sweep.csv`, `identities.csv` and `report.txt`,
/// plus `importance.csv` when a tilt is configured.
pub fn run(config_path: &Path, overrides: &Overrides) -> Result<RunSummary, HarnessError> {
    let cfg = prepare(config_path, overrides)?;
    let sweep = simulate_sweep(&cfg)?;
    let checks = sweep_identities(&sweep);
    let importance = match cfg.simulation.tilt_alpha {
        Some(tilt) => importance_rows(&cfg, &sweep, tilt)?,
        None => Vec::new(),
    };
    let dir = cfg.output_dir();
    create_dir(&dir)?;
    write_file(&dir, "sweep.csv", &sweep_csv(&sweep.rows))?;
    write_file(&dir, "identities.csv", &identities_csv(&checks))?;
    if !importance.is_empty() {
        write_file(&dir, "importance.csv", &importance_csv(&importance))?;
    }
    write_file(&dir, "report.txt", &report_text(&cfg, &sweep, &checks, &importance))?;
    let identities_passed = all_passed(&checks.iter().map(|c| c.check.clone()).collect::<Vec<_>>());
    let censored_fraction = sweep.rows.first().map_or(0.0, |r| r.psi.censored_fraction());
    Ok(RunSummary {
        output_dir: dir,
        rows: sweep.rows,
        checks,
        identities_passed,
        censored_fraction,
    })
}

fn importance_rows(
    cfg: &ExperimentConfig,
    sweep: &Sweep,
    tilt: f64,
) -> Result<Vec<ImportanceRow>, HarnessError> {
    let opts = SimOptions {
        workers: cfg.simulation.workers,
    };
    let estimates = importance_sweep(
        &sweep.model,
        &sweep.instances,
        &sweep.policy,
        cfg.replications(),
        tilt,
        cfg.simulation.seed,
        opts,
    )?;
    Ok(estimates
        .into_iter()
        .zip(&sweep.rows)
        .map(|(is, row)| ImportanceRow {
            k: row.k,
            tilt_alpha: tilt,
            is,
            crude: row.psi.wedge,
        })
        .collect())
}

/// Outcome of [`compare`].
#[derive(Debug, Clone)]
pub struct CompareSummary {
    pub output_dir: PathBuf,
    pub rows: Vec<SweepRow>,
    pub flags: Vec<[bool; 3]>,
}

/// Runs the sweep and writes `ratios.csv`.
pub fn compare(config_path: &Path, overrides: &Overrides) -> Result<CompareSummary, HarnessError> {
    let cfg = prepare(config_path, overrides)?;
    let sweep = simulate_sweep(&cfg)?;
    let dir = cfg.output_dir();
    create_dir(&dir)?;
    write_file(&dir, "ratios.csv", &ratios_csv(&sweep.rows))?;
    Ok(CompareSummary {
        output_dir: dir,
        flags: trend_flags(&sweep.rows),
        rows: sweep.rows,
    })
}
