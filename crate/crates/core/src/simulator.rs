//! Monte Carlo over the embedded random walks `S^(i)_n = Ξ_n - p_i T_n`.
//!
//! The claim surplus is piecewise constant between arrivals and the barriers
//! increase, so `{∃t: S_t > b_i(t)}` equals `{∃n: S^(i)_n > x_i}` and only
//! jump epochs need checking. Paths run past `T̃` even after crossing so the
//! pre/post maxima around `N*` are always defined, and stop once calendar
//! time exceeds `time_factor · T̃` and both deficits `x_i - S^(i)_n` exceed
//! the margin. The crossing probability left beyond that point is accounted
//! for with the walk asymptote evaluated at the terminal deficits.
//!
//! Replication `r` draws from substream `r` of the seed, one inter-arrival
//! and then one claim per step. Replications are reduced in fixed-size
//! chunks in index order, so results do not depend on the worker count.

use rayon::prelude::*;
use thiserror::Error;

use crate::heavy_tails::{Family, HeavyTailDistribution};
use crate::risk_model::{BarrierInstance, Company, Regime, RiskModel};
use crate::rng::RngStream;

/// Maximum censored fraction tolerated by the estimators.
pub const MAX_CENSORED_FRACTION: f64 = 0.01;
/// Minimum effective sample size, as a fraction of replications.
pub const MIN_ESS_FRACTION: f64 = 0.01;
/// 97.5% standard normal quantile.
pub const Z_95: f64 = 1.96;

const CHUNK: u64 = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("StepCapExceeded: path stopped at the hard cap of {cap} steps")]
    StepCapExceeded { cap: u64, outcome: Box<PathOutcome> },
    #[error("ExcessiveCensoring: {censored} of {replications} paths hit the step cap")]
    ExcessiveCensoring { censored: u64, replications: u64 },
    #[error("WeightDegeneracy: effective sample size {ess:.1} below 1% of {replications}")]
    WeightDegeneracy { ess: f64, replications: u64 },
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid simulation request: {0}")]
    InvalidRequest(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// When to stop simulating a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Continue until calendar time exceeds `time_factor · T̃`; at least 2.
    pub time_factor: f64,
    /// ...and both deficits exceed this margin.
    pub deficit_margin: f64,
    pub hard_step_cap: u64,
}

impl TruncationPolicy {
    /// `time_factor = 4`, `deficit_margin = 25 E[σ]`, cap `10^7`.
    pub fn default_for(model: &RiskModel) -> Self {
        Self {
            time_factor: 4.0,
            deficit_margin: 25.0 * model.claim().mean(),
            hard_step_cap: 10_000_000,
        }
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        if !(self.time_factor >= 2.0 && self.time_factor.is_finite()) {
            return Err(SimulationError::InvalidPolicy(format!(
                "time_factor must be >= 2, got {}",
                self.time_factor
            )));
        }
        if !(self.deficit_margin > 0.0 && self.deficit_margin.is_finite()) {
            return Err(SimulationError::InvalidPolicy(format!(
                "deficit_margin must be positive, got {}",
                self.deficit_margin
            )));
        }
        if self.hard_step_cap == 0 {
            return Err(SimulationError::InvalidPolicy("hard_step_cap must be positive".into()));
        }
        Ok(())
    }
}

/// Per-event residual crossing mass beyond the truncation point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EventResiduals {
    pub wedge: f64,
    pub vee: f64,
    pub times: f64,
    pub first: f64,
    pub second: f64,
}

/// Verdicts of one simulated trajectory for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PathOutcome {
    pub crossed_b1: bool,
    pub crossed_b2: bool,
    pub crossed_simultaneous: bool,
    /// `N* = min{n >= 1: T_n > T̃} - 1`.
    pub n_star: u64,
    /// `M^(1)_{N*}`
    pub m1_pre: f64,
    /// `M^(2)_{N*}`
    pub m2_pre: f64,
    /// `M^(1)` over `[N*+1, truncated_at]`
    pub m1_post: f64,
    /// `M^(2)` over `[N*+1, truncated_at]`
    pub m2_post: f64,
    pub truncated_at: u64,
    /// `Σ_i (1/(m_i μ)) F̄_I(d_i)` at the terminal deficits `d_i`.
    pub residual_bound: f64,
    pub residuals: EventResiduals,
    pub deficits: [f64; 2],
    pub censored: bool,
    /// Log likelihood ratio of the path, 0 under the nominal law.
    pub log_weight: f64,
}

/// Tracks crossing state of one instance along a shared path.
#[derive(Debug, Clone)]
pub struct BarrierTracker {
    x: [f64; 2],
    p: [f64; 2],
    t_tilde: f64,
    stop_time: f64,
    margin: f64,
    n_star: Option<u64>,
    pre_max: [f64; 2],
    post_max: [f64; 2],
    crossed: [bool; 2],
    simultaneous: bool,
    level: [f64; 2],
}

impl BarrierTracker {
    pub fn new(instance: &BarrierInstance, model: &RiskModel, policy: &TruncationPolicy) -> Self {
        Self {
            x: [instance.x1(), instance.x2()],
            p: [model.p1(), model.p2()],
            t_tilde: instance.t_tilde(),
            stop_time: policy.time_factor * instance.t_tilde().max(0.0),
            margin: policy.deficit_margin,
            n_star: None,
            pre_max: [0.0; 2],
            post_max: [f64::NEG_INFINITY; 2],
            crossed: [false; 2],
            simultaneous: false,
            level: [0.0; 2],
        }
    }

    /// Feed step `n >= 1` with arrival epoch `T_n` and total claims `Ξ_n`.
    #[inline]
    pub fn observe(&mut self, n: u64, arrival_time: f64, claims_total: f64) {
        let s1 = claims_total - self.p[0] * arrival_time;
        let s2 = claims_total - self.p[1] * arrival_time;
        self.level = [s1, s2];
        if self.n_star.is_none() && arrival_time > self.t_tilde {
            self.n_star = Some(n - 1);
        }
        let seg = if self.n_star.is_some() {
            &mut self.post_max
        } else {
            &mut self.pre_max
        };
        seg[0] = seg[0].max(s1);
        seg[1] = seg[1].max(s2);
        self.mark_crossings(s1, s2);
    }

    #[inline]
    fn mark_crossings(&mut self, s1: f64, s2: f64) {
        let up1 = s1 > self.x[0];
        let up2 = s2 > self.x[1];
        self.crossed[0] |= up1;
        self.crossed[1] |= up2;
        self.simultaneous |= up1 && up2;
    }

    /// Whether this instance's stopping condition holds at `arrival_time`.
    #[inline]
    pub fn satisfied(&self, arrival_time: f64) -> bool {
        self.n_star.is_some()
            && arrival_time > self.stop_time
            && self.x[0] - self.level[0] > self.margin
            && self.x[1] - self.level[1] > self.margin
    }

    pub fn finish(&self, model: &RiskModel, steps: u64, censored: bool, log_weight: f64) -> PathOutcome {
        let deficits = [self.x[0] - self.level[0], self.x[1] - self.level[1]];
        let walk = |c: Company| residual_mass(model, c, deficits[c.index()]);
        let (r1, r2) = (walk(Company::First), walk(Company::Second));
        let [b1, b2] = self.crossed;
        // Beyond T̃ the upper barrier is b1: a b1 crossing is a simultaneous
        // one, and a crossing of either barrier is a b2 crossing.
        let residuals = EventResiduals {
            first: if b1 { 0.0 } else { r1 },
            second: if b2 { 0.0 } else { r2 },
            wedge: if b1 || b2 { 0.0 } else { r2 },
            vee: if self.simultaneous { 0.0 } else { r1 },
            times: match (b1, b2) {
                (true, true) => 0.0,
                (true, false) => r2,
                (false, _) => r1,
            },
        };
        PathOutcome {
            crossed_b1: b1,
            crossed_b2: b2,
            crossed_simultaneous: self.simultaneous,
            n_star: self.n_star.unwrap_or(steps),
            m1_pre: self.pre_max[0],
            m2_pre: self.pre_max[1],
            m1_post: self.post_max[0],
            m2_post: self.post_max[1],
            truncated_at: steps,
            residual_bound: r1 + r2,
            residuals,
            deficits,
            censored,
            log_weight,
        }
    }
}

/// `(1/(m_i μ)) F̄_I(d)`, capped at 1.
fn residual_mass(model: &RiskModel, company: Company, deficit: f64) -> f64 {
    (model.claim().tail_integral(deficit.max(0.0)) / model.drift(company)).min(1.0)
}

/// How claims are drawn along a path.
#[derive(Debug, Clone)]
pub enum ClaimSampler {
    Nominal,
    /// Claims from `proposal`, reweighted to the model's claim law.
    Tilted { proposal: HeavyTailDistribution },
}

impl ClaimSampler {
    #[inline]
    fn draw(&self, model: &RiskModel, stream: &mut RngStream, log_weight: &mut f64) -> f64 {
        match self {
            ClaimSampler::Nominal => model.claim().sample(stream),
            ClaimSampler::Tilted { proposal } => {
                let x = proposal.sample(stream);
                let target = model.claim().log_density(x).unwrap_or(f64::NEG_INFINITY);
                let proposed = proposal.log_density(x).unwrap_or(f64::NEG_INFINITY);
                *log_weight += target - proposed;
                x
            }
        }
    }
}

/// One path observed by several instances at once (common random numbers).
///
/// The path runs until every instance's stopping condition holds, so all
/// instances see the same horizon.
pub fn simulate_coupled(
    model: &RiskModel,
    instances: &[BarrierInstance],
    policy: &TruncationPolicy,
    sampler: &ClaimSampler,
    stream: &mut RngStream,
) -> Vec<PathOutcome> {
    let mut trackers: Vec<BarrierTracker> = instances
        .iter()
        .map(|inst| BarrierTracker::new(inst, model, policy))
        .collect();
    let gap = model.interarrival();
    let (p1, p2) = (model.p1(), model.p2());
    let latest_stop = trackers.iter().map(|t| t.stop_time).fold(0.0, f64::max);
    let mut arrival_time = 0.0;
    let mut claims_total = 0.0;
    let mut log_weight = 0.0;
    let mut n: u64 = 0;
    let mut done = false;
    let mut censored = false;

    // Until every instance is past N* and its time condition, observe fully.
    while !done {
        n += 1;
        arrival_time += gap.sample(stream);
        claims_total += sampler.draw(model, stream, &mut log_weight);
        let mut all_done = true;
        for tr in trackers.iter_mut() {
            tr.observe(n, arrival_time, claims_total);
            all_done &= tr.satisfied(arrival_time);
        }
        done = all_done;
        if !done && n >= policy.hard_step_cap {
            censored = true;
            done = true;
        }
        if arrival_time > latest_stop && trackers.iter().all(|t| t.n_star.is_some()) {
            break;
        }
    }

    // Afterwards only the deficits decide when to stop, and the tracker
    // with the lowest barriers stops last. Crossings can only happen
    // above the lowest barrier, so the running maxima are shared and
    // instances are visited only then.
    if !done {
        let low1 = trackers.iter().map(|t| t.x[0]).fold(f64::INFINITY, f64::min);
        let low2 = trackers.iter().map(|t| t.x[1]).fold(f64::INFINITY, f64::min);
        let margin = policy.deficit_margin;
        let mut max1 = f64::NEG_INFINITY;
        let mut max2 = f64::NEG_INFINITY;
        let (mut s1, mut s2);
        loop {
            n += 1;
            arrival_time += gap.sample(stream);
            claims_total += sampler.draw(model, stream, &mut log_weight);
            s1 = claims_total - p1 * arrival_time;
            s2 = claims_total - p2 * arrival_time;
            max1 = max1.max(s1);
            max2 = max2.max(s2);
            if s1 > low1 || s2 > low2 {
                for tr in trackers.iter_mut() {
                    tr.mark_crossings(s1, s2);
                }
            }
            if low1 - s1 > margin && low2 - s2 > margin {
                break;
            }
            if n >= policy.hard_step_cap {
                censored = true;
                break;
            }
        }
        for tr in trackers.iter_mut() {
            tr.post_max = [tr.post_max[0].max(max1), tr.post_max[1].max(max2)];
            tr.level = [s1, s2];
        }
    }
    trackers
        .iter()
        .map(|tr| tr.finish(model, n, censored, log_weight))
        .collect()
}

/// Simulate one path for one instance.
pub fn simulate_path(
    model: &RiskModel,
    instance: &BarrierInstance,
    policy: &TruncationPolicy,
    stream: &mut RngStream,
) -> Result<PathOutcome, SimulationError> {
    policy.validate()?;
    let outcome = simulate_coupled(
        model,
        std::slice::from_ref(instance),
        policy,
        &ClaimSampler::Nominal,
        stream,
    )
    .pop()
    .expect("one instance");
    if outcome.censored {
        Err(SimulationError::StepCapExceeded {
            cap: policy.hard_step_cap,
            outcome: Box::new(outcome),
        })
    } else {
        Ok(outcome)
    }
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const EVENTS: usize = 5;
const WEDGE: usize = 0;
const VEE: usize = 1;
const TIMES: usize = 2;
const FIRST: usize = 3;
const SECOND: usize = 4;

/// Running sums for one instance.
#[derive(Debug, Clone, Default)]
struct Tally {
    paths: u64,
    censored: u64,
    counts: [u64; EVENTS],
    weighted: [CompensatedSum; EVENTS],
    weighted_sq: [CompensatedSum; EVENTS],
    residual: [CompensatedSum; EVENTS],
    weight: CompensatedSum,
    weight_sq: CompensatedSum,
    /// A..F terms of the `N*` decomposition, see [`DecompositionReport`].
    terms: [u64; 6],
    n_star: CompensatedSum,
}

impl Tally {
    fn record(&mut self, o: &PathOutcome, x1: f64, x2: f64) {
        self.paths += 1;
        self.censored += u64::from(o.censored);
        let w = o.log_weight.exp();
        self.weight.add(w);
        self.weight_sq.add(w * w);
        let hits = [
            o.crossed_b1 || o.crossed_b2,
            o.crossed_simultaneous,
            o.crossed_b1 && o.crossed_b2,
            o.crossed_b1,
            o.crossed_b2,
        ];
        let res = [
            o.residuals.wedge,
            o.residuals.vee,
            o.residuals.times,
            o.residuals.first,
            o.residuals.second,
        ];
        for e in 0..EVENTS {
            if hits[e] {
                self.counts[e] += 1;
                self.weighted[e].add(w);
                self.weighted_sq[e].add(w * w);
            }
            self.residual[e].add(w * res[e]);
        }
        let pre1_safe = o.m1_pre <= x1;
        let terms = [
            o.m2_pre > x2,
            o.m2_pre <= x2 && o.m1_post > x1,
            o.m1_pre > x1,
            pre1_safe && o.m2_post > x2,
            o.m2_pre.max(o.m2_post) > x2,
            pre1_safe && o.m1_post > x1,
        ];
        for (t, hit) in self.terms.iter_mut().zip(terms) {
            *t += u64::from(hit);
        }
        self.n_star.add(o.n_star as f64);
    }

    fn merge(&mut self, other: &Tally) {
        self.paths += other.paths;
        self.censored += other.censored;
        for e in 0..EVENTS {
            self.counts[e] += other.counts[e];
            self.weighted[e].merge(&other.weighted[e]);
            self.weighted_sq[e].merge(&other.weighted_sq[e]);
            self.residual[e].merge(&other.residual[e]);
        }
        self.weight.merge(&other.weight);
        self.weight_sq.merge(&other.weight_sq);
        for (t, o) in self.terms.iter_mut().zip(other.terms) {
            *t += o;
        }
        self.n_star.merge(&other.n_star);
    }

    fn estimate(&self, e: usize) -> Estimate {
        let n = self.paths as f64;
        let s1 = self.weighted[e].value();
        let s2 = self.weighted_sq[e].value();
        let value = s1 / n;
        // E[Y²] - E[Y]² written so that unit weights give p(1-p) exactly
        let variance = ((s2 - s1) / n + value * (1.0 - value)).max(0.0);
        Estimate {
            value,
            half_width_95: Z_95 * (variance / n).sqrt(),
            replications: self.paths,
            residual_bias_bound: self.residual[e].value() / n,
        }
    }

    fn effective_sample_size(&self) -> f64 {
        let s = self.weight.value();
        s * s / self.weight_sq.value()
    }

    fn psi(&self) -> PsiEstimates {
        PsiEstimates {
            wedge: self.estimate(WEDGE),
            vee: self.estimate(VEE),
            times: self.estimate(TIMES),
            first: self.estimate(FIRST),
            second: self.estimate(SECOND),
            counts: EventCounts {
                wedge: self.counts[WEDGE],
                vee: self.counts[VEE],
                times: self.counts[TIMES],
                first: self.counts[FIRST],
                second: self.counts[SECOND],
            },
            replications: self.paths,
            censored: self.censored,
            effective_sample_size: self.effective_sample_size(),
        }
    }

    fn decomposition(&self, instance: &BarrierInstance) -> DecompositionReport {
        let [a, b, c, d, e, f] = self.terms;
        DecompositionReport {
            replications: self.paths,
            pre_second_exceeds: a,
            pre_second_safe_post_first_exceeds: b,
            pre_first_exceeds: c,
            pre_first_safe_post_second_exceeds: d,
            second_ever_exceeds: e,
            pre_first_safe_post_first_exceeds: f,
            direct_vee: self.counts[VEE],
            direct_wedge: self.counts[WEDGE],
            direct_times: self.counts[TIMES],
            mean_nstar_over_t: if instance.t() > 0.0 {
                self.n_star.value() / self.paths as f64 / instance.t()
            } else {
                f64::NAN
            },
        }
    }
}

/// A probability estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// `1.96 · sqrt(var / n)`; for unit weights `1.96 · sqrt(p(1-p)/n)`.
    pub half_width_95: f64,
    pub replications: u64,
    /// Mean residual crossing mass beyond truncation.
    pub residual_bias_bound: f64,
}

impl Estimate {
    pub fn interval(&self) -> (f64, f64) {
        (self.value - self.half_width_95, self.value + self.half_width_95)
    }

    pub fn overlaps(&self, other: &Estimate) -> bool {
        let (a0, a1) = self.interval();
        let (b0, b1) = other.interval();
        a0 <= b1 && b0 <= a1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventCounts {
    pub wedge: u64,
    pub vee: u64,
    pub times: u64,
    pub first: u64,
    pub second: u64,
}

/// Estimates of all five probabilities from the same paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiEstimates {
    /// At least one barrier crossed.
    pub wedge: Estimate,
    /// Both barriers crossed at the same epoch.
    pub vee: Estimate,
    /// Both barriers crossed, possibly at different epochs.
    pub times: Estimate,
    pub first: Estimate,
    pub second: Estimate,
    pub counts: EventCounts,
    pub replications: u64,
    pub censored: u64,
    pub effective_sample_size: f64,
}

impl PsiEstimates {
    pub fn censored_fraction(&self) -> f64 {
        self.censored as f64 / self.replications as f64
    }
}

/// Path counts of the terms splitting each probability at `N*`.
///
/// Labels: A = `{M2_{N*} > K}`, B = `{M2_{N*} <= K, M1_post > aK}`,
/// C = `{M1_{N*} > aK}`, D = `{M1_{N*} <= aK, M2_post > K}`,
/// E = `{M2_∞ > K}`, F = `{M1_{N*} <= aK, M1_post > aK}`. Then
/// `ψ_∨ = A + B`, `ψ_∧ = C + D`, `ψ_× = E + F - D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionReport {
    pub replications: u64,
    pub pre_second_exceeds: u64,
    pub pre_second_safe_post_first_exceeds: u64,
    pub pre_first_exceeds: u64,
    pub pre_first_safe_post_second_exceeds: u64,
    pub second_ever_exceeds: u64,
    pub pre_first_safe_post_first_exceeds: u64,
    pub direct_vee: u64,
    pub direct_wedge: u64,
    pub direct_times: u64,
    pub mean_nstar_over_t: f64,
}

impl DecompositionReport {
    pub fn probability(&self, count: u64) -> f64 {
        count as f64 / self.replications as f64
    }

    pub fn reconstructed_vee_count(&self) -> i64 {
        (self.pre_second_exceeds + self.pre_second_safe_post_first_exceeds) as i64
    }

    pub fn reconstructed_wedge_count(&self) -> i64 {
        (self.pre_first_exceeds + self.pre_first_safe_post_second_exceeds) as i64
    }

    pub fn reconstructed_times_count(&self) -> i64 {
        (self.second_ever_exceeds + self.pre_first_safe_post_first_exceeds) as i64
            - self.pre_first_safe_post_second_exceeds as i64
    }

    pub fn reconstructed_vee(&self) -> f64 {
        self.reconstructed_vee_count() as f64 / self.replications as f64
    }

    pub fn reconstructed_wedge(&self) -> f64 {
        self.reconstructed_wedge_count() as f64 / self.replications as f64
    }

    pub fn reconstructed_times(&self) -> f64 {
        self.reconstructed_times_count() as f64 / self.replications as f64
    }
}

/// Parallel execution settings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

fn with_pool<T: Send>(opts: SimOptions, job: impl FnOnce() -> T + Send) -> Result<T, SimulationError> {
    match opts.workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| SimulationError::ThreadPool(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

fn run_tallies(
    model: &RiskModel,
    instances: &[BarrierInstance],
    policy: &TruncationPolicy,
    replications: u64,
    seed: u64,
    sampler: &ClaimSampler,
    opts: SimOptions,
) -> Result<Vec<Tally>, SimulationError> {
    policy.validate()?;
    if replications == 0 {
        return Err(SimulationError::InvalidRequest("replications must be >= 1".into()));
    }
    if instances.is_empty() {
        return Err(SimulationError::InvalidRequest("no instances".into()));
    }
    let chunks = replications.div_ceil(CHUNK);
    let partials: Vec<Vec<Tally>> = with_pool(opts, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut tallies = vec![Tally::default(); instances.len()];
                let end = ((c + 1) * CHUNK).min(replications);
                for rep in c * CHUNK..end {
                    let mut stream = RngStream::new(seed, rep);
                    let outcomes = simulate_coupled(model, instances, policy, sampler, &mut stream);
                    for ((t, o), inst) in tallies.iter_mut().zip(&outcomes).zip(instances) {
                        t.record(o, inst.x1(), inst.x2());
                    }
                }
                tallies
            })
            .collect()
    })?;
    let mut total = vec![Tally::default(); instances.len()];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    let censored = total[0].censored;
    if censored as f64 > MAX_CENSORED_FRACTION * replications as f64 {
        return Err(SimulationError::ExcessiveCensoring {
            censored,
            replications,
        });
    }
    Ok(total)
}

/// Estimates and `N*` decomposition for one instance of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub psi: PsiEstimates,
    pub decomposition: DecompositionReport,
}

/// Crude Monte Carlo for several instances on common paths.
pub fn estimate_psi_sweep(
    model: &RiskModel,
    instances: &[BarrierInstance],
    policy: &TruncationPolicy,
    replications: u64,
    seed: u64,
    opts: SimOptions,
) -> Result<Vec<InstanceResult>, SimulationError> {
    let tallies = run_tallies(
        model,
        instances,
        policy,
        replications,
        seed,
        &ClaimSampler::Nominal,
        opts,
    )?;
    Ok(tallies
        .iter()
        .zip(instances)
        .map(|(t, inst)| InstanceResult {
            psi: t.psi(),
            decomposition: t.decomposition(inst),
        })
        .collect())
}

/// Crude Monte Carlo estimates of `ψ_∧, ψ_∨, ψ_×, ψ_1, ψ_2`.
pub fn estimate_psi(
    model: &RiskModel,
    instance: &BarrierInstance,
    policy: &TruncationPolicy,
    replications: u64,
    seed: u64,
    opts: SimOptions,
) -> Result<PsiEstimates, SimulationError> {
    let mut r = estimate_psi_sweep(
        model,
        std::slice::from_ref(instance),
        policy,
        replications,
        seed,
        opts,
    )?;
    Ok(r.pop().expect("one instance").psi)
}

/// Path counts of every term of the `N*` decomposition.
pub fn decomposition_stats(
    model: &RiskModel,
    instance: &BarrierInstance,
    policy: &TruncationPolicy,
    replications: u64,
    seed: u64,
    opts: SimOptions,
) -> Result<DecompositionReport, SimulationError> {
    if instance.regime() != Regime::TwoDim {
        return Err(SimulationError::InvalidRequest(
            "decomposition requires crossing barriers (a < 1)".into(),
        ));
    }
    let mut r = estimate_psi_sweep(
        model,
        std::slice::from_ref(instance),
        policy,
        replications,
        seed,
        opts,
    )?;
    Ok(r.pop().expect("one instance").decomposition)
}

/// Likelihood-ratio estimates with claims drawn from a heavier Lomax.
///
/// The proposal keeps the claim scale and uses index `tilt_alpha`; each
/// path is weighted by `Π f(σ_k)/g(σ_k)` over its simulated claims.
pub fn importance_estimate(
    model: &RiskModel,
    instance: &BarrierInstance,
    policy: &TruncationPolicy,
    replications: u64,
    tilt_alpha: f64,
    seed: u64,
    opts: SimOptions,
) -> Result<PsiEstimates, SimulationError> {
    let mut r = importance_sweep(
        model,
        std::slice::from_ref(instance),
        policy,
        replications,
        tilt_alpha,
        seed,
        opts,
    )?;
    Ok(r.pop().expect("one instance"))
}

/// [`importance_estimate`] for several instances on common paths, with the
/// same stopping rule as [`estimate_psi_sweep`].
pub fn importance_sweep(
    model: &RiskModel,
    instances: &[BarrierInstance],
    policy: &TruncationPolicy,
    replications: u64,
    tilt_alpha: f64,
    seed: u64,
    opts: SimOptions,
) -> Result<Vec<PsiEstimates>, SimulationError> {
    let (scale, alpha) = match model.claim().family() {
        Family::Lomax { scale, alpha } => (*scale, *alpha),
        other => {
            return Err(SimulationError::InvalidRequest(format!(
                "importance sampling needs Lomax claims, got {}",
                other.name()
            )))
        }
    };
    if !(tilt_alpha > 1.0 && tilt_alpha <= alpha) {
        return Err(SimulationError::InvalidRequest(format!(
            "tilt_alpha must lie in (1, {alpha}], got {tilt_alpha}"
        )));
    }
    let proposal = HeavyTailDistribution::lomax(scale, tilt_alpha)
        .map_err(|e| SimulationError::InvalidRequest(e.to_string()))?;
    let tallies = run_tallies(
        model,
        instances,
        policy,
        replications,
        seed,
        &ClaimSampler::Tilted { proposal },
        opts,
    )?;
    let psi: Vec<PsiEstimates> = tallies.iter().map(Tally::psi).collect();
    // Weights belong to paths, so every instance shares one sample size.
    let ess = psi[0].effective_sample_size;
    if ess < MIN_ESS_FRACTION * replications as f64 {
        return Err(SimulationError::WeightDegeneracy { ess, replications });
    }
    Ok(psi)
}

/// Empirical `P(|N*/T - 1| > ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NStarConcentration {
    pub fraction: f64,
    pub exceedances: u64,
    pub replications: u64,
    pub t: f64,
    /// `F̄(T)`, the scale the deviation probability is compared against.
    pub claim_tail_at_t: f64,
}

/// Simulates the renewal epochs up to `T̃` on the same streams as the path
/// simulator, so `N*` agrees with [`PathOutcome::n_star`] replication by
/// replication.
pub fn nstar_concentration(
    model: &RiskModel,
    instance: &BarrierInstance,
    replications: u64,
    epsilon: f64,
    seed: u64,
    opts: SimOptions,
) -> Result<NStarConcentration, SimulationError> {
    if !(epsilon > 0.0) {
        return Err(SimulationError::InvalidRequest("epsilon must be positive".into()));
    }
    if instance.regime() != Regime::TwoDim {
        return Err(SimulationError::InvalidRequest(
            "N* concentration requires crossing barriers (a < 1)".into(),
        ));
    }
    let t = instance.t();
    let t_tilde = instance.t_tilde();
    let chunks = replications.div_ceil(CHUNK);
    let exceedances: u64 = with_pool(opts, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let end = ((c + 1) * CHUNK).min(replications);
                (c * CHUNK..end)
                    .filter(|&rep| {
                        let mut stream = RngStream::new(seed, rep);
                        let mut arrival = 0.0;
                        let mut n: u64 = 0;
                        while arrival <= t_tilde {
                            n += 1;
                            arrival += model.interarrival().sample(&mut stream);
                            model.claim().sample(&mut stream);
                        }
                        let n_star = (n - 1) as f64;
                        (n_star / t - 1.0).abs() > epsilon
                    })
                    .count() as u64
            })
            .sum()
    })?;
    Ok(NStarConcentration {
        fraction: exceedances as f64 / replications as f64,
        exceedances,
        replications,
        t,
        claim_tail_at_t: model.claim().tail(t),
    })
}
