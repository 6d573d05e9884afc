//! Claim and inter-arrival laws.
//!
//! Every family exposes its tail `F̄(x) = 1 - F(x)`, the tail integral
//! `∫_w^∞ F̄(y) dy`, the integrated-tail complement, raw moments and an
//! inverse-CDF sampler driven by an [`RngStream`].

use std::f64::consts::{PI, SQRT_2};

use statrs::function::{erf, gamma};
use thiserror::Error;

use crate::quadrature::{gauss_kronrod, Tolerance};
use crate::rng::RngStream;

/// Absolute tolerance for quadrature-backed tail integrals.
pub const TAIL_INTEGRAL_ABS_TOL: f64 = 1e-10;
/// Relative tolerance for quadrature-backed tail integrals.
pub const TAIL_INTEGRAL_REL_TOL: f64 = 1e-8;

const PIECE_TOL: Tolerance = Tolerance::new(1e-14, 1e-11);
const MAX_DOUBLINGS: usize = 400;
const ENVELOPE_MAX_ORDER: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("invalid {family} parameter: {reason}")]
    InvalidParameter { family: &'static str, reason: String },
    #[error("Lomax index alpha = {alpha} <= 1 has infinite mean")]
    InfiniteMean { alpha: f64 },
    #[error("discrete probabilities sum to {sum}, expected 1")]
    ProbabilitySum { sum: f64 },
    #[error("tail integral did not converge at w = {w}")]
    NonIntegrableTail { w: f64 },
}

fn invalid(family: &'static str, reason: impl Into<String>) -> DistributionError {
    DistributionError::InvalidParameter {
        family,
        reason: reason.into(),
    }
}

/// A raw moment that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Infinite,
}

impl Moment {
    pub fn is_finite(&self) -> bool {
        matches!(self, Moment::Finite(_))
    }

    /// The value, with `Infinite` mapped to `f64::INFINITY`.
    pub fn value(&self) -> f64 {
        match *self {
            Moment::Finite(v) => v,
            Moment::Infinite => f64::INFINITY,
        }
    }
}

/// Regular-variation parameters: `F̄(x) ~ constant · x^(-index)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularVariation {
    pub constant: f64,
    pub index: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Pareto type II: `F̄(x) = (1 + x/scale)^(-alpha)`.
    Lomax { scale: f64, alpha: f64 },
    /// `F̄(x) = exp(-(x/scale)^shape)` with `0 < shape < 1`.
    Weibull { shape: f64, scale: f64 },
    /// `ln X ~ N(location, scale²)`.
    Lognormal { location: f64, scale: f64 },
    Exponential { rate: f64 },
    Deterministic { value: f64 },
    /// Atoms `(value, probability)`, sorted by value.
    DiscreteFinite { atoms: Vec<(f64, f64)> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Lomax { .. } => "lomax",
            Family::Weibull { .. } => "weibull",
            Family::Lognormal { .. } => "lognormal",
            Family::Exponential { .. } => "exponential",
            Family::Deterministic { .. } => "deterministic",
            Family::DiscreteFinite { .. } => "discrete",
        }
    }
}

/// An immutable nonnegative law with finite mean.
#[derive(Debug, Clone, PartialEq)]
pub struct HeavyTailDistribution {
    family: Family,
    mean: f64,
    /// Cumulative probabilities for `DiscreteFinite`, empty otherwise.
    cumulative: Vec<f64>,
}

fn positive_finite(family: &'static str, name: &str, v: f64) -> Result<(), DistributionError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(family, format!("{name} must be positive and finite, got {v}")))
    }
}

impl HeavyTailDistribution {
    pub fn lomax(scale: f64, alpha: f64) -> Result<Self, DistributionError> {
        positive_finite("lomax", "scale", scale)?;
        positive_finite("lomax", "alpha", alpha)?;
        if alpha <= 1.0 {
            return Err(DistributionError::InfiniteMean { alpha });
        }
        Self::from_family(Family::Lomax { scale, alpha })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self, DistributionError> {
        positive_finite("weibull", "shape", shape)?;
        positive_finite("weibull", "scale", scale)?;
        if shape >= 1.0 {
            return Err(invalid(
                "weibull",
                format!("shape must be < 1 for a subexponential tail, got {shape}"),
            ));
        }
        Self::from_family(Family::Weibull { shape, scale })
    }

    pub fn lognormal(location: f64, scale: f64) -> Result<Self, DistributionError> {
        if !location.is_finite() {
            return Err(invalid("lognormal", "location must be finite"));
        }
        positive_finite("lognormal", "scale", scale)?;
        Self::from_family(Family::Lognormal { location, scale })
    }

    pub fn exponential(rate: f64) -> Result<Self, DistributionError> {
        positive_finite("exponential", "rate", rate)?;
        Self::from_family(Family::Exponential { rate })
    }

    /// Point mass at `value >= 0`.
    pub fn deterministic(value: f64) -> Result<Self, DistributionError> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(invalid("deterministic", format!("value must be >= 0, got {value}")));
        }
        Self::from_family(Family::Deterministic { value })
    }

    /// Finite discrete law over nonnegative atoms.
    pub fn discrete(atoms: &[(f64, f64)]) -> Result<Self, DistributionError> {
        if atoms.is_empty() {
            return Err(invalid("discrete", "at least one atom is required"));
        }
        for &(v, p) in atoms {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid("discrete", format!("atom value {v} must be >= 0")));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(invalid("discrete", format!("probability {p} must be >= 0")));
            }
        }
        let sum: f64 = atoms.iter().map(|a| a.1).sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(DistributionError::ProbabilitySum { sum });
        }
        let mut sorted = atoms.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self::from_family(Family::DiscreteFinite { atoms: sorted })
    }

    fn from_family(family: Family) -> Result<Self, DistributionError> {
        let cumulative = match &family {
            Family::DiscreteFinite { atoms } => atoms
                .iter()
                .scan(0.0, |acc, &(_, p)| {
                    *acc += p;
                    Some(*acc)
                })
                .collect(),
            _ => Vec::new(),
        };
        let mut d = Self {
            family,
            mean: 0.0,
            cumulative,
        };
        d.mean = match d.raw_moment(1) {
            Moment::Finite(m) => m,
            Moment::Infinite => {
                return Err(invalid(d.family.name(), "mean is infinite"));
            }
        };
        Ok(d)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `(A, α)` when the tail is regularly varying.
    pub fn rv_params(&self) -> Option<RegularVariation> {
        match self.family {
            Family::Lomax { scale, alpha } => Some(RegularVariation {
                constant: scale.powf(alpha),
                index: alpha,
            }),
            _ => None,
        }
    }

    /// Whether `tail_integral` has a closed form for this family.
    pub fn has_closed_form_tail_integral(&self) -> bool {
        !matches!(
            self.family,
            Family::Weibull { .. } | Family::Lognormal { .. }
        )
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(
            self.family,
            Family::Deterministic { .. } | Family::DiscreteFinite { .. }
        )
    }

    /// `F̄(x) = P(X > x)`.
    pub fn tail(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 1.0;
        }
        match &self.family {
            Family::Lomax { scale, alpha } => (-alpha * (x / scale).ln_1p()).exp(),
            Family::Weibull { shape, scale } => (-(x / scale).powf(*shape)).exp(),
            Family::Lognormal { location, scale } => {
                if x == 0.0 {
                    1.0
                } else {
                    0.5 * erf::erfc((x.ln() - location) / (scale * SQRT_2))
                }
            }
            Family::Exponential { rate } => (-rate * x).exp(),
            Family::Deterministic { value } => {
                if *value > x {
                    1.0
                } else {
                    0.0
                }
            }
            Family::DiscreteFinite { atoms } => {
                atoms.iter().filter(|a| a.0 > x).map(|a| a.1).sum()
            }
        }
    }

    /// `F(x) = P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Lomax { scale, alpha } => -(-alpha * (x / scale).ln_1p()).exp_m1(),
            Family::Weibull { shape, scale } => -(-(x / scale).powf(*shape)).exp_m1(),
            Family::Exponential { rate } => -(-rate * x).exp_m1(),
            _ => 1.0 - self.tail(x),
        }
    }

    /// `∫_w^∞ F̄(y) dy`.
    pub fn tail_integral(&self, w: f64) -> f64 {
        if w.is_infinite() && w > 0.0 {
            return 0.0;
        }
        if w < 0.0 {
            return self.mean - w;
        }
        match &self.family {
            Family::Lomax { scale, alpha } => {
                scale / (alpha - 1.0) * ((1.0 - alpha) * (w / scale).ln_1p()).exp()
            }
            Family::Exponential { rate } => (-rate * w).exp() / rate,
            Family::Deterministic { value } => (value - w).max(0.0),
            Family::DiscreteFinite { atoms } => {
                atoms.iter().map(|&(v, p)| p * (v - w).max(0.0)).sum()
            }
            Family::Weibull { .. } | Family::Lognormal { .. } => self
                .tail_integral_by_quadrature(w)
                .expect("finite-moment family has an integrable tail"),
        }
    }

    /// Adaptive quadrature of the tail over `[w, w + span]`, doubling the
    /// span until a moment envelope bounds the remainder below tolerance.
    pub fn tail_integral_by_quadrature(&self, w: f64) -> Result<f64, DistributionError> {
        let mut acc = 0.0;
        let mut comp = 0.0;
        let mut lo = w.max(0.0);
        let mut span = self.mean.max(1e-6);
        for _ in 0..MAX_DOUBLINGS {
            let hi = lo + span;
            let piece = gauss_kronrod(|y| self.tail(y), lo, hi, PIECE_TOL).value;
            // Neumaier
            let t = acc + piece;
            if acc.abs() >= piece.abs() {
                comp += (acc - t) + piece;
            } else {
                comp += (piece - t) + acc;
            }
            acc = t;
            let total = acc + comp;
            let remainder = self.moment_envelope(hi);
            if remainder <= TAIL_INTEGRAL_ABS_TOL.max(TAIL_INTEGRAL_REL_TOL * total) * 1e-2 {
                return Ok(total);
            }
            lo = hi;
            span *= 2.0;
        }
        Err(DistributionError::NonIntegrableTail { w })
    }

    /// Markov bound `∫_u^∞ F̄ <= E[X^k] u^(1-k) / (k-1)`, minimised over `k`.
    fn moment_envelope(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return f64::INFINITY;
        }
        (2..=ENVELOPE_MAX_ORDER)
            .filter_map(|k| match self.raw_moment(k) {
                Moment::Finite(m) if m.is_finite() => {
                    let kf = f64::from(k);
                    Some((m.ln() - (kf - 1.0) * u.ln()).exp() / (kf - 1.0))
                }
                _ => None,
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `F̄_I(x)`, the complement of the integrated-tail law.
    pub fn integrated_tail_complement(&self, x: f64) -> f64 {
        (self.tail_integral(x) / self.mean).clamp(0.0, 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn second_moment(&self) -> Moment {
        self.raw_moment(2)
    }

    pub fn third_moment(&self) -> Moment {
        self.raw_moment(3)
    }

    /// `E[X^k]`.
    pub fn raw_moment(&self, k: u32) -> Moment {
        let kf = f64::from(k);
        match &self.family {
            Family::Lomax { scale, alpha } => {
                if *alpha <= kf {
                    return Moment::Infinite;
                }
                let mut m = 1.0;
                for j in 1..=k {
                    m *= f64::from(j) * scale / (alpha - f64::from(j));
                }
                Moment::Finite(m)
            }
            Family::Weibull { shape, scale } => {
                Moment::Finite(scale.powf(kf) * gamma::gamma(1.0 + kf / shape))
            }
            Family::Lognormal { location, scale } => {
                Moment::Finite((kf * location + 0.5 * kf * kf * scale * scale).exp())
            }
            Family::Exponential { rate } => {
                let fact: f64 = (1..=k).map(f64::from).product();
                Moment::Finite(fact / rate.powf(kf))
            }
            Family::Deterministic { value } => Moment::Finite(value.powf(kf)),
            Family::DiscreteFinite { atoms } => {
                Moment::Finite(atoms.iter().map(|&(v, p)| p * v.powf(kf)).sum())
            }
        }
    }

    /// Closed-form inverse CDF, `None` for the lognormal family.
    pub fn inverse_cdf(&self, u: f64) -> Option<f64> {
        match &self.family {
            Family::Lomax { scale, alpha } => Some(scale * (-(-u).ln_1p() / alpha).exp_m1()),
            Family::Weibull { shape, scale } => Some(scale * (-(-u).ln_1p()).powf(1.0 / shape)),
            Family::Exponential { rate } => Some(-(-u).ln_1p() / rate),
            Family::Deterministic { value } => Some(*value),
            Family::DiscreteFinite { atoms } => {
                let idx = self
                    .cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(atoms.len() - 1);
                Some(atoms[idx].0)
            }
            Family::Lognormal { .. } => None,
        }
    }

    /// `F̄^{-1}(u)`, i.e. `inverse_cdf(1 - u)` without the cancellation.
    pub fn inverse_tail(&self, u: f64) -> Option<f64> {
        match &self.family {
            Family::Lomax { scale, alpha } => Some(scale * (u.powf(-1.0 / alpha) - 1.0)),
            Family::Weibull { shape, scale } => Some(scale * (-u.ln()).powf(1.0 / shape)),
            Family::Exponential { rate } => Some(-u.ln() / rate),
            Family::Deterministic { value } => Some(*value),
            Family::DiscreteFinite { .. } => self.inverse_cdf(1.0 - u),
            Family::Lognormal { .. } => None,
        }
    }

    /// One variate from `stream`: one uniform through [`Self::inverse_tail`],
    /// or two through Box-Muller for the lognormal.
    #[inline]
    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        match &self.family {
            Family::Lognormal { location, scale } => {
                let u1 = stream.next_uniform();
                let u2 = stream.next_uniform();
                let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
                (location + scale * z).exp()
            }
            Family::Deterministic { value } => *value,
            Family::DiscreteFinite { atoms } => {
                let u = stream.next_uniform();
                let idx = self
                    .cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(atoms.len() - 1);
                atoms[idx].0
            }
            _ => {
                let u = stream.next_uniform();
                self.inverse_tail(u).expect("closed-form inverse")
            }
        }
    }

    /// Log density for the absolutely continuous families.
    pub fn log_density(&self, x: f64) -> Option<f64> {
        if x < 0.0 {
            return Some(f64::NEG_INFINITY);
        }
        match &self.family {
            Family::Lomax { scale, alpha } => {
                Some((alpha / scale).ln() - (alpha + 1.0) * (x / scale).ln_1p())
            }
            Family::Exponential { rate } => Some(rate.ln() - rate * x),
            Family::Weibull { shape, scale } => {
                let z = x / scale;
                Some((shape / scale).ln() + (shape - 1.0) * z.ln() - z.powf(*shape))
            }
            Family::Lognormal { location, scale } => {
                let z = (x.ln() - location) / scale;
                Some(-x.ln() - scale.ln() - 0.5 * (2.0 * PI).ln() - 0.5 * z * z)
            }
            Family::Deterministic { .. } | Family::DiscreteFinite { .. } => None,
        }
    }
}
