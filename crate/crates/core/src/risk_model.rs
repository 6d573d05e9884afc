//! The two-company renewal model and the geometry of its barriers.
//!
//! Company `i` holds reserve `x_i` and collects premium at rate `p_i`; both
//! pay the same claims. The barriers are `b_i(t) = x_i + p_i t`, and the
//! embedded random walks `S^(i)_n = Ξ_n - p_i T_n` have drift `-m_i`.

use thiserror::Error;

use crate::heavy_tails::{HeavyTailDistribution, Moment};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("UnorderedPremiums: p1 = {p1} must exceed p2 = {p2}")]
    UnorderedPremiums { p1: f64, p2: f64 },
    #[error("Unstable: p2 = {p2} must exceed rho = {rho}")]
    Unstable { p2: f64, rho: f64 },
    #[error("invalid premium rate {0}")]
    InvalidPremium(f64),
    #[error("degenerate {which} law: mean must be positive and finite")]
    DegenerateLaw { which: &'static str },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// One of the two companies (equivalently, barriers or walks).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Company {
    First,
    Second,
}

impl Company {
    pub const BOTH: [Company; 2] = [Company::First, Company::Second];

    pub fn index(self) -> usize {
        match self {
            Company::First => 0,
            Company::Second => 1,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Company::First),
            2 => Some(Company::Second),
            _ => None,
        }
    }
}

/// Whether the barriers cross (`a < 1`) or the problem reduces to two
/// one-dimensional ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    OneDim,
    TwoDim,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::OneDim => "OneDim",
            Regime::TwoDim => "TwoDim",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskModel {
    claim: HeavyTailDistribution,
    interarrival: HeavyTailDistribution,
    p: [f64; 2],
    lambda: f64,
    mu: f64,
    rho: f64,
    drift: [f64; 2],
}

impl RiskModel {
    /// Validates `p1 > p2 > rho` and derives the drifts.
    pub fn new(
        claim: HeavyTailDistribution,
        interarrival: HeavyTailDistribution,
        p1: f64,
        p2: f64,
    ) -> Result<Self, ModelError> {
        for p in [p1, p2] {
            if !(p.is_finite() && p > 0.0) {
                return Err(ModelError::InvalidPremium(p));
            }
        }
        let mean_claim = claim.mean();
        let mean_gap = interarrival.mean();
        if !(mean_claim.is_finite() && mean_claim > 0.0) {
            return Err(ModelError::DegenerateLaw { which: "claim" });
        }
        if !(mean_gap.is_finite() && mean_gap > 0.0) {
            return Err(ModelError::DegenerateLaw {
                which: "inter-arrival",
            });
        }
        if p1 <= p2 {
            return Err(ModelError::UnorderedPremiums { p1, p2 });
        }
        let rho = mean_claim / mean_gap;
        if p2 <= rho {
            return Err(ModelError::Unstable { p2, rho });
        }
        let drift = [p1 * mean_gap - mean_claim, p2 * mean_gap - mean_claim];
        Ok(Self {
            claim,
            interarrival,
            p: [p1, p2],
            lambda: 1.0 / mean_gap,
            mu: 1.0 / mean_claim,
            rho,
            drift,
        })
    }

    pub fn claim(&self) -> &HeavyTailDistribution {
        &self.claim
    }

    pub fn interarrival(&self) -> &HeavyTailDistribution {
        &self.interarrival
    }

    pub fn premium(&self, company: Company) -> f64 {
        self.p[company.index()]
    }

    pub fn p1(&self) -> f64 {
        self.p[0]
    }

    pub fn p2(&self) -> f64 {
        self.p[1]
    }

    /// Arrival intensity `1 / E[ζ]`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `1 / E[σ]`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Loading `λ/μ = E[σ]/E[ζ]`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `m_i = p_i E[ζ] - E[σ]`.
    pub fn drift(&self, company: Company) -> f64 {
        self.drift[company.index()]
    }

    pub fn m1(&self) -> f64 {
        self.drift[0]
    }

    pub fn m2(&self) -> f64 {
        self.drift[1]
    }

    /// Whether `E[ζ³] < ∞`; without it the two-dimensional asymptotes lose
    /// their guarantee but remain computable.
    pub fn interarrival_third_moment_finite(&self) -> bool {
        matches!(self.interarrival.third_moment(), Moment::Finite(_))
    }

    /// Whether the claim tail is regularly varying with index in (1, 2).
    pub fn claim_index_in_stable_range(&self) -> bool {
        self.claim
            .rv_params()
            .is_some_and(|rv| rv.index > 1.0 && rv.index < 2.0)
    }

    /// Places reserves `x1 = aK`, `x2 = K`.
    pub fn instance(&self, a: f64, k: f64) -> Result<BarrierInstance, ModelError> {
        if !(a.is_finite() && a > 0.0) {
            return Err(ModelError::InvalidInstance(format!("a must be positive, got {a}")));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(ModelError::InvalidInstance(format!("K must be positive, got {k}")));
        }
        Ok(self.instance_from_reserves(a * k, k, a, k))
    }

    /// Instance with explicit reserves, for problems not parameterised by
    /// a ray. `a = x1/x2`, `K = x2`.
    pub fn instance_with_reserves(&self, x1: f64, x2: f64) -> Result<BarrierInstance, ModelError> {
        if !(x1.is_finite() && x1 > 0.0 && x2.is_finite() && x2 > 0.0) {
            return Err(ModelError::InvalidInstance(format!(
                "reserves must be positive, got ({x1}, {x2})"
            )));
        }
        Ok(self.instance_from_reserves(x1, x2, x1 / x2, x2))
    }

    fn instance_from_reserves(&self, x1: f64, x2: f64, a: f64, k: f64) -> BarrierInstance {
        let dm = self.m1() - self.m2();
        let dp = self.p1() - self.p2();
        BarrierInstance {
            a,
            k,
            x: [x1, x2],
            p: self.p,
            t: (x2 - x1) / dm,
            t_tilde: (x2 - x1) / dp,
            c: (1.0 - a) / dm,
            regime: if x1 < x2 { Regime::TwoDim } else { Regime::OneDim },
        }
    }
}

/// Reserves and crossing epochs for one `(a, K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierInstance {
    a: f64,
    k: f64,
    x: [f64; 2],
    p: [f64; 2],
    t: f64,
    t_tilde: f64,
    c: f64,
    regime: Regime,
}

impl BarrierInstance {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn reserve(&self, company: Company) -> f64 {
        self.x[company.index()]
    }

    pub fn x1(&self) -> f64 {
        self.x[0]
    }

    pub fn x2(&self) -> f64 {
        self.x[1]
    }

    /// Crossing epoch of the drift lines `x_i + m_i t`, in walk steps.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Crossing epoch of the barriers themselves, in calendar time.
    pub fn t_tilde(&self) -> f64 {
        self.t_tilde
    }

    /// `T = c K`.
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `b_i(t) = x_i + p_i t`.
    pub fn barrier_value(&self, company: Company, t: f64) -> f64 {
        let i = company.index();
        self.x[i] + self.p[i] * t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical() -> RiskModel {
        RiskModel::new(
            HeavyTailDistribution::lomax(1.0, 1.5).unwrap(),
            HeavyTailDistribution::exponential(1.0).unwrap(),
            4.0,
            3.0,
        )
        .unwrap()
    }

    #[test]
    fn canonical_derived_quantities() {
        let m = canonical();
        assert_eq!(m.lambda(), 1.0);
        assert_eq!(m.mu(), 0.5);
        assert_eq!(m.rho(), 2.0);
        assert_eq!(m.m1(), 2.0);
        assert_eq!(m.m2(), 1.0);
        assert!(m.interarrival_third_moment_finite());
        assert!(m.claim_index_in_stable_range());
    }

    #[test]
    fn premium_validation() {
        let claim = HeavyTailDistribution::lomax(1.0, 1.5).unwrap();
        let gap = HeavyTailDistribution::exponential(1.0).unwrap();
        assert_eq!(
            RiskModel::new(claim.clone(), gap.clone(), 3.0, 4.0),
            Err(ModelError::UnorderedPremiums { p1: 3.0, p2: 4.0 })
        );
        let err = RiskModel::new(claim.clone(), gap.clone(), 4.0, 2.0).unwrap_err();
        assert_eq!(err, ModelError::Unstable { p2: 2.0, rho: 2.0 });
        assert!(err.to_string().starts_with("Unstable"));
        assert!(RiskModel::new(claim, gap, 4.0, -1.0).is_err());
    }

    #[test]
    fn zero_mean_claims_rejected() {
        let r = RiskModel::new(
            HeavyTailDistribution::deterministic(0.0).unwrap(),
            HeavyTailDistribution::exponential(1.0).unwrap(),
            4.0,
            3.0,
        );
        assert!(matches!(r, Err(ModelError::DegenerateLaw { .. })));
    }

    #[test]
    fn canonical_instance() {
        let m = canonical();
        let inst = m.instance(0.5, 100.0).unwrap();
        assert_eq!(inst.x1(), 50.0);
        assert_eq!(inst.x2(), 100.0);
        assert_eq!(inst.t(), 50.0);
        assert_eq!(inst.t_tilde(), 50.0);
        assert_eq!(inst.c(), 0.5);
        assert_eq!(inst.regime(), Regime::TwoDim);
        let inst = m.instance(0.5, 200.0).unwrap();
        assert_eq!(inst.t(), 100.0);
        assert_eq!(inst.t(), inst.c() * inst.k());
    }

    #[test]
    fn coinciding_lines_are_one_dimensional() {
        let m = canonical();
        let inst = m.instance(1.0, 37.0).unwrap();
        assert_eq!(inst.t(), 0.0);
        assert_eq!(inst.regime(), Regime::OneDim);
        let inst = m.instance(2.0, 10.0).unwrap();
        assert!(inst.t() < 0.0);
        assert_eq!(inst.regime(), Regime::OneDim);
    }

    #[test]
    fn t_tilde_is_t_over_lambda() {
        let m = RiskModel::new(
            HeavyTailDistribution::lomax(1.0, 1.5).unwrap(),
            HeavyTailDistribution::exponential(0.5).unwrap(),
            9.0,
            5.0,
        )
        .unwrap();
        let inst = m.instance(0.3, 70.0).unwrap();
        assert!((inst.t_tilde() - inst.t() / m.lambda()).abs() < 1e-12);
    }

    #[test]
    fn barrier_values() {
        let inst = canonical().instance(0.5, 100.0).unwrap();
        assert_eq!(inst.barrier_value(Company::First, 0.0), 50.0);
        assert_eq!(inst.barrier_value(Company::Second, 10.0), 130.0);
        assert_eq!(inst.barrier_value(Company::Second, 50.0), 250.0);
        assert_eq!(inst.barrier_value(Company::First, 50.0), 250.0);
    }

    #[test]
    fn barrier_ordering_on_grid() {
        let inst = canonical().instance(0.5, 100.0).unwrap();
        let tt = inst.t_tilde();
        for j in 0..1000 {
            let t = 2.0 * tt * f64::from(j) / 1000.0;
            let (b1, b2) = (
                inst.barrier_value(Company::First, t),
                inst.barrier_value(Company::Second, t),
            );
            if t < tt {
                assert!(b1 < b2);
            } else if t > tt {
                assert!(b1 > b2);
            } else {
                assert_eq!(b1, b2);
            }
        }
    }

    #[test]
    fn instance_scales_linearly_in_k() {
        let m = canonical();
        for s in [0.5, 2.0, 7.5] {
            let t = m.instance(0.3, 40.0).unwrap().t();
            let ts = m.instance(0.3, 40.0 * s).unwrap().t();
            assert!((ts - s * t).abs() < 1e-12 * ts.abs());
        }
    }
}
