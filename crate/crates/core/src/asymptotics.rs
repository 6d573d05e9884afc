//! First-order asymptotes of the three ruin probabilities.
//!
//! Everything is built from the segment integrals
//! `I^(i)_[lo,hi](w) = ∫_lo^hi F̄(w + m_i t) dt`, which reduce to two
//! tail-integral evaluations after substituting `u = w + m_i t`.
//!
//! With `x1 = aK`, `x2 = K` and `T` the crossing epoch of the drift lines:
//!
//! * `H = I^(2)_[0,T](K) + I^(1)_[T,∞](aK)`, the integral of `F̄` along the
//!   upper envelope `max(aK + m1 t, K + m2 t)`;
//! * `J = I^(1)_[0,T](aK) + I^(2)_[T,∞](K)`, the same along the lower one.
//!
//! For `a >= 1` the lines never cross in positive time and `T` is clamped
//! to zero, which turns `H` and `J` into the one-dimensional asymptotes.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;
use thiserror::Error;

use crate::quadrature::{exp_sinh, gauss_kronrod, Tolerance};
use crate::risk_model::{BarrierInstance, Company, Regime, RiskModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("DomainError: alpha = {alpha} must lie strictly inside (1, 2)")]
    Domain { alpha: f64 },
}

const DIRECT_TOL: Tolerance = Tolerance::new(1e-300, 1e-13);

/// `∫_lo^hi F̄(w + m_i t) dt` for `0 <= lo <= hi <= ∞`.
pub fn i_integral(model: &RiskModel, company: Company, lo: f64, hi: f64, w: f64) -> f64 {
    debug_assert!(lo <= hi, "empty orientation: lo = {lo}, hi = {hi}");
    if lo >= hi {
        return 0.0;
    }
    let m = model.drift(company);
    let claim = model.claim();
    let upper = if hi.is_infinite() {
        0.0
    } else {
        claim.tail_integral(w + m * hi)
    };
    ((claim.tail_integral(w + m * lo) - upper) / m).max(0.0)
}

/// `(1 / (m_i μ)) F̄_I(x)`, the all-time maximum asymptote of walk `i`.
pub fn veraverbeke_asymptote(model: &RiskModel, company: Company, x: f64) -> f64 {
    model.claim().integrated_tail_complement(x) / (model.drift(company) * model.mu())
}

/// `P(M^(i)_n > x)` asymptote over a horizon of `n` walk steps.
pub fn finite_horizon_max_asymptote(
    model: &RiskModel,
    company: Company,
    x: f64,
    horizon: f64,
) -> f64 {
    i_integral(model, company, 0.0, horizon.max(0.0), x)
}

fn effective_t(instance: &BarrierInstance) -> f64 {
    instance.t().max(0.0)
}

/// The four segment integrals at `(aK, K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segments {
    /// `I^(1)_[0,T](aK)`
    pub first_head: f64,
    /// `I^(2)_[0,T](K)`
    pub second_head: f64,
    /// `I^(1)_[T,∞](aK)`
    pub first_tail: f64,
    /// `I^(2)_[T,∞](K)`
    pub second_tail: f64,
}

pub fn segments(model: &RiskModel, instance: &BarrierInstance) -> Segments {
    let t = effective_t(instance);
    let (x1, x2) = (instance.x1(), instance.x2());
    Segments {
        first_head: i_integral(model, Company::First, 0.0, t, x1),
        second_head: i_integral(model, Company::Second, 0.0, t, x2),
        first_tail: i_integral(model, Company::First, t, f64::INFINITY, x1),
        second_tail: i_integral(model, Company::Second, t, f64::INFINITY, x2),
    }
}

/// `H(aK, K)` via the segment representation.
pub fn h_value(model: &RiskModel, instance: &BarrierInstance) -> f64 {
    let s = segments(model, instance);
    s.second_head + s.first_tail
}

/// `J(aK, K)` via the segment representation.
pub fn j_value(model: &RiskModel, instance: &BarrierInstance) -> f64 {
    let s = segments(model, instance);
    s.first_head + s.second_tail
}

fn envelope_quadrature(
    model: &RiskModel,
    instance: &BarrierInstance,
    pick: fn(f64, f64) -> f64,
) -> f64 {
    let (x1, x2) = (instance.x1(), instance.x2());
    let (m1, m2) = (model.m1(), model.m2());
    let claim = model.claim();
    let integrand = |t: f64| claim.tail(pick(x1 + m1 * t, x2 + m2 * t));
    let t = effective_t(instance);
    let head = if t > 0.0 {
        gauss_kronrod(integrand, 0.0, t, DIRECT_TOL).value
    } else {
        0.0
    };
    let at_kink = pick(x1 + m1 * t, x2 + m2 * t);
    let scale = ((at_kink + claim.mean()) / m1.max(m2)).max(1.0);
    head + exp_sinh(integrand, t, scale, DIRECT_TOL).value
}

/// `∫_0^∞ F̄(max(aK + m1 t, K + m2 t)) dt` by direct quadrature.
pub fn h_direct(model: &RiskModel, instance: &BarrierInstance) -> f64 {
    envelope_quadrature(model, instance, f64::max)
}

/// `∫_0^∞ F̄(min(aK + m1 t, K + m2 t)) dt` by direct quadrature.
pub fn j_direct(model: &RiskModel, instance: &BarrierInstance) -> f64 {
    envelope_quadrature(model, instance, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteReport {
    pub regime: Regime,
    pub psi_wedge_asym: f64,
    pub psi_vee_asym: f64,
    pub psi_times_asym: f64,
    /// `V1(aK) + V2(K) - H`, algebraically equal to `J`.
    pub psi_wedge_three_term: f64,
    pub segments: Segments,
    pub h: f64,
    pub j: f64,
    /// `(1/(m1 μ)) F̄_I(aK)`
    pub veraverbeke_first: f64,
    /// `(1/(m2 μ)) F̄_I(K)`
    pub veraverbeke_second: f64,
}

impl AsymptoteReport {
    /// Named components, in a stable order.
    pub fn components(&self) -> [(&'static str, f64); 8] {
        [
            ("I1_head_aK", self.segments.first_head),
            ("I2_head_K", self.segments.second_head),
            ("I1_tail_aK", self.segments.first_tail),
            ("I2_tail_K", self.segments.second_tail),
            ("H", self.h),
            ("J", self.j),
            ("veraverbeke_1_aK", self.veraverbeke_first),
            ("veraverbeke_2_K", self.veraverbeke_second),
        ]
    }
}

/// Asymptotes of `ψ_∧, ψ_∨, ψ_×` at `(aK, K)`.
///
/// Two-dimensional: `ψ_∧ ~ J`, `ψ_∨ ~ ψ_× ~ H`. One-dimensional: `ψ_∧`
/// follows walk 2 and `ψ_∨ = ψ_×` follows walk 1.
pub fn psi_asymptotes(model: &RiskModel, instance: &BarrierInstance) -> AsymptoteReport {
    let segments = segments(model, instance);
    let h = segments.second_head + segments.first_tail;
    let j = segments.first_head + segments.second_tail;
    let v1 = veraverbeke_asymptote(model, Company::First, instance.x1());
    let v2 = veraverbeke_asymptote(model, Company::Second, instance.x2());
    let (wedge, vee) = match instance.regime() {
        Regime::TwoDim => (j, h),
        Regime::OneDim => (v2, v1),
    };
    AsymptoteReport {
        regime: instance.regime(),
        psi_wedge_asym: wedge,
        psi_vee_asym: vee,
        psi_times_asym: vee,
        psi_wedge_three_term: v1 + v2 - h,
        segments,
        h,
        j,
        veraverbeke_first: v1,
        veraverbeke_second: v2,
    }
}

/// `C_α = (1 - α) / (Γ(2 - α) cos(πα/2))` for `1 < α < 2`.
pub fn stable_norming_constant(alpha: f64) -> Result<f64, AsymptoticsError> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(AsymptoticsError::Domain { alpha });
    }
    Ok((1.0 - alpha) / (gamma(2.0 - alpha) * (PI * alpha / 2.0).cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heavy_tails::HeavyTailDistribution;

    fn canonical() -> RiskModel {
        RiskModel::new(
            HeavyTailDistribution::lomax(1.0, 1.5).unwrap(),
            HeavyTailDistribution::exponential(1.0).unwrap(),
            4.0,
            3.0,
        )
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    // Closed-form Lomax(1, 1.5) antiderivative: ∫_u^∞ (1+y)^{-1.5} dy = 2 (1+u)^{-1/2}.
    fn lomax_ti(u: f64) -> f64 {
        2.0 / (1.0 + u).sqrt()
    }

    #[test]
    fn segment_integrals_canonical() {
        let m = canonical();
        let v = i_integral(&m, Company::Second, 0.0, 50.0, 100.0);
        assert!(close(v, lomax_ti(100.0) - lomax_ti(150.0), 1e-15));
        assert!(close(v, 0.036_249_8, 1e-7));
        let v = i_integral(&m, Company::First, 50.0, f64::INFINITY, 50.0);
        assert!(close(v, 0.5 * lomax_ti(150.0), 1e-15));
        assert!(close(v, 0.081_378_8, 1e-7));
        assert_eq!(i_integral(&m, Company::First, 7.0, 7.0, 3.0), 0.0);
    }

    #[test]
    fn segment_integral_matches_quadrature() {
        let m = canonical();
        let f = |t: f64| m.claim().tail(100.0 + t);
        let q = gauss_kronrod(f, 0.0, 50.0, Tolerance::new(1e-15, 1e-13)).value;
        assert!(close(q, i_integral(&m, Company::Second, 0.0, 50.0, 100.0), 1e-12));
    }

    #[test]
    fn h_and_j_canonical() {
        let m = canonical();
        let inst = m.instance(0.5, 100.0).unwrap();
        let h = h_value(&m, &inst);
        let j = j_value(&m, &inst);
        assert!(close(h, 0.117_628_6, 1e-7), "{h}");
        assert!(close(j, 0.221_406_9, 1e-7), "{j}");
        assert!(close(h + j, 0.339_035_4, 1e-7));
        let full = i_integral(&m, Company::First, 0.0, f64::INFINITY, 50.0)
            + i_integral(&m, Company::Second, 0.0, f64::INFINITY, 100.0);
        assert!(((h + j) - full).abs() <= 1e-12 * full);
        assert!(close(h_direct(&m, &inst), h, 1e-10));
        assert!(close(j_direct(&m, &inst), j, 1e-10));
    }

    #[test]
    fn h_regular_variation_scaling() {
        let m = canonical();
        let scaled = |k: f64| h_value(&m, &m.instance(0.5, k).unwrap()) * k.sqrt();
        let (a, b, c) = (scaled(100.0), scaled(400.0), scaled(1e6));
        // converges to the constant of the K^{1-α} law
        assert!((b - c).abs() < (a - c).abs());
        assert!((scaled(1e7) - c).abs() / c < 1e-3);
    }

    #[test]
    fn coinciding_lines_reduce_to_walk_integrals() {
        let m = canonical();
        let inst = m.instance(1.0, 100.0).unwrap();
        let h = h_value(&m, &inst);
        let j = j_value(&m, &inst);
        assert!(close(h, i_integral(&m, Company::First, 0.0, f64::INFINITY, 100.0), 1e-15));
        assert!(close(j, i_integral(&m, Company::Second, 0.0, f64::INFINITY, 100.0), 1e-15));
    }

    #[test]
    fn veraverbeke_values() {
        let m = canonical();
        let v2 = veraverbeke_asymptote(&m, Company::Second, 100.0);
        assert!(close(v2, 0.199_007_4, 1e-7));
        let v1 = veraverbeke_asymptote(&m, Company::First, 50.0);
        assert!(close(v1, 0.140_028_0, 1e-7));
        for (c, x) in [(Company::First, 50.0), (Company::Second, 100.0), (Company::First, 3.0)] {
            let v = veraverbeke_asymptote(&m, c, x);
            let i = i_integral(&m, c, 0.0, f64::INFINITY, x);
            assert!((v / i - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn asymptote_report_two_dim() {
        let m = canonical();
        let r = psi_asymptotes(&m, &m.instance(0.5, 100.0).unwrap());
        assert_eq!(r.regime, Regime::TwoDim);
        assert!(close(r.psi_wedge_asym, 0.221_406_9, 1e-7));
        assert!(close(r.psi_vee_asym, 0.117_628_6, 1e-7));
        assert_eq!(r.psi_vee_asym, r.psi_times_asym);
        assert!((r.psi_wedge_three_term - r.psi_wedge_asym).abs() < 1e-12 * r.j);
    }

    #[test]
    fn asymptote_report_one_dim() {
        let m = canonical();
        let r = psi_asymptotes(&m, &m.instance(2.0, 100.0).unwrap());
        assert_eq!(r.regime, Regime::OneDim);
        assert!(close(r.psi_wedge_asym, 0.199_007_4, 1e-7));
        assert!(close(r.psi_vee_asym, 1.0 / 201.0_f64.sqrt(), 1e-15));
        assert!(close(r.psi_vee_asym, 0.070_534_6, 1e-7));
        assert!(r.psi_vee_asym <= r.psi_wedge_asym);
    }

    #[test]
    fn finite_horizon() {
        let m = canonical();
        let v = finite_horizon_max_asymptote(&m, Company::First, 50.0, 50.0);
        assert!(close(v, 0.058_649_2, 1e-7));
        assert_eq!(finite_horizon_max_asymptote(&m, Company::First, 50.0, 0.0), 0.0);
        let far = finite_horizon_max_asymptote(&m, Company::First, 50.0, 1e300);
        let v = veraverbeke_asymptote(&m, Company::First, 50.0);
        assert!((far - v).abs() < 1e-12);
    }

    #[test]
    fn stable_constant() {
        let c = stable_norming_constant(1.5).unwrap();
        // Γ(1/2) = √π, cos(3π/4) = -√2/2
        let by_hand = 0.5 / (PI.sqrt() * std::f64::consts::FRAC_1_SQRT_2);
        assert!(close(c, by_hand, 1e-14));
        assert!(close(c, 0.398_942_3, 1e-7));
        let c = stable_norming_constant(1.2).unwrap();
        assert!(close(c, 0.5559, 1e-4), "{c}");
        assert!(stable_norming_constant(1.0).is_err());
        assert!(stable_norming_constant(2.0).is_err());
        assert!(stable_norming_constant(f64::NAN).is_err());
    }

    #[test]
    fn lognormal_representations_agree() {
        let m = RiskModel::new(
            HeavyTailDistribution::lognormal(0.0, 1.2).unwrap(),
            HeavyTailDistribution::exponential(1.0).unwrap(),
            5.0,
            3.5,
        )
        .unwrap();
        let inst = m.instance(0.4, 20.0).unwrap();
        let (h, hd) = (h_value(&m, &inst), h_direct(&m, &inst));
        let (j, jd) = (j_value(&m, &inst), j_direct(&m, &inst));
        assert!(((h - hd) / hd).abs() < 1e-5, "{h} {hd}");
        assert!(((j - jd) / jd).abs() < 1e-5, "{j} {jd}");
    }
}
