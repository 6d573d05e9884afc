//! Exact identities and inequalities between the asymptotic quantities, and
//! the path-level set algebra of the simulator.
//!
//! Equalities report the relative difference `|lhs - rhs| / max(|lhs|, |rhs|)`.
//! Inequalities read `lhs <= rhs` and report the relative violation
//! `max(0, lhs - rhs) / |rhs|`; their slack `rhs - lhs` is kept alongside.

use std::fmt;

use crate::asymptotics::{
    finite_horizon_max_asymptote, h_direct, h_value, i_integral, j_direct, j_value,
    psi_asymptotes, veraverbeke_asymptote,
};
use crate::risk_model::{BarrierInstance, Company, Regime, RiskModel};
use crate::simulator::{DecompositionReport, PsiEstimates};

/// Relative tolerance for equalities evaluated through closed-form tail integrals.
pub const CLOSED_FORM_TOL: f64 = 1e-12;
/// Relative tolerance for equalities that go through numerical tail integrals.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Direct envelope quadrature against the segment form, closed-form families.
pub const DIRECT_CLOSED_FORM_TOL: f64 = 1e-8;
/// Direct envelope quadrature against the segment form, quadrature families.
pub const DIRECT_QUADRATURE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Equality,
    Inequality,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Equality => "equality",
            CheckKind::Inequality => "inequality",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn equality(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let residual = if scale == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / scale
        };
        Self {
            name: name.into(),
            kind: CheckKind::Equality,
            lhs,
            rhs,
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
        }
    }

    /// `lhs <= rhs`, up to a relative `tolerance`.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let excess = (lhs - rhs).max(0.0);
        let residual = if excess == 0.0 { 0.0 } else { excess / rhs.abs() };
        Self {
            name: name.into(),
            kind: CheckKind::Inequality,
            lhs,
            rhs,
            residual,
            tolerance,
            passed: lhs.is_finite() && rhs.is_finite() && residual <= tolerance,
        }
    }

    /// `rhs - lhs` for inequalities; negative means violated.
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: lhs={:e} rhs={:e} residual={:e} tol={:e}",
            if self.passed { "ok" } else { "FAIL" },
            self.kind.name(),
            self.name,
            self.lhs,
            self.rhs,
            self.residual,
            self.tolerance
        )
    }
}

pub fn all_passed(checks: &[IdentityCheck]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// `I^(i)_[lo,hi](w) <= ((hi - lo)/lo) I^(i)_[0,lo](w)` for `0 < lo < hi`.
pub fn segment_ratio_bound(
    model: &RiskModel,
    company: Company,
    lo: f64,
    hi: f64,
    w: f64,
) -> IdentityCheck {
    let lhs = i_integral(model, company, lo, hi, w);
    let rhs = (hi - lo) / lo * i_integral(model, company, 0.0, lo, w);
    IdentityCheck::at_most(
        format!("segment_ratio_bound_{}_{lo:.6e}_{hi:.6e}", company.index() + 1),
        lhs,
        rhs,
        0.0,
    )
}

/// Every identity of the asymptotic formulas, evaluated at one instance.
pub fn asymptotic_identities(model: &RiskModel, instance: &BarrierInstance) -> Vec<IdentityCheck> {
    let closed = model.claim().has_closed_form_tail_integral();
    let eq_tol = if closed { CLOSED_FORM_TOL } else { QUADRATURE_TOL };
    let direct_tol = if closed {
        DIRECT_CLOSED_FORM_TOL
    } else {
        DIRECT_QUADRATURE_TOL
    };
    let (x1, x2) = (instance.x1(), instance.x2());
    let (m1, m2) = (model.m1(), model.m2());
    let t = instance.t().max(0.0);
    let inf = f64::INFINITY;
    let h = h_value(model, instance);
    let j = j_value(model, instance);
    let v1 = veraverbeke_asymptote(model, Company::First, x1);
    let v2 = veraverbeke_asymptote(model, Company::Second, x2);
    let full1 = i_integral(model, Company::First, 0.0, inf, x1);
    let full2 = i_integral(model, Company::Second, 0.0, inf, x2);
    let report = psi_asymptotes(model, instance);

    let mut checks = Vec::new();
    // The rescaling and the two envelope bounds need the lines to cross at T > 0.
    if instance.regime() == Regime::TwoDim {
        checks.extend([
            IdentityCheck::equality(
                "tail_segment_rescaling",
                i_integral(model, Company::First, t, inf, x1),
                m2 / m1 * i_integral(model, Company::Second, t, inf, x2),
                eq_tol,
            ),
            IdentityCheck::at_most(
                "h_below_walk2_at_aK",
                h,
                i_integral(model, Company::Second, 0.0, inf, x1),
                0.0,
            ),
            IdentityCheck::at_most(
                "j_below_scaled_walk1_at_aK",
                j,
                m1 / m2 * i_integral(model, Company::First, 0.0, inf, x1),
                0.0,
            ),
        ]);
    }
    checks.extend([
        IdentityCheck::equality("three_term_wedge_equals_j", v1 + v2 - h, j, eq_tol),
        IdentityCheck::equality("h_plus_j_sum", h + j, full1 + full2, eq_tol),
        IdentityCheck::equality("veraverbeke_1_equals_full_integral", v1, full1, eq_tol),
        IdentityCheck::equality("veraverbeke_2_equals_full_integral", v2, full2, eq_tol),
        IdentityCheck::equality(
            "finite_horizon_at_t_equals_head",
            finite_horizon_max_asymptote(model, Company::First, x1, t),
            report.segments.first_head,
            eq_tol,
        ),
        IdentityCheck::at_most("h_below_j", h, j, 0.0),
        IdentityCheck::at_most("vee_asym_below_wedge_asym", report.psi_vee_asym, report.psi_wedge_asym, 0.0),
        IdentityCheck::equality("h_direct_quadrature", h_direct(model, instance), h, direct_tol),
        IdentityCheck::equality("j_direct_quadrature", j_direct(model, instance), j, direct_tol),
    ]);

    let base = if t > 0.0 { t } else { x2 / m2 };
    for company in Company::BOTH {
        let w = instance.reserve(company);
        for (lo, hi) in [
            (base / 4.0, base),
            (base, 1.1 * base),
            (base, 2.0 * base),
            (base, 6.0 * base),
        ] {
            checks.push(segment_ratio_bound(model, company, lo, hi, w));
        }
    }
    checks
}

/// Set algebra that holds exactly on every batch of common paths.
pub fn simulation_identities(psi: &PsiEstimates, decomposition: &DecompositionReport) -> Vec<IdentityCheck> {
    let c = psi.counts;
    let f = |n: u64| n as f64;
    let g = |n: i64| n as f64;
    vec![
        IdentityCheck::equality(
            "inclusion_exclusion_counts",
            f(c.wedge + c.times),
            f(c.first + c.second),
            0.0,
        ),
        IdentityCheck::at_most("vee_within_times", f(c.vee), f(c.times), 0.0),
        IdentityCheck::at_most("times_within_wedge", f(c.times), f(c.wedge), 0.0),
        IdentityCheck::equality(
            "decomposition_vee",
            g(decomposition.reconstructed_vee_count()),
            f(decomposition.direct_vee),
            0.0,
        ),
        IdentityCheck::equality(
            "decomposition_wedge",
            g(decomposition.reconstructed_wedge_count()),
            f(decomposition.direct_wedge),
            0.0,
        ),
        IdentityCheck::equality(
            "decomposition_times",
            g(decomposition.reconstructed_times_count()),
            f(decomposition.direct_times),
            0.0,
        ),
    ]
}
