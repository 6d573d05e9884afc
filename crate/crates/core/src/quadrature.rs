//! Numerical integration used by the tail-integral fallbacks and by the
//! direct max/min cross-checks.
//!
//! Two schemes are provided: a globally adaptive 15-point Gauss–Kronrod rule
//! for finite intervals, and an exp-sinh double-exponential rule for
//! half-infinite intervals with algebraically decaying integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

/// Kronrod abscissae on [-1, 1], positive half, descending. Odd entries are
/// the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    /// Whether the requested tolerance was met before the work limit.
    pub converged: bool,
}

/// Tolerances for the adaptive rules. The target is
/// `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

const MAX_SEGMENTS: usize = 4000;

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Quadrature {
    if hi == lo {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    if hi < lo {
        let q = gauss_kronrod(f, hi, lo, tol);
        return Quadrature {
            value: -q.value,
            ..q
        };
    }
    let first = kronrod15(&f, lo, hi);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > tol.target(value) && heap.len() < MAX_SEGMENTS {
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval exhausted at machine resolution
            heap.push(worst);
            break;
        }
        let left = kronrod15(&f, worst.lo, mid);
        let right = kronrod15(&f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    Quadrature {
        value,
        error,
        converged: error <= tol.target(value),
    }
}

const EXP_SINH_T_MAX: f64 = 6.5;
const EXP_SINH_MAX_LEVEL: u32 = 12;

/// exp-sinh quadrature of `f` over `[lo, ∞)`.
///
/// Uses `x = lo + scale * exp(π/2 · sinh t)` with trapezoidal refinement,
/// halving the step until successive levels agree to `tol`. `scale` should
/// be the length over which `f` changes appreciably.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, lo: f64, scale: f64, tol: Tolerance) -> Quadrature {
    let node = |t: f64| -> f64 {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = lo + scale * e;
        let w = scale * FRAC_PI_2 * t.cosh() * e;
        if w == 0.0 || !x.is_finite() || !w.is_finite() {
            return 0.0;
        }
        let term = f(x) * w;
        if term.is_finite() {
            term
        } else {
            0.0
        }
    };

    let mut h = 1.0_f64;
    let n = (EXP_SINH_T_MAX / h) as i64;
    let mut sum: f64 = (-n..=n).map(|k| node(k as f64 * h)).sum();
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _ in 0..EXP_SINH_MAX_LEVEL {
        h *= 0.5;
        let n = (EXP_SINH_T_MAX / h) as i64;
        // new nodes are the odd multiples of the halved step
        let fresh: f64 = (-n..=n)
            .filter(|k| k.rem_euclid(2) == 1)
            .map(|k| node(k as f64 * h))
            .sum();
        sum += fresh;
        let refined = sum * h;
        error = (refined - estimate).abs();
        estimate = refined;
        if error <= tol.target(estimate) {
            break;
        }
    }
    Quadrature {
        value: estimate,
        error,
        converged: error <= tol.target(estimate),
    }
}
