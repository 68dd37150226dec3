//! Special functions used by the weight and expansion formulas.
//!
//! The regularized incomplete beta function is evaluated with the classic
//! continued fraction (modified Lentz), switching to the complement
//! `I_x(a, b) = 1 - I_{1-x}(b, a)` when `x > (a + 1) / (a + b + 2)`. The
//! power prefactor `x^a (1-x)^b / B(a, b)` is formed in log space without
//! ever building `B(a, b)` from large gamma values: for `a, b >= 8` it uses
//! the deviation-from-mode form `exp(-(a*rlog1(e_a) + b*rlog1(e_b)))` with a
//! Stirling-series correction, which keeps the relative error near machine
//! precision even for parameters in the millions.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};

/// Per-step convergence tolerance of the continued fraction.
const CF_TOLERANCE: f64 = 1e-14;
/// Base iteration cap of the continued fraction. Near the mode the fraction
/// needs on the order of `sqrt(max(a, b))` terms, so the cap grows by that
/// amount; a breach is reported as an error.
pub const CF_BASE_ITER: usize = 500;
const CF_TINY: f64 = 1e-300;

/// Parameters of `I_x(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: f64,
    b: f64,
    x: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64, x: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid(
                "a",
                format!("must be positive and finite, got {a}"),
            ));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(invalid(
                "b",
                format!("must be positive and finite, got {b}"),
            ));
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(invalid("x", format!("must lie in [0, 1], got {x}")));
        }
        Ok(Self { a, b, x })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_incomplete_beta(params: BetaParams) -> Result<f64> {
    incomplete_beta_pair(params).map(|(lower, _)| lower)
}

/// Upper tail `1 - I_x(a, b)`, computed without subtracting from one.
pub fn reg_incomplete_beta_complement(params: BetaParams) -> Result<f64> {
    incomplete_beta_pair(params).map(|(_, upper)| upper)
}

/// Returns `(I_x(a, b), 1 - I_x(a, b))`; whichever side the continued fraction
/// evaluates directly carries full relative accuracy.
pub fn incomplete_beta_pair(params: BetaParams) -> Result<(f64, f64)> {
    let BetaParams { a, b, x } = params;
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == 1.0 {
        return Ok((1.0, 0.0));
    }
    let y = 1.0 - x;
    if x > (a + 1.0) / (a + b + 2.0) {
        let upper = lower_by_continued_fraction(b, a, y, x)?;
        Ok((1.0 - upper, upper))
    } else {
        let lower = lower_by_continued_fraction(a, b, x, y)?;
        Ok((lower, 1.0 - lower))
    }
}

/// `I_x(a, b)` for `x` on the rapidly converging side; `y = 1 - x` is passed
/// separately so the caller's complement is not rounded twice.
fn lower_by_continued_fraction(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    let log_front = log_power_prefactor(a, b, x, y);
    if log_front < -745.2 {
        return Ok(0.0);
    }
    let cf = continued_fraction(a, b, x)?;
    Ok(log_front.exp() * cf / a)
}

fn continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    let cap = iteration_cap(a, b);
    for m in 1..=cap {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let step = d * c;
        h *= step;
        if (step - 1.0).abs() < CF_TOLERANCE {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        a,
        b,
        x,
        iterations: cap,
    })
}

pub fn iteration_cap(a: f64, b: f64) -> usize {
    CF_BASE_ITER + a.max(b).sqrt().ceil() as usize
}

/// `ln(x^a y^b / B(a, b))` with `y = 1 - x`.
///
/// Of `x` and `y` only the one not exceeding 1/2 is trusted to be exact; the
/// other is reconstructed through `ln_1p`.
fn log_power_prefactor(a: f64, b: f64, x: f64, y: f64) -> f64 {
    const STIRLING_MIN: f64 = 8.0;
    if a >= STIRLING_MIN && b >= STIRLING_MIN {
        // Expand around the mode x0 = a / (a + b).
        let total = a + b;
        let lambda = if x <= 0.5 {
            a - total * x
        } else {
            total * y - b
        };
        let u = rlog1(-lambda / a);
        let v = rlog1(lambda / b);
        -(a * u + b * v) + 0.5 * (a * b / total).ln()
            - 0.5 * (2.0 * PI).ln()
            - (stirling_tail(a) + stirling_tail(b) - stirling_tail(total))
    } else if a < STIRLING_MIN && b >= STIRLING_MIN {
        small_large_prefactor(a, b, x, y)
    } else if b < STIRLING_MIN && a >= STIRLING_MIN {
        small_large_prefactor(b, a, y, x)
    } else {
        let (ln_x, ln_y) = log_pair(x, y);
        a * ln_x + b * ln_y - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
    }
}

fn log_pair(x: f64, y: f64) -> (f64, f64) {
    if x <= 0.5 {
        (x.ln(), (-x).ln_1p())
    } else {
        ((-y).ln_1p(), y.ln())
    }
}

/// Prefactor when `small < 8 <= large`; `ln Γ(large) - ln Γ(small + large)`
/// is taken from the Stirling form so the two big log-gammas never cancel.
fn small_large_prefactor(small: f64, large: f64, xs: f64, xl: f64) -> f64 {
    let total = small + large;
    let (ln_xs, ln_xl) = log_pair(xs, xl);
    small * (ln_xs + total.ln()) + large * ln_xl + (large - 0.5) * (small / large).ln_1p()
        - small
        - ln_gamma(small)
        - stirling_tail(large)
        + stirling_tail(total)
}

/// `x - ln(1 + x)` for `x > -1`, accurate near zero.
fn rlog1(x: f64) -> f64 {
    if x.abs() > 0.5 {
        return x - x.ln_1p();
    }
    // ln(1+x) = 2 atanh(w), w = x / (2 + x); x - 2w = x^2 / (2 + x).
    let w = x / (2.0 + x);
    let w2 = w * w;
    let mut term = w * w2;
    let mut series: f64 = 0.0;
    let mut k = 3.0;
    while term.abs() > 1e-18 * series.abs().max(f64::MIN_POSITIVE) {
        series += term / k;
        term *= w2;
        k += 2.0;
        if k > 200.0 {
            break;
        }
    }
    x * x / (2.0 + x) - 2.0 * series
}

/// `ln Γ(z) - [(z - 1/2) ln z - z + ln(2π)/2]` for `z >= 8`.
fn stirling_tail(z: f64) -> f64 {
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Standard normal CDF `Φ(t)`.
pub fn std_normal_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t / std::f64::consts::SQRT_2)
}

/// Standard normal density `φ(t)`.
pub fn std_normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// Inverse of `Φ` on `(0, 1)`: Acklam's rational approximation polished by
/// one Halley step against [`std_normal_cdf`].
#[allow(clippy::excessive_precision)]
pub fn std_normal_inv(prob: f64) -> Result<f64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(invalid("prob", format!("must lie in (0, 1), got {prob}")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let mut x = if prob < LOW {
        tail((-2.0 * prob.ln()).sqrt())
    } else if prob > 1.0 - LOW {
        -tail((-2.0 * (-prob).ln_1p()).sqrt())
    } else {
        let q = prob - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    // Halley refinement; the residual is taken on the smaller tail.
    let e = if x <= 0.0 {
        std_normal_cdf(x) - prob
    } else {
        (1.0 - prob) - std_normal_cdf(-x)
    };
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x -= u / (1.0 + 0.5 * x * u);
    Ok(x)
}

/// Probabilists' Hermite polynomial `H₂(x) = x² - 1`.
pub fn hermite2(x: f64) -> f64 {
    x * x - 1.0
}

/// A real number stored as a sign and `ln |x|`, for magnitudes beyond `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub negative: bool,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        negative: false,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_f64(x: f64) -> Self {
        Self {
            negative: x < 0.0,
            ln_abs: x.abs().ln(),
        }
    }

    /// The represented value; saturates to `±inf` outside the `f64` range.
    pub fn to_f64(self) -> f64 {
        let mag = self.ln_abs.exp();
        if self.negative {
            -mag
        } else {
            mag
        }
    }

    /// Numeric order of the represented values.
    pub fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let zero_a = self.ln_abs == f64::NEG_INFINITY;
        let zero_b = other.ln_abs == f64::NEG_INFINITY;
        let sign = |neg: bool, zero: bool| {
            if zero {
                0
            } else if neg {
                -1
            } else {
                1
            }
        };
        let (sa, sb) = (sign(self.negative, zero_a), sign(other.negative, zero_b));
        match sa.cmp(&sb) {
            Ordering::Equal => match sa {
                0 => Ordering::Equal,
                1 => self.ln_abs.total_cmp(&other.ln_abs),
                _ => other.ln_abs.total_cmp(&self.ln_abs),
            },
            ord => ord,
        }
    }

    /// `ln |self - other|`; `-inf` when the two are equal.
    pub fn ln_abs_diff(self, other: Self) -> f64 {
        if self.total_cmp(&other).is_eq() {
            return f64::NEG_INFINITY;
        }
        let hi = self.ln_abs.max(other.ln_abs);
        let lo = self.ln_abs.min(other.ln_abs);
        let gap = hi - lo;
        let same_side = self.negative == other.negative
            || self.ln_abs == f64::NEG_INFINITY
            || other.ln_abs == f64::NEG_INFINITY;
        if same_side {
            hi + (-(-gap).exp_m1()).ln()
        } else {
            hi + (-gap).exp().ln_1p()
        }
    }
}

/// `ln Σ exp(terms)`, ignoring `-inf` entries; `-inf` for an empty sum.
pub fn log_sum_exp(terms: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let peak = terms.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY || peak.is_nan() {
        return peak;
    }
    if peak == f64::INFINITY {
        return peak;
    }
    let sum: f64 = terms.into_iter().map(|t| (t - peak).exp()).sum();
    peak + sum.ln()
}
