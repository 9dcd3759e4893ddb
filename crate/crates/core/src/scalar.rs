//! The Bernoulli rate `I(x)` and the mean-field function
//! `ℓ(x) = β₁x + β₂x^p − x log x − (1 − x) log(1 − x)`.
//!
//! Stationary points of `ℓ` are located in logit coordinates
//! `y = log(x / (1 − x))`, where `ℓ′` becomes
//! `h(y) = β₁ + pβ₂ σ(y)^{p−1} − y`. Every root of `h` lies in the finite
//! interval `[β₁ + min(0, pβ₂), β₁ + max(0, pβ₂)]`, and `h` is monotone
//! between the (at most two) inflection points of `ℓ`, so each monotone
//! piece carries at most one root and a bracketed solve finds it.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::roots::brent;
use crate::settings::Settings;

/// The triple `(p, β₁, β₂)` parameterizing `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub p: u32,
    pub beta1: f64,
    pub beta2: f64,
}

impl ModelParams {
    pub fn new(p: u32, beta1: f64, beta2: f64) -> Result<Self> {
        let params = ModelParams { p, beta1, beta2 };
        params.validate()?;
        Ok(params)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::InvalidParams(format!("star order p must be >= 2, got {}", self.p)));
        }
        if !self.beta1.is_finite() || !self.beta2.is_finite() {
            return Err(Error::InvalidParams(format!(
                "beta1 and beta2 must be finite, got ({}, {})",
                self.beta1, self.beta2
            )));
        }
        Ok(())
    }

    /// `ℓ′` in logit coordinates.
    fn h(&self, y: f64) -> f64 {
        self.beta1 + self.p as f64 * self.beta2 * sigmoid(y).powi(self.p as i32 - 1) - y
    }

    /// `ℓ″(x)·x(1 − x)` in logit coordinates; same sign as `ℓ″`.
    fn h_prime(&self, y: f64) -> f64 {
        let p = self.p as f64;
        p * (p - 1.0) * self.beta2 * sigmoid(y).powi(self.p as i32 - 1) * sigmoid(-y) - 1.0
    }

    /// `ℓ(x)` at `x = σ(y)`, with the logs taken from `y` directly.
    fn ell_at_logit(&self, y: f64) -> f64 {
        let x = sigmoid(y);
        let xc = sigmoid(-y);
        let (ln_x, ln_xc) = (-softplus(-y), -softplus(y));
        self.beta1 * x + self.beta2 * x.powi(self.p as i32) - x * ln_x - xc * ln_xc
    }

    fn ell_second_at_logit(&self, y: f64) -> f64 {
        let p = self.p as f64;
        let x = sigmoid(y);
        p * (p - 1.0) * self.beta2 * x.powi(self.p as i32 - 2) - 1.0 / (x * sigmoid(-y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryKind {
    LocalMax,
    LocalMin,
    Degenerate,
}

/// A root of `ℓ′` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub x: f64,
    /// `log(x / (1 − x))`; keeps full precision for `x` near 0 or 1.
    pub logit: f64,
    /// `ℓ(x)`.
    pub value: f64,
    pub kind: StationaryKind,
    pub second_derivative: f64,
}

impl StationaryPoint {
    /// `1 − x` without cancellation.
    pub fn complement(&self) -> f64 {
        sigmoid(-self.logit)
    }
}

pub(crate) fn sigmoid(y: f64) -> f64 {
    1.0 / (1.0 + (-y).exp())
}

pub(crate) fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

/// `log(1 + e^t)` without overflow.
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `I(x)` without the domain check, for callers that already hold `x ∈ [0, 1]`.
pub(crate) fn rate_i(x: f64) -> f64 {
    xlogx(x) + xlogx(1.0 - x) + LN_2
}

/// `I(x) = x log x + (1 − x) log(1 − x) + log 2`, with `0 log 0 = 0`.
pub fn entropy_i(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("I(x) requires x in [0, 1], got {x}")));
    }
    Ok(rate_i(x))
}

/// `d^k I / dx^k` for `k` in `1..=4`.
fn rate_i_derivative(x: f64, order: u8) -> f64 {
    let xc = 1.0 - x;
    match order {
        1 => (x / xc).ln(),
        2 => 1.0 / x + 1.0 / xc,
        3 => -1.0 / (x * x) + 1.0 / (xc * xc),
        4 => 2.0 / (x * x * x) + 2.0 / (xc * xc * xc),
        _ => unreachable!("order checked by caller"),
    }
}

/// The `order`-th derivative of `ℓ` at `x`, for `order` in `0..=4`.
///
/// Order 0 is defined on the closed interval `[0, 1]`; higher orders diverge
/// at the endpoints and are rejected there.
pub fn ell_eval(params: &ModelParams, x: f64, order: u8) -> Result<f64> {
    params.validate()?;
    if order > 4 {
        return Err(Error::Domain(format!("derivative order must be in 0..=4, got {order}")));
    }
    if order == 0 {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("ℓ(x) requires x in [0, 1], got {x}")));
        }
        return Ok(params.beta1 * x + params.beta2 * x.powi(params.p as i32) - rate_i(x) + LN_2);
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("derivatives of ℓ require x in (0, 1), got {x}")));
    }
    // d^k/dx^k of β₂x^p is β₂ p(p−1)…(p−k+1) x^{p−k}; the falling factorial vanishes once k > p.
    let p = params.p as i64;
    let k = order as i64;
    let falling: f64 = (0..k).map(|j| (p - j) as f64).product();
    let star = if falling == 0.0 {
        0.0
    } else {
        params.beta2 * falling * x.powi((p - k) as i32)
    };
    let edge = if order == 1 { params.beta1 } else { 0.0 };
    Ok(edge + star - rate_i_derivative(x, order))
}

/// All stationary points of `ℓ` in `(0, 1)`, ordered by `x`, with default settings.
pub fn analyze_stationary(params: &ModelParams) -> Result<Vec<StationaryPoint>> {
    analyze_stationary_with(params, &Settings::default())
}

pub fn analyze_stationary_with(params: &ModelParams, settings: &Settings) -> Result<Vec<StationaryPoint>> {
    params.validate()?;
    let p = params.p as f64;
    let slope = p * params.beta2;
    let lo = params.beta1 + slope.min(0.0) - 1.0;
    let hi = params.beta1 + slope.max(0.0) + 1.0;

    let mut splits = vec![lo];
    splits.extend(inflections(params, settings)?.into_iter().filter(|&v| v > lo && v < hi));
    splits.push(hi);

    let mut roots: Vec<f64> = Vec::with_capacity(3);
    for w in splits.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ha, hb) = (params.h(a), params.h(b));
        let root = if ha == 0.0 {
            Some(a)
        } else if hb == 0.0 {
            Some(b)
        } else if ha.signum() != hb.signum() {
            Some(brent(|y| params.h(y), a, b, settings.root_tol)?)
        } else {
            None
        };
        if let Some(r) = root {
            let dup = roots
                .last()
                .is_some_and(|&last| (r - last).abs() <= 4.0 * f64::EPSILON * (1.0 + r.abs()));
            if !dup {
                roots.push(r);
            }
        }
    }
    if roots.is_empty() {
        return Err(Error::Convergence(format!("no stationary point found for {params:?}")));
    }

    let points = roots
        .into_iter()
        .map(|y| {
            let sd = params.ell_second_at_logit(y);
            let kind = if sd.abs() <= settings.degenerate_tol {
                StationaryKind::Degenerate
            } else if sd < 0.0 {
                StationaryKind::LocalMax
            } else {
                StationaryKind::LocalMin
            };
            StationaryPoint {
                x: sigmoid(y),
                logit: y,
                value: params.ell_at_logit(y),
                kind,
                second_derivative: sd,
            }
        })
        .collect();
    Ok(points)
}

/// Logit positions of the zeros of `ℓ″`. `x^{p−1}(1 − x)` is unimodal with
/// its peak at `(p − 1)/p`, so there are none, one (tangency) or two.
fn inflections(params: &ModelParams, settings: &Settings) -> Result<Vec<f64>> {
    if params.beta2 <= 0.0 {
        return Ok(Vec::new());
    }
    let p = params.p as f64;
    let peak = ((p - 1.0) / p).ln() - (1.0 / p).ln();
    let h_peak = params.h_prime(peak);
    if h_peak < 0.0 {
        return Ok(Vec::new());
    }
    if h_peak == 0.0 {
        return Ok(vec![peak]);
    }
    // h_prime → −1 as y → ±∞; ±800 is far past where σ saturates.
    let left = brent(|y| params.h_prime(y), -800.0, peak, settings.root_tol)?;
    let right = brent(|y| params.h_prime(y), peak, 800.0, settings.root_tol)?;
    Ok(vec![left, right])
}

/// Global maximizers of `ℓ` on `[0, 1]`: the local maxima whose value lies
/// within `tie_tol` of the largest.
pub fn global_maximizers(params: &ModelParams, tie_tol: f64) -> Result<Vec<StationaryPoint>> {
    global_maximizers_with(params, tie_tol, &Settings::default())
}

pub(crate) fn global_maximizers_with(
    params: &ModelParams,
    tie_tol: f64,
    settings: &Settings,
) -> Result<Vec<StationaryPoint>> {
    if !(tie_tol > 0.0) {
        return Err(Error::InvalidParams(format!("tie_tol must be positive, got {tie_tol}")));
    }
    let points = analyze_stationary_with(params, settings)?;
    Ok(select_global(&points, tie_tol))
}

pub(crate) fn select_global(points: &[StationaryPoint], tie_tol: f64) -> Vec<StationaryPoint> {
    // A lone stationary point is the maximum whatever its curvature says:
    // ℓ′ runs from +∞ to −∞ across (0, 1).
    if points.len() == 1 {
        return points.to_vec();
    }
    let maxima: Vec<StationaryPoint> = points.iter().filter(|pt| pt.kind == StationaryKind::LocalMax).copied().collect();
    let candidates = if maxima.is_empty() { points.to_vec() } else { maxima };
    let best = candidates.iter().map(|pt| pt.value).fold(f64::NEG_INFINITY, f64::max);
    candidates.into_iter().filter(|pt| best - pt.value <= tie_tol).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u32, b1: f64, b2: f64) -> ModelParams {
        ModelParams::new(p, b1, b2).unwrap()
    }

    #[test]
    fn entropy_i_values() {
        assert_eq!(entropy_i(0.5).unwrap(), 0.0);
        assert!((entropy_i(0.0).unwrap() - LN_2).abs() < 1e-15);
        assert!((entropy_i(1.0).unwrap() - LN_2).abs() < 1e-15);
        // 0.3 ln 0.3 + 0.7 ln 0.7 + ln 2
        assert!((entropy_i(0.3).unwrap() - 0.082_282_878_505_051_78).abs() < 1e-12);
        assert!(matches!(entropy_i(1.2), Err(Error::Domain(_))));
        assert!(entropy_i(f64::NAN).is_err());
    }

    #[test]
    fn ell_derivatives_at_the_p2_critical_point() {
        let pr = params(2, -2.0, 2.0);
        assert!(ell_eval(&pr, 0.5, 1).unwrap().abs() < 1e-15);
        assert!(ell_eval(&pr, 0.5, 2).unwrap().abs() < 1e-15);
        assert!(ell_eval(&pr, 0.5, 3).unwrap().abs() < 1e-15);
        assert!((ell_eval(&pr, 0.5, 4).unwrap() + 32.0).abs() < 1e-12);
    }

    #[test]
    fn ell_domain_errors() {
        let pr = params(3, 0.0, 1.0);
        assert!(ell_eval(&pr, 0.0, 0).is_ok());
        assert!(ell_eval(&pr, 1.0, 0).is_ok());
        assert!(matches!(ell_eval(&pr, 0.0, 1), Err(Error::Domain(_))));
        assert!(matches!(ell_eval(&pr, 1.0, 3), Err(Error::Domain(_))));
        assert!(matches!(ell_eval(&pr, 0.5, 5), Err(Error::Domain(_))));
        assert!(ModelParams::new(1, 0.0, 0.0).is_err());
        assert!(ModelParams::new(2, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn pure_entropy_has_a_single_maximum() {
        let pts = analyze_stationary(&params(2, 0.0, 0.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].kind, StationaryKind::LocalMax);
        assert!((pts[0].x - 0.5).abs() < 1e-14);
        assert!((pts[0].value - LN_2).abs() < 1e-14);
    }

    #[test]
    fn symmetric_double_well() {
        // Oracle: bisection on 6x − 3 = log(x/(1 − x)) over (0, 1/2).
        let oracle = {
            let g = |x: f64| 6.0 * x - 3.0 - (x / (1.0 - x)).ln();
            let (mut a, mut b) = (1e-9, 0.4);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if g(a) * g(m) <= 0.0 {
                    b = m
                } else {
                    a = m
                }
            }
            0.5 * (a + b)
        };
        let pts = analyze_stationary(&params(2, -3.0, 3.0)).unwrap();
        assert_eq!(pts.len(), 3);
        let kinds: Vec<_> = pts.iter().map(|p| p.kind).collect();
        assert_eq!(kinds, [StationaryKind::LocalMax, StationaryKind::LocalMin, StationaryKind::LocalMax]);
        assert!((pts[0].x - oracle).abs() < 1e-12);
        assert!((pts[0].x - 0.0707).abs() < 1e-4);
        assert!((pts[1].x - 0.5).abs() < 1e-14);
        assert!((pts[2].x - (1.0 - oracle)).abs() < 1e-12);
    }

    #[test]
    fn critical_point_is_one_degenerate_root() {
        let pts = analyze_stationary(&params(2, -2.0, 2.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].kind, StationaryKind::Degenerate);
        assert!((pts[0].x - 0.5).abs() < 1e-12);
        // and it is the global maximizer
        assert_eq!(global_maximizers(&params(2, -2.0, 2.0), 1e-10).unwrap().len(), 1);
    }

    #[test]
    fn global_maximizers_tie_and_break() {
        let tied = global_maximizers(&params(2, -3.0, 3.0), 1e-10).unwrap();
        assert_eq!(tied.len(), 2);
        assert!((tied[0].value - tied[1].value).abs() < 1e-12);

        // off the curve the double well persists but one side wins
        let off = params(2, -2.4, 2.5);
        let below = global_maximizers(&off, 1e-10).unwrap();
        assert_eq!(below.len(), 1);
        let all = analyze_stationary(&off).unwrap();
        let maxima: Vec<_> = all.iter().filter(|p| p.kind == StationaryKind::LocalMax).collect();
        assert_eq!(maxima.len(), 2);
        assert!(maxima[1].value > maxima[0].value);
        assert_eq!(below[0].x, maxima[1].x);
        for m in maxima {
            let direct = ell_eval(&off, m.x, 0).unwrap();
            assert!((direct - m.value).abs() < 1e-13);
        }
        assert!(global_maximizers(&params(2, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn extreme_parameters_keep_precision() {
        // maxima at x ≈ e^{-40} and 1 − e^{-40}
        let pts = analyze_stationary(&params(2, -40.0, 40.0)).unwrap();
        assert_eq!(pts.len(), 3);
        let lo = pts[0];
        assert!(lo.x > 0.0 && lo.x < 1e-16);
        assert!((lo.logit + 40.0).abs() < 1e-9);
        assert!((pts[2].complement() - lo.x).abs() < 1e-12 * lo.x);
    }
}
