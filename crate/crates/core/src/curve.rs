//! The transition curve `β₂ = q(β₁)`, on which `ℓ` has two equal global
//! maxima `x₁ < x₂`, and its critical endpoint.
//!
//! Both `q` and `q⁻¹` come from one tie solve. Along either parameter axis
//! the gap `ℓ(x₂) − ℓ(x₁)` between the upper and lower local maxima is
//! increasing (its derivatives are `x₂^p − x₁^p` in `β₂` and `x₂ − x₁` in
//! `β₁`). Where only one maximum survives, the gap is replaced by its sign:
//! the surviving maximizer sits below `(p − 1)/p` exactly when the parameters
//! lie below the curve. The resulting function changes sign once, at the
//! curve, and a bracketed solve locates it.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::roots::brent;
use crate::scalar::{analyze_stationary_with, ModelParams, StationaryKind, StationaryPoint};
use crate::Model;

/// The endpoint `(β₁ᶜ, β₂ᶜ)` of the transition curve and the densities
/// `(eᶜ, sᶜ)` where the two maximizers merge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub p: u32,
    pub beta1_c: f64,
    pub beta2_c: f64,
    pub e_c: f64,
    pub s_c: f64,
}

impl CriticalPoint {
    fn of(p: u32) -> Self {
        let pf = p as f64;
        let e_c = (pf - 1.0) / pf;
        CriticalPoint {
            p,
            beta1_c: (pf - 1.0).ln() - pf / (pf - 1.0),
            beta2_c: pf.powi(p as i32 - 1) / (pf - 1.0).powi(p as i32),
            e_c,
            s_c: e_c.powi(p as i32),
        }
    }
}

/// A solved point of the transition curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub beta1: f64,
    pub beta2: f64,
    pub x1: f64,
    pub x2: f64,
    /// `q′(β₁) = −(x₂ − x₁)/(x₂^p − x₁^p)`.
    pub qprime: f64,
    pub dx1_dbeta1: f64,
    pub dx2_dbeta1: f64,
    pub dx1_dbeta2: f64,
    pub dx2_dbeta2: f64,
    /// Set when the point is the critical endpoint reported in place of a
    /// solve too close to it; then `x₁ = x₂ = (p − 1)/p`.
    pub degenerate: bool,
}

pub fn critical_point(p: u32) -> Result<CriticalPoint> {
    Ok(Model::new(p)?.critical_point())
}

pub fn curve_point(p: u32, beta1: f64) -> Result<CurvePoint> {
    Model::new(p)?.curve_point(beta1)
}

pub fn q_inverse(p: u32, beta2: f64) -> Result<f64> {
    Model::new(p)?.q_inverse(beta2)
}

#[derive(Clone, Copy)]
enum Axis {
    /// Solve for `β₂` with `β₁` fixed.
    Beta2 { beta1: f64 },
    /// Solve for `β₁` with `β₂` fixed.
    Beta1 { beta2: f64 },
}

impl Model {
    pub fn critical_point(&self) -> CriticalPoint {
        CriticalPoint::of(self.p)
    }

    /// Solve `q(β₁)`. Refuses `β₁` within `crit_guard` of `β₁ᶜ`.
    pub fn curve_point(&self, beta1: f64) -> Result<CurvePoint> {
        let c = self.critical_point();
        self.check_beta1(beta1, &c)?;
        if c.beta1_c - beta1 < self.settings.crit_guard {
            return Err(Error::NearCritical(format!(
                "beta1 = {beta1} is within {} of beta1_c = {}",
                self.settings.crit_guard, c.beta1_c
            )));
        }
        self.solve_curve_at_beta1(beta1)
    }

    /// Like [`Model::curve_point`], but inside the guard band the critical
    /// endpoint is reported (flagged `degenerate`) instead of an error.
    pub fn curve_point_or_critical(&self, beta1: f64) -> Result<CurvePoint> {
        let c = self.critical_point();
        self.check_beta1(beta1, &c)?;
        if c.beta1_c - beta1 < self.settings.crit_guard {
            return Ok(self.critical_curve_point());
        }
        self.solve_curve_at_beta1(beta1)
    }

    /// `q(β₁)`.
    pub fn q(&self, beta1: f64) -> Result<f64> {
        Ok(self.curve_point(beta1)?.beta2)
    }

    /// `β₁` with `q(β₁) = β₂`. Refuses `β₂` within `crit_guard` of `β₂ᶜ`.
    pub fn q_inverse(&self, beta2: f64) -> Result<f64> {
        let c = self.critical_point();
        if !beta2.is_finite() {
            return Err(Error::InvalidParams(format!("beta2 must be finite, got {beta2}")));
        }
        if beta2 - c.beta2_c < self.settings.crit_guard {
            return Err(Error::NearCritical(format!(
                "beta2 = {beta2} is within {} of beta2_c = {} (or below it)",
                self.settings.crit_guard, c.beta2_c
            )));
        }
        Ok(self.solve_curve_at_beta2(beta2)?.beta1)
    }

    fn check_beta1(&self, beta1: f64, c: &CriticalPoint) -> Result<()> {
        if !beta1.is_finite() {
            return Err(Error::InvalidParams(format!("beta1 must be finite, got {beta1}")));
        }
        if beta1 > c.beta1_c {
            return Err(Error::Domain(format!(
                "the transition curve ends at beta1_c = {}; got beta1 = {beta1}",
                c.beta1_c
            )));
        }
        Ok(())
    }

    pub(crate) fn critical_curve_point(&self) -> CurvePoint {
        let c = self.critical_point();
        let p = self.p as f64;
        CurvePoint {
            beta1: c.beta1_c,
            beta2: c.beta2_c,
            x1: c.e_c,
            x2: c.e_c,
            qprime: -1.0 / (p * c.e_c.powi(self.p as i32 - 1)),
            dx1_dbeta1: f64::INFINITY,
            dx2_dbeta1: f64::NEG_INFINITY,
            dx1_dbeta2: f64::NEG_INFINITY,
            dx2_dbeta2: f64::INFINITY,
            degenerate: true,
        }
    }

    /// Curve point at `β₁ < β₁ᶜ` without the guard check.
    pub(crate) fn solve_curve_at_beta1(&self, beta1: f64) -> Result<CurvePoint> {
        let c = self.critical_point();
        if !(beta1 < c.beta1_c) {
            return Err(Error::Domain(format!("beta1 = {beta1} is not below beta1_c = {}", c.beta1_c)));
        }
        let axis = Axis::Beta2 { beta1 };
        // below the curve at β₂ᶜ since q(β₁) > β₂ᶜ; q(β₁) ≈ −β₁ far out
        let lo = c.beta2_c;
        let hi = self.expand_until_positive(axis, (beta1.abs() + 4.0).max(c.beta2_c + 1.0), c.beta2_c)?;
        self.solve_tie(axis, lo, hi)
    }

    /// Curve point at `β₂ > β₂ᶜ` without the guard check.
    pub(crate) fn solve_curve_at_beta2(&self, beta2: f64) -> Result<CurvePoint> {
        let c = self.critical_point();
        if !(beta2 > c.beta2_c) {
            return Err(Error::Domain(format!("beta2 = {beta2} is not above beta2_c = {}", c.beta2_c)));
        }
        let axis = Axis::Beta1 { beta2 };
        // above the curve at β₁ᶜ since q(β₁ᶜ) = β₂ᶜ < β₂
        let hi = c.beta1_c;
        let lo = self.expand_until_negative(axis, (-beta2 - 4.0).min(c.beta1_c - 1.0), c.beta1_c)?;
        self.solve_tie(axis, lo, hi)
    }

    fn params_on(&self, axis: Axis, t: f64) -> ModelParams {
        match axis {
            Axis::Beta2 { beta1 } => ModelParams { p: self.p, beta1, beta2: t },
            Axis::Beta1 { beta2 } => ModelParams { p: self.p, beta1: t, beta2 },
        }
    }

    /// Signed tie gap: `ℓ(x₂) − ℓ(x₁)` while two local maxima exist, else
    /// `±1` according to which side of `(p − 1)/p` the lone maximum is on.
    fn tie_gap(&self, params: &ModelParams) -> Result<f64> {
        let pts = analyze_stationary_with(params, &self.settings)?;
        let maxima: Vec<&StationaryPoint> = pts.iter().filter(|pt| pt.kind == StationaryKind::LocalMax).collect();
        if let [lower, upper] = maxima[..] {
            return Ok(upper.value - lower.value);
        }
        let e_c = self.critical_point().e_c;
        let top = crate::scalar::select_global(&pts, self.settings.tie_tol)[0];
        Ok(if top.x > e_c {
            1.0
        } else if top.x < e_c {
            -1.0
        } else {
            0.0
        })
    }

    fn expand_until_positive(&self, axis: Axis, start: f64, anchor: f64) -> Result<f64> {
        let mut t = start;
        for _ in 0..64 {
            if self.tie_gap(&self.params_on(axis, t))? > 0.0 {
                return Ok(t);
            }
            t = anchor + 2.0 * (t - anchor);
        }
        Err(Error::Convergence(format!("could not bracket the transition curve above {start}")))
    }

    fn expand_until_negative(&self, axis: Axis, start: f64, anchor: f64) -> Result<f64> {
        let mut t = start;
        for _ in 0..64 {
            if self.tie_gap(&self.params_on(axis, t))? < 0.0 {
                return Ok(t);
            }
            t = anchor - 2.0 * (anchor - t);
        }
        Err(Error::Convergence(format!("could not bracket the transition curve below {start}")))
    }

    fn solve_tie(&self, axis: Axis, lo: f64, hi: f64) -> Result<CurvePoint> {
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let gap = |t: f64| match self.tie_gap(&self.params_on(axis, t)) {
            Ok(g) => g,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        };
        let root = brent(gap, lo, hi, self.settings.root_tol);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let t = root?;
        let params = self.params_on(axis, t);
        let pts = analyze_stationary_with(&params, &self.settings)?;
        let maxima: Vec<StationaryPoint> = pts.into_iter().filter(|pt| pt.kind == StationaryKind::LocalMax).collect();
        let [lower, upper] = maxima[..] else {
            return Err(Error::Convergence(format!(
                "tie solve at {params:?} ended with {} local maxima",
                maxima.len()
            )));
        };
        Ok(self.assemble(params, lower, upper))
    }

    fn assemble(&self, params: ModelParams, lower: StationaryPoint, upper: StationaryPoint) -> CurvePoint {
        let p = self.p as f64;
        let pi = self.p as i32;
        let (x1, x2) = (lower.x, upper.x);
        // x₂ − x₁ through the complements keeps digits when x₂ is close to 1
        let width = (1.0 - x1) - upper.complement();
        let qprime = -width / (x2.powi(pi) - x1.powi(pi));
        // differentiate ℓ′(xᵢ) = β₁ + p q(β₁) xᵢ^{p−1} − I′(xᵢ) = 0 along the curve
        let dx1_dbeta1 = (1.0 + p * qprime * x1.powi(pi - 1)) / -lower.second_derivative;
        let dx2_dbeta1 = (1.0 + p * qprime * x2.powi(pi - 1)) / -upper.second_derivative;
        CurvePoint {
            beta1: params.beta1,
            beta2: params.beta2,
            x1,
            x2,
            qprime,
            dx1_dbeta1,
            dx2_dbeta1,
            dx1_dbeta2: dx1_dbeta1 / qprime,
            dx2_dbeta2: dx2_dbeta1 / qprime,
            degenerate: false,
        }
    }
}
