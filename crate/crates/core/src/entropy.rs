//! The limiting entropy density `ψ(e, s)`, its gradient and the rate
//! function `J = −ψ`.
//!
//! Inside `D = {eᵖ < s < e}` the optimizer is bipodal: a fraction `λ` of
//! nodes has out-degree rate `x₁` and the rest `x₂`, where `x₁ < x₂` are the
//! two global maximizers of `ℓ` at some point of the transition curve. That
//! point is the unique `β₁*` at which the chord from `(x₁, x₁ᵖ)` to
//! `(x₂, x₂ᵖ)` passes through `(e, s)`, i.e. the root of
//!
//! ```text
//! F(β₁) = e − x₂ + q′(β₁)(s − x₂ᵖ)
//! ```
//!
//! `F` decreases strictly from `e − s ≥ 0` (as `β₁ → −∞`) to a non-positive
//! value at `β₁ᶜ`.

use std::cell::RefCell;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::roots::brent_with_values;
use crate::scalar::rate_i;
use crate::Model;

/// Position of `(e, s)` relative to `D̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionES {
    Outside,
    Interior,
    /// On `s = eᵖ`.
    LowerBoundary,
    /// On `s = e`.
    UpperBoundary,
    /// On both curves, i.e. `(0, 0)` or `(1, 1)`.
    Corner,
}

impl RegionES {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionES::Outside => "outside",
            RegionES::Interior => "interior",
            RegionES::LowerBoundary => "lower_boundary",
            RegionES::UpperBoundary => "upper_boundary",
            RegionES::Corner => "corner",
        }
    }

    /// Numeric tag used in region grids.
    pub fn code(&self) -> f64 {
        match self {
            RegionES::Outside => 0.0,
            RegionES::Interior => 1.0,
            RegionES::LowerBoundary => 2.0,
            RegionES::UpperBoundary => 3.0,
            RegionES::Corner => 4.0,
        }
    }
}

/// Which route [`Model::solve_bipodal_with`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMethod {
    /// Closed form for `p = 2`, chord root-finding otherwise.
    #[default]
    Auto,
    /// Always the chord root-finding, whatever `p` is.
    General,
}

/// Two-level step-function optimizer for `ψ(e, s)`: a `λ` fraction of nodes
/// with out-degree rate `x₁`, the rest with `x₂`, and the Lagrange
/// multipliers `(β₁, β₂)` of the constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipodalProfile {
    pub x1: f64,
    pub x2: f64,
    pub lambda: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// The chord collapsed next to the critical point; `x₁ = x₂ = e` and `ψ`
    /// is taken from the lower-boundary formula.
    pub degenerate: bool,
}

impl BipodalProfile {
    /// Residuals of the two moment constraints for star order `p`.
    pub fn residuals(&self, p: u32, e: f64, s: f64) -> (f64, f64) {
        let l = self.lambda;
        let pi = p as i32;
        (
            l * self.x1 + (1.0 - l) * self.x2 - e,
            l * self.x1.powi(pi) + (1.0 - l) * self.x2.powi(pi) - s,
        )
    }

    /// `−λI(x₁) − (1 − λ)I(x₂)`.
    pub fn entropy(&self) -> f64 {
        -self.lambda * rate_i(self.x1) - (1.0 - self.lambda) * rate_i(self.x2)
    }
}

pub fn classify_es(p: u32, e: f64, s: f64, tol: f64) -> Result<RegionES> {
    Ok(Model::new(p)?.classify_es(e, s, tol))
}

pub fn solve_bipodal(p: u32, e: f64, s: f64) -> Result<BipodalProfile> {
    Model::new(p)?.solve_bipodal(e, s)
}

pub fn entropy(p: u32, e: f64, s: f64) -> Result<f64> {
    Model::new(p)?.entropy(e, s)
}

pub fn entropy_gradient(p: u32, e: f64, s: f64) -> Result<(f64, f64)> {
    Model::new(p)?.entropy_gradient(e, s)
}

pub fn rate_function(p: u32, e: f64, s: f64) -> Result<f64> {
    Model::new(p)?.rate_function(e, s)
}

/// `ψ(e, s) = −I(1/2 + √(s − e + 1/4))` on `D̄` for `p = 2`.
pub fn entropy_p2_closed(e: f64, s: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    let disc = s - e + 0.25;
    let inside = (0.0..=1.0).contains(&e)
        && (0.0..=1.0).contains(&s)
        && s <= e + SLACK
        && s >= e * e - SLACK
        && disc >= -SLACK;
    if !inside {
        return Err(Error::Domain(format!("({e}, {s}) is outside the closure of D for p = 2")));
    }
    Ok(-rate_i((0.5 + disc.max(0.0).sqrt()).min(1.0)))
}

impl Model {
    pub fn classify_es(&self, e: f64, s: f64, tol: f64) -> RegionES {
        if !(0.0..=1.0).contains(&e) || !(0.0..=1.0).contains(&s) {
            return RegionES::Outside;
        }
        let above_floor = s - e.powi(self.p as i32);
        let below_ceiling = e - s;
        if above_floor < -tol || below_ceiling < -tol {
            return RegionES::Outside;
        }
        match (above_floor <= tol, below_ceiling <= tol) {
            (true, true) => RegionES::Corner,
            (true, false) => RegionES::LowerBoundary,
            (false, true) => RegionES::UpperBoundary,
            (false, false) => RegionES::Interior,
        }
    }

    pub fn solve_bipodal(&self, e: f64, s: f64) -> Result<BipodalProfile> {
        self.solve_bipodal_with(e, s, SolveMethod::Auto)
    }

    pub fn solve_bipodal_with(&self, e: f64, s: f64, method: SolveMethod) -> Result<BipodalProfile> {
        self.require_interior(e, s)?;
        if self.p == 2 && method == SolveMethod::Auto {
            return Ok(p2_profile(e, s));
        }
        let c = self.critical_point();
        let hi = c.beta1_c - self.settings.crit_guard;
        let f_hi = self.chord_residual(hi, e, s)?;
        if f_hi > 0.0 {
            // β₁* lies inside the guard band: the chord has all but collapsed
            return Ok(self.degenerate_profile(e, c.beta1_c, c.beta2_c));
        }
        let mut bracket = None;
        for step in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0] {
            let lo = c.beta1_c - step;
            let f_lo = self.chord_residual(lo, e, s)?;
            if f_lo > 0.0 {
                bracket = Some((lo, f_lo));
                break;
            }
            if f_lo == 0.0 {
                return self.profile_at(lo, e);
            }
        }
        let Some((lo, f_lo)) = bracket else {
            return Err(Error::Convergence(format!(
                "chord through ({e}, {s}) not bracketed within beta1 >= beta1_c - 50"
            )));
        };
        self.solve_bipodal_in_bracket(e, s, (lo, f_lo), (hi, f_hi))
    }

    /// General chord solve on a caller-chosen bracket `lo < β₁* ≤ hi`.
    pub fn solve_bipodal_in(&self, e: f64, s: f64, lo: f64, hi: f64) -> Result<BipodalProfile> {
        self.require_interior(e, s)?;
        let f_lo = self.chord_residual(lo, e, s)?;
        let f_hi = self.chord_residual(hi, e, s)?;
        self.solve_bipodal_in_bracket(e, s, (lo, f_lo), (hi, f_hi))
    }

    fn solve_bipodal_in_bracket(&self, e: f64, s: f64, lo: (f64, f64), hi: (f64, f64)) -> Result<BipodalProfile> {
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let f = |b1: f64| match self.chord_residual(b1, e, s) {
            Ok(v) => v,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                f64::NAN
            }
        };
        let root = brent_with_values(f, lo.0, hi.0, lo.1, hi.1, self.settings.root_tol);
        if let Some(err) = failure.into_inner() {
            return Err(err);
        }
        self.profile_at(root?, e)
    }

    /// `F(β₁) = e − x₂ + q′(β₁)(s − x₂ᵖ)`; zero when the curve chord at `β₁`
    /// passes through `(e, s)`.
    pub fn chord_residual(&self, beta1: f64, e: f64, s: f64) -> Result<f64> {
        let cp = self.solve_curve_at_beta1(beta1)?;
        Ok(e - cp.x2 + cp.qprime * (s - cp.x2.powi(self.p as i32)))
    }

    fn profile_at(&self, beta1: f64, e: f64) -> Result<BipodalProfile> {
        let cp = self.solve_curve_at_beta1(beta1)?;
        if cp.x2 - cp.x1 < self.settings.chord_min_width {
            return Ok(self.degenerate_profile(e, cp.beta1, cp.beta2));
        }
        Ok(BipodalProfile {
            x1: cp.x1,
            x2: cp.x2,
            lambda: (cp.x2 - e) / (cp.x2 - cp.x1),
            beta1: cp.beta1,
            beta2: cp.beta2,
            degenerate: false,
        })
    }

    fn degenerate_profile(&self, e: f64, beta1: f64, beta2: f64) -> BipodalProfile {
        BipodalProfile { x1: e, x2: e, lambda: 1.0, beta1, beta2, degenerate: true }
    }

    fn require_interior(&self, e: f64, s: f64) -> Result<()> {
        match self.classify_es(e, s, self.settings.region_tol) {
            RegionES::Interior => Ok(()),
            other => Err(Error::Domain(format!(
                "({e}, {s}) is not interior to D for p = {} (region: {})",
                self.p,
                other.as_str()
            ))),
        }
    }

    /// `ψ(e, s)`; `−∞` outside `D̄`.
    pub fn entropy(&self, e: f64, s: f64) -> Result<f64> {
        self.entropy_with(e, s, SolveMethod::Auto)
    }

    pub fn entropy_with(&self, e: f64, s: f64, method: SolveMethod) -> Result<f64> {
        Ok(match self.classify_es(e, s, self.settings.region_tol) {
            RegionES::Outside => f64::NEG_INFINITY,
            RegionES::UpperBoundary => -LN_2,
            RegionES::LowerBoundary | RegionES::Corner => -rate_i(e),
            RegionES::Interior => {
                let profile = self.solve_bipodal_with(e, s, method)?;
                if profile.degenerate {
                    -rate_i(e)
                } else {
                    profile.entropy()
                }
            }
        })
    }

    /// `(∂ψ/∂e, ∂ψ/∂s) = (−β₁, −β₂)` at an interior point.
    pub fn entropy_gradient(&self, e: f64, s: f64) -> Result<(f64, f64)> {
        let profile = self.solve_bipodal(e, s)?;
        Ok((-profile.beta1, -profile.beta2))
    }

    /// `J(e, s) = −ψ(e, s)`; `+∞` outside `D̄`.
    pub fn rate_function(&self, e: f64, s: f64) -> Result<f64> {
        Ok(-self.entropy(e, s)?)
    }
}

/// For `p = 2` the curve is `β₂ = −β₁` with `x₁ + x₂ = 1`, so the chord
/// through `(e, s)` has `x₁x₂ = e − s`.
fn p2_profile(e: f64, s: f64) -> BipodalProfile {
    let d = e - s;
    let r = (1.0 - 4.0 * d).max(0.0).sqrt();
    let x2 = 0.5 * (1.0 + r);
    let x1 = 2.0 * d / (1.0 + r);
    // ℓ′(x₂) = 0 with β₁ = −β₂: β₂(2x₂ − 1) = log(x₂/x₁)
    let beta2 = if r > 0.0 { (x2 / x1).ln() / r } else { 2.0 };
    BipodalProfile {
        x1,
        x2,
        lambda: if r > 0.0 { (x2 - e) / r } else { 1.0 },
        beta1: -beta2,
        beta2,
        degenerate: r == 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let tol = 1e-9;
        assert_eq!(classify_es(2, 0.5, 0.3, tol).unwrap(), RegionES::Interior);
        assert_eq!(classify_es(2, 0.5, 0.25, tol).unwrap(), RegionES::LowerBoundary);
        assert_eq!(classify_es(2, 0.5, 0.6, tol).unwrap(), RegionES::Outside);
        assert_eq!(classify_es(2, 0.6, 0.6, tol).unwrap(), RegionES::UpperBoundary);
        assert_eq!(classify_es(3, 1.0, 1.0, tol).unwrap(), RegionES::Corner);
        assert_eq!(classify_es(3, 0.0, 0.0, tol).unwrap(), RegionES::Corner);
        assert_eq!(classify_es(2, 0.5, 0.1, tol).unwrap(), RegionES::Outside);
        assert_eq!(classify_es(2, -0.1, 0.0, tol).unwrap(), RegionES::Outside);
    }

    #[test]
    fn p2_profiles_match_the_closed_form_construction() {
        let pr = solve_bipodal(2, 0.5, 0.3).unwrap();
        assert!((pr.x1 - (0.5 - 0.05f64.sqrt())).abs() < 1e-14);
        assert!((pr.x2 - (0.5 + 0.05f64.sqrt())).abs() < 1e-14);
        assert!((pr.lambda - 0.5).abs() < 1e-14);

        let pr = solve_bipodal(2, 0.4, 0.28).unwrap();
        let x1 = (1.0 - 0.52f64.sqrt()) / 2.0;
        let x2 = (1.0 + 0.52f64.sqrt()) / 2.0;
        assert!((pr.x1 - x1).abs() < 1e-14 && (pr.x2 - x2).abs() < 1e-14);
        assert!((pr.lambda - (x2 - 0.4) / (x2 - x1)).abs() < 1e-13);
        assert!((pr.lambda - 0.638_675_049_056_307).abs() < 1e-12);
    }

    #[test]
    fn general_route_agrees_with_p2_closed_form() {
        let model = Model::new(2).unwrap();
        for &(e, s) in &[(0.5, 0.3), (0.4, 0.28), (0.2, 0.1), (0.9, 0.85), (0.7, 0.5)] {
            let fast = model.solve_bipodal(e, s).unwrap();
            let general = model.solve_bipodal_with(e, s, SolveMethod::General).unwrap();
            assert!((fast.x1 - general.x1).abs() < 1e-9, "{e} {s}");
            assert!((fast.x2 - general.x2).abs() < 1e-9);
            assert!((fast.beta2 - general.beta2).abs() < 1e-8);
            let (re, rs) = general.residuals(2, e, s);
            assert!(re.abs() < 1e-9 && rs.abs() < 1e-9);
        }
    }

    #[test]
    fn entropy_examples() {
        let v = entropy(3, 0.7, 0.343).unwrap();
        assert!((v + 0.082_282_878_505_051_78).abs() < 1e-12);
        assert!((entropy(2, 0.6, 0.6).unwrap() + LN_2).abs() < 1e-15);
        assert!((entropy(2, 0.5, 0.3).unwrap() + 0.103_632_694_824_897_12).abs() < 1e-12);
        assert_eq!(entropy(2, 0.5, 0.6).unwrap(), f64::NEG_INFINITY);
        assert_eq!(rate_function(2, 0.5, 0.6).unwrap(), f64::INFINITY);
        assert_eq!(rate_function(2, 0.5, 0.25).unwrap(), 0.0);
        assert!((rate_function(2, 0.6, 0.6).unwrap() - LN_2).abs() < 1e-15);
        assert!((rate_function(2, 0.5, 0.3).unwrap() - 0.103_632_694_824_897_12).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples_and_domain() {
        assert_eq!(entropy_p2_closed(0.5, 0.25).unwrap(), 0.0);
        assert!((entropy_p2_closed(0.5, 0.5).unwrap() + LN_2).abs() < 1e-15);
        let want = -rate_i(0.5 + 0.13f64.sqrt());
        assert!((entropy_p2_closed(0.4, 0.28).unwrap() - want).abs() < 1e-15);
        assert!(entropy_p2_closed(0.5, 0.6).is_err());
        assert!(entropy_p2_closed(0.5, 0.2).is_err());
    }

    #[test]
    fn gradient_p2() {
        let (de, ds) = entropy_gradient(2, 0.5, 0.3).unwrap();
        let x2 = 0.5 + 0.05f64.sqrt();
        let beta2 = (x2 / (1.0 - x2)).ln() / (2.0 * x2 - 1.0);
        assert!((ds + beta2).abs() < 1e-12);
        assert!((de - beta2).abs() < 1e-12);
        assert!((ds + 2.1520).abs() < 1e-4);
        assert!(entropy_gradient(2, 0.5, 0.25).is_err());
    }

    #[test]
    fn near_critical_chord_is_degenerate_p3() {
        let model = Model::new(3).unwrap();
        let e = 2.0 / 3.0;
        let s = e * e * e + 1e-8;
        let pr = model.solve_bipodal(e, s).unwrap();
        assert!(pr.degenerate);
        assert_eq!((pr.x1, pr.x2), (e, e));
        let psi = model.entropy(e, s).unwrap();
        assert!((psi + rate_i(e)).abs() < 1e-12);
    }

    #[test]
    fn solve_rejects_non_interior_points() {
        assert!(matches!(solve_bipodal(3, 0.5, 0.5), Err(Error::Domain(_))));
        assert!(matches!(solve_bipodal(3, 0.5, 0.125), Err(Error::Domain(_))));
    }
}
