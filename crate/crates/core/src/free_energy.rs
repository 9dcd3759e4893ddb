//! Free energies with one density constrained and the other tilted,
//! `ψ(e, β₂)` and `ψ(β₁, s)`, plus the doubly tilted `ψ(β₁, β₂)`.
//!
//! For `(e, β₂)` the optimizer is uniform (`g ≡ e`) unless `β₂ > β₂ᶜ` and `e`
//! lies strictly between the curve maximizers `x₁ < x₂` at `(q⁻¹(β₂), β₂)`;
//! there it is bipodal and `ψ` is affine in `e`. The `(β₁, s)` case is the
//! same picture with `s` between `x₁ᵖ` and `x₂ᵖ` at `(β₁, q(β₁))`.
//!
//! The maximizers depend on the tilt parameter only, so they are computed
//! once per `β₂` (or `β₁`) as a [`USlice`] and shared by every `e` (or `s`).

use std::f64::consts::LN_2;

use crate::curve::CurvePoint;
use crate::error::{Error, Result};
use crate::scalar::{global_maximizers_with, logit, rate_i, ModelParams};
use crate::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionU {
    Uniform,
    Bipodal,
    Boundary,
    Critical,
}

impl RegionU {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionU::Uniform => "uniform",
            RegionU::Bipodal => "bipodal",
            RegionU::Boundary => "boundary",
            RegionU::Critical => "critical",
        }
    }

    pub fn code(&self) -> f64 {
        match self {
            RegionU::Uniform => 0.0,
            RegionU::Bipodal => 1.0,
            RegionU::Boundary => 2.0,
            RegionU::Critical => 3.0,
        }
    }
}

/// The transition-curve maximizers at one value of the tilt parameter, or
/// `None` when the parameter is on the uniform side of the critical point
/// (or within `surface_guard` of it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct USlice {
    pub curve: Option<CurvePoint>,
}

/// `sup_x ℓ(x) − log 2` with the set of maximizers.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgmSolution {
    pub value: f64,
    pub argmax: Vec<f64>,
}

pub fn classify_e_beta2(p: u32, e: f64, beta2: f64, tol: f64) -> Result<RegionU> {
    Model::new(p)?.classify_e_beta2(e, beta2, tol)
}

pub fn free_energy_e(p: u32, e: f64, beta2: f64) -> Result<f64> {
    Model::new(p)?.free_energy_e(e, beta2)
}

pub fn star_density(p: u32, e: f64, beta2: f64) -> Result<f64> {
    Model::new(p)?.star_density(e, beta2)
}

pub fn classify_beta1_s(p: u32, beta1: f64, s: f64, tol: f64) -> Result<RegionU> {
    Model::new(p)?.classify_beta1_s(beta1, s, tol)
}

pub fn free_energy_s(p: u32, beta1: f64, s: f64) -> Result<f64> {
    Model::new(p)?.free_energy_s(beta1, s)
}

pub fn edge_density(p: u32, beta1: f64, s: f64) -> Result<f64> {
    Model::new(p)?.edge_density(beta1, s)
}

pub fn ergm_free_energy(p: u32, beta1: f64, beta2: f64) -> Result<ErgmSolution> {
    Model::new(p)?.ergm_free_energy(beta1, beta2)
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be finite, got {v}")))
    }
}

/// Where `t` sits relative to the open interval `(lo, hi)`.
fn locate(t: f64, lo: f64, hi: f64, tol: f64) -> RegionU {
    if (t - lo).abs() <= tol || (t - hi).abs() <= tol {
        RegionU::Boundary
    } else if lo < t && t < hi {
        RegionU::Bipodal
    } else {
        RegionU::Uniform
    }
}

impl Model {
    /// Curve maximizers at `(q⁻¹(β₂), β₂)`.
    pub fn u_slice_beta2(&self, beta2: f64) -> Result<USlice> {
        finite("beta2", beta2)?;
        let c = self.critical_point();
        let curve = if beta2 - c.beta2_c >= self.settings.surface_guard {
            Some(self.solve_curve_at_beta2(beta2)?)
        } else {
            None
        };
        Ok(USlice { curve })
    }

    /// Curve maximizers at `(β₁, q(β₁))`.
    pub fn u_slice_beta1(&self, beta1: f64) -> Result<USlice> {
        finite("beta1", beta1)?;
        let c = self.critical_point();
        let curve = if c.beta1_c - beta1 >= self.settings.surface_guard {
            Some(self.solve_curve_at_beta1(beta1)?)
        } else {
            None
        };
        Ok(USlice { curve })
    }

    pub fn classify_e_beta2(&self, e: f64, beta2: f64, tol: f64) -> Result<RegionU> {
        unit_interval("e", e)?;
        let slice = self.u_slice_beta2(beta2)?;
        Ok(self.classify_e_in(e, beta2, &slice, tol))
    }

    pub fn classify_e_in(&self, e: f64, beta2: f64, slice: &USlice, tol: f64) -> RegionU {
        let c = self.critical_point();
        if (e - c.e_c).abs() <= tol && (beta2 - c.beta2_c).abs() <= tol {
            return RegionU::Critical;
        }
        match slice.curve {
            Some(cp) => locate(e, cp.x1, cp.x2, tol),
            None => RegionU::Uniform,
        }
    }

    /// `ψ(e, β₂)`.
    pub fn free_energy_e(&self, e: f64, beta2: f64) -> Result<f64> {
        unit_interval("e", e)?;
        let slice = self.u_slice_beta2(beta2)?;
        Ok(self.free_energy_e_in(e, beta2, &slice))
    }

    pub fn free_energy_e_in(&self, e: f64, beta2: f64, slice: &USlice) -> f64 {
        let pi = self.p as i32;
        match bipodal_e(e, slice) {
            Some((cp, lambda)) => {
                beta2 * (lambda * cp.x1.powi(pi) + (1.0 - lambda) * cp.x2.powi(pi))
                    - (lambda * rate_i(cp.x1) + (1.0 - lambda) * rate_i(cp.x2))
            }
            None => beta2 * e.powi(pi) - rate_i(e),
        }
    }

    /// `∂ψ(e, β₂)/∂β₂`, the limiting star density.
    pub fn star_density(&self, e: f64, beta2: f64) -> Result<f64> {
        unit_interval("e", e)?;
        let slice = self.u_slice_beta2(beta2)?;
        Ok(self.star_density_in(e, &slice))
    }

    pub fn star_density_in(&self, e: f64, slice: &USlice) -> f64 {
        let pi = self.p as i32;
        match bipodal_e(e, slice) {
            Some((cp, lambda)) => lambda * cp.x1.powi(pi) + (1.0 - lambda) * cp.x2.powi(pi),
            None => e.powi(pi),
        }
    }

    /// `∂ψ(e, β₂)/∂e`: `pβ₂eᵖ⁻¹ − I′(e)` in the uniform region, `−q⁻¹(β₂)` inside `U_e`.
    pub fn free_energy_e_slope_in(&self, e: f64, beta2: f64, slice: &USlice) -> f64 {
        match bipodal_e(e, slice) {
            Some((cp, _)) => -cp.beta1,
            None => {
                let p = self.p as f64;
                p * beta2 * e.powi(self.p as i32 - 1) - logit(e)
            }
        }
    }

    pub fn classify_beta1_s(&self, beta1: f64, s: f64, tol: f64) -> Result<RegionU> {
        unit_interval("s", s)?;
        let slice = self.u_slice_beta1(beta1)?;
        Ok(self.classify_s_in(beta1, s, &slice, tol))
    }

    pub fn classify_s_in(&self, beta1: f64, s: f64, slice: &USlice, tol: f64) -> RegionU {
        let c = self.critical_point();
        if (beta1 - c.beta1_c).abs() <= tol && (s - c.s_c).abs() <= tol {
            return RegionU::Critical;
        }
        let pi = self.p as i32;
        match slice.curve {
            Some(cp) => locate(s, cp.x1.powi(pi), cp.x2.powi(pi), tol),
            None => RegionU::Uniform,
        }
    }

    /// `ψ(β₁, s)`.
    pub fn free_energy_s(&self, beta1: f64, s: f64) -> Result<f64> {
        unit_interval("s", s)?;
        let slice = self.u_slice_beta1(beta1)?;
        Ok(self.free_energy_s_in(beta1, s, &slice))
    }

    pub fn free_energy_s_in(&self, beta1: f64, s: f64, slice: &USlice) -> f64 {
        match self.bipodal_s(s, slice) {
            Some((cp, mu)) => {
                beta1 * (mu * cp.x1 + (1.0 - mu) * cp.x2) - (mu * rate_i(cp.x1) + (1.0 - mu) * rate_i(cp.x2))
            }
            None => {
                let t = self.root_p(s);
                beta1 * t - rate_i(t)
            }
        }
    }

    /// `∂ψ(β₁, s)/∂β₁`, the limiting edge density.
    pub fn edge_density(&self, beta1: f64, s: f64) -> Result<f64> {
        unit_interval("s", s)?;
        let slice = self.u_slice_beta1(beta1)?;
        Ok(self.edge_density_in(s, &slice))
    }

    pub fn edge_density_in(&self, s: f64, slice: &USlice) -> f64 {
        match self.bipodal_s(s, slice) {
            Some((cp, mu)) => mu * cp.x1 + (1.0 - mu) * cp.x2,
            None => self.root_p(s),
        }
    }

    /// `∂ψ(β₁, s)/∂s`: `(β₁ − I′(t)) t^{1−p}/p` with `t = s^{1/p}` in the
    /// uniform region, `−q(β₁)` inside `U_s`.
    pub fn free_energy_s_slope_in(&self, beta1: f64, s: f64, slice: &USlice) -> f64 {
        match self.bipodal_s(s, slice) {
            Some((cp, _)) => -cp.beta2,
            None => {
                let t = self.root_p(s);
                let p = self.p as f64;
                (beta1 - logit(t)) * t.powi(1 - self.p as i32) / p
            }
        }
    }

    /// `sup_{0≤x≤1} (β₁x + β₂xᵖ − I(x))` and its maximizers.
    pub fn ergm_free_energy(&self, beta1: f64, beta2: f64) -> Result<ErgmSolution> {
        let params = ModelParams::new(self.p, beta1, beta2)?;
        let top = global_maximizers_with(&params, self.settings.tie_tol, &self.settings)?;
        let value = top.iter().map(|pt| pt.value).fold(f64::NEG_INFINITY, f64::max) - LN_2;
        Ok(ErgmSolution { value, argmax: top.iter().map(|pt| pt.x).collect() })
    }

    fn root_p(&self, s: f64) -> f64 {
        match self.p {
            2 => s.sqrt(),
            3 => s.cbrt(),
            p => s.powf(1.0 / p as f64),
        }
    }

    fn bipodal_s<'a>(&self, s: f64, slice: &'a USlice) -> Option<(&'a CurvePoint, f64)> {
        let cp = slice.curve.as_ref()?;
        let pi = self.p as i32;
        let (lo, hi) = (cp.x1.powi(pi), cp.x2.powi(pi));
        (lo < s && s < hi).then(|| (cp, (hi - s) / (hi - lo)))
    }
}

fn bipodal_e(e: f64, slice: &USlice) -> Option<(&CurvePoint, f64)> {
    let cp = slice.curve.as_ref()?;
    (cp.x1 < e && e < cp.x2).then(|| (cp, (cp.x2 - e) / (cp.x2 - cp.x1)))
}
