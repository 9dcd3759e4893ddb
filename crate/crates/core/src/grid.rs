//! Rectangular surface grids over `(e, s)`, `(e, β₂)` or `(β₁, s)`.
//!
//! Cells are evaluated in parallel; the value matrix is row-major with rows
//! indexed by the first axis, so output is independent of the worker count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::emit::{fmt_num, json_num};
use crate::error::{Error, Result};
use crate::free_energy::USlice;
use crate::Model;

pub const MIN_RESOLUTION: usize = 8;
pub const MAX_RESOLUTION: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    PsiEs,
    DpsiDe,
    DpsiDs,
    PsiEBeta2,
    PsiBeta1S,
    RegionTag,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::PsiEs,
        Quantity::DpsiDe,
        Quantity::DpsiDs,
        Quantity::PsiEBeta2,
        Quantity::PsiBeta1S,
        Quantity::RegionTag,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::PsiEs => "psi_es",
            Quantity::DpsiDe => "dpsi_de",
            Quantity::DpsiDs => "dpsi_ds",
            Quantity::PsiEBeta2 => "psi_e_beta2",
            Quantity::PsiBeta1S => "psi_beta1_s",
            Quantity::RegionTag => "region_tag",
        }
    }

    /// Plane used when none is requested.
    pub fn default_plane(&self) -> Plane {
        match self {
            Quantity::PsiEs => Plane::ES,
            Quantity::DpsiDe | Quantity::PsiEBeta2 | Quantity::RegionTag => Plane::EBeta2,
            Quantity::DpsiDs | Quantity::PsiBeta1S => Plane::Beta1S,
        }
    }

    fn allowed_on(&self, plane: Plane) -> bool {
        match self {
            Quantity::PsiEs => plane == Plane::ES,
            Quantity::PsiEBeta2 => plane == Plane::EBeta2,
            Quantity::PsiBeta1S => plane == Plane::Beta1S,
            Quantity::DpsiDe => plane != Plane::Beta1S,
            Quantity::DpsiDs => plane != Plane::EBeta2,
            Quantity::RegionTag => true,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown quantity {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Plane {
    ES,
    EBeta2,
    Beta1S,
}

impl Plane {
    pub fn as_str(&self) -> &'static str {
        match self {
            Plane::ES => "e-s",
            Plane::EBeta2 => "e-beta2",
            Plane::Beta1S => "beta1-s",
        }
    }

    pub fn axis_names(&self) -> (&'static str, &'static str) {
        match self {
            Plane::ES => ("e", "s"),
            Plane::EBeta2 => ("e", "beta2"),
            Plane::Beta1S => ("beta1", "s"),
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e-s" => Ok(Plane::ES),
            "e-beta2" => Ok(Plane::EBeta2),
            "beta1-s" => Ok(Plane::Beta1S),
            _ => Err(Error::InvalidParams(format!("unknown plane {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `count` evenly spaced points from `lo` to `hi` inclusive.
    pub fn linspace(name: &str, lo: f64, hi: f64, count: usize) -> Result<Axis> {
        if count < 2 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParams(format!("axis {name}: need lo < hi and count >= 2")));
        }
        let step = (hi - lo) / (count - 1) as f64;
        let mut values: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
        values[count - 1] = hi;
        Ok(Axis { name: name.into(), values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Values of one quantity on `axis1 × axis2`; `values[i * axis2.len() + j]`
/// is the cell at `(axis1[i], axis2[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub p: u32,
    pub quantity: Quantity,
    pub plane: Plane,
    pub axis1: Axis,
    pub axis2: Axis,
    pub values: Vec<f64>,
}

impl SurfaceGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axis2.len() + j]
    }

    /// Long format: `axis1,axis2,quantity` header, one line per cell.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{},{}\n", self.axis1.name, self.axis2.name, self.quantity);
        for (i, a) in self.axis1.values.iter().enumerate() {
            for (j, b) in self.axis2.values.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", fmt_num(*a), fmt_num(*b), fmt_num(self.get(i, j))));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|&x| json_num(x)).collect::<Vec<_>>().join(",");
        format!(
            "{{\"p\":{},\"quantity\":\"{}\",\"plane\":\"{}\",\"axis1\":{{\"name\":\"{}\",\"values\":[{}]}},\"axis2\":{{\"name\":\"{}\",\"values\":[{}]}},\"values\":[{}]}}\n",
            self.p,
            self.quantity,
            self.plane,
            self.axis1.name,
            list(&self.axis1.values),
            self.axis2.name,
            list(&self.axis2.values),
            list(&self.values),
        )
    }
}

/// Grid request. Unset ranges fall back to `[0, 1]` for densities,
/// `[β₂ᶜ − 2, β₂ᶜ + 4]` for `β₂` and `[β₁ᶜ − 4, β₁ᶜ + 2]` for `β₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub quantity: Quantity,
    pub plane: Option<Plane>,
    pub resolution: usize,
    pub beta1_range: Option<(f64, f64)>,
    pub beta2_range: Option<(f64, f64)>,
}

impl GridSpec {
    pub fn new(quantity: Quantity, resolution: usize) -> Self {
        GridSpec { quantity, plane: None, resolution, beta1_range: None, beta2_range: None }
    }
}

impl Model {
    pub fn surface_grid(&self, spec: &GridSpec) -> Result<SurfaceGrid> {
        let n = spec.resolution;
        if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&n) {
            return Err(Error::InvalidParams(format!(
                "resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], got {n}"
            )));
        }
        let plane = spec.plane.unwrap_or(spec.quantity.default_plane());
        if !spec.quantity.allowed_on(plane) {
            return Err(Error::InvalidParams(format!("{} is not defined on the {} plane", spec.quantity, plane)));
        }
        let c = self.critical_point();
        let (b1lo, b1hi) = spec.beta1_range.unwrap_or((c.beta1_c - 4.0, c.beta1_c + 2.0));
        let (b2lo, b2hi) = spec.beta2_range.unwrap_or((c.beta2_c - 2.0, c.beta2_c + 4.0));
        let (axis1, axis2) = match plane {
            Plane::ES => (Axis::linspace("e", 0.0, 1.0, n)?, Axis::linspace("s", 0.0, 1.0, n)?),
            Plane::EBeta2 => (Axis::linspace("e", 0.0, 1.0, n)?, Axis::linspace("beta2", b2lo, b2hi, n)?),
            Plane::Beta1S => (Axis::linspace("beta1", b1lo, b1hi, n)?, Axis::linspace("s", 0.0, 1.0, n)?),
        };
        let values = match plane {
            Plane::ES => self.es_cells(spec.quantity, &axis1, &axis2)?,
            Plane::EBeta2 => self.e_beta2_cells(spec.quantity, &axis1, &axis2)?,
            Plane::Beta1S => self.beta1_s_cells(spec.quantity, &axis1, &axis2)?,
        };
        Ok(SurfaceGrid { p: self.p, quantity: spec.quantity, plane, axis1, axis2, values })
    }

    fn es_cells(&self, q: Quantity, es: &Axis, ss: &Axis) -> Result<Vec<f64>> {
        let cells: Vec<(f64, f64)> =
            es.values.iter().flat_map(|&e| ss.values.iter().map(move |&s| (e, s))).collect();
        cells
            .par_iter()
            .map(|&(e, s)| {
                let region = self.classify_es(e, s, self.settings.region_tol);
                match q {
                    Quantity::PsiEs => self.entropy(e, s),
                    Quantity::RegionTag => Ok(region.code()),
                    Quantity::DpsiDe | Quantity::DpsiDs => {
                        if region == crate::RegionES::Interior {
                            let (de, ds) = self.entropy_gradient(e, s)?;
                            Ok(if q == Quantity::DpsiDe { de } else { ds })
                        } else {
                            Ok(f64::NAN)
                        }
                    }
                    _ => unreachable!("checked by allowed_on"),
                }
            })
            .collect()
    }

    fn e_beta2_cells(&self, q: Quantity, es: &Axis, b2s: &Axis) -> Result<Vec<f64>> {
        let slices: Vec<USlice> =
            b2s.values.par_iter().map(|&b2| self.u_slice_beta2(b2)).collect::<Result<_>>()?;
        let tol = self.settings.region_tol;
        let rows: Vec<Vec<f64>> = es
            .values
            .par_iter()
            .map(|&e| {
                b2s.values
                    .iter()
                    .zip(&slices)
                    .map(|(&b2, slice)| match q {
                        Quantity::PsiEBeta2 => self.free_energy_e_in(e, b2, slice),
                        Quantity::DpsiDe => self.free_energy_e_slope_in(e, b2, slice),
                        Quantity::RegionTag => self.classify_e_in(e, b2, slice, tol).code(),
                        _ => unreachable!("checked by allowed_on"),
                    })
                    .collect()
            })
            .collect();
        Ok(rows.concat())
    }

    fn beta1_s_cells(&self, q: Quantity, b1s: &Axis, ss: &Axis) -> Result<Vec<f64>> {
        let tol = self.settings.region_tol;
        let rows: Vec<Vec<f64>> = b1s
            .values
            .par_iter()
            .map(|&b1| {
                let slice = self.u_slice_beta1(b1)?;
                Ok(ss
                    .values
                    .iter()
                    .map(|&s| match q {
                        Quantity::PsiBeta1S => self.free_energy_s_in(b1, s, &slice),
                        Quantity::DpsiDs => self.free_energy_s_slope_in(b1, s, &slice),
                        Quantity::RegionTag => self.classify_s_in(b1, s, &slice, tol).code(),
                        _ => unreachable!("checked by allowed_on"),
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(rows.concat())
    }
}
