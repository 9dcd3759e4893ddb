use crate::error::{Error, Result};

/// Numerical tolerances shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Absolute tolerance of the bracketed root solves (in the solver's own variable).
    pub root_tol: f64,
    /// Distance from a region boundary inside which a point counts as on the boundary.
    pub region_tol: f64,
    /// Two local maxima of `ℓ` whose values differ by at most this are both global.
    pub tie_tol: f64,
    /// `|ℓ″(x)|` at or below this classifies a stationary point as degenerate.
    pub degenerate_tol: f64,
    /// Curve points closer than this to `β₁ᶜ` (or `β₂ᶜ`) are refused by the public curve API.
    pub crit_guard: f64,
    /// Free-energy surfaces treat parameters closer than this to the critical
    /// point as uniform; the bipodal region there is narrower than any grid.
    pub surface_guard: f64,
    /// A chord with `x₂ − x₁` below this is reported as the degenerate profile.
    pub chord_min_width: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            root_tol: 1e-13,
            region_tol: 1e-9,
            tie_tol: 1e-10,
            degenerate_tol: 1e-8,
            crit_guard: 1e-6,
            surface_guard: 1e-7,
            chord_min_width: 1e-5,
        }
    }
}

impl Settings {
    pub(crate) fn validate(&self) -> Result<()> {
        let fields = [
            ("root_tol", self.root_tol),
            ("region_tol", self.region_tol),
            ("tie_tol", self.tie_tol),
            ("degenerate_tol", self.degenerate_tol),
            ("crit_guard", self.crit_guard),
            ("surface_guard", self.surface_guard),
            ("chord_min_width", self.chord_min_width),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}
