use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::numerics::{spectral_multiply, ComplexField1D, GridSpec};
use crate::{Error, Result};

/// Acceptance below which a branch counts as fully blocked.
pub const BLOCKED_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OpticalElement {
    /// Paraxial propagation over `distance` metres.
    FreeSpace { distance: f64 },
    ThinLens { focal: f64 },
    /// Ideal momentum window `|k_y| ≤ k·sin(half_angle)`.
    AngularFilter { half_angle: f64 },
    /// Two slits of width `width` centred at `±separation/2`.
    SlitMask { width: f64, separation: f64 },
    SingleAperture { width: f64, center: f64 },
}

impl OpticalElement {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Element(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            OpticalElement::FreeSpace { distance } => positive("distance", distance),
            OpticalElement::ThinLens { focal } => positive("focal length", focal),
            OpticalElement::AngularFilter { half_angle } => {
                if half_angle > 0.0 && half_angle < FRAC_PI_2 {
                    Ok(())
                } else {
                    Err(Error::Element(format!("half angle {half_angle} outside (0, pi/2)")))
                }
            }
            OpticalElement::SlitMask { width, separation } => {
                positive("slit width", width)?;
                positive("slit separation", separation)?;
                if separation > width {
                    Ok(())
                } else {
                    Err(Error::Element("slit separation must exceed slit width".into()))
                }
            }
            OpticalElement::SingleAperture { width, center } => {
                positive("aperture width", width)?;
                if center.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Element("aperture centre must be finite".into()))
                }
            }
        }
    }

    pub fn is_angular_filter(&self) -> bool {
        matches!(self, OpticalElement::AngularFilter { .. })
    }

    /// Amplitude transmission per cell for the aperture elements.
    pub fn transmission(&self, grid: &GridSpec) -> Option<Vec<f64>> {
        match *self {
            OpticalElement::SlitMask { width, separation } => {
                let upper = cell_overlap(grid, separation / 2.0, width);
                let lower = cell_overlap(grid, -separation / 2.0, width);
                Some(upper.iter().zip(&lower).map(|(a, b)| a + b).collect())
            }
            OpticalElement::SingleAperture { width, center } => Some(cell_overlap(grid, center, width)),
            _ => None,
        }
    }
}

/// Fraction of each grid cell covered by `[center - width/2, center + width/2]`.
///
/// This is the binary aperture averaged over each cell, so edge cells are
/// partially transmitting and the effective width is exact.
pub fn cell_overlap(grid: &GridSpec, center: f64, width: f64) -> Vec<f64> {
    let (lo, hi) = (center - width / 2.0, center + width / 2.0);
    let dy = grid.spacing();
    grid.positions()
        .map(|y| {
            let l = (y - dy / 2.0).max(lo);
            let h = (y + dy / 2.0).min(hi);
            ((h - l) / dy).clamp(0.0, 1.0)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum ElementOutcome {
    /// Renormalized output field and the fraction of probability that passed.
    Transmitted { field: ComplexField1D, acceptance: f64 },
    Blocked,
}

impl ElementOutcome {
    pub fn acceptance(&self) -> f64 {
        match self {
            ElementOutcome::Transmitted { acceptance, .. } => *acceptance,
            ElementOutcome::Blocked => 0.0,
        }
    }
}

fn renormalize(field: ComplexField1D) -> ElementOutcome {
    let m = field.norm_sqr();
    if m < BLOCKED_THRESHOLD {
        return ElementOutcome::Blocked;
    }
    let (field, _) = field.normalized().expect("nonzero norm");
    ElementOutcome::Transmitted {
        field,
        acceptance: m.min(1.0),
    }
}

/// Propagate a normalized transverse field through one element at wavelength
/// `lambda`.
pub fn apply_element(state: &ComplexField1D, element: &OpticalElement, lambda: f64) -> Result<ElementOutcome> {
    element.validate()?;
    state.ensure_normalized()?;
    let k = 2.0 * PI / lambda;
    let out = match *element {
        OpticalElement::FreeSpace { distance } => {
            let field = spectral_multiply(state, |ky| Complex64::from_polar(1.0, -ky * ky * distance / (2.0 * k)));
            ElementOutcome::Transmitted { field, acceptance: 1.0 }
        }
        OpticalElement::ThinLens { focal } => {
            let mut field = state.clone();
            let grid = *field.grid();
            for (y, v) in grid.positions().zip(field.values_mut()) {
                *v *= Complex64::from_polar(1.0, -k * y * y / (2.0 * focal));
            }
            ElementOutcome::Transmitted { field, acceptance: 1.0 }
        }
        OpticalElement::AngularFilter { half_angle } => {
            let cutoff = k * half_angle.sin();
            let zero = Complex64::new(0.0, 0.0);
            let one = Complex64::new(1.0, 0.0);
            renormalize(spectral_multiply(state, |ky| if ky.abs() > cutoff { zero } else { one }))
        }
        OpticalElement::SlitMask { .. } | OpticalElement::SingleAperture { .. } => {
            let t = element.transmission(state.grid()).expect("aperture element");
            let mut field = state.clone();
            for (v, t) in field.values_mut().iter_mut().zip(&t) {
                *v *= *t;
            }
            renormalize(field)
        }
    };
    Ok(out)
}
