//! Regularized momentum-entangled two-photon state and Bob's reduced state.
//!
//! The ideal state has a delta correlation in `y_a - y_b + y0` and an infinite
//! envelope. It is replaced by the double Gaussian
//!
//! ```text
//! ψ(y_a, y_b) ∝ exp(-(y_a - y_b + y0)² / 4σc²) · exp(-(y_a + y_b)² / 4σe²)
//! ```
//!
//! with `σc ≪ σe`, which recovers the ideal correlation as `σc → 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::numerics::{ComplexField1D, ComplexField2D, GridSpec, NORMALIZATION_TOLERANCE};
use crate::{Error, Result};

/// Envelope mass allowed outside either grid window.
pub const MAX_LEAKAGE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceParams {
    /// Wavelength, m.
    pub lambda: f64,
    /// Transverse Alice–Bob offset, m.
    pub y0: f64,
    /// Correlation width, m.
    pub sigma_corr: f64,
    /// Envelope width, m.
    pub sigma_env: f64,
}

impl SourceParams {
    pub fn new(lambda: f64, y0: f64, sigma_corr: f64, sigma_env: f64) -> Result<Self> {
        let p = Self {
            lambda,
            y0,
            sigma_corr,
            sigma_env,
        };
        p.validate()?;
        Ok(p)
    }

    /// `σc = λ/2`, `σe = 200λ`, no offset.
    pub fn with_defaults(lambda: f64) -> Result<Self> {
        Self::new(lambda, 0.0, lambda / 2.0, 200.0 * lambda)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Source("wavelength must be positive".into()));
        }
        if !self.y0.is_finite() {
            return Err(Error::Source("offset must be finite".into()));
        }
        if !(self.sigma_corr > 0.0 && self.sigma_corr < self.sigma_env && self.sigma_env.is_finite()) {
            return Err(Error::Source(
                "widths must satisfy 0 < sigma_corr < sigma_env".into(),
            ));
        }
        Ok(())
    }

    /// Std of either photon's position marginal.
    pub fn marginal_std(&self) -> f64 {
        (self.sigma_corr.powi(2) + self.sigma_env.powi(2)).sqrt() / 2.0
    }

    /// Probability mass of the marginals outside the two windows (union bound).
    pub fn leakage(&self, grid_a: &GridSpec, grid_b: &GridSpec) -> f64 {
        let s = self.marginal_std() * std::f64::consts::SQRT_2;
        let outside = |g: &GridSpec, mean: f64| {
            let (lo, hi) = g.bounds();
            0.5 * erfc((mean - lo) / s) + 0.5 * erfc((hi - mean) / s)
        };
        outside(grid_a, -self.y0 / 2.0) + outside(grid_b, self.y0 / 2.0)
    }

    /// Purity `Tr ρ_B²` of the reduced state in the continuum.
    pub fn continuum_purity(&self) -> f64 {
        let (c, e) = (self.sigma_corr, self.sigma_env);
        2.0 * c * e / (c * c + e * e)
    }
}

/// Sample the normalized double-Gaussian state on `grid_a × grid_b`.
pub fn make_epr_state(params: &SourceParams, grid_a: &GridSpec, grid_b: &GridSpec) -> Result<ComplexField2D> {
    params.validate()?;
    let leakage = params.leakage(grid_a, grid_b);
    if leakage > MAX_LEAKAGE {
        return Err(Error::GridTooNarrow { leakage });
    }
    let cc = 1.0 / (4.0 * params.sigma_corr.powi(2));
    let ce = 1.0 / (4.0 * params.sigma_env.powi(2));
    let y0 = params.y0;
    ComplexField2D::from_fn(*grid_a, *grid_b, |ya, yb| {
        let u = ya - yb + y0;
        let s = ya + yb;
        let x = cc * u * u + ce * s * s;
        // flush tails whose squares would be subnormal
        if x > 340.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((-x).exp(), 0.0)
        }
    })
    .normalized()
}

/// Bob's reduced state as an ensemble of pure conditional states.
#[derive(Debug, Clone)]
pub struct ReducedStateB {
    branches: Vec<(f64, ComplexField1D)>,
}

impl ReducedStateB {
    pub fn from_branches(branches: Vec<(f64, ComplexField1D)>) -> Result<Self> {
        let total: f64 = branches.iter().map(|(w, _)| *w).sum();
        if branches.iter().any(|(w, _)| !(*w >= 0.0)) || (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidWeight);
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[(f64, ComplexField1D)] {
        &self.branches
    }

    pub fn grid(&self) -> &GridSpec {
        self.branches[0].1.grid()
    }

    /// Discrete density matrix `ρ_ij = Σ w φ(y_i) φ*(y_j) Δ`, unit trace.
    ///
    /// Quadratic in the grid size; meant for small grids.
    pub fn density_matrix(&self) -> DMatrix<Complex64> {
        let n = self.grid().n();
        let dy = self.grid().spacing();
        let mut rho = DMatrix::zeros(n, n);
        for (w, phi) in &self.branches {
            let v = phi.values();
            let s = w * dy;
            for j in 0..n {
                let cj = v[j].conj() * s;
                if cj == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i in 0..n {
                    rho[(i, j)] += v[i] * cj;
                }
            }
        }
        rho
    }

    pub fn purity(&self) -> f64 {
        purity(&self.density_matrix())
    }
}

/// Decompose along Alice's position axis: one branch per nonzero row.
pub fn reduced_state_b(psi: &ComplexField2D) -> Result<ReducedStateB> {
    psi.ensure_normalized()?;
    ReducedStateB::from_branches(row_ensemble(psi))
}

/// Weighted normalized rows of `psi`, skipping zero rows.
pub(crate) fn row_ensemble(psi: &ComplexField2D) -> Vec<(f64, ComplexField1D)> {
    let da = psi.grid_a().spacing();
    let gb = *psi.grid_b();
    psi.rows()
        .filter_map(|row| {
            let f = ComplexField1D::new(gb, row.to_vec()).ok()?;
            let (phi, m) = f.normalized().ok()?;
            Some((m * da, phi))
        })
        .collect()
}

/// `Tr_A |ψ⟩⟨ψ|` as the matrix product `Ψᵀ Ψ*`, scaled to unit trace.
pub fn partial_trace_b(psi: &ComplexField2D) -> DMatrix<Complex64> {
    let (na, nb) = (psi.grid_a().n(), psi.grid_b().n());
    let m = DMatrix::from_row_slice(na, nb, psi.values());
    let s = psi.grid_a().spacing() * psi.grid_b().spacing();
    (m.transpose() * m.conjugate()).map(|v| v * s)
}

pub fn purity(rho: &DMatrix<Complex64>) -> f64 {
    (rho * rho).trace().re
}

pub fn max_abs_entry_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
