use std::f64::consts::PI;

use serde::Serialize;

use crate::{Error, Result};

/// Uniform sampling of a window centred on zero.
///
/// Sample `i` sits at `(i - n/2) * spacing`, so `y = 0` is always a sample and
/// the window covers `[-extent/2 - spacing/2, extent/2 - spacing/2]` when each
/// sample is read as a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    n: usize,
    extent: f64,
}

impl GridSpec {
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("n = {n} must be a power of two >= 8")));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::Grid(format!("extent = {extent} must be positive")));
        }
        Ok(Self { n, extent })
    }

    /// Grid with the given spacing instead of extent.
    pub fn with_spacing(n: usize, spacing: f64) -> Result<Self> {
        Self::new(n, spacing * n as f64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    pub fn position(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.spacing()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.position(i))
    }

    /// Lower and upper window boundary, reading samples as cells.
    pub fn bounds(&self) -> (f64, f64) {
        let h = self.spacing() / 2.0;
        (self.position(0) - h, self.position(self.n - 1) + h)
    }

    /// Nearest sample index to `y`, clamped to the grid.
    pub fn index_of(&self, y: f64) -> usize {
        let i = (y / self.spacing()).round() + (self.n / 2) as f64;
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Reciprocal grid: spacing `2π/extent`, extent `2π/spacing`.
    pub fn conjugate(&self) -> Self {
        Self {
            n: self.n,
            extent: 2.0 * PI / self.spacing(),
        }
    }

    /// Cell edges, `n + 1` values.
    pub fn edges(&self) -> Vec<f64> {
        let h = self.spacing() / 2.0;
        (0..=self.n)
            .map(|i| (i as f64 - (self.n / 2) as f64) * self.spacing() - h)
            .collect()
    }
}
