use num_complex::Complex64;

use super::dft::{dft_unitary, Direction};
use super::GridSpec;
use crate::{Error, Result};

/// Tolerance on `Σ|ψ|²·Δ = 1` for fields that claim to be normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Complex amplitude sampled on a [`GridSpec`]; units of 1/√m.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField1D {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ComplexField1D {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::FieldLength {
                expected: grid.n(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.positions().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `Σ|ψ_i|²·Δ`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORMALIZATION_TOLERANCE
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() < NORMALIZATION_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NotNormalized(n))
        }
    }

    /// Rescale to unit norm, returning the field and its prior `norm_sqr`.
    pub fn normalized(mut self) -> Result<(Self, f64)> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / n.sqrt();
        self.values.iter_mut().for_each(|v| *v *= s);
        Ok((self, n))
    }

    /// Inner product `⟨self|other⟩ = Σ conj(self)·other·Δ`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.spacing()
    }

    /// `|⟨self|other⟩|²` for normalized fields.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Mean of the coordinate weighted by `|ψ|²`.
    pub fn centroid(&self) -> f64 {
        let (mut m0, mut m1) = (0.0, 0.0);
        for (y, v) in self.grid.positions().zip(&self.values) {
            let p = v.norm_sqr();
            m0 += p;
            m1 += p * y;
        }
        m1 / m0
    }

    /// Standard deviation of the coordinate weighted by `|ψ|²`.
    pub fn std_dev(&self) -> f64 {
        let c = self.centroid();
        let (mut m0, mut m2) = (0.0, 0.0);
        for (y, v) in self.grid.positions().zip(&self.values) {
            let p = v.norm_sqr();
            m0 += p;
            m2 += p * (y - c) * (y - c);
        }
        (m2 / m0).sqrt()
    }

    /// Centroid on the periodic grid, from the phase of `Σ|ψ|² e^{2πi y/extent}`.
    ///
    /// Robust for states whose support wraps around the window edge.
    pub fn circular_centroid(&self) -> f64 {
        let w = 2.0 * std::f64::consts::PI / self.grid.extent();
        let z: Complex64 = self
            .grid
            .positions()
            .zip(&self.values)
            .map(|(y, v)| Complex64::from_polar(v.norm_sqr(), w * y))
            .sum();
        z.arg() / w
    }
}

/// Two-photon amplitude ψ(y_a, y_b), stored row-major with Alice's axis
/// outermost: `values[i_a * n_b + i_b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField2D {
    grid_a: GridSpec,
    grid_b: GridSpec,
    values: Vec<Complex64>,
}

impl ComplexField2D {
    pub fn new(grid_a: GridSpec, grid_b: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        let expected = grid_a.n() * grid_b.n();
        if values.len() != expected {
            return Err(Error::FieldLength {
                expected,
                got: values.len(),
            });
        }
        Ok(Self {
            grid_a,
            grid_b,
            values,
        })
    }

    pub fn from_fn(grid_a: GridSpec, grid_b: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid_a.n() * grid_b.n());
        for ya in grid_a.positions() {
            values.extend(grid_b.positions().map(|yb| f(ya, yb)));
        }
        Self {
            grid_a,
            grid_b,
            values,
        }
    }

    /// Outer product `f(y_a)·g(y_b)`.
    pub fn product(f: &ComplexField1D, g: &ComplexField1D) -> Self {
        let mut values = Vec::with_capacity(f.grid.n() * g.grid.n());
        for a in &f.values {
            values.extend(g.values.iter().map(|b| a * b));
        }
        Self {
            grid_a: f.grid,
            grid_b: g.grid,
            values,
        }
    }

    pub fn grid_a(&self) -> &GridSpec {
        &self.grid_a
    }

    pub fn grid_b(&self) -> &GridSpec {
        &self.grid_b
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, ia: usize, ib: usize) -> Complex64 {
        self.values[ia * self.grid_b.n() + ib]
    }

    /// Slice at fixed Alice index.
    pub fn row(&self, ia: usize) -> &[Complex64] {
        let nb = self.grid_b.n();
        &self.values[ia * nb..(ia + 1) * nb]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.values.chunks_exact(self.grid_b.n())
    }

    /// `ΣΣ|ψ|²·Δa·Δb`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
            * self.grid_a.spacing()
            * self.grid_b.spacing()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORMALIZATION_TOLERANCE
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() < NORMALIZATION_TOLERANCE {
            Ok(())
        } else {
            Err(Error::NotNormalized(n))
        }
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / n.sqrt();
        self.values.iter_mut().for_each(|v| *v *= s);
        Ok(self)
    }

    /// Unitary transform along Alice's axis; the result lives on the
    /// conjugate of `grid_a`.
    pub fn dft_axis_a(&self, direction: Direction) -> Self {
        let (na, nb) = (self.grid_a.n(), self.grid_b.n());
        let mut out = vec![Complex64::new(0.0, 0.0); na * nb];
        let mut new_grid = self.grid_a;
        let mut column = Vec::with_capacity(na);
        for ib in 0..nb {
            column.clear();
            column.extend((0..na).map(|ia| self.values[ia * nb + ib]));
            let f = ComplexField1D {
                grid: self.grid_a,
                values: std::mem::take(&mut column),
            };
            let t = dft_unitary(&f, direction);
            new_grid = t.grid;
            for (ia, v) in t.values.iter().enumerate() {
                out[ia * nb + ib] = *v;
            }
            column = f.values;
        }
        Self {
            grid_a: new_grid,
            grid_b: self.grid_b,
            values: out,
        }
    }

    /// Unitary transform along Bob's axis.
    pub fn dft_axis_b(&self, direction: Direction) -> Self {
        let nb = self.grid_b.n();
        let mut values = Vec::with_capacity(self.values.len());
        let mut new_grid = self.grid_b;
        for row in self.rows() {
            let f = ComplexField1D {
                grid: self.grid_b,
                values: row.to_vec(),
            };
            let t = dft_unitary(&f, direction);
            new_grid = t.grid;
            values.extend(t.values);
        }
        debug_assert_eq!(values.len(), self.grid_a.n() * nb);
        Self {
            grid_a: self.grid_a,
            grid_b: new_grid,
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(64, 6.4).unwrap()
    }

    #[test]
    fn length_mismatch_rejected() {
        let e = ComplexField1D::new(grid(), vec![Complex64::new(1.0, 0.0); 3]).unwrap_err();
        assert_eq!(e, Error::FieldLength { expected: 64, got: 3 });
    }

    #[test]
    fn normalization_is_explicit() {
        let f = ComplexField1D::from_fn(grid(), |y| Complex64::new((-y * y).exp(), 0.0));
        assert!(!f.is_normalized());
        assert!(f.ensure_normalized().is_err());
        let (g, before) = f.normalized().unwrap();
        assert!(before > 0.0);
        assert!(g.is_normalized());
        assert!(ComplexField1D::zeros(grid()).normalized().is_err());
    }

    #[test]
    fn moments_of_shifted_gaussian() {
        let g = GridSpec::new(256, 25.6).unwrap();
        let f = ComplexField1D::from_fn(g, |y| Complex64::new((-(y - 1.5).powi(2) / 4.0).exp(), 0.0));
        assert!((f.centroid() - 1.5).abs() < 1e-9);
        assert!((f.circular_centroid() - 1.5).abs() < 1e-9);
        // |ψ|² = exp(-(y-1.5)²/2) has unit std.
        assert!((f.std_dev() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parseval_on_both_axes() {
        let ga = GridSpec::new(32, 3.2).unwrap();
        let gb = GridSpec::new(16, 4.0).unwrap();
        let psi = ComplexField2D::from_fn(ga, gb, |a, b| {
            Complex64::new((-(a * a) - 0.5 * (b - 0.3).powi(2)).exp(), 0.2 * a * b)
        })
        .normalized()
        .unwrap();
        let ta = psi.dft_axis_a(Direction::Forward);
        let tb = psi.dft_axis_b(Direction::Forward);
        assert!((ta.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((tb.norm_sqr() - 1.0).abs() < 1e-12);
        let back = ta.dft_axis_a(Direction::Inverse);
        for (x, y) in back.values().iter().zip(psi.values()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
