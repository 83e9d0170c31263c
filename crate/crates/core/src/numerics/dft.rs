use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::ComplexField1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Centred FFT in place: sample `n/2` is the origin on both sides.
fn centered_fft(values: &mut [Complex64], direction: Direction) {
    let n = values.len();
    values.rotate_left(n / 2);
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match direction {
            Direction::Forward => p.plan_fft_forward(n),
            Direction::Inverse => p.plan_fft_inverse(n),
        }
    });
    fft.process(values);
    values.rotate_left(n / 2);
}

/// Position ↔ wavenumber change of representation with continuum scaling.
///
/// Forward: `F(k_j) = Δ/√(2π) · Σ_m f(y_m) e^{-i k_j y_m}` on the conjugate
/// grid. Inverse uses `e^{+i k y}` and `Δk/√(2π)`. Both preserve
/// `Σ|·|²·spacing` exactly up to rounding.
pub fn dft_unitary(field: &ComplexField1D, direction: Direction) -> ComplexField1D {
    let grid = field.grid();
    let mut values = field.values().to_vec();
    centered_fft(&mut values, direction);
    let scale = grid.spacing() / (2.0 * PI).sqrt();
    values.iter_mut().for_each(|v| *v *= scale);
    ComplexField1D::new(grid.conjugate(), values).expect("length preserved")
}

/// Multiply the wavenumber spectrum by `filter(k)` and return to the original
/// grid without re-deriving it from the conjugate.
pub fn spectral_multiply(
    field: &ComplexField1D,
    filter: impl Fn(f64) -> Complex64,
) -> ComplexField1D {
    let grid = *field.grid();
    let conj = grid.conjugate();
    let n = grid.n();
    let mut values = field.values().to_vec();
    centered_fft(&mut values, Direction::Forward);
    for (j, v) in values.iter_mut().enumerate() {
        *v *= filter(conj.position(j));
    }
    centered_fft(&mut values, Direction::Inverse);
    let s = 1.0 / n as f64;
    values.iter_mut().for_each(|v| *v *= s);
    ComplexField1D::new(grid, values).expect("length preserved")
}
