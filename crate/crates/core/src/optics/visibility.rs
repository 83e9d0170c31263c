use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::numerics::WeightedHistogram;
use crate::{Error, Result};

/// Fringe visibility at a known period.
///
/// Fits `I(y) ≈ c0 + c1 cos(2πy/P) + s1 sin(2πy/P)` by least squares to the
/// bin densities over the central three periods `|y| ≤ 1.5P`, and reports
/// `(I_max - I_min)/(I_max + I_min)` of the fitted fringe, clamped to `[0, 1]`.
/// The fit averages every extremum in the window and tolerates shot noise.
pub fn visibility(hist: &WeightedHistogram, fringe_period: f64) -> Result<f64> {
    if !(fringe_period.is_finite() && fringe_period > 0.0) {
        return Err(Error::InsufficientSpan {
            needed: fringe_period,
            low: 0.0,
            high: 0.0,
        });
    }
    let half = 1.5 * fringe_period;
    let edges = hist.edges();
    let (low, high) = (edges[0], edges[edges.len() - 1]);
    if low > -half || high < half {
        return Err(Error::InsufficientSpan { needed: half, low, high });
    }
    let w = 2.0 * PI / fringe_period;
    let mut normal = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    let mut used = 0;
    let mut mass = 0.0;
    for ((y, width), weight) in hist.centers().zip(hist.widths()).zip(hist.weights()) {
        if y.abs() > half {
            continue;
        }
        let density = weight / width;
        let basis = Vector3::new(1.0, (w * y).cos(), (w * y).sin());
        normal += basis * basis.transpose();
        rhs += basis * density;
        mass += weight;
        used += 1;
    }
    if used < 9 {
        return Err(Error::InsufficientSpan { needed: half, low, high });
    }
    if mass <= 0.0 {
        return Err(Error::EmptyPattern);
    }
    let c = normal.lu().solve(&rhs).ok_or(Error::EmptyPattern)?;
    if c[0] <= 0.0 {
        return Ok(1.0);
    }
    Ok((c[1].hypot(c[2]) / c[0]).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::GridSpec;
    use crate::optics::{analytic_double_slit, analytic_single_slit};

    const L: f64 = 702e-9;
    const A: f64 = 30e-6;
    const D: f64 = 150e-6;

    fn sampled(f: impl Fn(f64) -> f64) -> WeightedHistogram {
        let g = GridSpec::new(2048, 0.04).unwrap();
        let w = g.spacing();
        WeightedHistogram::from_weights(g.edges(), g.positions().map(|y| f(y) * w).collect()).unwrap()
    }

    #[test]
    fn double_slit_curve_is_fully_visible() {
        let v = visibility(&sampled(|y| analytic_double_slit(y, A, D, 1.0, L)), L / D).unwrap();
        assert!(v > 0.99, "{v}");
    }

    #[test]
    fn single_slit_curve_is_flat_at_fringe_period() {
        // envelope-only oracle: over ±1.5P with P = λD/d the cos-projection of
        // sinc²(πay/λD) ≈ 1 - (πay/λD)²/3 is (a/d)²/3
        let oracle = (A / D).powi(2) / 3.0;
        let v = visibility(&sampled(|y| analytic_single_slit(y, A, 1.0, L)), L / D).unwrap();
        assert!(v < 0.02, "{v}");
        assert!((v - oracle).abs() < 0.2 * oracle, "{v} vs {oracle}");
    }

    #[test]
    fn flat_is_zero() {
        let v = visibility(&sampled(|_| 3.0), L / D).unwrap();
        assert!(v < 1e-12);
    }

    #[test]
    fn partial_coherence_is_recovered() {
        let p = L / D;
        let v = visibility(&sampled(|y| 1.0 + 0.37 * (2.0 * PI * y / p + 0.4).cos()), p).unwrap();
        assert!((v - 0.37).abs() < 1e-9);
    }

    #[test]
    fn span_and_empty_errors() {
        let g = GridSpec::new(64, 1e-3).unwrap();
        let h = WeightedHistogram::for_grid(&g);
        assert!(matches!(visibility(&h, L / D), Err(Error::InsufficientSpan { .. })));
        assert!(matches!(visibility(&sampled(|_| 0.0), L / D), Err(Error::EmptyPattern)));
    }
}
