//! Closed-form far-field patterns. Intensities are normalized to 1 at `y = 0`.

use std::f64::consts::PI;

/// `sin(x)/x`, with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Two slits of width `a`, centre spacing `d`, screen at distance `big_d`:
/// `sinc²(π a y / λD) · cos²(π d y / λD)`.
pub fn analytic_double_slit(y: f64, a: f64, d: f64, big_d: f64, lambda: f64) -> f64 {
    let u = PI * y / (lambda * big_d);
    sinc(a * u).powi(2) * (d * u).cos().powi(2)
}

/// One slit of width `a`: `sinc²(π a y / λD)`.
pub fn analytic_single_slit(y: f64, a: f64, big_d: f64, lambda: f64) -> f64 {
    sinc(PI * a * y / (lambda * big_d)).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: f64 = 702e-9;
    const A: f64 = 30e-6;
    const D: f64 = 150e-6;

    #[test]
    fn central_maximum() {
        assert_eq!(analytic_double_slit(0.0, A, D, 1.0, L), 1.0);
        assert_eq!(analytic_single_slit(0.0, A, 1.0, L), 1.0);
    }

    #[test]
    fn first_nulls() {
        assert!(analytic_double_slit(L * 1.0 / (2.0 * D), A, D, 1.0, L) < 1e-12);
        assert!(analytic_single_slit(L * 1.0 / A, A, 1.0, L) < 1e-12);
    }

    #[test]
    fn double_slit_sits_under_single_slit_envelope() {
        for i in 0..500 {
            let y = -0.05 + 1e-4 * i as f64;
            assert!(analytic_double_slit(y, A, D, 1.0, L) <= analytic_single_slit(y, A, 1.0, L) + 1e-15);
        }
    }

    #[test]
    fn sinc_is_smooth_at_zero() {
        assert!((sinc(1e-9) - 1.0).abs() < 1e-15);
        assert!((sinc(2e-8) - (2e-8f64).sin() / 2e-8).abs() < 1e-15);
    }
}
