//! Two-valued slit model: two transverse momenta `{p_q, p_r}` or two slit
//! positions `{y_1, y_2}` before the slits, four momentum states `p_iq, p_ir`
//! (slit `i`, direction `q|r`) behind them.
//!
//! The slit transforms are given only as images of basis kets. They are kept
//! as lookup tables because no single linear map realizes both, and the audit
//! measures by how much.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

const TOL: f64 = 1e-12;

/// Index order of the four post-slit states.
pub const POST_SLIT_LABELS: [&str; 4] = ["p_1q", "p_1r", "p_2q", "p_2r"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ToyBasis {
    /// Coordinates on `{p_q, p_r}`.
    Momentum,
    /// Coordinates on `{y_1, y_2}`.
    Position,
    /// Coordinates on `{p_1q, p_1r, p_2q, p_2r}`.
    PostSlit,
}

impl ToyBasis {
    fn dim(self) -> usize {
        match self {
            ToyBasis::Momentum | ToyBasis::Position => 2,
            ToyBasis::PostSlit => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyKet {
    basis: ToyBasis,
    amplitudes: DVector<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl ToyKet {
    pub fn new(basis: ToyBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::Toy(format!(
                "{basis:?} kets have {} amplitudes, got {}",
                basis.dim(),
                amplitudes.len()
            )));
        }
        Ok(Self {
            basis,
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    fn real(basis: ToyBasis, amps: &[f64]) -> Self {
        Self::new(basis, amps.iter().map(|&a| c(a)).collect()).expect("fixed dimension")
    }

    pub fn p_q() -> Self {
        Self::real(ToyBasis::Momentum, &[1.0, 0.0])
    }

    pub fn p_r() -> Self {
        Self::real(ToyBasis::Momentum, &[0.0, 1.0])
    }

    pub fn y_1() -> Self {
        Self::real(ToyBasis::Position, &[1.0, 0.0])
    }

    pub fn y_2() -> Self {
        Self::real(ToyBasis::Position, &[0.0, 1.0])
    }

    /// Post-slit basis ket by index into [`POST_SLIT_LABELS`].
    pub fn post_slit(index: usize) -> Self {
        let mut a = [0.0; 4];
        a[index] = 1.0;
        Self::real(ToyBasis::PostSlit, &a)
    }

    pub fn basis(&self) -> ToyBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < TOL
    }

    /// `⟨self|other⟩`; both kets must share a basis.
    pub fn inner(&self, other: &ToyKet) -> Result<Complex64> {
        let o = if self.basis == other.basis || self.dim() != 2 {
            std::borrow::Cow::Borrowed(other)
        } else {
            std::borrow::Cow::Owned(basis_transform(other, self.basis)?)
        };
        if o.basis != self.basis {
            return Err(Error::Toy("kets live in different spaces".into()));
        }
        Ok(self.amplitudes.dotc(&o.amplitudes))
    }
}

/// Re-express a pre-slit ket in `target` coordinates, using
/// `y_1 = (p_q + p_r)/√2`, `y_2 = (p_q - p_r)/√2`.
pub fn basis_transform(ket: &ToyKet, target: ToyBasis) -> Result<ToyKet> {
    if ket.dim() != 2 || target == ToyBasis::PostSlit {
        return Err(Error::Toy("basis transform acts on pre-slit kets only".into()));
    }
    if ket.basis == target {
        return Ok(ket.clone());
    }
    // the change of coordinates is the Hadamard matrix in both directions
    let (x, y) = (ket.amplitudes[0], ket.amplitudes[1]);
    let h = FRAC_1_SQRT_2;
    ToyKet::new(target, vec![(x + y) * h, (x - y) * h])
}

/// Recorded density operator. The trace is reported, not forced to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyDensity {
    basis: ToyBasis,
    matrix: DMatrix<Complex64>,
}

impl ToyDensity {
    /// Equal mixture of the given kets, all in `basis` coordinates.
    fn mixture(basis: ToyBasis, kets: &[DVector<Complex64>]) -> Self {
        let n = basis.dim();
        let mut matrix = DMatrix::zeros(n, n);
        for k in kets {
            matrix += k * k.adjoint() / c(kets.len() as f64);
        }
        Self { basis, matrix }
    }

    pub fn basis(&self) -> ToyBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self) -> bool {
        is_hermitian(&self.matrix)
    }

    /// Ascending eigenvalues; requires a Hermitian matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

pub fn is_hermitian(m: &DMatrix<Complex64>) -> bool {
    (m - m.adjoint()).iter().all(|z| z.norm() < TOL)
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `½‖a - b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b)).iter().map(|e| e.abs()).sum::<f64>()
}

/// Reduced states before the slits after Alice's momentum or position
/// measurement, both in momentum coordinates.
pub fn pre_slit_densities() -> (ToyDensity, ToyDensity) {
    let m = ToyBasis::Momentum;
    let dp = ToyDensity::mixture(m, &[ToyKet::p_q().amplitudes, ToyKet::p_r().amplitudes]);
    let y1 = basis_transform(&ToyKet::y_1(), m).expect("pre-slit");
    let y2 = basis_transform(&ToyKet::y_2(), m).expect("pre-slit");
    let dy = ToyDensity::mixture(m, &[y1.amplitudes, y2.amplitudes]);
    (dp, dy)
}

/// The single amplitude of a ket that is a multiple of basis vector `i`.
fn as_basis_multiple(ket: &ToyKet) -> Result<(usize, Complex64)> {
    let nonzero: Vec<usize> = (0..ket.dim()).filter(|&i| ket.amplitudes[i].norm() > TOL).collect();
    match nonzero[..] {
        [i] => Ok((i, ket.amplitudes[i])),
        _ => Err(Error::Toy("map defined only on basis kets".into())),
    }
}

fn post(amps: [f64; 4]) -> DVector<Complex64> {
    DVector::from_iterator(4, amps.iter().map(|&a| c(a)))
}

/// A momentum state reaching both slits: `p_j ↦ (p_1j + p_2j)/√2`.
pub fn slit_map_momentum(ket: &ToyKet) -> Result<ToyKet> {
    let (j, amp) = as_basis_multiple(&basis_transform(ket, ToyBasis::Momentum)?)?;
    let h = FRAC_1_SQRT_2;
    let image = if j == 0 { post([h, 0.0, h, 0.0]) } else { post([0.0, h, 0.0, h]) };
    Ok(ToyKet {
        basis: ToyBasis::PostSlit,
        amplitudes: image * amp,
    })
}

/// A position state leaving one slit in both directions: `y_i ↦ (p_iq + p_ir)/√2`.
pub fn slit_map_position(ket: &ToyKet) -> Result<ToyKet> {
    let (i, amp) = as_basis_multiple(&basis_transform(ket, ToyBasis::Position)?)?;
    let h = FRAC_1_SQRT_2;
    let image = if i == 0 { post([h, h, 0.0, 0.0]) } else { post([0.0, 0.0, h, h]) };
    Ok(ToyKet {
        basis: ToyBasis::PostSlit,
        amplitudes: image * amp,
    })
}

fn image(map: fn(&ToyKet) -> Result<ToyKet>, ket: ToyKet) -> DVector<Complex64> {
    map(&ket).expect("basis ket").amplitudes
}

/// Post-slit mixtures `(D'_p, D'_y)` built from the two slit maps.
pub fn post_slit_densities() -> (ToyDensity, ToyDensity) {
    let b = ToyBasis::PostSlit;
    let dp = ToyDensity::mixture(
        b,
        &[image(slit_map_momentum, ToyKet::p_q()), image(slit_map_momentum, ToyKet::p_r())],
    );
    let dy = ToyDensity::mixture(
        b,
        &[image(slit_map_position, ToyKet::y_1()), image(slit_map_position, ToyKet::y_2())],
    );
    (dp, dy)
}

/// `D'_p - D'_y` by direct subtraction.
pub fn delta_prime() -> DMatrix<Complex64> {
    let (dp, dy) = post_slit_densities();
    dp.matrix - dy.matrix
}

/// The factorized closed form `(1/2√2)(|p_1q⟩ - |p_2r⟩)(⟨p_2q| - ⟨p_1r|)`
/// offered for [`delta_prime`]. It is not Hermitian, so it cannot equal it.
pub fn printed_delta_prime() -> DMatrix<Complex64> {
    let u = post([1.0, 0.0, 0.0, -1.0]);
    let v = post([0.0, -1.0, 1.0, 0.0]);
    u * v.adjoint() * c(1.0 / (2.0 * std::f64::consts::SQRT_2))
}

/// Image of `y_i` under the linear extension of the momentum slit map,
/// i.e. `(p'_q ± p'_r)/√2`.
fn linear_extension_image(i: usize) -> DVector<Complex64> {
    let q = image(slit_map_momentum, ToyKet::p_q());
    let r = image(slit_map_momentum, ToyKet::p_r());
    let s = if i == 0 { c(1.0) } else { c(-1.0) };
    (q + r * s) * c(FRAC_1_SQRT_2)
}

/// `‖(position map)(y_i) - (linear extension of momentum map)(y_i)‖₂` for
/// `i ∈ {0, 1}`. Nonzero means no linear map reproduces both tables.
pub fn linearity_residual_for(i: usize) -> Result<f64> {
    let ket = match i {
        0 => ToyKet::y_1(),
        1 => ToyKet::y_2(),
        _ => return Err(Error::Toy(format!("no position ket y_{}", i + 1))),
    };
    Ok((image(slit_map_position, ket) - linear_extension_image(i)).norm())
}

/// Residual for `y_1`.
pub fn linearity_residual() -> f64 {
    linearity_residual_for(0).expect("y_1 exists")
}

/// `D'_y` recomputed with the linear extension in place of the position map.
pub fn linear_extension_densities() -> ToyDensity {
    ToyDensity::mixture(ToyBasis::PostSlit, &[linear_extension_image(0), linear_extension_image(1)])
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub basis_order: [&'static str; 4],
    pub pre_slit_frobenius: f64,
    pub post_slit_trace_p: f64,
    pub post_slit_trace_y: f64,
    pub delta_prime: Vec<Vec<[f64; 2]>>,
    pub frobenius_delta_prime: f64,
    pub delta_prime_trace: f64,
    pub delta_prime_hermitian: bool,
    pub trace_distance: f64,
    pub factorized_form_frobenius: f64,
    pub factorized_form_hermitian: bool,
    pub factorized_form_mismatch_frobenius: f64,
    pub linearity_residual: f64,
    pub linearity_residual_y2: f64,
    pub linear_extension_frobenius: f64,
    pub notes: Vec<String>,
}

/// Every audit number in one report.
pub fn audit() -> AuditReport {
    let (dp, dy) = pre_slit_densities();
    let (pp, py) = post_slit_densities();
    let m = delta_prime();
    let printed = printed_delta_prime();
    let lin = linear_extension_densities();
    let r1 = linearity_residual();
    let r2 = linearity_residual_for(1).expect("y_2 exists");
    let notes = vec![
        "pre-slit mixtures are identical, so Bob's state carries no record of Alice's choice".into(),
        "the post-slit mixtures differ only because the two slit maps disagree on overlapping inputs".into(),
        "the factorized closed form is not Hermitian; the direct difference is its Hermitian part times sqrt(2)"
            .into(),
        "replacing the position map by the linear extension of the momentum map makes the mixtures equal".into(),
    ];
    AuditReport {
        basis_order: POST_SLIT_LABELS,
        pre_slit_frobenius: frobenius(&(dp.matrix() - dy.matrix())),
        post_slit_trace_p: pp.trace().re,
        post_slit_trace_y: py.trace().re,
        delta_prime: (0..4).map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect(),
        frobenius_delta_prime: frobenius(&m),
        delta_prime_trace: m.trace().re,
        delta_prime_hermitian: is_hermitian(&m),
        trace_distance: trace_distance(pp.matrix(), py.matrix()),
        factorized_form_frobenius: frobenius(&printed),
        factorized_form_hermitian: is_hermitian(&printed),
        factorized_form_mismatch_frobenius: frobenius(&(&printed - &m)),
        linearity_residual: r1,
        linearity_residual_y2: r2,
        linear_extension_frobenius: frobenius(&(pp.matrix() - lin.matrix())),
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn momentum_ket_in_position_coordinates() {
        let k = basis_transform(&ToyKet::p_q(), ToyBasis::Position).unwrap();
        assert!(close(k.amplitudes[0].re, FRAC_1_SQRT_2) && close(k.amplitudes[1].re, FRAC_1_SQRT_2));
        let back = basis_transform(&k, ToyBasis::Momentum).unwrap();
        assert!((back.amplitudes - ToyKet::p_q().amplitudes).norm() < 1e-12);
    }

    #[test]
    fn transform_rejects_post_slit_kets() {
        assert!(basis_transform(&ToyKet::post_slit(0), ToyBasis::Momentum).is_err());
    }

    proptest! {
        #[test]
        fn transform_is_unitary(a in -1.0f64..1.0, b in -1.0f64..1.0, c_ in -1.0f64..1.0, d in -1.0f64..1.0) {
            prop_assume!(a * a + b * b + c_ * c_ + d * d > 1e-6);
            let k = ToyKet::new(ToyBasis::Momentum, vec![Complex64::new(a, b), Complex64::new(c_, d)]).unwrap();
            let t = basis_transform(&k, ToyBasis::Position).unwrap();
            prop_assert!((t.norm() - k.norm()).abs() < 1e-12);
            // expressing the same ket twice in fresh coordinates is the identity
            let h = ToyKet::new(ToyBasis::Position, k.amplitudes.iter().copied().collect()).unwrap();
            let twice = basis_transform(&basis_transform(&h, ToyBasis::Momentum).unwrap(), ToyBasis::Position).unwrap();
            prop_assert!((twice.amplitudes - h.amplitudes).norm() < 1e-12);
        }
    }

    #[test]
    fn pre_slit_mixtures_are_maximally_mixed() {
        let (dp, dy) = pre_slit_densities();
        let half = DMatrix::<Complex64>::identity(2, 2) * c(0.5);
        assert!(frobenius(&(dp.matrix() - &half)) < 1e-12);
        assert!(frobenius(&(dp.matrix() - dy.matrix())) < 1e-12);
        assert!(close(dp.trace().re, 1.0));
    }

    #[test]
    fn slit_map_images() {
        let h = FRAC_1_SQRT_2;
        let q = slit_map_momentum(&ToyKet::p_q()).unwrap();
        assert_eq!(q.amplitudes, post([h, 0.0, h, 0.0]));
        assert!(q.is_normalized());
        let r = slit_map_momentum(&ToyKet::p_r()).unwrap();
        assert_eq!(r.amplitudes, post([0.0, h, 0.0, h]));
        assert!(close(q.inner(&r).unwrap().norm(), 0.0));
        assert_eq!(slit_map_position(&ToyKet::y_1()).unwrap().amplitudes, post([h, h, 0.0, 0.0]));
        assert_eq!(slit_map_position(&ToyKet::y_2()).unwrap().amplitudes, post([0.0, 0.0, h, h]));
    }

    #[test]
    fn images_are_not_orthogonal() {
        let y = slit_map_position(&ToyKet::y_1()).unwrap();
        let p = slit_map_momentum(&ToyKet::p_q()).unwrap();
        assert!(close(y.inner(&p).unwrap().re, 0.5));
    }

    #[test]
    fn superpositions_are_rejected() {
        let y1 = ToyKet::y_1();
        let e = slit_map_momentum(&y1).unwrap_err();
        assert_eq!(e.to_string(), "toy model: map defined only on basis kets");
        assert!(slit_map_position(&ToyKet::p_q()).is_err());
    }

    #[test]
    fn post_slit_entries() {
        let (dp, dy) = post_slit_densities();
        assert!(close(dp.trace().re, 1.0) && close(dy.trace().re, 1.0));
        let quarter_p = [(0, 0), (0, 2), (2, 0), (2, 2), (1, 1), (1, 3), (3, 1), (3, 3)];
        let quarter_y = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)];
        for i in 0..4 {
            for j in 0..4 {
                let ep = if quarter_p.contains(&(i, j)) { 0.25 } else { 0.0 };
                let ey = if quarter_y.contains(&(i, j)) { 0.25 } else { 0.0 };
                assert!((dp.matrix()[(i, j)] - c(ep)).norm() < 1e-12);
                assert!((dy.matrix()[(i, j)] - c(ey)).norm() < 1e-12);
            }
        }
        for d in [&dp, &dy] {
            assert!(d.is_hermitian());
            let ev = d.eigenvalues();
            assert!(ev.iter().all(|&e| (-1e-12..=1.0 + 1e-12).contains(&e)));
            assert_eq!(ev.iter().filter(|e| e.abs() > 1e-9).count(), 2);
        }
    }

    #[test]
    fn difference_of_mixtures() {
        let m = delta_prime();
        assert!(close(frobenius(&m), FRAC_1_SQRT_2));
        assert!(m.trace().norm() < 1e-12);
        assert!(is_hermitian(&m));
        // ½(uv† + vu†) with u = (p_1q - p_2r)/√2, v = (p_2q - p_1r)/√2
        let u = post([1.0, 0.0, 0.0, -1.0]) * c(FRAC_1_SQRT_2);
        let v = post([0.0, -1.0, 1.0, 0.0]) * c(FRAC_1_SQRT_2);
        let oracle = (&u * v.adjoint() + &v * u.adjoint()) * c(0.5);
        assert!(frobenius(&(&m - oracle)) < 1e-12);
        let ev = hermitian_eigenvalues(&m);
        for (e, x) in ev.iter().zip([-0.5, 0.0, 0.0, 0.5]) {
            assert!(close(*e, x), "{ev:?}");
        }
        let (dp, dy) = post_slit_densities();
        assert!(close(trace_distance(dp.matrix(), dy.matrix()), 0.5));
    }

    #[test]
    fn factorized_form_is_not_the_difference() {
        let p = printed_delta_prime();
        assert!(!is_hermitian(&p));
        // its Hermitian part, scaled by √2, is the direct difference
        let herm = (&p + p.adjoint()) * c(0.5 * std::f64::consts::SQRT_2);
        assert!(frobenius(&(herm - delta_prime())) < 1e-12);
    }

    #[test]
    fn linearity_residuals() {
        let h = FRAC_1_SQRT_2;
        assert!(close(linearity_residual(), (2.0 * (h - 0.5).powi(2) + 0.5).sqrt()));
        assert!(linearity_residual() > 0.76);
        // y_2 = (p_q - p_r)/√2 while its slit image keeps a + sign, so the
        // residual vector is (1/√2 - ½, 1/√2 + ½) on slit 2 and (-½, ½) on slit 1
        let r2 = ((h - 0.5).powi(2) + (h + 0.5).powi(2) + 0.5).sqrt();
        assert!(close(linearity_residual_for(1).unwrap(), r2));
        assert!(close(r2, std::f64::consts::SQRT_2));
        assert!(linearity_residual_for(2).is_err());
    }

    #[test]
    fn linear_extension_removes_the_difference() {
        let (dp, _) = post_slit_densities();
        assert!(frobenius(&(dp.matrix() - linear_extension_densities().matrix())) < 1e-12);
    }

    #[test]
    fn report_collects_the_numbers() {
        let r = audit();
        assert!(r.pre_slit_frobenius < 1e-12);
        assert!(close(r.frobenius_delta_prime, FRAC_1_SQRT_2));
        assert!(close(r.trace_distance, 0.5));
        assert!(!r.factorized_form_hermitian && r.delta_prime_hermitian);
        assert!(r.linear_extension_frobenius < 1e-12);
    }
}
