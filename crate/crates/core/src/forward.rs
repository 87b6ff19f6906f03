//! Forward response of a layered half-space to a loop-loop EMI device, and
//! its analytic Jacobian with respect to the layer conductivities.
//!
//! The response of one configuration (orientation nu, height h, spacing rho,
//! angular frequency omega) is
//!
//! ```text
//! M_nu = -rho^(3-nu) int_0^inf lambda^(2-nu) e^(-2 h lambda)
//!                    R(lambda) J_nu(rho lambda) d lambda
//! ```
//!
//! where the reflection factor `R = (N_0 - Y_1)/(N_0 + Y_1)` is built from
//! the surface admittance `Y_1` of the layer stack, obtained by a backward
//! recursion through the characteristic admittances `N_k = u_k/(i mu omega)`
//! with propagation constants `u_k = sqrt(lambda^2 + i sigma_k mu omega)`.
//!
//! The Jacobian propagates the derivative of the recursion forward through
//! the layer chain, so one pass per quadrature node yields the sensitivity
//! to every layer.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::hankel::{hankel_integrate_multi, QuadError};
use crate::model::{DataVector, DeviceConfig, LayeredEarthModel};
use crate::MU_0;

/// Real part of `d_k u_k` beyond which `tanh` is treated as exactly 1 and
/// the layer decouples from everything below it.
const TANH_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ForwardError {
    Quad(QuadError),
}

impl fmt::Display for ForwardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForwardError::Quad(e) => write!(f, "response integral failed: {e}"),
        }
    }
}

impl core::error::Error for ForwardError {}

impl From<QuadError> for ForwardError {
    fn from(e: QuadError) -> Self {
        ForwardError::Quad(e)
    }
}

/// Propagation constant `u = sqrt(lambda^2 + i sigma mu_0 omega)` of a layer.
pub fn propagation_constant(lambda: f64, sigma: f64, omega: f64) -> Complex64 {
    Complex64::new(lambda * lambda, sigma * MU_0 * omega).sqrt()
}

/// Per-lambda state of one layer in the admittance recursion.
struct LayerTerms {
    u: Complex64,
    /// characteristic admittance N = u/(i mu omega)
    n: Complex64,
    /// tanh(d u), clamped to 1 for large real argument; 1 for the bottom layer
    t: Complex64,
    clamped: bool,
}

fn layer_terms(model: &LayeredEarthModel, lambda: f64, omega: f64) -> Vec<LayerTerms> {
    let i_mu_om = Complex64::new(0.0, MU_0 * omega);
    model
        .sigma()
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let u = propagation_constant(lambda, s, omega);
            let n = u / i_mu_om;
            let (t, clamped) = match model.thickness(k) {
                Some(d) => {
                    let arg = u * d;
                    if arg.re > TANH_CLAMP {
                        (Complex64::new(1.0, 0.0), true)
                    } else {
                        (arg.tanh(), false)
                    }
                }
                None => (Complex64::new(1.0, 0.0), true),
            };
            LayerTerms { u, n, t, clamped }
        })
        .collect()
}

/// Admittance of the stack seen from each layer top; `y[0]` is the surface
/// admittance `Y_1`.
fn admittance_profile(terms: &[LayerTerms]) -> Vec<Complex64> {
    let n = terms.len();
    let mut y = alloc::vec![Complex64::new(0.0, 0.0); n];
    y[n - 1] = terms[n - 1].n;
    for k in (0..n - 1).rev() {
        let lt = &terms[k];
        let below = y[k + 1];
        y[k] = lt.n * (below + lt.n * lt.t) / (lt.n + below * lt.t);
    }
    y
}

/// Surface admittance `Y_1(lambda)` of the model.
pub fn surface_admittance(model: &LayeredEarthModel, lambda: f64, omega: f64) -> Complex64 {
    admittance_profile(&layer_terms(model, lambda, omega))[0]
}

/// Reflection factor `R(lambda) = (N_0 - Y_1)/(N_0 + Y_1)` with the free-space
/// admittance `N_0 = lambda/(i mu_0 omega)`.
pub fn reflection_factor(model: &LayeredEarthModel, lambda: f64, omega: f64) -> Complex64 {
    let n0 = Complex64::new(lambda, 0.0) / Complex64::new(0.0, MU_0 * omega);
    let y1 = surface_admittance(model, lambda, omega);
    (n0 - y1) / (n0 + y1)
}

/// Reflection factor and, when `sens` is given, its derivative with respect
/// to each layer conductivity.
fn reflection_with_sens(
    model: &LayeredEarthModel,
    lambda: f64,
    omega: f64,
    sens: Option<&mut [Complex64]>,
) -> Complex64 {
    let terms = layer_terms(model, lambda, omega);
    let y = admittance_profile(&terms);
    let i_mu_om = Complex64::new(0.0, MU_0 * omega);
    let n0 = Complex64::new(lambda, 0.0) / i_mu_om;
    let y1 = y[0];
    let denom0 = n0 + y1;
    let r = (n0 - y1) / denom0;

    if let Some(out) = sens {
        let nl = terms.len();
        // dR/dY_1, shared by every layer
        let dr_dy1 = -2.0 * n0 / (denom0 * denom0);
        // chain = prod of dY_k/dY_{k+1} over layers above j
        let mut chain = Complex64::new(1.0, 0.0);
        for j in 0..nl {
            let lt = &terms[j];
            let du_ds = i_mu_om / (2.0 * lt.u);
            let dy_dsigma = if j + 1 == nl {
                // bottom layer: Y = N, dN/dsigma = 1/(2u)
                Complex64::new(1.0, 0.0) / (2.0 * lt.u)
            } else {
                let below = y[j + 1];
                let num = below + lt.n * lt.t;
                let den = lt.n + below * lt.t;
                let den2 = den * den;
                let dy_dn = num / den + lt.n * (lt.t * den - num) / den2;
                let dy_dt = lt.n * (lt.n * den - below * num) / den2;
                let dn_ds = Complex64::new(1.0, 0.0) / (2.0 * lt.u);
                let dt_ds = if lt.clamped {
                    Complex64::new(0.0, 0.0)
                } else {
                    let d = model.thickness(j).unwrap();
                    (1.0 - lt.t * lt.t) * d * du_ds
                };
                dy_dn * dn_ds + dy_dt * dt_ds
            };
            out[j] = dr_dy1 * chain * dy_dsigma;
            if j + 1 < nl {
                let lt = &terms[j];
                let below = y[j + 1];
                let num = below + lt.n * lt.t;
                let den = lt.n + below * lt.t;
                // dY_j/dY_{j+1}
                chain *= lt.n * (den - lt.t * num) / (den * den);
            }
        }
    }
    r
}

fn reading_scale(nu: u8, rho: f64) -> f64 {
    // -rho^(3-nu)
    match nu {
        0 => -rho * rho * rho,
        _ => -rho * rho,
    }
}

fn lambda_power(nu: u8, lam: f64) -> f64 {
    match nu {
        0 => lam * lam,
        _ => lam,
    }
}

/// Complex readings of the device over the model, in layout order.
pub fn forward_response(
    model: &LayeredEarthModel,
    config: &DeviceConfig,
) -> Result<DataVector, ForwardError> {
    let mut out = Vec::with_capacity(config.reading_count());
    for (orient, h, rho, f) in config.layout() {
        let omega = 2.0 * core::f64::consts::PI * f;
        let nu = orient.bessel_order();
        let vals = hankel_integrate_multi(
            |lam, buf| {
                let r = reflection_with_sens(model, lam, omega, None);
                buf[0] = r * lambda_power(nu, lam) * (-2.0 * h * lam).exp();
            },
            1,
            nu,
            rho,
            2.0 * h,
        )?;
        out.push(vals[0] * reading_scale(nu, rho));
    }
    Ok(out)
}

/// Readings together with the complex Jacobian `dM/dsigma` (readings by
/// layers). Each reading costs one quadrature pass regardless of the number
/// of layers.
pub fn forward_with_jacobian(
    model: &LayeredEarthModel,
    config: &DeviceConfig,
) -> Result<(DataVector, DMatrix<Complex64>), ForwardError> {
    let n = model.layer_count();
    let m = config.reading_count();
    let mut readings = Vec::with_capacity(m);
    let mut jac = DMatrix::from_element(m, n, Complex64::new(0.0, 0.0));
    for (row, (orient, h, rho, f)) in config.layout().into_iter().enumerate() {
        let omega = 2.0 * core::f64::consts::PI * f;
        let nu = orient.bessel_order();
        let vals = hankel_integrate_multi(
            |lam, buf| {
                let (head, sens) = buf.split_at_mut(1);
                let r = reflection_with_sens(model, lam, omega, Some(sens));
                let w = lambda_power(nu, lam) * (-2.0 * h * lam).exp();
                head[0] = r * w;
                for s in sens.iter_mut() {
                    *s *= w;
                }
            },
            n + 1,
            nu,
            rho,
            2.0 * h,
        )?;
        let scale = reading_scale(nu, rho);
        readings.push(vals[0] * scale);
        for j in 0..n {
            jac[(row, j)] = vals[j + 1] * scale;
        }
    }
    Ok((readings, jac))
}

/// Apparent conductivity under the low-induction-number approximation,
/// `sigma_a = 4 Im(M) / (mu_0 omega rho^2)`.
pub fn apparent_conductivity(reading: Complex64, rho: f64, freq: f64) -> f64 {
    let omega = 2.0 * core::f64::consts::PI * freq;
    4.0 * reading.im / (MU_0 * omega * rho * rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Orientation;
    use approx::assert_relative_eq;

    fn three_layer() -> LayeredEarthModel {
        LayeredEarthModel::new(
            alloc::vec![0.0, 0.7, 1.8],
            alloc::vec![0.5, 1.5, 0.3],
        )
        .unwrap()
    }

    fn explorer() -> DeviceConfig {
        DeviceConfig::cmd_explorer(
            alloc::vec![0.9, 1.8],
            alloc::vec![Orientation::Vertical, Orientation::Horizontal],
        )
        .unwrap()
    }

    const OMEGA_10K: f64 = 2.0 * core::f64::consts::PI * 1.0e4;

    #[test]
    fn propagation_constant_reference_value() {
        // high-precision evaluation of sqrt(1 + i mu_0 * 2 pi 1e4)
        let u = propagation_constant(1.0, 1.0, OMEGA_10K);
        assert_relative_eq!(u.re, 1.0007777595124920872, max_relative = 1e-14);
        assert_relative_eq!(u.im, 0.039447736751852397563, max_relative = 1e-14);
    }

    #[test]
    fn surface_admittance_reference_value() {
        let y1 = surface_admittance(&three_layer(), 0.7, OMEGA_10K);
        assert_relative_eq!(y1.re, 0.5546383999649403113, max_relative = 1e-13);
        assert_relative_eq!(y1.im, -8.8906524204137290643, max_relative = 1e-13);
    }

    #[test]
    fn reflection_factor_reference_value() {
        let m = LayeredEarthModel::half_space(0.5).unwrap();
        let r = reflection_factor(&m, 0.3, OMEGA_10K);
        assert_relative_eq!(r.re, -0.022230286719802749297, max_relative = 1e-13);
        assert_relative_eq!(r.im, -0.10366239817566034819, max_relative = 1e-13);
    }

    #[test]
    fn reflection_factor_is_bounded() {
        for &sigma in &[0.0, 1e-3, 0.1, 1.0, 10.0] {
            let m = LayeredEarthModel::half_space(sigma).unwrap();
            for &lam in &[1e-6, 1e-3, 0.1, 1.0, 10.0, 100.0] {
                let r = reflection_factor(&m, lam, OMEGA_10K);
                assert!(r.norm() <= 1.0 + 1e-14, "|R| = {} at lambda {lam}", r.norm());
            }
        }
    }

    // Reference readings for the three-layer model, computed with adaptive
    // quadrature on the same admittance recursion to ~1e-13.
    const REF: [(f64, f64); 12] = [
        (4.038978763470034e-03, 1.422943119849574e-02),
        (2.380344844328537e-02, 5.646900870332380e-02),
        (7.360313839958710e-02, 1.042083007289447e-01),
        (2.632118446892232e-03, 6.800229502525595e-03),
        (1.646435200208366e-02, 3.493054370220527e-02),
        (5.506953355961750e-02, 8.438610626269143e-02),
        (2.092483854298545e-03, 8.297214568295078e-03),
        (1.331386314090430e-02, 4.262312975878504e-02),
        (4.658429265723249e-02, 1.145770817209490e-01),
        (1.343268040516089e-03, 3.627179964715257e-03),
        (8.829701669284776e-03, 2.158652484227580e-02),
        (3.235822220471051e-02, 6.744166438031919e-02),
    ];

    #[test]
    fn forward_matches_reference_readings() {
        let data = forward_response(&three_layer(), &explorer()).unwrap();
        assert_eq!(data.len(), 12);
        for (k, (d, &(re, im))) in data.iter().zip(REF.iter()).enumerate() {
            let r = Complex64::new(re, im);
            assert!(
                (d - r).norm() <= 1e-10 * r.norm(),
                "reading {k}: {d} vs {r}"
            );
        }
    }

    #[test]
    fn insulating_ground_gives_zero_response() {
        let m = LayeredEarthModel::new(alloc::vec![0.0, 1.0], alloc::vec![0.0, 0.0]).unwrap();
        let data = forward_response(&m, &explorer()).unwrap();
        for d in data {
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn refining_the_grid_keeps_the_response() {
        // split every finite layer in half, keeping conductivities
        let coarse = three_layer();
        let fine = LayeredEarthModel::new(
            alloc::vec![0.0, 0.35, 0.7, 1.25, 1.8],
            alloc::vec![0.5, 0.5, 1.5, 1.5, 0.3],
        )
        .unwrap();
        let a = forward_response(&coarse, &explorer()).unwrap();
        let b = forward_response(&fine, &explorer()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() <= 1e-12 * y.norm().max(1e-3));
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let model = three_layer();
        let config = explorer();
        let (base, jac) = forward_with_jacobian(&model, &config).unwrap();
        let data0 = forward_response(&model, &config).unwrap();
        for (a, b) in base.iter().zip(&data0) {
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-6));
        }
        for j in 0..model.layer_count() {
            let s = model.sigma()[j];
            let step = 1e-6 * s.max(0.1);
            let mut hi = model.sigma().to_vec();
            let mut lo = hi.clone();
            hi[j] += step;
            lo[j] -= step;
            let fh = forward_response(&model.with_sigma(hi).unwrap(), &config).unwrap();
            let fl = forward_response(&model.with_sigma(lo).unwrap(), &config).unwrap();
            for row in 0..config.reading_count() {
                let fd = (fh[row] - fl[row]) / (2.0 * step);
                let an = jac[(row, j)];
                let scale = an.norm().max(1e-8);
                assert!(
                    (fd - an).norm() <= 2e-5 * scale,
                    "row {row} layer {j}: fd {fd} vs analytic {an}"
                );
            }
        }
    }

    #[test]
    fn low_induction_reading_recovers_conductivity() {
        // near the ground, at a low induction number, the LIN apparent
        // conductivity of a half-space approaches its true conductivity
        let sigma = 0.01;
        let m = LayeredEarthModel::half_space(sigma).unwrap();
        let c = DeviceConfig::new(
            alloc::vec![1.48],
            alloc::vec![1e-3],
            alloc::vec![1e4],
            alloc::vec![Orientation::Vertical],
        )
        .unwrap();
        let data = forward_response(&m, &c).unwrap();
        let sa = apparent_conductivity(data[0], 1.48, 1e4);
        assert_relative_eq!(sa, sigma, max_relative = 0.05);
    }

    #[test]
    fn height_attenuates_vertical_lin_reading() {
        // for a half-space at low induction number the vertical LIN reading
        // at height h is reduced by rho/sqrt(4 h^2 + rho^2)
        let sigma = 0.01;
        let (rho, h) = (1.48, 0.9);
        let m = LayeredEarthModel::half_space(sigma).unwrap();
        let c = DeviceConfig::new(
            alloc::vec![rho],
            alloc::vec![h],
            alloc::vec![1e4],
            alloc::vec![Orientation::Vertical],
        )
        .unwrap();
        let data = forward_response(&m, &c).unwrap();
        let sa = apparent_conductivity(data[0], rho, 1e4);
        let factor = rho / (4.0 * h * h + rho * rho).sqrt();
        assert_relative_eq!(sa, sigma * factor, max_relative = 0.05);
    }
}
