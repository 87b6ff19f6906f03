//! Depth of investigation from the integrated sensitivity of the converged
//! model: the cumulative squared sensitivity of each layer,
//! `S_r = || J e_r ||^2` over the stacked Jacobian, compared against the
//! surface layer. The DOI is the top of the shallowest layer whose
//! sensitivity falls strictly below `eta` times the surface value.

use core::fmt;

use nalgebra::DVector;

use crate::forward::{forward_with_jacobian, ForwardError};
use crate::inversion::{stack_jacobian, DataMode};
use crate::model::{DeviceConfig, LayeredEarthModel};

/// Default sensitivity ratio defining the DOI.
pub const DEFAULT_ETA: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub enum DoiError {
    /// The device has no sensitivity to the surface layer at all; the ratio
    /// is undefined.
    NoSurfaceSensitivity,
    Forward(ForwardError),
}

impl fmt::Display for DoiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DoiError::NoSurfaceSensitivity => {
                write!(f, "zero sensitivity to the surface layer")
            }
            DoiError::Forward(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DoiError {}

impl From<ForwardError> for DoiError {
    fn from(e: ForwardError) -> Self {
        DoiError::Forward(e)
    }
}

/// Where the device stops seeing the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DoiDepth {
    /// Depth, in meters, below which the data no longer constrain the model.
    Depth(f64),
    /// Every layer stays above the sensitivity threshold.
    BeyondModel,
}

/// Squared column norms of the stacked Jacobian at `model`: the integrated
/// sensitivity of each layer.
pub fn integrated_sensitivity(
    model: &LayeredEarthModel,
    device: &DeviceConfig,
    mode: DataMode,
) -> Result<DVector<f64>, ForwardError> {
    let (_, jac_c) = forward_with_jacobian(model, device)?;
    let jac = stack_jacobian(&jac_c, mode);
    Ok(DVector::from_fn(jac.ncols(), |c, _| {
        jac.column(c).norm_squared()
    }))
}

/// DOI from a precomputed sensitivity profile and the matching interface
/// depths.
pub fn doi_from_sensitivity(
    sensitivity: &DVector<f64>,
    depths: &[f64],
    eta: f64,
) -> Result<DoiDepth, DoiError> {
    assert_eq!(sensitivity.len(), depths.len());
    let surface = sensitivity[0];
    if !(surface > 0.0) {
        return Err(DoiError::NoSurfaceSensitivity);
    }
    let threshold = eta * surface;
    for (r, &s) in sensitivity.iter().enumerate() {
        if s < threshold {
            return Ok(DoiDepth::Depth(depths[r]));
        }
    }
    Ok(DoiDepth::BeyondModel)
}

/// DOI of the device over `model` at sensitivity ratio `eta`.
pub fn doi_depth(
    model: &LayeredEarthModel,
    device: &DeviceConfig,
    mode: DataMode,
    eta: f64,
) -> Result<DoiDepth, DoiError> {
    let sens = integrated_sensitivity(model, device, mode)?;
    doi_from_sensitivity(&sens, model.depths(), eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Orientation;

    #[test]
    fn threshold_is_strict_and_picks_shallowest() {
        let sens = DVector::from_vec(alloc::vec![4.0, 1.0, 0.04, 0.039]);
        let depths = [0.0, 1.0, 2.0, 3.0];
        // eta * surface = 0.04; the layer sitting exactly at the threshold
        // does not count, the one below it does
        match doi_from_sensitivity(&sens, &depths, 1e-2).unwrap() {
            DoiDepth::Depth(d) => assert_eq!(d, 3.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn all_layers_sensitive_means_beyond_model() {
        let sens = DVector::from_vec(alloc::vec![1.0, 0.9, 0.5]);
        let depths = [0.0, 1.0, 2.0];
        assert_eq!(
            doi_from_sensitivity(&sens, &depths, 1e-2).unwrap(),
            DoiDepth::BeyondModel
        );
    }

    #[test]
    fn dead_surface_is_an_error() {
        let sens = DVector::from_vec(alloc::vec![0.0, 0.0]);
        assert_eq!(
            doi_from_sensitivity(&sens, &[0.0, 1.0], 1e-2).unwrap_err(),
            DoiError::NoSurfaceSensitivity
        );
    }

    #[test]
    fn sensitivity_decays_with_depth_for_uniform_ground() {
        // at 2 S/m and 10 kHz the skin depth is ~3.6 m, so a 12 m grid
        // reaches well past the sensitive zone
        let n = 60;
        let dz = 12.0 / n as f64;
        let depths: alloc::vec::Vec<f64> = (0..n).map(|k| k as f64 * dz).collect();
        let model = LayeredEarthModel::new(depths, alloc::vec![2.0; n]).unwrap();
        let device = DeviceConfig::cmd_explorer(
            alloc::vec![0.9],
            alloc::vec![Orientation::Vertical, Orientation::Horizontal],
        )
        .unwrap();
        let sens = integrated_sensitivity(&model, &device, DataMode::Complex).unwrap();
        assert!(sens[0] > 0.0);
        // deep layers must be orders of magnitude less visible than shallow
        assert!(sens[n - 1] < 1e-2 * sens[0]);
        // and the DOI must be finite and below the surface
        match doi_depth(&model, &device, DataMode::Complex, DEFAULT_ETA).unwrap() {
            DoiDepth::Depth(d) => assert!(d > 0.0 && d < 12.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn larger_eta_gives_shallower_doi() {
        let n = 60;
        let dz = 12.0 / n as f64;
        let depths: alloc::vec::Vec<f64> = (0..n).map(|k| k as f64 * dz).collect();
        let model = LayeredEarthModel::new(depths, alloc::vec![2.0; n]).unwrap();
        let device = DeviceConfig::cmd_explorer(
            alloc::vec![0.9],
            alloc::vec![Orientation::Vertical],
        )
        .unwrap();
        let d_loose = match doi_depth(&model, &device, DataMode::Complex, 0.3).unwrap() {
            DoiDepth::Depth(d) => d,
            other => panic!("unexpected {other:?}"),
        };
        let d_tight = match doi_depth(&model, &device, DataMode::Complex, 1e-2).unwrap() {
            DoiDepth::Depth(d) => d,
            other => panic!("unexpected {other:?}"),
        };
        assert!(d_loose < d_tight);
    }
}
