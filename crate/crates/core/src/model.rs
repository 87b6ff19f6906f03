//! Domain types shared by all modules: layered earth model, device
//! configuration, data vectors, and the real/imaginary stacking convention.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::MU_0;

/// Coil orientation of the device. `Vertical` maps to Bessel order 0,
/// `Horizontal` to order 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

impl Orientation {
    /// Bessel-function order of the response integral for this orientation.
    pub fn bessel_order(self) -> u8 {
        match self {
            Orientation::Vertical => 0,
            Orientation::Horizontal => 1,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Vertical => write!(f, "vertical"),
            Orientation::Horizontal => write!(f, "horizontal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    Empty,
    FirstDepthNotZero,
    DepthsNotIncreasing { layer: usize },
    NegativeConductivity { layer: usize },
    LengthMismatch { depths: usize, sigma: usize },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Empty => write!(f, "model must have at least one layer"),
            ModelError::FirstDepthNotZero => write!(f, "first interface depth must be 0"),
            ModelError::DepthsNotIncreasing { layer } => {
                write!(f, "interface depths must be strictly increasing (layer {layer})")
            }
            ModelError::NegativeConductivity { layer } => {
                write!(f, "conductivity must be non-negative (layer {layer})")
            }
            ModelError::LengthMismatch { depths, sigma } => {
                write!(f, "{depths} depths vs {sigma} conductivities")
            }
        }
    }
}

impl core::error::Error for ModelError {}

/// A horizontally layered conductive half-space.
///
/// Layer `k` extends from `depths[k]` to `depths[k + 1]`; the bottom layer is
/// semi-infinite. Magnetic permeability is fixed to that of free space in
/// every layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredEarthModel {
    depths: Vec<f64>,
    sigma: Vec<f64>,
}

impl LayeredEarthModel {
    /// Builds a model from interface depths (top of each layer, starting at 0)
    /// and per-layer conductivities in S/m.
    pub fn new(depths: Vec<f64>, sigma: Vec<f64>) -> Result<Self, ModelError> {
        if depths.is_empty() || sigma.is_empty() {
            return Err(ModelError::Empty);
        }
        if depths.len() != sigma.len() {
            return Err(ModelError::LengthMismatch {
                depths: depths.len(),
                sigma: sigma.len(),
            });
        }
        if depths[0] != 0.0 {
            return Err(ModelError::FirstDepthNotZero);
        }
        for k in 1..depths.len() {
            if !(depths[k] > depths[k - 1]) {
                return Err(ModelError::DepthsNotIncreasing { layer: k });
            }
        }
        for (k, &s) in sigma.iter().enumerate() {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(ModelError::NegativeConductivity { layer: k });
            }
        }
        Ok(Self { depths, sigma })
    }

    /// Homogeneous half-space of a single conductivity.
    pub fn half_space(sigma: f64) -> Result<Self, ModelError> {
        Self::new(alloc::vec![0.0], alloc::vec![sigma])
    }

    /// Number of layers.
    pub fn layer_count(&self) -> usize {
        self.sigma.len()
    }

    /// Interface depths, meters; `depths()[0] == 0`.
    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    /// Per-layer conductivities, S/m.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// Magnetic permeability of layer `_k` (free space for every layer).
    pub fn mu(&self, _k: usize) -> f64 {
        MU_0
    }

    /// Thickness of layer `k`, or `None` for the semi-infinite bottom layer.
    pub fn thickness(&self, k: usize) -> Option<f64> {
        if k + 1 < self.depths.len() {
            Some(self.depths[k + 1] - self.depths[k])
        } else {
            None
        }
    }

    /// Midpoint depth of layer `k`; the bottom layer reports its top depth.
    pub fn midpoint(&self, k: usize) -> f64 {
        match self.thickness(k) {
            Some(d) => self.depths[k] + 0.5 * d,
            None => self.depths[k],
        }
    }

    /// Same grid with new conductivities.
    pub fn with_sigma(&self, sigma: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(self.depths.clone(), sigma)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    EmptyField(&'static str),
    NonPositive(&'static str),
    IndexOutOfRange,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::EmptyField(name) => write!(f, "device config field {name} is empty"),
            ConfigError::NonPositive(name) => {
                write!(f, "device config field {name} must be positive")
            }
            ConfigError::IndexOutOfRange => write!(f, "data layout index out of range"),
        }
    }
}

impl core::error::Error for ConfigError {}

/// Measurement geometry of a multiconfiguration device: intercoil spacings,
/// heights above ground, operating frequencies, and coil orientations.
///
/// The flattened data layout is orientation-major (vertical block first),
/// then height, then spacing, then frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceConfig {
    rho: Vec<f64>,
    heights: Vec<f64>,
    freqs: Vec<f64>,
    orientations: Vec<Orientation>,
}

impl DeviceConfig {
    pub fn new(
        rho: Vec<f64>,
        heights: Vec<f64>,
        freqs: Vec<f64>,
        mut orientations: Vec<Orientation>,
    ) -> Result<Self, ConfigError> {
        if rho.is_empty() {
            return Err(ConfigError::EmptyField("rho"));
        }
        if heights.is_empty() {
            return Err(ConfigError::EmptyField("heights"));
        }
        if freqs.is_empty() {
            return Err(ConfigError::EmptyField("frequencies"));
        }
        if orientations.is_empty() {
            return Err(ConfigError::EmptyField("orientations"));
        }
        if rho.iter().any(|&v| !(v > 0.0)) {
            return Err(ConfigError::NonPositive("rho"));
        }
        if heights.iter().any(|&v| !(v > 0.0)) {
            return Err(ConfigError::NonPositive("heights"));
        }
        if freqs.iter().any(|&v| !(v > 0.0)) {
            return Err(ConfigError::NonPositive("frequencies"));
        }
        orientations.sort();
        orientations.dedup();
        Ok(Self {
            rho,
            heights,
            freqs,
            orientations,
        })
    }

    /// The CMD Explorer geometry: spacings 1.48, 2.82, 4.49 m at 10 kHz.
    pub fn cmd_explorer(heights: Vec<f64>, orientations: Vec<Orientation>) -> Result<Self, ConfigError> {
        Self::new(
            alloc::vec![1.48, 2.82, 4.49],
            heights,
            alloc::vec![10_000.0],
            orientations,
        )
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    /// Orientations in layout order (vertical first).
    pub fn orientations(&self) -> &[Orientation] {
        &self.orientations
    }

    /// Total number of complex readings per sounding.
    pub fn reading_count(&self) -> usize {
        self.orientations.len() * self.heights.len() * self.rho.len() * self.freqs.len()
    }

    /// Flat position of reading (orientation block, height, spacing, frequency).
    pub fn layout_index(
        &self,
        orientation_pos: usize,
        height: usize,
        spacing: usize,
        freq: usize,
    ) -> Result<usize, ConfigError> {
        if orientation_pos >= self.orientations.len()
            || height >= self.heights.len()
            || spacing >= self.rho.len()
            || freq >= self.freqs.len()
        {
            return Err(ConfigError::IndexOutOfRange);
        }
        Ok(((orientation_pos * self.heights.len() + height) * self.rho.len() + spacing)
            * self.freqs.len()
            + freq)
    }

    /// All readings in layout order as `(orientation, height, rho, frequency)`.
    pub fn layout(&self) -> Vec<(Orientation, f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.reading_count());
        for &orient in &self.orientations {
            for &h in &self.heights {
                for &rho in &self.rho {
                    for &f in &self.freqs {
                        out.push((orient, h, rho, f));
                    }
                }
            }
        }
        out
    }
}

/// Complex device readings of one sounding, in layout order.
pub type DataVector = Vec<Complex64>;

/// Real vector holding the real parts of a complex vector followed by its
/// imaginary parts.
pub type StackedVector = DVector<f64>;

/// Stacks a complex vector into `[Re; Im]` form.
pub fn stack(values: &[Complex64]) -> StackedVector {
    let m = values.len();
    DVector::from_fn(2 * m, |i, _| {
        if i < m {
            values[i].re
        } else {
            values[i - m].im
        }
    })
}

/// Inverse of [`stack`]. Panics if the length is odd.
pub fn unstack(stacked: &StackedVector) -> DataVector {
    assert!(stacked.len() % 2 == 0, "stacked vector must have even length");
    let m = stacked.len() / 2;
    (0..m)
        .map(|i| Complex64::new(stacked[i], stacked[m + i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn config(m_h: usize, m_rho: usize, m_om: usize) -> DeviceConfig {
        DeviceConfig::new(
            (1..=m_rho).map(|i| i as f64).collect(),
            (1..=m_h).map(|i| i as f64).collect(),
            (1..=m_om).map(|i| 1e4 * i as f64).collect(),
            alloc::vec![Orientation::Vertical, Orientation::Horizontal],
        )
        .unwrap()
    }

    #[test]
    fn layout_first_element_is_zero() {
        let c = config(2, 3, 1);
        assert_eq!(c.layout_index(0, 0, 0, 0).unwrap(), 0);
    }

    #[test]
    fn layout_orientation_block_offset() {
        // m_h = 2, m_rho = 3, m_omega = 1: second orientation starts at 6.
        let c = config(2, 3, 1);
        assert_eq!(c.layout_index(1, 0, 0, 0).unwrap(), 6);
    }

    #[test]
    fn layout_is_bijective() {
        let c = config(2, 3, 1);
        let m = c.reading_count();
        assert_eq!(m, 12);
        let mut seen = alloc::vec![false; m];
        for o in 0..2 {
            for i in 0..2 {
                for t in 0..3 {
                    let idx = c.layout_index(o, i, t, 0).unwrap();
                    assert!(!seen[idx]);
                    seen[idx] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn layout_out_of_range() {
        let c = config(2, 3, 1);
        assert_eq!(c.layout_index(2, 0, 0, 0), Err(ConfigError::IndexOutOfRange));
        assert_eq!(c.layout_index(0, 0, 3, 0), Err(ConfigError::IndexOutOfRange));
    }

    #[test]
    fn layout_matches_index_order() {
        let c = config(2, 3, 2);
        let layout = c.layout();
        assert_eq!(layout.len(), c.reading_count());
        let idx = c.layout_index(1, 1, 2, 1).unwrap();
        assert_eq!(layout[idx], (Orientation::Horizontal, 2.0, 3.0, 2e4));
    }

    #[test]
    fn stack_definition() {
        let s = stack(&[Complex64::new(1.0, 2.0)]);
        assert_eq!(s.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn stack_real_input_has_zero_tail() {
        let s = stack(&[Complex64::new(3.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert_eq!(s.as_slice(), &[3.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn model_rejects_bad_input() {
        assert!(LayeredEarthModel::new(alloc::vec![0.1, 1.0], alloc::vec![1.0, 1.0]).is_err());
        assert!(LayeredEarthModel::new(alloc::vec![0.0, 1.0, 0.5], alloc::vec![1.0; 3]).is_err());
        assert!(LayeredEarthModel::new(alloc::vec![0.0, 1.0], alloc::vec![1.0, -0.1]).is_err());
        assert!(LayeredEarthModel::new(alloc::vec![], alloc::vec![]).is_err());
    }

    #[test]
    fn model_thicknesses_derived_from_depths() {
        let m = LayeredEarthModel::new(alloc::vec![0.0, 0.5, 2.0], alloc::vec![1.0; 3]).unwrap();
        assert_relative_eq!(m.thickness(0).unwrap(), 0.5);
        assert_relative_eq!(m.thickness(1).unwrap(), 1.5);
        assert!(m.thickness(2).is_none());
    }

    #[test]
    fn orientations_normalized_vertical_first() {
        let c = DeviceConfig::new(
            alloc::vec![1.0],
            alloc::vec![1.0],
            alloc::vec![1e4],
            alloc::vec![Orientation::Horizontal, Orientation::Vertical],
        )
        .unwrap();
        assert_eq!(
            c.orientations(),
            &[Orientation::Vertical, Orientation::Horizontal]
        );
    }

    proptest! {
        #[test]
        fn stack_preserves_norm(values in proptest::collection::vec(
            (-1e3f64..1e3, -1e3f64..1e3), 1..100)) {
            let v: DataVector = values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            let complex_norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((stack(&v).norm() - complex_norm).abs() <= 1e-12 * (1.0 + complex_norm));
        }

        #[test]
        fn stack_unstack_roundtrip(values in proptest::collection::vec(
            (-1e3f64..1e3, -1e3f64..1e3), 1..50)) {
            let v: DataVector = values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            prop_assert_eq!(unstack(&stack(&v)), v);
        }
    }
}
