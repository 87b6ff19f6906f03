//! Synthetic test profiles, their layered discretizations, and the seeded
//! noise model used to contaminate forward data.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::model::{stack, unstack, DataVector, LayeredEarthModel, ModelError};

/// Smooth conductivity bump centered at 1.2 m: `exp(-(z - 1.2)^2)`.
pub fn profile_gaussian(z: f64) -> f64 {
    let d = z - 1.2;
    (-d * d).exp()
}

/// Conductive slab between 1 and 2 m (inclusive) in a resistive background.
pub fn profile_step(z: f64) -> f64 {
    if (1.0..=2.0).contains(&z) {
        1.0
    } else {
        0.2
    }
}

/// Standard discretization grid: `n` equal-thickness layers spanning
/// `[0, depth]`, the last one semi-infinite.
pub fn standard_grid(n: usize, depth: f64) -> Result<LayeredEarthModel, ModelError> {
    let dz = depth / n as f64;
    let depths: Vec<f64> = (0..n).map(|k| k as f64 * dz).collect();
    LayeredEarthModel::new(depths, alloc::vec![1.0; n])
}

/// Samples a conductivity profile at the layer midpoints of the standard
/// grid (`n` layers down to `depth` meters).
pub fn discretize_profile<F>(f: F, n: usize, depth: f64) -> Result<LayeredEarthModel, ModelError>
where
    F: Fn(f64) -> f64,
{
    let grid = standard_grid(n, depth)?;
    let sigma = (0..n).map(|k| f(grid.midpoint(k))).collect();
    grid.with_sigma(sigma)
}

/// A two-layer section whose interface deepens linearly from 0.5 m at the
/// first column to 3.0 m at the last: 0.5 S/m above, 2.0 S/m below, sampled
/// on the standard grid.
pub fn make_pseudo2d_section(
    cols: usize,
    n: usize,
    depth: f64,
) -> Result<Vec<LayeredEarthModel>, ModelError> {
    let grid = standard_grid(n, depth)?;
    (0..cols)
        .map(|c| {
            let t = if cols > 1 {
                c as f64 / (cols - 1) as f64
            } else {
                0.0
            };
            let interface = 0.5 + 2.5 * t;
            let sigma = (0..n)
                .map(|k| if grid.midpoint(k) < interface { 0.5 } else { 2.0 })
                .collect();
            grid.with_sigma(sigma)
        })
        .collect()
}

/// Contaminates readings with seeded Gaussian noise of relative level
/// `delta`: the stacked vector is perturbed by `(delta ||b|| / sqrt(m)) w`
/// with `w` standard normal and `m` the number of complex readings.
pub fn add_noise(data: &DataVector, delta: f64, seed: u64) -> DataVector {
    let m = data.len();
    let b = stack(data);
    let scale = delta * b.norm() / (m as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = b.map(|v| {
        let w: f64 = StandardNormal.sample(&mut rng);
        v + scale * w
    });
    unstack(&noisy)
}

/// Signal-to-noise ratio `10 log10(||b||^2 / ||b - b_noisy||^2)` in dB over
/// the stacked vectors.
pub fn snr_db(clean: &DataVector, noisy: &DataVector) -> f64 {
    let b = stack(clean);
    let d = stack(noisy) - &b;
    10.0 * (b.norm_squared() / d.norm_squared()).log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn gaussian_profile_values() {
        assert_relative_eq!(
            profile_gaussian(0.0),
            0.23692775868212175672, // e^{-1.44}
            max_relative = 1e-15
        );
        assert_relative_eq!(profile_gaussian(1.2), 1.0);
        assert_relative_eq!(profile_gaussian(2.4), profile_gaussian(0.0), max_relative = 1e-15);
    }

    #[test]
    fn step_profile_includes_both_edges() {
        assert_eq!(profile_step(1.0), 1.0);
        assert_eq!(profile_step(2.0), 1.0);
        assert_eq!(profile_step(0.999), 0.2);
        assert_eq!(profile_step(2.001), 0.2);
    }

    #[test]
    fn standard_grid_has_equal_layers() {
        let g = standard_grid(60, 3.5).unwrap();
        assert_eq!(g.layer_count(), 60);
        let dz = 3.5 / 60.0;
        for k in 0..59 {
            assert_relative_eq!(g.thickness(k).unwrap(), dz, max_relative = 1e-12);
        }
        assert!(g.thickness(59).is_none());
        assert_relative_eq!(g.depths()[59], 3.5 - dz, max_relative = 1e-12);
    }

    #[test]
    fn discretization_samples_midpoints() {
        let m = discretize_profile(profile_gaussian, 60, 3.5).unwrap();
        let dz = 3.5 / 60.0;
        assert_relative_eq!(m.sigma()[0], profile_gaussian(0.5 * dz), max_relative = 1e-15);
        assert_relative_eq!(m.sigma()[20], profile_gaussian(20.5 * dz), max_relative = 1e-15);
        // bottom layer sampled at its top
        assert_relative_eq!(m.sigma()[59], profile_gaussian(59.0 * dz), max_relative = 1e-15);
    }

    #[test]
    fn pseudo2d_interface_ramps_and_sections_are_two_valued() {
        let sec = make_pseudo2d_section(50, 60, 3.5).unwrap();
        assert_eq!(sec.len(), 50);
        for col in &sec {
            assert!(col.sigma().iter().all(|&s| s == 0.5 || s == 2.0));
        }
        // first column: interface at 0.5 m; last: 3.0 m
        let count_top = |m: &LayeredEarthModel| m.sigma().iter().filter(|&&s| s == 0.5).count();
        assert!(count_top(&sec[0]) < count_top(&sec[49]));
        let dz = 3.5 / 60.0;
        let first_deep = sec[0].sigma().iter().position(|&s| s == 2.0).unwrap();
        assert!((sec[0].midpoint(first_deep) - 0.5).abs() < dz);
        let last_deep = sec[49].sigma().iter().position(|&s| s == 2.0).unwrap();
        assert!((sec[49].midpoint(last_deep) - 3.0).abs() < dz);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let data: DataVector = (0..12)
            .map(|k| Complex64::new(0.01 * (k + 1) as f64, 0.02 * (k + 1) as f64))
            .collect();
        let a = add_noise(&data, 0.02, 42);
        let b = add_noise(&data, 0.02, 42);
        let c = add_noise(&data, 0.02, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_level_matches_request() {
        // with w of length 2m scaled by ||b||/sqrt(m), the expected relative
        // perturbation is sqrt(2) * delta; average over seeds to check
        let data: DataVector = (0..12)
            .map(|k| Complex64::new(0.01 * (k + 1) as f64, 0.02 * (k + 1) as f64))
            .collect();
        let delta = 0.02;
        let b = stack(&data);
        let mut acc = 0.0;
        let trials = 200;
        for seed in 0..trials {
            let noisy = add_noise(&data, delta, seed);
            acc += (stack(&noisy) - &b).norm_squared();
        }
        let mean_rel = (acc / trials as f64).sqrt() / b.norm();
        let expect = delta * 2f64.sqrt();
        assert!(
            (mean_rel - expect).abs() < 0.1 * expect,
            "mean relative perturbation {mean_rel:.4} vs {expect:.4}"
        );
    }

    #[test]
    fn snr_reflects_noise_level() {
        let data: DataVector = (0..12)
            .map(|k| Complex64::new(0.05 * (k + 1) as f64, 0.1 * (k + 1) as f64))
            .collect();
        let noisy = add_noise(&data, 0.02, 7);
        let snr = snr_db(&data, &noisy);
        // 10 log10(1/(2 delta^2)) = 30.97 dB, give statistical slack
        assert!(snr > 25.0 && snr < 37.0, "snr = {snr}");
    }
}
