//! Seeded, reproducible test batteries.
//!
//! Verification campaigns measure isometry and reconstruction defects as a
//! max over a battery of test functions. Batteries are generated from a
//! ChaCha stream cipher so that a recorded seed reproduces the battery
//! bit-for-bit on any platform.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{GridFunction, GroupPoint, HaarGrid};

/// Random complex vectors on a cyclic grid.
pub fn cyclic_battery(grid: &Arc<HaarGrid>, count: usize, seed: u64) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            GridFunction::from_fn(Arc::clone(grid), |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
        })
        .collect()
}

/// Band-limited functions on the periodized real-line grid: random
/// coefficients on the DFT frequencies inside `[-band, band]`.
pub fn band_limited_battery(
    grid: &Arc<HaarGrid>,
    band: f64,
    count: usize,
    seed: u64,
) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crate::group::GridKind::RealLine { half_extent, len } = *grid.kind() else {
        panic!("band_limited_battery needs a real-line grid");
    };
    let n = len as i64;
    let domega = std::f64::consts::PI / half_extent;
    let ks: Vec<i64> = (-n / 2..(n + 1) / 2)
        .filter(|k| (*k as f64 * domega).abs() <= band)
        .collect();
    (0..count)
        .map(|_| {
            let coeffs: Vec<(f64, Complex64)> = ks
                .iter()
                .map(|k| {
                    (
                        *k as f64 * domega,
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    )
                })
                .collect();
            GridFunction::from_fn(Arc::clone(grid), |p| {
                let GroupPoint::Real(x) = p else { unreachable!() };
                coeffs
                    .iter()
                    .map(|(w, c)| c * Complex64::from_polar(1.0, w * x))
                    .sum()
            })
        })
        .collect()
}

/// Parameters of the affine bump battery. All bumps are Gaussian in `b`,
/// log-Gaussian in `a`, with a complex carrier in `b` keeping the partial
/// Fourier content inside the dual window.
#[derive(Debug, Clone, Copy)]
pub struct AffineBatteryParams {
    pub b_center_max: f64,
    pub sigma_b: (f64, f64),
    /// Scale centers are drawn from `offset +/- max`.
    pub log2_a_center_offset: f64,
    pub log2_a_center_max: f64,
    pub sigma_log2_a: (f64, f64),
    /// Carrier frequency magnitude range; the sign is drawn at random.
    pub carrier: (f64, f64),
}

impl Default for AffineBatteryParams {
    fn default() -> Self {
        AffineBatteryParams {
            b_center_max: 4.0,
            sigma_b: (6.0, 8.0),
            log2_a_center_offset: 0.0,
            log2_a_center_max: 0.6,
            sigma_log2_a: (0.5, 0.7),
            carrier: (0.6, 0.9),
        }
    }
}

impl AffineBatteryParams {
    /// Battery matched to the construction model's dual window: carriers
    /// below the dual's top frequency, scale centers low enough to keep
    /// the dilated content inside the window.
    pub fn construction() -> Self {
        AffineBatteryParams {
            b_center_max: 3.0,
            sigma_b: (9.0, 11.0),
            log2_a_center_offset: -0.6,
            log2_a_center_max: 0.2,
            sigma_log2_a: (0.2, 0.3),
            carrier: (0.42, 0.5),
        }
    }
}

/// Seeded affine bumps, interior-supported for the default grids.
pub fn affine_bump_battery(
    grid: &Arc<HaarGrid>,
    params: &AffineBatteryParams,
    count: usize,
    seed: u64,
) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let b0 = rng.gen_range(-params.b_center_max..params.b_center_max);
            let sb = rng.gen_range(params.sigma_b.0..params.sigma_b.1);
            let la0 = params.log2_a_center_offset
                + rng.gen_range(-params.log2_a_center_max..params.log2_a_center_max);
            let sa = rng.gen_range(params.sigma_log2_a.0..params.sigma_log2_a.1);
            let carrier = rng.gen_range(params.carrier.0..params.carrier.1)
                * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let phase0 = rng.gen_range(0.0..std::f64::consts::TAU);
            affine_bump(grid, b0, sb, la0, sa, carrier, phase0)
        })
        .collect()
}

/// One affine bump: `exp(-((b-b0)/sb)^2 - ((log2 a - la0)/sa)^2) * e^{i(carrier*b + phase)}`.
pub fn affine_bump(
    grid: &Arc<HaarGrid>,
    b0: f64,
    sigma_b: f64,
    log2_a0: f64,
    sigma_log2_a: f64,
    carrier: f64,
    phase0: f64,
) -> GridFunction {
    GridFunction::from_fn(Arc::clone(grid), |p| {
        let GroupPoint::Affine { b, a } = p else {
            unreachable!()
        };
        let la = a.log2();
        let env = (-((b - b0) / sigma_b).powi(2) - ((la - log2_a0) / sigma_log2_a).powi(2)).exp();
        env * Complex64::from_polar(1.0, carrier * b + phase0)
    })
}

/// Smooth bumps on the real-line grid (Gaussian envelope, random carrier
/// inside `band`), for quadrature checks that need decaying functions
/// rather than band-limited trigonometric polynomials.
pub fn real_line_bump_battery(
    grid: &Arc<HaarGrid>,
    band: f64,
    count: usize,
    seed: u64,
) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crate::group::GridKind::RealLine { half_extent, .. } = *grid.kind() else {
        panic!("real_line_bump_battery needs a real-line grid");
    };
    (0..count)
        .map(|_| {
            let x0 = rng.gen_range(-0.2 * half_extent..0.2 * half_extent);
            let s = rng.gen_range(0.05 * half_extent..0.12 * half_extent);
            let w = rng.gen_range(-band..band);
            GridFunction::from_fn(Arc::clone(grid), |p| {
                let GroupPoint::Real(x) = p else { unreachable!() };
                (-((x - x0) / s).powi(2)).exp() * Complex64::from_polar(1.0, w * x)
            })
        })
        .collect()
}
