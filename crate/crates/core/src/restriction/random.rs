use super::field::{spacetime_transform, time_samples_for, SpaceTimeField, Window};
use crate::rng::Stream;
use crate::spectral::{DispersionParams, SpectralField, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Family of random windowed fields
/// `u(x,t) = W(t) Σ_k z_k e^{ikx - i(w(k)+σ_k)t}` over a random set of
/// wavenumbers `|k| ≤ k_max`, with offsets `σ_k` from the characteristic
/// drawn from dyadic shells `0..=max_shell` (or zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomFieldSpec {
    pub k_max: i64,
    pub time_window: f64,
    pub max_shell: u32,
    /// Extra factor on the automatically sized number of time samples.
    pub refinement: usize,
    pub window: Window,
}

impl Default for RandomFieldSpec {
    fn default() -> Self {
        RandomFieldSpec { k_max: 6, time_window: 1.0, max_shell: 6, refinement: 1, window: Window::default() }
    }
}

/// Field number `index` of the family seeded by `seed`.
pub fn random_spacetime_field(
    spec: &RandomFieldSpec,
    params: &DispersionParams,
    seed: u64,
    index: u64,
) -> Result<SpaceTimeField> {
    if !params.has_real_epsilon() {
        return Err(Error::Domain("random fields follow a real characteristic".into()));
    }
    let mut rng = Stream::new(seed, index);
    let grid = TorusGrid::containing(spec.k_max as usize);
    let reach = 2f64.powi(spec.max_shell as i32 + 1);
    let m = time_samples_for(spec.k_max, params, spec.time_window, reach) * spec.refinement.max(1);

    let mut ks: Vec<i64> = (-spec.k_max..=spec.k_max).collect();
    for i in (1..ks.len()).rev() {
        let j = rng.int_in(0, i as i64) as usize;
        ks.swap(i, j);
    }
    let count = rng.int_in(1, ks.len() as i64) as usize;
    let modes: Vec<(i64, Complex64, f64)> = ks[..count]
        .iter()
        .map(|&k| {
            let z = rng.complex_normal();
            let sigma = if rng.uniform() < 0.25 {
                0.0
            } else {
                let shell = rng.int_in(0, spec.max_shell as i64) as i32;
                let sign = if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
                sign * 2f64.powi(shell) * rng.uniform_in(1.0, 2.0)
            };
            (k, z, params.symbol_real(k as f64) + sigma)
        })
        .collect();

    let dt = spec.time_window / m as f64;
    let times: Vec<f64> = (0..m).map(|l| l as f64 * dt).collect();
    let states: Vec<SpectralField> = times
        .iter()
        .map(|&t| {
            let mut s = SpectralField::zeros(grid);
            for &(k, z, freq) in &modes {
                let idx = grid.index_of(k).expect("k within the grid");
                s.coeffs_mut()[idx] = z * Complex64::from_polar(2.0 * PI, -freq * t);
            }
            s
        })
        .collect();
    spacetime_transform(&states, &times, spec.window)
}
