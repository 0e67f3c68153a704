use crate::spectral::{fft2_in_place, DispersionParams, SpectralField, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftDirection;
use std::f64::consts::PI;

/// Temporal cutoff applied before the time transform. With `s ∈ [-1, 1]`
/// the rescaled position in the window, the bumps are `(1-s²)^order` and
/// `exp(1 - 1/(1-s²))`; both vanish at the window edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// No cutoff: the field is treated as `T_w`-periodic in time.
    Rectangular,
    PolynomialBump { order: u32 },
    ExpBump,
}

impl Default for Window {
    fn default() -> Self {
        Window::PolynomialBump { order: 8 }
    }
}

impl Window {
    /// Window value at relative position `u = (t - t₀)/T_w ∈ [0, 1]`.
    pub fn value(self, u: f64) -> f64 {
        let s = 2.0 * u - 1.0;
        let q = 1.0 - s * s;
        match self {
            Window::Rectangular => 1.0,
            _ if q <= 0.0 => 0.0,
            Window::PolynomialBump { order } => q.powi(order as i32),
            Window::ExpBump => (1.0 - 1.0 / q).exp(),
        }
    }

    /// Largest window value at the first and last samples of an `m`-point
    /// uniform sampling.
    pub fn edge_value(self, m: usize) -> f64 {
        self.value(0.0).max(self.value((m - 1) as f64 / m as f64))
    }
}

/// Space-time coefficients `û(k, τ_l)`, rows indexed by `k` and columns by
/// `τ_l = 2πl/T_w`, both in DFT storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: TorusGrid,
    time_window: f64,
    num_time_samples: usize,
    coeffs: Vec<Complex64>,
    window: Window,
}

/// Smallest power of two `M` whose `τ`-band `[-πM/T_w, πM/T_w)` covers
/// `2·(max_{|k|≤k_max}|w(k)| + reach)`.
pub fn time_samples_for(k_max: i64, params: &DispersionParams, time_window: f64, reach: f64) -> usize {
    let wmax = (0..=k_max).map(|k| params.symbol(k).norm()).fold(0.0, f64::max);
    let need = 2.0 * (wmax + reach) * time_window / PI;
    (need.ceil().max(4.0) as usize).next_power_of_two()
}

fn signed(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

fn slot(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

impl SpaceTimeField {
    pub fn from_coeffs(
        grid: TorusGrid,
        time_window: f64,
        num_time_samples: usize,
        coeffs: Vec<Complex64>,
        window: Window,
    ) -> Result<Self> {
        if !(time_window > 0.0) {
            return Err(Error::Domain(format!("time window must be positive, got {time_window}")));
        }
        if num_time_samples < 2 || coeffs.len() != grid.num_points() * num_time_samples {
            return Err(Error::Dimension(format!(
                "{} coefficients for a {}×{} space-time grid",
                coeffs.len(),
                grid.num_points(),
                num_time_samples
            )));
        }
        Ok(SpaceTimeField { grid, time_window, num_time_samples, coeffs, window })
    }

    pub fn zeros(grid: TorusGrid, time_window: f64, num_time_samples: usize, window: Window) -> Result<Self> {
        let n = grid.num_points() * num_time_samples;
        Self::from_coeffs(grid, time_window, num_time_samples, vec![Complex64::new(0.0, 0.0); n], window)
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn time_window(&self) -> f64 {
        self.time_window
    }

    pub fn num_time_samples(&self) -> usize {
        self.num_time_samples
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn tau_spacing(&self) -> f64 {
        2.0 * PI / self.time_window
    }

    /// `τ_l` for signed `l`.
    pub fn tau(&self, l: i64) -> f64 {
        l as f64 * self.tau_spacing()
    }

    /// Coefficient at wavenumber `k` and signed time-frequency index `l`
    /// (zero outside the stored lattice).
    pub fn coeff(&self, k: i64, l: i64) -> Complex64 {
        let m = self.num_time_samples as i64;
        match self.grid.index_of(k) {
            Some(i) if l >= -m / 2 && l < m / 2 => self.coeffs[i * self.num_time_samples + slot(l, self.num_time_samples)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `(k, τ, û)` over the stored lattice.
    pub fn modes(&self) -> impl Iterator<Item = (i64, f64, Complex64)> + '_ {
        let m = self.num_time_samples;
        let dtau = self.tau_spacing();
        self.coeffs.iter().enumerate().map(move |(i, &c)| {
            let k = self.grid.wavenumber(i / m);
            (k, signed(i % m, m) as f64 * dtau, c)
        })
    }

    /// Same lattice, coefficients replaced mode by mode.
    pub fn map_modes(&self, mut f: impl FnMut(i64, f64, Complex64) -> Complex64) -> SpaceTimeField {
        let coeffs = self.modes().map(|(k, t, c)| f(k, t, c)).collect();
        SpaceTimeField { coeffs, ..self.clone() }
    }

    /// `‖u‖_{L²(𝕋×ℝ)}` by Plancherel.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (s / (2.0 * PI * self.time_window)).sqrt()
    }

    /// Physical samples `u(x_j, t_l)` (including the window) on a grid
    /// refined by `pad` in both directions, row-major with rows in `x`.
    pub fn samples_padded(&self, pad: usize) -> (usize, usize, Vec<Complex64>) {
        let n = self.grid.num_points();
        let m = self.num_time_samples;
        let (nx, nt) = (n * pad, m * pad);
        let mut buf = vec![Complex64::new(0.0, 0.0); nx * nt];
        for i in 0..n {
            let row = slot(signed(i, n), nx);
            for j in 0..m {
                buf[row * nt + slot(signed(j, m), nt)] = self.coeffs[i * m + j];
            }
        }
        fft2_in_place(&mut buf, nx, nt, FftDirection::Inverse);
        let scale = 1.0 / (2.0 * PI * self.time_window);
        buf.iter_mut().for_each(|c| *c *= scale);
        (nx, nt, buf)
    }

    /// Physical samples on the native lattice.
    pub fn samples(&self) -> Vec<Complex64> {
        self.samples_padded(1).2
    }

    /// Inverts [`spacetime_transform`] at every sample time where the window
    /// is at least `min_weight`, returning `(time index, state)`.
    pub fn states_on_interior(&self, min_weight: f64) -> Result<Vec<(usize, SpectralField)>> {
        let n = self.grid.num_points();
        let m = self.num_time_samples;
        let samples = self.samples();
        let mut out = Vec::new();
        for l in 0..m {
            let w = self.window.value(l as f64 / m as f64);
            if w < min_weight {
                continue;
            }
            let column: Vec<Complex64> = (0..n).map(|j| samples[j * m + l] / w).collect();
            out.push((l, crate::spectral::forward_transform(self.grid, &column)?));
        }
        Ok(out)
    }

    /// Builds a field of the same shape from physical samples (row-major,
    /// rows in `x`), without applying any window.
    pub(crate) fn from_samples(
        grid: TorusGrid,
        time_window: f64,
        num_time_samples: usize,
        mut samples: Vec<Complex64>,
        window: Window,
    ) -> Result<Self> {
        let n = grid.num_points();
        if samples.len() != n * num_time_samples {
            return Err(Error::Dimension(format!("{} samples for a {n}×{num_time_samples} grid", samples.len())));
        }
        fft2_in_place(&mut samples, n, num_time_samples, FftDirection::Forward);
        let scale = grid.spacing() * time_window / num_time_samples as f64;
        samples.iter_mut().for_each(|c| *c *= scale);
        Self::from_coeffs(grid, time_window, num_time_samples, samples, window)
    }
}

/// Windows the uniformly sampled states `u(t_l)` and transforms in time.
/// Time is measured from `times[0]`, and the window spans
/// `[times[0], times[0] + M·Δt)`.
pub fn spacetime_transform(states: &[SpectralField], times: &[f64], window: Window) -> Result<SpaceTimeField> {
    let m = states.len();
    if m < 2 || times.len() != m {
        return Err(Error::Dimension(format!("{m} states with {} times", times.len())));
    }
    let grid = states[0].grid();
    if states.iter().any(|s| s.grid() != grid) {
        return Err(Error::Dimension("states live on different grids".into()));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) || times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt) {
        return Err(Error::Domain("time samples must be uniformly spaced and increasing".into()));
    }
    let n = grid.num_points();
    let mut buf = vec![Complex64::new(0.0, 0.0); n * m];
    for (l, state) in states.iter().enumerate() {
        let w = window.value(l as f64 / m as f64);
        for (j, v) in state.to_samples().into_iter().enumerate() {
            buf[j * m + l] = v * w;
        }
    }
    SpaceTimeField::from_samples(grid, dt * m as f64, m, buf, window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::apply_semigroup;

    #[test]
    fn windows_vanish_at_the_edges() {
        for w in [Window::PolynomialBump { order: 8 }, Window::ExpBump] {
            assert!(w.edge_value(256) < 1e-14 || w.value(0.0) == 0.0);
            assert_eq!(w.value(0.0), 0.0);
            assert!((w.value(0.5) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn plane_wave_concentrates() {
        let g = TorusGrid::new(16).unwrap();
        let (m, tw) = (128usize, 2.0 * PI);
        let (n, lam) = (3i64, 10.0);
        let times: Vec<f64> = (0..m).map(|l| l as f64 * tw / m as f64).collect();
        let states: Vec<SpectralField> = times
            .iter()
            .map(|&t| SpectralField::single_mode(g, n, Complex64::from_polar(2.0 * PI, -lam * t)).unwrap())
            .collect();
        let f = spacetime_transform(&states, &times, Window::default()).unwrap();
        let (kmax, tmax, _) = f.modes().max_by(|a, b| a.2.norm().total_cmp(&b.2.norm())).unwrap();
        assert_eq!(kmax, n);
        assert!((tmax + lam).abs() < 1e-12);
        let zero = spacetime_transform(&vec![SpectralField::zeros(g); m], &times, Window::default()).unwrap();
        assert_eq!(zero.l2_norm(), 0.0);
    }

    #[test]
    fn linear_flow_sits_on_the_characteristic() {
        let g = TorusGrid::new(16).unwrap();
        let p = DispersionParams::real(0.5);
        let tw = 2.0 * PI;
        let m = time_samples_for(8, &p, tw, 64.0);
        let u0 = SpectralField::from_fn(g, |k| Complex64::new(1.0 / (1.0 + (k * k) as f64), 0.0));
        let times: Vec<f64> = (0..m).map(|l| l as f64 * tw / m as f64).collect();
        let states: Vec<SpectralField> = times.iter().map(|&t| apply_semigroup(&u0, t, &p).unwrap()).collect();
        let f = spacetime_transform(&states, &times, Window::default()).unwrap();
        // away from the characteristic only the window's spectral tail remains
        let total = f.l2_norm().powi(2);
        let far: f64 = f
            .modes()
            .filter(|(k, t, _)| (t + p.symbol_real(*k as f64)).abs() > 40.0)
            .map(|(_, _, c)| c.norm_sqr())
            .sum::<f64>()
            / (2.0 * PI * tw);
        assert!(far < 1e-10 * total, "{far:e} of {total:e}");
    }

    #[test]
    fn plancherel_and_inversion() {
        let g = TorusGrid::new(8).unwrap();
        let m = 32usize;
        let tw = 1.5;
        let mut rng = crate::rng::Stream::new(7, 0);
        let times: Vec<f64> = (0..m).map(|l| 0.25 + l as f64 * tw / m as f64).collect();
        let states: Vec<SpectralField> =
            (0..m).map(|_| SpectralField::from_fn(g, |_| rng.complex_normal())).collect();
        let f = spacetime_transform(&states, &times, Window::default()).unwrap();
        let samples = f.samples();
        let quad: f64 = samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * g.spacing() * tw / m as f64;
        assert!((quad.sqrt() - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
        for (l, state) in f.states_on_interior(1e-3).unwrap() {
            assert!(state.distance(&states[l], 0.0) < 1e-10 * states[l].l2_norm());
        }
        let bad = [0.0, 0.1, 0.3];
        assert!(matches!(
            spacetime_transform(&states[..3], &bad, Window::default()),
            Err(Error::Domain(_))
        ));
    }
}
