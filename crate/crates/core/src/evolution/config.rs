use super::nonlinearity::{NonlinearityKind, NonlinearitySpec};
use crate::spectral::{DispersionParams, SpectralField, TorusGrid};
use crate::{Error, Result};
use std::io::Write;

/// Sup of coefficient moduli above which a run is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    IntegratingFactor,
    PicardDuhamel,
}

/// Fraction `num/den` of the resolved band `|k| ≤ n/2` that is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DealiasRatio {
    pub num: u32,
    pub den: u32,
}

impl DealiasRatio {
    pub fn for_kind(kind: NonlinearityKind) -> Self {
        match kind.degree() {
            3 => DealiasRatio { num: 2, den: 3 },
            _ => DealiasRatio { num: 1, den: 2 },
        }
    }

    /// Largest kept `|k|`: `⌊(num/den)·n/2⌋`.
    pub fn cutoff(self, grid: TorusGrid) -> i64 {
        (self.num as i64 * grid.num_points() as i64) / (2 * self.den as i64)
    }
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub params: DispersionParams,
    pub nonlinearity: NonlinearitySpec,
    pub grid: TorusGrid,
    pub dt: f64,
    pub horizon: f64,
    pub integrator: Integrator,
    pub dealias: DealiasRatio,
    /// Sobolev indices reported per time; the largest one also measures
    /// Picard convergence.
    pub hs_exponents: Vec<f64>,
    /// Keep every `save_every`-th state.
    pub save_every: usize,
}

impl SimulationConfig {
    pub fn new(
        params: DispersionParams,
        nonlinearity: NonlinearitySpec,
        grid: TorusGrid,
        dt: f64,
        horizon: f64,
        integrator: Integrator,
    ) -> Result<Self> {
        let cfg = SimulationConfig {
            params,
            nonlinearity,
            grid,
            dt,
            horizon,
            integrator,
            dealias: DealiasRatio::for_kind(nonlinearity.kind),
            hs_exponents: vec![0.0, 1.0],
            save_every: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_hs_exponents(mut self, s: Vec<f64>) -> Self {
        self.hs_exponents = s;
        self
    }

    pub fn with_save_every(mut self, every: usize) -> Self {
        self.save_every = every.max(1);
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Result<Self> {
        self.horizon = horizon;
        self.dt = self.dt.min(horizon);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Domain(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {}", self.horizon)));
        }
        if self.dt > self.horizon {
            return Err(Error::Domain(format!("dt = {} exceeds the horizon {}", self.dt, self.horizon)));
        }
        let expected = DealiasRatio::for_kind(self.nonlinearity.kind);
        if self.dealias != expected {
            return Err(Error::Config(format!(
                "dealias ratio {}/{} does not match {}/{} for {}",
                self.dealias.num,
                self.dealias.den,
                expected.num,
                expected.den,
                self.nonlinearity.kind.name()
            )));
        }
        self.nonlinearity.validate(&self.params)
    }

    /// Kept band, or `None` when the nonlinearity is off and nothing needs
    /// projecting.
    pub(crate) fn k_cut(&self) -> Option<i64> {
        self.nonlinearity.is_active().then(|| self.dealias.cutoff(self.grid))
    }

    pub(crate) fn picard_exponent(&self) -> f64 {
        self.hs_exponents.iter().copied().fold(0.0, f64::max)
    }
}

/// Where and how a run left the representable range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    pub time: f64,
    pub sup: f64,
}

/// Fixed-point certificate attached to Picard trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionReport {
    pub ratio: f64,
    pub iterations: usize,
    pub horizon: f64,
    pub final_difference: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub mass: Vec<f64>,
    /// `None` where the energy is not defined (complex ε).
    pub energy: Vec<Option<f64>>,
    pub hs_exponents: Vec<f64>,
    /// `hs_norms[i][j]`: norm at `times[i]` for `hs_exponents[j]`.
    pub hs_norms: Vec<Vec<f64>>,
    pub divergence: Option<DivergenceReport>,
    pub contraction: Option<ContractionReport>,
}

impl Trajectory {
    pub(crate) fn new(hs_exponents: Vec<f64>) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            mass: Vec::new(),
            energy: Vec::new(),
            hs_exponents,
            hs_norms: Vec::new(),
            divergence: None,
            contraction: None,
        }
    }

    pub(crate) fn push(&mut self, t: f64, state: SpectralField, nonlinearity: NonlinearitySpec, params: &DispersionParams) {
        self.mass.push(super::mass(&state));
        self.energy.push(super::energy_for(&state, nonlinearity, params).ok());
        self.hs_norms.push(self.hs_exponents.iter().map(|&s| state.sobolev_norm(s)).collect());
        self.times.push(t);
        self.states.push(state);
    }

    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("non-empty trajectory")
    }

    /// `max_t |m(t) - m(0)| / m(0)`.
    pub fn relative_mass_drift(&self) -> f64 {
        relative_drift(&self.mass)
    }

    pub fn relative_energy_drift(&self) -> Option<f64> {
        let e: Option<Vec<f64>> = self.energy.iter().copied().collect();
        e.map(|e| relative_drift(&e))
    }

    /// `max_t ‖u(t) - v(t)‖_{H^s}` over the common time samples.
    pub fn sup_distance(&self, other: &Trajectory, s: f64) -> Result<f64> {
        if self.times.len() != other.times.len() {
            return Err(Error::Dimension(format!(
                "trajectories have {} and {} samples",
                self.times.len(),
                other.times.len()
            )));
        }
        Ok(self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| a.distance(b, s))
            .fold(0.0, f64::max))
    }

    /// Columns: `time, mass, energy, hs_<s>...`; an undefined energy is an
    /// empty cell.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["time".to_string(), "mass".to_string(), "energy".to_string()];
        header.extend(self.hs_exponents.iter().map(|s| format!("hs_{s}")));
        w.write_record(&header)?;
        for i in 0..self.times.len() {
            let mut row = vec![fmt(self.times[i]), fmt(self.mass[i]), self.energy[i].map(fmt).unwrap_or_default()];
            row.extend(self.hs_norms[i].iter().map(|&v| fmt(v)));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

fn relative_drift(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else { return 0.0 };
    let scale = if first.abs() > 0.0 { first.abs() } else { 1.0 };
    values.iter().map(|v| (v - first).abs()).fold(0.0, f64::max) / scale
}
