use super::horizon::{infinite_horizon_discontinuity, HorizonReport};
use crate::evolution::{simulate, Integrator, NonlinearityKind, NonlinearitySpec, SimulationConfig, Trajectory};
use crate::spectral::{
    apply_semigroup, forward_transform, smoothing_multiplier, DispersionParams, Regime, SpectralField,
};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Finite(f64),
    /// Evaluated in the rescaled time `τ = tn⁴`.
    Infinite,
}

/// A base parameter ε₀ and a sequence `ε_j → ε₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonExperiment {
    pub epsilon0: DispersionParams,
    pub sequence: Vec<DispersionParams>,
    pub s: f64,
    pub n: i64,
    pub horizon: Horizon,
    pub tolerance: f64,
}

impl EpsilonExperiment {
    /// Rejects resonant members and members with `Im(ε²) > 0`.
    pub fn validate(&self) -> Result<()> {
        for p in std::iter::once(&self.epsilon0).chain(&self.sequence) {
            match p.regime() {
                Regime::Resonant => {
                    return Err(Error::SingularOperator(format!("ε² = {} is resonant", p.eps2())));
                }
                Regime::BlowUp => {
                    return Err(Error::Regime(format!("ε² = {} has Im(ε²) > 0", p.eps2())));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The infinite-horizon case analysis for this sequence.
    pub fn infinite_horizon(&self, c: f64) -> Result<HorizonReport> {
        self.validate()?;
        infinite_horizon_discontinuity(&self.epsilon0, &self.sequence, c)
    }
}

/// `|ε_j - ε₀|`, `sup_{[0,T]} ‖u^{ε_j} - u^{ε₀}‖_{H^s}` and the `H^s` norms
/// of the four Duhamel difference terms at `t = T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityRow {
    pub eps_gap: f64,
    pub distance: f64,
    pub duhamel: [f64; 4],
    /// `‖I₁+I₂+I₃+I₄ - ∫(S'N' - SN)‖_{H^s}`, a quadrature consistency check.
    pub duhamel_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityTable {
    pub rows: Vec<ContinuityRow>,
    pub tolerance: f64,
}

impl ContinuityTable {
    /// Distances do not increase as `|ε_j - ε₀|` shrinks.
    pub fn is_monotone(&self) -> bool {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| b.eps_gap.total_cmp(&a.eps_gap));
        rows.windows(2).all(|w| w[1].distance <= w[0].distance)
    }

    pub fn converges(&self) -> bool {
        self.rows
            .iter()
            .min_by(|a, b| a.eps_gap.total_cmp(&b.eps_gap))
            .is_some_and(|r| r.distance < self.tolerance)
    }
}

fn n1() -> NonlinearitySpec {
    NonlinearitySpec { kind: NonlinearityKind::N1, mu: -1.0 }
}

/// Solves the N1 flow (`μ = -1`) by the integrating-factor scheme; a
/// divergent run is an error.
pub fn solve_n1(params: DispersionParams, u0: &SpectralField, horizon: f64, dt: f64) -> Result<Trajectory> {
    let cfg = SimulationConfig::new(params, n1(), u0.grid(), dt, horizon, Integrator::IntegratingFactor)?;
    let traj = simulate(u0, &cfg)?;
    if let Some(d) = traj.divergence {
        return Err(Error::Divergence { time: d.time, sup: d.sup });
    }
    Ok(traj)
}

fn product(a: &SpectralField, b: &SpectralField, conj_b: bool) -> SpectralField {
    let (x, y) = (a.to_samples(), b.to_samples());
    let z: Vec<Complex64> = x.iter().zip(&y).map(|(p, q)| p * if conj_b { q.conj() } else { *q }).collect();
    forward_transform(a.grid(), &z).expect("same grid")
}

fn smooth(f: &SpectralField, p: &DispersionParams) -> SpectralField {
    f.apply_multiplier(|k| smoothing_multiplier(k, p))
}

fn eps_value(p: &DispersionParams) -> Complex64 {
    p.epsilon()
}

/// Duhamel decomposition of the difference of the nonlinear terms at the
/// final time, by trapezoidal quadrature over the saved states.
fn duhamel_terms(
    a: &Trajectory,
    pa: &DispersionParams,
    b: &Trajectory,
    pb: &DispersionParams,
    s: f64,
) -> Result<([f64; 4], f64)> {
    let t_end = a.final_time();
    let grid = a.final_state().grid();
    let mut acc: [SpectralField; 5] = std::array::from_fn(|_| SpectralField::zeros(grid));
    let m = a.times.len();
    for i in 0..m {
        let tau = a.times[i];
        let w = if m == 1 {
            0.0
        } else if i == 0 {
            0.5 * (a.times[1] - a.times[0])
        } else if i == m - 1 {
            0.5 * (a.times[m - 1] - a.times[m - 2])
        } else {
            0.5 * (a.times[i + 1] - a.times[i - 1])
        };
        let (u, up) = (&a.states[i], &b.states[i]);
        let mod_p = product(up, up, true);
        let mod_u = product(u, u, true);
        let x1 = product(&smooth(&mod_p, pb), &(up - u), false);
        let x2 = product(&smooth(&(&mod_p - &mod_u), pb), u, false);
        let x3 = product(&(&smooth(&mod_u, pb) - &smooth(&mod_u, pa)), u, false);
        let nu = product(&smooth(&mod_u, pa), u, false);
        let nup = product(&smooth(&mod_p, pb), up, false);
        let lag = t_end - tau;
        let terms = [
            apply_semigroup(&x1, lag, pb)?,
            apply_semigroup(&x2, lag, pb)?,
            apply_semigroup(&x3, lag, pb)?,
            &apply_semigroup(&nu, lag, pb)? - &apply_semigroup(&nu, lag, pa)?,
            &apply_semigroup(&nup, lag, pb)? - &apply_semigroup(&nu, lag, pa)?,
        ];
        for (sum, term) in acc.iter_mut().zip(terms.iter()) {
            *sum = &*sum + &term.scale(Complex64::new(w, 0.0));
        }
    }
    let total = &(&(&acc[0] + &acc[1]) + &acc[2]) + &acc[3];
    Ok(([0, 1, 2, 3].map(|j| acc[j].sobolev_norm(s)), total.distance(&acc[4], s)))
}

/// Runs the N1 flow for ε₀ and every `ε_j` from `u₀` and tabulates the
/// finite-horizon distances.
pub fn continuity_experiment(exp: &EpsilonExperiment, u0: &SpectralField, dt: f64) -> Result<ContinuityTable> {
    exp.validate()?;
    let horizon = match exp.horizon {
        Horizon::Finite(t) => t,
        Horizon::Infinite => {
            return Err(Error::Domain("the solver comparison needs a finite horizon".into()));
        }
    };
    let base = solve_n1(exp.epsilon0, u0, horizon, dt)?;
    let mut rows = Vec::with_capacity(exp.sequence.len());
    for p in &exp.sequence {
        let run = solve_n1(*p, u0, horizon, dt)?;
        let distance = run.sup_distance(&base, exp.s)?;
        let (duhamel, duhamel_defect) = duhamel_terms(&base, &exp.epsilon0, &run, p, exp.s)?;
        rows.push(ContinuityRow {
            eps_gap: (eps_value(p) - eps_value(&exp.epsilon0)).norm(),
            distance,
            duhamel,
            duhamel_defect,
        });
    }
    Ok(ContinuityTable { rows, tolerance: exp.tolerance })
}

/// `sup_t ‖u^ε(t) - v(t)‖_{H^s}` where `v` solves the linear equation with
/// potential `-‖u₀‖²_{L²}/2π`, the large-ε limit of the N1 flow.
pub fn large_epsilon_limit(eps: f64, u0: &SpectralField, horizon: f64, dt: f64, s: f64) -> Result<f64> {
    let params = DispersionParams::real(eps);
    let run = solve_n1(params, u0, horizon, dt)?;
    let c = u0.l2_norm().powi(2) / (2.0 * PI);
    Ok(run
        .states
        .iter()
        .zip(&run.times)
        .map(|(u, &t)| {
            let v = u0.apply_multiplier(|k| {
                let w = params.symbol(k).re - c;
                Complex64::new(0.0, -t * w).exp()
            });
            u.distance(&v, s)
        })
        .fold(0.0, f64::max))
}

/// `max_{t>0} ln(‖u(t)‖_{H^s}/‖u(0)‖_{H^s})/t`, the smallest `C` with
/// `‖u(t)‖ ≤ ‖u₀‖e^{Ct}` on the samples.
pub fn gronwall_rate(traj: &Trajectory, s: f64) -> f64 {
    let n0 = traj.states[0].sobolev_norm(s);
    traj.states
        .iter()
        .zip(&traj.times)
        .filter(|(_, &t)| t > 0.0)
        .map(|(u, &t)| (u.sobolev_norm(s) / n0).ln() / t)
        .fold(f64::NEG_INFINITY, f64::max)
}
