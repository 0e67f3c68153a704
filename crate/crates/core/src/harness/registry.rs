use super::config::{key, Key, Settings};
use super::output::{num, opt, Plot, Table};
use crate::counting::{
    count_bilinear, count_bilinear_scan, count_trilinear, count_trilinear_scan, bilinear_min_level, radial_polynomial_v,
    resonance_max, trilinear_level, verify_bilinear_bound, verify_trilinear_bound, verify_v_properties, BoundReport,
    CountQuery, VCertificate,
};
use crate::epsilon::{
    continuity_experiment, holomorphy_order, illposedness_threshold, illposedness_witness, inflation_solver_check,
    infinite_horizon_discontinuity, norm_inflation_table, uniform_failure_solver_check, uniform_failure_witness,
    EpsilonExperiment, HorizonCase, Horizon,
};
use crate::evolution::{
    exact_pure_frequency_for, simulate, smooth_random_datum, Integrator, NonlinearityKind, NonlinearitySpec,
    SimulationConfig,
};
use crate::restriction::{
    embedding_ratio, necessity_crossover, random_spacetime_field, sharpness_sweep, RandomFieldSpec,
};
use crate::rng::Stream;
use crate::spectral::{japanese, DispersionParams, SpectralField, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ReportOnly => "REPORT-ONLY",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// What an experiment produced before it is written out.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub metrics: BTreeMap<String, f64>,
    pub verdict: Verdict,
    /// One line explaining the verdict.
    pub detail: String,
    pub plot: Option<Plot>,
}

impl Outcome {
    fn new(table: Table) -> Self {
        Outcome { table, metrics: BTreeMap::new(), verdict: Verdict::ReportOnly, detail: String::new(), plot: None }
    }

    fn metric(&mut self, name: impl Into<String>, v: f64) {
        self.metrics.insert(name.into(), v);
    }

    fn judge(&mut self, ok: bool, detail: String) {
        self.verdict = Verdict::from_bool(ok);
        self.detail = detail;
    }
}

pub type Runner = fn(&Settings, u64) -> Result<Outcome>;

/// A named experiment, the claim it reproduces and its configuration keys.
pub struct Experiment {
    pub name: &'static str,
    pub anchor: &'static str,
    pub keys: &'static [Key],
    pub run: Runner,
}

pub static REGISTRY: [Experiment; 15] = [
    Experiment {
        name: "simulate",
        anchor: "nonlinear flow on the torus; explicit single-mode solutions",
        keys: SIMULATE_KEYS,
        run: run_simulate,
    },
    Experiment {
        name: "conservation",
        anchor: "Hamiltonian flow conserves mass and energy",
        keys: CONSERVATION_KEYS,
        run: run_conservation,
    },
    Experiment {
        name: "strichartz-sweep",
        anchor: "modified Strichartz embeddings with explicit ε-powers",
        keys: STRICHARTZ_KEYS,
        run: run_strichartz,
    },
    Experiment {
        name: "sharpness",
        anchor: "box family saturating the embedding exponents",
        keys: SHARPNESS_KEYS,
        run: run_sharpness,
    },
    Experiment {
        name: "necessity",
        anchor: "necessary condition on b for the L^{2q} embedding",
        keys: NECESSITY_KEYS,
        run: run_necessity,
    },
    Experiment {
        name: "bilinear-count",
        anchor: "bilinear lattice count bound ε^{-1/2}2^{(m+n)/4}",
        keys: BILINEAR_KEYS,
        run: run_bilinear,
    },
    Experiment {
        name: "trilinear-count",
        anchor: "trilinear lattice count bound ε^{-1}2^{(m+n+l)/2}",
        keys: TRILINEAR_KEYS,
        run: run_trilinear,
    },
    Experiment {
        name: "resonance-count",
        anchor: "growth of the resonance count r_{N,n,j} with N",
        keys: RESONANCE_KEYS,
        run: run_resonance,
    },
    Experiment {
        name: "v-convexity",
        anchor: "radial polynomial of the trilinear level and its convexity",
        keys: V_KEYS,
        run: run_v_convexity,
    },
    Experiment {
        name: "illposed",
        anchor: "failure of uniform continuity of the flow map below L²",
        keys: ILLPOSED_KEYS,
        run: run_illposed,
    },
    Experiment {
        name: "inflation",
        anchor: "norm inflation when Im(ε²) > 0",
        keys: INFLATION_KEYS,
        run: run_inflation,
    },
    Experiment {
        name: "epsilon-continuity",
        anchor: "continuity of solutions in ε on finite time intervals",
        keys: CONTINUITY_KEYS,
        run: run_continuity,
    },
    Experiment {
        name: "uniform-failure",
        anchor: "continuity in ε is not uniform for large ε",
        keys: UNIFORM_KEYS,
        run: run_uniform,
    },
    Experiment {
        name: "infinite-horizon",
        anchor: "discontinuity in ε on the infinite time horizon",
        keys: HORIZON_KEYS,
        run: run_horizon,
    },
    Experiment {
        name: "holomorphy",
        anchor: "holomorphy of the linear flow in ε",
        keys: HOLOMORPHY_KEYS,
        run: run_holomorphy,
    },
];

pub fn names() -> Vec<String> {
    REGISTRY.iter().map(|e| e.name.to_string()).collect()
}

pub fn lookup(name: &str) -> Result<&'static Experiment> {
    REGISTRY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownExperiment { name: name.to_string(), valid: names() })
}

fn kind(name: &str) -> Result<NonlinearityKind> {
    match name {
        "N1" => Ok(NonlinearityKind::N1),
        "N2" => Ok(NonlinearityKind::N2),
        "N3" => Ok(NonlinearityKind::N3),
        other => Err(Error::Config(format!("nonlinearity must be N1, N2 or N3, got `{other}`"))),
    }
}

fn nonlinearity(kind: NonlinearityKind, mu: f64) -> Result<NonlinearitySpec> {
    if mu == 0.0 {
        Ok(NonlinearitySpec::disabled(kind))
    } else {
        NonlinearitySpec::new(kind, mu)
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

// simulate

const SIMULATE_KEYS: &[Key] = &[
    key("params.eps2_re", "1", "real part of ε²"),
    key("params.eps2_im", "0", "imaginary part of ε²"),
    key("nonlinearity.kind", "N1", "N1 (smoothed cubic), N2 (cubic) or N3 (quintic)"),
    key("nonlinearity.mu", "-1", "sign μ = ±1, or 0 for the linear flow"),
    key("grid.num_points", "64", "collocation points"),
    key("time.dt", "1e-3", "step"),
    key("time.horizon", "1", "final time T"),
    key("time.integrator", "if", "if (integrating factor RK4) or picard"),
    key("time.save_every", "100", "keep every k-th state"),
    key("diagnostics.hs", "0,1", "Sobolev indices reported per time"),
    key("datum.kind", "smooth", "smooth (seeded Gaussian spectrum) or pure-frequency"),
    key("datum.h1_norm", "1", "H¹ norm of the smooth datum"),
    key("datum.n", "1", "mode of the pure-frequency datum"),
    key("datum.k", "0.5", "size of the pure-frequency datum, in H^s"),
    key("datum.s", "1", "Sobolev index of the pure-frequency datum and of the closed-form error"),
    key("check.closed_form", "1e-8", "tolerance on the sup-in-time H^s error against the closed form"),
];

/// Columns `time, mass, energy, hs_<s>..., closed_form_error`; the last is
/// empty for a smooth datum.
fn run_simulate(s: &Settings, seed: u64) -> Result<Outcome> {
    let params = DispersionParams::from_eps2(Complex64::new(s.f64("params.eps2_re")?, s.f64("params.eps2_im")?));
    let spec = nonlinearity(kind(s.str("nonlinearity.kind"))?, s.f64("nonlinearity.mu")?)?;
    let grid = TorusGrid::new(s.usize("grid.num_points")?)?;
    let integrator = match s.str("time.integrator") {
        "if" => Integrator::IntegratingFactor,
        "picard" => Integrator::PicardDuhamel,
        other => return Err(Error::Config(format!("time.integrator must be if or picard, got `{other}`"))),
    };
    let hs = s.f64_list("diagnostics.hs")?;
    let cfg = SimulationConfig::new(params, spec, grid, s.f64("time.dt")?, s.f64("time.horizon")?, integrator)?
        .with_save_every(s.usize("time.save_every")?)
        .with_hs_exponents(hs.clone());
    let (n, k, sd) = (s.i64("datum.n")?, s.f64("datum.k")?, s.f64("datum.s")?);
    let a0 = Complex64::new(k * japanese(n as f64).powf(-sd), 0.0);
    let pure = match s.str("datum.kind") {
        "smooth" => false,
        "pure-frequency" => true,
        other => return Err(Error::Config(format!("datum.kind must be smooth or pure-frequency, got `{other}`"))),
    };
    let u0 = if pure {
        exact_pure_frequency_for(grid, spec, n, a0, &params, 0.0)?
    } else {
        smooth_random_datum(grid, seed, s.f64("datum.h1_norm")?)
    };
    let traj = simulate(&u0, &cfg)?;

    let mut columns = vec!["time".to_string(), "mass".into(), "energy".into()];
    columns.extend(hs.iter().map(|x| format!("hs_{x}")));
    columns.push("closed_form_error".into());
    let mut table = Table { columns, rows: Vec::new() };
    let mut max_err = 0.0f64;
    for i in 0..traj.times.len() {
        let err = if pure {
            let exact = exact_pure_frequency_for(grid, spec, n, a0, &params, traj.times[i])?;
            let e = traj.states[i].distance(&exact, sd);
            max_err = max_err.max(e);
            Some(e)
        } else {
            None
        };
        let mut row = vec![num(traj.times[i]), num(traj.mass[i]), opt(traj.energy[i])];
        row.extend(traj.hs_norms[i].iter().map(|&v| num(v)));
        row.push(opt(err));
        table.push(row);
    }
    let mut out = Outcome::new(table);
    out.metric("final_time", traj.final_time());
    out.metric("mass_drift", traj.relative_mass_drift());
    if let Some(e) = traj.relative_energy_drift() {
        out.metric("energy_drift", e);
    }
    if let Some(d) = traj.divergence {
        out.metric("divergence_time", d.time);
    }
    if pure {
        let tol = s.f64("check.closed_form")?;
        out.metric("closed_form_error", max_err);
        out.judge(
            max_err <= tol && traj.divergence.is_none(),
            format!("n={n}: sup_t error {} (tolerance {})", num(max_err), num(tol)),
        );
    } else {
        out.detail = format!("mass drift {}", num(traj.relative_mass_drift()));
    }
    out.plot = Some(Plot {
        title: "Sobolev norms along the trajectory".into(),
        x_label: "t".into(),
        y_label: "‖u(t)‖".into(),
        series: hs
            .iter()
            .enumerate()
            .map(|(j, x)| (format!("H^{x}"), traj.times.iter().zip(&traj.hs_norms).map(|(&t, h)| (t, h[j])).collect()))
            .collect(),
        ..Plot::default()
    });
    Ok(out)
}

// conservation

const CONSERVATION_KEYS: &[Key] = &[
    key("params.eps", "1/2,1,2", "real ε values"),
    key("nonlinearity.kinds", "N1,N2,N3", "nonlinearities"),
    key("nonlinearity.mu", "-1", "sign μ"),
    key("grid.num_points", "256", "collocation points"),
    key("time.dt", "1e-3", "step"),
    key("time.horizon", "1", "final time T"),
    key("datum.h1_norm", "1", "H¹ norm of the seeded smooth datum"),
    key("check.mass", "1e-8", "tolerance on max_t |m(t)-m(0)|/m(0)"),
    key("check.energy", "1e-6", "tolerance on the relative energy drift"),
];

/// Columns `kind, eps, mass_drift, energy_drift, pass`.
fn run_conservation(s: &Settings, seed: u64) -> Result<Outcome> {
    let grid = TorusGrid::new(s.usize("grid.num_points")?)?;
    let u0 = smooth_random_datum(grid, seed, s.f64("datum.h1_norm")?);
    let (dt, horizon, mu) = (s.f64("time.dt")?, s.f64("time.horizon")?, s.f64("nonlinearity.mu")?);
    let (tol_m, tol_e) = (s.f64("check.mass")?, s.f64("check.energy")?);
    let mut cases = Vec::new();
    for name in s.str_list("nonlinearity.kinds") {
        for eps in s.f64_list("params.eps")? {
            cases.push((kind(&name)?, eps));
        }
    }
    let results: Vec<(f64, f64)> = cases
        .par_iter()
        .map(|&(k, eps)| {
            let cfg = SimulationConfig::new(
                DispersionParams::real(eps),
                nonlinearity(k, mu)?,
                grid,
                dt,
                horizon,
                Integrator::IntegratingFactor,
            )?
            .with_save_every(10);
            let traj = simulate(&u0, &cfg)?;
            if let Some(d) = traj.divergence {
                return Err(Error::Divergence { time: d.time, sup: d.sup });
            }
            Ok((traj.relative_mass_drift(), traj.relative_energy_drift().unwrap_or(f64::NAN)))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["kind", "eps", "mass_drift", "energy_drift", "pass"]);
    let mut ok = true;
    for (&(k, eps), &(dm, de)) in cases.iter().zip(&results) {
        let pass = dm <= tol_m && de <= tol_e;
        ok &= pass;
        table.push(vec![k.name().into(), num(eps), num(dm), num(de), pass.to_string()]);
    }
    let mut out = Outcome::new(table);
    let (wm, we) = (worst(results.iter().map(|r| r.0)), worst(results.iter().map(|r| r.1)));
    out.metric("max_mass_drift", wm);
    out.metric("max_energy_drift", we);
    out.judge(ok, format!("max mass drift {}, max energy drift {}", num(wm), num(we)));
    Ok(out)
}

// strichartz-sweep

const STRICHARTZ_KEYS: &[Key] = &[
    key("params.eps", "1,1/4,1/16", "real ε values; the first is the reference"),
    key("fields.count", "500", "seeded random fields per ε"),
    key("fields.k_max", "6", "largest |k| of a field"),
    key("fields.max_shell", "6", "largest dyadic offset from the characteristic"),
    key("fields.time_window", "1", "time window"),
    key("check.factor", "3", "allowed factor over the predicted ε-growth"),
];

/// Embeddings `L⁴ ⊂ X^{0,5/16}` and `L⁶ ⊂ X^{0,5/12}` with their predicted
/// ε-powers.
const EMBEDDINGS: [(u32, f64, f64); 2] = [(4, 5.0 / 16.0, 1.0 / 8.0), (6, 5.0 / 12.0, 1.0 / 6.0)];

/// Columns `eps, p, b, max_ratio, growth, allowed, pass`, with
/// `growth = max_ratio(ε)/max_ratio(ε_ref)` and
/// `allowed = factor·(ε/ε_ref)^{-γ}`.
fn run_strichartz(s: &Settings, seed: u64) -> Result<Outcome> {
    let eps = s.f64_list("params.eps")?;
    let count = s.usize("fields.count")? as u64;
    let factor = s.f64("check.factor")?;
    let spec = RandomFieldSpec {
        k_max: s.i64("fields.k_max")?,
        max_shell: s.usize("fields.max_shell")? as u32,
        time_window: s.f64("fields.time_window")?,
        ..RandomFieldSpec::default()
    };
    let Some(&eps_ref) = eps.first() else {
        return Err(Error::Config("params.eps is empty".into()));
    };
    let maxima: Vec<[f64; 2]> = eps
        .iter()
        .map(|&e| {
            let p = DispersionParams::real(e);
            let per_field: Vec<[f64; 2]> = (0..count)
                .into_par_iter()
                .map(|i| {
                    let f = random_spacetime_field(&spec, &p, seed, i)?;
                    Ok([embedding_ratio(&f, 4, EMBEDDINGS[0].1, &p)?, embedding_ratio(&f, 6, EMBEDDINGS[1].1, &p)?])
                })
                .collect::<Result<_>>()?;
            Ok(per_field.iter().fold([0.0f64, 0.0f64], |a, r| [a[0].max(r[0]), a[1].max(r[1])]))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["eps", "p", "b", "max_ratio", "growth", "allowed", "pass"]);
    let mut ok = true;
    let mut series = [Vec::new(), Vec::new()];
    let mut worst_use = 0.0f64;
    for (i, &e) in eps.iter().enumerate() {
        for (j, &(p, b, gamma)) in EMBEDDINGS.iter().enumerate() {
            let growth = maxima[i][j] / maxima[0][j];
            let allowed = factor * (e / eps_ref).powf(-gamma);
            let pass = growth <= allowed;
            ok &= pass;
            worst_use = worst_use.max(growth / allowed);
            table.push(vec![num(e), p.to_string(), num(b), num(maxima[i][j]), num(growth), num(allowed), pass.to_string()]);
            series[j].push((e, maxima[i][j]));
        }
    }
    let mut out = Outcome::new(table);
    for (i, &e) in eps.iter().enumerate() {
        for (j, &(p, _, _)) in EMBEDDINGS.iter().enumerate() {
            out.metric(format!("max_ratio_p{p}_eps_{}", num(e)), maxima[i][j]);
        }
    }
    out.metric("worst_growth_over_allowed", worst_use);
    out.judge(ok, format!("largest growth/allowed {}", num(worst_use)));
    out.plot = Some(Plot {
        title: "largest embedding ratio over the random family".into(),
        x_label: "ε".into(),
        y_label: "max ‖u‖_{L^p}/‖u‖_{X^{0,b}}".into(),
        log_x: true,
        log_y: true,
        series: vec![("L⁴/X^{0,5/16}".into(), series[0].clone()), ("L⁶/X^{0,5/12}".into(), series[1].clone())],
    });
    Ok(out)
}

// sharpness

const SHARPNESS_KEYS: &[Key] = &[
    key("sharpness.deltas", "2,3,4", "dispersion degrees δ"),
    key("sharpness.ns", "4,8,16,32,64", "box sizes N"),
    key("sharpness.ps", "4,6", "Lebesgue exponents (even)"),
    key("sharpness.bs", "0,5/16,1/2", "X^{0,b} exponents"),
    key("check.slope", "0.03", "relative tolerance on each log-log slope"),
];

/// Columns `delta, quantity, p, b, slope, expected, relative_error, r_squared`.
fn run_sharpness(s: &Settings, _seed: u64) -> Result<Outcome> {
    let deltas = s.i64_list("sharpness.deltas")?;
    let ns = s.i64_list("sharpness.ns")?;
    let ps: Vec<u32> = s.i64_list("sharpness.ps")?.into_iter().map(|p| p as u32).collect();
    let bs = s.f64_list("sharpness.bs")?;
    let tol = s.f64("check.slope")?;
    let sweeps = deltas
        .par_iter()
        .map(|&d| sharpness_sweep(d as u32, &ns, &ps, &bs))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["delta", "quantity", "p", "b", "slope", "expected", "relative_error", "r_squared"]);
    let mut worst_err = 0.0f64;
    let mut series = Vec::new();
    for sw in &sweeps {
        for f in &sw.fits {
            worst_err = worst_err.max(f.relative_error());
            table.push(vec![
                f.delta.to_string(),
                f.quantity.clone(),
                f.p.map(|p| p.to_string()).unwrap_or_default(),
                opt(f.b),
                num(f.slope),
                num(f.expected),
                num(f.relative_error()),
                num(f.r_squared),
            ]);
        }
        for (p, values) in &sw.data.lebesgue {
            let pts = sw.data.ns.iter().zip(values).map(|(&n, &v)| (n as f64, v)).collect();
            series.push((format!("δ={} L^{p}", sw.data.delta), pts));
        }
    }
    let mut out = Outcome::new(table);
    out.metric("max_relative_error", worst_err);
    out.judge(worst_err <= tol, format!("largest relative slope error {} (tolerance {})", num(worst_err), num(tol)));
    out.plot = Some(Plot {
        title: "Lebesgue norms of the box family".into(),
        x_label: "N".into(),
        y_label: "‖u_N‖".into(),
        log_x: true,
        log_y: true,
        series,
    });
    Ok(out)
}

// necessity

const NECESSITY_KEYS: &[Key] = &[
    key("necessity.cases", "2:4,3:4,2:2", "pairs q:δ"),
    key("necessity.spacing", "1/32", "spacing of the b grid on [0, 1]"),
];

/// Columns `q, delta, b_star, first_bounded, last_diverging, matches`.
fn run_necessity(s: &Settings, _seed: u64) -> Result<Outcome> {
    let spacing = s.f64("necessity.spacing")?;
    let cases = s.pair_list("necessity.cases")?;
    let results = cases
        .par_iter()
        .map(|&(q, d)| necessity_crossover(q as u32, d as u32, spacing))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["q", "delta", "b_star", "first_bounded", "last_diverging", "matches"]);
    let mut ok = true;
    for c in &results {
        ok &= c.matches_threshold();
        table.push(vec![
            c.q.to_string(),
            c.delta.to_string(),
            num(c.b_star),
            opt(c.first_bounded),
            opt(c.last_diverging),
            c.matches_threshold().to_string(),
        ]);
    }
    let mut out = Outcome::new(table);
    let hits = results.iter().filter(|c| c.matches_threshold()).count();
    out.judge(ok, format!("{hits}/{} crossovers bracket b*", results.len()));
    Ok(out)
}

// counting

const BILINEAR_KEYS: &[Key] = &[
    key("params.eps", "1,1/2,1/4", "real ε values"),
    key("count.max_total", "12", "largest shell total m+n"),
    key("count.ks", "0..=11", "output frequencies k"),
    key("check.stability", "0.2", "allowed relative change of the constant from max_total/2 to max_total"),
    key("oracle.queries", "100", "random queries compared with the exhaustive scan"),
    key("oracle.box", "400", "|k₁| bound of the oracle queries"),
];

const TRILINEAR_KEYS: &[Key] = &[
    key("params.eps", "1,1/2,1/4", "real ε values, each ≤ certificate.eps"),
    key("count.max_total", "12", "largest shell total m+n+l"),
    key("count.ks", "0..=6", "output frequencies k"),
    key("certificate.eps", "1", "ε at which the lower bound of v is certified"),
    key("certificate.k_max", "40", "largest |k| covered by the certificate"),
    key("check.stability", "0.2", "allowed relative change of the constant from max_total/2 to max_total"),
    key("oracle.queries", "100", "random queries compared with the exhaustive scan"),
    key("oracle.box", "30", "|k₁|, |k₂| bound of the oracle queries"),
];

fn bound_rows(table: &mut Table, r: &BoundReport) {
    for row in &r.rows {
        table.push(vec![
            num(r.eps2),
            row.shells_total.to_string(),
            row.k.to_string(),
            num(row.tau),
            row.count.to_string(),
            num(row.bound),
            num(row.ratio),
            row.exact.to_string(),
        ]);
    }
}

fn judge_bounds(out: &mut Outcome, reports: &[BoundReport], max_total: u32, tol: f64, mismatches: usize, queries: usize) {
    let mut ok = mismatches == 0;
    let mut parts = Vec::new();
    let mut series = Vec::new();
    for r in reports {
        let c = r.constant_up_to(max_total);
        let stab = r.stability(max_total / 2, max_total);
        ok &= c.is_finite() && c > 0.0 && (stab - 1.0).abs() <= tol;
        out.metric(format!("constant_eps2_{}", num(r.eps2)), c);
        out.metric(format!("stability_eps2_{}", num(r.eps2)), stab);
        parts.push(format!("ε²={}: C={:.3} stability {:.3}", num(r.eps2), c, stab));
        series.push((
            format!("ε²={}", num(r.eps2)),
            (0..=max_total).map(|t| (t as f64, r.constant_up_to(t))).collect(),
        ));
    }
    out.metric("oracle_mismatches", mismatches as f64);
    parts.push(format!("oracle {}/{queries} exact", queries - mismatches));
    out.judge(ok, parts.join("; "));
    out.plot = Some(Plot {
        title: format!("{} count constant", reports.first().map_or("", |r| r.kind)),
        x_label: "shell total".into(),
        y_label: "max count / bound".into(),
        series,
        ..Plot::default()
    });
}

/// Columns `eps2, shells_total, k, tau, count, bound, ratio, exact`.
fn run_bilinear(s: &Settings, seed: u64) -> Result<Outcome> {
    let eps = s.f64_list("params.eps")?;
    let max_total = s.usize("count.max_total")? as u32;
    let ks = s.i64_list("count.ks")?;
    let reports = eps
        .par_iter()
        .map(|&e| verify_bilinear_bound(&DispersionParams::real(e), max_total, &ks))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["eps2", "shells_total", "k", "tau", "count", "bound", "ratio", "exact"]);
    for r in &reports {
        bound_rows(&mut table, r);
    }
    let (queries, bound) = (s.usize("oracle.queries")?, s.i64("oracle.box")?);
    let mut rng = Stream::new(seed, 0);
    let mut mismatches = 0;
    for i in 0..queries {
        let p = DispersionParams::real(eps[i % eps.len()]);
        let (m, n) = (rng.int_in(0, 4) as u32, rng.int_in(0, 4) as u32);
        let k = rng.int_in(-30, 30);
        let q = CountQuery::bilinear(m, n, p).with_box(bound);
        let tau = -bilinear_min_level(&p, k.abs()) - rng.uniform_in(-2.0, 6.0) * q.threshold()?;
        if count_bilinear(&q, tau, k)? != count_bilinear_scan(&q, tau, k, bound)? {
            mismatches += 1;
        }
    }
    let mut out = Outcome::new(table);
    judge_bounds(&mut out, &reports, max_total, s.f64("check.stability")?, mismatches, queries);
    Ok(out)
}

/// Columns as for `bilinear-count`.
fn run_trilinear(s: &Settings, seed: u64) -> Result<Outcome> {
    let eps = s.f64_list("params.eps")?;
    let max_total = s.usize("count.max_total")? as u32;
    let ks = s.i64_list("count.ks")?;
    let cert_params = DispersionParams::real(s.f64("certificate.eps")?);
    let cert: VCertificate = verify_v_properties(&cert_params, 64, s.i64("certificate.k_max")?, 40.0, 80)?
        .certificate
        .ok_or_else(|| Error::Inconclusive { reason: "the lower bound of v could not be certified".into(), required: 0.0 })?;
    let reports = eps
        .par_iter()
        .map(|&e| verify_trilinear_bound(&DispersionParams::real(e), max_total, &ks, cert))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["eps2", "shells_total", "k", "tau", "count", "bound", "ratio", "exact"]);
    for r in &reports {
        bound_rows(&mut table, r);
    }
    let (queries, bound) = (s.usize("oracle.queries")?, s.i64("oracle.box")?);
    let mut rng = Stream::new(seed, 1);
    let mut mismatches = 0;
    for i in 0..queries {
        let p = DispersionParams::real(eps[i % eps.len()]);
        let l = rng.int_in(0, 5) as u32;
        let k = rng.int_in(-12, 12);
        let q = CountQuery::trilinear(0, 0, l, p).with_certificate(cert).with_box(bound);
        let tau = -radial_polynomial_v(0.0, 0.0, k, &p) - rng.uniform_in(-2.0, 6.0) * q.threshold()?;
        if count_trilinear(&q, tau, k)? != count_trilinear_scan(&q, tau, k, bound)? {
            mismatches += 1;
        }
    }
    let mut out = Outcome::new(table);
    out.metric("certificate_c", cert.c);
    judge_bounds(&mut out, &reports, max_total, s.f64("check.stability")?, mismatches, queries);
    Ok(out)
}

const RESONANCE_KEYS: &[Key] = &[
    key("params.eps2", "1", "ε², recovered exactly as a fraction"),
    key("resonance.boxes", "10,20,40,80,160", "box sizes N, increasing"),
    key("resonance.shifts", "0,1,5", "shifts n"),
];

/// Columns `n, N, max_count, level_scaled, distinct_levels`; the claim is
/// that `max_count` strictly increases with `N` for every `n`.
fn run_resonance(s: &Settings, _seed: u64) -> Result<Outcome> {
    let p = DispersionParams::from_eps2(s.f64("params.eps2")?.into());
    let boxes = s.i64_list("resonance.boxes")?;
    let shifts = s.i64_list("resonance.shifts")?;
    let jobs: Vec<(i64, i64)> = shifts.iter().flat_map(|&n| boxes.iter().map(move |&b| (n, b))).collect();
    let rows = jobs.par_iter().map(|&(n, b)| resonance_max(b, n, &p)).collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["n", "N", "max_count", "level_scaled", "distinct_levels"]);
    for r in &rows {
        table.push(vec![
            r.n.to_string(),
            r.n_box.to_string(),
            r.max_count.to_string(),
            r.level_scaled.to_string(),
            r.distinct_levels.to_string(),
        ]);
    }
    let mut failing = Vec::new();
    let mut series = Vec::new();
    for &n in &shifts {
        let seq: Vec<u64> = rows.iter().filter(|r| r.n == n).map(|r| r.max_count).collect();
        if !seq.windows(2).all(|w| w[1] > w[0]) {
            failing.push(format!("n={n} {seq:?}"));
        }
        series.push((
            format!("n={n}"),
            rows.iter().filter(|r| r.n == n).map(|r| (r.n_box as f64, r.max_count as f64)).collect(),
        ));
    }
    let mut out = Outcome::new(table);
    out.metric("non_increasing_shifts", failing.len() as f64);
    let detail = if failing.is_empty() {
        "max_j r strictly increases for every n".to_string()
    } else {
        format!("not strictly increasing: {}", failing.join("; "))
    };
    out.judge(failing.is_empty(), detail);
    out.plot = Some(Plot {
        title: "largest resonance count".into(),
        x_label: "N".into(),
        y_label: "max_j r_{N,n,j}".into(),
        log_x: true,
        series,
        ..Plot::default()
    });
    Ok(out)
}

const V_KEYS: &[Key] = &[
    key("params.eps", "1,1/2,1/4", "real ε values for the convexity scan"),
    key("v.n_theta", "256", "angles"),
    key("v.k_max", "20", "largest |k|"),
    key("v.r_max", "50", "largest radius"),
    key("v.n_r", "400", "radii"),
    key("substitution.points", "10000", "random points compared with direct substitution"),
    key("check.relative", "1e-9", "relative tolerance of the substitution check"),
    key("check.second_derivative", "1e-9", "allowed negative part of v''"),
];

/// Columns `eps, min_second_derivative, c_sampled, c_infimum,
/// max_slope_at_origin, samples`.
fn run_v_convexity(s: &Settings, seed: u64) -> Result<Outcome> {
    let (n_theta, k_max, r_max, n_r) =
        (s.usize("v.n_theta")?, s.i64("v.k_max")?, s.f64("v.r_max")?, s.usize("v.n_r")?);
    let eps = s.f64_list("params.eps")?;
    let reports = eps
        .par_iter()
        .map(|&e| verify_v_properties(&DispersionParams::real(e), n_theta, k_max, r_max, n_r))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = Stream::new(seed, 0);
    let mut worst_rel = 0.0f64;
    for _ in 0..s.usize("substitution.points")? {
        let p = DispersionParams::real(rng.uniform_in(0.1, 2.0));
        let (k1, k2, k) = (rng.int_in(-500, 500), rng.int_in(-500, 500), rng.int_in(-500, 500));
        let (x, y) = (k1 as f64 - k as f64 / 3.0, k2 as f64 - k as f64 / 3.0);
        let direct = trilinear_level(&p, k, k1, k2);
        let v = radial_polynomial_v(x.hypot(y), y.atan2(x), k, &p);
        worst_rel = worst_rel.max((v - direct).abs() / direct.abs().max(1.0));
    }
    let mut table = Table::new(&["eps", "min_second_derivative", "c_sampled", "c_infimum", "max_slope_at_origin", "samples"]);
    for (e, r) in eps.iter().zip(&reports) {
        table.push(vec![
            num(*e),
            num(r.min_second_derivative),
            num(r.c_sampled),
            num(r.c_infimum),
            num(r.max_slope_at_origin),
            r.samples.to_string(),
        ]);
    }
    let min_d2 = reports.iter().map(|r| r.min_second_derivative).fold(f64::INFINITY, f64::min);
    let (tol_rel, tol_d2) = (s.f64("check.relative")?, s.f64("check.second_derivative")?);
    let mut out = Outcome::new(table);
    out.metric("max_substitution_error", worst_rel);
    out.metric("min_second_derivative", min_d2);
    out.judge(
        worst_rel <= tol_rel && min_d2 >= -tol_d2,
        format!("substitution error {}, min v'' {}", num(worst_rel), num(min_d2)),
    );
    Ok(out)
}

// epsilon

const ILLPOSED_KEYS: &[Key] = &[
    key("params.eps", "1", "real ε"),
    key("illposed.s", "-1/2", "Sobolev index s < 0"),
    key("illposed.k", "1", "size k of the witness pair"),
    key("illposed.t", "1", "time t"),
    key("check.tolerance", "1e-3", "initial gap ≤ tol and time-t gap ≥ k(1 - tol) beyond n₀"),
    key("illposed.multiples", "1,2,4,16,64,256,1024", "n = n₀·m sampled beyond the threshold"),
];

/// Columns `n, k_n, initial_distance, distance, lower_bound, phase_gap`.
fn run_illposed(s: &Settings, _seed: u64) -> Result<Outcome> {
    let p = DispersionParams::real(s.f64("params.eps")?);
    let (sv, k, t, tol) = (s.f64("illposed.s")?, s.f64("illposed.k")?, s.f64("illposed.t")?, s.f64("check.tolerance")?);
    let n0 = illposedness_threshold(k, sv, t, tol)?;
    let mut ns = vec![(n0 - 1).max(1)];
    ns.extend(s.i64_list("illposed.multiples")?.iter().map(|m| n0 * m));
    ns.push(n0 + 1);
    ns.sort_unstable();
    ns.dedup();
    let mut table = Table::new(&["n", "k_n", "initial_distance", "distance", "lower_bound", "phase_gap"]);
    let mut ok = true;
    let mut last_initial = f64::INFINITY;
    for &n in &ns {
        let w = illposedness_witness(n, k, sv, t, &p)?;
        if n >= n0 {
            ok &= w.initial_distance <= tol && w.distance >= k * (1.0 - tol) && w.initial_distance < last_initial;
            last_initial = w.initial_distance;
        }
        table.push(vec![
            n.to_string(),
            num(w.k_n),
            num(w.initial_distance),
            num(w.distance),
            num(w.lower_bound),
            num(w.phase_gap),
        ]);
    }
    let mut out = Outcome::new(table);
    out.metric("n0", n0 as f64);
    out.judge(ok, format!("n₀ = {n0}"));
    Ok(out)
}

const INFLATION_KEYS: &[Key] = &[
    key("params.alpha", "0", "Re(ε²)"),
    key("params.beta", "0.1", "Im(ε²) > 0"),
    key("inflation.s", "1", "Sobolev index"),
    key("inflation.deltas", "0.1,0.01", "targets δ: initial < δ, final > 1/δ at T = δ/2"),
    key("inflation.n_max", "400", "largest mode n, with k_n = 1/n"),
    key("solver.n", "1", "mode of the solver cross-check"),
    key("solver.k", "1e-3", "size of the solver cross-check datum"),
    key("solver.horizon", "0.5", "time of the solver cross-check"),
    key("solver.dt", "1e-3", "step of the solver cross-check"),
    key("check.solver", "1e-4", "relative tolerance of the solver cross-check"),
];

/// Columns `delta, n, k_n, initial_norm, log_final_norm, witness`.
fn run_inflation(s: &Settings, _seed: u64) -> Result<Outcome> {
    let (alpha, beta, sv) = (s.f64("params.alpha")?, s.f64("params.beta")?, s.f64("inflation.s")?);
    let n_max = s.i64("inflation.n_max")?;
    let mut table = Table::new(&["delta", "n", "k_n", "initial_norm", "log_final_norm", "witness"]);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut series = Vec::new();
    for delta in s.f64_list("inflation.deltas")? {
        let t = norm_inflation_table(alpha, beta, delta / 2.0, sv, |n| 1.0 / n as f64, 1..=n_max)?;
        let w = t.witness(delta).copied();
        ok &= w.is_some();
        parts.push(match w {
            Some(r) => format!("δ={}: n={}", num(delta), r.n),
            None => format!("δ={}: no witness up to n={n_max}", num(delta)),
        });
        for r in &t.rows {
            let is_w = w.is_some_and(|x| x.n == r.n);
            table.push(vec![num(delta), r.n.to_string(), num(r.k_n), num(r.initial_norm), num(r.log_final_norm), is_w.to_string()]);
        }
        series.push((format!("δ={}", num(delta)), t.rows.iter().map(|r| (r.n as f64, r.log_final_norm)).collect()));
    }
    let err = inflation_solver_check(
        alpha,
        beta,
        s.i64("solver.n")?,
        s.f64("solver.k")?,
        sv,
        s.f64("solver.horizon")?,
        s.f64("solver.dt")?,
    )?;
    let tol = s.f64("check.solver")?;
    ok &= err <= tol;
    parts.push(format!("solver error {}", num(err)));
    let mut out = Outcome::new(table);
    out.metric("solver_error", err);
    out.judge(ok, parts.join("; "));
    out.plot = Some(Plot {
        title: "final norm of the inflating family".into(),
        x_label: "n".into(),
        y_label: "log ‖u(T)‖".into(),
        series,
        ..Plot::default()
    });
    Ok(out)
}

const CONTINUITY_KEYS: &[Key] = &[
    key("params.eps0", "1", "limit ε₀ (real)"),
    key("sequence.j", "1..=12", "ε_j = ε₀ + 2^{-j}"),
    key("continuity.s", "1", "Sobolev index of the distance"),
    key("continuity.horizon", "1", "final time T"),
    key("time.dt", "1e-3", "step"),
    key("grid.num_points", "32", "collocation points"),
    key("datum.amplitude", "0.05", "datum a·cos x + a"),
    key("check.distance", "1e-4", "distance reached at the smallest gap"),
];

/// Columns `j, eps, eps_gap, distance, I1, I2, I3, I4, duhamel_defect`.
fn run_continuity(s: &Settings, _seed: u64) -> Result<Outcome> {
    let eps0 = s.f64("params.eps0")?;
    let js = s.i64_list("sequence.j")?;
    let grid = TorusGrid::new(s.usize("grid.num_points")?)?;
    let a = s.f64("datum.amplitude")?;
    let u0 = SpectralField::from_fn(grid, |k| match k {
        0 => Complex64::new(2.0 * PI * a, 0.0),
        1 | -1 => Complex64::new(PI * a, 0.0),
        _ => Complex64::new(0.0, 0.0),
    });
    let exp = EpsilonExperiment {
        epsilon0: DispersionParams::real(eps0),
        sequence: js.iter().map(|&j| DispersionParams::real(eps0 + 2f64.powi(-(j as i32)))).collect(),
        s: s.f64("continuity.s")?,
        n: 1,
        horizon: Horizon::Finite(s.f64("continuity.horizon")?),
        tolerance: s.f64("check.distance")?,
    };
    let t = continuity_experiment(&exp, &u0, s.f64("time.dt")?)?;
    let mut table = Table::new(&["j", "eps", "eps_gap", "distance", "I1", "I2", "I3", "I4", "duhamel_defect"]);
    for (j, r) in js.iter().zip(&t.rows) {
        let mut row = vec![j.to_string(), num(eps0 + r.eps_gap), num(r.eps_gap), num(r.distance)];
        row.extend(r.duhamel.iter().map(|&v| num(v)));
        row.push(num(r.duhamel_defect));
        table.push(row);
    }
    let last = t.rows.iter().map(|r| r.distance).fold(f64::INFINITY, f64::min);
    let mut out = Outcome::new(table);
    out.metric("smallest_distance", last);
    out.judge(
        t.is_monotone() && t.converges(),
        format!("monotone: {}, smallest distance {}", t.is_monotone(), num(last)),
    );
    out.plot = Some(Plot {
        title: "distance to the ε₀ solution".into(),
        x_label: "|ε_j - ε₀|".into(),
        y_label: "sup_t ‖u_j - u‖_{H^s}".into(),
        log_x: true,
        log_y: true,
        series: vec![("distance".into(), t.rows.iter().map(|r| (r.eps_gap, r.distance)).collect())],
    });
    Ok(out)
}

const UNIFORM_KEYS: &[Key] = &[
    key("uniform.pairs", "100:101,400:401,1000:1001", "pairs ε:ε' with an O(1) gap"),
    key("uniform.horizon", "1", "final time T"),
    key("check.exact", "1e-10", "tolerance on |sup - 2|"),
    key("solver.s", "1", "Sobolev index of the solver cross-check"),
    key("solver.dt", "1e-3", "step of the solver cross-check"),
    key("check.solver", "1e-8", "tolerance of the solver cross-check on the first pair"),
];

/// Columns `eps, eps_prime, sup, first_maximizer`.
fn run_uniform(s: &Settings, _seed: u64) -> Result<Outcome> {
    let pairs = s.pair_list("uniform.pairs")?;
    let horizon = s.f64("uniform.horizon")?;
    let rows = uniform_failure_witness(horizon, &pairs);
    let mut table = Table::new(&["eps", "eps_prime", "sup", "first_maximizer"]);
    let tol = s.f64("check.exact")?;
    let mut worst_gap = 0.0f64;
    for r in &rows {
        worst_gap = worst_gap.max((r.sup - 2.0).abs());
        table.push(vec![num(r.eps), num(r.eps_prime), num(r.sup), opt(r.first_maximizer)]);
    }
    let (e, e2) = *pairs.first().ok_or_else(|| Error::Config("uniform.pairs is empty".into()))?;
    let err = uniform_failure_solver_check(e, e2, s.f64("solver.s")?, horizon, s.f64("solver.dt")?)?;
    let mut out = Outcome::new(table);
    out.metric("max_gap_from_2", worst_gap);
    out.metric("solver_error", err);
    out.judge(
        worst_gap <= tol && err <= s.f64("check.solver")?,
        format!("max |sup - 2| = {}, solver error {}", num(worst_gap), num(err)),
    );
    Ok(out)
}

const HORIZON_KEYS: &[Key] = &[
    key("params.eps0", "1", "limit ε₀ (real)"),
    key("sequence.count", "6", "members per case; gaps h_j = 2^{-j}"),
    key("horizon.c", "0.3", "constant c of the damping case, 0 < c < 0.5/√2"),
    key("check.slack", "1e-6", "allowed shortfall of the sup below the floor"),
];

/// Columns `case, alpha_gap, beta, sup, bound, sup_short, tau_at_sup, holds`.
///
/// The seeded sequence mixes the three cases: `ε_j² = ε₀² + a h_j` (pure
/// phase), `ε₀² + a h_j - i h_j` (damping) and `ε₀² + h_j - i a h_j`
/// (phase), with `a` uniform in `(0.1, 0.9)`.
fn run_horizon(s: &Settings, seed: u64) -> Result<Outcome> {
    let eps0 = s.f64("params.eps0")?;
    let base = eps0 * eps0;
    let c = s.f64("horizon.c")?;
    let mut rng = Stream::new(seed, 0);
    let mut seq = Vec::new();
    for j in 1..=s.i64("sequence.count")? {
        let h = 2f64.powi(-(j as i32));
        let mut a = || rng.uniform_in(0.1, 0.9);
        seq.push(DispersionParams::from_eps2(Complex64::new(base + a() * h, 0.0)));
        seq.push(DispersionParams::from_eps2(Complex64::new(base + a() * h, -h)));
        seq.push(DispersionParams::from_eps2(Complex64::new(base + h, -a() * h)));
    }
    let r = infinite_horizon_discontinuity(&DispersionParams::real(eps0), &seq, c)?;
    let slack = s.f64("check.slack")?;
    let floor = r.floor();
    let mut table = Table::new(&["case", "alpha_gap", "beta", "sup", "bound", "sup_short", "tau_at_sup", "holds"]);
    let mut ok = true;
    let mut min_sup = f64::INFINITY;
    for row in &r.rows {
        let holds = row.holds() && (row.case == HorizonCase::Identical || row.sup >= floor - slack);
        ok &= holds;
        if row.case != HorizonCase::Identical {
            min_sup = min_sup.min(row.sup);
        }
        table.push(vec![
            format!("{:?}", row.case),
            num(row.alpha_gap),
            num(row.beta),
            num(row.sup),
            num(row.bound),
            opt(row.sup_short),
            num(row.tau_at_sup),
            holds.to_string(),
        ]);
    }
    for case in [HorizonCase::PurePhase, HorizonCase::DampingDominated, HorizonCase::PhaseDominated] {
        ok &= r.rows.iter().any(|x| x.case == case);
    }
    let mut out = Outcome::new(table);
    out.metric("c1", r.c1);
    out.metric("floor", floor);
    out.metric("min_sup", min_sup);
    out.judge(ok, format!("min sup {} vs floor {} (c₁ = {:.5})", num(min_sup), num(floor), r.c1));
    Ok(out)
}

const HOLOMORPHY_KEYS: &[Key] = &[
    key("holomorphy.points", "20", "seeded points of Ω"),
    key("holomorphy.h", "1e-3", "stencil step; compared with h/2"),
    key("holomorphy.delta", "0.1", "earliest time"),
    key("holomorphy.horizon", "1", "latest time"),
    key("holomorphy.n_times", "10", "times sampled in [δ, T]"),
    key("holomorphy.s", "0", "Sobolev index of the residual"),
    key("holomorphy.modulus", "0.4:1.2", "range of |ε|"),
    key("holomorphy.angle", "0.2:1.3", "range of the angle to the real axis"),
    key("datum.k_max", "3", "datum û(k) = 1 + ik/2 for |k| ≤ k_max"),
    key("check.ratio", "3.5:4.5", "admissible residual ratio"),
];

/// Columns `eps_re, eps_im, residual_h, residual_half, ratio`.
fn run_holomorphy(s: &Settings, seed: u64) -> Result<Outcome> {
    let pair = |k: &str| -> Result<(f64, f64)> {
        s.pair_list(k)?.first().copied().ok_or_else(|| Error::Config(format!("{k} is empty")))
    };
    let (r_lo, r_hi) = pair("holomorphy.modulus")?;
    let (a_lo, a_hi) = pair("holomorphy.angle")?;
    let (lo, hi) = pair("check.ratio")?;
    let k_max = s.i64("datum.k_max")?;
    let grid = TorusGrid::containing(k_max as usize + 1);
    let u0 = SpectralField::from_fn(grid, |k| if k.abs() <= k_max { Complex64::new(1.0, 0.5 * k as f64) } else { 0.0.into() });
    let mut rng = Stream::new(seed, 0);
    let points: Vec<Complex64> = (0..s.usize("holomorphy.points")?)
        .map(|i| {
            let th = rng.uniform_in(a_lo, a_hi);
            Complex64::from_polar(rng.uniform_in(r_lo, r_hi), if i % 2 == 0 { -th } else { PI - th })
        })
        .collect();
    let (h, delta, horizon, n_times, sv) = (
        s.f64("holomorphy.h")?,
        s.f64("holomorphy.delta")?,
        s.f64("holomorphy.horizon")?,
        s.usize("holomorphy.n_times")?,
        s.f64("holomorphy.s")?,
    );
    let orders = points
        .par_iter()
        .map(|&e| holomorphy_order(e, h, delta, horizon, &u0, sv, n_times))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["eps_re", "eps_im", "residual_h", "residual_half", "ratio"]);
    for o in &orders {
        table.push(vec![num(o.eps.re), num(o.eps.im), num(o.residual_h), num(o.residual_half), num(o.ratio)]);
    }
    let (min_r, max_r) = orders.iter().fold((f64::INFINITY, 0.0f64), |(a, b), o| (a.min(o.ratio), b.max(o.ratio)));
    let mut out = Outcome::new(table);
    out.metric("min_ratio", min_r);
    out.metric("max_ratio", max_r);
    out.judge(
        orders.iter().all(|o| (lo..=hi).contains(&o.ratio)),
        format!("ratios in [{min_r:.3}, {max_r:.3}]"),
    );
    Ok(out)
}
