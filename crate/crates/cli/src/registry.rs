//! Experiment registry and config-to-parameter mapping.

use adpt_core::experiments::{
    bmt, bo_crosscheck, dirac_crosscheck, egorov_scaling, leakage_scaling, projector_defect, time_adiabatic,
    unitary_defect, wigner_snapshot, BmtParams, BoParams, DiracCheckParams, EgorovParams, ExpansionParams,
    LeakageParams, Report, TimeAdiabaticParams, WignerParams,
};
use adpt_core::models::TwoLevelParams;
use adpt_core::quantum::TimeMode;
use adpt_core::Grid1D;
use serde_json::Value;

use crate::config::{Config, ConfigError};

/// Registered experiments with one-line descriptions.
pub const REGISTRY: [(&str, &str); 9] = [
    ("projector-defect", "series defects of the superadiabatic projector and the closed form of pi1"),
    ("unitary-defect", "unitarity and intertwining defects of u and the closed form of u1"),
    ("leakage-scaling", "quantum leakage of pi_hat^(N) over an eps sweep on the two-level benchmark"),
    ("egorov-scaling", "Egorov error with a0 and with a0 + eps a1 over an eps sweep"),
    ("dirac-crosscheck", "generic h1 on the Foldy-Wouthuysen frame against -(hbar/2) sigma.Omega"),
    ("bo-crosscheck", "generic h2 and the assembled symbol against the Born-Oppenheimer formulas"),
    ("bmt", "BMT spin precession against the spin transport along a Dirac trajectory"),
    ("time-adiabatic", "Howland generic expansion against the explicit second-order h(t)"),
    ("wigner-snapshot", "Wigner function of a propagated Gaussian and its duality with quantization"),
];

pub fn registry_names() -> String {
    REGISTRY.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
}

/// A fully validated experiment invocation.
#[derive(Debug, Clone)]
pub enum Job {
    ProjectorDefect(ExpansionParams),
    UnitaryDefect(ExpansionParams),
    Leakage(LeakageParams),
    Egorov(EgorovParams),
    Dirac(DiracCheckParams),
    Bo(BoParams),
    Bmt(BmtParams),
    TimeAdiabatic(TimeAdiabaticParams),
    Wigner(WignerParams),
}

type Res<T> = Result<T, ConfigError>;

fn positive(path: &str, x: f64) -> Res<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(ConfigError::field(path, format!("must be positive and finite, got {x}")))
    }
}

fn finite(path: &str, x: f64) -> Res<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ConfigError::field(path, format!("must be finite, got {x}")))
    }
}

fn f64_or(cfg: &Config, path: &str, default: f64) -> Res<f64> {
    finite(path, cfg.get_or(path, default)?)
}

fn pos_or(cfg: &Config, path: &str, default: f64) -> Res<f64> {
    positive(path, cfg.get_or(path, default)?)
}

fn count_or(cfg: &Config, path: &str, default: usize) -> Res<usize> {
    let n = cfg.get_or(path, default)?;
    if n == 0 {
        return Err(ConfigError::field(path, "must be at least 1"));
    }
    Ok(n)
}

fn model(cfg: &Config, d: TwoLevelParams) -> Res<TwoLevelParams> {
    Ok(TwoLevelParams {
        a: f64_or(cfg, "model.a", d.a)?,
        b: f64_or(cfg, "model.b", d.b)?,
        c_amp: f64_or(cfg, "model.c_amp", d.c_amp)?,
        d_amp: f64_or(cfg, "model.d_amp", d.d_amp)?,
        l: pos_or(cfg, "model.l", d.l)?,
        twist: f64_or(cfg, "model.twist", d.twist)?,
    })
}

fn model_id(cfg: &Config, allowed: &str) -> Res<()> {
    match cfg.raw("model.id") {
        Some(id) if id != allowed => {
            Err(ConfigError::field("model.id", format!("this experiment runs on the {allowed} model, got {id:?}")))
        }
        _ => Ok(()),
    }
}

fn eps_list(cfg: &Config, default: &[f64], min_len: usize) -> Res<Vec<f64>> {
    let eps = cfg.list::<f64>("sweep.eps")?.unwrap_or_else(|| default.to_vec());
    if eps.len() < min_len {
        return Err(ConfigError::field("sweep.eps", format!("needs at least {min_len} values, got {}", eps.len())));
    }
    for &e in &eps {
        positive("sweep.eps", e)?;
    }
    Ok(eps)
}

fn n_points(cfg: &Config, default: usize) -> Res<usize> {
    let n = cfg.get_or("grid.n_points", default)?;
    if !n.is_power_of_two() || !(4..=adpt_core::quantum::grid::MAX_POINTS).contains(&n) {
        return Err(ConfigError::field(
            "grid.n_points",
            format!("must be a power of two in [4, {}], got {n}", adpt_core::quantum::grid::MAX_POINTS),
        ));
    }
    Ok(n)
}

/// The momentum window has to sit inside (0, p_N/2) for every ε.
fn window(w: f64, n: usize, l: f64, eps: &[f64]) -> Res<f64> {
    positive("grid.window", w)?;
    for &e in eps {
        let grid = Grid1D::new(n, l, 2, e).map_err(|err| ConfigError::field("grid", err.to_string()))?;
        let limit = 0.5 * grid.p_nyquist();
        if w >= limit {
            return Err(ConfigError::field(
                "grid.window",
                format!("{w} must be below p_N/2 = {limit:.4} at eps = {e}; raise grid.n_points or shrink the window"),
            ));
        }
    }
    Ok(w)
}

fn order(cfg: &Config, default: usize, max: usize) -> Res<usize> {
    let n = cfg.get_or("expansion.order", default)?;
    if n > max {
        return Err(ConfigError::field("expansion.order", format!("must be at most {max}, got {n}")));
    }
    Ok(n)
}

fn time_mode(cfg: &Config, default: TimeMode, fixed: bool) -> Res<TimeMode> {
    let Some(s) = cfg.raw("time.mode") else { return Ok(default) };
    let mode: TimeMode =
        s.parse().map_err(|_| ConfigError::field("time.mode", format!("expected microscopic or macroscopic, got {s:?}")))?;
    if fixed && mode != default {
        return Err(ConfigError::field("time.mode", format!("this experiment uses {} time", mode_name(default))));
    }
    Ok(mode)
}

fn mode_name(m: TimeMode) -> &'static str {
    match m {
        TimeMode::Microscopic => "microscopic",
        TimeMode::Macroscopic => "macroscopic",
    }
}

/// The command-line seed wins over `samples.seed`, which still counts as read.
fn pick_seed(cfg: &Config, over: Option<u64>, default: u64) -> Res<u64> {
    let from_file = cfg.get::<u64>("samples.seed")?;
    Ok(over.or(from_file).unwrap_or(default))
}

fn expansion(cfg: &Config, seed: Option<u64>) -> Res<ExpansionParams> {
    model_id(cfg, "two-level")?;
    let d = ExpansionParams::default();
    Ok(ExpansionParams {
        model: model(cfg, d.model)?,
        order: order(cfg, d.order, 3)?,
        points: count_or(cfg, "samples.count", d.points)?,
        seed: pick_seed(cfg, seed, d.seed)?,
        tol: pos_or(cfg, "check.tol", d.tol)?,
        p_max: pos_or(cfg, "params.p_max", d.p_max)?,
    })
}

impl Job {
    /// Builds and range-checks the parameters. `seed` overrides
    /// `samples.seed` for experiments that draw sample points.
    pub fn from_config(cfg: &Config, seed: Option<u64>) -> Res<Self> {
        let name = cfg.raw("experiment").ok_or_else(|| ConfigError::field("experiment", "missing"))?;
        let seed_or = |d: u64| pick_seed(cfg, seed, d);
        let job = match name {
            "projector-defect" => Job::ProjectorDefect(expansion(cfg, seed)?),
            "unitary-defect" => Job::UnitaryDefect(expansion(cfg, seed)?),
            "leakage-scaling" => {
                model_id(cfg, "two-level")?;
                let d = LeakageParams::default();
                let model = model(cfg, d.model)?;
                let eps = eps_list(cfg, &d.eps_list, 3)?;
                let n = n_points(cfg, d.n_points)?;
                let win = match cfg.raw("grid.window") {
                    Some("none") => None,
                    Some(_) => Some(window(cfg.get_or("grid.window", 0.0)?, n, model.l, &eps)?),
                    None => Some(window(d.window.unwrap_or(0.5), n, model.l, &eps)?),
                };
                Job::Leakage(LeakageParams {
                    model,
                    n_points: n,
                    eps_list: eps,
                    order: order(cfg, d.order, 3)?,
                    time: pos_or(cfg, "time.value", d.time)?,
                    mode: time_mode(cfg, d.mode, false)?,
                    window: win,
                })
            }
            "egorov-scaling" => {
                model_id(cfg, "two-level")?;
                let d = EgorovParams::default();
                let model = model(cfg, d.model)?;
                let eps = eps_list(cfg, &d.eps_list, 3)?;
                let n = n_points(cfg, d.n_points)?;
                time_mode(cfg, TimeMode::Macroscopic, true)?;
                Job::Egorov(EgorovParams {
                    window: window(cfg.get_or("grid.window", d.window)?, n, model.l, &eps)?,
                    model,
                    n_points: n,
                    eps_list: eps,
                    time: pos_or(cfg, "time.value", d.time)?,
                    dt: pos_or(cfg, "params.dt", d.dt)?,
                    sigma_p: pos_or(cfg, "params.sigma_p", d.sigma_p)?,
                })
            }
            "dirac-crosscheck" => {
                model_id(cfg, "dirac")?;
                let d = DiracCheckParams::default();
                let mut dirac = d.dirac.clone();
                dirac.hbar = pos_or(cfg, "model.hbar", dirac.hbar)?;
                dirac.c = pos_or(cfg, "model.c", dirac.c)?;
                dirac.m = pos_or(cfg, "model.m", dirac.m)?;
                dirac.e = f64_or(cfg, "model.e", dirac.e)?;
                let low = cfg.list::<f64>("params.low_velocity")?.unwrap_or(d.low_velocity);
                for &v in &low {
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(ConfigError::field("params.low_velocity", format!("offsets must be >= 0, got {v}")));
                    }
                }
                Job::Dirac(DiracCheckParams {
                    dirac,
                    points: count_or(cfg, "samples.count", d.points)?,
                    seed: seed_or(d.seed)?,
                    tol: pos_or(cfg, "check.tol", d.tol)?,
                    low_velocity: low,
                })
            }
            "bo-crosscheck" => {
                model_id(cfg, "born-oppenheimer")?;
                let d = BoParams::default();
                Job::Bo(BoParams {
                    points: count_or(cfg, "samples.count", d.points)?,
                    seed: seed_or(d.seed)?,
                    tol: pos_or(cfg, "check.tol", d.tol)?,
                    eps_list: eps_list(cfg, &d.eps_list, 1)?,
                })
            }
            "bmt" => {
                model_id(cfg, "dirac")?;
                let d = BmtParams::default();
                time_mode(cfg, TimeMode::Macroscopic, true)?;
                let p = BmtParams {
                    t_final: pos_or(cfg, "time.value", d.t_final)?,
                    dt: pos_or(cfg, "params.dt", d.dt)?,
                    omega: pos_or(cfg, "params.omega", d.omega)?,
                    table_stride: count_or(cfg, "params.table_stride", d.table_stride)?,
                };
                if p.dt > p.t_final {
                    return Err(ConfigError::field("params.dt", "must not exceed time.value"));
                }
                Job::Bmt(p)
            }
            "time-adiabatic" => {
                let d = TimeAdiabaticParams::default();
                let times = cfg.list::<f64>("params.times")?.unwrap_or(d.times);
                for &t in &times {
                    finite("params.times", t)?;
                }
                let rates = cfg.list::<f64>("params.gauge_rates")?.unwrap_or(d.gauge_rates);
                for &r in &rates {
                    finite("params.gauge_rates", r)?;
                }
                Job::TimeAdiabatic(TimeAdiabaticParams {
                    delta: pos_or(cfg, "params.delta", d.delta)?,
                    omega: f64_or(cfg, "params.omega", d.omega)?,
                    times,
                    gauge_rates: rates,
                    eta: f64_or(cfg, "params.eta", d.eta)?,
                    tol: pos_or(cfg, "check.tol", d.tol)?,
                })
            }
            "wigner-snapshot" => {
                model_id(cfg, "two-level")?;
                let d = WignerParams::default();
                time_mode(cfg, TimeMode::Macroscopic, true)?;
                let eps = eps_list(cfg, &[d.eps], 1)?;
                if eps.len() != 1 {
                    return Err(ConfigError::field("sweep.eps", "wigner-snapshot takes a single eps"));
                }
                Job::Wigner(WignerParams {
                    model: model(cfg, d.model)?,
                    n_points: n_points(cfg, d.n_points)?,
                    eps: eps[0],
                    q0: f64_or(cfg, "params.q0", d.q0)?,
                    p0: f64_or(cfg, "params.p0", d.p0)?,
                    sigma: pos_or(cfg, "params.sigma", d.sigma)?,
                    time: f64_or(cfg, "time.value", d.time)?,
                })
            }
            other => {
                return Err(ConfigError::field(
                    "experiment",
                    format!("unknown experiment {other:?}; registered experiments: {}", registry_names()),
                ))
            }
        };
        Ok(job)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Job::ProjectorDefect(_) => "projector-defect",
            Job::UnitaryDefect(_) => "unitary-defect",
            Job::Leakage(_) => "leakage-scaling",
            Job::Egorov(_) => "egorov-scaling",
            Job::Dirac(_) => "dirac-crosscheck",
            Job::Bo(_) => "bo-crosscheck",
            Job::Bmt(_) => "bmt",
            Job::TimeAdiabatic(_) => "time-adiabatic",
            Job::Wigner(_) => "wigner-snapshot",
        }
    }

    pub fn run(&self) -> adpt_core::Result<Report> {
        match self {
            Job::ProjectorDefect(p) => projector_defect(p),
            Job::UnitaryDefect(p) => unitary_defect(p),
            Job::Leakage(p) => leakage_scaling(p),
            Job::Egorov(p) => egorov_scaling(p),
            Job::Dirac(p) => dirac_crosscheck(p),
            Job::Bo(p) => bo_crosscheck(p),
            Job::Bmt(p) => bmt(p),
            Job::TimeAdiabatic(p) => time_adiabatic(p),
            Job::Wigner(p) => wigner_snapshot(p),
        }
    }

    /// Seed of the sample set, for experiments that draw one.
    pub fn seed(&self) -> Option<u64> {
        match self {
            Job::ProjectorDefect(p) | Job::UnitaryDefect(p) => Some(p.seed),
            Job::Dirac(p) => Some(p.seed),
            Job::Bo(p) => Some(p.seed),
            _ => None,
        }
    }

    /// Time convention of the experiment's evolution, if it has one.
    pub fn time_mode(&self) -> Option<&'static str> {
        match self {
            Job::Leakage(p) => Some(mode_name(p.mode)),
            Job::Egorov(_) | Job::Bmt(_) | Job::Wigner(_) => Some("macroscopic"),
            _ => None,
        }
    }

    pub fn params_json(&self) -> Value {
        let v = match self {
            Job::ProjectorDefect(p) | Job::UnitaryDefect(p) => serde_json::to_value(p),
            Job::Leakage(p) => serde_json::to_value(p),
            Job::Egorov(p) => serde_json::to_value(p),
            Job::Dirac(p) => serde_json::to_value(p),
            Job::Bo(p) => serde_json::to_value(p),
            Job::Bmt(p) => serde_json::to_value(p),
            Job::TimeAdiabatic(p) => serde_json::to_value(p),
            Job::Wigner(p) => serde_json::to_value(p),
        };
        v.expect("parameter structs serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> Res<Job> {
        Job::from_config(&Config::parse(text).unwrap(), None)
    }

    #[test]
    fn every_registered_name_builds_with_defaults() {
        for (name, _) in REGISTRY {
            let j = job(&format!("experiment = {name}")).unwrap();
            assert_eq!(j.name(), name);
        }
    }

    #[test]
    fn unknown_name_lists_the_registry() {
        let e = job("experiment = leakage").unwrap_err().to_string();
        assert!(e.starts_with("experiment: unknown experiment"), "{e}");
        assert!(e.contains(&registry_names()), "{e}");
    }

    #[test]
    fn range_errors_name_the_field() {
        let cases = [
            ("experiment = leakage-scaling\n[grid]\nn_points = 100", "grid.n_points"),
            ("experiment = leakage-scaling\n[grid]\nn_points = 32", "grid.window"),
            ("experiment = leakage-scaling\n[sweep]\neps = 0.1, -0.05, 0.02", "sweep.eps"),
            ("experiment = leakage-scaling\n[time]\nmode = slow", "time.mode"),
            ("experiment = egorov-scaling\n[time]\nmode = microscopic", "time.mode"),
            ("experiment = projector-defect\n[samples]\ncount = 0", "samples.count"),
            ("experiment = dirac-crosscheck\n[model]\nid = two-level", "model.id"),
            ("experiment = bmt\n[params]\ndt = 20", "params.dt"),
        ];
        for (text, path) in cases {
            let e = job(text).unwrap_err();
            assert!(matches!(&e, ConfigError::Field { path: p, .. } if p == path), "{text:?} gave {e}");
        }
    }

    #[test]
    fn seed_override_applies_to_sampled_experiments() {
        let cfg = Config::parse("experiment = dirac-crosscheck\n[samples]\nseed = 3").unwrap();
        assert_eq!(Job::from_config(&cfg, None).unwrap().seed(), Some(3));
        assert_eq!(Job::from_config(&cfg, Some(9)).unwrap().seed(), Some(9));
        assert_eq!(job("experiment = bmt").unwrap().seed(), None);
    }
}
