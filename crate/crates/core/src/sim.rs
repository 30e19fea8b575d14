//! Fixed-step RK4 integration of the follower dynamics in `f64`.
//!
//! This path is deliberately independent of the exact solver: it never
//! forms an inverse and only steps the ODE forward.

use num::{BigRational, Signed, ToPrimitive};
use thiserror::Error;

use crate::containment::{steady_state, ContainmentError, LeaderLinks, LeaderStates};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("step size {dt} exceeds the stability bound {bound}")]
    UnstableStep { dt: f64, bound: f64 },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("initial state has length {got}, graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state became non-finite at t = {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Containment(#[from] ContainmentError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// `None` selects `min(0.01, stability_bound)`.
    pub dt: Option<f64>,
    pub t_end: f64,
    /// Stop once the max-norm of the state change per unit time drops below this.
    pub convergence_tol: f64,
    /// Record every `record_stride`-th step (the first and last samples are always kept).
    pub record_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: None,
            t_end: 100.0,
            convergence_tol: 1e-9,
            record_stride: 10,
        }
    }
}

/// Gershgorin-based step bound `1 / (2 (max_degree + 2))`.
pub fn stability_bound(g: &Graph) -> f64 {
    1.0 / (2.0 * (g.max_degree() as f64 + 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    Horizon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub termination: Termination,
    pub dt: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states
            .last()
            .expect("trajectory has an initial sample")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has an initial sample")
    }
}

/// Right-hand side `-(L + diag(b + d)) x + b y0 + d y1` in adjacency form.
struct Dynamics {
    neighbors: Vec<Vec<usize>>,
    diagonal: Vec<f64>,
    forcing: Vec<f64>,
}

impl Dynamics {
    fn new(g: &Graph, links: &LeaderLinks, y0: f64, y1: f64) -> Self {
        let n = g.n();
        let neighbors: Vec<Vec<usize>> = (1..=n)
            .map(|v| {
                g.neighbors(v)
                    .expect("vertex in range")
                    .into_iter()
                    .map(|w| w - 1)
                    .collect()
            })
            .collect();
        let (b, d) = (links.leader0(), links.leader1());
        let diagonal = (0..n)
            .map(|i| {
                neighbors[i].len() as f64 + f64::from(u8::from(b[i])) + f64::from(u8::from(d[i]))
            })
            .collect();
        let forcing = (0..n)
            .map(|i| if b[i] { y0 } else { 0.0 } + if d[i] { y1 } else { 0.0 })
            .collect();
        Dynamics {
            neighbors,
            diagonal,
            forcing,
        }
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let coupling: f64 = self.neighbors[i].iter().map(|&j| x[j]).sum();
            *o = coupling - self.diagonal[i] * x[i] + self.forcing[i];
        }
    }
}

fn rk4_step(f: &Dynamics, x: &[f64], dt: f64, scratch: &mut [Vec<f64>; 5]) -> Vec<f64> {
    let [k1, k2, k3, k4, tmp] = scratch;
    f.eval(x, k1);
    for i in 0..x.len() {
        tmp[i] = x[i] + 0.5 * dt * k1[i];
    }
    f.eval(tmp, k2);
    for i in 0..x.len() {
        tmp[i] = x[i] + 0.5 * dt * k2[i];
    }
    f.eval(tmp, k3);
    for i in 0..x.len() {
        tmp[i] = x[i] + dt * k3[i];
    }
    f.eval(tmp, k4);
    (0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational converts to f64")
}

pub fn simulate(
    g: &Graph,
    links: &LeaderLinks,
    x0: &[f64],
    ys: &LeaderStates,
    cfg: &SimConfig,
) -> Result<Trajectory, SimError> {
    let n = g.n();
    if x0.len() != n {
        return Err(SimError::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if links.len() != n {
        return Err(ContainmentError::DimensionMismatch {
            expected: n,
            got: links.len(),
        }
        .into());
    }
    if !g.is_connected() {
        return Err(ContainmentError::Disconnected.into());
    }
    if !links.leader0().contains(&true) {
        return Err(ContainmentError::NoLinks(0).into());
    }
    if !links.leader1().contains(&true) {
        return Err(ContainmentError::NoLinks(1).into());
    }
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(SimError::InvalidConfig(format!(
            "t_end must be positive, got {}",
            cfg.t_end
        )));
    }
    if cfg.convergence_tol.is_nan() || cfg.convergence_tol <= 0.0 {
        return Err(SimError::InvalidConfig(format!(
            "convergence_tol must be positive, got {}",
            cfg.convergence_tol
        )));
    }
    if cfg.record_stride == 0 {
        return Err(SimError::InvalidConfig(
            "record_stride must be at least 1".into(),
        ));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(SimError::InvalidConfig(
            "initial state must be finite".into(),
        ));
    }
    let bound = stability_bound(g);
    let dt = cfg.dt.unwrap_or(bound.min(0.01));
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SimError::InvalidConfig(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if dt > bound {
        return Err(SimError::UnstableStep { dt, bound });
    }

    let dynamics = Dynamics::new(g, links, to_f64(ys.y0()), to_f64(ys.y1()));
    let steps = (cfg.t_end / dt).ceil() as u64;
    let mut scratch: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
    let mut x = x0.to_vec();
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x.clone()],
        termination: Termination::Horizon,
        dt,
    };

    for step in 1..=steps {
        let t = step as f64 * dt;
        let next = rk4_step(&dynamics, &x, dt, &mut scratch);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(SimError::NonFinite(t));
        }
        let rate = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / dt;
        x = next;
        let converged = rate < cfg.convergence_tol;
        if converged || step == steps || step % cfg.record_stride as u64 == 0 {
            traj.times.push(t);
            traj.states.push(x.clone());
        }
        if converged {
            traj.termination = Termination::Converged;
            break;
        }
    }
    Ok(traj)
}

/// `(d0(t), d1(t))`: mean absolute distance of the followers from each leader.
pub fn average_distances(traj: &Trajectory, ys: &LeaderStates) -> (Vec<f64>, Vec<f64>) {
    let (y0, y1) = (to_f64(ys.y0()), to_f64(ys.y1()));
    traj.states
        .iter()
        .map(|x| {
            let n = x.len() as f64;
            (
                x.iter().map(|v| (v - y0).abs()).sum::<f64>() / n,
                x.iter().map(|v| (v - y1).abs()).sum::<f64>() / n,
            )
        })
        .unzip()
}

/// `%.12g`-style rendering, stable across platforms.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, v))
    }
}

/// CSV with header `t,x1,...,xn,d0,d1`, one row per recorded sample.
pub fn trajectory_csv(traj: &Trajectory, ys: &LeaderStates) -> String {
    let n = traj.states.first().map_or(0, Vec::len);
    let (d0, d1) = average_distances(traj, ys);
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",x{i}"));
    }
    out.push_str(",d0,d1\n");
    for (idx, (t, x)) in traj.times.iter().zip(&traj.states).enumerate() {
        let fields: Vec<String> = std::iter::once(*t)
            .chain(x.iter().copied())
            .chain([d0[idx], d1[idx]])
            .map(|v| format_significant(v, 12))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Largest entrywise gap between the simulated terminal state and the exact limit.
pub fn steady_state_error(
    g: &Graph,
    links: &LeaderLinks,
    ys: &LeaderStates,
    traj: &Trajectory,
) -> Result<f64, SimError> {
    let exact = steady_state(g, links, ys)?;
    Ok(exact
        .iter()
        .zip(traj.final_state())
        .map(|(e, s)| (to_f64(e) - s).abs())
        .fold(0.0, f64::max))
}

/// Residuals of `lim (x_i - y0) = lim (y1 - x_j)` for links `b = e_i`, `d = e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryResidual {
    /// Exact, from the steady-state weights.
    pub analytic: BigRational,
    /// From the simulated terminal state, started at `x0 = 0`.
    pub simulated: f64,
    pub termination: Termination,
}

pub fn symmetry_residual(
    g: &Graph,
    i: usize,
    j: usize,
    ys: &LeaderStates,
    cfg: &SimConfig,
) -> Result<SymmetryResidual, SimError> {
    let links = LeaderLinks::from_vertices(g.n(), &[i], &[j])?;
    let exact = steady_state(g, &links, ys)?;
    let analytic = ((&exact[i - 1] - ys.y0()) - (ys.y1() - &exact[j - 1])).abs();
    let traj = simulate(g, &links, &vec![0.0; g.n()], ys, cfg)?;
    let x = traj.final_state();
    let (y0, y1) = (to_f64(ys.y0()), to_f64(ys.y1()));
    Ok(SymmetryResidual {
        analytic,
        simulated: ((x[i - 1] - y0) - (y1 - x[j - 1])).abs(),
        termination: traj.termination,
    })
}
