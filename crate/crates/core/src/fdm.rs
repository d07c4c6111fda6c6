//! Finite-difference reference solver for `u_tt = c(x)^2 u_xx`.
//!
//! Explicit second-order central scheme on `[0, x_max]` with `u = 0` at both
//! ends. The right end sits far enough out that nothing reflected from it
//! reaches the detector before the horizon.

use crate::error::{Error, Result};
use crate::lattice::LATTICE_GUARD;
use crate::model::{InitialPulse, Scene, TimeSeries};
use crate::multi_layer::{self, MarchStep};
use serde::{Deserialize, Serialize};

/// Extra room beyond the causal cone of the source and the detector.
pub const DEFAULT_MARGIN: f64 = 2.0;

/// Courant number used when no time step is given.
pub const DEFAULT_COURANT: f64 = 0.9;

/// Coarsest spatial step of the default refinement study.
pub const DEFAULT_BASE_DX: f64 = 8e-3;

/// Spatial grid with per-node speeds.
#[derive(Debug, Clone, PartialEq)]
pub struct FdmGrid {
    pub dx: f64,
    pub dt: f64,
    pub x_max: f64,
    pub speeds: Vec<f64>,
}

impl FdmGrid {
    /// Grid over `[0, x_max]` with speeds from `speed_at`.
    pub fn new(dx: f64, dt: f64, x_max: f64, speed_at: impl Fn(f64) -> f64) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidInput(format!("spatial step {dx} must be positive")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidInput(format!("time step {dt} must be positive")));
        }
        if !(x_max.is_finite() && x_max > 2.0 * dx) {
            return Err(Error::InvalidInput(format!("domain end {x_max} too small")));
        }
        let nodes = (x_max / dx).ceil() as usize + 1;
        let speeds: Vec<f64> = (0..nodes).map(|i| speed_at(i as f64 * dx)).collect();
        let c_max = speeds.iter().copied().fold(0.0, f64::max);
        let courant = dt * c_max / dx;
        if courant > 1.0 + 1e-12 {
            return Err(Error::UnstableStep { courant });
        }
        Ok(Self {
            dx,
            dt,
            x_max: (nodes - 1) as f64 * dx,
            speeds,
        })
    }

    /// Grid for a layered scene: nodes inside a layer take its speed, the
    /// exterior speed 1; interface nodes follow `rule`.
    pub fn for_scene(
        scene: &Scene,
        horizon: f64,
        dx: f64,
        dt: Option<f64>,
        rule: InterfaceRule,
    ) -> Result<Self> {
        let x_max = scene.source_position().max(scene.detector_position()) + horizon + DEFAULT_MARGIN;
        let speeds = scene.speeds();
        let speed_at = |x: f64| scene.layer_at(x).map_or(1.0, |j| speeds[j]);
        let mut grid = Self::new(dx, dt.unwrap_or(DEFAULT_COURANT * dx), x_max, speed_at)?;
        if rule == InterfaceRule::HarmonicSquare {
            let mut x = scene.total_length();
            for layer in scene.layers() {
                let node = x / dx;
                if (node - node.round()).abs() < LATTICE_GUARD {
                    let (right, left) = (speed_at(x), layer.speed());
                    let i = node.round() as usize;
                    grid.speeds[i] = (2.0 / (1.0 / (left * left) + 1.0 / (right * right))).sqrt();
                }
                x -= layer.length();
            }
        }
        Ok(grid)
    }

    pub fn node_count(&self) -> usize {
        self.speeds.len()
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }
}

/// Speed assigned to a node sitting exactly on an interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfaceRule {
    /// The speed of the medium on the right.
    RightLimit,
    /// `c^2 = 2 / (1/c_left^2 + 1/c_right^2)`. Since `u` and `u_x` are
    /// continuous and `u_tt = c^2 u_xx` on both sides, the three-point
    /// Laplacian at the node approximates the mean of the one-sided `u_xx`;
    /// this weight makes the node update consistent with `u_tt`.
    #[default]
    HarmonicSquare,
}

/// Field at one time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
}

/// Output of [`fdm_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct FdmSolution {
    pub grid: FdmGrid,
    /// Field every `snapshot_every` steps (always including `t = 0`).
    pub snapshots: Vec<Snapshot>,
    /// `u(probe, t)` at every time level.
    pub probe: TimeSeries,
    /// Discrete energy between consecutive levels,
    /// `sum_i (u^{n+1}_i - u^n_i)^2/dt^2 + c_i^2 (u^n_{i+1} - u^n_i)(u^{n+1}_{i+1} - u^{n+1}_i)/dx^2`.
    pub energy: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdmOptions {
    pub dx: f64,
    /// Defaults to `DEFAULT_COURANT * dx`.
    pub dt: Option<f64>,
    /// Store the field every this many steps; `None` keeps no snapshots
    /// except the initial one.
    pub snapshot_every: Option<usize>,
    pub interface: InterfaceRule,
}

impl FdmOptions {
    pub fn new(dx: f64) -> Self {
        Self {
            dx,
            dt: None,
            snapshot_every: None,
            interface: InterfaceRule::default(),
        }
    }
}

fn probe_value(grid: &FdmGrid, u: &[f64], x: f64) -> f64 {
    let s = x / grid.dx;
    let i = s.floor() as usize;
    if i + 1 >= u.len() {
        return u[u.len() - 1];
    }
    let w = s - i as f64;
    u[i] + w * (u[i + 1] - u[i])
}

/// Runs the scheme on an arbitrary grid from `u(x, 0) = initial(x)`,
/// `u_t(x, 0) = 0`, recording `u(probe_x, t)`.
pub fn fdm_run(
    grid: FdmGrid,
    initial: impl Fn(f64) -> f64,
    horizon: f64,
    probe_x: f64,
    snapshot_every: Option<usize>,
) -> Result<FdmSolution> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidHorizon(horizon));
    }
    if !(0.0..=grid.x_max).contains(&probe_x) {
        return Err(Error::OutOfDomain { x: probe_x, t: 0.0 });
    }
    let n = grid.node_count();
    let (dx, dt) = (grid.dx, grid.dt);
    let gain: Vec<f64> = grid.speeds.iter().map(|c| (dt * c / dx).powi(2)).collect();
    let steps = (horizon / dt - LATTICE_GUARD).ceil() as usize;

    let mut previous: Vec<f64> = (0..n).map(|i| initial(grid.x(i))).collect();
    previous[0] = 0.0;
    previous[n - 1] = 0.0;
    let mut current = vec![0.0; n];
    for i in 1..n - 1 {
        let lap = previous[i + 1] - 2.0 * previous[i] + previous[i - 1];
        current[i] = previous[i] + 0.5 * gain[i] * lap;
    }
    let mut next = vec![0.0; n];

    let energy_of = |a: &[f64], b: &[f64]| -> f64 {
        let mut e = 0.0;
        for i in 0..n - 1 {
            let vt = (b[i] - a[i]) / dt;
            let c = grid.speeds[i];
            e += vt * vt + c * c * (a[i + 1] - a[i]) * (b[i + 1] - b[i]) / (dx * dx);
        }
        e
    };

    let mut probe = Vec::with_capacity(steps + 1);
    let mut energy = Vec::with_capacity(steps);
    let mut snapshots = vec![Snapshot {
        t: 0.0,
        u: previous.clone(),
    }];
    probe.push(probe_value(&grid, &previous, probe_x));
    if steps >= 1 {
        probe.push(probe_value(&grid, &current, probe_x));
        energy.push(energy_of(&previous, &current));
        if snapshot_every == Some(1) {
            snapshots.push(Snapshot {
                t: dt,
                u: current.clone(),
            });
        }
    }
    for step in 2..=steps {
        for i in 1..n - 1 {
            let lap = current[i + 1] - 2.0 * current[i] + current[i - 1];
            next[i] = 2.0 * current[i] - previous[i] + gain[i] * lap;
        }
        energy.push(energy_of(&current, &next));
        std::mem::swap(&mut previous, &mut current);
        std::mem::swap(&mut current, &mut next);
        probe.push(probe_value(&grid, &current, probe_x));
        if let Some(every) = snapshot_every {
            if every > 0 && step % every == 0 {
                snapshots.push(Snapshot {
                    t: step as f64 * dt,
                    u: current.clone(),
                });
            }
        }
    }
    let probe = TimeSeries::new(0.0, dt, probe)?;
    Ok(FdmSolution {
        grid,
        snapshots,
        probe,
        energy,
    })
}

/// Finite-difference solution of a layered scene, probed at the detector.
pub fn fdm_solve(
    scene: &Scene,
    pulse: &InitialPulse,
    horizon: f64,
    options: FdmOptions,
) -> Result<FdmSolution> {
    if pulse.is_delta() {
        return Err(Error::Unsupported(
            "the finite-difference solver needs a continuous pulse".into(),
        ));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidHorizon(horizon));
    }
    let grid = FdmGrid::for_scene(scene, horizon, options.dx, options.dt, options.interface)?;
    fdm_run(
        grid,
        |x| scene.initial_value(pulse, x),
        horizon,
        scene.detector_position(),
        options.snapshot_every,
    )
}

/// Error norms between two traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceError {
    pub l_inf: f64,
    pub l2: f64,
}

/// Compares `b` against `a` on `a`'s samples inside the common time range,
/// resampling `b` linearly. `l2 = sqrt(dt_a * sum e^2)`.
pub fn compare_traces(a: &TimeSeries, b: &TimeSeries) -> Result<TraceError> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::NoOverlap);
    }
    let start = a.t_start.max(b.t_start);
    let end = a.t_end().min(b.t_end());
    let guard = LATTICE_GUARD * a.dt.min(b.dt);
    if start > end + guard {
        return Err(Error::NoOverlap);
    }
    let mut l_inf: f64 = 0.0;
    let mut sum = 0.0;
    let mut used = 0;
    for (t, va) in a.times().zip(&a.values) {
        if t < start - guard || t > end + guard {
            continue;
        }
        if let Some(vb) = b.interpolate(t) {
            let e = va - vb;
            l_inf = l_inf.max(e.abs());
            sum += e * e;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::NoOverlap);
    }
    Ok(TraceError {
        l_inf,
        l2: (a.dt * sum).sqrt(),
    })
}

/// Analytic detector trace for one or two layers on a given time grid.
pub fn analytic_trace(
    scene: &Scene,
    pulse: &InitialPulse,
    t_start: f64,
    dt: f64,
    count: usize,
) -> Result<TimeSeries> {
    multi_layer::continuous_trace(scene, pulse, t_start, dt, count, MarchStep::Auto)
}

/// One refinement level of [`convergence_study`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelError {
    pub dx: f64,
    pub dt: f64,
    pub l_inf: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub levels: Vec<LevelError>,
    /// Observed order of the `l_inf` error between consecutive levels.
    pub orders: Vec<f64>,
}

impl ConvergenceReport {
    pub fn is_monotone(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].l_inf < w[0].l_inf)
    }

    pub fn min_order(&self) -> Option<f64> {
        self.orders.iter().copied().reduce(f64::min)
    }
}

/// Refinement levels `base_dx / 2^k`, `k < levels`.
pub fn refinement_levels(base_dx: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| base_dx / f64::powi(2.0, k as i32)).collect()
}

/// Runs the finite-difference solver at each `dx` (with `dt = 0.9 dx`) and
/// compares its detector trace to the analytic one on the same time grid.
pub fn convergence_study(
    scene: &Scene,
    pulse: &InitialPulse,
    horizon: f64,
    dx_levels: &[f64],
    interface: InterfaceRule,
) -> Result<ConvergenceReport> {
    let mut levels = Vec::with_capacity(dx_levels.len());
    for &dx in dx_levels {
        let mut options = FdmOptions::new(dx);
        options.interface = interface;
        let solution = fdm_solve(scene, pulse, horizon, options)?;
        let numeric = &solution.probe;
        let exact = analytic_trace(scene, pulse, numeric.t_start, numeric.dt, numeric.len())?;
        let err = compare_traces(&exact, numeric)?;
        levels.push(LevelError {
            dx,
            dt: numeric.dt,
            l_inf: err.l_inf,
            l2: err.l2,
        });
    }
    let orders = levels
        .windows(2)
        .map(|w| (w[0].l_inf / w[1].l_inf).ln() / (w[0].dx / w[1].dx).ln())
        .collect();
    Ok(ConvergenceReport { levels, orders })
}
