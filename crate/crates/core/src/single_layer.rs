//! Direct solver for a single homogeneous layer on `(0, L)`.
//!
//! The boundary trace `G(t) = u(L, t)` solves the delay equation
//!
//! ```text
//! G(t) = c/(c+1) U0(L+t) - 2/(c+1) * sum_{n=1}^{[c t / 2L]} G(t - 2nL/c)
//! ```
//!
//! and is available through three independent routes: the closed form
//! ([`g_closed_form`]), memoized evaluation of the recursion itself
//! ([`g_recursive`]) and the interval-by-interval coefficient build-up
//! ([`g_sectional`]). The exterior field is the free-space d'Alembert
//! formula corrected by `G`; the interior field is a finite sum of shifted
//! copies of `G`.

use crate::error::{Error, Result};
use crate::lattice::lattice_floor;
use crate::model::{check_speed, Event, EventSeries, InitialPulse, Scene, TimeSeries};

/// Default cap on the number of lattice steps `g_recursive` will expand.
pub const DEFAULT_RECURSION_CAP: usize = 10_000;

/// Name of a boundary function of the coupled problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceTag {
    /// Dirichlet trace of the exterior problem at `x = L`.
    G,
    /// Dirichlet trace of the interior problem at `x = L`.
    H,
    /// Neumann trace of the exterior problem.
    F,
    /// Neumann trace of the interior problem.
    Q,
    G0,
    G1,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceData {
    Sampled(TimeSeries),
    Events(EventSeries),
}

/// A boundary function, sampled on a grid or as an impulse train.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    pub tag: TraceTag,
    pub data: TraceData,
}

fn check_params(length: f64, speed: f64) -> Result<()> {
    check_speed(speed)?;
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidScene(format!("length {length} must be positive")));
    }
    Ok(())
}

/// `U0` restricted to its support `(L, inf)`.
fn u0(pulse: &InitialPulse, length: f64, x: f64) -> f64 {
    if x > length {
        pulse.eval(x)
    } else {
        0.0
    }
}

/// Closed-form boundary trace
/// `G(t) = c/(c+1) U0(L+t) - 2c/(c+1)^2 sum_{n>=0} ((c-1)/(c+1))^n U0(L+t-2(n+1)L/c)`.
pub fn g_closed_form(pulse: &InitialPulse, length: f64, speed: f64, t: f64) -> Result<f64> {
    check_params(length, speed)?;
    Ok(closed_form(pulse, length, speed, t))
}

fn closed_form(pulse: &InitialPulse, length: f64, speed: f64, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let c = speed;
    let period = 2.0 * length / c;
    let ratio = (c - 1.0) / (c + 1.0);
    let terms = lattice_floor(c * t / (2.0 * length));
    let mut sum = 0.0;
    let mut power = 1.0;
    for n in 0..terms.max(0) {
        sum += power * u0(pulse, length, length + t - (n + 1) as f64 * period);
        power *= ratio;
    }
    c / (c + 1.0) * u0(pulse, length, length + t) - 2.0 * c / ((c + 1.0) * (c + 1.0)) * sum
}

/// Evaluates `G(t)` through the delay recursion, memoized on the lattice
/// `t - k 2L/c` by the integer `k`.
pub fn g_recursive(pulse: &InitialPulse, length: f64, speed: f64, t: f64) -> Result<f64> {
    g_recursive_with_cap(pulse, length, speed, t, DEFAULT_RECURSION_CAP)
}

pub fn g_recursive_with_cap(
    pulse: &InitialPulse,
    length: f64,
    speed: f64,
    t: f64,
    cap: usize,
) -> Result<f64> {
    check_params(length, speed)?;
    if t < 0.0 {
        return Ok(0.0);
    }
    let c = speed;
    let period = 2.0 * length / c;
    let depth = lattice_floor(c * t / (2.0 * length)).max(0) as usize;
    if depth > cap {
        return Err(Error::HorizonExceeded {
            t,
            horizon: cap as f64 * period,
        });
    }
    // memo[k] = G(t - k * period); G(t - k period) needs memo[k+1..=depth].
    let lead = c / (c + 1.0);
    let feedback = 2.0 / (c + 1.0);
    let mut memo = vec![0.0; depth + 1];
    let mut tail = 0.0;
    for k in (0..=depth).rev() {
        let s = t - k as f64 * period;
        memo[k] = lead * u0(pulse, length, length + s) - feedback * tail;
        tail += memo[k];
    }
    Ok(memo[0])
}

/// Expansion coefficients `a_j` of `G(t) = sum_j a_j U0(L + t - j 2L/c)`,
/// built interval by interval: on `(2NL/c, 2(N+1)L/c)` the continuity
/// condition gives `a_0 = c/(1+c)` and `a_j = -2/(1+c) sum_{n=1}^{j} a_{j-n}`.
pub fn sectional_coefficients(speed: f64, count: usize) -> Vec<f64> {
    let mut coefficients = Vec::with_capacity(count);
    let mut running = 0.0;
    for j in 0..count {
        let a = if j == 0 {
            speed / (1.0 + speed)
        } else {
            -2.0 / (1.0 + speed) * running
        };
        running += a;
        coefficients.push(a);
    }
    coefficients
}

/// Sectional evaluation: locate the interval `(2(N+1)L/c, 2(N+2)L/c)`
/// containing `t` and sum the `N + 2` coefficients active there.
pub fn g_sectional(pulse: &InitialPulse, length: f64, speed: f64, t: f64) -> Result<f64> {
    check_params(length, speed)?;
    if t < 0.0 {
        return Ok(0.0);
    }
    let period = 2.0 * length / speed;
    let interval = lattice_floor(speed * t / (2.0 * length)) - 1;
    let count = (interval + 2).max(1) as usize;
    let coefficients = sectional_coefficients(speed, count);
    Ok(coefficients
        .iter()
        .enumerate()
        .map(|(j, a)| a * u0(pulse, length, length + t - j as f64 * period))
        .sum())
}

fn single_layer_of(scene: &Scene) -> Result<(f64, f64)> {
    if scene.layer_count() != 1 {
        return Err(Error::Unsupported(format!(
            "single-layer solver called with {} layers",
            scene.layer_count()
        )));
    }
    let layer = scene.layers()[0];
    Ok((layer.length(), layer.speed()))
}

/// Exterior field `u(x, t)` for `x >= L` from the boundary trace `g`.
pub(crate) fn exterior_field(
    pulse: &InitialPulse,
    length: f64,
    x: f64,
    t: f64,
    g: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let incoming = 0.5 * u0(pulse, length, x + t);
    if x > length + t {
        Ok(incoming + 0.5 * u0(pulse, length, x - t))
    } else {
        Ok(incoming + g(t - x + length)? - 0.5 * u0(pulse, length, t - x + 2.0 * length))
    }
}

/// Field `W(x, t)` of a single-layer scene: the d'Alembert-type exterior
/// formula for `x > L` and the two-sum interior formula for `0 <= x <= L`.
pub fn field_eval(scene: &Scene, pulse: &InitialPulse, x: f64, t: f64) -> Result<f64> {
    let (length, speed) = single_layer_of(scene)?;
    if !(x >= 0.0 && t >= 0.0) {
        return Err(Error::OutOfDomain { x, t });
    }
    let g = |s: f64| Ok(closed_form(pulse, length, speed, s));
    if x > length {
        return exterior_field(pulse, length, x, t, g);
    }
    if x == length {
        return g(t);
    }
    let c = speed;
    let mut value = 0.0;
    let upper = lattice_floor((c * t + x - length) / (2.0 * length));
    for n in 0..=upper.max(-1) {
        value += closed_form(pulse, length, c, t + (x - (2 * n + 1) as f64 * length) / c);
    }
    let upper = lattice_floor((c * t - x - length) / (2.0 * length));
    for n in 0..=upper.max(-1) {
        value -= closed_form(pulse, length, c, t - (x + (2 * n + 1) as f64 * length) / c);
    }
    Ok(value)
}

/// The full field of a single-layer scene with its pulse.
#[derive(Debug, Clone)]
pub struct FieldSolution {
    scene: Scene,
    pulse: InitialPulse,
}

impl FieldSolution {
    pub fn new(scene: Scene, pulse: InitialPulse) -> Result<Self> {
        single_layer_of(&scene)?;
        Ok(Self { scene, pulse })
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        field_eval(&self.scene, &self.pulse, x, t)
    }

    pub fn boundary(&self, t: f64) -> f64 {
        let layer = self.scene.layers()[0];
        closed_form(&self.pulse, layer.length(), layer.speed(), t)
    }
}

/// Detector value `m(t) = u(L + D, t)`.
pub fn measure_at(scene: &Scene, pulse: &InitialPulse, t: f64) -> Result<f64> {
    let (length, speed) = single_layer_of(scene)?;
    if t < 0.0 {
        return Err(Error::OutOfDomain {
            x: scene.detector_position(),
            t,
        });
    }
    let d = scene.detector_offset();
    let u = |x: f64| u0(pulse, length, x);
    if t <= d {
        return Ok(0.5 * u(length + d + t) + 0.5 * u(length + d - t));
    }
    let c = speed;
    let period = 2.0 * length / c;
    let ratio = (c - 1.0) / (c + 1.0);
    let terms = lattice_floor(c * (t - d) / (2.0 * length));
    let mut sum = 0.0;
    let mut weight = 1.0 / ((c + 1.0) * (c + 1.0));
    for n in 0..terms.max(0) {
        sum += weight * u(length - d - (n + 1) as f64 * period + t);
        weight *= ratio;
    }
    Ok(0.5 * u(length + d + t) + 0.5 * ratio * u(length - d + t) - 2.0 * c * sum)
}

/// Samples `m(t)` at `t_start + i dt`, `i = 0..count`.
pub fn measure(
    scene: &Scene,
    pulse: &InitialPulse,
    t_start: f64,
    dt: f64,
    count: usize,
) -> Result<TimeSeries> {
    let values = (0..count)
        .map(|i| measure_at(scene, pulse, t_start + i as f64 * dt))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(t_start, dt, values)
}

/// Samples `G` on a uniform grid.
pub fn sample_boundary_trace(
    pulse: &InitialPulse,
    length: f64,
    speed: f64,
    t_start: f64,
    dt: f64,
    count: usize,
) -> Result<BoundaryTrace> {
    check_params(length, speed)?;
    let values = (0..count)
        .map(|i| closed_form(pulse, length, speed, t_start + i as f64 * dt))
        .collect();
    Ok(BoundaryTrace {
        tag: TraceTag::G,
        data: TraceData::Sampled(TimeSeries::new(t_start, dt, values)?),
    })
}

/// Amplitude of the `k`-th delta-pulse event at the detector:
/// `(c-1)/(2(c+1))` for `k = 0` and `-2c (c-1)^(k-1) / (c+1)^(k+1)` after.
pub fn delta_amplitude(speed: f64, k: usize) -> f64 {
    let c = speed;
    if k == 0 {
        return 0.5 * (c - 1.0) / (c + 1.0);
    }
    -2.0 * c * (c - 1.0).powi(k as i32 - 1) / (c + 1.0).powi(k as i32 + 1)
}

/// Delta-pulse peak table for a source at the detector: events at
/// `2D + k 2L/c`, `k = 0..=k_max`.
pub fn delta_peaks_single(speed: f64, length: f64, offset: f64, k_max: usize) -> Result<EventSeries> {
    check_params(length, speed)?;
    let period = 2.0 * length / speed;
    let events = (0..=k_max)
        .map(|k| Event {
            time: 2.0 * offset + k as f64 * period,
            amplitude: delta_amplitude(speed, k),
        })
        .collect();
    EventSeries::new(events)
}

/// Boundary values `G^(k) = G(D + k 2L/c)` for a delta pulse at `L + D`.
pub fn delta_boundary_events(speed: f64, length: f64, offset: f64, k_max: usize) -> Result<BoundaryTrace> {
    check_params(length, speed)?;
    let period = 2.0 * length / speed;
    let events = (0..=k_max)
        .map(|k| Event {
            time: offset + k as f64 * period,
            amplitude: if k == 0 {
                speed / (speed + 1.0)
            } else {
                delta_amplitude(speed, k)
            },
        })
        .collect();
    Ok(BoundaryTrace {
        tag: TraceTag::G,
        data: TraceData::Events(EventSeries::new(events)?),
    })
}
