//! Direct problem for two and more layers.
//!
//! For two layers the boundary traces `G0 = u(L, .)` and `G1 = u(l2, .)`
//! satisfy a coupled system of delay equations whose right-hand sides only
//! involve strictly earlier times, so they can be marched forward in time
//! ([`march_double_layer`]). For a delta-like pulse the same system is
//! solved exactly on the index lattice `D + k1 l1/c1 + k2 l2/c2`
//! ([`solve_double_lattice`]), which separates every reflection path even
//! when travel times coincide.
//!
//! For any number of layers the major-peak schedule and amplitudes follow
//! from [`peak_times`] and [`reflection_chain`].

use crate::error::{Error, Result};
use crate::lattice::{commensurate_step, lattice_floor, LATTICE_GUARD};
use crate::model::{check_speed, Event, EventSeries, InitialPulse, Scene, TimeSeries};
use crate::single_layer::{self, delta_amplitude, exterior_field};

/// Event amplitudes below this magnitude are dropped from synthesized trains.
pub const AMPLITUDE_FLOOR: f64 = 1e-14;

/// Events closer than this are merged into one.
pub const EVENT_MERGE_TOLERANCE: f64 = 1e-9;

/// Default number of time steps per smallest delay.
pub const DEFAULT_STEPS_PER_DELAY: usize = 64;

/// Largest lattice (cells) the exact double-layer solver will allocate.
pub const MAX_LATTICE_CELLS: usize = 16_000_000;

/// Arrival times of the `N + 1` major peaks,
/// `t_{n+1} = t_1 + sum_{j<=n} 2 l_j / c_j` with `t_1 = 2D` when the source
/// sits at the detector (in general `t_1 = x0 - L + D`).
pub fn peak_times(scene: &Scene) -> Vec<f64> {
    let mut times = Vec::with_capacity(scene.layer_count() + 1);
    let mut t = scene.first_reflection_time();
    times.push(t);
    for layer in scene.layers() {
        t += 2.0 * layer.transit_time();
        times.push(t);
    }
    times
}

/// Round-trip transmission products `K_0 = 1`,
/// `K_m = prod_{j<=m} 4 c_{j-1} c_j / (c_j + c_{j-1})^2` with `c_0 = 1`.
pub fn transmission_products(speeds: &[f64]) -> Vec<f64> {
    let mut products = Vec::with_capacity(speeds.len() + 1);
    let mut k = 1.0;
    let mut previous = 1.0;
    products.push(k);
    for &c in speeds {
        k *= 4.0 * previous * c / ((c + previous) * (c + previous));
        products.push(k);
        previous = c;
    }
    products
}

/// Model amplitude of the `n`-th major peak given `K_{n-1}` and the speeds on
/// both sides of interface `n`.
pub fn chain_amplitude(product: f64, upper: f64, lower: f64) -> f64 {
    product * (lower - upper) / (2.0 * (lower + upper))
}

/// Major-peak amplitudes `rho_1..rho_{N+1}`:
/// `rho_n = K_{n-1} (c_n - c_{n-1}) / (2 (c_n + c_{n-1}))` for interfaces
/// inside and at the edge of the medium, and `rho_{N+1} = -K_N / 2` for the
/// reflection at the wall.
pub fn reflection_chain(speeds: &[f64]) -> Result<Vec<f64>> {
    for &c in speeds {
        check_speed(c)?;
    }
    let products = transmission_products(speeds);
    let mut chain = Vec::with_capacity(speeds.len() + 1);
    let mut previous = 1.0;
    for (n, &c) in speeds.iter().enumerate() {
        chain.push(chain_amplitude(products[n], previous, c));
        previous = c;
    }
    chain.push(-0.5 * products[speeds.len()]);
    Ok(chain)
}

/// Amplitudes `G0^(2k,0)`, `k = 1..=k_max`, of the echoes bouncing `k` times
/// inside the first of two layers.
pub fn minor_peak_amplitudes(c1: f64, c2: f64, k_max: usize) -> Result<Vec<f64>> {
    check_speed(c1)?;
    check_speed(c2)?;
    Ok((1..=k_max)
        .map(|k| {
            let k = k as i32;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            2.0 * c1 * sign * (c1 - 1.0).powi(k - 1) * (c2 - c1).powi(k)
                / ((c1 + 1.0).powi(k + 1) * (c2 + c1).powi(k))
        })
        .collect())
}

fn two_layers(scene: &Scene) -> Result<(f64, f64, f64, f64)> {
    if scene.layer_count() != 2 {
        return Err(Error::Unsupported(format!(
            "double-layer solver called with {} layers",
            scene.layer_count()
        )));
    }
    let (a, b) = (scene.layers()[0], scene.layers()[1]);
    Ok((a.length(), a.speed(), b.length(), b.speed()))
}

/// The `G0^(2k,0)` family at the detector: times `t_1 + k 2 l1/c1`.
pub fn minor_peaks_double(scene: &Scene, k_max: usize) -> Result<EventSeries> {
    let (l1, c1, _, c2) = two_layers(scene)?;
    let amplitudes = minor_peak_amplitudes(c1, c2, k_max)?;
    let t1 = scene.first_reflection_time();
    let round_trip = 2.0 * l1 / c1;
    EventSeries::new(
        amplitudes
            .into_iter()
            .enumerate()
            .map(|(i, amplitude)| Event {
                time: t1 + (i + 1) as f64 * round_trip,
                amplitude,
            })
            .collect(),
    )
}

/// Major peaks of a delta-pulse measurement, optionally with the minor
/// `G0^(2k,0)` family of a double layer.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPeakTable {
    pub times: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub minor: Option<EventSeries>,
}

pub fn delta_peak_table(scene: &Scene, minor_count: usize) -> Result<DeltaPeakTable> {
    let minor = if scene.layer_count() == 2 && minor_count > 0 {
        Some(minor_peaks_double(scene, minor_count)?)
    } else {
        None
    };
    Ok(DeltaPeakTable {
        times: peak_times(scene),
        amplitudes: reflection_chain(&scene.speeds())?,
        minor,
    })
}

/// Exact delta-pulse boundary values of the double layer on the index
/// lattice: `g0(k1, k2)` is the contribution to `G0` arriving
/// `k1 l1/c1 + k2 l2/c2` after the first hit of `x = L`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeAmplitudes {
    k1_max: usize,
    k2_max: usize,
    g0: Vec<f64>,
    g1: Vec<f64>,
}

impl LatticeAmplitudes {
    fn index(&self, k1: i64, k2: i64) -> Option<usize> {
        if k1 < 0 || k2 < 0 || k1 as usize > self.k1_max || k2 as usize > self.k2_max {
            None
        } else {
            Some(k1 as usize * (self.k2_max + 1) + k2 as usize)
        }
    }

    pub fn g0(&self, k1: i64, k2: i64) -> f64 {
        self.index(k1, k2).map_or(0.0, |i| self.g0[i])
    }

    pub fn g1(&self, k1: i64, k2: i64) -> f64 {
        self.index(k1, k2).map_or(0.0, |i| self.g1[i])
    }

    pub fn k1_max(&self) -> usize {
        self.k1_max
    }

    pub fn k2_max(&self) -> usize {
        self.k2_max
    }

    /// Non-zero `G0` lattice entries as `(k1, k2, amplitude)`.
    pub fn g0_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.k1_max).flat_map(move |k1| {
            (0..=self.k2_max).filter_map(move |k2| {
                let v = self.g0[k1 * (self.k2_max + 1) + k2];
                (v != 0.0).then_some((k1, k2, v))
            })
        })
    }
}

/// Solves the double-layer delay system for a unit delta at the first
/// arrival, treating `l1/c1` and `l2/c2` as independent delays.
///
/// Entries are produced in increasing `k1`, then `k2`; every right-hand-side
/// term refers to a smaller `k1` or, for the wall echo of `G1`, the same
/// `k1` with a smaller `k2`.
pub fn solve_double_lattice(c1: f64, c2: f64, k1_max: usize, k2_max: usize) -> Result<LatticeAmplitudes> {
    check_speed(c1)?;
    check_speed(c2)?;
    let cells = (k1_max + 1).saturating_mul(k2_max + 1);
    if cells > MAX_LATTICE_CELLS {
        return Err(Error::Unsupported(format!(
            "lattice of {cells} cells exceeds the limit of {MAX_LATTICE_CELLS}"
        )));
    }
    let lead = c1 / (c1 + 1.0);
    let self_feedback = 2.0 / (c1 + 1.0);
    let to_inner = 2.0 * c2 / (c2 + c1);
    let inner_wall = 2.0 * c1 / (c2 + c1);
    let width = k2_max + 1;
    let mut g0 = vec![0.0; cells];
    let mut g1 = vec![0.0; cells];
    // Stride-2 running sums: along k1 for g0 and g1, along k2 for g1.
    let mut g0_k1_sum = vec![0.0; cells];
    let mut g1_k1_sum = vec![0.0; cells];
    let mut g1_k2_sum = vec![0.0; cells];
    let at = |k1: usize, k2: usize| k1 * width + k2;
    for k1 in 0..=k1_max {
        for k2 in 0..=k2_max {
            let i = at(k1, k2);
            let earlier_g0 = if k1 >= 2 { g0_k1_sum[at(k1 - 2, k2)] } else { 0.0 };
            let odd_g1 = if k1 >= 1 { g1_k1_sum[at(k1 - 1, k2)] } else { 0.0 };
            let source = if k1 == 0 && k2 == 0 { lead } else { 0.0 };
            g0[i] = source - self_feedback * earlier_g0 + self_feedback * odd_g1;

            let odd_g0 = if k1 >= 1 { g0_k1_sum[at(k1 - 1, k2)] } else { 0.0 };
            let earlier_g1 = if k1 >= 2 { g1_k1_sum[at(k1 - 2, k2)] } else { 0.0 };
            let wall_g1 = if k2 >= 2 { g1_k2_sum[at(k1, k2 - 2)] } else { 0.0 };
            g1[i] = to_inner * odd_g0 - to_inner * earlier_g1 - inner_wall * wall_g1;

            g0_k1_sum[i] = g0[i] + if k1 >= 2 { g0_k1_sum[at(k1 - 2, k2)] } else { 0.0 };
            g1_k1_sum[i] = g1[i] + if k1 >= 2 { g1_k1_sum[at(k1 - 2, k2)] } else { 0.0 };
            g1_k2_sum[i] = g1[i] + if k2 >= 2 { g1_k2_sum[at(k1, k2 - 2)] } else { 0.0 };
        }
    }
    Ok(LatticeAmplitudes {
        k1_max,
        k2_max,
        g0,
        g1,
    })
}

/// Time-step selection for [`march_double_layer`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarchStep {
    /// Smallest delay divided by [`DEFAULT_STEPS_PER_DELAY`].
    Auto,
    Fixed(f64),
    /// Largest step dividing every delay (and the arrival time of a delta
    /// pulse), so no interpolation is needed. Fails for incommensurate
    /// delays.
    ExactLattice,
}

/// Sampled `G0`, `G1` of a double layer on a shared uniform grid.
#[derive(Debug, Clone)]
pub struct CoupledTraces {
    scene: Scene,
    pulse: InitialPulse,
    dt: f64,
    g0: Vec<f64>,
    g1: Vec<f64>,
}

/// Linear interpolation on a uniform grid starting at zero, snapping to grid
/// points; zero for negative times.
fn sample(values: &[f64], dt: f64, s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    let r = s / dt;
    let nearest = r.round();
    if (r - nearest).abs() < LATTICE_GUARD * nearest.max(1.0) {
        return values.get(nearest as usize).copied().unwrap_or(0.0);
    }
    let j = r.floor() as usize;
    let w = r - j as f64;
    match (values.get(j), values.get(j + 1)) {
        (Some(a), Some(b)) => a + w * (b - a),
        (Some(a), None) => *a,
        _ => 0.0,
    }
}

impl CoupledTraces {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        (self.g0.len() - 1) as f64 * self.dt
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn pulse(&self) -> &InitialPulse {
        &self.pulse
    }

    pub fn g0_samples(&self) -> &[f64] {
        &self.g0
    }

    pub fn g1_samples(&self) -> &[f64] {
        &self.g1
    }

    fn check_horizon(&self, t: f64) -> Result<()> {
        if t > self.horizon() + LATTICE_GUARD * self.dt {
            Err(Error::HorizonExceeded {
                t,
                horizon: self.horizon(),
            })
        } else {
            Ok(())
        }
    }

    pub fn g0_at(&self, t: f64) -> Result<f64> {
        self.check_horizon(t)?;
        Ok(sample(&self.g0, self.dt, t))
    }

    pub fn g1_at(&self, t: f64) -> Result<f64> {
        self.check_horizon(t)?;
        Ok(sample(&self.g1, self.dt, t))
    }
}

/// Marches the coupled delay system for `G0` and `G1` up to `horizon`.
///
/// Every delay (`l1/c1`, `2 l1/c1`, `2 l2/c2`) is at least one step long, so
/// each right-hand side only reads already computed samples; off-grid
/// delayed values are linearly interpolated.
pub fn march_double_layer(
    scene: &Scene,
    pulse: &InitialPulse,
    horizon: f64,
    step: MarchStep,
) -> Result<CoupledTraces> {
    let (l1, c1, l2, c2) = two_layers(scene)?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidHorizon(horizon));
    }
    let length = scene.total_length();
    let transit1 = l1 / c1;
    let wall_trip = 2.0 * l2 / c2;
    let min_delay = transit1.min(wall_trip);
    let dt = match step {
        MarchStep::Auto => min_delay / DEFAULT_STEPS_PER_DELAY as f64,
        MarchStep::Fixed(dt) => {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidInput(format!("time step {dt} must be positive")));
            }
            dt
        }
        MarchStep::ExactLattice => {
            let mut delays = vec![transit1, wall_trip];
            if let InitialPulse::DeltaLike { center, .. } = pulse {
                delays.push(center - length);
            }
            commensurate_step(&delays, 10_000).ok_or_else(|| {
                Error::Unsupported("delays are not commensurate; no exact lattice".into())
            })?
        }
    };
    if dt > min_delay * (1.0 + LATTICE_GUARD) {
        return Err(Error::StepTooCoarse { dt, min_delay });
    }
    let steps = (horizon / dt - LATTICE_GUARD).ceil().max(1.0) as usize;
    let lead = c1 / (c1 + 1.0);
    let self_feedback = 2.0 / (c1 + 1.0);
    let to_inner = 2.0 * c2 / (c2 + c1);
    let inner_wall = 2.0 * c1 / (c2 + c1);
    let round_trip1 = 2.0 * transit1;
    let stop = -LATTICE_GUARD * dt;

    let mut g0 = Vec::with_capacity(steps + 1);
    let mut g1 = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = i as f64 * dt;
        let mut own_echo = 0.0;
        let mut inner_echo1 = 0.0;
        let mut n = 1;
        while t - n as f64 * round_trip1 >= stop {
            let s = t - n as f64 * round_trip1;
            own_echo += sample(&g0, dt, s);
            inner_echo1 += sample(&g1, dt, s);
            n += 1;
        }
        let mut from_inner = 0.0;
        let mut from_outer = 0.0;
        let mut n = 0;
        while t - (2 * n + 1) as f64 * transit1 >= stop {
            let s = t - (2 * n + 1) as f64 * transit1;
            from_inner += sample(&g1, dt, s);
            from_outer += sample(&g0, dt, s);
            n += 1;
        }
        let mut wall_echo = 0.0;
        let mut n = 1;
        while t - n as f64 * wall_trip >= stop {
            wall_echo += sample(&g1, dt, t - n as f64 * wall_trip);
            n += 1;
        }
        let forcing = scene.initial_value(pulse, length + t);
        g0.push(lead * forcing - self_feedback * own_echo + self_feedback * from_inner);
        g1.push(to_inner * from_outer - to_inner * inner_echo1 - inner_wall * wall_echo);
    }
    Ok(CoupledTraces {
        scene: scene.clone(),
        pulse: pulse.clone(),
        dt,
        g0,
        g1,
    })
}

/// Field of a double-layer scene from marched traces: exterior formula for
/// `x > L`, the four-sum formula in the outer layer `(l2, L]` and the
/// two-sum formula in the inner layer `[0, l2)`.
pub fn field_eval_double(traces: &CoupledTraces, x: f64, t: f64) -> Result<f64> {
    let scene = &traces.scene;
    let (l1, c1, l2, c2) = two_layers(scene)?;
    if !(x >= 0.0 && t >= 0.0) {
        return Err(Error::OutOfDomain { x, t });
    }
    traces.check_horizon(t)?;
    let length = scene.total_length();
    let g0 = |s: f64| sample(&traces.g0, traces.dt, s);
    let g1 = |s: f64| sample(&traces.g1, traces.dt, s);
    if x > length {
        return exterior_field(&traces.pulse, length, x, t, |s| Ok(g0(s)));
    }
    let sum_while = |f: &dyn Fn(f64) -> f64, arg: &dyn Fn(usize) -> f64| {
        let mut total = 0.0;
        let mut n = 0;
        loop {
            let s = arg(n);
            if s < -LATTICE_GUARD * traces.dt {
                break total;
            }
            total += f(s);
            n += 1;
        }
    };
    if x >= l2 {
        let y = x - l2;
        let value = sum_while(&g0, &|n| t + (y - (2 * n + 1) as f64 * l1) / c1)
            - sum_while(&g0, &|n| t - (y + (2 * n + 1) as f64 * l1) / c1)
            - sum_while(&g1, &|n| t + (y - 2.0 * (n + 1) as f64 * l1) / c1)
            + sum_while(&g1, &|n| t - (y + 2.0 * n as f64 * l1) / c1);
        return Ok(value);
    }
    Ok(sum_while(&g1, &|n| t + (x - (2 * n + 1) as f64 * l2) / c2)
        - sum_while(&g1, &|n| t - (x + (2 * n + 1) as f64 * l2) / c2))
}

/// Detector trace `m(t) = u(L + D, t)` of a double layer from marched traces.
pub fn double_layer_measure(
    traces: &CoupledTraces,
    t_start: f64,
    dt: f64,
    count: usize,
) -> Result<TimeSeries> {
    let x = traces.scene.detector_position();
    let values = (0..count)
        .map(|i| field_eval_double(traces, x, t_start + i as f64 * dt))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(t_start, dt, values)
}

/// What [`synth_measurement`] should produce.
#[derive(Debug, Clone)]
pub enum SynthMode {
    /// Direct arrival plus the `N + 1` major peaks of a delta pulse.
    DeltaMajor,
    /// Every delta-pulse echo arriving up to `t_max` (`N <= 2`).
    DeltaWithMinor { t_max: f64 },
    /// Sampled `m(t)` on `[0, t_max]` for a continuous pulse (`N <= 2`);
    /// empty when `t_max <= 0`.
    Continuous {
        pulse: InitialPulse,
        t_max: f64,
        dt: f64,
        step: MarchStep,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Measurement {
    Events(EventSeries),
    Samples(TimeSeries),
}

impl Measurement {
    pub fn events(&self) -> Option<&EventSeries> {
        match self {
            Measurement::Events(e) => Some(e),
            Measurement::Samples(_) => None,
        }
    }

    pub fn samples(&self) -> Option<&TimeSeries> {
        match self {
            Measurement::Samples(s) => Some(s),
            Measurement::Events(_) => None,
        }
    }
}

fn direct_event(scene: &Scene) -> Event {
    if scene.source_at_detector() {
        Event {
            time: 0.0,
            amplitude: 1.0,
        }
    } else {
        Event {
            time: (scene.source_position() - scene.detector_position()).abs(),
            amplitude: 0.5,
        }
    }
}

/// Synthesizes detector data for a scene; delta modes place a unit point
/// pulse at the scene's source position.
pub fn synth_measurement(scene: &Scene, mode: &SynthMode) -> Result<Measurement> {
    match mode {
        SynthMode::DeltaMajor => {
            let mut events = vec![direct_event(scene)];
            let chain = reflection_chain(&scene.speeds())?;
            events.extend(
                peak_times(scene)
                    .into_iter()
                    .zip(chain)
                    .map(|(time, amplitude)| Event { time, amplitude }),
            );
            Ok(Measurement::Events(EventSeries::merged(
                events,
                EVENT_MERGE_TOLERANCE,
                AMPLITUDE_FLOOR,
            )))
        }
        SynthMode::DeltaWithMinor { t_max } => {
            let mut events = vec![direct_event(scene)];
            events.extend(delta_echoes(scene, *t_max)?);
            events.retain(|e| e.time <= *t_max + EVENT_MERGE_TOLERANCE);
            Ok(Measurement::Events(EventSeries::merged(
                events,
                EVENT_MERGE_TOLERANCE,
                AMPLITUDE_FLOOR,
            )))
        }
        SynthMode::Continuous {
            pulse,
            t_max,
            dt,
            step,
        } => {
            if pulse.is_delta() {
                return Err(Error::Unsupported(
                    "continuous measurement needs a continuous pulse".into(),
                ));
            }
            if !(dt.is_finite() && *dt > 0.0) {
                return Err(Error::InvalidInput(format!("time step {dt} must be positive")));
            }
            let count = if *t_max <= 0.0 {
                0
            } else {
                lattice_floor(t_max / dt) as usize + 1
            };
            Ok(Measurement::Samples(continuous_trace(
                scene, pulse, 0.0, *dt, count, *step,
            )?))
        }
    }
}

/// Detector trace of a continuous pulse for one or two layers; the double
/// layer is marched with `step` (never coarser than the output spacing).
pub fn continuous_trace(
    scene: &Scene,
    pulse: &InitialPulse,
    t_start: f64,
    dt: f64,
    count: usize,
    step: MarchStep,
) -> Result<TimeSeries> {
    match scene.layer_count() {
        1 => single_layer::measure(scene, pulse, t_start, dt, count),
        2 => {
            let t_end = t_start + count.saturating_sub(1) as f64 * dt;
            let step = match step {
                MarchStep::Auto => {
                    let (l1, c1, l2, c2) = two_layers(scene)?;
                    let auto = (l1 / c1).min(2.0 * l2 / c2) / DEFAULT_STEPS_PER_DELAY as f64;
                    MarchStep::Fixed(auto.min(dt))
                }
                other => other,
            };
            let traces = march_double_layer(scene, pulse, t_end.max(dt), step)?;
            double_layer_measure(&traces, t_start, dt, count)
        }
        n => Err(Error::Unsupported(format!(
            "continuous solver covers one or two layers, got {n}"
        ))),
    }
}

/// All reflected delta-pulse events (major and minor) up to `t_max`.
fn delta_echoes(scene: &Scene, t_max: f64) -> Result<Vec<Event>> {
    let t1 = scene.first_reflection_time();
    if t_max < t1 {
        return Ok(Vec::new());
    }
    match scene.layer_count() {
        1 => {
            let layer = scene.layers()[0];
            let period = 2.0 * layer.transit_time();
            let k_max = lattice_floor((t_max - t1) / period).max(0) as usize;
            Ok((0..=k_max)
                .map(|k| Event {
                    time: t1 + k as f64 * period,
                    amplitude: delta_amplitude(layer.speed(), k),
                })
                .collect())
        }
        2 => {
            let (l1, c1, l2, c2) = two_layers(scene)?;
            let (tau1, tau2) = (l1 / c1, l2 / c2);
            let k1_max = lattice_floor((t_max - t1) / tau1).max(0) as usize;
            let k2_max = lattice_floor((t_max - t1) / tau2).max(0) as usize;
            let lattice = solve_double_lattice(c1, c2, k1_max, k2_max)?;
            Ok(lattice
                .g0_entries()
                .map(|(k1, k2, g)| Event {
                    time: t1 + k1 as f64 * tau1 + k2 as f64 * tau2,
                    amplitude: if k1 == 0 && k2 == 0 { g - 0.5 } else { g },
                })
                .collect())
        }
        n => Err(Error::Unsupported(format!(
            "minor-peak synthesis covers one or two layers, got {n}"
        ))),
    }
}
