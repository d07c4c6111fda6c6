//! Domain types shared by the solvers: media, initial pulses, sampled and
//! impulse-train traces, measured peaks and reconstruction records.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default comparison radius for the point value of a delta-like pulse.
pub const DELTA_POINT_TOLERANCE: f64 = 1e-12;

/// Largest `|U0(L)|` accepted as satisfying the compatibility condition.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-10;

/// One homogeneous layer of the medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    length: f64,
    speed: f64,
}

impl Layer {
    pub fn new(length: f64, speed: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidScene(format!(
                "layer length {length} must be positive"
            )));
        }
        check_speed(speed)?;
        Ok(Self { length, speed })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Refractive index relative to the exterior.
    pub fn refractive_index(&self) -> f64 {
        1.0 / self.speed
    }

    /// One-way travel time across the layer.
    pub fn transit_time(&self) -> f64 {
        self.length / self.speed
    }
}

pub(crate) fn check_speed(speed: f64) -> Result<()> {
    if speed.is_finite() && speed > 0.0 && speed < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpeed(speed))
    }
}

/// A layered medium on `(0, L)` observed by a detector at `x = L + D`.
///
/// `layers[0]` is adjacent to the exterior boundary `x = L`, the last entry
/// touches the reflecting wall at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    layers: Vec<Layer>,
    detector_offset: f64,
    source_position: f64,
}

impl Scene {
    pub fn new(layers: Vec<Layer>, detector_offset: f64, source_position: f64) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidScene("the medium has no layers".into()));
        }
        if !(detector_offset.is_finite() && detector_offset > 0.0) {
            return Err(Error::InvalidScene(format!(
                "detector offset {detector_offset} must be positive"
            )));
        }
        let total: f64 = layers.iter().map(Layer::length).sum();
        if !(source_position.is_finite() && source_position > total) {
            return Err(Error::InvalidScene(format!(
                "source position {source_position} must lie right of the medium (L = {total})"
            )));
        }
        Ok(Self {
            layers,
            detector_offset,
            source_position,
        })
    }

    /// Scene with the source placed at the detector, `x0 = L + D`.
    pub fn with_source_at_detector(layers: Vec<Layer>, detector_offset: f64) -> Result<Self> {
        let total: f64 = layers.iter().map(Layer::length).sum();
        Self::new(layers, detector_offset, total + detector_offset)
    }

    /// Builds a scene from `(length, speed)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)], detector_offset: f64, source_position: f64) -> Result<Self> {
        let layers = pairs
            .iter()
            .map(|&(l, c)| Layer::new(l, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(layers, detector_offset, source_position)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn speeds(&self) -> Vec<f64> {
        self.layers.iter().map(Layer::speed).collect()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.layers.iter().map(Layer::length).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.layers.iter().map(Layer::length).sum()
    }

    pub fn detector_offset(&self) -> f64 {
        self.detector_offset
    }

    pub fn detector_position(&self) -> f64 {
        self.total_length() + self.detector_offset
    }

    pub fn source_position(&self) -> f64 {
        self.source_position
    }

    pub fn source_at_detector(&self) -> bool {
        (self.source_position - self.detector_position()).abs() <= DELTA_POINT_TOLERANCE
    }

    /// Time for the left-going half of a pulse at the source to travel from
    /// the source to `x = L` and back out to the detector.
    pub fn first_reflection_time(&self) -> f64 {
        (self.source_position - self.total_length()) + self.detector_offset
    }

    /// Layer index (0-based) containing `x`, with interface points assigned
    /// to the layer on their right. Returns `None` for `x >= L` or `x < 0`.
    pub fn layer_at(&self, x: f64) -> Option<usize> {
        if x < 0.0 {
            return None;
        }
        let mut right = self.total_length();
        if x >= right {
            return None;
        }
        for (j, layer) in self.layers.iter().enumerate() {
            let left = right - layer.length;
            if x >= left || j + 1 == self.layers.len() {
                return Some(j);
            }
            right = left;
        }
        None
    }

    /// Initial value with the support restricted to `(L, inf)`.
    pub fn initial_value(&self, pulse: &InitialPulse, x: f64) -> f64 {
        if x > self.total_length() {
            pulse.eval(x)
        } else {
            0.0
        }
    }

    /// Checks the compatibility condition `U0(L) = 0` and that a delta-like
    /// pulse sits right of the medium.
    pub fn check_pulse(&self, pulse: &InitialPulse) -> Result<()> {
        let l = self.total_length();
        if let InitialPulse::DeltaLike { center, .. } = pulse {
            if *center <= l {
                return Err(Error::InvalidPulse(format!(
                    "delta pulse at {center} is not right of the medium (L = {l})"
                )));
            }
        }
        let at_boundary = pulse.eval(l);
        if at_boundary.abs() > COMPATIBILITY_TOLERANCE {
            return Err(Error::InvalidPulse(format!(
                "compatibility requires U0(L) = 0, got {at_boundary}"
            )));
        }
        Ok(())
    }
}

/// Total length `L` of the medium.
pub fn scene_total_length(scene: &Scene) -> f64 {
    scene.total_length()
}

/// Interpolation rule for tabulated pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    #[default]
    Linear,
    Nearest,
}

/// A closed-form initial profile.
#[derive(Clone)]
pub struct AnalyticProfile {
    name: String,
    rule: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl AnalyticProfile {
    pub fn new(name: impl Into<String>, rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    /// `cos(x) / (x - pole)` for `x > start`, zero otherwise.
    pub fn cos_ratio(start: f64, pole: f64) -> Self {
        Self::new(format!("cos_ratio(start={start}, pole={pole})"), move |x| {
            if x > start {
                x.cos() / (x - pole)
            } else {
                0.0
            }
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.rule)(x)
    }
}

impl fmt::Debug for AnalyticProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticProfile")
            .field("name", &self.name)
            .finish()
    }
}

/// The initial displacement `U0`.
#[derive(Debug, Clone)]
pub enum InitialPulse {
    /// Unit point value at `center`: 1 there, 0 elsewhere. Not a
    /// distribution; its reflections form a discrete impulse train.
    DeltaLike { center: f64, tolerance: f64 },
    /// `exp(-sharpness (x - center)^2)`.
    Gaussian { center: f64, sharpness: f64 },
    /// Samples on strictly increasing abscissae, zero outside their range.
    Tabulated {
        abscissae: Vec<f64>,
        values: Vec<f64>,
        interpolation: Interpolation,
    },
    Analytic(AnalyticProfile),
}

impl InitialPulse {
    pub fn delta(center: f64) -> Self {
        InitialPulse::DeltaLike {
            center,
            tolerance: DELTA_POINT_TOLERANCE,
        }
    }

    pub fn gaussian(center: f64, sharpness: f64) -> Result<Self> {
        if !(sharpness.is_finite() && sharpness > 0.0) {
            return Err(Error::InvalidPulse(format!(
                "Gaussian sharpness {sharpness} must be positive"
            )));
        }
        Ok(InitialPulse::Gaussian { center, sharpness })
    }

    pub fn tabulated(abscissae: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if abscissae.len() != values.len() || abscissae.len() < 2 {
            return Err(Error::InvalidPulse(
                "tabulated pulse needs at least two (x, value) pairs of equal count".into(),
            ));
        }
        if abscissae.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidPulse(
                "tabulated abscissae must be strictly increasing".into(),
            ));
        }
        if values.iter().chain(&abscissae).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPulse("tabulated pulse has non-finite entries".into()));
        }
        Ok(InitialPulse::Tabulated {
            abscissae,
            values,
            interpolation,
        })
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, InitialPulse::DeltaLike { .. })
    }

    /// Evaluates `U0(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialPulse::DeltaLike { center, tolerance } => {
                if (x - center).abs() <= *tolerance {
                    1.0
                } else {
                    0.0
                }
            }
            InitialPulse::Gaussian { center, sharpness } => {
                let d = x - center;
                (-sharpness * d * d).exp()
            }
            InitialPulse::Tabulated {
                abscissae,
                values,
                interpolation,
            } => eval_table(abscissae, values, *interpolation, x),
            InitialPulse::Analytic(profile) => profile.eval(x),
        }
    }
}

/// Evaluates `U0(x)`; see [`InitialPulse::eval`].
pub fn pulse_eval(pulse: &InitialPulse, x: f64) -> f64 {
    pulse.eval(x)
}

fn eval_table(xs: &[f64], ys: &[f64], rule: Interpolation, x: f64) -> f64 {
    let (first, last) = (xs[0], xs[xs.len() - 1]);
    if !(x >= first && x <= last) {
        return 0.0;
    }
    let upper = xs.partition_point(|&a| a <= x).min(xs.len() - 1);
    let lower = upper.saturating_sub(1);
    if upper == lower {
        return ys[lower];
    }
    let w = (x - xs[lower]) / (xs[upper] - xs[lower]);
    match rule {
        Interpolation::Linear => ys[lower] + w * (ys[upper] - ys[lower]),
        Interpolation::Nearest => {
            if w < 0.5 {
                ys[lower]
            } else {
                ys[upper]
            }
        }
    }
}

/// Uniformly sampled signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t_start: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(t_start: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidInput(format!("time step {dt} must be positive")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("time series has non-finite values".into()));
        }
        Ok(Self { t_start, dt, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.values.len().saturating_sub(1))
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.time(i))
    }

    /// Linear interpolation; `None` outside the sampled range.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        if self.values.is_empty() {
            return None;
        }
        let s = (t - self.t_start) / self.dt;
        let last = (self.values.len() - 1) as f64;
        let guard = 1e-9;
        if s < -guard || s > last + guard {
            return None;
        }
        let s = s.clamp(0.0, last);
        let i = s.floor() as usize;
        if i + 1 >= self.values.len() {
            return Some(self.values[i]);
        }
        let w = s - i as f64;
        Some(self.values[i] + w * (self.values[i + 1] - self.values[i]))
    }
}

/// A single impulse of an event train.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub amplitude: f64,
}

/// Impulse train with strictly increasing times.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EventSeries {
    events: Vec<Event>,
}

impl EventSeries {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        if events.windows(2).any(|w| !(w[1].time > w[0].time)) {
            return Err(Error::InvalidInput(
                "event times must be strictly increasing".into(),
            ));
        }
        if events.iter().any(|e| !(e.time.is_finite() && e.amplitude.is_finite())) {
            return Err(Error::InvalidInput("event series has non-finite entries".into()));
        }
        Ok(Self { events })
    }

    /// Sorts events by time, sums the amplitudes of events closer than
    /// `merge_tolerance`, and drops merged amplitudes with magnitude below
    /// `drop_below`.
    pub fn merged(mut events: Vec<Event>, merge_tolerance: f64, drop_below: f64) -> Self {
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        let mut out: Vec<Event> = Vec::with_capacity(events.len());
        for e in events {
            match out.last_mut() {
                Some(last) if (e.time - last.time).abs() <= merge_tolerance => {
                    last.amplitude += e.amplitude;
                }
                _ => out.push(e),
            }
        }
        out.retain(|e| e.amplitude.abs() >= drop_below);
        Self { events: out }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Amplitude of the event at `t` (within `tolerance`), if any.
    pub fn amplitude_at(&self, t: f64, tolerance: f64) -> Option<f64> {
        self.events
            .iter()
            .find(|e| (e.time - t).abs() <= tolerance)
            .map(|e| e.amplitude)
    }
}

/// One measured peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub time: f64,
    pub height: f64,
}

/// Peaks `(t_k, h_k)` in arrival order, either signed or magnitude-only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakList {
    peaks: Vec<Peak>,
    magnitude_only: bool,
}

impl PeakList {
    pub fn new(peaks: Vec<Peak>, magnitude_only: bool) -> Result<Self> {
        if peaks.windows(2).any(|w| !(w[1].time > w[0].time)) {
            return Err(Error::InvalidPeaks(
                "peak times must be strictly increasing".into(),
            ));
        }
        if peaks.iter().any(|p| !(p.time.is_finite() && p.height.is_finite())) {
            return Err(Error::InvalidPeaks("non-finite peak entries".into()));
        }
        if magnitude_only && peaks.iter().any(|p| p.height < 0.0) {
            return Err(Error::InvalidPeaks(
                "magnitude-only peaks must have non-negative heights".into(),
            ));
        }
        Ok(Self {
            peaks,
            magnitude_only,
        })
    }

    pub fn signed(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs.iter().map(|&(time, height)| Peak { time, height }).collect(),
            false,
        )
    }

    pub fn magnitudes(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(time, height)| Peak { time, height })
                .collect(),
            true,
        )
    }

    /// Drops the signs.
    pub fn to_magnitudes(&self) -> Self {
        Self {
            peaks: self
                .peaks
                .iter()
                .map(|p| Peak {
                    time: p.time,
                    height: p.height.abs(),
                })
                .collect(),
            magnitude_only: true,
        }
    }

    pub fn peaks(&self) -> &[Peak] {
        &self.peaks
    }

    pub fn times(&self) -> Vec<f64> {
        self.peaks.iter().map(|p| p.time).collect()
    }

    pub fn heights(&self) -> Vec<f64> {
        self.peaks.iter().map(|p| p.height).collect()
    }

    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn is_magnitude_only(&self) -> bool {
        self.magnitude_only
    }
}

/// Sign chosen for a peak height while branching over phaseless data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Negative,
    Positive,
}

/// A candidate medium produced by an inversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub speeds: Vec<f64>,
    pub lengths: Vec<f64>,
    /// `sum_j (t_{j+1} - t_j) c_j`, equal to `2L` for the true medium.
    pub length_sum: f64,
    /// Signs assumed for `h_2..h_N`.
    pub branches: Vec<Branch>,
}

/// Output of a reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub candidates: Vec<Candidate>,
    /// Index of the unique candidate meeting the total-length constraint.
    pub selected_index: Option<usize>,
    /// Candidate whose length sum is closest to the target.
    pub best_index: Option<usize>,
    /// Set when zero or several candidates meet the constraint.
    #[serde(rename = "ambiguous")]
    pub ambiguity_flag: bool,
    /// `|rho_{N+1}(c)| - |h_{N+1}|` per candidate.
    pub wall_residuals: Vec<f64>,
}

impl ReconstructionResult {
    pub fn selected(&self) -> Option<&Candidate> {
        self.selected_index.map(|i| &self.candidates[i])
    }
}
