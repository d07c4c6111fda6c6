//! Reconstruction of a layered medium from the peaks of its echo.
//!
//! Peak times give the travel times `l_j / c_j`; peak heights give the
//! speeds one layer at a time, each height being the reflection amplitude
//! of the next interface seen through the layers above it. Without signs,
//! every interior height allows two speeds and the total length of the
//! medium is used to pick among the resulting sequences.

use crate::error::{Error, Result};
use crate::model::{
    Branch, Candidate, EventSeries, Peak, PeakList, ReconstructionResult, TimeSeries,
};
use crate::multi_layer::{reflection_chain, transmission_products};

/// Relative tolerance of the total-length selection, applied to `2L`.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-6;

/// Input to [`extract_peaks`].
#[derive(Debug, Clone, Copy)]
pub enum PeakSource<'a> {
    Events(&'a EventSeries),
    Samples(&'a TimeSeries),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    pub min_height: f64,
    pub magnitude_only: bool,
    /// Peaks at or before this time are ignored (the direct arrival).
    pub exclude_until: f64,
}

impl ExtractOptions {
    pub fn new(min_height: f64) -> Self {
        Self {
            min_height,
            magnitude_only: false,
            exclude_until: 0.0,
        }
    }
}

/// Picks the echo peaks out of a detector record.
///
/// Events are kept when `|amplitude| >= min_height`. For sampled data the
/// peaks are strict local maxima of `|m|`, located by fitting a parabola
/// through the three samples around each maximum; the height is the
/// parabola's extreme value. For a smooth pulse this approximates the
/// delta-pulse amplitude scaled by the pulse maximum.
pub fn extract_peaks(source: PeakSource<'_>, options: ExtractOptions) -> Result<PeakList> {
    if !(options.min_height.is_finite() && options.min_height > 0.0) {
        return Err(Error::InvalidInput(format!(
            "minimum peak height {} must be positive",
            options.min_height
        )));
    }
    let guard = 1e-12;
    let mut peaks = Vec::new();
    match source {
        PeakSource::Events(events) => {
            for e in events.events() {
                if e.time > options.exclude_until + guard && e.amplitude.abs() >= options.min_height {
                    peaks.push(Peak {
                        time: e.time,
                        height: e.amplitude,
                    });
                }
            }
        }
        PeakSource::Samples(series) => {
            let v = &series.values;
            for i in 1..v.len().saturating_sub(1) {
                let (a, b, c) = (v[i - 1], v[i], v[i + 1]);
                if !(b.abs() > a.abs() && b.abs() > c.abs() && b.abs() >= options.min_height) {
                    continue;
                }
                let curvature = a - 2.0 * b + c;
                let (shift, height) = if curvature != 0.0 {
                    let shift = 0.5 * (a - c) / curvature;
                    (shift, b - 0.25 * (a - c) * shift)
                } else {
                    (0.0, b)
                };
                let time = series.time(i) + shift * series.dt;
                if time > options.exclude_until + guard {
                    peaks.push(Peak { time, height });
                }
            }
        }
    }
    if peaks.is_empty() {
        return Err(Error::EmptyPeaks);
    }
    let list = PeakList::new(peaks, false)?;
    Ok(if options.magnitude_only {
        list.to_magnitudes()
    } else {
        list
    })
}

/// Travel times `l_j / c_j = (t_{j+1} - t_j) / 2`.
pub fn recover_ratios(peaks: &PeakList) -> Result<Vec<f64>> {
    if peaks.len() < 2 {
        return Err(Error::InvalidPeaks(format!(
            "need at least two peaks, got {}",
            peaks.len()
        )));
    }
    let times = peaks.times();
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidPeaks("peak times must increase".into()));
    }
    Ok(times.windows(2).map(|w| 0.5 * (w[1] - w[0])).collect())
}

/// Layer lengths `l_j = ratio_j * c_j`.
pub fn recover_lengths(ratios: &[f64], speeds: &[f64]) -> Result<Vec<f64>> {
    if ratios.len() != speeds.len() {
        return Err(Error::InvalidInput(format!(
            "{} travel times but {} speeds",
            ratios.len(),
            speeds.len()
        )));
    }
    Ok(ratios.iter().zip(speeds).map(|(r, c)| r * c).collect())
}

/// `|rho_{N+1}(c)| - |h_last|`; near zero for data consistent with `c`.
pub fn wall_consistency(speeds: &[f64], h_last: f64) -> f64 {
    let k = transmission_products(speeds);
    0.5 * k[speeds.len()] - h_last.abs()
}

/// Wall echo of a double layer written through the first two heights,
/// `h3 = 2 h2^2 / (1 - 4 h1^2) - (1 - 4 h1^2) / 2`.
pub fn double_layer_wall_height(h1: f64, h2: f64) -> f64 {
    let q = 1.0 - 4.0 * h1 * h1;
    2.0 * h2 * h2 / q - 0.5 * q
}

/// Speed of the first layer from the first peak height.
pub fn first_speed(h1: f64) -> Result<f64> {
    if !(h1.abs() < 0.5) {
        return Err(Error::Infeasible(format!("|h1| = {} is not below 1/2", h1.abs())));
    }
    let c1 = (1.0 + 2.0 * h1) / (1.0 - 2.0 * h1);
    if !(c1 > 0.0 && c1 < 1.0) {
        return Err(Error::Infeasible(format!("h1 = {h1} gives c1 = {c1} outside (0, 1)")));
    }
    Ok(c1)
}

/// Solves `rho_n = h` for `c_n` given the speed above and `K_{n-1}`.
fn next_speed(previous: f64, product: f64, h: f64) -> Option<f64> {
    let r = 2.0 * h / product;
    if !(r.abs() < 1.0) {
        return None;
    }
    let c = previous * (1.0 + r) / (1.0 - r);
    (c > 0.0 && c < 1.0).then_some(c)
}

fn length_sum(times: &[f64], speeds: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(speeds)
        .map(|(w, c)| (w[1] - w[0]) * c)
        .sum()
}

fn candidate(times: &[f64], ratios: &[f64], speeds: Vec<f64>, branches: Vec<Branch>) -> Result<Candidate> {
    Ok(Candidate {
        lengths: recover_lengths(ratios, &speeds)?,
        length_sum: length_sum(times, &speeds),
        speeds,
        branches,
    })
}

fn split_peaks(peaks: &PeakList) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if peaks.is_empty() {
        return Err(Error::EmptyPeaks);
    }
    let ratios = recover_ratios(peaks)?;
    Ok((peaks.times(), peaks.heights(), ratios))
}

/// Sequential inversion of signed peaks `h_1..h_{N+1}`: one speed per
/// interface height, lengths from the travel times.
pub fn invert_full(peaks: &PeakList) -> Result<ReconstructionResult> {
    if peaks.is_magnitude_only() {
        return Err(Error::InvalidPeaks(
            "full inversion needs signed peak heights".into(),
        ));
    }
    let (times, heights, ratios) = split_peaks(peaks)?;
    let n = ratios.len();
    let mut speeds = vec![first_speed(heights[0])?];
    for &h in &heights[1..n] {
        let previous = *speeds.last().unwrap();
        let product = transmission_products(&speeds)[speeds.len()];
        let c = next_speed(previous, product, h).ok_or_else(|| {
            Error::Infeasible(format!("height {h} admits no speed in (0, 1)"))
        })?;
        speeds.push(c);
    }
    let branches = heights[1..n]
        .iter()
        .map(|h| if *h < 0.0 { Branch::Negative } else { Branch::Positive })
        .collect();
    let residual = wall_consistency(&speeds, heights[n]);
    Ok(ReconstructionResult {
        candidates: vec![candidate(&times, &ratios, speeds, branches)?],
        selected_index: Some(0),
        best_index: Some(0),
        ambiguity_flag: false,
        wall_residuals: vec![residual],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaselessOptions {
    /// Absolute tolerance on `|sum - 2L|`; defaults to `1e-6 * 2L`.
    pub tol: Option<f64>,
    /// With signed input, fail when the first peak is positive (a first
    /// layer faster than the exterior) instead of treating it as negative.
    pub reject_positive_first: bool,
}

/// Inversion from peak magnitudes and the total length `L`.
///
/// The first height is taken as negative. Each later interior height gives
/// a negative and a positive branch; branches leaving `(0, 1)` are pruned
/// and a zero height yields a single child. Candidates come out in
/// lexicographic branch order (negative first). The candidate whose
/// `sum_j (t_{j+1} - t_j) c_j` is within `tol` of `2L` is selected when it
/// is the only one; otherwise the result is flagged ambiguous and
/// `best_index` names the closest candidate.
pub fn invert_phaseless(
    peaks: &PeakList,
    total_length: f64,
    options: PhaselessOptions,
) -> Result<ReconstructionResult> {
    if !(total_length.is_finite() && total_length > 0.0) {
        return Err(Error::InvalidLength(total_length));
    }
    if peaks.is_empty() {
        return Err(Error::EmptyPeaks);
    }
    if options.reject_positive_first && !peaks.is_magnitude_only() && peaks.heights()[0] > 0.0 {
        return Err(Error::Infeasible(
            "positive first peak means a first layer faster than the exterior".into(),
        ));
    }
    let (times, heights, ratios) = split_peaks(peaks)?;
    let magnitudes: Vec<f64> = heights.iter().map(|h| h.abs()).collect();
    let n = ratios.len();
    let target = 2.0 * total_length;
    let tol = options.tol.unwrap_or(DEFAULT_RELATIVE_TOL * target);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be non-negative")));
    }

    let mut leaves: Vec<(Vec<f64>, Vec<Branch>)> = Vec::new();
    if let Ok(c1) = first_speed(-magnitudes[0]) {
        expand(&magnitudes[..n], vec![c1], Vec::new(), &mut leaves);
    }

    let mut candidates = Vec::with_capacity(leaves.len());
    let mut wall_residuals = Vec::with_capacity(leaves.len());
    for (speeds, branches) in leaves {
        wall_residuals.push(wall_consistency(&speeds, magnitudes[n]));
        candidates.push(candidate(&times, &ratios, speeds, branches)?);
    }
    let misfit = |c: &Candidate| (c.length_sum - target).abs();
    let passing: Vec<usize> = (0..candidates.len())
        .filter(|&i| misfit(&candidates[i]) <= tol)
        .collect();
    let best_index = (0..candidates.len())
        .min_by(|&a, &b| misfit(&candidates[a]).total_cmp(&misfit(&candidates[b])));
    let selected_index = (passing.len() == 1).then(|| passing[0]);
    Ok(ReconstructionResult {
        candidates,
        selected_index,
        best_index,
        ambiguity_flag: passing.len() != 1,
        wall_residuals,
    })
}

fn expand(
    magnitudes: &[f64],
    speeds: Vec<f64>,
    branches: Vec<Branch>,
    leaves: &mut Vec<(Vec<f64>, Vec<Branch>)>,
) {
    let depth = speeds.len();
    if depth == magnitudes.len() {
        leaves.push((speeds, branches));
        return;
    }
    let h = magnitudes[depth];
    let previous = speeds[depth - 1];
    let product = transmission_products(&speeds)[depth];
    let choices: &[Branch] = if h == 0.0 {
        &[Branch::Negative]
    } else {
        &[Branch::Negative, Branch::Positive]
    };
    for &branch in choices {
        let signed = match branch {
            Branch::Negative => -h,
            Branch::Positive => h,
        };
        if let Some(c) = next_speed(previous, product, signed) {
            let mut s = speeds.clone();
            s.push(c);
            let mut b = branches.clone();
            b.push(branch);
            expand(magnitudes, s, b, leaves);
        }
    }
}

/// Signed major-peak heights predicted for a candidate, for checking a
/// reconstruction against its data.
pub fn predicted_heights(speeds: &[f64]) -> Result<Vec<f64>> {
    reflection_chain(speeds)
}
