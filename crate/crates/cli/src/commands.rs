use crate::manifest::{finish, read_input};
use crate::{exit, CliError};
use clap::{Args, ValueEnum};
use echolab_core::fdm::{convergence_study, refinement_levels, InterfaceRule, DEFAULT_BASE_DX};
use echolab_core::inverse::{invert_full, invert_phaseless, PhaselessOptions};
use echolab_core::io::{csv_table, read_peaks, SceneConfig};
use echolab_core::multi_layer::{
    field_eval_double, march_double_layer, peak_times, synth_measurement, MarchStep,
    Measurement, SynthMode,
};
use echolab_core::single_layer::field_eval;
use echolab_core::{Error, InitialPulse, Scene};
use rayon::prelude::*;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

fn load_config(path: &Path) -> Result<(Scene, InitialPulse), CliError> {
    Ok(SceneConfig::load(&read_input(path)?)?)
}

fn grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        n => (0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scene config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub x_min: f64,
    /// Defaults to the detector position.
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub nx: usize,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 30.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 301)]
    pub nt: usize,
}

pub fn simulate(args: &SimulateArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let (scene, pulse) = load_config(&args.config)?;
    let x_max = args.x_max.unwrap_or_else(|| scene.detector_position());
    let xs = grid(args.x_min, x_max, args.nx);
    let ts = grid(args.t_min, args.tmax, args.nt);
    let rows: Vec<Vec<[f64; 3]>> = match scene.layer_count() {
        1 => ts
            .par_iter()
            .map(|&t| {
                xs.iter()
                    .map(|&x| field_eval(&scene, &pulse, x, t).map(|w| [x, t, w]))
                    .collect::<Result<Vec<_>, Error>>()
            })
            .collect::<Result<_, _>>()?,
        2 => {
            let horizon = ts.iter().copied().fold(0.0, f64::max);
            let horizon = if horizon > 0.0 { horizon } else { 1.0 };
            let traces = march_double_layer(&scene, &pulse, horizon, MarchStep::Auto)?;
            ts.par_iter()
                .map(|&t| {
                    xs.iter()
                        .map(|&x| field_eval_double(&traces, x, t).map(|w| [x, t, w]))
                        .collect::<Result<Vec<_>, Error>>()
                })
                .collect::<Result<_, _>>()?
        }
        n => {
            return Err(Error::Unsupported(format!(
                "field evaluation covers one or two layers, got {n}"
            ))
            .into())
        }
    };
    let text = csv_table(&["x", "t", "W"], rows.iter().flatten());
    let parameters = json!({
        "x_min": args.x_min, "x_max": x_max, "nx": args.nx,
        "t_min": args.t_min, "tmax": args.tmax, "nt": args.nt,
    });
    finish("simulate", started, parameters, &[&args.config], &args.out, &text, exit::OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureMode {
    /// Direct arrival and the major peaks of a unit point pulse.
    Delta,
    /// Every point-pulse echo up to `--tmax` (one or two layers).
    DeltaMinor,
    /// Sampled trace of the configured pulse on `[0, tmax]`.
    Continuous,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to `delta` for a delta pulse and `continuous` otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<MeasureMode>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

pub fn measure(args: &MeasureArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let (scene, pulse) = load_config(&args.config)?;
    let mode = args.mode.unwrap_or(if pulse.is_delta() {
        MeasureMode::Delta
    } else {
        MeasureMode::Continuous
    });
    let need_tmax = || {
        args.tmax
            .ok_or_else(|| CliError::input("this mode needs --tmax"))
    };
    let synth = match mode {
        MeasureMode::Delta => SynthMode::DeltaMajor,
        MeasureMode::DeltaMinor => SynthMode::DeltaWithMinor { t_max: need_tmax()? },
        MeasureMode::Continuous => SynthMode::Continuous {
            pulse,
            t_max: need_tmax()?,
            dt: args.dt,
            step: MarchStep::Auto,
        },
    };
    let text = match synth_measurement(&scene, &synth)? {
        Measurement::Events(events) => csv_table(
            &["t", "amplitude"],
            events.events().iter().map(|e| [e.time, e.amplitude]),
        ),
        Measurement::Samples(series) => csv_table(
            &["t", "m"],
            series.times().zip(&series.values).map(|(t, v)| [t, *v]),
        ),
    };
    let parameters = json!({
        "mode": format!("{mode:?}"),
        "tmax": args.tmax,
        "dt": args.dt,
    });
    finish("measure", started, parameters, &[&args.config], &args.out, &text, exit::OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InvertMode {
    /// Signed heights, one speed per peak.
    Full,
    /// Magnitudes only, candidates selected by the total length.
    Phaseless,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Peaks as CSV (`t,h`) or JSON.
    pub peaks: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to `phaseless` for magnitude-only input and `full` otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<InvertMode>,
    /// Total length of the medium; required in phaseless mode.
    #[arg(long)]
    pub total_length: Option<f64>,
    /// Absolute tolerance on the length sum (default 1e-6 * 2L).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Fail on a positive first peak instead of treating it as negative.
    #[arg(long)]
    pub reject_positive_first: bool,
}

pub fn invert(args: &InvertArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let peaks = read_peaks(&read_input(&args.peaks)?)?;
    let mode = args.mode.unwrap_or(if peaks.is_magnitude_only() {
        InvertMode::Phaseless
    } else {
        InvertMode::Full
    });
    let result = match mode {
        InvertMode::Full => invert_full(&peaks)?,
        InvertMode::Phaseless => {
            let total = args.total_length.ok_or_else(|| {
                CliError::input("phaseless inversion needs --total-length\n\nUsage: echolab invert <PEAKS> --out <OUT> --mode phaseless --total-length <L>")
            })?;
            let options = PhaselessOptions {
                tol: args.tol,
                reject_positive_first: args.reject_positive_first,
            };
            invert_phaseless(&peaks, total, options)?
        }
    };
    let text = serde_json::to_string_pretty(&result).expect("result serializes") + "\n";
    let code = if result.ambiguity_flag {
        eprintln!(
            "echolab: {} of {} candidates meet the length constraint",
            if result.selected_index.is_none() && result.best_index.is_some() {
                "none or several"
            } else {
                "none"
            },
            result.candidates.len()
        );
        exit::NO_UNIQUE_MEDIUM
    } else {
        exit::OK
    };
    let parameters = json!({
        "mode": format!("{mode:?}"),
        "total_length": args.total_length,
        "tol": args.tol,
        "reject_positive_first": args.reject_positive_first,
    });
    finish("invert", started, parameters, &[&args.peaks], &args.out, &text, code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Fdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterfaceArg {
    HarmonicSquare,
    RightLimit,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "fdm")]
    pub oracle: Oracle,
    /// Number of refinement levels, each halving dx.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Coarsest spatial step.
    #[arg(long, default_value_t = DEFAULT_BASE_DX)]
    pub dx: f64,
    /// Horizon; defaults to the last major peak plus 2.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Speed used at nodes lying on an interface.
    #[arg(long, value_enum, default_value = "harmonic-square")]
    pub interface: InterfaceArg,
}

pub fn verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let (scene, pulse) = load_config(&args.config)?;
    if pulse.is_delta() {
        return Err(Error::Unsupported("verification needs a continuous pulse".into()).into());
    }
    if args.levels == 0 {
        return Err(CliError::input("--levels must be at least 1"));
    }
    let horizon = args
        .tmax
        .unwrap_or_else(|| peak_times(&scene).last().copied().unwrap_or(0.0) + 2.0);
    let rule = match args.interface {
        InterfaceArg::HarmonicSquare => InterfaceRule::HarmonicSquare,
        InterfaceArg::RightLimit => InterfaceRule::RightLimit,
    };
    let report = convergence_study(
        &scene,
        &pulse,
        horizon,
        &refinement_levels(args.dx, args.levels),
        rule,
    )?;
    let body = json!({
        "oracle": "fdm",
        "horizon": horizon,
        "interface": rule,
        "levels": report.levels,
        "orders": report.orders,
        "monotone": report.is_monotone(),
        "min_order": report.min_order(),
    });
    let text = serde_json::to_string_pretty(&body).expect("report serializes") + "\n";
    let parameters = json!({
        "levels": args.levels,
        "dx": args.dx,
        "tmax": horizon,
        "interface": rule,
    });
    finish("verify", started, parameters, &[&args.config], &args.out, &text, exit::OK)
}
