//! File formats: JSON scene configs, peak lists (CSV or JSON) and CSV
//! output with fixed float formatting.

use crate::error::{Error, Result};
use crate::model::{AnalyticProfile, InitialPulse, Interpolation, Layer, Peak, PeakList, Scene};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// A number given either as a JSON number or as a string such as `"3/7"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Value(f64),
    #[serde(with = "ratio_text")]
    Text(f64),
}

mod ratio_text {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(*value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_number(&text).map_err(de::Error::custom)
    }
}

impl Number {
    pub fn get(self) -> f64 {
        match self {
            Number::Value(v) | Number::Text(v) => v,
        }
    }
}

/// Parses `"0.25"` or `"p/q"`.
pub fn parse_number(text: &str) -> Result<f64> {
    let text = text.trim();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a number: {text:?}")))
    };
    match text.split_once('/') {
        Some((p, q)) => Ok(parse(p)? / parse(q)?),
        None => parse(text),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    pub length: Number,
    pub speed: Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerOrder {
    /// The first entry touches the exterior boundary `x = L`.
    #[default]
    ExteriorFirst,
    /// The first entry touches the wall `x = 0`.
    WallFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PulseConfig {
    Delta {
        #[serde(default)]
        center: Option<f64>,
    },
    Gaussian {
        #[serde(default)]
        center: Option<f64>,
        sharpness: f64,
    },
    Tabulated {
        abscissae: Vec<f64>,
        values: Vec<f64>,
        #[serde(default)]
        interpolation: Interpolation,
    },
    /// `cos(x) / (x - pole)` for `x > start`.
    CosRatio { start: f64, pole: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub layers: Vec<LayerConfig>,
    pub detector_offset: Number,
    /// Defaults to the detector position.
    #[serde(default)]
    pub source_position: Option<Number>,
    #[serde(default)]
    pub layer_order: LayerOrder,
    /// Defaults to a delta pulse at the source.
    #[serde(default)]
    pub pulse: Option<PulseConfig>,
}

impl SceneConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("scene config: {e}")))
    }

    pub fn scene(&self) -> Result<Scene> {
        let mut layers = self
            .layers
            .iter()
            .map(|l| Layer::new(l.length.get(), l.speed.get()))
            .collect::<Result<Vec<_>>>()?;
        if self.layer_order == LayerOrder::WallFirst {
            layers.reverse();
        }
        let offset = self.detector_offset.get();
        match self.source_position {
            Some(x0) => Scene::new(layers, offset, x0.get()),
            None => Scene::with_source_at_detector(layers, offset),
        }
    }

    pub fn pulse(&self, scene: &Scene) -> Result<InitialPulse> {
        let x0 = scene.source_position();
        let pulse = match &self.pulse {
            None => InitialPulse::delta(x0),
            Some(PulseConfig::Delta { center }) => InitialPulse::delta(center.unwrap_or(x0)),
            Some(PulseConfig::Gaussian { center, sharpness }) => {
                InitialPulse::gaussian(center.unwrap_or(x0), *sharpness)?
            }
            Some(PulseConfig::Tabulated {
                abscissae,
                values,
                interpolation,
            }) => InitialPulse::tabulated(abscissae.clone(), values.clone(), *interpolation)?,
            Some(PulseConfig::CosRatio { start, pole }) => {
                InitialPulse::Analytic(AnalyticProfile::cos_ratio(*start, *pole))
            }
        };
        scene.check_pulse(&pulse)?;
        Ok(pulse)
    }

    /// Parses and validates a config, returning the scene and its pulse.
    pub fn load(text: &str) -> Result<(Scene, InitialPulse)> {
        let config = Self::parse(text)?;
        let scene = config.scene()?;
        let pulse = config.pulse(&scene)?;
        Ok((scene, pulse))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PeakRecord {
    t: f64,
    h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PeakFile {
    #[serde(default)]
    magnitude_only: bool,
    peaks: Vec<PeakRecord>,
}

/// Reads `t,h` rows; a non-numeric header line and blank lines are allowed.
pub fn read_peaks_csv(text: &str) -> Result<PeakList> {
    let mut peaks = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        let header = n == 0
            && line
                .split(',')
                .next()
                .is_some_and(|f| f.trim().parse::<f64>().is_err());
        if line.is_empty() || header {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected two fields, got {}",
                n + 1,
                fields.len()
            )));
        }
        let value = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: not a number: {:?}", n + 1, s.trim())))
        };
        peaks.push(Peak {
            time: value(fields[0])?,
            height: value(fields[1])?,
        });
    }
    PeakList::new(peaks, false)
}

/// Reads `{"magnitude_only": bool, "peaks": [{"t": .., "h": ..}]}`.
pub fn read_peaks_json(text: &str) -> Result<PeakList> {
    let file: PeakFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("peaks file: {e}")))?;
    PeakList::new(
        file.peaks
            .iter()
            .map(|p| Peak {
                time: p.t,
                height: p.h,
            })
            .collect(),
        file.magnitude_only,
    )
}

/// Dispatches on the first non-blank character: `{` means JSON.
pub fn read_peaks(text: &str) -> Result<PeakList> {
    if text.trim_start().starts_with('{') {
        read_peaks_json(text)
    } else {
        read_peaks_csv(text)
    }
}

pub fn write_peaks_json(peaks: &PeakList) -> String {
    let file = PeakFile {
        magnitude_only: peaks.is_magnitude_only(),
        peaks: peaks
            .peaks()
            .iter()
            .map(|p| PeakRecord {
                t: p.time,
                h: p.height,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("peak list serializes") + "\n"
}

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text with a header line and one row per item.
pub fn csv_table<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: AsRef<[f64]>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row.as_ref() {
            if !first {
                out.push(',');
            }
            first = false;
            let _ = write!(out, "{}", format_float(*v));
        }
        out.push('\n');
    }
    out
}
