//! Direct and inverse solvers for 1-D wave scattering by piecewise-constant
//! layered media on the half line `x > 0`.
//!
//! The medium occupies `(0, L)` with a totally reflecting wall at `x = 0`.
//! Layer 1 is adjacent to the exterior boundary `x = L`; the last layer
//! touches the wall. All quantities are dimensionless with the exterior
//! speed normalized to one, so every layer speed lies in `(0, 1)`.
//!
//! * [`single_layer`]: closed-form boundary trace, field and detector data
//!   for one layer, plus the delta-pulse peak table.
//! * [`multi_layer`]: delay-equation marching for two layers, the N-layer
//!   reflection chain and peak schedule, synthetic measurements.
//! * [`fdm`]: an explicit finite-difference reference solver.
//! * [`inverse`]: peak extraction and exact reconstruction from full or
//!   phaseless peak data.
//! * [`io`]: JSON configuration, CSV/JSON readers and writers.

pub mod error;
pub mod fdm;
pub mod inverse;
pub mod io;
pub mod lattice;
pub mod model;
pub mod multi_layer;
pub mod single_layer;

pub use error::{Error, Result};
pub use model::{
    scene_total_length, AnalyticProfile, Branch, Candidate, Event, EventSeries, InitialPulse,
    Interpolation, Layer, Peak, PeakList, ReconstructionResult, Scene, TimeSeries,
};
