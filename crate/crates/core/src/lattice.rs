//! Integer-part evaluation on delay lattices.
//!
//! Sample times frequently land exactly on lattice points such as
//! `t = D + k * 2L / c`, where a plain `floor` flips between `k` and `k - 1`
//! with the last bit of rounding. Values within [`LATTICE_GUARD`] of an
//! integer are snapped to it, which applies the left-closed interval
//! convention `[k, k + 1)`.

/// Snapping radius for integer-part evaluation.
pub const LATTICE_GUARD: f64 = 1e-9;

/// Integer part of `x` with snapping to nearby integers.
pub fn lattice_floor(x: f64) -> i64 {
    let nearest = x.round();
    if (x - nearest).abs() < LATTICE_GUARD {
        nearest as i64
    } else {
        x.floor() as i64
    }
}

/// Finds the largest step `h` that divides every value in `values` up to the
/// lattice guard, trying `h = min(values) / k` for `k = 1..=max_divisions`.
/// Zero entries are ignored.
pub fn commensurate_step(values: &[f64], max_divisions: usize) -> Option<f64> {
    let positive: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
    let smallest = positive.iter().copied().fold(f64::INFINITY, f64::min);
    if !smallest.is_finite() {
        return None;
    }
    (1..=max_divisions).map(|k| smallest / k as f64).find(|h| {
        positive.iter().all(|v| {
            let ratio = v / h;
            (ratio - ratio.round()).abs() < LATTICE_GUARD * ratio.max(1.0)
        })
    })
}
