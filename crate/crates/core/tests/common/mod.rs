//! Independent reference: ray tracing of a unit point pulse through the
//! layer stack with local interface coefficients.
#![allow(dead_code)]

use std::collections::BTreeMap;

/// One arrival at the detector.
#[derive(Debug, Clone, PartialEq)]
pub struct RayEvent {
    pub time: f64,
    pub amplitude: f64,
    /// Number of traversals of each layer.
    pub counts: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Heading {
    Down,
    Up,
}

/// Traces the left-going half (amplitude 1/2) of a unit pulse that first
/// reaches the medium at `first_arrival - D`, reporting every echo seen at
/// the detector up to `t_max`.
///
/// `speeds[0]` and `lengths[0]` belong to the layer touching the exterior.
/// Rays with identical traversal counts are merged, which is exact because
/// they arrive at the same time.
pub fn ray_trace(speeds: &[f64], lengths: &[f64], first_arrival: f64, t_max: f64) -> Vec<RayEvent> {
    let n = speeds.len();
    let speed = |j: usize| if j == 0 { 1.0 } else { speeds[j - 1] };
    let transit: Vec<f64> = (0..n).map(|j| lengths[j] / speeds[j]).collect();
    let time_of = |counts: &[u32]| {
        first_arrival
            + counts
                .iter()
                .zip(&transit)
                .map(|(k, tau)| *k as f64 * tau)
                .sum::<f64>()
    };

    let mut events = Vec::new();
    let (c0, c1) = (speed(0), speed(1));
    events.push(RayEvent {
        time: first_arrival,
        amplitude: 0.5 * (c1 - c0) / (c1 + c0),
        counts: vec![0; n],
    });

    // Packets that have just entered layer `j` (1-based), keyed so that
    // identical paths merge.
    let mut front: BTreeMap<(Vec<u32>, usize, Heading), f64> = BTreeMap::new();
    front.insert((vec![0; n], 1, Heading::Down), 0.5 * 2.0 * c1 / (c0 + c1));
    while !front.is_empty() {
        let mut next: BTreeMap<(Vec<u32>, usize, Heading), f64> = BTreeMap::new();
        let mut push = |key: (Vec<u32>, usize, Heading), a: f64| {
            if a != 0.0 {
                *next.entry(key).or_insert(0.0) += a;
            }
        };
        for ((counts, j, heading), amplitude) in front {
            let mut counts = counts;
            counts[j - 1] += 1;
            if time_of(&counts) > t_max + 1e-9 {
                continue;
            }
            let here = speed(j);
            match heading {
                Heading::Down if j == n => {
                    push((counts, j, Heading::Up), -amplitude);
                }
                Heading::Down => {
                    let below = speed(j + 1);
                    let r = (below - here) / (below + here);
                    let t = 2.0 * below / (below + here);
                    push((counts.clone(), j, Heading::Up), r * amplitude);
                    push((counts, j + 1, Heading::Down), t * amplitude);
                }
                Heading::Up => {
                    let above = speed(j - 1);
                    let r = (above - here) / (above + here);
                    let t = 2.0 * above / (above + here);
                    push((counts.clone(), j, Heading::Down), r * amplitude);
                    if j == 1 {
                        events.push(RayEvent {
                            time: time_of(&counts),
                            amplitude: t * amplitude,
                            counts,
                        });
                    } else {
                        push((counts, j - 1, Heading::Up), t * amplitude);
                    }
                }
            }
        }
        front = next;
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time));
    events
}

/// Sums arrivals closer than `tol` and drops those below `floor`.
pub fn merge_by_time(events: &[RayEvent], tol: f64, floor: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for e in events {
        match out.last_mut() {
            Some(last) if (e.time - last.0).abs() <= tol => last.1 += e.amplitude,
            _ => out.push((e.time, e.amplitude)),
        }
    }
    out.retain(|e| e.1.abs() >= floor);
    out
}

/// Arrival of the path that goes straight down to interface `n` (1-based,
/// `N + 1` being the wall) and straight back.
pub fn major_path(events: &[RayEvent], n: usize) -> Option<&RayEvent> {
    events.iter().find(|e| {
        e.counts
            .iter()
            .enumerate()
            .all(|(j, k)| *k == if j + 1 < n { 2 } else { 0 })
    })
}
