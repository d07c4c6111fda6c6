//! Acceptance criteria, one line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are evaluated like every other one
//! and reported as `[FAIL]` with their numbers; they do not fail the run
//! unless they unexpectedly pass. Any other failure exits non-zero.

use echolab_core::fdm::{convergence_study, refinement_levels, InterfaceRule};
use echolab_core::inverse::{invert_full, invert_phaseless, PhaselessOptions};
use echolab_core::multi_layer::{
    peak_times, reflection_chain, solve_double_lattice, synth_measurement, SynthMode,
};
use echolab_core::single_layer::{delta_peaks_single, g_closed_form, g_recursive, g_sectional};
use echolab_core::{InitialPulse, PeakList, Scene};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::{Duration, Instant};

/// Criteria whose targets contradict the model; see the project notes.
const KNOWN_FAILURES: &[(&str, &str)] = &[
    (
        "AC1",
        "the third reference height 0.0461 disagrees with rho_3 = 0.046611 of the same medium; \
         the candidate speeds 0.500 / 0.320 only follow from 0.0466",
    ),
    (
        "AC7",
        "with (c1, c2) = (1/5, 1/2) every multiple echo arrives after t3; \
         interleaving happens for (1/2, 1/5)",
    ),
];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> (bool, String) {
    (
        elapsed < limit,
        format!("{:.3} s (limit {} s)", elapsed.as_secs_f64(), limit.as_secs_f64()),
    )
}

fn reference_medium() -> Scene {
    Scene::from_pairs(
        &[(2.5, 3.0 / 7.0), (1.5, 0.4), (1.0, 0.5), (2.0, 0.8)],
        2.0,
        9.0,
    )
    .unwrap()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let scene = reference_medium();
    let times = peak_times(&scene);
    let rho = reflection_chain(&scene.speeds()).unwrap();
    let elapsed = start.elapsed();
    let expected_times = [4.0, 47.0 / 3.0, 139.0 / 6.0, 163.0 / 6.0, 193.0 / 6.0];
    let expected_heights = [0.2000, 0.0145, 0.0461, 0.0956, 0.3923];
    let mut problems = Vec::new();
    for (k, (t, e)) in times.iter().zip(expected_times).enumerate() {
        if (t - e).abs() > 1e-12 {
            problems.push(format!("t{} = {t} vs {e}", k + 1));
        }
    }
    for (k, (r, e)) in rho.iter().zip(expected_heights).enumerate() {
        if (r.abs() - e).abs() > 5e-5 {
            problems.push(format!("|h{}| = {:.6} vs {e:.4}", k + 1, r.abs()));
        }
    }
    let (fast, timing) = within(elapsed, Duration::from_millis(100));
    if !fast {
        problems.push(timing.clone());
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("5 times to 1e-12, 5 heights to 4 decimals, {timing}")
        } else {
            problems.join("; ")
        },
    )
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let scene = reference_medium();
    let rho = reflection_chain(&scene.speeds()).unwrap();
    let pairs: Vec<(f64, f64)> = peak_times(&scene)
        .into_iter()
        .zip(rho.iter().map(|r| r.abs()))
        .collect();
    let peaks = PeakList::magnitudes(&pairs).unwrap();
    let result = invert_phaseless(&peaks, 7.0, PhaselessOptions::default()).unwrap();
    let elapsed = start.elapsed();

    let c1 = 3.0 / 7.0;
    let table = [
        ([c1, 0.400, 0.320, 0.200], 10.280),
        ([c1, 0.400, 0.320, 0.512], 11.840),
        ([c1, 0.400, 0.500, 0.313], 11.562),
        ([c1, 0.400, 0.500, 0.800], 14.000),
        ([c1, 0.459, 0.367, 0.229], 11.061),
        ([c1, 0.459, 0.367, 0.588], 12.852),
        ([c1, 0.459, 0.574, 0.359], 12.533),
        ([c1, 0.459, 0.574, 0.918], 15.331),
    ];
    let mut problems = Vec::new();
    if result.candidates.len() != table.len() {
        problems.push(format!("{} candidates", result.candidates.len()));
    }
    for (i, (cand, (speeds, sum))) in result.candidates.iter().zip(table).enumerate() {
        for (j, (c, e)) in cand.speeds.iter().zip(speeds).enumerate() {
            if (c - e).abs() >= 1e-3 {
                problems.push(format!("seq {} c{} = {c:.5} vs {e:.3}", i + 1, j + 1));
            }
        }
        if (cand.length_sum - sum).abs() >= 1e-3 {
            problems.push(format!("seq {} sum = {:.6} vs {sum:.3}", i + 1, cand.length_sum));
        }
    }
    if result.selected_index != Some(3) || result.ambiguity_flag {
        problems.push(format!(
            "selected {:?}, ambiguous {}",
            result.selected_index, result.ambiguity_flag
        ));
    } else {
        let s = &result.candidates[3];
        let truth = [c1, 0.4, 0.5, 0.8];
        if s.speeds.iter().zip(truth).any(|(a, b)| (a - b).abs() > 1e-12)
            || (s.length_sum - 14.0).abs() > 1e-9
        {
            problems.push(format!("selected speeds {:?}", s.speeds));
        }
    }
    let (fast, timing) = within(elapsed, Duration::from_millis(100));
    if !fast {
        problems.push(timing.clone());
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("8 candidates, sequence 4 selected uniquely with sum 14.000, {timing}")
        } else {
            problems.join("; ")
        },
    )
}

fn ac3() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut worst: f64 = 0.0;
    let samples = 10_000;
    for _ in 0..samples {
        let c = rng.gen_range(0.05..0.95);
        let l = rng.gen_range(0.5..5.0);
        let t = rng.gen_range(0.0..=20.0 * 2.0 * l / c);
        let pulse = InitialPulse::gaussian(l + 2.0, 10.0).unwrap();
        let a = g_closed_form(&pulse, l, c, t).unwrap();
        let b = g_recursive(&pulse, l, c, t).unwrap();
        let s = g_sectional(&pulse, l, c, t).unwrap();
        worst = worst.max((a - b).abs()).max((a - s).abs());
    }
    let (fast, timing) = within(start.elapsed(), Duration::from_secs(5));
    outcome(
        worst <= 1e-12 && fast,
        format!("{samples} samples, max deviation {worst:.2e} (limit 1e-12), {timing}"),
    )
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let scene = Scene::from_pairs(&[(3.0, 0.5)], 5.0, 6.0).unwrap();
    let pulse = InitialPulse::gaussian(6.0, 10.0).unwrap();
    let levels = refinement_levels(8e-3, 3);
    let report = match convergence_study(&scene, &pulse, 30.0, &levels, InterfaceRule::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("solver error: {e}")),
    };
    let (fast, timing) = within(start.elapsed(), Duration::from_secs(60));
    let finest = report.levels.last().unwrap();
    let order = report.min_order().unwrap();
    let errors: Vec<String> = report
        .levels
        .iter()
        .map(|l| format!("{:.2e}", l.l_inf))
        .collect();
    outcome(
        (finest.dx - 2e-3).abs() < 1e-15
            && finest.l_inf <= 2e-2
            && report.is_monotone()
            && order >= 1.0
            && fast,
        format!(
            "l_inf at dx = 8e-3, 4e-3, 2e-3: [{}] (limit 2e-2), min order {order:.2}, {timing}",
            errors.join(", ")
        ),
    )
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let mut layers: Vec<(f64, f64)> = Vec::with_capacity(n);
        while layers.len() < n {
            let c = rng.gen_range(0.05..0.95);
            if layers.last().is_some_and(|p| (p.1 - c).abs() < 0.01) {
                continue;
            }
            layers.push((rng.gen_range(0.1..5.0), c));
        }
        let offset = rng.gen_range(0.5..5.0);
        let total: f64 = layers.iter().map(|p| p.0).sum();
        let scene = Scene::from_pairs(&layers, offset, total + offset).unwrap();
        let rho = reflection_chain(&scene.speeds()).unwrap();
        let pairs: Vec<(f64, f64)> = peak_times(&scene).into_iter().zip(rho).collect();
        let result = match invert_full(&PeakList::signed(&pairs).unwrap()) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("inversion failed: {e}")),
        };
        let cand = &result.candidates[0];
        for (j, (l, c)) in layers.iter().enumerate() {
            worst = worst
                .max((cand.speeds[j] - c).abs() / c)
                .max((cand.lengths[j] - l).abs() / l);
        }
    }
    let (fast, timing) = within(start.elapsed(), Duration::from_secs(1));
    outcome(
        worst <= 1e-10 && fast,
        format!("100 media, max relative error {worst:.2e} (limit 1e-10), {timing}"),
    )
}

fn ac6() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let node = |i: usize| 0.02 + 0.96 * i as f64 / 201.0;
    for i in 1..=200 {
        for j in 1..=200 {
            let rho = reflection_chain(&[node(i), node(j)]).unwrap();
            let q = 1.0 - 4.0 * rho[0] * rho[0];
            let predicted = 2.0 * rho[1] * rho[1] / q - 0.5 * q;
            worst = worst.max((rho[2] - predicted).abs());
        }
    }
    let (fast, timing) = within(start.elapsed(), Duration::from_secs(1));
    outcome(
        worst <= 1e-12 && fast,
        format!("200 x 200 grid, max deviation {worst:.2e} (limit 1e-12), {timing}"),
    )
}

fn ac7() -> Outcome {
    let mut problems = Vec::new();
    let (c1, c2) = (0.5, 0.2);
    let lattice = solve_double_lattice(c1, c2, 4, 4).unwrap();
    let g22 = -8.0 * c1 * c1 * c2 / ((c2 + c1) * (c2 + c1) * (c1 + 1.0) * (c1 + 1.0));
    let g20 = 2.0 * c1 * (c2 - c1) / ((c1 + 1.0) * (c1 + 1.0) * (c2 + c1));
    for (label, got, exact, shown) in [
        ("G0(0,0)", lattice.g0(0, 0), 1.0 / 3.0, 1.0 / 3.0),
        ("G0(2,0)", lattice.g0(2, 0), g20, -0.190476),
        ("G0(2,2)", lattice.g0(2, 2), g22, -0.362812),
    ] {
        if (got - exact).abs() > 1e-10 || (got - shown).abs() > 5e-7 {
            problems.push(format!("{label} = {got}"));
        }
    }

    let scene = Scene::from_pairs(&[(1.0, 0.2), (2.0, 0.5)], 2.0, 5.0).unwrap();
    let majors = peak_times(&scene);
    let t3 = majors[2];
    let train = synth_measurement(&scene, &SynthMode::DeltaWithMinor { t_max: t3 + 20.0 }).unwrap();
    let minors: Vec<f64> = train
        .events()
        .unwrap()
        .events()
        .iter()
        .map(|e| e.time)
        .filter(|t| *t > 0.0 && majors.iter().all(|m| (m - t).abs() > 1e-9))
        .collect();
    let interleaved = minors.iter().filter(|t| **t < t3).count();
    if interleaved == 0 {
        problems.push(format!(
            "(1/5, 1/2): majors at {majors:?}, first minor at {:?}, none before t3 = {t3}",
            minors.first()
        ));
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("lattice amplitudes to 1e-10, {interleaved} minor events before t3")
        } else {
            format!("lattice amplitudes ok; {}", problems.join("; "))
        },
    )
}

fn ac8() -> Outcome {
    let mut worst: f64 = 0.0;
    for c in [0.5, 3.0 / 7.0, 0.9] {
        let table = delta_peaks_single(c, 3.0, 5.0, 11).unwrap();
        let m: Vec<f64> = table.events().iter().map(|e| e.amplitude).collect();
        let ratio = (c - 1.0) / (c + 1.0);
        for k in 1..=10 {
            worst = worst.max((m[k + 1] / m[k] - ratio).abs());
        }
    }
    outcome(
        worst <= 1e-14,
        format!("c in {{1/2, 3/7, 9/10}}, k = 1..10, max deviation {worst:.2e} (limit 1e-14)"),
    )
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 8] = [
        ("AC1", "major peak times and heights of the four-layer medium", ac1),
        ("AC2", "phaseless candidates and total-length selection", ac2),
        ("AC3", "closed-form, recursive and sectional boundary traces agree", ac3),
        ("AC4", "finite-difference cross-validation", ac4),
        ("AC5", "full-data round trip", ac5),
        ("AC6", "wall identity for two layers", ac6),
        ("AC7", "double-layer lattice amplitudes and minor-event ordering", ac7),
        ("AC8", "single-layer geometric ratio law", ac8),
    ];
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        let result = run();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        let tag = if result.passed { "PASS" } else { "FAIL" };
        match (result.passed, known) {
            (false, Some((_, why))) => {
                println!("[{tag}] {id} {title}: {} (known: {why})", result.detail)
            }
            (true, Some(_)) => {
                unexpected += 1;
                println!("[{tag}] {id} {title}: {} (listed as known failure)", result.detail)
            }
            (false, None) => {
                unexpected += 1;
                println!("[{tag}] {id} {title}: {}", result.detail)
            }
            (true, None) => println!("[{tag}] {id} {title}: {}", result.detail),
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria with unexpected outcome");
        std::process::exit(1);
    }
}
