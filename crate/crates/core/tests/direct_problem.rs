mod common;

use common::{major_path, merge_by_time, ray_trace};
use echolab_core::multi_layer::{
    continuous_trace, field_eval_double, march_double_layer, minor_peaks_double, peak_times,
    reflection_chain, solve_double_lattice, synth_measurement, MarchStep, SynthMode,
};
use echolab_core::single_layer::{
    delta_peaks_single, g_closed_form, g_recursive, g_sectional, measure_at,
};
use echolab_core::{InitialPulse, Scene};
use proptest::prelude::*;

fn speed() -> impl Strategy<Value = f64> {
    0.05f64..0.95
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn three_routes_agree(c in speed(), l in 0.5f64..5.0, frac in 0.0f64..1.0, a in 0.5f64..20.0) {
        let pulse = InitialPulse::gaussian(l + 1.5, a).unwrap();
        let t = frac * 20.0 * 2.0 * l / c;
        let closed = g_closed_form(&pulse, l, c, t).unwrap();
        let rec = g_recursive(&pulse, l, c, t).unwrap();
        let sec = g_sectional(&pulse, l, c, t).unwrap();
        prop_assert!((closed - rec).abs() <= 1e-12);
        prop_assert!((closed - sec).abs() <= 1e-12);
    }

    #[test]
    fn chain_matches_ray_oracle(
        layers in prop::collection::vec((0.2f64..3.0, speed()), 1..=5),
        offset in 0.5f64..4.0,
    ) {
        let scene = Scene::from_pairs(&layers, offset, layers.iter().map(|p| p.0).sum::<f64>() + offset).unwrap();
        let (lengths, speeds): (Vec<f64>, Vec<f64>) = layers.iter().copied().unzip();
        let times = peak_times(&scene);
        let rho = reflection_chain(&speeds).unwrap();
        let events = ray_trace(&speeds, &lengths, 2.0 * offset, times[times.len() - 1] + 1e-6);
        for n in 1..=speeds.len() + 1 {
            let ray = major_path(&events, n).unwrap();
            prop_assert!((ray.time - times[n - 1]).abs() <= 1e-12 * ray.time.max(1.0));
            prop_assert!((ray.amplitude - rho[n - 1]).abs() <= 1e-14);
        }
    }

    #[test]
    fn double_lattice_matches_ray_paths(c1 in speed(), c2 in speed(), l1 in 0.3f64..2.0, l2 in 0.3f64..2.0) {
        let tau1 = l1 / c1;
        let tau2 = l2 / c2;
        let t_max = 2.0 + 8.0 * tau1.max(tau2);
        let events = ray_trace(&[c1, c2], &[l1, l2], 2.0, t_max);
        let k1_max = ((t_max - 2.0) / tau1) as usize + 1;
        let k2_max = ((t_max - 2.0) / tau2) as usize + 1;
        let lattice = solve_double_lattice(c1, c2, k1_max, k2_max).unwrap();
        for e in &events[1..] {
            let (k1, k2) = (e.counts[0] as i64, e.counts[1] as i64);
            prop_assert!((lattice.g0(k1, k2) - e.amplitude).abs() <= 1e-13,
                "({}, {}): {} vs {}", k1, k2, lattice.g0(k1, k2), e.amplitude);
        }
        prop_assert!((lattice.g0(0, 0) - 0.5 - events[0].amplitude).abs() <= 1e-15);
    }

    #[test]
    fn minor_family_matches_ray_paths(c1 in speed(), c2 in speed()) {
        let scene = Scene::from_pairs(&[(1.0, c1), (1.5, c2)], 1.0, 3.5).unwrap();
        let minor = minor_peaks_double(&scene, 6).unwrap();
        let events = ray_trace(&[c1, c2], &[1.0, 1.5], 2.0, 2.0 + 13.0 / c1);
        for (k, m) in minor.events().iter().enumerate() {
            let ray = events
                .iter()
                .find(|e| e.counts == vec![2 * (k as u32 + 1), 0])
                .unwrap();
            prop_assert!((ray.time - m.time).abs() <= 1e-12 * m.time);
            prop_assert!((ray.amplitude - m.amplitude).abs() <= 1e-14);
        }
    }
}

#[test]
fn synthesized_double_layer_train_matches_ray_oracle() {
    for (c1, c2) in [(0.5, 0.2), (0.2, 0.5), (0.3, 0.7), (0.9, 0.1)] {
        let scene = Scene::from_pairs(&[(1.0, c1), (2.0, c2)], 2.0, 5.0).unwrap();
        let t_max = 60.0;
        let synth = synth_measurement(&scene, &SynthMode::DeltaWithMinor { t_max }).unwrap();
        let events = ray_trace(&[c1, c2], &[1.0, 2.0], 4.0, t_max);
        let mut expected = vec![(0.0, 1.0)];
        expected.extend(merge_by_time(&events, 1e-9, 1e-14));
        let got = synth.events().unwrap().events();
        assert_eq!(got.len(), expected.len(), "({c1}, {c2})");
        for (g, e) in got.iter().zip(&expected) {
            assert!((g.time - e.0).abs() < 1e-9);
            assert!((g.amplitude - e.1).abs() < 1e-12, "({c1}, {c2}) at {}", e.0);
        }
    }
}

#[test]
fn commensurate_march_matches_time_merged_rays() {
    let (c1, c2) = (0.5, 0.2);
    let scene = Scene::from_pairs(&[(1.0, c1), (2.0, c2)], 2.0, 5.0).unwrap();
    let traces =
        march_double_layer(&scene, &InitialPulse::delta(5.0), 80.0, MarchStep::ExactLattice)
            .unwrap();
    let events = ray_trace(&[c1, c2], &[1.0, 2.0], 4.0, 80.0 + 2.0);
    let merged = merge_by_time(&events, 1e-9, 0.0);
    for (t, a) in merged.iter().skip(1) {
        // The detector sees G0 one offset D after it is set at x = L.
        assert!((traces.g0_at(t - 2.0).unwrap() - a).abs() < 1e-12, "t = {t}");
    }
}

#[test]
fn delta_table_matches_ray_oracle() {
    for c in [0.5, 3.0 / 7.0, 0.9] {
        let table = delta_peaks_single(c, 3.0, 5.0, 10).unwrap();
        let rays = ray_trace(&[c], &[3.0], 10.0, 10.0 + 10.5 * 6.0 / c);
        for (e, r) in table.events().iter().zip(&rays) {
            assert!((e.time - r.time).abs() < 1e-9);
            assert!((e.amplitude - r.amplitude).abs() < 1e-15);
        }
    }
}

fn gaussian_example3() -> (Scene, InitialPulse) {
    let scene = Scene::from_pairs(&[(1.0, 0.5), (2.0, 0.2)], 2.0, 6.0).unwrap();
    (scene, InitialPulse::gaussian(6.0, 10.0).unwrap())
}

#[test]
fn double_layer_field_is_continuous_across_interfaces() {
    let (scene, pulse) = gaussian_example3();
    let traces = march_double_layer(&scene, &pulse, 40.0, MarchStep::Auto).unwrap();
    for i in 0..400 {
        let t = i as f64 * 0.1;
        let eps = 1e-9;
        for x in [2.0, 3.0] {
            let below = field_eval_double(&traces, x - eps, t).unwrap();
            let above = field_eval_double(&traces, x + eps, t).unwrap();
            assert!((below - above).abs() < 1e-6, "x = {x}, t = {t}");
        }
        let g1 = traces.g1_at(t).unwrap();
        assert!((field_eval_double(&traces, 2.0, t).unwrap() - g1).abs() < 1e-12);
    }
}

#[test]
fn march_converges_under_refinement() {
    let (scene, pulse) = gaussian_example3();
    let reference = march_double_layer(&scene, &pulse, 30.0, MarchStep::Fixed(1.0 / 512.0)).unwrap();
    let mut errors = Vec::new();
    for dt in [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0] {
        let coarse = march_double_layer(&scene, &pulse, 30.0, MarchStep::Fixed(dt)).unwrap();
        let err = (0..=300)
            .map(|i| {
                let t = i as f64 * 0.1;
                (coarse.g0_at(t).unwrap() - reference.g0_at(t).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-3);
}

#[test]
fn equal_speeds_reduce_to_single_layer() {
    let c = 0.4;
    let single = Scene::from_pairs(&[(3.0, c)], 2.0, 6.0).unwrap();
    let double = Scene::from_pairs(&[(1.0, c), (2.0, c)], 2.0, 6.0).unwrap();
    let pulse = InitialPulse::gaussian(6.0, 10.0).unwrap();
    let trace =
        continuous_trace(&double, &pulse, 0.0, 0.05, 600, MarchStep::Fixed(1.0 / 1024.0)).unwrap();
    for (i, v) in trace.values.iter().enumerate() {
        let exact = measure_at(&single, &pulse, i as f64 * 0.05).unwrap();
        assert!((v - exact).abs() < 1e-5, "t = {}: {}", i as f64 * 0.05, v - exact);
    }
}

#[test]
fn minor_echoes_interleave_when_first_layer_round_trip_is_short() {
    // Round trips 4 (outer) and 20 (inner): outer-layer echoes fill the gap
    // before the wall echo.
    let scene = Scene::from_pairs(&[(1.0, 0.5), (2.0, 0.2)], 2.0, 5.0).unwrap();
    let majors = peak_times(&scene);
    assert_eq!(majors, vec![4.0, 8.0, 28.0]);
    let train = synth_measurement(&scene, &SynthMode::DeltaWithMinor { t_max: 40.0 }).unwrap();
    let between: Vec<f64> = train
        .events()
        .unwrap()
        .events()
        .iter()
        .map(|e| e.time)
        .filter(|t| *t > majors[1] && *t < majors[2])
        .collect();
    assert_eq!(between, vec![12.0, 16.0, 20.0, 24.0]);

    // Round trips 10 and 8: nothing arrives before the wall echo.
    let swapped = Scene::from_pairs(&[(1.0, 0.2), (2.0, 0.5)], 2.0, 5.0).unwrap();
    let majors = peak_times(&swapped);
    let train = synth_measurement(&swapped, &SynthMode::DeltaWithMinor { t_max: 40.0 }).unwrap();
    let times: Vec<f64> = train.events().unwrap().events().iter().map(|e| e.time).collect();
    assert_eq!(&times[..4], &[0.0, majors[0], majors[1], majors[2]]);
}

#[test]
fn coincident_paths_merge_in_time_but_not_on_the_lattice() {
    // G0(2,2) and G0(12,0) of the (1/2, 1/5) layer both arrive 24 after
    // the first hit.
    let (c1, c2) = (0.5, 0.2);
    let lattice = solve_double_lattice(c1, c2, 12, 2).unwrap();
    let scene = Scene::from_pairs(&[(1.0, c1), (2.0, c2)], 2.0, 5.0).unwrap();
    let traces =
        march_double_layer(&scene, &InitialPulse::delta(5.0), 30.0, MarchStep::ExactLattice)
            .unwrap();
    let merged = traces.g0_at(2.0 + 24.0).unwrap();
    assert!((merged - lattice.g0(2, 2) - lattice.g0(12, 0)).abs() < 1e-15);
    assert!((lattice.g0(2, 2) + 0.362812).abs() < 1e-6);
}
