//! Monte Carlo checks of the samplers against their analytic laws.

use agd::analytics::{mean_s_tilde, survival_tau, QuadratureSpec};
use agd::exec::{replicate, Execution};
use agd::model::rng_from_seed;
use agd::poisson::{class_counts_until, intensity_class, sample_class, simulate_representation};
use agd::record::{run_record_direct, run_record_jump, JumpChain};
use agd::stats::{pooled_se, Summary};
use agd::CostStream;

const EXEC: Execution = Execution::Parallel;

#[test]
fn residence_survival_matches_quadrature() {
    let quad = QuadratureSpec::default();
    let samples = 200_000u64;
    let grid = [(1usize, 1u64), (1, 9), (2, 3), (2, 25), (3, 8), (4, 60)];
    let hits = replicate(samples, 31, EXEC, |_, s| {
        let mut rng = rng_from_seed(s);
        let taus: Vec<u64> = JumpChain::new(&mut rng).take(4).map(|(_, t)| t).collect();
        grid.map(|(j, k)| (taus[j - 1] > k) as u64)
    });
    for (c, &(j, k)) in grid.iter().enumerate() {
        let freq = hits.iter().map(|h| h[c]).sum::<u64>() as f64 / samples as f64;
        let p = survival_tau(j as u64, k, &quad).unwrap();
        let sd = (p * (1.0 - p) / samples as f64).sqrt();
        assert!((freq - p).abs() < 4.0 * sd, "j={j} k={k}: {freq} vs {p}");
    }
}

#[test]
fn class_frequencies_follow_intensities() {
    let a = 6;
    for t in [0.4f64, 1.5, 4.0] {
        let draws = 200_000;
        let mut rng = rng_from_seed(t.to_bits());
        let mut counts = vec![0u64; a as usize];
        for _ in 0..draws {
            counts[sample_class(a, t, &mut rng) as usize - 1] += 1;
        }
        for i in 1..=a {
            let p = intensity_class(i, a, t).unwrap();
            let freq = counts[i as usize - 1] as f64 / draws as f64;
            let sd = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((freq - p).abs() < 4.0 * sd + 1e-12, "t={t} i={i}: {freq} vs {p}");
        }
    }
}

#[test]
fn unstopped_class_counts_have_mean_one_over_i() {
    let paths = 40_000;
    let counts = replicate(paths, 77, EXEC, |_, s| class_counts_until(6, 40.0, &mut rng_from_seed(s)));
    for i in 1..=6usize {
        let xs: Vec<f64> = counts.iter().map(|c| c[i - 1] as f64).collect();
        let s = Summary::from_slice(&xs);
        assert!((s.mean - 1.0 / i as f64).abs() < 4.0 * s.std_error(), "i={i}: {}", s.mean);
    }
}

#[test]
fn three_samplers_agree_on_small_threshold() {
    let a = 4;
    let reps = 40_000;
    let direct: Vec<f64> = replicate(reps, 1, EXEC, |_, s| {
        run_record_direct(a, &mut CostStream::new(s)).unwrap().s_tilde as f64
    });
    let jump: Vec<f64> = replicate(reps, 2, EXEC, |_, s| {
        run_record_jump(a, &mut rng_from_seed(s)).unwrap().s_tilde as f64
    });
    let rep: Vec<f64> = replicate(reps, 3, EXEC, |_, s| {
        simulate_representation(a, &mut rng_from_seed(s)).unwrap().s_tilde as f64
    });
    let exact = mean_s_tilde(a).unwrap();
    let sums = [direct, jump, rep].map(|x| Summary::from_slice(&x));
    for s in &sums {
        assert!((s.mean - exact).abs() < 4.0 * s.std_error(), "{} vs {exact}", s.mean);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            assert!((sums[i].mean - sums[j].mean).abs() < 4.0 * pooled_se(&sums[i], &sums[j]));
        }
    }
}

#[test]
fn threshold_one_stops_at_first_value() {
    let mut stream = CostStream::new(5);
    let out = run_record_direct(1, &mut stream).unwrap();
    assert_eq!((out.s_tilde, out.v_tilde), (1, 1));
    let jump = run_record_jump(1, &mut rng_from_seed(5)).unwrap();
    assert_eq!((jump.s_tilde, jump.v_tilde), (1, 1));
}
