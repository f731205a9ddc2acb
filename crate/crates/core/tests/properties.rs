//! Structural invariants of batching and the splitting maps over random sizes.

use proptest::prelude::*;
use sgsplit::Strategy as Sampling;
use sgsplit::dataset::generate_simdata;
use sgsplit::objectives::stochastic_gradient;
use sgsplit::optimizers::{hb_step, phi_a, phi_b, strang_step};
use sgsplit::{Batch, LogRegObjective, Objective, OptimizerState, RngStream, ScheduleState};

fn take_batches(sched: &mut ScheduleState, rng: &mut RngStream, count: usize) -> Vec<(Vec<usize>, f64)> {
    (0..count)
        .map(|_| {
            let b = sched.next_batch(rng);
            (b.indices.to_vec(), b.weight)
        })
        .collect()
}

fn shuffled_strategy() -> impl Strategy<Value = Sampling> {
    prop_oneof![
        Just(Sampling::RandomReshuffling),
        Just(Sampling::SymmetricMinibatch),
        Just(Sampling::IncrementalGradient),
        Just(Sampling::ShuffleOnce),
    ]
}

fn sizes() -> impl Strategy<Value = (usize, usize)> {
    (1usize..60).prop_flat_map(|n_total| (Just(n_total), 1..=n_total))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_epoch_is_a_partition(strategy in shuffled_strategy(), (n_total, n) in sizes(), seed in any::<u64>()) {
        let mut sched = ScheduleState::new(strategy, n_total, n).unwrap();
        let r = sched.batches_per_epoch();
        prop_assert_eq!(r, n_total.div_ceil(n));
        let mut rng = RngStream::new(seed, 0);
        for _ in 0..4 {
            let epoch = take_batches(&mut sched, &mut rng, r);
            // One short batch at most: last in a sampled epoch, first in a mirrored one.
            let short: Vec<usize> = (0..r).filter(|&j| epoch[j].0.len() != n).collect();
            prop_assert!(short.len() <= 1);
            if let Some(&j) = short.first() {
                prop_assert!(j == r - 1 || (strategy == Sampling::SymmetricMinibatch && j == 0));
            }
            let mut all: Vec<usize> = epoch.into_iter().flat_map(|b| b.0).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n_total).collect::<Vec<_>>());
        }
    }

    #[test]
    fn sms_periods_are_mirrored((n_total, n) in sizes(), seed in any::<u64>()) {
        let mut sched = ScheduleState::new(Sampling::SymmetricMinibatch, n_total, n).unwrap();
        let r = sched.batches_per_epoch();
        let mut rng = RngStream::new(seed, 0);
        for _ in 0..3 {
            let period = take_batches(&mut sched, &mut rng, 2 * r);
            for p in 0..r {
                prop_assert_eq!(&period[p], &period[2 * r - 1 - p]);
            }
        }
    }

    #[test]
    fn rm_batches_have_full_size_and_unit_weight((n_total, n) in sizes(), seed in any::<u64>()) {
        let mut sched = ScheduleState::new(Sampling::RobbinsMonro, n_total, n).unwrap();
        let mut rng = RngStream::new(seed, 0);
        for (mut b, w) in take_batches(&mut sched, &mut rng, 20) {
            prop_assert_eq!(w, 1.0);
            b.sort_unstable();
            b.dedup();
            prop_assert_eq!(b.len(), n);
            prop_assert!(b.iter().all(|&i| i < n_total));
        }
    }

    #[test]
    fn weighted_epoch_sum_is_scaled_full_gradient(
        strategy in shuffled_strategy(),
        (n_total, n) in (2usize..40).prop_flat_map(|n_total| (Just(n_total), 1..=n_total)),
        seed in any::<u64>(),
    ) {
        let mut rng = RngStream::new(seed, 0);
        let obj = LogRegObjective::with_default_ridge(generate_simdata(n_total, 3, &mut rng).unwrap()).unwrap();
        let x = [0.4, -1.1, 0.7];
        let mut sched = ScheduleState::new(strategy, n_total, n).unwrap();
        let mut sum = [0.0; 3];
        for _ in 0..sched.batches_per_epoch() {
            let b = sched.next_batch(&mut rng);
            for (s, g) in sum.iter_mut().zip(stochastic_gradient(&obj, &b, &x).unwrap()) {
                *s += g;
            }
        }
        let full = obj.full_gradient(&x);
        let scale = n_total as f64 / n as f64;
        let norm = full.iter().fold(0.0f64, |m, g| m.max(g.abs())) * scale;
        for (s, g) in sum.iter().zip(&full) {
            prop_assert!((s - scale * g).abs() <= 1e-12 * norm.max(1e-300), "{} vs {}", s, scale * g);
        }
    }

    #[test]
    fn kick_then_drift_is_heavy_ball(
        x in prop::array::uniform3(-5.0f64..5.0),
        v in prop::array::uniform3(-5.0f64..5.0),
        g in prop::array::uniform3(-5.0f64..5.0),
        h in 1e-4f64..1.0,
        gamma in 0.0f64..5.0,
    ) {
        let mut split = OptimizerState::new(x.to_vec(), v.to_vec());
        phi_b(&mut split, &g, h, gamma);
        phi_a(&mut split, h);
        let mut hb = OptimizerState::new(x.to_vec(), v.to_vec());
        hb_step(&mut hb, &g, h, gamma);
        prop_assert_eq!(split.x, hb.x);
        prop_assert_eq!(split.v, hb.v);
    }

    #[test]
    fn strang_is_conjugate_to_heavy_ball(seed in any::<u64>(), h in 1e-3f64..0.3, gamma in 0.0f64..3.0, steps in 1usize..20) {
        let mut rng = RngStream::new(seed, 0);
        let obj = LogRegObjective::with_default_ridge(generate_simdata(12, 2, &mut rng).unwrap()).unwrap();
        let mut sched = ScheduleState::new(Sampling::RandomReshuffling, 12, 5).unwrap();
        let batches = take_batches(&mut sched, &mut rng, steps);
        let grad = |(idx, w): &(Vec<usize>, f64), x: &[f64]| {
            stochastic_gradient(&obj, &Batch { indices: idx, weight: *w }, x).unwrap()
        };
        let start = OptimizerState::new(vec![0.3, -0.8], vec![1.2, 0.1]);
        let mut strang = start.clone();
        for b in &batches {
            strang_step(&mut strang, |x| grad(b, x), h, gamma);
        }
        let mut hb = start;
        phi_a(&mut hb, 0.5 * h);
        for b in &batches {
            let g = grad(b, &hb.x);
            hb_step(&mut hb, &g, h, gamma);
        }
        phi_a(&mut hb, -0.5 * h);
        for (a, b) in strang.x.iter().chain(&strang.v).zip(hb.x.iter().chain(&hb.v)) {
            prop_assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0));
        }
    }
}
