use alloc::vec::Vec;

use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::dist::JointDistribution;

/// Dirichlet(1,…,1) joint of the given shape; every marginal stays positive.
pub fn dirichlet_joint<R: Rng>(rng: &mut R, x_size: usize, y_size: usize) -> JointDistribution {
    let w: Vec<f64> = (0..x_size * y_size)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e + 1e-9
        })
        .collect();
    let s: f64 = w.iter().sum();
    JointDistribution::from_dense(x_size, y_size, w.into_iter().map(|v| v / s).collect()).unwrap()
}

/// Joints with `|X| ≤ max_x`, `|Y| ≤ max_y` and some exact zeros (possibly whole columns).
pub fn joint_strategy(max_x: usize, max_y: usize) -> impl Strategy<Value = JointDistribution> {
    (1..=max_x, 1..=max_y).prop_flat_map(|(xs, ys)| {
        prop::collection::vec(prop_oneof![1 => Just(0.0), 6 => 0.01f64..1.0], xs * ys).prop_filter_map(
            "needs positive mass",
            move |w| {
                let s: f64 = w.iter().sum();
                if s <= 0.0 {
                    return None;
                }
                JointDistribution::from_dense(xs, ys, w.iter().map(|v| v / s).collect()).ok()
            },
        )
    })
}
