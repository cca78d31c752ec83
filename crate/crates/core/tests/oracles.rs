mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{arimoto, dirichlet_joint, single_dice_oracle};
use smooth_renyi_core::dist::JointDistribution;
use smooth_renyi_core::entropy::{
    optimize_allocation, oracle_allocation, renner_wolf_entropy, smooth_conditional_entropy, EntropyQuery,
};
use smooth_renyi_core::guessing::{direct_strategy, evaluate, optimal_strategy};

fn dist_b() -> JointDistribution {
    JointDistribution::validate(&[vec![0.20, 0.35], vec![0.15, 0.05], vec![0.10, 0.05], vec![0.05, 0.05]]).unwrap()
}

#[test]
fn dist_b_matches_fine_grid() {
    let q = EntropyQuery::new(0.5, 0.1).unwrap();
    let want = oracle_allocation(&dist_b(), q, 1e-4).unwrap();
    let got = optimize_allocation(&dist_b(), q);
    assert!((got.value - want.value).abs() <= 1e-6 * want.value.abs());
    assert!(renner_wolf_entropy(&dist_b(), q).unwrap() >= got.value - 1e-12);
    let zero = smooth_conditional_entropy(&dist_b(), EntropyQuery::new(0.5, 0.0).unwrap()).value;
    assert!((zero - arimoto(&dist_b(), 0.5)).abs() < 1e-12);
}

#[test]
fn optimal_guessing_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let (k, ys) = (rng.random_range(2..=4), rng.random_range(1..=2));
        let j = dirichlet_joint(&mut rng, k, ys);
        let rho = rng.random_range(0.3..3.0);
        let eps = rng.random_range(0.0..0.9);
        let best = single_dice_oracle(&j, rho, eps);
        let opt = evaluate(&optimal_strategy(&j, rho, eps).unwrap(), &j, rho, None).unwrap();
        let direct = evaluate(&direct_strategy(&j, rho, eps).unwrap(), &j, rho, None).unwrap();
        assert!((opt.cost - best).abs() < 1e-9, "{} vs {best}", opt.cost);
        assert!(direct.cost >= best - 1e-9);
        assert!(direct.error_prob <= eps + 1e-10);
    }
}

fn small_joint() -> impl Strategy<Value = JointDistribution> {
    (2usize..=4, 1usize..=2).prop_flat_map(|(k, ys)| {
        prop::collection::vec(0.0f64..1.0, k * ys).prop_filter_map("positive mass", move |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6)
                .then(|| JointDistribution::from_dense(k, ys, w.iter().map(|v| v / s).collect()).ok())
                .flatten()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_never_beats_solver(j in small_joint(), alpha in 0.1f64..0.9, eps in 0.0f64..0.8) {
        let q = EntropyQuery::new(alpha, eps).unwrap();
        let got = optimize_allocation(&j, q).value;
        let grid = oracle_allocation(&j, q, 5e-3).unwrap().value;
        prop_assert!(got <= grid + 1e-9 * grid.abs().max(1.0));
    }

    #[test]
    fn optimal_guessing_is_minimal(j in small_joint(), rho in 0.3f64..3.0, eps in 0.0f64..0.9) {
        let opt = evaluate(&optimal_strategy(&j, rho, eps).unwrap(), &j, rho, None).unwrap();
        prop_assert!((opt.cost - single_dice_oracle(&j, rho, eps)).abs() < 1e-9);
    }
}
