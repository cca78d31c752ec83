use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_rho, GuessEvaluation, GuessingStrategy};
use crate::dist::{CellSampler, JointDistribution};
use crate::math::{powf, sqrt};
use crate::{Error, Result};

/// Empirical estimates from playing the guessing game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub estimate: GuessEvaluation,
    pub error_stderr: f64,
    pub cost_stderr: f64,
}

/// Plays `trials` rounds: draw `(x, y)`, then for rank `i = 1, 2, …` give up
/// with probability `π_y(i)` or guess the rank-`i` symbol. A round that ends in
/// a correct guess at rank `i` costs `i^ρ`; a round that gives up costs nothing.
pub fn simulate_guessing(
    strategy: &GuessingStrategy,
    joint: &JointDistribution,
    rho: f64,
    seed: u64,
    trials: u64,
) -> Result<SimulationReport> {
    check_rho(rho)?;
    strategy.check_shape(joint)?;
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            reason: "need at least one trial",
        });
    }
    let k = joint.x_size();
    // inverse of sigma, so a guess is one lookup
    let at_rank: alloc::vec::Vec<alloc::vec::Vec<usize>> = (0..joint.y_size())
        .map(|y| {
            let mut inv = alloc::vec![0; k];
            for (x, &r) in strategy.sigma(y).iter().enumerate() {
                inv[r - 1] = x;
            }
            inv
        })
        .collect();
    let costs: alloc::vec::Vec<f64> = (1..=k).map(|i| powf(i as f64, rho)).collect();

    let sampler = CellSampler::new(joint);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut errors, mut sum, mut sum_sq) = (0u64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let (x, y) = sampler.draw(&mut rng);
        let pi = strategy.giveup(y);
        let mut cost = None;
        for i in 0..k {
            if pi[i] > 0.0 && (pi[i] >= 1.0 || rng.random::<f64>() < pi[i]) {
                break;
            }
            if at_rank[y][i] == x {
                cost = Some(costs[i]);
                break;
            }
        }
        match cost {
            Some(c) => {
                sum += c;
                sum_sq += c * c;
            }
            None => errors += 1,
        }
    }
    let n = trials as f64;
    let pe = errors as f64 / n;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(SimulationReport {
        trials,
        estimate: GuessEvaluation {
            error_prob: pe,
            cost: mean,
            combined_cost: None,
            penalty: None,
        },
        error_stderr: sqrt(pe * (1.0 - pe) / n),
        cost_stderr: sqrt(var / n),
    })
}
