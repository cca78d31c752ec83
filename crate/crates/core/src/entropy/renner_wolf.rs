//! The min-max variant: smooth the worst slice rather than the average.
//!
//! `g_y(t) = Σ Q*^α` as a function of kept conditional mass `t` is continuous
//! and strictly increasing, and invertible in closed form on each segment. So
//! for a level `L` every slice keeps `t_y(L) = g_y^{-1}(L)`, and the optimum is
//! the smallest `L` whose kept masses cover `1 − ε`; found by bisection.

use alloc::vec::Vec;

use super::truncation::Chain;
use super::EntropyQuery;
use crate::dist::{sorted_conditional, JointDistribution};
use crate::math::{ksum, ln, powf};
use crate::{Error, Result};

/// Cap on total support size across slices.
const MAX_ITEMS: usize = 1 << 24;

fn kept_at_level(ch: &Chain, level: f64) -> f64 {
    let n = ch.len();
    if level >= ch.spow[n] {
        return ch.total();
    }
    let k = ch.spow.partition_point(|&s| s <= level) - 1;
    let r = powf(level - ch.spow[k], 1.0 / ch.alpha).min(ch.probs[k]);
    ch.cum[k] + r
}

/// `H̃_α^ε(X|Y) = (1/(1−α)) log min max_y Σ_x Q(x|y)^α` over `ε`-close `Q`.
pub fn renner_wolf_entropy(joint: &JointDistribution, query: EntropyQuery) -> Result<f64> {
    let alpha = query.alpha();
    let eps = query.epsilon();
    let mut items = 0usize;
    let mut chains = Vec::new();
    for y in joint.active_ys() {
        let sc = sorted_conditional(joint, y)?;
        items += sc.support();
        if items > MAX_ITEMS {
            return Err(Error::InstanceTooLarge("min-max search exceeds support budget"));
        }
        chains.push(Chain::new(&sc, joint.py(y), alpha));
    }
    let scale = 1.0 / (1.0 - alpha);
    if chains.len() == 1 {
        let y = chains[0].y;
        return Ok(super::smooth_unconditional_entropy(&joint.conditional(y)?, query));
    }
    let top = chains.iter().map(|c| c.spow[c.len()]).fold(0.0, f64::max);
    if eps == 0.0 {
        return Ok(scale * ln(top));
    }
    let need = 1.0 - eps;
    let kept = |level: f64| ksum(chains.iter().map(|c| c.py * kept_at_level(c, level)));
    let (mut lo, mut hi) = (0.0f64, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if kept(mid) >= need {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(scale * ln(hi))
}

/// Max over slices of `g_y` at a given allocation of kept masses (test helper).
#[cfg(test)]
fn level_of(chains: &[Chain], kept: &[f64]) -> f64 {
    chains
        .iter()
        .zip(kept)
        .map(|(c, &t)| c.g(c.locate(t)))
        .fold(0.0, f64::max)
}
