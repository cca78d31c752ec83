//! Guessing `X` from side information `Y` with the option to give up.
//!
//! For each `y` the guesser walks the symbols in the order `σ_y` and, before
//! the `i`-th guess, gives up with probability `π_y(i)`. The guess still
//! alive at rank `i` has probability `λ_y(i) = Π_{j≤i} (1 − π_y(j))`, so
//!
//! ```text
//! p_e = 1 − Σ_{x,y} λ_y(σ_y(x)) P(x,y)
//! C̄_ρ = Σ_{x,y} λ_y(σ_y(x)) P(x,y) σ_y(x)^ρ
//! ```

mod simulate;

use alloc::vec::Vec;

pub use simulate::{simulate_guessing, SimulationReport};

use crate::dist::{check_block, mixture_block, sorted_conditional, JointDistribution, MixtureSource};
use crate::entropy::{smooth_conditional_entropy, EntropyQuery};
use crate::math::{exp, ksum, ln, powf};
use crate::{Error, Result};

/// Per-`y` guessing order and give-up probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessingStrategy {
    /// `sigma[y][x]` is the 1-based rank at which `x` is guessed.
    sigma: Vec<Vec<usize>>,
    /// `giveup[y][i - 1] = π_y(i)`.
    giveup: Vec<Vec<f64>>,
}

impl GuessingStrategy {
    pub fn new(sigma: Vec<Vec<usize>>, giveup: Vec<Vec<f64>>) -> Result<Self> {
        if sigma.is_empty() || sigma.len() != giveup.len() {
            return Err(Error::EmptyOrRagged);
        }
        let k = sigma[0].len();
        if k == 0 {
            return Err(Error::EmptyOrRagged);
        }
        for (s, p) in sigma.iter().zip(&giveup) {
            if s.len() != k || p.len() != k {
                return Err(Error::EmptyOrRagged);
            }
            let mut seen = alloc::vec![false; k];
            for &r in s {
                if r == 0 || r > k || seen[r - 1] {
                    return Err(Error::SymbolOutOfRange { symbol: r, size: k });
                }
                seen[r - 1] = true;
            }
            if let Some(&bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidParameter {
                    name: "giveup",
                    value: bad,
                    reason: "give-up probabilities must lie in [0, 1]",
                });
            }
        }
        Ok(Self { sigma, giveup })
    }

    pub fn x_size(&self) -> usize {
        self.sigma[0].len()
    }

    pub fn y_size(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self, y: usize) -> &[usize] {
        &self.sigma[y]
    }

    pub fn giveup(&self, y: usize) -> &[f64] {
        &self.giveup[y]
    }

    /// Symbol guessed at 1-based rank `i` under `y`.
    pub fn symbol_at(&self, y: usize, i: usize) -> usize {
        self.sigma[y]
            .iter()
            .position(|&r| r == i)
            .expect("sigma is a bijection")
    }

    /// The dice rank `i*_y` if the strategy is in single-dice normal form
    /// (`π = 0` before it and `π = 1` after it); `None` otherwise.
    pub fn dice_rank(&self, y: usize) -> Option<usize> {
        let p = &self.giveup[y];
        match p.iter().position(|&v| v > 0.0) {
            None => Some(p.len()),
            Some(i) => p[i + 1..].iter().all(|&v| v == 1.0).then_some(i + 1),
        }
    }

    fn check_shape(&self, joint: &JointDistribution) -> Result<()> {
        if (self.x_size(), self.y_size()) != (joint.x_size(), joint.y_size()) {
            return Err(Error::AlphabetMismatch {
                expected: (joint.x_size(), joint.y_size()),
                got: (self.x_size(), self.y_size()),
            });
        }
        Ok(())
    }
}

/// `λ_y(i)` for every `y` and 1-based rank `i` (stored at `i − 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalWeights {
    pub lambda: Vec<Vec<f64>>,
}

/// Analytic (or empirical) performance of a strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuessEvaluation {
    pub error_prob: f64,
    pub cost: f64,
    /// `cost + error_prob · penalty`, present when a penalty was supplied.
    pub combined_cost: Option<f64>,
    pub penalty: Option<f64>,
}

impl GuessEvaluation {
    fn with_penalty(error_prob: f64, cost: f64, penalty: Option<f64>) -> Self {
        Self {
            error_prob,
            cost,
            combined_cost: penalty.map(|c| cost + error_prob * c),
            penalty,
        }
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            reason: "must be positive",
        })
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps.is_finite() && (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "epsilon",
            value: eps,
            reason: "must lie in [0, 1)",
        })
    }
}

pub fn survival_weights(strategy: &GuessingStrategy) -> SurvivalWeights {
    let lambda = strategy
        .giveup
        .iter()
        .map(|p| {
            let mut acc = 1.0;
            p.iter()
                .map(|&pi| {
                    acc *= 1.0 - pi;
                    acc
                })
                .collect()
        })
        .collect();
    SurvivalWeights { lambda }
}

/// `Σ_{x,y} λ_y(σ_y(x)) P(x,y) w(σ_y(x))`.
fn weighted_survival(
    strategy: &GuessingStrategy,
    joint: &JointDistribution,
    weight: impl Fn(usize) -> f64,
) -> Result<f64> {
    strategy.check_shape(joint)?;
    let sw = survival_weights(strategy);
    let mut terms = Vec::with_capacity(joint.x_size() * joint.y_size());
    for y in 0..joint.y_size() {
        for x in 0..joint.x_size() {
            let p = joint.p(x, y);
            if p > 0.0 {
                let r = strategy.sigma[y][x];
                terms.push(sw.lambda[y][r - 1] * p * weight(r));
            }
        }
    }
    Ok(ksum(terms))
}

pub fn error_probability(strategy: &GuessingStrategy, joint: &JointDistribution) -> Result<f64> {
    let kept = weighted_survival(strategy, joint, |_| 1.0)?;
    Ok((1.0 - kept).clamp(0.0, 1.0))
}

pub fn expected_cost(strategy: &GuessingStrategy, joint: &JointDistribution, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    weighted_survival(strategy, joint, |r| powf(r as f64, rho))
}

/// Error probability and cost, plus the combined cost when a penalty is given.
pub fn evaluate(
    strategy: &GuessingStrategy,
    joint: &JointDistribution,
    rho: f64,
    penalty: Option<f64>,
) -> Result<GuessEvaluation> {
    Ok(GuessEvaluation::with_penalty(
        error_probability(strategy, joint)?,
        expected_cost(strategy, joint, rho)?,
        penalty,
    ))
}

/// Descending-probability orders for every `y` (identity where `P_Y(y) = 0`).
fn descending_sigma(joint: &JointDistribution) -> Vec<Vec<usize>> {
    (0..joint.y_size())
        .map(|y| {
            let mut sigma = alloc::vec![0; joint.x_size()];
            match sorted_conditional(joint, y) {
                Ok(sc) => {
                    for (r, &x) in sc.order.iter().enumerate() {
                        sigma[x] = r + 1;
                    }
                }
                Err(_) => {
                    for (x, s) in sigma.iter_mut().enumerate() {
                        *s = x + 1;
                    }
                }
            }
            sigma
        })
        .collect()
}

/// Minimum-cost strategy with `p_e ≤ ε`.
///
/// Both `p_e` and `C̄_ρ` are linear in the survival weights, and keeping the
/// guess at rank `i` alive costs `i^ρ` per unit of retained mass regardless of
/// `y`. So the optimum keeps whole ranks `1, 2, …` across all `y` in order
/// (descending-probability `σ_y`) and splits the last one with a common dice.
pub fn optimal_strategy(joint: &JointDistribution, rho: f64, epsilon: f64) -> Result<GuessingStrategy> {
    check_rho(rho)?;
    check_epsilon(epsilon)?;
    let sigma = descending_sigma(joint);
    let k = joint.x_size();
    let ys = joint.y_size();
    if epsilon == 0.0 {
        return GuessingStrategy::new(sigma, alloc::vec![alloc::vec![0.0; k]; ys]);
    }
    let mut rank_mass = alloc::vec![Vec::with_capacity(ys); k];
    for y in 0..ys {
        for x in 0..k {
            rank_mass[sigma[y][x] - 1].push(joint.p(x, y));
        }
    }
    let rank_mass: Vec<f64> = rank_mass.into_iter().map(ksum).collect();
    let need = 1.0 - epsilon;
    let mut before = 0.0;
    let mut dice = k;
    let mut theta = 1.0;
    for (r, &m) in rank_mass.iter().enumerate() {
        if before + m >= need {
            dice = r;
            theta = if m > 0.0 {
                ((need - before) / m).clamp(0.0, 1.0)
            } else {
                1.0
            };
            break;
        }
        before += m;
    }
    let mut pi = alloc::vec![0.0; k];
    if dice < k {
        pi[dice] = 1.0 - theta;
        for v in &mut pi[dice + 1..] {
            *v = 1.0;
        }
    }
    GuessingStrategy::new(sigma, alloc::vec![pi; ys])
}

/// The strategy built directly from the smooth-entropy optimizer at
/// `α = 1/(1+ρ)`: guess in descending order, keep the truncated ranks, and at
/// the truncation rank give up with probability `1 − Q*/P`.
///
/// Its cost is at most `exp{ρ H_{1/(1+ρ)}^ε(X|Y)}`.
pub fn direct_strategy(joint: &JointDistribution, rho: f64, epsilon: f64) -> Result<GuessingStrategy> {
    check_rho(rho)?;
    check_epsilon(epsilon)?;
    let query = EntropyQuery::new(1.0 / (1.0 + rho), epsilon)?;
    let h = smooth_conditional_entropy(joint, query);
    let sigma = descending_sigma(joint);
    let k = joint.x_size();
    let giveup = (0..joint.y_size())
        .map(|y| {
            let mut pi = alloc::vec![0.0; k];
            let Some(s) = h.q.slice(y) else {
                return pi;
            };
            let t = s.truncation();
            let kept_all = t == s.probs_desc.len() && s.q_desc[t - 1] >= s.probs_desc[t - 1];
            if kept_all {
                return pi;
            }
            if t == 0 {
                pi.fill(1.0);
                return pi;
            }
            pi[t - 1] = (1.0 - s.q_desc[t - 1] / s.probs_desc[t - 1]).clamp(0.0, 1.0);
            for v in &mut pi[t..] {
                *v = 1.0;
            }
            pi
        })
        .collect();
    GuessingStrategy::new(sigma, giveup)
}

/// Lower bound `(1 + log K)^{−ρ} exp{ρ H_{1/(1+ρ)}^ε(X|Y)}` on the cost of any
/// strategy with `p_e ≤ ε`.
pub fn converse_bound(joint: &JointDistribution, rho: f64, epsilon: f64) -> Result<f64> {
    check_rho(rho)?;
    let query = EntropyQuery::new(1.0 / (1.0 + rho), epsilon)?;
    let h = smooth_conditional_entropy(joint, query).value;
    Ok(powf(1.0 + ln(joint.x_size() as f64), -rho) * exp(rho * h))
}

/// Upper bound `exp{ρ H_{1/(1+ρ)}^ε(X|Y)}` achieved by [`direct_strategy`].
pub fn achievability_bound(joint: &JointDistribution, rho: f64, epsilon: f64) -> Result<f64> {
    check_rho(rho)?;
    let query = EntropyQuery::new(1.0 / (1.0 + rho), epsilon)?;
    Ok(exp(rho * smooth_conditional_entropy(joint, query).value))
}

/// Minimizes `C̄*_ρ(ε) + ε c_e` over `ε ∈ [0,1)`.
///
/// Candidates are the grid `0, h, 2h, …` plus every rank boundary of the
/// optimal family, where the piecewise-linear objective has its kinks. Among
/// equal minima the smallest `ε` wins.
pub fn optimize_with_penalty(
    joint: &JointDistribution,
    rho: f64,
    penalty: f64,
    eps_grid: f64,
) -> Result<(f64, GuessEvaluation)> {
    check_rho(rho)?;
    if !(penalty.is_finite() && penalty >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "penalty",
            value: penalty,
            reason: "must be nonnegative",
        });
    }
    if !(eps_grid.is_finite() && eps_grid > 0.0 && eps_grid < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps_grid",
            value: eps_grid,
            reason: "must lie in (0, 1)",
        });
    }
    let mut candidates: Vec<f64> = Vec::new();
    let mut i = 0u64;
    loop {
        let e = i as f64 * eps_grid;
        if e >= 1.0 {
            break;
        }
        candidates.push(e);
        i += 1;
    }
    let full = optimal_strategy(joint, rho, 0.0)?;
    let sigma = &full.sigma;
    let mut rank_mass = alloc::vec![0.0; joint.x_size()];
    for y in 0..joint.y_size() {
        for x in 0..joint.x_size() {
            rank_mass[sigma[y][x] - 1] += joint.p(x, y);
        }
    }
    let mut kept = 0.0;
    for &m in &rank_mass {
        kept += m;
        let e = 1.0 - kept;
        if e > 0.0 && e < 1.0 {
            candidates.push(e);
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let mut best: Option<(f64, GuessEvaluation)> = None;
    for e in candidates {
        let s = optimal_strategy(joint, rho, e)?;
        let ev = evaluate(&s, joint, rho, Some(penalty))?;
        let c = ev.combined_cost.unwrap_or(ev.cost);
        let better = match &best {
            None => true,
            Some((_, b)) => {
                let bc = b.combined_cost.unwrap_or(b.cost);
                c < bc - 1e-12 * bc.abs().max(1.0)
            }
        };
        if better {
            best = Some((e, ev));
        }
    }
    Ok(best.expect("the grid always contains ε = 0"))
}

/// One row of an exponent curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuessExponentPoint {
    pub n: u32,
    /// `(1/n) log C̄*_ρ` for the optimal strategy on the `n`-block.
    pub exponent: f64,
    /// `(ρ/n) H_{1/(1+ρ)}^ε(X^n|Y^n)`, the quantity the operational exponent converges to.
    pub entropy_exponent: f64,
    pub error_prob: f64,
    pub cost: f64,
    /// Converse lower bound on the cost.
    pub bound_lo: f64,
    /// Achievability upper bound on the cost.
    pub bound_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuessExponentCurve {
    pub points: Vec<GuessExponentPoint>,
    /// Single-letter limit `ρ H(X_i|Y_i)` with `ε ∈ [A_i, A_{i+1})`.
    pub target: f64,
}

pub fn guessing_exponent_curve(
    mix: &MixtureSource,
    rho: f64,
    epsilon: f64,
    n_list: &[u32],
    max_cells: usize,
) -> Result<GuessExponentCurve> {
    check_rho(rho)?;
    let query = EntropyQuery::new(1.0 / (1.0 + rho), epsilon)?;
    if let Some(&n) = n_list.iter().max() {
        check_block(mix.x_size(), mix.y_size(), n, max_cells)?;
    }
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let block = mixture_block(mix, n, max_cells)?;
        let h = smooth_conditional_entropy(&block, query).value;
        let s = optimal_strategy(&block, rho, epsilon)?;
        let ev = evaluate(&s, &block, rho, None)?;
        let nf = n as f64;
        points.push(GuessExponentPoint {
            n,
            exponent: ln(ev.cost) / nf,
            entropy_exponent: rho * h / nf,
            error_prob: ev.error_prob,
            cost: ev.cost,
            bound_lo: powf(1.0 + ln(block.x_size() as f64), -rho) * exp(rho * h),
            bound_hi: exp(rho * h),
        });
    }
    Ok(GuessExponentCurve {
        points,
        target: rho * crate::asymptotics::single_letter_target(mix, epsilon)?,
    })
}
