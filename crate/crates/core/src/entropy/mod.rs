//! Conditional ε-smooth Rényi entropy `H_α^ε(X|Y)` for `α ∈ (0,1)`.
//!
//! The infimum over `ε`-close sub-distributions splits into a per-`y`
//! truncation (keep the most likely symbols) and an allocation of the total
//! budget across `y`:
//!
//! ```text
//! H_α^ε(X|Y) = α/(1−α) · log min_{Σ P_Y(y) ε_y = ε} Σ_y P_Y(y) f_y(ε_y)
//! f_y(e)     = [Σ_i Q*_e(x_y^i | y)^α]^{1/α}
//! ```

mod allocation;
mod oracle;
mod renner_wolf;
mod truncation;

use alloc::vec::Vec;

use crate::dist::{mixture_block, sorted_conditional, JointDistribution, MixtureSource};
use crate::math::{ksum, ln, powf};
use crate::{Error, Result};

pub use oracle::oracle_allocation;
pub use renner_wolf::renner_wolf_entropy;
pub use truncation::{inner_score, truncated_q, truncation_point};

use allocation::SolverOptions;
use truncation::{Chain, Cut};

/// Order `α ∈ (0,1)` and smoothing budget `ε ∈ [0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyQuery {
    alpha: f64,
    epsilon: f64,
}

impl EntropyQuery {
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(epsilon.is_finite() && (0.0..1.0).contains(&epsilon)) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "must lie in [0, 1)",
            });
        }
        Ok(Self { alpha, epsilon })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (0, 1)",
        })
    }
}

/// Per-`y` error budgets, indexed by `y`; zero where `P_Y(y) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorAllocation {
    pub eps_y: Vec<f64>,
}

impl ErrorAllocation {
    /// `Σ_y P_Y(y) ε_y`.
    pub fn total(&self, py: &[f64]) -> f64 {
        ksum(self.eps_y.iter().zip(py).map(|(e, p)| e * p))
    }
}

/// The truncated conditional `Q*_{ε_y}(·|y)` for one `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSlice {
    pub y: usize,
    pub py: f64,
    /// `order[i]` is the symbol at rank `i` (0-based, descending probability).
    pub order: Vec<usize>,
    /// Conditional probabilities on the support, descending.
    pub probs_desc: Vec<f64>,
    /// `Q*` on ranks `0..truncation()`; the last entry is the residual.
    pub q_desc: Vec<f64>,
}

impl TruncatedSlice {
    /// `i*_y`, the number of ranks carrying positive `Q*` mass.
    pub fn truncation(&self) -> usize {
        self.q_desc.len()
    }

    /// Conditional `Q*(x|y)` for symbol `x`.
    pub fn q_of(&self, x: usize) -> f64 {
        self.order
            .iter()
            .position(|&s| s == x)
            .and_then(|r| self.q_desc.get(r).copied())
            .unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        ksum(self.q_desc.iter().copied())
    }
}

/// Truncated conditionals for every `y`; `None` where `P_Y(y) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedQ {
    pub slices: Vec<Option<TruncatedSlice>>,
}

impl TruncatedQ {
    pub fn slice(&self, y: usize) -> Option<&TruncatedSlice> {
        self.slices.get(y).and_then(Option::as_ref)
    }

    /// Per-`y` truncation indices `i*_y` (0 for inactive `y`).
    pub fn truncation_indices(&self) -> Vec<usize> {
        self.slices
            .iter()
            .map(|s| s.as_ref().map_or(0, TruncatedSlice::truncation))
            .collect()
    }

    /// Joint sub-distribution value `Q(x,y) = P_Y(y) Q*(x|y)`.
    pub fn joint(&self, x: usize, y: usize) -> f64 {
        self.slice(y).map_or(0.0, |s| s.py * s.q_of(x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    /// `H_α^ε(X|Y)` in nats.
    pub value: f64,
    pub allocation: ErrorAllocation,
    pub q: TruncatedQ,
    /// `Σ_y P_Y(y) f_y(ε_y)`, the quantity inside the logarithm.
    pub objective: f64,
}

fn chains_of(joint: &JointDistribution, alpha: f64) -> Vec<Chain> {
    joint
        .active_ys()
        .map(|y| {
            let sc = sorted_conditional(joint, y).expect("active y has positive marginal");
            Chain::new(&sc, joint.py(y), alpha)
        })
        .collect()
}

fn assemble(joint: &JointDistribution, chains: &[Chain], cuts: &[Cut], alpha: f64) -> EntropyResult {
    let mut eps_y = alloc::vec![0.0; joint.y_size()];
    let mut slices = alloc::vec![None; joint.y_size()];
    let mut terms = Vec::with_capacity(chains.len());
    for (ch, &cut) in chains.iter().zip(cuts) {
        let q_desc = ch.q_desc(cut);
        eps_y[ch.y] = (1.0 - ch.kept(cut)).clamp(0.0, 1.0);
        terms.push(ch.py * inner_score(&q_desc, alpha));
        slices[ch.y] = Some(TruncatedSlice {
            y: ch.y,
            py: ch.py,
            order: ch.order.clone(),
            probs_desc: ch.probs.clone(),
            q_desc,
        });
    }
    let objective = ksum(terms);
    EntropyResult {
        value: alpha / (1.0 - alpha) * ln(objective),
        allocation: ErrorAllocation { eps_y },
        q: TruncatedQ { slices },
        objective,
    }
}

pub(crate) fn optimize_with(joint: &JointDistribution, query: EntropyQuery, opts: SolverOptions) -> EntropyResult {
    let chains = chains_of(joint, query.alpha);
    let cuts = allocation::solve(&chains, 1.0 - query.epsilon, opts);
    assemble(joint, &chains, &cuts, query.alpha)
}

/// Optimal truncations and budget allocation.
pub fn optimize_allocation(joint: &JointDistribution, query: EntropyQuery) -> EntropyResult {
    optimize_with(joint, query, SolverOptions::default())
}

/// `H_α^ε(X|Y)` with the optimal allocation and truncations attached.
pub fn smooth_conditional_entropy(joint: &JointDistribution, query: EntropyQuery) -> EntropyResult {
    optimize_allocation(joint, query)
}

/// `H_α^ε(X)` for a single pmf (any order, zeros allowed).
pub fn smooth_unconditional_entropy(pmf: &[f64], query: EntropyQuery) -> f64 {
    let sc = crate::dist::SortedConditional::from_pmf(0, pmf);
    let q = truncated_q(&sc, query.epsilon);
    let g = ksum(q.iter().filter(|&&v| v > 0.0).map(|&v| powf(v, query.alpha)));
    ln(g) / (1.0 - query.alpha)
}

/// Arimoto's conditional Rényi entropy, `α/(1−α) log Σ_y [Σ_x P(x,y)^α]^{1/α}`.
pub fn arimoto_conditional_renyi(joint: &JointDistribution, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let mut terms = Vec::with_capacity(joint.y_size());
    for y in 0..joint.y_size() {
        let g = ksum(
            (0..joint.x_size())
                .map(|x| joint.p(x, y))
                .filter(|&p| p > 0.0)
                .map(|p| powf(p, alpha)),
        );
        if g > 0.0 {
            terms.push(powf(g, 1.0 / alpha));
        }
    }
    Ok(alpha / (1.0 - alpha) * ln(ksum(terms)))
}

/// `(1/n) H_α^ε(X^n|Y^n)` for the `n`-block of a mixture source.
pub fn finite_n_rate(mix: &MixtureSource, query: EntropyQuery, n: u32, max_cells: usize) -> Result<f64> {
    let block = mixture_block(mix, n, max_cells)?;
    Ok(smooth_conditional_entropy(&block, query).value / n as f64)
}
