//! Finite-block diagnostics for mixtures of i.i.d. sources.
//!
//! For a mixture with components sorted by decreasing `H(X_i|Y_i)` and
//! thresholds `A_i = Σ_{j<i} w_j`, the smooth entropy rate at
//! `ε ∈ [A_i, A_{i+1})` is `H(X_i|Y_i)` for every `α ∈ (0,1)`.

use alloc::vec::Vec;

use crate::dist::{check_block, conditional_entropy, mixture_block, JointDistribution, MixtureSource};
use crate::entropy::{arimoto_conditional_renyi, smooth_conditional_entropy, EntropyQuery};
use crate::guessing::{check_epsilon, check_rho, evaluate, optimal_strategy};
use crate::math::ln;
use crate::Result;

/// Offset used for the sensitivity column.
pub const SENSITIVITY_STEP: f64 = 1e-3;
/// Number of trailing rows checked for a nonincreasing `|gap|`.
pub const TAIL_WINDOW: usize = 5;

/// The 1-based component index `i` with `A_i ≤ ε < A_{i+1}`.
pub fn regime_index(mix: &MixtureSource, epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    let a = mix.cumulative();
    let m = mix.components().len();
    Ok(a[..m].iter().filter(|&&ai| ai <= epsilon).count().max(1))
}

/// `H(X_i|Y_i)` for the regime of `ε`.
pub fn single_letter_target(mix: &MixtureSource, epsilon: f64) -> Result<f64> {
    let i = regime_index(mix, epsilon)?;
    Ok(mix.component_entropies()[i - 1])
}

/// True when `ε` sits exactly on an interior threshold `A_i`.
pub fn on_regime_boundary(mix: &MixtureSource, epsilon: f64) -> bool {
    let a = mix.cumulative();
    a[1..a.len() - 1].contains(&epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: u32,
    /// `(1/n) H_α^ε(X^n|Y^n)`.
    pub rate: f64,
    pub target: f64,
    /// `rate − target`.
    pub gap: f64,
    /// `(1/(n(1−α))) log(1−ε)`, below which no rate can fall.
    pub lower_bound: f64,
    /// The rate at `ε + 10^-3`, or `None` when that leaves `[0,1)`.
    pub sensitivity_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub regime: usize,
    /// `|gap|` nonincreasing over the last [`TAIL_WINDOW`] rows.
    pub monotone_tail_ok: bool,
    /// `ε` equals an interior threshold, where the single-letter value is not claimed.
    pub boundary: bool,
}

impl ConvergenceReport {
    pub fn lower_bound_ok(&self) -> bool {
        self.rows.iter().all(|r| r.rate >= r.lower_bound - 1e-12)
    }
}

pub fn convergence_report(
    mix: &MixtureSource,
    query: EntropyQuery,
    n_max: u32,
    max_cells: usize,
) -> Result<ConvergenceReport> {
    let eps = query.epsilon();
    let alpha = query.alpha();
    let regime = regime_index(mix, eps)?;
    let target = mix.component_entropies()[regime - 1];
    check_block(mix.x_size(), mix.y_size(), n_max, max_cells)?;
    let shifted = EntropyQuery::new(alpha, eps + SENSITIVITY_STEP).ok();
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let block = mixture_block(mix, n, max_cells)?;
        let nf = n as f64;
        let rate = smooth_conditional_entropy(&block, query).value / nf;
        let sensitivity_rate = shifted.map(|q| smooth_conditional_entropy(&block, q).value / nf);
        rows.push(ConvergenceRow {
            n,
            rate,
            target,
            gap: rate - target,
            lower_bound: ln(1.0 - eps) / (nf * (1.0 - alpha)),
            sensitivity_rate,
        });
    }
    let tail = &rows[rows.len().saturating_sub(TAIL_WINDOW)..];
    let monotone_tail_ok = tail.windows(2).all(|w| w[1].gap.abs() <= w[0].gap.abs() + 1e-12);
    Ok(ConvergenceReport {
        rows,
        regime,
        monotone_tail_ok,
        boundary: on_regime_boundary(mix, eps),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastRow {
    pub n: u32,
    /// `(ρ/n) H_{1/(1+ρ)}^ε(X^n|Y^n)` at the given `ε`.
    pub eps_exponent: f64,
    /// `(1/n) log C̄*_ρ` of the optimal strategy at the given `ε`.
    pub eps_cost_exponent: f64,
    /// `(ρ/n) H_{1/(1+ρ)}(X^n|Y^n)` with no smoothing.
    pub zero_error_exponent: f64,
    /// Arikan's exponent `ρ H_{1/(1+ρ)}(X|Y)`, constant in `n`.
    pub arikan_exponent: f64,
    /// `ρ H(X|Y)`, the vanishing-error limit.
    pub shannon_target: f64,
}

/// Vanishing-error exponents against the zero-error (Arikan) exponent for one
/// i.i.d. component, for `n = 1..=n_max`.
pub fn vanishing_vs_zero_error_contrast(
    component: &JointDistribution,
    rho: f64,
    epsilon: f64,
    n_max: u32,
    max_cells: usize,
) -> Result<Vec<ContrastRow>> {
    check_rho(rho)?;
    let alpha = 1.0 / (1.0 + rho);
    let q_eps = EntropyQuery::new(alpha, epsilon)?;
    let q_zero = EntropyQuery::new(alpha, 0.0)?;
    check_block(component.x_size(), component.y_size(), n_max, max_cells)?;
    let arikan = rho * arimoto_conditional_renyi(component, alpha)?;
    let shannon = rho * conditional_entropy(component);
    let mix = MixtureSource::iid(component.clone());
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let block = mixture_block(&mix, n, max_cells)?;
        let nf = n as f64;
        let s = optimal_strategy(&block, rho, epsilon)?;
        let cost = evaluate(&s, &block, rho, None)?.cost;
        rows.push(ContrastRow {
            n,
            eps_exponent: rho * smooth_conditional_entropy(&block, q_eps).value / nf,
            eps_cost_exponent: ln(cost) / nf,
            zero_error_exponent: rho * smooth_conditional_entropy(&block, q_zero).value / nf,
            arikan_exponent: arikan,
            shannon_target: shannon,
        });
    }
    Ok(rows)
}
