//! Finite joint distributions over `X × Y`, conditionals sorted by likelihood,
//! mixtures of i.i.d. components and their block extensions.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math::{ksum, ln};
use crate::{Error, Result};

/// Invariant tolerance on total mass.
pub const MASS_TOL: f64 = 1e-12;
/// Inputs whose total mass is within this of 1 are renormalized; others are rejected.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// A dense joint pmf `p(x, y)`, stored row-major by `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    x_size: usize,
    y_size: usize,
    probs: Vec<f64>,
    py: Vec<f64>,
}

impl JointDistribution {
    /// Validates a matrix indexed `raw[x][y]`.
    pub fn validate(raw: &[Vec<f64>]) -> Result<Self> {
        let x_size = raw.len();
        let y_size = raw.first().map_or(0, Vec::len);
        if x_size == 0 || y_size == 0 || raw.iter().any(|row| row.len() != y_size) {
            return Err(Error::EmptyOrRagged);
        }
        let probs = raw.iter().flatten().copied().collect();
        Self::from_dense(x_size, y_size, probs)
    }

    /// Same as [`validate`](Self::validate) for an already flattened row-major buffer.
    pub fn from_dense(x_size: usize, y_size: usize, mut probs: Vec<f64>) -> Result<Self> {
        if x_size == 0 || y_size == 0 || probs.len() != x_size * y_size {
            return Err(Error::EmptyOrRagged);
        }
        for (i, &v) in probs.iter().enumerate() {
            let (x, y) = (i / y_size, i % y_size);
            if !v.is_finite() {
                return Err(Error::NonFinite { x, y });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { x, y, value: v });
            }
        }
        let sum = ksum(probs.iter().copied());
        if (sum - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::MassDeviationTooLarge { sum });
        }
        if sum != 1.0 {
            probs.iter_mut().for_each(|v| *v /= sum);
        }
        let py = (0..y_size)
            .map(|y| ksum((0..x_size).map(|x| probs[x * y_size + y])))
            .collect();
        Ok(Self {
            x_size,
            y_size,
            probs,
            py,
        })
    }

    /// A distribution with trivial side information (`|Y| = 1`).
    pub fn from_pmf(pmf: &[f64]) -> Result<Self> {
        Self::from_dense(pmf.len(), 1, pmf.to_vec())
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    #[inline]
    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.y_size + y]
    }

    /// Marginal `P_Y(y)`.
    #[inline]
    pub fn py(&self, y: usize) -> f64 {
        self.py[y]
    }

    pub fn marginal_y(&self) -> &[f64] {
        &self.py
    }

    /// Row-major probabilities.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Side-information symbols that carry a conditional slice.
    pub fn active_ys(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.y_size).filter(move |&y| self.py[y] > 0.0)
    }

    /// `P_{X|Y}(·|y)` in original symbol order.
    pub fn conditional(&self, y: usize) -> Result<Vec<f64>> {
        self.check_y(y)?;
        let py = self.py[y];
        if py <= 0.0 {
            return Err(Error::ZeroMarginal { y });
        }
        Ok((0..self.x_size).map(|x| self.p(x, y) / py).collect())
    }

    pub fn check_y(&self, y: usize) -> Result<()> {
        if y >= self.y_size {
            return Err(Error::SymbolOutOfRange {
                symbol: y,
                size: self.y_size,
            });
        }
        Ok(())
    }

    pub fn check_x(&self, x: usize) -> Result<()> {
        if x >= self.x_size {
            return Err(Error::SymbolOutOfRange {
                symbol: x,
                size: self.x_size,
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_shape(&self, x_size: usize, y_size: usize) -> Result<()> {
        if (self.x_size, self.y_size) != (x_size, y_size) {
            return Err(Error::AlphabetMismatch {
                expected: (x_size, y_size),
                got: (self.x_size, self.y_size),
            });
        }
        Ok(())
    }
}

/// `P_{X|Y}(·|y)` sorted in nonincreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedConditional {
    pub y: usize,
    /// `order[i]` is the original symbol at rank `i` (0-based).
    pub order: Vec<usize>,
    pub probs_desc: Vec<f64>,
}

impl SortedConditional {
    /// Sorts an arbitrary pmf; ties keep ascending symbol order.
    pub fn from_pmf(y: usize, pmf: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..pmf.len()).collect();
        // sort_by is stable
        order.sort_by(|&a, &b| pmf[b].total_cmp(&pmf[a]));
        let probs_desc = order.iter().map(|&x| pmf[x]).collect();
        Self { y, order, probs_desc }
    }

    /// Number of symbols with positive probability.
    pub fn support(&self) -> usize {
        self.probs_desc.iter().take_while(|&&p| p > 0.0).count()
    }

    /// `rank[x]`, the inverse of `order`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (i, &x) in self.order.iter().enumerate() {
            rank[x] = i;
        }
        rank
    }
}

pub fn sorted_conditional(joint: &JointDistribution, y: usize) -> Result<SortedConditional> {
    let cond = joint.conditional(y)?;
    Ok(SortedConditional::from_pmf(y, &cond))
}

/// Shannon conditional entropy `H(X|Y)` in nats.
pub fn conditional_entropy(joint: &JointDistribution) -> f64 {
    let mut terms = Vec::with_capacity(joint.probs.len());
    for y in joint.active_ys() {
        let py = joint.py(y);
        for x in 0..joint.x_size {
            let p = joint.p(x, y);
            if p > 0.0 {
                terms.push(p * ln(py / p));
            }
        }
    }
    ksum(terms)
}

/// Mixture `Σ_i α_i Π_t P_i` of i.i.d. sources over a common alphabet.
///
/// Components are kept sorted by strictly decreasing conditional entropy, so
/// the cumulative weights `A_i` select the component whose entropy governs the
/// asymptotic smooth entropy for `ε ∈ [A_i, A_{i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSource {
    components: Vec<JointDistribution>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    entropies: Vec<f64>,
}

impl MixtureSource {
    /// Builds a mixture, reordering components by decreasing `H(X_i|Y_i)`.
    ///
    /// Components with equal conditional entropy (within 1e-12) are rejected.
    pub fn new(components: Vec<JointDistribution>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.len() != weights.len() {
            return Err(Error::InvalidMixture("need one positive weight per component"));
        }
        let (xs, ys) = (components[0].x_size(), components[0].y_size());
        for c in &components {
            c.check_same_shape(xs, ys)?;
        }
        if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidMixture("weights must be positive"));
        }
        let wsum = ksum(weights.iter().copied());
        if (wsum - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::InvalidMixture("weights must sum to 1"));
        }
        let mut parts: Vec<(JointDistribution, f64, f64)> = components
            .into_iter()
            .zip(weights)
            .map(|(c, w)| {
                let h = conditional_entropy(&c);
                (c, w / wsum, h)
            })
            .collect();
        parts.sort_by(|a, b| b.2.total_cmp(&a.2));
        if parts.windows(2).any(|w| w[0].2 - w[1].2 <= MASS_TOL) {
            return Err(Error::InvalidMixture(
                "component conditional entropies must be distinct",
            ));
        }
        let mut cumulative = Vec::with_capacity(parts.len() + 1);
        let mut acc = 0.0;
        for (_, w, _) in &parts {
            cumulative.push(acc);
            acc += w;
        }
        cumulative.push(1.0);
        let mut components = Vec::with_capacity(parts.len());
        let mut weights = Vec::with_capacity(parts.len());
        let mut entropies = Vec::with_capacity(parts.len());
        for (c, w, h) in parts {
            components.push(c);
            weights.push(w);
            entropies.push(h);
        }
        Ok(Self {
            components,
            weights,
            cumulative,
            entropies,
        })
    }

    /// A single i.i.d. component.
    pub fn iid(component: JointDistribution) -> Self {
        let h = conditional_entropy(&component);
        Self {
            components: vec![component],
            weights: vec![1.0],
            cumulative: vec![0.0, 1.0],
            entropies: vec![h],
        }
    }

    pub fn components(&self) -> &[JointDistribution] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `A_1 = 0, …, A_{m+1} = 1` (0-based storage, length `m + 1`).
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// `H(X_i|Y_i)` per component, decreasing.
    pub fn component_entropies(&self) -> &[f64] {
        &self.entropies
    }

    pub fn x_size(&self) -> usize {
        self.components[0].x_size()
    }

    pub fn y_size(&self) -> usize {
        self.components[0].y_size()
    }
}

/// Number of dense cells in the `n`-block of an `x_size × y_size` source.
pub fn block_cells(x_size: usize, y_size: usize, n: u32) -> u128 {
    let base = (x_size as u128) * (y_size as u128);
    base.checked_pow(n).unwrap_or(u128::MAX)
}

/// Fails with [`Error::BlockTooLarge`] when an `n`-block exceeds `max_cells`.
pub fn check_block(x_size: usize, y_size: usize, n: u32, max_cells: usize) -> Result<()> {
    let cells = block_cells(x_size, y_size, n);
    if cells > max_cells as u128 {
        return Err(Error::BlockTooLarge {
            cells,
            budget: max_cells,
        });
    }
    Ok(())
}

/// Joint law of `(X^n, Y^n)` for the mixture.
///
/// Block symbols are positional base-`|X|` (resp. base-`|Y|`) integers with the
/// first coordinate most significant.
pub fn mixture_block(mix: &MixtureSource, n: u32, max_cells: usize) -> Result<JointDistribution> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "block length must be at least 1",
        });
    }
    let (xs, ys) = (mix.x_size(), mix.y_size());
    check_block(xs, ys, n, max_cells)?;
    let cells = block_cells(xs, ys, n) as usize;
    let mut total = vec![0.0; cells];
    for (comp, &w) in mix.components.iter().zip(&mix.weights) {
        let prod = product_power(comp, n);
        for (t, p) in total.iter_mut().zip(prod) {
            *t += w * p;
        }
    }
    JointDistribution::from_dense(xs.pow(n), ys.pow(n), total)
}

// n-fold product law, laid out like the block joint.
fn product_power(comp: &JointDistribution, n: u32) -> Vec<f64> {
    let (xs, ys) = (comp.x_size(), comp.y_size());
    let mut cur = vec![1.0];
    let (mut bx, mut by) = (1usize, 1usize);
    for _ in 0..n {
        let (nx, ny) = (bx * xs, by * ys);
        let mut next = vec![0.0; nx * ny];
        for xc in 0..bx {
            for yc in 0..by {
                let base = cur[xc * by + yc];
                if base == 0.0 {
                    continue;
                }
                for x in 0..xs {
                    let row = (xc * xs + x) * ny + yc * ys;
                    for y in 0..ys {
                        next[row + y] = base * comp.p(x, y);
                    }
                }
            }
        }
        cur = next;
        bx = nx;
        by = ny;
    }
    cur
}

/// Draws `count` i.i.d. pairs `(x, y)`; the same seed gives the same sequence.
pub fn sample(joint: &JointDistribution, seed: u64, count: usize) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cdf = CellSampler::new(joint);
    (0..count).map(|_| cdf.draw(&mut rng)).collect()
}

/// Inverse-CDF sampler over the cells of a joint pmf.
pub(crate) struct CellSampler {
    cum: Vec<f64>,
    last_positive: usize,
    y_size: usize,
}

impl CellSampler {
    pub(crate) fn new(joint: &JointDistribution) -> Self {
        let mut cum = Vec::with_capacity(joint.probs.len());
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &p) in joint.probs.iter().enumerate() {
            acc += p;
            cum.push(acc);
            if p > 0.0 {
                last_positive = i;
            }
        }
        Self {
            cum,
            last_positive,
            y_size: joint.y_size,
        }
    }

    pub(crate) fn draw<R: Rng>(&self, rng: &mut R) -> (usize, usize) {
        let u: f64 = rng.random::<f64>() * self.cum[self.cum.len() - 1];
        let i = self.cum.partition_point(|&c| c <= u).min(self.last_positive);
        (i / self.y_size, i % self.y_size)
    }
}
