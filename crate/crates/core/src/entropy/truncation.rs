//! Optimal per-slice truncation: keep the most likely symbols, cut one fractionally.

use alloc::vec::Vec;

use crate::dist::SortedConditional;
use crate::math::{ksum, powf};

// Cumulative masses within this of the target count as reaching it.
const CUM_TOL: f64 = 1e-14;

/// Smallest rank count `i` with `Σ_{j≤i} p_j ≥ 1 − eps_y`; `0` when `eps_y ≥ 1`.
pub fn truncation_point(slice: &SortedConditional, eps_y: f64) -> usize {
    truncation_point_desc(&slice.probs_desc, eps_y)
}

pub(crate) fn truncation_point_desc(probs_desc: &[f64], eps_y: f64) -> usize {
    let target = 1.0 - eps_y;
    if eps_y >= 1.0 || target <= 0.0 {
        return 0;
    }
    let support = probs_desc.iter().take_while(|&&p| p > 0.0).count();
    let mut acc = 0.0;
    for (i, &p) in probs_desc[..support].iter().enumerate() {
        acc += p;
        if acc >= target - CUM_TOL {
            return i + 1;
        }
    }
    support
}

/// `Q*_{eps_y}` on ranks `1..=i*` (descending-probability order).
///
/// Ranks before the truncation point keep their probability, the truncation
/// rank keeps whatever mass is left of `1 − eps_y`, everything after is zero.
pub fn truncated_q(slice: &SortedConditional, eps_y: f64) -> Vec<f64> {
    truncated_q_desc(&slice.probs_desc, eps_y)
}

pub(crate) fn truncated_q_desc(probs_desc: &[f64], eps_y: f64) -> Vec<f64> {
    let k = truncation_point_desc(probs_desc, eps_y);
    if k == 0 {
        return Vec::new();
    }
    let mut q: Vec<f64> = probs_desc[..k].to_vec();
    let before = ksum(probs_desc[..k - 1].iter().copied());
    let target = 1.0 - eps_y.max(0.0);
    let residual = if target - before >= probs_desc[k - 1] - CUM_TOL {
        probs_desc[k - 1]
    } else {
        (target - before).max(0.0)
    };
    q[k - 1] = residual;
    if residual == 0.0 {
        q.pop();
    }
    q
}

/// `[Σ_i Q_i^α]^{1/α}`; zero for an empty truncation.
pub fn inner_score(q: &[f64], alpha: f64) -> f64 {
    let g = ksum(q.iter().filter(|&&v| v > 0.0).map(|&v| powf(v, alpha)));
    if g == 0.0 {
        0.0
    } else {
        powf(g, 1.0 / alpha)
    }
}

/// Where a slice is cut: `full` ranks kept whole, plus `partial` mass of the next one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cut {
    pub full: usize,
    pub partial: f64,
}

impl Cut {
    pub const EMPTY: Cut = Cut { full: 0, partial: 0.0 };
}

// Derived (not breakpoint-exact) masses within this of a breakpoint snap onto it.
const SNAP: f64 = 1e-12;

/// One conditional slice with prefix sums for `O(log K)` evaluation of
/// `f(t) = [Σ Q*^α]^{1/α}` as a function of kept conditional mass `t`.
#[derive(Debug, Clone)]
pub(crate) struct Chain {
    pub y: usize,
    pub py: f64,
    pub probs: Vec<f64>,
    pub order: Vec<usize>,
    /// `cum[k] = Σ_{i<k} p_i`
    pub cum: Vec<f64>,
    /// `spow[k] = Σ_{i<k} p_i^α`
    pub spow: Vec<f64>,
    pub alpha: f64,
}

impl Chain {
    pub fn new(slice: &SortedConditional, py: f64, alpha: f64) -> Self {
        let support = slice.support();
        let probs: Vec<f64> = slice.probs_desc[..support].to_vec();
        let mut cum = Vec::with_capacity(support + 1);
        let mut spow = Vec::with_capacity(support + 1);
        cum.push(0.0);
        spow.push(0.0);
        for k in 0..support {
            cum.push(ksum(probs[..=k].iter().copied()));
            spow.push(spow[k] + powf(probs[k], alpha));
        }
        Self {
            y: slice.y,
            py,
            probs,
            order: slice.order.clone(),
            cum,
            spow,
            alpha,
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn full(&self) -> Cut {
        Cut {
            full: self.len(),
            partial: 0.0,
        }
    }

    pub fn g(&self, c: Cut) -> f64 {
        let mut g = self.spow[c.full];
        if c.partial > 0.0 {
            g += powf(c.partial, self.alpha);
        }
        g
    }

    pub fn f(&self, c: Cut) -> f64 {
        let g = self.g(c);
        if g == 0.0 {
            0.0
        } else {
            powf(g, 1.0 / self.alpha)
        }
    }

    pub fn kept(&self, c: Cut) -> f64 {
        self.cum[c.full] + c.partial
    }

    pub fn total(&self) -> f64 {
        self.cum[self.len()]
    }

    /// Cut keeping conditional mass `t`, snapped onto nearby breakpoints.
    pub fn locate(&self, t: f64) -> Cut {
        let n = self.len();
        if t <= SNAP {
            return Cut::EMPTY;
        }
        if t >= self.cum[n] - SNAP {
            return self.full();
        }
        let full = self.cum.partition_point(|&c| c <= t) - 1;
        let partial = t - self.cum[full];
        if partial < SNAP {
            Cut { full, partial: 0.0 }
        } else if self.probs[full] - partial < SNAP {
            Cut {
                full: full + 1,
                partial: 0.0,
            }
        } else {
            Cut { full, partial }
        }
    }

    /// `Q*` values on ranks `0..i*`.
    pub fn q_desc(&self, c: Cut) -> Vec<f64> {
        let mut q = self.probs[..c.full].to_vec();
        if c.partial > 0.0 {
            q.push(c.partial);
        }
        q
    }
}
