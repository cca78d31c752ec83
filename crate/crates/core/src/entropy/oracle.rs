//! Exhaustive reference solver for the budget allocation, for tiny `|Y|`.
//!
//! Deliberately shares no code with the optimizer: its own prefix tables, a
//! uniform grid over the first `d − 1` budgets (the last one is implied by the
//! equality constraint), then every assignment that puts all but one budget on
//! a cumulative-mass breakpoint.

use alloc::vec::Vec;

use super::{EntropyQuery, EntropyResult, ErrorAllocation, TruncatedQ, TruncatedSlice};
use crate::dist::{sorted_conditional, JointDistribution};
use crate::math::{ksum, ln, powf};
use crate::{Error, Result};

const MIN_STEP: f64 = 1e-5;
const MAX_ACTIVE: usize = 3;
const MAX_POINTS: f64 = 4e8;
const SNAP: f64 = 1e-12;

struct Slice {
    y: usize,
    py: f64,
    order: Vec<usize>,
    desc: Vec<f64>,
    cum: Vec<f64>,
    spow: Vec<f64>,
}

impl Slice {
    /// `(kept ranks, residual at the last kept rank, Σ Q^α)` for budget `e`.
    fn truncate(&self, e: f64, alpha: f64) -> (usize, f64, f64) {
        let target = 1.0 - e;
        if target <= SNAP {
            return (0, 0.0, 0.0);
        }
        let n = self.desc.len();
        // smallest k ≥ 1 with cum[k] ≥ target (within SNAP)
        let k = (1 + self.cum[1..].partition_point(|&c| c < target - SNAP)).min(n);
        let residual = (target - self.cum[k - 1]).min(self.desc[k - 1]);
        if residual <= SNAP {
            (k - 1, 0.0, self.spow[k - 1])
        } else {
            (k, residual, self.spow[k - 1] + powf(residual, alpha))
        }
    }

    fn cost(&self, e: f64, alpha: f64) -> f64 {
        let g = self.truncate(e, alpha).2;
        if g == 0.0 {
            0.0
        } else {
            self.py * powf(g, 1.0 / alpha)
        }
    }

    /// Budgets at which the truncation lands exactly on a rank boundary.
    fn breakpoints(&self) -> Vec<f64> {
        self.cum.iter().map(|&c| (1.0 - c).max(0.0)).collect()
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if hi < lo {
        return out;
    }
    out.push(lo);
    let mut k = libm::ceil(lo / step) as u64;
    loop {
        let v = k as f64 * step;
        if v >= hi {
            break;
        }
        if v > lo {
            out.push(v);
        }
        k += 1;
    }
    if hi > lo {
        out.push(hi);
    }
    out
}

struct Search<'a> {
    slices: &'a [Slice],
    alpha: f64,
    eps: f64,
    best_cost: f64,
    best: Vec<f64>,
}

impl Search<'_> {
    /// Budget range for slice `i` given the joint budget `rest` still to spread
    /// over slices `i..`.
    fn range(&self, i: usize, rest: f64) -> (f64, f64) {
        let s = &self.slices[i];
        let tail: f64 = self.slices[i + 1..].iter().map(|t| t.py).sum();
        let lo = ((rest - tail) / s.py).max(0.0);
        let hi = (rest / s.py).min(1.0);
        (lo, hi)
    }

    fn offer(&mut self, eps_y: &[f64]) {
        let cost = ksum(self.slices.iter().zip(eps_y).map(|(s, &e)| s.cost(e, self.alpha)));
        if cost < self.best_cost {
            self.best_cost = cost;
            self.best = eps_y.to_vec();
        }
    }

    /// One row of the three-slice grid: `e0` fixed, `e1` over `grid(lo1, hi1, step)`,
    /// `e2` implied.
    fn row(&mut self, e0: f64, lo1: f64, hi1: f64, step: f64, on_grid: &[f64]) {
        let [s0, s1, s2] = [&self.slices[0], &self.slices[1], &self.slices[2]];
        let c0 = s0.cost(e0, self.alpha);
        let mut visit = |e1: f64, c1: f64| {
            let e2 = (self.eps - s0.py * e0 - s1.py * e1) / s2.py;
            if !(-1e-12..=1.0 + 1e-12).contains(&e2) {
                return;
            }
            let e2 = e2.clamp(0.0, 1.0);
            let cost = c0 + c1 + s2.cost(e2, self.alpha);
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = alloc::vec![e0, e1, e2];
            }
        };
        if hi1 < lo1 {
            return;
        }
        visit(lo1, s1.cost(lo1, self.alpha));
        let mut k = libm::ceil(lo1 / step) as usize;
        loop {
            let v = k as f64 * step;
            if v >= hi1 {
                break;
            }
            if v > lo1 {
                visit(v, on_grid[k]);
            }
            k += 1;
        }
        if hi1 > lo1 {
            visit(hi1, s1.cost(hi1, self.alpha));
        }
    }

    /// Complete a partial assignment by solving the last budget from the constraint.
    fn finish(&mut self, head: &mut Vec<f64>) {
        let spent = ksum(self.slices.iter().zip(head.iter()).map(|(s, &e)| s.py * e));
        let last = &self.slices[head.len()];
        let e = (self.eps - spent) / last.py;
        if !(-1e-12..=1.0 + 1e-12).contains(&e) {
            return;
        }
        head.push(e.clamp(0.0, 1.0));
        self.offer(head);
        head.pop();
    }
}

/// Exhaustive allocation search: grid at resolution `step`, then breakpoint vertices.
pub fn oracle_allocation(joint: &JointDistribution, query: EntropyQuery, step: f64) -> Result<EntropyResult> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            reason: "grid step must lie in (0, 1]",
        });
    }
    if step < MIN_STEP {
        return Err(Error::InstanceTooLarge("oracle grid step below 1e-5"));
    }
    let alpha = query.alpha();
    let eps = query.epsilon();
    let slices: Vec<Slice> = joint
        .active_ys()
        .map(|y| {
            let sc = sorted_conditional(joint, y).expect("active y has positive marginal");
            let desc: Vec<f64> = sc.probs_desc[..sc.support()].to_vec();
            let mut cum = alloc::vec![0.0];
            let mut spow = alloc::vec![0.0];
            for (k, &p) in desc.iter().enumerate() {
                cum.push(ksum(desc[..=k].iter().copied()));
                spow.push(spow[k] + powf(p, alpha));
            }
            Slice {
                y,
                py: joint.py(y),
                order: sc.order,
                desc,
                cum,
                spow,
            }
        })
        .collect();
    let d = slices.len();
    if d > MAX_ACTIVE {
        return Err(Error::InstanceTooLarge("oracle supports at most 3 active y"));
    }
    let per_axis = 1.0 / step + 2.0;
    if powf(per_axis, (d - 1) as f64) > MAX_POINTS {
        return Err(Error::InstanceTooLarge("oracle grid too fine for this |Y|"));
    }

    let mut search = Search {
        slices: &slices,
        alpha,
        eps,
        best_cost: f64::INFINITY,
        best: Vec::new(),
    };

    // Grid pass.
    let mut head = Vec::with_capacity(d);
    match d {
        1 => search.finish(&mut head),
        2 => {
            let (lo, hi) = search.range(0, eps);
            for e0 in grid(lo, hi, step) {
                head.push(e0);
                search.finish(&mut head);
                head.pop();
            }
        }
        _ => {
            // Slice 1 sees the same multiples of `step` on every row; cache their costs.
            let on_grid: Vec<f64> = (0..=libm::ceil(1.0 / step) as usize)
                .map(|k| slices[1].cost(k as f64 * step, alpha))
                .collect();
            let (lo, hi) = search.range(0, eps);
            for e0 in grid(lo, hi, step) {
                let (lo1, hi1) = search.range(1, eps - slices[0].py * e0);
                search.row(e0, lo1, hi1, step, &on_grid);
            }
        }
    }

    // Vertex pass: every slice but one on a breakpoint, the odd one implied.
    let bps: Vec<Vec<f64>> = slices.iter().map(Slice::breakpoints).collect();
    for free in 0..d {
        let fixed: Vec<usize> = (0..d).filter(|&i| i != free).collect();
        let mut idx = alloc::vec![0usize; fixed.len()];
        loop {
            let spent = ksum(fixed.iter().zip(&idx).map(|(&i, &k)| slices[i].py * bps[i][k]));
            let e = (eps - spent) / slices[free].py;
            if (-1e-12..=1.0 + 1e-12).contains(&e) {
                let mut eps_y = alloc::vec![0.0; d];
                for (&i, &k) in fixed.iter().zip(&idx) {
                    eps_y[i] = bps[i][k];
                }
                eps_y[free] = e.clamp(0.0, 1.0);
                search.offer(&eps_y);
            }
            let mut pos = 0;
            while pos < fixed.len() {
                idx[pos] += 1;
                if idx[pos] < bps[fixed[pos]].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == fixed.len() {
                break;
            }
        }
    }

    let best = search.best;
    let mut eps_out = alloc::vec![0.0; joint.y_size()];
    let mut q_slices: Vec<Option<TruncatedSlice>> = alloc::vec![None; joint.y_size()];
    let mut objective_terms = Vec::with_capacity(d);
    for (s, &e) in slices.iter().zip(&best) {
        let (k, residual, g) = s.truncate(e, alpha);
        let mut q_desc: Vec<f64> = s.desc[..k].to_vec();
        if residual > 0.0 {
            q_desc[k - 1] = residual;
        }
        eps_out[s.y] = 1.0 - ksum(q_desc.iter().copied());
        objective_terms.push(if g == 0.0 { 0.0 } else { s.py * powf(g, 1.0 / alpha) });
        q_slices[s.y] = Some(TruncatedSlice {
            y: s.y,
            py: s.py,
            order: s.order.clone(),
            probs_desc: s.desc.clone(),
            q_desc,
        });
    }
    let objective = ksum(objective_terms);
    Ok(EntropyResult {
        value: alpha / (1.0 - alpha) * ln(objective),
        allocation: ErrorAllocation { eps_y: eps_out },
        q: TruncatedQ { slices: q_slices },
        objective,
    })
}
