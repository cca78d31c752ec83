//! Minimizing `Σ_y P_Y(y) f_y(ε_y)` over the budget simplex `Σ_y P_Y(y) ε_y = ε`.
//!
//! Work is done in kept mass `t_y = 1 − ε_y`. Each `f_y` is concave between
//! consecutive cumulative-mass breakpoints, so the objective restricted to any
//! line `P_a t_a + P_b t_b = const` is minimized at a breakpoint of `a` or `b`
//! (or an end of the line). Three stages:
//!
//! 1. Lagrangian pass: sort every `(y, rank)` item by its chord slope between
//!    breakpoints and fill the kept-mass budget in that order.
//! 2. Pairwise exchange: repeatedly re-split the kept mass of two slices at the
//!    best point on their shared line until nothing improves.
//! 3. On small instances, enumerate breakpoints of all but two slices and solve
//!    the remaining pair exactly. An optimum has at most one slice off its
//!    breakpoints, so this covers every candidate vertex.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::truncation::{Chain, Cut};
use crate::math::ksum;

/// Upper bound on pair solves spent in the exhaustive stage.
const EXHAUSTIVE_BUDGET: u128 = 1 << 18;
/// Slice counts up to this use all pairs in the exchange stage.
const ALL_PAIRS_LIMIT: usize = 24;
const MAX_PASSES: usize = 64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SolverOptions {
    pub exhaustive: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { exhaustive: true }
    }
}

pub(crate) fn objective(chains: &[Chain], cuts: &[Cut]) -> f64 {
    ksum(chains.iter().zip(cuts).map(|(c, &k)| c.py * c.f(k)))
}

fn kept_total(chains: &[Chain], cuts: &[Cut]) -> f64 {
    ksum(chains.iter().zip(cuts).map(|(c, &k)| c.py * c.kept(k)))
}

/// Cuts minimizing the objective with total kept joint mass `need = 1 − ε`.
pub(crate) fn solve(chains: &[Chain], need: f64, opts: SolverOptions) -> Vec<Cut> {
    let full: Vec<Cut> = chains.iter().map(Chain::full).collect();
    if chains.is_empty() || need >= kept_total(chains, &full) {
        return full;
    }
    if chains.len() == 1 {
        return alloc::vec![chains[0].locate(need / chains[0].py)];
    }
    let mut cuts = lagrangian(chains, need);
    exchange(chains, &mut cuts);
    if opts.exhaustive {
        if let Some((cost, best)) = exhaustive(chains, need) {
            if cost < objective(chains, &cuts) {
                cuts = best;
            }
        }
    }
    saturate(chains, &mut cuts, need);
    cuts
}

fn lagrangian(chains: &[Chain], need: f64) -> Vec<Cut> {
    let mut items: Vec<(f64, usize, usize)> = Vec::new();
    for (yi, ch) in chains.iter().enumerate() {
        let mut prev_rate = 0.0f64;
        let mut prev_f = 0.0;
        for k in 0..ch.len() {
            let f = ch.f(Cut {
                full: k + 1,
                partial: 0.0,
            });
            // Chord slopes are nondecreasing along a slice; clamp rounding noise.
            let rate = ((f - prev_f) / ch.probs[k]).max(prev_rate);
            items.push((rate, yi, k));
            prev_rate = rate;
            prev_f = f;
        }
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut cuts = alloc::vec![Cut::EMPTY; chains.len()];
    let mut acc = 0.0;
    for &(_, yi, k) in &items {
        let ch = &chains[yi];
        let w = ch.py * ch.probs[k];
        if acc + w <= need {
            cuts[yi] = Cut {
                full: k + 1,
                partial: 0.0,
            };
            acc += w;
        } else {
            cuts[yi] = ch.locate(ch.cum[k] + (need - acc) / ch.py);
            break;
        }
    }
    cuts
}

/// Best split of joint kept mass `m` between slices `a` and `b`.
fn best_on_pair(a: &Chain, b: &Chain, m: f64) -> (f64, Cut, Cut) {
    let lo = ((m - b.py * b.total()) / a.py).max(0.0);
    let hi = (m / a.py).min(a.total());
    let mut best = (f64::INFINITY, Cut::EMPTY, Cut::EMPTY);
    let mut consider = |ca: Cut, cb: Cut| {
        let cost = a.py * a.f(ca) + b.py * b.f(cb);
        if cost < best.0 {
            best = (cost, ca, cb);
        }
    };
    for ta in [lo, hi] {
        consider(a.locate(ta), b.locate((m - a.py * ta) / b.py));
    }
    let first = a.cum.partition_point(|&c| c < lo);
    for k in first..a.cum.len() {
        let ta = a.cum[k];
        if ta > hi {
            break;
        }
        let ca = Cut { full: k, partial: 0.0 };
        consider(ca, b.locate((m - a.py * ta) / b.py));
    }
    let b_lo = ((m - a.py * hi) / b.py).max(0.0);
    let b_hi = ((m - a.py * lo) / b.py).min(b.total());
    let first = b.cum.partition_point(|&c| c < b_lo);
    for k in first..b.cum.len() {
        let tb = b.cum[k];
        if tb > b_hi {
            break;
        }
        let cb = Cut { full: k, partial: 0.0 };
        consider(a.locate((m - b.py * tb) / a.py), cb);
    }
    best
}

fn improve_pair(chains: &[Chain], cuts: &mut [Cut], a: usize, b: usize) -> bool {
    let (ca, cb) = (&chains[a], &chains[b]);
    let current = ca.py * ca.f(cuts[a]) + cb.py * cb.f(cuts[b]);
    let m = ca.py * ca.kept(cuts[a]) + cb.py * cb.kept(cuts[b]);
    let (cost, na, nb) = best_on_pair(ca, cb, m);
    if cost < current - 1e-15 * current.abs().max(1e-300) {
        cuts[a] = na;
        cuts[b] = nb;
        true
    } else {
        false
    }
}

fn exchange(chains: &[Chain], cuts: &mut [Cut]) {
    let d = chains.len();
    for _ in 0..MAX_PASSES {
        let mut improved = false;
        if d <= ALL_PAIRS_LIMIT {
            for a in 0..d {
                for b in a + 1..d {
                    improved |= improve_pair(chains, cuts, a, b);
                }
            }
        } else {
            let mut pivots: Vec<usize> = (0..d).filter(|&y| cuts[y].partial > 0.0).collect();
            if pivots.is_empty() {
                pivots.push(0);
            }
            for &a in &pivots {
                for b in 0..d {
                    if b != a {
                        improved |= improve_pair(chains, cuts, a, b);
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

fn exhaustive(chains: &[Chain], need: f64) -> Option<(f64, Vec<Cut>)> {
    let d = chains.len();
    let mut pairs: Vec<(usize, usize)> = (0..d / 2).map(|j| (2 * j, 2 * j + 1)).collect();
    if d % 2 == 1 {
        pairs.push((d - 1, 0));
    }
    let mut work: u128 = 0;
    for &(a, b) in &pairs {
        let combos: u128 = (0..d)
            .filter(|&y| y != a && y != b)
            .fold(1u128, |acc, y| acc.saturating_mul(chains[y].len() as u128 + 1));
        work = work.saturating_add(combos);
    }
    if work > EXHAUSTIVE_BUDGET {
        return None;
    }

    let mut best: Option<(f64, Vec<Cut>)> = None;
    for &(a, b) in &pairs {
        let others: Vec<usize> = (0..d).filter(|&y| y != a && y != b).collect();
        let mut idx = alloc::vec![0usize; others.len()];
        loop {
            let fixed_mass = ksum(others.iter().zip(&idx).map(|(&y, &k)| chains[y].py * chains[y].cum[k]));
            let m = need - fixed_mass;
            let cap = chains[a].py * chains[a].total() + chains[b].py * chains[b].total();
            if m >= -1e-15 && m <= cap + 1e-15 {
                let (pair_cost, ca, cb) = best_on_pair(&chains[a], &chains[b], m.max(0.0));
                let fixed_cost = ksum(
                    others
                        .iter()
                        .zip(&idx)
                        .map(|(&y, &k)| chains[y].py * chains[y].f(Cut { full: k, partial: 0.0 })),
                );
                let cost = fixed_cost + pair_cost;
                if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                    let mut cuts = alloc::vec![Cut::EMPTY; d];
                    for (&y, &k) in others.iter().zip(&idx) {
                        cuts[y] = Cut { full: k, partial: 0.0 };
                    }
                    cuts[a] = ca;
                    cuts[b] = cb;
                    best = Some((cost, cuts));
                }
            }
            // odometer over breakpoint indices
            let mut pos = 0;
            loop {
                if pos == others.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] <= chains[others[pos]].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == others.len() {
                break;
            }
        }
    }
    best
}

/// Absorb rounding drift so the kept mass is exactly `need`.
fn saturate(chains: &[Chain], cuts: &mut [Cut], need: f64) {
    let gap = need - kept_total(chains, cuts);
    if gap.abs() < 1e-15 {
        return;
    }
    // Prefer a slice that is already cut mid-rank, then any slice with room.
    let mut order: Vec<usize> = (0..chains.len()).collect();
    order.sort_by(|&a, &b| match (cuts[a].partial > 0.0, cuts[b].partial > 0.0) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => a.cmp(&b),
    });
    let mut gap = gap;
    for y in order {
        let ch = &chains[y];
        let t = ch.kept(cuts[y]);
        let target = (t + gap / ch.py).clamp(0.0, ch.total());
        let moved = (target - t) * ch.py;
        if moved == 0.0 {
            continue;
        }
        let full = ch.cum.partition_point(|&c| c <= target).saturating_sub(1);
        let full = full.min(ch.len());
        let partial = if full == ch.len() { 0.0 } else { target - ch.cum[full] };
        cuts[y] = Cut { full, partial };
        gap -= moved;
        if gap.abs() < 1e-15 {
            break;
        }
    }
}
