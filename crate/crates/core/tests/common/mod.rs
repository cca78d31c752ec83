//! Reference computations shared by the integration tests. Nothing here calls
//! into the solver or strategy code under test.
#![allow(dead_code)]

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use smooth_renyi_core::dist::JointDistribution;

/// Dirichlet(1,…,1) over all cells, with a tiny floor so no marginal vanishes.
pub fn dirichlet_joint<R: Rng>(rng: &mut R, x_size: usize, y_size: usize) -> JointDistribution {
    let w: Vec<f64> = (0..x_size * y_size)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e + 1e-9
        })
        .collect();
    let s: f64 = w.iter().sum();
    JointDistribution::from_dense(x_size, y_size, w.iter().map(|v| v / s).collect()).unwrap()
}

pub fn dirichlet_pmf<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e + 1e-9
        })
        .collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|v| v / s).collect()
}

/// Column `y` of the joint as a plain vector.
pub fn column(j: &JointDistribution, y: usize) -> Vec<f64> {
    (0..j.x_size()).map(|x| j.p(x, y)).collect()
}

/// `(α/(1−α)) log Σ_y [Σ_x P(x,y)^α]^{1/α}`.
pub fn arimoto(j: &JointDistribution, alpha: f64) -> f64 {
    let s: f64 = (0..j.y_size())
        .map(|y| {
            let inner: f64 = column(j, y).iter().filter(|&&p| p > 0.0).map(|p| p.powf(alpha)).sum();
            inner.powf(1.0 / alpha)
        })
        .sum();
    alpha / (1.0 - alpha) * s.ln()
}

/// All permutations of `0..k`.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Cost and error of playing `order` (rank → symbol) with give-up
/// probabilities `pi` (per rank) against the unnormalized column `p`.
pub fn play(p: &[f64], order: &[usize], pi: &[f64], rho: f64) -> (f64, f64) {
    let mut alive = 1.0;
    let (mut cost, mut err) = (0.0, 0.0);
    for (i, &x) in order.iter().enumerate() {
        alive *= 1.0 - pi[i];
        cost += p[x] * alive * ((i + 1) as f64).powf(rho);
        err += p[x] * (1.0 - alive);
    }
    (cost, err)
}

/// Minimum cost over strategies that randomize at one rank per `y` (guess
/// ranks before it, give up after it), by enumerating every order, every dice
/// rank, and every vertex of the resulting linear program in the dice values.
pub fn single_dice_oracle(j: &JointDistribution, rho: f64, eps: f64) -> f64 {
    let k = j.x_size();
    let ys = j.y_size();
    let perms = permutations(k);
    // per y: (cost at θ=0, cost slope, error at θ=0, error slope)
    let mut options: Vec<Vec<[f64; 4]>> = Vec::with_capacity(ys);
    for y in 0..ys {
        let p = column(j, y);
        let mut opts = Vec::new();
        for order in &perms {
            for r in 0..k {
                let head: f64 = (0..r).map(|i| p[order[i]] * ((i + 1) as f64).powf(rho)).sum();
                let at = p[order[r]];
                let w = ((r + 1) as f64).powf(rho);
                let tail: f64 = (r + 1..k).map(|i| p[order[i]]).sum();
                opts.push([head + at * w, -at * w, tail, at]);
            }
        }
        opts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        opts.dedup();
        options.push(opts);
    }
    let mut best = f64::INFINITY;
    let mut pick = vec![0usize; ys];
    loop {
        let chosen: Vec<[f64; 4]> = (0..ys).map(|y| options[y][pick[y]]).collect();
        best = best.min(lp_vertices(&chosen, eps));
        // odometer
        let mut d = 0;
        loop {
            if d == ys {
                return best;
            }
            pick[d] += 1;
            if pick[d] < options[d].len() {
                break;
            }
            pick[d] = 0;
            d += 1;
        }
    }
}

/// `min Σ (c_y + s_y θ_y)` s.t. `Σ (e_y + t_y θ_y) ≤ ε`, `θ ∈ [0,1]^d`, by
/// checking every vertex: all coordinates at a bound, or all but one at a
/// bound and that one on the budget hyperplane.
fn lp_vertices(rows: &[[f64; 4]], eps: f64) -> f64 {
    let d = rows.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << d) {
        let theta: Vec<f64> = (0..d).map(|i| ((mask >> i) & 1) as f64).collect();
        best = best.min(lp_value(rows, &theta, eps));
        for free in 0..d {
            let fixed: f64 = (0..d)
                .filter(|&i| i != free)
                .map(|i| rows[i][2] + rows[i][3] * theta[i])
                .sum();
            let r = rows[free];
            if r[3] > 0.0 {
                let mut t = theta.clone();
                t[free] = (eps - fixed - r[2]) / r[3];
                if (0.0..=1.0).contains(&t[free]) {
                    best = best.min(lp_value(rows, &t, eps));
                }
            }
        }
    }
    best
}

fn lp_value(rows: &[[f64; 4]], theta: &[f64], eps: f64) -> f64 {
    let err: f64 = rows.iter().zip(theta).map(|(r, t)| r[2] + r[3] * t).sum();
    if err > eps + 1e-12 {
        return f64::INFINITY;
    }
    rows.iter().zip(theta).map(|(r, t)| r[0] + r[1] * t).sum()
}

/// Minimum cost over fully general strategies: every order per `y`, every
/// give-up vector on a grid of the given step, except one coordinate which is
/// set to the largest value the error budget allows. Each coordinate takes a
/// turn as the free one.
pub fn general_grid_oracle(j: &JointDistribution, rho: f64, eps: f64, step: f64) -> f64 {
    let k = j.x_size();
    let ys = j.y_size();
    let levels: Vec<f64> = {
        let m = (1.0 / step).round() as usize;
        (0..=m).map(|i| i as f64 / m as f64).collect()
    };
    let cols: Vec<Vec<f64>> = (0..ys).map(|y| column(j, y)).collect();
    let perms = permutations(k);
    let coords = k * ys;
    let mut best = f64::INFINITY;
    let mut orders = vec![0usize; ys];
    loop {
        for free in 0..coords {
            let mut pi = vec![0.0; coords];
            let mut idx = vec![0usize; coords];
            loop {
                for c in 0..coords {
                    if c != free {
                        pi[c] = levels[idx[c]];
                    }
                }
                best = best.min(solve_free(&cols, &perms, &orders, &mut pi, free, k, rho, eps));
                let mut c = 0;
                loop {
                    if c == coords {
                        break;
                    }
                    if c == free {
                        c += 1;
                        continue;
                    }
                    idx[c] += 1;
                    if idx[c] < levels.len() {
                        break;
                    }
                    idx[c] = 0;
                    c += 1;
                }
                if c == coords {
                    break;
                }
            }
        }
        let mut d = 0;
        loop {
            if d == ys {
                return best;
            }
            orders[d] += 1;
            if orders[d] < perms.len() {
                break;
            }
            orders[d] = 0;
            d += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_free(
    cols: &[Vec<f64>],
    perms: &[Vec<usize>],
    orders: &[usize],
    pi: &mut [f64],
    free: usize,
    k: usize,
    rho: f64,
    eps: f64,
) -> f64 {
    let total = |pi: &[f64]| -> (f64, f64) {
        let mut c = 0.0;
        let mut e = 0.0;
        for (y, col) in cols.iter().enumerate() {
            let (cy, ey) = play(col, &perms[orders[y]], &pi[y * k..(y + 1) * k], rho);
            c += cy;
            e += ey;
        }
        (c, e)
    };
    pi[free] = 0.0;
    let (_, e0) = total(pi);
    if e0 > eps + 1e-12 {
        return f64::INFINITY;
    }
    pi[free] = 1.0;
    let (_, e1) = total(pi);
    // the error is affine in one coordinate and the cost falls as it grows
    pi[free] = if e1 <= eps {
        1.0
    } else {
        ((eps - e0) / (e1 - e0)).clamp(0.0, 1.0)
    };
    total(pi).0
}
