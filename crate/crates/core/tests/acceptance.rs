//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p smooth-renyi-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{arimoto, column, dirichlet_joint, dirichlet_pmf, general_grid_oracle, single_dice_oracle};
use smooth_renyi_core::asymptotics::{convergence_report, vanishing_vs_zero_error_contrast};
use smooth_renyi_core::coding::{
    build_code, code_moment, coding_exponent_curve, converse_length_profile, decode, encode, evaluate_code,
    kraft_holds, Decoded,
};
use smooth_renyi_core::dist::{JointDistribution, MixtureSource, SortedConditional};
use smooth_renyi_core::entropy::{
    arimoto_conditional_renyi, optimize_allocation, oracle_allocation, smooth_conditional_entropy, truncated_q,
    EntropyQuery,
};
use smooth_renyi_core::guessing::{evaluate, guessing_exponent_curve, optimal_strategy, simulate_guessing};
use smooth_renyi_core::DEFAULT_MAX_CELLS;

const LN_2: f64 = std::f64::consts::LN_2;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn run(id: u32, title: &str, limit: Duration, check: impl FnOnce() -> Verdict) -> bool {
    let t = Instant::now();
    let v = check();
    let took = t.elapsed();
    let in_time = took <= limit;
    let pass = v.pass && in_time;
    let timing = if in_time {
        format!("{:.2}s", took.as_secs_f64())
    } else {
        format!("{:.2}s, over the {}s limit", took.as_secs_f64(), limit.as_secs())
    };
    println!(
        "criterion {id:>2} {} {title}: {} ({timing})",
        if pass { "PASS" } else { "FAIL" },
        v.detail
    );
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// The random instance family of criteria 4, 7 and 8.
fn sandwich_instances() -> Vec<JointDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..100)
        .map(|_| {
            let (k, ys) = (rng.random_range(2..=8), rng.random_range(1..=4));
            dirichlet_joint(&mut rng, k, ys)
        })
        .collect()
}

const RHOS: [f64; 3] = [0.5, 1.0, 2.0];
const EPSILONS: [f64; 3] = [0.0, 0.1, 0.3];

fn arimoto_reduction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (k, ys) = (rng.random_range(1..=8), rng.random_range(1..=4));
        let j = dirichlet_joint(&mut rng, k, ys);
        let alpha = rng.random_range(0.05..0.95);
        let h = smooth_conditional_entropy(&j, EntropyQuery::new(alpha, 0.0).unwrap()).value;
        let lib = arimoto_conditional_renyi(&j, alpha).unwrap();
        let reference = arimoto(&j, alpha);
        // a single symbol has H = 0 exactly, where only an absolute check means anything
        if k > 1 {
            worst = worst.max(rel(h, lib));
        } else if h.abs() > 1e-15 {
            return verdict(false, format!("deterministic X gave {h}"));
        }
        if (lib - reference).abs() > 1e-12 * reference.abs().max(1.0) {
            return verdict(false, format!("library Arimoto {lib} vs closed form {reference}"));
        }
    }
    verdict(
        worst <= 1e-12,
        format!("max relative deviation {worst:.2e} over 200 joints"),
    )
}

fn allocation_vs_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let (k, ys) = (rng.random_range(2..=6), rng.random_range(1..=3));
        let j = dirichlet_joint(&mut rng, k, ys);
        let alpha = [0.3, 0.5, 0.8][i % 3];
        let eps = [0.05, 0.1, 0.3][(i / 3) % 3];
        let q = EntropyQuery::new(alpha, eps).unwrap();
        let got = optimize_allocation(&j, q).value;
        let want = match oracle_allocation(&j, q, 1e-4) {
            Ok(r) => r.value,
            Err(e) => return verdict(false, format!("oracle failed on instance {i}: {e}")),
        };
        let r = (got - want).abs() / want.abs().max(1e-12);
        worst = worst.max(r);
    }
    verdict(
        worst <= 1e-6,
        format!("max relative deviation {worst:.2e} over 50 instances"),
    )
}

fn truncation_optimality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0usize;
    let mut tightest = f64::INFINITY;
    for _ in 0..100 {
        let k = rng.random_range(2..=10);
        let p = dirichlet_pmf(&mut rng, k);
        let eps = rng.random_range(0.01..0.9);
        let alpha = rng.random_range(0.05..0.95);
        let slice = SortedConditional::from_pmf(0, &p);
        let star: f64 = truncated_q(&slice, eps).iter().map(|v| v.powf(alpha)).sum();
        let desc = &slice.probs_desc;
        for trial in 0..10_000 {
            let q = random_feasible(&mut rng, desc, eps, trial % 2 == 0);
            let mass: f64 = q.iter().sum();
            assert!(mass >= 1.0 - eps - 1e-12 && q.iter().zip(desc).all(|(a, b)| *a <= *b + 1e-15));
            let score: f64 = q.iter().filter(|&&v| v > 0.0).map(|v| v.powf(alpha)).sum();
            tightest = tightest.min(score / star - 1.0);
            if score < star * (1.0 - 1e-12) {
                violations += 1;
            }
        }
    }
    verdict(
        violations == 0,
        format!("{violations} violations in 10^6 comparisons; smallest relative margin {tightest:.2e}"),
    )
}

/// A random `Q ≤ P` with `Σ Q ≥ 1 − ε`: either a scaled-down copy of `P`
/// lifted back to a random feasible mass, or a greedy fill in random order
/// followed by one random transfer.
fn random_feasible<R: Rng>(rng: &mut R, p: &[f64], eps: f64, global: bool) -> Vec<f64> {
    let k = p.len();
    if global {
        let mut q: Vec<f64> = p.iter().map(|&v| v * rng.random::<f64>()).collect();
        let target = 1.0 - eps * rng.random::<f64>();
        let m: f64 = q.iter().sum();
        if m < target {
            let s = (target - m) / (1.0 - m);
            for (qi, &pi) in q.iter_mut().zip(p) {
                *qi += s * (pi - *qi);
            }
        }
        return q;
    }
    // greedy fill in a random order at exactly 1 − ε, then a random transfer
    let mut order: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut q = vec![0.0; k];
    let mut need = 1.0 - eps;
    for &i in &order {
        let take = p[i].min(need);
        q[i] = take;
        need -= take;
    }
    let (a, b) = (rng.random_range(0..k), rng.random_range(0..k));
    let room = q[a].min(p[b] - q[b]) * rng.random::<f64>();
    if a != b {
        q[a] -= room;
        q[b] += room;
    }
    q
}

fn guessing_sandwich() -> Verdict {
    let mut violations = Vec::new();
    let mut count = 0;
    for (n, j) in sandwich_instances().iter().enumerate() {
        let k = j.x_size() as f64;
        for &rho in &RHOS {
            for &eps in &EPSILONS {
                count += 1;
                let h = smooth_conditional_entropy(j, EntropyQuery::new(1.0 / (1.0 + rho), eps).unwrap()).value;
                let ev = evaluate(&optimal_strategy(j, rho, eps).unwrap(), j, rho, None).unwrap();
                let hi = (rho * h).exp();
                let lo = (1.0 + k.ln()).powf(-rho) * hi;
                if !(lo <= ev.cost && ev.cost <= hi + 1e-9 && ev.error_prob <= eps + 1e-10) {
                    violations.push(format!(
                        "#{n} rho={rho} eps={eps}: {lo} <= {} <= {hi}, pe {}",
                        ev.cost, ev.error_prob
                    ));
                }
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!(
            "{} violations in {count} cases {}",
            violations.len(),
            violations.first().cloned().unwrap_or_default()
        ),
    )
}

fn guessing_brute_force() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_dice, mut worst_grid, mut grid_cases) = (0.0f64, 0.0f64, 0);
    for i in 0..30 {
        let (k, ys) = (rng.random_range(2..=4), rng.random_range(1..=2));
        let j = dirichlet_joint(&mut rng, k, ys);
        let rho = RHOS[i % 3];
        let eps = rng.random_range(0.0..0.6);
        let got = evaluate(&optimal_strategy(&j, rho, eps).unwrap(), &j, rho, None)
            .unwrap()
            .cost;
        worst_dice = worst_dice.max((got - single_dice_oracle(&j, rho, eps)).abs());
        if k <= 3 {
            grid_cases += 1;
            worst_grid = worst_grid.max((got - general_grid_oracle(&j, rho, eps, 0.25)).abs());
        }
    }
    verdict(
        worst_dice <= 1e-6 && worst_grid <= 1e-4,
        format!(
            "single-dice oracle max |diff| {worst_dice:.2e} over 30; general grid oracle max |diff| {worst_grid:.2e} over {grid_cases}"
        ),
    )
}

fn monte_carlo() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = vec![(JointDistribution::from_pmf(&[0.5, 0.5]).unwrap(), 1.0, 0.25)];
    for _ in 0..5 {
        let (k, ys) = (rng.random_range(2..=6), rng.random_range(1..=3));
        cases.push((
            dirichlet_joint(&mut rng, k, ys),
            RHOS[rng.random_range(0..3)],
            rng.random_range(0.05..0.5),
        ));
    }
    let mut worst = 0.0f64;
    for (n, (j, rho, eps)) in cases.iter().enumerate() {
        let s = optimal_strategy(j, *rho, *eps).unwrap();
        let exact = evaluate(&s, j, *rho, None).unwrap();
        let sim = simulate_guessing(&s, j, *rho, 1000 + n as u64, 1_000_000).unwrap();
        for (emp, truth, se) in [
            (sim.estimate.error_prob, exact.error_prob, sim.error_stderr),
            (sim.estimate.cost, exact.cost, sim.cost_stderr),
        ] {
            let z = if se > 0.0 {
                (emp - truth).abs() / se
            } else if (emp - truth).abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(z);
        }
    }
    verdict(
        worst <= 4.0,
        format!("largest deviation {worst:.2} standard errors over 6 instances"),
    )
}

fn coding_sandwich() -> Verdict {
    let mut bad = Vec::new();
    let mut count = 0;
    for (n, j) in sandwich_instances().iter().enumerate() {
        for &rho in &RHOS {
            for &eps in &EPSILONS {
                count += 1;
                let h = smooth_conditional_entropy(j, EntropyQuery::new(1.0 / (1.0 + rho), eps).unwrap()).value;
                let spec = build_code(j, rho, eps).unwrap();
                let m = code_moment(&spec, j, rho).unwrap();
                let reference = moment_from_lengths(j, &spec, rho);
                let lo = (rho * h).exp();
                let hi = 4f64.powf(rho) * lo + eps * 2f64.powf(rho);
                let mut ok = m >= lo * (1.0 - 1e-9) && m <= hi && rel(m, reference) < 1e-12;
                for y in 0..j.y_size() {
                    ok &= kraft_holds(&spec.slice(y).lengths());
                    for x in 0..j.x_size() {
                        for seed in 0..3 {
                            let w = encode(&spec, x, y, seed).unwrap();
                            ok &= match decode(&spec, &w, y) {
                                Ok(Decoded::Symbol(d)) => d == x && w.get(0) == Some(false),
                                Ok(Decoded::Escape) => w.len() == 1,
                                Err(_) => false,
                            };
                        }
                        if let Some(w) = spec.payload_word(x, y) {
                            ok &= decode(&spec, &w, y) == Ok(Decoded::Symbol(x));
                        }
                    }
                }
                let pe = evaluate_code(&spec, j, rho).unwrap().error_prob;
                ok &= pe <= eps + 1e-10;
                if !ok {
                    bad.push(format!("#{n} rho={rho} eps={eps}: {lo} <= {m} <= {hi}"));
                }
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{} violations in {count} cases {}",
            bad.len(),
            bad.first().cloned().unwrap_or_default()
        ),
    )
}

/// `Σ P(x,y)[γ 2^{ρ(1+ℓ)} + (1−γ) 2^ρ]` straight from the code tables.
fn moment_from_lengths(j: &JointDistribution, spec: &smooth_renyi_core::coding::CodeSpec, rho: f64) -> f64 {
    let mut total = 0.0;
    for y in 0..j.y_size() {
        let p = column(j, y);
        for (x, &pxy) in p.iter().enumerate() {
            let (g, l) = spec
                .slice(y)
                .entry(x)
                .map_or((0.0, 0), |e| (e.gamma, e.codeword.length));
            total += pxy * (g * 2f64.powf(rho * (1.0 + l as f64)) + (1.0 - g) * 2f64.powf(rho));
        }
    }
    total
}

fn converse_profile() -> Verdict {
    let (mut kraft_dev, mut moment_dev) = (0.0f64, 0.0f64);
    for j in sandwich_instances() {
        for &rho in &RHOS {
            for &eps in &EPSILONS {
                let h = smooth_conditional_entropy(&j, EntropyQuery::new(1.0 / (1.0 + rho), eps).unwrap()).value;
                let prof = converse_length_profile(&j, rho, eps).unwrap();
                for y in 0..j.y_size() {
                    let sum: f64 = prof.lengths[y].iter().flatten().map(|l| (-l).exp()).sum();
                    if sum > 0.0 {
                        kraft_dev = kraft_dev.max((sum - 1.0).abs());
                    }
                }
                moment_dev = moment_dev.max(rel(prof.idealized_moment, (rho * h).exp()));
            }
        }
    }
    verdict(
        kraft_dev <= 1e-12 && moment_dev <= 1e-9,
        format!("max |Σe^-l - 1| {kraft_dev:.2e}; max relative moment deviation {moment_dev:.2e}"),
    )
}

fn binary_det() -> JointDistribution {
    JointDistribution::from_dense(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap()
}

fn binary_unif() -> JointDistribution {
    JointDistribution::from_dense(2, 2, vec![0.25; 4]).unwrap()
}

fn half_half() -> MixtureSource {
    MixtureSource::new(vec![binary_unif(), binary_det()], vec![0.5, 0.5]).unwrap()
}

fn convergence() -> Verdict {
    let r = convergence_report(
        &half_half(),
        EntropyQuery::new(0.5, 0.25).unwrap(),
        10,
        DEFAULT_MAX_CELLS,
    )
    .unwrap();
    let last = r.rows.last().unwrap();
    let target_ok = (last.target - LN_2).abs() < 1e-15 && r.regime == 1;
    let gaps: Vec<String> = r.rows.iter().map(|row| format!("{:.4}", row.gap)).collect();
    verdict(
        target_ok && last.gap.abs() <= 0.15 && r.monotone_tail_ok && r.lower_bound_ok(),
        format!(
            "gap at n=10 {:.4} (limit 0.15); tail nonincreasing {}; lower bound held {}; gaps n=1..10 [{}]",
            last.gap,
            r.monotone_tail_ok,
            r.lower_bound_ok(),
            gaps.join(", ")
        ),
    )
}

fn exponent_equality() -> Verdict {
    let bern = JointDistribution::from_pmf(&[0.11, 0.89]).unwrap();
    let three = MixtureSource::new(
        vec![
            JointDistribution::from_pmf(&[0.2, 0.3, 0.5]).unwrap(),
            JointDistribution::from_pmf(&[0.9, 0.05, 0.05]).unwrap(),
            JointDistribution::from_pmf(&[1.0 / 3.0; 3]).unwrap(),
        ],
        vec![0.3, 0.3, 0.4],
    )
    .unwrap();
    let cases: Vec<(&str, MixtureSource, u32)> = vec![
        ("uniform+deterministic", half_half(), 8),
        ("Bernoulli(0.11)", MixtureSource::iid(bern), 10),
        ("three-component ternary", three, 6),
    ];
    let mut targets_ok = true;
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    let mut checked = 0;
    for (name, mix, n_max) in &cases {
        let k = mix.x_size() as f64;
        let ns: Vec<u32> = (1..=*n_max).collect();
        for &rho in &RHOS {
            for &eps in &[0.0, 0.1, 0.25] {
                let g = guessing_exponent_curve(mix, rho, eps, &ns, DEFAULT_MAX_CELLS).unwrap();
                let c = coding_exponent_curve(mix, rho, eps, &ns, DEFAULT_MAX_CELLS).unwrap();
                targets_ok &= g.target == c.target;
                for (gp, cp) in g.points.iter().zip(&c.points) {
                    checked += 1;
                    let n = gp.n as f64;
                    let slack = (rho * 2.0 * LN_2 + (1.0 + n * k.ln()).ln()) / n;
                    let diff = (gp.exponent - cp.exponent).abs();
                    worst_ratio = worst_ratio.max(diff / slack);
                    if diff > slack {
                        failures.push(format!(
                            "{name} rho={rho} eps={eps} n={}: |diff| {diff:.4} > {slack:.4}",
                            gp.n
                        ));
                    }
                }
            }
        }
    }
    verdict(
        targets_ok && failures.is_empty(),
        format!(
            "targets coincide {targets_ok}; {} of {checked} points exceed the slack (worst |diff|/slack {worst_ratio:.3}){}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn contrast() -> Verdict {
    let bern = JointDistribution::from_pmf(&[0.11, 0.89]).unwrap();
    let arikan = 2.0 * (0.11f64.sqrt() + 0.89f64.sqrt()).ln();
    let eps_rows = vanishing_vs_zero_error_contrast(&bern, 1.0, 0.1, 10, DEFAULT_MAX_CELLS).unwrap();
    let row = eps_rows.last().unwrap();
    let zero_dev = eps_rows
        .iter()
        .map(|r| (r.zero_error_exponent - arikan).abs())
        .fold(0.0, f64::max);
    verdict(
        row.eps_exponent < arikan && zero_dev <= 1e-9 && (row.arikan_exponent - arikan).abs() <= 1e-12,
        format!(
            "n=10: eps-exponent {:.6} < Arikan {arikan:.6} (cost exponent {:.6}, Shannon {:.6}); eps=0 max deviation {zero_dev:.2e}",
            row.eps_exponent, row.eps_cost_exponent, row.shannon_target
        ),
    )
}

fn main() -> ExitCode {
    let results = [
        run(1, "Arimoto reduction", secs(5), arimoto_reduction),
        run(2, "allocation solver vs oracle", secs(120), allocation_vs_oracle),
        run(3, "truncation optimality", secs(60), truncation_optimality),
        run(4, "guessing sandwich", secs(60), guessing_sandwich),
        run(5, "guessing brute force", secs(300), guessing_brute_force),
        run(6, "Monte Carlo consistency", secs(60), monte_carlo),
        run(7, "coding sandwich", secs(120), coding_sandwich),
        run(8, "idealized converse profile", secs(60), converse_profile),
        run(9, "single-letter convergence", secs(600), convergence),
        run(10, "guessing and coding exponents", secs(600), exponent_equality),
        run(11, "vanishing vs zero error", secs(60), contrast),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
