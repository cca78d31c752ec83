use serde_json::{json, Value};
use smooth_renyi_core::guessing::{
    achievability_bound, converse_bound, direct_strategy, evaluate, guessing_exponent_curve, optimal_strategy,
    optimize_with_penalty, simulate_guessing, GuessingStrategy,
};

use crate::failure::Failure;
use crate::output::{num, nums, Report, Table};
use crate::{Common, StrategyKind};

fn strategy_json(s: &GuessingStrategy) -> Value {
    let per_y: Vec<Value> = (0..s.y_size())
        .map(|y| {
            let order: Vec<usize> = (1..=s.x_size()).map(|i| s.symbol_at(y, i)).collect();
            json!({ "y": y, "order": order, "giveup": nums(s.giveup(y)) })
        })
        .collect();
    Value::Array(per_y)
}

pub fn guess(
    common: &Common,
    rho: f64,
    epsilon: f64,
    penalty: Option<f64>,
    eps_step: f64,
    kind: StrategyKind,
    simulate: Option<u64>,
) -> Result<Report, Failure> {
    let joint = common.joint()?;
    let (eps, strategy) = match penalty {
        Some(c) => {
            if kind != StrategyKind::Optimal {
                return Err(Failure::validation(
                    "usage",
                    "--penalty searches over optimal strategies only",
                ));
            }
            let (e, _) = optimize_with_penalty(&joint, rho, c, eps_step)?;
            (e, optimal_strategy(&joint, rho, e)?)
        }
        None => match kind {
            StrategyKind::Optimal => (epsilon, optimal_strategy(&joint, rho, epsilon)?),
            StrategyKind::Direct => (epsilon, direct_strategy(&joint, rho, epsilon)?),
        },
    };
    let ev = evaluate(&strategy, &joint, rho, penalty)?;
    let lo = converse_bound(&joint, rho, eps)?;
    let hi = achievability_bound(&joint, rho, eps)?;
    let sim = match simulate {
        Some(trials) => {
            let seed = common.seed("for --simulate")?;
            Some(simulate_guessing(&strategy, &joint, rho, seed, trials)?)
        }
        None => None,
    };
    let mut t = Table::new(&[
        "rho",
        "epsilon",
        "p_e",
        "cost",
        "bound_lo",
        "bound_hi",
        "combined_cost",
        "sim_p_e",
        "sim_p_e_stderr",
        "sim_cost",
        "sim_cost_stderr",
    ]);
    t.push(vec![
        rho.into(),
        eps.into(),
        ev.error_prob.into(),
        ev.cost.into(),
        lo.into(),
        hi.into(),
        ev.combined_cost.into(),
        sim.map(|s| s.estimate.error_prob).into(),
        sim.map(|s| s.error_stderr).into(),
        sim.map(|s| s.estimate.cost).into(),
        sim.map(|s| s.cost_stderr).into(),
    ]);
    Ok(Report {
        json: json!({
            "rho": num(rho),
            "epsilon": num(eps),
            "strategy": match kind { StrategyKind::Optimal => "optimal", StrategyKind::Direct => "direct" },
            "p_e": num(ev.error_prob),
            "cost": num(ev.cost),
            "bound_lo": num(lo),
            "bound_hi": num(hi),
            "penalty": penalty.map_or(Value::Null, |c| json!({
                "penalty": num(c),
                "epsilon_star": num(eps),
                "combined_cost": ev.combined_cost.map_or(Value::Null, num),
            })),
            "simulation": sim.map_or(Value::Null, |s| json!({
                "trials": s.trials,
                "seed": common.seed,
                "p_e": num(s.estimate.error_prob),
                "p_e_stderr": num(s.error_stderr),
                "cost": num(s.estimate.cost),
                "cost_stderr": num(s.cost_stderr),
            })),
            "guesses": strategy_json(&strategy),
        }),
        table: t,
    })
}

pub fn guess_exponent(common: &Common, rho: f64, epsilon: f64, n_max: u32) -> Result<Report, Failure> {
    let mix = common.mixture()?;
    let unit = common.unit();
    let ns: Vec<u32> = (1..=n_max).collect();
    let curve = guessing_exponent_curve(&mix, rho, epsilon, &ns, common.max_cells)?;
    let target = unit.info(curve.target);
    let mut t = Table::new(&[
        "n",
        "exponent",
        "target",
        "p_e",
        "cost",
        "bound_lo",
        "bound_hi",
        "entropy_exponent",
    ]);
    let mut rows = Vec::new();
    for p in &curve.points {
        t.push(vec![
            p.n.into(),
            unit.info(p.exponent).into(),
            target.into(),
            p.error_prob.into(),
            p.cost.into(),
            p.bound_lo.into(),
            p.bound_hi.into(),
            unit.info(p.entropy_exponent).into(),
        ]);
        rows.push(json!({
            "n": p.n,
            "exponent": num(unit.info(p.exponent)),
            "entropy_exponent": num(unit.info(p.entropy_exponent)),
            "p_e": num(p.error_prob),
            "cost": num(p.cost),
            "bound_lo": num(p.bound_lo),
            "bound_hi": num(p.bound_hi),
        }));
    }
    Ok(Report {
        json: json!({
            "rho": num(rho),
            "epsilon": num(epsilon),
            "unit": unit.name(),
            "target": num(target),
            "points": rows,
        }),
        table: t,
    })
}
