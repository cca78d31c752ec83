use serde_json::{json, Value};
use smooth_renyi_core::dist::JointDistribution;
use smooth_renyi_core::entropy::{
    arimoto_conditional_renyi, oracle_allocation, renner_wolf_entropy, smooth_conditional_entropy, EntropyQuery,
    EntropyResult,
};

use crate::failure::Failure;
use crate::output::{num, nums, Cell, Report, Table};
use crate::{Common, Variant};

fn allocation_rows(joint: &JointDistribution, r: Option<&EntropyResult>, value: f64) -> Table {
    let mut t = Table::new(&["y", "p_y", "eps_y", "truncation", "value"]);
    let trunc = r.map(|r| r.q.truncation_indices());
    for y in 0..joint.y_size() {
        t.push(vec![
            y.into(),
            joint.py(y).into(),
            r.map(|r| r.allocation.eps_y[y]).into(),
            trunc.as_ref().map_or(Cell::Empty, |t| t[y].into()),
            value.into(),
        ]);
    }
    t
}

pub fn entropy(common: &Common, alpha: f64, epsilon: f64, variant: Variant, step: f64) -> Result<Report, Failure> {
    let joint = common.joint()?;
    let unit = common.unit();
    let (name, value, result) = match variant {
        Variant::Arimoto => {
            if epsilon != 0.0 {
                return Err(Failure::validation("usage", "the arimoto variant takes no --epsilon"));
            }
            ("arimoto", arimoto_conditional_renyi(&joint, alpha)?, None)
        }
        Variant::RennerWolf => {
            let q = EntropyQuery::new(alpha, epsilon)?;
            ("renner-wolf", renner_wolf_entropy(&joint, q)?, None)
        }
        Variant::Smooth => {
            let r = smooth_conditional_entropy(&joint, EntropyQuery::new(alpha, epsilon)?);
            ("smooth", r.value, Some(r))
        }
        Variant::Oracle => {
            let r = oracle_allocation(&joint, EntropyQuery::new(alpha, epsilon)?, step)?;
            ("oracle", r.value, Some(r))
        }
    };
    let shown = unit.info(value);
    let json = json!({
        "variant": name,
        "alpha": num(alpha),
        "epsilon": num(epsilon),
        "unit": unit.name(),
        "value": num(shown),
        "allocation": result.as_ref().map_or(Value::Null, |r| nums(&r.allocation.eps_y)),
        "truncation_indices": result.as_ref().map_or(Value::Null, |r| json!(r.q.truncation_indices())),
    });
    Ok(Report {
        table: allocation_rows(&joint, result.as_ref(), shown),
        json,
    })
}

pub fn oracle(common: &Common, alpha: f64, epsilon: f64, step: f64) -> Result<Report, Failure> {
    let joint = common.joint()?;
    let unit = common.unit();
    let q = EntropyQuery::new(alpha, epsilon)?;
    let reference = oracle_allocation(&joint, q, step)?;
    let solver = smooth_conditional_entropy(&joint, q);
    let gap = (solver.value - reference.value).abs() / reference.value.abs().max(f64::MIN_POSITIVE);
    let mut t = Table::new(&[
        "y",
        "p_y",
        "oracle_eps_y",
        "solver_eps_y",
        "oracle_value",
        "solver_value",
    ]);
    for y in 0..joint.y_size() {
        t.push(vec![
            y.into(),
            joint.py(y).into(),
            reference.allocation.eps_y[y].into(),
            solver.allocation.eps_y[y].into(),
            unit.info(reference.value).into(),
            unit.info(solver.value).into(),
        ]);
    }
    Ok(Report {
        json: json!({
            "alpha": num(alpha),
            "epsilon": num(epsilon),
            "step": num(step),
            "unit": unit.name(),
            "oracle": {
                "value": num(unit.info(reference.value)),
                "allocation": nums(&reference.allocation.eps_y),
            },
            "solver": {
                "value": num(unit.info(solver.value)),
                "allocation": nums(&solver.allocation.eps_y),
            },
            "relative_gap": num(gap),
        }),
        table: t,
    })
}
