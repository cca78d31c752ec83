use serde_json::json;
use smooth_renyi_core::asymptotics::{convergence_report, vanishing_vs_zero_error_contrast};
use smooth_renyi_core::entropy::EntropyQuery;

use crate::failure::Failure;
use crate::input;
use crate::output::{num, Report, Table};
use crate::Common;

pub fn convergence(common: &Common, alpha: f64, epsilon: f64, n_max: u32) -> Result<Report, Failure> {
    let mix = common.mixture()?;
    let unit = common.unit();
    let r = convergence_report(&mix, EntropyQuery::new(alpha, epsilon)?, n_max, common.max_cells)?;
    let mut t = Table::new(&["n", "rate", "target", "gap", "lower_bound", "sensitivity_rate"]);
    let mut rows = Vec::new();
    for row in &r.rows {
        let sens = row.sensitivity_rate.map(|v| unit.info(v));
        t.push(vec![
            row.n.into(),
            unit.info(row.rate).into(),
            unit.info(row.target).into(),
            unit.info(row.gap).into(),
            unit.info(row.lower_bound).into(),
            sens.into(),
        ]);
        rows.push(json!({
            "n": row.n,
            "rate": num(unit.info(row.rate)),
            "target": num(unit.info(row.target)),
            "gap": num(unit.info(row.gap)),
            "lower_bound": num(unit.info(row.lower_bound)),
            "sensitivity_rate": sens.map(num),
        }));
    }
    Ok(Report {
        json: json!({
            "alpha": num(alpha),
            "epsilon": num(epsilon),
            "unit": unit.name(),
            "regime": r.regime,
            "boundary": r.boundary,
            "monotone_tail_ok": r.monotone_tail_ok,
            "lower_bound_ok": r.lower_bound_ok(),
            "rows": rows,
        }),
        table: t,
    })
}

pub fn contrast(common: &Common, rho: f64, epsilon: f64, n_max: u32) -> Result<Report, Failure> {
    let path = common
        .dist
        .as_deref()
        .ok_or_else(|| Failure::validation("usage", "--contrast needs a single component via --dist"))?;
    let joint = input::joint(path)?;
    let unit = common.unit();
    let rows = vanishing_vs_zero_error_contrast(&joint, rho, epsilon, n_max, common.max_cells)?;
    let mut t = Table::new(&[
        "n",
        "eps_exponent",
        "eps_cost_exponent",
        "zero_error_exponent",
        "arikan_exponent",
        "shannon_target",
    ]);
    let mut out = Vec::new();
    for r in &rows {
        t.push(vec![
            r.n.into(),
            unit.info(r.eps_exponent).into(),
            unit.info(r.eps_cost_exponent).into(),
            unit.info(r.zero_error_exponent).into(),
            unit.info(r.arikan_exponent).into(),
            unit.info(r.shannon_target).into(),
        ]);
        out.push(json!({
            "n": r.n,
            "eps_exponent": num(unit.info(r.eps_exponent)),
            "eps_cost_exponent": num(unit.info(r.eps_cost_exponent)),
            "zero_error_exponent": num(unit.info(r.zero_error_exponent)),
            "arikan_exponent": num(unit.info(r.arikan_exponent)),
            "shannon_target": num(unit.info(r.shannon_target)),
        }));
    }
    Ok(Report {
        json: json!({
            "rho": num(rho),
            "epsilon": num(epsilon),
            "unit": unit.name(),
            "rows": out,
        }),
        table: t,
    })
}
