use std::fmt::Write;
use std::path::Path;

use serde_json::{json, Value};
use smooth_renyi_core::coding::{
    coding_exponent_curve, converse_length_profile, decode as decode_one, encode_all, evaluate_code, CodeSpec, Decoded,
};
use smooth_renyi_core::dist::JointDistribution;
use smooth_renyi_core::entropy::{smooth_conditional_entropy, EntropyQuery};
use smooth_renyi_core::Error;

use crate::failure::Failure;
use crate::input;
use crate::output::{num, nums, Report, Table};
use crate::Common;

fn payload(bits: u128, len: u32) -> String {
    (0..len)
        .rev()
        .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn codebook(spec: &CodeSpec, rho: f64, epsilon: f64) -> String {
    let slices: Vec<Value> = (0..spec.y_size())
        .map(|y| {
            let entries: Vec<Value> = spec
                .slice(y)
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "symbol": e.symbol,
                        "length_bits": e.codeword.length,
                        "codeword": payload(e.codeword.bits, e.codeword.length),
                        "gamma": num(e.gamma),
                    })
                })
                .collect();
            json!({ "y": y, "entries": entries })
        })
        .collect();
    let doc = json!({
        "x_size": spec.x_size(),
        "y_size": spec.y_size(),
        "rho": num(rho),
        "epsilon": num(epsilon),
        "payload_prefix": "0",
        "escape": "1",
        "slices": slices,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
    s.push('\n');
    s
}

pub fn code(
    common: &Common,
    joint: &JointDistribution,
    spec: &CodeSpec,
    rho: f64,
    epsilon: f64,
) -> Result<Report, Failure> {
    let unit = common.unit();
    let ev = evaluate_code(spec, joint, rho)?;
    let h = smooth_conditional_entropy(joint, EntropyQuery::new(1.0 / (1.0 + rho), epsilon)?).value;
    let profile = converse_length_profile(joint, rho, epsilon)?;
    let lo = (rho * h).exp();
    let hi = 4f64.powf(rho) * lo + epsilon * 2f64.powf(rho);
    let mut t = Table::new(&["y", "symbol", "length_bits", "gamma", "codeword"]);
    for y in 0..spec.y_size() {
        for e in &spec.slice(y).entries {
            t.push(vec![
                y.into(),
                e.symbol.into(),
                (e.codeword.length as usize).into(),
                e.gamma.into(),
                payload(e.codeword.bits, e.codeword.length).as_str().into(),
            ]);
        }
    }
    Ok(Report {
        json: json!({
            "rho": num(rho),
            "epsilon": num(epsilon),
            "unit": unit.name(),
            "entropy": num(unit.info(h)),
            "p_e": num(ev.error_prob),
            "moment": num(ev.moment),
            "bound_lo": num(lo),
            "bound_hi": num(hi),
            "idealized_moment": num(profile.idealized_moment),
            "moment_per_y": nums(&ev.per_y),
        }),
        table: t,
    })
}

pub fn encode(spec: &CodeSpec, path: &Path, seed: u64) -> Result<String, Failure> {
    let records = input::pairs(path)?;
    let words = encode_all(spec, &records, seed)?;
    let mut out = String::new();
    for (&(_, y), w) in records.iter().zip(&words) {
        writeln!(out, "{y} {} {}", w.len(), w.to_hex()).expect("writing to a String");
    }
    Ok(out)
}

pub fn decode(spec: &CodeSpec, path: &Path) -> Result<String, Failure> {
    let mut out = String::new();
    for (line, y, bits) in input::transmissions(path)? {
        match decode_one(spec, &bits, y) {
            Ok(Decoded::Symbol(x)) => writeln!(out, "{x} {y}"),
            Ok(Decoded::Escape) => writeln!(out, "escape {y}"),
            Err(e @ (Error::MalformedBitstring { .. } | Error::SymbolOutOfRange { .. })) => {
                let mut f = Failure::from(e);
                f.message = format!("{}:{line}: {}", path.display(), f.message);
                return Err(f);
            }
            Err(e) => return Err(e.into()),
        }
        .expect("writing to a String");
    }
    Ok(out)
}

pub fn code_exponent(common: &Common, rho: f64, epsilon: f64, n_max: u32) -> Result<Report, Failure> {
    let mix = common.mixture()?;
    let unit = common.unit();
    let ns: Vec<u32> = (1..=n_max).collect();
    let curve = coding_exponent_curve(&mix, rho, epsilon, &ns, common.max_cells)?;
    let target = unit.info(curve.target);
    let mut t = Table::new(&[
        "n",
        "exponent",
        "target",
        "p_e",
        "moment",
        "bound_lo",
        "bound_hi",
        "entropy_exponent",
        "guess_exponent",
    ]);
    let mut rows = Vec::new();
    for p in &curve.points {
        t.push(vec![
            p.n.into(),
            unit.info(p.exponent).into(),
            target.into(),
            p.error_prob.into(),
            p.moment.into(),
            p.bound_lo.into(),
            p.bound_hi.into(),
            unit.info(p.entropy_exponent).into(),
            unit.info(p.guess_exponent).into(),
        ]);
        rows.push(json!({
            "n": p.n,
            "exponent": num(unit.info(p.exponent)),
            "entropy_exponent": num(unit.info(p.entropy_exponent)),
            "guess_exponent": num(unit.info(p.guess_exponent)),
            "p_e": num(p.error_prob),
            "moment": num(p.moment),
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
