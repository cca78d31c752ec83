//! JSON source files and record streams.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use smooth_renyi_core::coding::BitString;
use smooth_renyi_core::dist::{JointDistribution, MixtureSource};

use crate::failure::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JointFile {
    x_size: usize,
    y_size: usize,
    /// `pxy[x][y]`.
    pxy: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureFile {
    weights: Vec<f64>,
    components: Vec<JointFile>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, &e))
}

fn joint_from(file: JointFile, what: &str) -> Result<JointDistribution, Failure> {
    if file.pxy.len() != file.x_size || file.pxy.iter().any(|row| row.len() != file.y_size) {
        return Err(Failure::validation(
            "shape",
            format!(
                "{what}: pxy must have x_size = {} rows of y_size = {} entries",
                file.x_size, file.y_size
            ),
        ));
    }
    Ok(JointDistribution::validate(&file.pxy)?)
}

pub fn joint(path: &Path) -> Result<JointDistribution, Failure> {
    let file: JointFile = serde_json::from_str(&read(path)?).map_err(|e| Failure::json(path, &e))?;
    joint_from(file, &path.display().to_string())
}

pub fn mixture(path: &Path) -> Result<MixtureSource, Failure> {
    let file: MixtureFile = serde_json::from_str(&read(path)?).map_err(|e| Failure::json(path, &e))?;
    let components = file
        .components
        .into_iter()
        .enumerate()
        .map(|(i, c)| joint_from(c, &format!("component {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MixtureSource::new(components, file.weights)?)
}

fn lines(path: &Path) -> Result<Vec<(usize, String)>, Failure> {
    Ok(read(path)?
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_owned()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, raw: Option<&str>, what: &str) -> Result<T, Failure> {
    raw.and_then(|s| s.parse().ok())
        .ok_or_else(|| Failure::validation("record", format!("{}:{line}: expected {what}", path.display())))
}

/// `x y` pairs, one per line.
pub fn pairs(path: &Path) -> Result<Vec<(usize, usize)>, Failure> {
    lines(path)?
        .into_iter()
        .map(|(n, l)| {
            let mut it = l.split_whitespace();
            let x = field(path, n, it.next(), "symbol x")?;
            let y = field(path, n, it.next(), "side information y")?;
            if it.next().is_some() {
                return Err(Failure::validation(
                    "record",
                    format!("{}:{n}: trailing fields", path.display()),
                ));
            }
            Ok((x, y))
        })
        .collect()
}

/// `y nbits hex` transmissions, one per line; `hex` is `-` for zero bits.
pub fn transmissions(path: &Path) -> Result<Vec<(usize, usize, BitString)>, Failure> {
    lines(path)?
        .into_iter()
        .map(|(n, l)| {
            let mut it = l.split_whitespace();
            let y = field(path, n, it.next(), "side information y")?;
            let len: usize = field(path, n, it.next(), "bit length")?;
            let hex = it.next().unwrap_or("-");
            let bits = BitString::from_hex(if hex == "-" { "" } else { hex }, len).ok_or_else(|| {
                Failure::validation(
                    "record",
                    format!("{}:{n}: hex payload does not match {len} bits", path.display()),
                )
            })?;
            if it.next().is_some() {
                return Err(Failure::validation(
                    "record",
                    format!("{}:{n}: trailing fields", path.display()),
                ));
            }
            Ok((n, y, bits))
        })
        .collect()
}
