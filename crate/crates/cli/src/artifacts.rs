//! Values read back from report documents written by earlier runs.

use std::path::Path;

use serde_json::Value;
use trsll_core::Material;

use crate::error::{CliError, Result};

fn read_report(path: &Path, expect_commands: &[&str]) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::MissingArtifact {
        what: format!("{} ({e})", path.display()),
        hint: format!("run `trsll {}` first and point the config at its report", expect_commands[0]),
    })?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let command = doc.get("command").and_then(Value::as_str).unwrap_or("");
    if !expect_commands.contains(&command) {
        return Err(CliError::data(format!(
            "{} was written by `{command}`, expected one of {expect_commands:?}",
            path.display()
        )));
    }
    Ok(doc)
}

fn field<'a>(doc: &'a Value, pointer: &str, path: &Path) -> Result<&'a Value> {
    doc.pointer(pointer)
        .ok_or_else(|| CliError::data(format!("{}: missing {pointer}", path.display())))
}

/// Fitted material from a `calibrate` report.
pub fn calibrated_material(path: &Path) -> Result<Material> {
    let doc = read_report(path, &["calibrate", "sweep-flat"])?;
    let m = field(&doc, "/results/calibration/material", path)?;
    serde_json::from_value(m.clone()).map_err(|e| CliError::data(format!("{}: material: {e}", path.display())))
}

/// Torsional stiffness at `n` triangles from a `sweep-triangles` report.
pub fn kappa_at(path: &Path, n: usize) -> Result<f64> {
    let doc = read_report(path, &["sweep-triangles"])?;
    let designs = field(&doc, "/results/designs", path)?
        .as_array()
        .ok_or_else(|| CliError::data(format!("{}: designs is not a list", path.display())))?;
    designs
        .iter()
        .find(|d| d.get("triangle_count").and_then(Value::as_u64) == Some(n as u64))
        .and_then(|d| d.get("kappa_nmm_per_rad").and_then(Value::as_f64))
        .ok_or_else(|| CliError::MissingArtifact {
            what: format!("kappa for {n} triangles in {}", path.display()),
            hint: format!("rerun `trsll sweep-triangles` with a range that includes n = {n}"),
        })
}

/// c_tau at `phi` on the named curve of a `ctau` or `hsa` report, linearly
/// interpolated between samples.
pub fn c_tau_at(path: &Path, curve: &str, phi: f64) -> Result<f64> {
    let doc = read_report(path, &["ctau", "hsa"])?;
    let curves = field(&doc, "/results/curves", path)?
        .as_array()
        .ok_or_else(|| CliError::data(format!("{}: curves is not a list", path.display())))?;
    let missing = || CliError::MissingArtifact {
        what: format!("`{curve}` c_tau curve in {}", path.display()),
        hint: format!("run `trsll ctau --set hsa.ctau_path={curve}` or `trsll hsa`"),
    };
    let c = curves
        .iter()
        .find(|c| c.get("path").and_then(Value::as_str) == Some(curve))
        .ok_or_else(missing)?;
    let samples: Vec<(f64, f64)> = c
        .get("samples")
        .and_then(Value::as_array)
        .ok_or_else(missing)?
        .iter()
        .filter_map(|s| Some((s.get("rotation_deg")?.as_f64()?, s.get("c_tau_nmm_per_deg")?.as_f64()?)))
        .collect();
    for w in samples.windows(2) {
        let ((p0, c0), (p1, c1)) = (w[0], w[1]);
        if (p0..=p1).contains(&phi) {
            let t = if p1 > p0 { (phi - p0) / (p1 - p0) } else { 0.0 };
            return Ok(c0 + t * (c1 - c0));
        }
    }
    match samples.as_slice() {
        [(p, c)] if *p == phi => Ok(*c),
        _ => Err(CliError::data(format!(
            "{}: rotation {phi} deg is outside the `{curve}` curve",
            path.display()
        ))),
    }
}
