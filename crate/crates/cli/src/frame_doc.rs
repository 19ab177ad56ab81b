//! Versioned JSON documents for frame models and their solutions.
//!
//! Units are fixed (mm, N, Nmm, MPa, rad) and stated in the header. Element
//! `orientation` is any vector off the element axis; its normal component is
//! the local y axis, along which the section depth lies. Values are written
//! at full precision so a model reads back unchanged.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use trsll_core::model::{Constraint, Element, FrameModel, NodalLoad};
use trsll_core::{Material, SolveResult};

use crate::error::{CliError, Result};
use crate::output::num;

pub const FRAME_FORMAT: &str = "trsll-frame-model";
pub const SOLUTION_FORMAT: &str = "trsll-frame-solution";
pub const FORMAT_VERSION: u32 = 1;

fn units() -> Value {
    json!({
        "length": "mm",
        "force": "N",
        "moment": "Nmm",
        "modulus": "MPa",
        "stress": "MPa",
        "rotation": "rad",
    })
}

#[derive(Serialize, Deserialize)]
struct FrameBody {
    nodes: Vec<[f64; 3]>,
    materials: Vec<Material>,
    elements: Vec<Element>,
    constraints: Vec<Constraint>,
    loads: Vec<NodalLoad>,
}

pub fn frame_document(model: &FrameModel, provenance: &Value) -> Value {
    let body = FrameBody {
        nodes: model.nodes.clone(),
        materials: model.materials.clone(),
        elements: model.elements.clone(),
        constraints: model.constraints.clone(),
        loads: model.loads.clone(),
    };
    let mut doc = json!({
        "format": FRAME_FORMAT,
        "format_version": FORMAT_VERSION,
        "units": units(),
        "provenance": provenance,
    });
    let extra = serde_json::to_value(body).expect("frame model serializes");
    merge(&mut doc, extra);
    doc
}

pub fn read_frame_document(doc: &Value) -> Result<FrameModel> {
    check_header(doc, FRAME_FORMAT)?;
    let body: FrameBody =
        serde_json::from_value(doc.clone()).map_err(|e| CliError::data(format!("frame model document: {e}")))?;
    let model = FrameModel {
        nodes: body.nodes,
        materials: body.materials,
        elements: body.elements,
        constraints: body.constraints,
        loads: body.loads,
    };
    model.validate()?;
    Ok(model)
}

pub fn solution_document(result: &SolveResult, provenance: &Value) -> Value {
    let mut doc = json!({
        "format": SOLUTION_FORMAT,
        "format_version": FORMAT_VERSION,
        "units": units(),
        "provenance": provenance,
    });
    merge(&mut doc, serde_json::to_value(result).expect("solution serializes"));
    doc
}

pub fn read_solution_document(doc: &Value) -> Result<SolveResult> {
    check_header(doc, SOLUTION_FORMAT)?;
    serde_json::from_value(doc.clone()).map_err(|e| CliError::data(format!("solution document: {e}")))
}

fn check_header(doc: &Value, format: &str) -> Result<()> {
    let found = doc.get("format").and_then(Value::as_str);
    let version = doc.get("format_version").and_then(Value::as_u64);
    if found != Some(format) || version != Some(u64::from(FORMAT_VERSION)) {
        return Err(CliError::data(format!(
            "expected {format} v{FORMAT_VERSION}, found {found:?} v{version:?}"
        )));
    }
    Ok(())
}

fn merge(doc: &mut Value, extra: Value) {
    if let (Value::Object(d), Value::Object(e)) = (doc, extra) {
        d.extend(e);
    }
}

pub const DISPLACEMENT_HEADER: [&str; 7] = ["node", "ux_mm", "uy_mm", "uz_mm", "rx_rad", "ry_rad", "rz_rad"];

pub fn displacement_rows(result: &SolveResult) -> Vec<Vec<String>> {
    result
        .translations
        .iter()
        .zip(&result.rotations)
        .enumerate()
        .map(|(i, (t, r))| {
            let mut row = vec![i.to_string()];
            row.extend(t.iter().chain(r).map(|&v| num(v)));
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use trsll_core::geometry::{build_trsll_frame, TrsllDesign};

    #[test]
    fn model_round_trip() {
        let mut m = build_trsll_frame(&TrsllDesign::standard(4, Material::pa6())).unwrap();
        let tip = m.nodes.len() - 1;
        m.load(tip, [0.0; 3], [5.0, 0.0, 0.0]);
        let doc = frame_document(&m, &json!({"config_hash": "x"}));
        let text = serde_json::to_string(&doc).unwrap();
        let back = read_frame_document(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);

        let s = trsll_core::solve(&m).unwrap();
        let sdoc = solution_document(&s, &json!({}));
        let text = serde_json::to_string(&sdoc).unwrap();
        assert_eq!(read_solution_document(&serde_json::from_str(&text).unwrap()).unwrap(), s);
        assert_eq!(displacement_rows(&s).len(), m.nodes.len());
    }

    #[test]
    fn header_checked() {
        let m = build_trsll_frame(&TrsllDesign::standard(2, Material::pa6())).unwrap();
        let mut doc = frame_document(&m, &json!({}));
        doc["format_version"] = json!(99);
        assert!(read_frame_document(&doc).is_err());
        assert!(read_solution_document(&frame_document(&m, &json!({}))).is_err());
    }
}
