use serde_json::{json, Value};
use trsll_core::grasp::{self, object_fit, payload as payload_limits, predict_pull_test, GraspConfig, ObjectFit};

use super::Ctx;
use crate::artifacts;
use crate::error::{CliError, Result};
use crate::output::num;

fn units() -> Value {
    json!({
        "force": "N", "length": "mm", "kappa": "Nmm/rad", "c_tau": "Nmm/deg",
        "rotation": "deg", "stress": "MPa", "area": "mm^2", "slope": "N/mm",
    })
}

/// Grasp parameters from the config, with kappa and c_tau taken either
/// directly or from upstream reports.
fn grasp_config(ctx: &Ctx) -> Result<(GraspConfig, Value)> {
    let g = &ctx.cfg().grasp;
    let (kappa, kappa_source) = match (g.kappa_nmm_per_rad, &g.kappa_artifact) {
        (Some(k), _) => (k, json!("config")),
        (None, Some(p)) => (
            artifacts::kappa_at(p, g.kappa_triangle_count)?,
            json!({"artifact": p.display().to_string(), "triangle_count": g.kappa_triangle_count}),
        ),
        (None, None) => {
            return Err(CliError::MissingArtifact {
                what: "grasp kappa (layer torsional stiffness)".into(),
                hint: "set grasp.kappa_nmm_per_rad, or run `trsll sweep-triangles` and set \
                       grasp.kappa_artifact to its sweep_triangles.json"
                    .into(),
            })
        }
    };
    let (c_tau, c_tau_source) = match (g.c_tau_nmm_per_deg, &g.c_tau_artifact) {
        (Some(c), _) => (c, json!("config")),
        (None, Some(p)) => (
            artifacts::c_tau_at(p, &g.c_tau_curve, g.phi_deg)?,
            json!({"artifact": p.display().to_string(), "curve": g.c_tau_curve, "rotation_deg": g.phi_deg}),
        ),
        (None, None) => {
            return Err(CliError::MissingArtifact {
                what: "grasp c_tau (HSA torsional spring constant)".into(),
                hint: "set grasp.c_tau_nmm_per_deg, or run `trsll ctau` and set grasp.c_tau_artifact \
                       to its ctau.json"
                    .into(),
            })
        }
    };
    let cfg = GraspConfig {
        mu: g.mu,
        kappa,
        r_t: g.r_t_mm,
        r_h: g.r_h_mm,
        c_tau,
        phi: g.phi_deg,
        shear_strength: g.shear_strength_mpa,
        contact_area: g.contact_area_mm2,
        grasp_mode: g.mode,
    };
    cfg.validate()?;
    Ok((cfg, json!({"kappa": kappa_source, "c_tau": c_tau_source})))
}

pub fn predict_pull(ctx: &mut Ctx) -> Result<()> {
    let (cfg, sources) = grasp_config(ctx)?;
    let p = ctx.cfg().pull.clone();
    let pred = predict_pull_test(&cfg, p.x_max_mm, p.steps)?;
    let rows: Vec<Vec<String>> = pred
        .displacements
        .iter()
        .zip(&pred.predicted_force)
        .map(|(&x, &f)| vec![num(x), num(f)])
        .collect();
    ctx.emit.table("pull_test.csv", &["x_mm", "force_n"], &rows)?;
    let results = json!({
        "grasp": cfg,
        "sources": sources,
        "intercept_n": pred.intercept,
        "slope_n_per_mm": pred.slope,
        "kappa_from_slope_nmm_per_rad": pred.slope * cfg.r_t * cfg.r_t,
        "x_max_mm": p.x_max_mm,
        "steps": p.steps,
        "reference_measurements": grasp::REFERENCE,
    });
    ctx.emit.report("pull_test.json", units(), results)
}

pub fn payload(ctx: &mut Ctx) -> Result<()> {
    let (cfg, sources) = grasp_config(ctx)?;
    let p = ctx.cfg().payload.clone();
    if p.normal_forces_n.is_empty() {
        return Err(CliError::InvalidRange("payload.normal_forces_n is empty".into()));
    }
    let budget = p.displacement_budget_mm;
    let reports = ctx
        .par_map(&p.normal_forces_n, |&fnorm| payload_limits(&cfg, fnorm, budget))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<String>> = p
        .normal_forces_n
        .iter()
        .zip(&reports)
        .map(|(&fnorm, r)| {
            vec![
                num(fnorm),
                num(budget),
                num(r.f_slip),
                num(r.f_twist_at_x),
                num(r.f_shear),
                serde_json::to_value(r.governing_mode).expect("mode").as_str().unwrap_or("").to_string(),
                num(r.capacity),
            ]
        })
        .collect();
    ctx.emit.table(
        "payload.csv",
        &["normal_force_n", "x_mm", "f_slip_n", "f_twist_n", "f_shear_n", "governing_mode", "capacity_n"],
        &rows,
    )?;
    let cases: Vec<Value> = p
        .normal_forces_n
        .iter()
        .zip(&reports)
        .map(|(&fnorm, r)| json!({"normal_force_n": fnorm, "report": r}))
        .collect();
    let results = json!({
        "grasp": cfg,
        "sources": sources,
        "displacement_budget_mm": budget,
        "cases": cases,
    });
    ctx.emit.report("payload.json", units(), results)
}

pub fn fit_check(ctx: &mut Ctx) -> Result<()> {
    let objects = ctx.cfg().objects.clone();
    if objects.is_empty() {
        return Err(CliError::config("no objects to check; add [[objects]] entries with name, height_mm, width_mm"));
    }
    let verdicts = ctx
        .par_map(&objects, |o| object_fit(o.height_mm, o.width_mm))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let label = |v: ObjectFit| serde_json::to_value(v).expect("verdict").as_str().unwrap_or("").to_string();
    let rows: Vec<Vec<String>> = objects
        .iter()
        .zip(&verdicts)
        .map(|(o, &v)| vec![o.name.clone(), num(o.height_mm), num(o.width_mm), label(v)])
        .collect();
    ctx.emit.table("fit_check.csv", &["name", "height_mm", "width_mm", "verdict"], &rows)?;
    let results = json!({
        "envelope": {
            "min_height_mm": grasp::MIN_OBJECT_HEIGHT,
            "max_width_mm": grasp::MAX_OBJECT_WIDTH,
        },
        "objects": objects.iter().zip(&verdicts).map(|(o, v)| json!({
            "name": o.name, "height_mm": o.height_mm, "width_mm": o.width_mm, "verdict": v,
        })).collect::<Vec<_>>(),
    });
    ctx.emit.report("fit_check.json", units(), results)
}
