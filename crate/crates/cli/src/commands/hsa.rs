use serde::Serialize;
use serde_json::{json, Value};
use trsll_core::hsa::{
    ctau_curve, normal_force_profile, series_combination, synthesize_surrogate, Anchor, CtauCurve, CtauPath, Field,
    GridPoint, HsaGrid, HsaSurface, SurrogateShape,
};

use super::Ctx;
use crate::error::{CliError, Result};
use crate::hsa_io::{self, HEADER};
use crate::output::num;

fn units() -> Value {
    json!({"extension": "mm", "rotation": "deg", "force": "N", "torque": "Nmm", "c_tau": "Nmm/deg"})
}

struct Source {
    label: String,
    grid: HsaGrid,
    /// Anchors the surrogate was fitted to; empty for measured data.
    anchors: Vec<Anchor>,
}

fn load_grid(ctx: &mut Ctx) -> Result<Source> {
    let cfg = ctx.cfg().clone();
    let limits = cfg.hsa_limits();
    if let Some(path) = &cfg.hsa.data_csv {
        let grid = hsa_io::read_grid(path, &limits)?;
        return Ok(Source {
            label: path.display().to_string(),
            grid,
            anchors: Vec::new(),
        });
    }
    let spec = cfg.hsa_spec()?;
    let anchors = if spec.rows == 4 { Anchor::short_hsa() } else { Anchor::long_hsa() };
    let shape = SurrogateShape {
        extension_max: cfg.hsa.extension_max_mm,
        rotation_max: cfg.hsa.rotation_max_deg,
        extension_count: cfg.hsa.extension_count,
        rotation_count: cfg.hsa.rotation_count,
        ..SurrogateShape::default()
    };
    let fit = synthesize_surrogate(spec, &anchors, &shape)?;
    for w in &fit.warnings {
        ctx.emit.warn(format!("surrogate: {w}"));
    }
    fit.grid.validate(&limits)?;
    Ok(Source {
        label: format!("{} surrogate", cfg.hsa.preset),
        grid: fit.grid,
        anchors: fit.anchors,
    })
}

fn path_name(p: CtauPath) -> &'static str {
    match p {
        CtauPath::Blocked => "blocked",
        CtauPath::Cylinder { .. } => "cylinder",
    }
}

fn curve_json(c: &CtauCurve) -> Value {
    let gap = match c.path {
        CtauPath::Blocked => Value::Null,
        CtauPath::Cylinder { gap } => json!(gap),
    };
    let samples: Vec<Value> = c
        .samples
        .iter()
        .map(|s| {
            json!({
                "rotation_deg": s.rotation,
                "extension_mm": s.extension,
                "torque_nmm": s.torque,
                "c_tau_nmm_per_deg": s.c_tau,
            })
        })
        .collect();
    let peak = c.peak().map(|s| json!({"rotation_deg": s.rotation, "c_tau_nmm_per_deg": s.c_tau}));
    json!({
        "path": path_name(c.path),
        "gap_mm": gap,
        "peak": peak,
        "samples": samples,
        "warnings": c.warnings,
    })
}

fn curve_rows(c: &CtauCurve) -> Vec<Vec<String>> {
    c.samples.iter().map(|s| vec![num(s.rotation), num(s.c_tau)]).collect()
}

const CTAU_HEADER: [&str; 2] = ["rotation_deg", "c_tau_nmm_per_deg"];

fn curve(ctx: &mut Ctx, surface: &HsaSurface, path: CtauPath) -> Result<CtauCurve> {
    let c = ctau_curve(surface, path)?;
    for w in &c.warnings {
        ctx.emit.warn(format!("{} path: {w}", path_name(path)));
    }
    Ok(c)
}

fn axis(max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::InvalidRange(format!("heat-map step {step} must be positive")));
    }
    let count = (max / step + 1e-9).floor() as usize;
    let mut v: Vec<f64> = (0..=count).map(|k| step * k as f64).collect();
    if v.last().is_some_and(|&last| last < max) {
        v.push(max);
    }
    Ok(v)
}

#[derive(Serialize)]
struct Extremum {
    field: Field,
    kind: &'static str,
    extension_mm: f64,
    rotation_deg: f64,
    value: f64,
}

fn extrema(grid: &HsaGrid) -> Vec<Extremum> {
    let pts: Vec<GridPoint> = grid.points().collect();
    let mut out = Vec::new();
    for field in [Field::Force, Field::Torque] {
        let val = |p: &GridPoint| if field == Field::Force { p.force } else { p.torque };
        // first occurrence in file order wins ties
        let max = pts.iter().fold(&pts[0], |b, p| if val(p) > val(b) { p } else { b });
        let min = pts.iter().fold(&pts[0], |b, p| if val(p) < val(b) { p } else { b });
        for (kind, p) in [("max", max), ("min", min)] {
            out.push(Extremum {
                field,
                kind,
                extension_mm: p.extension,
                rotation_deg: p.rotation,
                value: val(p),
            });
        }
    }
    out
}

fn anchor_checks(surface: &HsaSurface, anchors: &[Anchor]) -> Result<Vec<Value>> {
    anchors
        .iter()
        .map(|a| {
            let (f, t) = surface.query(a.extension, a.rotation)?;
            let got = if a.field == Field::Force { f } else { t };
            let rel = if a.value == 0.0 { got.abs() } else { (got - a.value).abs() / a.value.abs() };
            Ok(json!({
                "field": a.field,
                "extension_mm": a.extension,
                "rotation_deg": a.rotation,
                "target": a.value,
                "surface_value": got,
                "rel_error": rel,
            }))
        })
        .collect()
}

pub fn hsa(ctx: &mut Ctx) -> Result<()> {
    let src = load_grid(ctx)?;
    let cfg = ctx.cfg().clone();
    let surface = HsaSurface::new(src.grid.clone());
    let (x_min, x_max) = surface.extension_range();
    let (p_min, p_max) = surface.rotation_range();

    let xs: Vec<f64> = axis(x_max - x_min, cfg.hsa.heatmap_extension_step_mm)?.into_iter().map(|x| x + x_min).collect();
    let ps: Vec<f64> = axis(p_max - p_min, cfg.hsa.heatmap_rotation_step_deg)?.into_iter().map(|p| p + p_min).collect();
    let mut heat = Vec::with_capacity(xs.len() * ps.len());
    for &x in &xs {
        for &p in &ps {
            let (force, torque) = surface.query(x, p)?;
            heat.push(GridPoint { extension: x, rotation: p, force, torque });
        }
    }

    let blocked = curve(ctx, &surface, CtauPath::Blocked)?;
    let cylinder = curve(ctx, &surface, CtauPath::Cylinder { gap: cfg.hsa.cylinder_gap_mm })?;

    // two identical HSAs in series along the blocked path
    let mut series = Vec::new();
    let mut skipped = Vec::new();
    for s in &blocked.samples {
        match series_combination(s.c_tau, s.c_tau) {
            Ok(c) => series.push((s.rotation, s.c_tau, c)),
            Err(_) => skipped.push(s.rotation),
        }
    }
    if !skipped.is_empty() {
        ctx.emit.warn(format!(
            "series pair skipped at {} rotations with non-positive c_tau",
            skipped.len()
        ));
    }

    let ext = extrema(&src.grid);
    let anchors = anchor_checks(&surface, &src.anchors)?;

    let meta = hsa_io::metadata(&src.grid.spec);
    ctx.emit.table_with_metadata("hsa_grid.csv", &meta, &HEADER, &hsa_io::grid_rows(&src.grid))?;
    ctx.emit.table("hsa_heatmap.csv", &HEADER, &hsa_io::rounded_rows(heat.into_iter()))?;
    ctx.emit.table(
        "hsa_extrema.csv",
        &["field", "kind", "extension_mm", "rotation_deg", "value"],
        &ext.iter()
            .map(|e| {
                let field = if e.field == Field::Force { "force_n" } else { "torque_nmm" };
                vec![field.into(), e.kind.into(), num(e.extension_mm), num(e.rotation_deg), num(e.value)]
            })
            .collect::<Vec<_>>(),
    )?;
    ctx.emit.table("ctau_blocked.csv", &CTAU_HEADER, &curve_rows(&blocked))?;
    ctx.emit.table("ctau_cylinder.csv", &CTAU_HEADER, &curve_rows(&cylinder))?;
    ctx.emit.table(
        "ctau_series.csv",
        &["rotation_deg", "c_tau_single_nmm_per_deg", "c_tau_pair_nmm_per_deg"],
        &series.iter().map(|&(p, a, c)| vec![num(p), num(a), num(c)]).collect::<Vec<_>>(),
    )?;

    let results = json!({
        "source": src.label,
        "spec": src.grid.spec,
        "grid": {
            "extensions_mm": src.grid.extensions,
            "rotations_deg": src.grid.rotations,
        },
        "heatmap": {
            "extension_step_mm": cfg.hsa.heatmap_extension_step_mm,
            "rotation_step_deg": cfg.hsa.heatmap_rotation_step_deg,
            "points": xs.len() * ps.len(),
        },
        "extrema": ext,
        "anchors": anchors,
        "curves": [curve_json(&blocked), curve_json(&cylinder)],
        "series": {
            "description": "two identical HSAs in series, blocked path",
            "samples": series.iter().map(|&(p, a, c)| json!({
                "rotation_deg": p,
                "c_tau_single_nmm_per_deg": a,
                "c_tau_pair_nmm_per_deg": c,
            })).collect::<Vec<_>>(),
            "skipped_rotations_deg": skipped,
        },
    });
    ctx.emit.report("hsa.json", units(), results)
}

pub fn ctau(ctx: &mut Ctx) -> Result<()> {
    let src = load_grid(ctx)?;
    let cfg = ctx.cfg().clone();
    let h = &cfg.hsa;
    let path = match h.ctau_path.to_ascii_lowercase().as_str() {
        "blocked" => CtauPath::Blocked,
        "cylinder" => CtauPath::Cylinder { gap: h.cylinder_gap_mm },
        other => return Err(CliError::config(format!("unknown c_tau path `{other}` (blocked|cylinder)"))),
    };
    let surface = HsaSurface::new(src.grid);
    let c = curve(ctx, &surface, path)?;
    let profile = normal_force_profile(
        &surface,
        &h.profile_extensions_mm,
        h.profile_rotation_deg,
        h.lever_arm_mm,
        h.friction,
        h.applied_force_n,
    )?;
    let floored = profile.iter().filter(|s| s.floored).count();
    if floored > 0 {
        ctx.emit.warn(format!(
            "normal force floored at 0 for {floored} of {} extensions (HSA force exceeds the applied load)",
            profile.len()
        ));
    }

    ctx.emit.table(&format!("ctau_{}.csv", path_name(path)), &CTAU_HEADER, &curve_rows(&c))?;
    ctx.emit.table(
        "normal_force.csv",
        &["extension_mm", "c_tau_nmm_per_deg", "hsa_moment_nmm", "finger_force_n", "normal_force_n", "floored"],
        &profile
            .iter()
            .map(|s| {
                vec![
                    num(s.extension),
                    num(s.c_tau),
                    num(s.hsa_moment),
                    num(s.finger_force),
                    num(s.normal_force),
                    s.floored.to_string(),
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    let results = json!({
        "source": src.label,
        "curves": [curve_json(&c)],
        "normal_force_profile": {
            "rotation_deg": h.profile_rotation_deg,
            "lever_arm_mm": h.lever_arm_mm,
            "friction": h.friction,
            "applied_force_n": h.applied_force_n,
            "states": profile,
        },
    });
    ctx.emit.report("ctau.json", units(), results)
}
