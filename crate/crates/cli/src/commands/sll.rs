use std::path::Path;

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use trsll_core::geometry::{build_trsll_frame_with_layout, FlatSllDesign};
use trsll_core::sll::{
    analyze_flat, analyze_trsll, calibrate_material, peak_index, Calibration, CalibrationRow, StiffnessReport,
    SweepPoint, FLAT_TABLE,
};
use trsll_core::Material;

use super::Ctx;
use crate::error::{CliError, Result};
use crate::frame_doc::{displacement_rows, frame_document, solution_document, DISPLACEMENT_HEADER};
use crate::output::num;

const STIFFNESS_UNITS: &str = r#"{"thickness":"mm","kappa":"Nmm/rad","bending":"N/mm","stress":"MPa","moment":"Nmm","force":"N","angle":"rad","deflection":"mm"}"#;

fn stiffness_units() -> serde_json::Value {
    serde_json::from_str(STIFFNESS_UNITS).expect("static units")
}

#[derive(Serialize)]
struct FlatRow {
    thickness_mm: f64,
    kappa_nmm_per_rad: f64,
    bending_n_per_mm: f64,
    twist_angle_rad: f64,
    tip_deflection_mm: f64,
    avg_stress_torsion_mpa: f64,
    avg_stress_bending_mpa: f64,
}

impl FlatRow {
    fn new(thickness: f64, r: &StiffnessReport) -> Self {
        FlatRow {
            thickness_mm: thickness,
            kappa_nmm_per_rad: r.torsional_stiffness,
            bending_n_per_mm: r.bending_stiffness,
            twist_angle_rad: r.twist_angle,
            tip_deflection_mm: r.tip_deflection,
            avg_stress_torsion_mpa: r.avg_stress_torsion,
            avg_stress_bending_mpa: r.avg_stress_bending,
        }
    }

    fn cells(&self) -> Vec<String> {
        vec![
            num(self.thickness_mm),
            num(self.kappa_nmm_per_rad),
            num(self.bending_n_per_mm),
            num(self.avg_stress_torsion_mpa),
            num(self.avg_stress_bending_mpa),
        ]
    }
}

const FLAT_HEADER: [&str; 5] = [
    "thickness_mm",
    "kappa_nmm_per_rad",
    "bending_n_per_mm",
    "avg_stress_torsion_mpa",
    "avg_stress_bending_mpa",
];

fn flat_sweep(ctx: &Ctx, material: &Material) -> Result<Vec<FlatRow>> {
    let cfg = ctx.cfg();
    let designs: Vec<FlatSllDesign> = cfg
        .thicknesses()?
        .into_iter()
        .map(|t| cfg.flat_design(t, material.clone()))
        .collect();
    for d in &designs {
        d.validate()?;
    }
    let (m, f) = (cfg.flat.torsion_moment_nmm, cfg.flat.bending_force_n);
    ctx.par_map(&designs, |d| analyze_flat(d, m, f).map(|r| FlatRow::new(d.thickness, &r)))
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(CliError::from)
}

fn strictly_increasing(v: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = v.collect();
    v.windows(2).all(|w| w[1] > w[0])
}

#[derive(Serialize)]
struct CalibrationCheck {
    thickness_mm: f64,
    kappa_table: f64,
    kappa_model: f64,
    kappa_rel_error: f64,
    bending_table: f64,
    bending_model: f64,
    bending_rel_error: f64,
}

const CHECK_HEADER: [&str; 7] = [
    "thickness_mm",
    "kappa_table_nmm_per_rad",
    "kappa_model_nmm_per_rad",
    "kappa_rel_error",
    "bending_table_n_per_mm",
    "bending_model_n_per_mm",
    "bending_rel_error",
];

fn read_table(path: &Path) -> Result<Vec<CalibrationRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let expect = ["thickness_mm", "kappa_nmm_per_rad", "bending_n_per_mm"];
    let header = reader.headers().map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    if header.iter().ne(expect) {
        return Err(CliError::data(format!("{}: header must be `{}`", path.display(), expect.join(","))));
    }
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let row_err = |reason: String| CliError::Row {
            path: path.to_path_buf(),
            row: k + 1,
            reason,
        };
        let rec = rec.map_err(|e| row_err(e.to_string()))?;
        if rec.len() != 3 {
            return Err(row_err(format!("expected 3 fields, found {}", rec.len())));
        }
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| row_err(format!("`{s}` is not a number"))))
            .collect::<Result<_>>()?;
        rows.push(CalibrationRow {
            thickness: v[0],
            torsional_stiffness: v[1],
            bending_stiffness: v[2],
        });
    }
    Ok(rows)
}

fn calibration_table(ctx: &Ctx) -> Result<(String, Vec<CalibrationRow>)> {
    match &ctx.cfg().calibration.table_csv {
        Some(p) => Ok((p.display().to_string(), read_table(p)?)),
        None => Ok(("built-in flat-layer table".into(), FLAT_TABLE.to_vec())),
    }
}

/// Fits the material and reruns the flat model at each table thickness.
fn run_calibration(ctx: &mut Ctx, base: &Material) -> Result<(Calibration, Vec<CalibrationCheck>, String)> {
    let (source, table) = calibration_table(ctx)?;
    let cfg = ctx.cfg();
    let base_design = cfg.flat_design(table.first().map_or(0.4, |r| r.thickness), base.clone());
    let cal = calibrate_material(&table, &base_design)?;
    let (m, f) = (cfg.flat.torsion_moment_nmm, cfg.flat.bending_force_n);
    let checks = ctx
        .par_map(&table, |row| {
            let d = cfg.flat_design(row.thickness, cal.material.clone());
            analyze_flat(&d, m, f).map(|r| CalibrationCheck {
                thickness_mm: row.thickness,
                kappa_table: row.torsional_stiffness,
                kappa_model: r.torsional_stiffness,
                kappa_rel_error: r.torsional_stiffness / row.torsional_stiffness - 1.0,
                bending_table: row.bending_stiffness,
                bending_model: r.bending_stiffness,
                bending_rel_error: r.bending_stiffness / row.bending_stiffness - 1.0,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    for w in &cal.warnings {
        ctx.emit.warn(format!("calibration: {w}"));
    }
    Ok((cal, checks, source))
}

fn check_rows(checks: &[CalibrationCheck]) -> Vec<Vec<String>> {
    checks
        .iter()
        .map(|c| {
            [
                c.thickness_mm,
                c.kappa_table,
                c.kappa_model,
                c.kappa_rel_error,
                c.bending_table,
                c.bending_model,
                c.bending_rel_error,
            ]
            .into_iter()
            .map(num)
            .collect()
        })
        .collect()
}

fn calibration_json(cal: &Calibration, checks: &[CalibrationCheck], source: &str) -> serde_json::Value {
    let max = |f: fn(&CalibrationCheck) -> f64| checks.iter().map(|c| f(c).abs()).fold(0.0, f64::max);
    json!({
        "table_source": source,
        "material": cal.material,
        "implied_poisson_ratio": cal.implied_poisson_ratio,
        "max_abs_kappa_rel_error": max(|c| c.kappa_rel_error),
        "max_abs_bending_rel_error": max(|c| c.bending_rel_error),
        "kappa_strictly_increasing": strictly_increasing(checks.iter().map(|c| c.kappa_model)),
        "bending_strictly_increasing": strictly_increasing(checks.iter().map(|c| c.bending_model)),
        "rows": checks,
    })
}

pub fn sweep_flat(ctx: &mut Ctx) -> Result<()> {
    let material = ctx.cfg().material()?;
    let rows = flat_sweep(ctx, &material)?;
    if !strictly_increasing(rows.iter().map(|r| r.kappa_nmm_per_rad)) {
        ctx.emit.warn("flat kappa is not strictly increasing in thickness");
    }
    let calibration = if ctx.cfg().flat.calibrate {
        let (cal, checks, source) = run_calibration(ctx, &material)?;
        let calibrated = flat_sweep(ctx, &cal.material)?;
        ctx.emit.table(
            "sweep_flat_calibrated.csv",
            &FLAT_HEADER,
            &calibrated.iter().map(FlatRow::cells).collect::<Vec<_>>(),
        )?;
        ctx.emit.table("calibration_check.csv", &CHECK_HEADER, &check_rows(&checks))?;
        Some((calibration_json(&cal, &checks, &source), calibrated))
    } else {
        None
    };
    ctx.emit.table("sweep_flat.csv", &FLAT_HEADER, &rows.iter().map(FlatRow::cells).collect::<Vec<_>>())?;
    let cfg = ctx.cfg();
    let mut results = json!({
        "loads": {"torsion_moment_nmm": cfg.flat.torsion_moment_nmm, "bending_force_n": cfg.flat.bending_force_n},
        "geometry": {"length_mm": cfg.flat.length_mm, "width_mm": cfg.flat.width_mm},
        "material": material,
        "rows": rows,
    });
    if let Some((cal, calibrated)) = calibration {
        results["calibration"] = cal;
        results["calibrated_rows"] = serde_json::to_value(calibrated).expect("rows serialize");
    }
    ctx.emit.report("sweep_flat.json", stiffness_units(), results)
}

pub fn calibrate(ctx: &mut Ctx) -> Result<()> {
    let material = ctx.cfg().material()?;
    let (cal, checks, source) = run_calibration(ctx, &material)?;
    ctx.emit.table("calibration.csv", &CHECK_HEADER, &check_rows(&checks))?;
    let results = json!({ "calibration": calibration_json(&cal, &checks, &source) });
    ctx.emit.report("calibration.json", stiffness_units(), results)
}

#[derive(Serialize)]
struct TriangleRow {
    triangle_count: usize,
    kappa_nmm_per_rad: f64,
    bending_n_per_mm: f64,
    twist_angle_rad: f64,
    tip_deflection_mm: f64,
    avg_stress_torsion_mpa: f64,
    avg_stress_bending_mpa: f64,
}

pub fn sweep_triangles(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg().clone();
    let material = cfg.material()?;
    let counts = cfg.triangle_counts()?;
    let base = cfg.trsll_design(counts[0], material.clone());
    base.validate()?;
    let (m, f) = (cfg.triangles.torsion_moment_nmm, cfg.triangles.bending_force_n);

    let points: Vec<SweepPoint> = ctx.par_map(&counts, |&n| SweepPoint {
        triangle_count: n,
        outcome: analyze_trsll(&base.with_triangles(n), m, f),
    });
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for p in &points {
        match &p.outcome {
            Ok(r) => rows.push(TriangleRow {
                triangle_count: p.triangle_count,
                kappa_nmm_per_rad: r.torsional_stiffness,
                bending_n_per_mm: r.bending_stiffness,
                twist_angle_rad: r.twist_angle,
                tip_deflection_mm: r.tip_deflection,
                avg_stress_torsion_mpa: r.avg_stress_torsion,
                avg_stress_bending_mpa: r.avg_stress_bending,
            }),
            Err(e) => {
                ctx.emit.warn(format!("n = {}: {e}", p.triangle_count));
                failures.push(json!({"triangle_count": p.triangle_count, "error": e.to_string()}));
            }
        }
    }
    if rows.is_empty() {
        let first = points.into_iter().find_map(|p| p.outcome.err()).expect("every design failed");
        return Err(first.into());
    }

    let flat = cfg.flat_design(cfg.triangles.flat_reference_thickness_mm, material.clone());
    let flat_kappa = analyze_flat(&flat, cfg.flat.torsion_moment_nmm, cfg.flat.bending_force_n)?.torsional_stiffness;
    let peak = &points[peak_index(&points).expect("at least one success")];
    let peak_kappa = peak.outcome.as_ref().expect("peak succeeded").torsional_stiffness;
    let peak_json = json!({
        "triangle_count": peak.triangle_count,
        "kappa_nmm_per_rad": peak_kappa,
        "flat_reference_thickness_mm": flat.thickness,
        "flat_kappa_nmm_per_rad": flat_kappa,
        "ratio_to_flat": peak_kappa / flat_kappa,
    });

    let by_n = |cols: &dyn Fn(&TriangleRow) -> Vec<f64>| -> Vec<Vec<String>> {
        rows.iter()
            .map(|r| {
                let mut v = vec![r.triangle_count.to_string()];
                v.extend(cols(r).into_iter().map(num));
                v
            })
            .collect()
    };
    let combined = by_n(&|r| {
        vec![r.kappa_nmm_per_rad, r.bending_n_per_mm, r.avg_stress_torsion_mpa, r.avg_stress_bending_mpa]
    });
    let kappa = by_n(&|r| vec![r.kappa_nmm_per_rad]);
    let bending = by_n(&|r| vec![r.bending_n_per_mm]);
    let stress = by_n(&|r| vec![r.avg_stress_torsion_mpa, r.avg_stress_bending_mpa]);
    ctx.emit.table(
        "sweep_triangles.csv",
        &["n", "kappa_nmm_per_rad", "bending_n_per_mm", "avg_stress_torsion_mpa", "avg_stress_bending_mpa"],
        &combined,
    )?;
    ctx.emit.table("triangles_kappa.csv", &["n", "kappa_nmm_per_rad"], &kappa)?;
    ctx.emit.table("triangles_bending.csv", &["n", "bending_n_per_mm"], &bending)?;
    ctx.emit.table(
        "triangles_stress.csv",
        &["n", "avg_stress_torsion_mpa", "avg_stress_bending_mpa"],
        &stress,
    )?;
    ctx.emit.table(
        "triangles_peak.csv",
        &["n", "kappa_nmm_per_rad", "flat_kappa_nmm_per_rad", "ratio_to_flat"],
        &[vec![
            peak.triangle_count.to_string(),
            num(peak_kappa),
            num(flat_kappa),
            num(peak_kappa / flat_kappa),
        ]],
    )?;

    for &n in &cfg.triangles.export_models {
        let (mut model, layout) = build_trsll_frame_with_layout(&base.with_triangles(n))?;
        model.load(layout.free_end, [0.0; 3], [m, 0.0, 0.0]);
        let solution = trsll_core::solve(&model)?;
        let prov = ctx.emit.provenance();
        ctx.emit.document(&format!("frame_model_n{n}.json"), &frame_document(&model, &prov))?;
        ctx.emit.document(&format!("frame_solution_n{n}.json"), &solution_document(&solution, &prov))?;
        ctx.emit.table(&format!("displacements_n{n}.csv"), &DISPLACEMENT_HEADER, &displacement_rows(&solution))?;
    }

    let mut geometry = serde_json::to_value(&base).expect("design serializes");
    if let Some(obj) = geometry.as_object_mut() {
        obj.remove("triangle_count");
        obj.remove("material");
    }
    let geometry_hash: String = Sha256::digest(geometry.to_string().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let results = json!({
        "loads": {"torsion_moment_nmm": m, "bending_force_n": f},
        "geometry": geometry,
        "geometry_hash": geometry_hash,
        "material": material,
        "designs": rows,
        "failures": failures,
        "peak": peak_json,
    });
    ctx.emit.report("sweep_triangles.json", stiffness_units(), results)
}
