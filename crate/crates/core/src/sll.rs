//! Torsional and bending stiffness of strain-limiting layers.
//!
//! Torsion: one end clamped, a concentrated couple `M` about the long axis
//! at the free-end centroid. The twist is read the way a deformed-shape
//! measurement would be: the vertical displacement `BC` of the free-end
//! edge point a half-width `AB` off the centerline gives
//! `beta = asin(BC / sqrt(AB^2 + BC^2))`, and `kappa = M / beta`.
//!
//! Bending: a point force `F` through the thickness at the free-end
//! centerline node; stiffness is `F / tip deflection`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{assemble, solve_with, SolveResult};
use crate::geometry::{
    build_flat_frame, build_trsll_frame_with_layout, FlatSllDesign, TrsllDesign,
};
use crate::material::Material;
use crate::model::FrameModel;
use crate::section::SectionProps;

/// Beam elements used along a flat strip. The elements are exact for end
/// loads, so this only sets where stresses are sampled.
pub const FLAT_SEGMENTS: usize = 8;

/// Flat-layer torsion load (Nmm).
pub const FLAT_MOMENT: f64 = 0.5;
/// Flat-layer bending load (N).
pub const FLAT_FORCE: f64 = 0.01;
/// TR-SLL torsion load (Nmm).
pub const TRSLL_MOMENT: f64 = 5.0;
/// TR-SLL bending load (N).
pub const TRSLL_FORCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StiffnessReport {
    pub design_id: String,
    /// Nmm/rad; equals `applied_moment / twist_angle` exactly.
    pub torsional_stiffness: f64,
    /// N/mm.
    pub bending_stiffness: f64,
    pub applied_moment: f64,
    pub applied_force: f64,
    pub twist_angle: f64,
    pub tip_deflection: f64,
    /// Member mean of peak fiber stress, MPa.
    pub avg_stress_torsion: f64,
    pub avg_stress_bending: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleMeasurement {
    pub half_width: f64,
    pub vertical_displacement: f64,
    pub angle: f64,
}

impl AngleMeasurement {
    pub fn new(half_width: f64, vertical_displacement: f64) -> Result<Self> {
        Ok(AngleMeasurement {
            half_width,
            vertical_displacement,
            angle: twist_angle(half_width, vertical_displacement)?,
        })
    }
}

/// Angle between the undeformed edge line AB and the deformed line AC,
/// `asin(BC / sqrt(AB^2 + BC^2))`.
pub fn twist_angle(ab: f64, bc: f64) -> Result<f64> {
    if !(ab > 0.0 && ab.is_finite()) {
        return Err(Error::domain(format!("AB must be positive, got {ab}")));
    }
    if !(bc >= 0.0 && bc.is_finite()) {
        return Err(Error::domain(format!("BC must be non-negative, got {bc}")));
    }
    let hyp = libm::hypot(ab, bc);
    Ok(libm::asin(bc / hyp))
}

/// Edge-point measurement at `node`: the point sits `half_width` across the
/// width, so its vertical displacement is `u_z + rx * AB`.
pub fn measure_edge(result: &SolveResult, node: usize, half_width: f64) -> Result<AngleMeasurement> {
    let uz = result.translations[node][2];
    let rx = result.rotations[node][0];
    AngleMeasurement::new(half_width, (uz + rx * half_width).abs())
}

fn check_loads(moment: f64, force: f64) -> Result<()> {
    if !(moment > 0.0 && moment.is_finite()) {
        return Err(Error::domain(format!("torsion moment must be positive, got {moment}")));
    }
    if !(force > 0.0 && force.is_finite()) {
        return Err(Error::domain(format!("bending force must be positive, got {force}")));
    }
    Ok(())
}

fn run_load_cases(
    id: String,
    model: FrameModel,
    tip: usize,
    half_width: f64,
    moment: f64,
    force: f64,
) -> Result<StiffnessReport> {
    let sys = assemble(&model)?;

    let mut torsion = model.clone();
    torsion.load(tip, [0.0; 3], [moment, 0.0, 0.0]);
    let tr = solve_with(&torsion, &sys)?;
    let angle = measure_edge(&tr, tip, half_width)?;
    if !(angle.angle > 0.0) {
        return Err(Error::Numeric(format!("{id}: zero twist under torsion")));
    }

    let mut bending = model;
    bending.load(tip, [0.0, 0.0, force], [0.0; 3]);
    let br = solve_with(&bending, &sys)?;
    let deflection = br.translations[tip][2].abs();
    if !(deflection > 0.0) {
        return Err(Error::Numeric(format!("{id}: zero tip deflection under bending")));
    }

    Ok(StiffnessReport {
        design_id: id,
        torsional_stiffness: moment / angle.angle,
        bending_stiffness: force / deflection,
        applied_moment: moment,
        applied_force: force,
        twist_angle: angle.angle,
        tip_deflection: deflection,
        avg_stress_torsion: tr.mean_peak_stress(),
        avg_stress_bending: br.mean_peak_stress(),
    })
}

/// Torsion and bending load cases on a flat strip.
pub fn analyze_flat(design: &FlatSllDesign, torsion_moment: f64, bending_force: f64) -> Result<StiffnessReport> {
    check_loads(torsion_moment, bending_force)?;
    let model = build_flat_frame(design, FLAT_SEGMENTS)?;
    run_load_cases(
        design.id(),
        model,
        FLAT_SEGMENTS,
        design.width / 2.0,
        torsion_moment,
        bending_force,
    )
}

/// Torsion and bending load cases on a triangulated layer, loaded and
/// measured at the free end of the base.
pub fn analyze_trsll(design: &TrsllDesign, torsion_moment: f64, bending_force: f64) -> Result<StiffnessReport> {
    check_loads(torsion_moment, bending_force)?;
    let (model, layout) = build_trsll_frame_with_layout(design)?;
    run_load_cases(
        design.id(),
        model,
        layout.free_end,
        design.width / 2.0,
        torsion_moment,
        bending_force,
    )
}

/// One entry of a triangle-count sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub triangle_count: usize,
    pub outcome: Result<StiffnessReport>,
}

/// Analyzes `base` at each triangle count, in input order. A failing design
/// is recorded and the sweep carries on.
pub fn sweep_triangles(base: &TrsllDesign, n_values: &[usize]) -> Result<Vec<SweepPoint>> {
    if n_values.is_empty() {
        return Err(Error::domain("triangle sweep needs at least one count"));
    }
    Ok(n_values
        .iter()
        .map(|&n| SweepPoint {
            triangle_count: n,
            outcome: analyze_trsll(&base.with_triangles(n), TRSLL_MOMENT, TRSLL_FORCE),
        })
        .collect())
}

/// Index of the largest torsional stiffness among successful points.
pub fn peak_index(points: &[SweepPoint]) -> Option<usize> {
    points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.outcome.as_ref().ok().map(|r| (i, r.torsional_stiffness)))
        .fold(None, |best: Option<(usize, f64)>, (i, k)| match best {
            Some((_, bk)) if bk >= k => best,
            _ => Some((i, k)),
        })
        .map(|(i, _)| i)
}

/// One row of a measured stiffness table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    /// mm
    pub thickness: f64,
    /// Nmm/rad
    pub torsional_stiffness: f64,
    /// N/mm
    pub bending_stiffness: f64,
}

/// Flat-layer stiffness table (102 x 25 mm PA-6 strip, M = 0.5 Nmm,
/// F = 0.01 N). Bending column converted to N/mm.
pub const FLAT_TABLE: [CalibrationRow; 8] = [
    CalibrationRow { thickness: 0.3, torsional_stiffness: 1.04, bending_stiffness: 0.23e-3 },
    CalibrationRow { thickness: 0.4, torsional_stiffness: 2.30, bending_stiffness: 0.47e-3 },
    CalibrationRow { thickness: 0.5, torsional_stiffness: 4.44, bending_stiffness: 0.87e-3 },
    CalibrationRow { thickness: 0.6, torsional_stiffness: 7.62, bending_stiffness: 1.47e-3 },
    CalibrationRow { thickness: 0.7, torsional_stiffness: 12.05, bending_stiffness: 2.23e-3 },
    CalibrationRow { thickness: 0.8, torsional_stiffness: 17.93, bending_stiffness: 3.46e-3 },
    CalibrationRow { thickness: 0.9, torsional_stiffness: 25.46, bending_stiffness: 4.93e-3 },
    CalibrationRow { thickness: 1.0, torsional_stiffness: 34.81, bending_stiffness: 6.67e-3 },
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub material: Material,
    /// Poisson ratio implied by the independent E and G fits, before
    /// clamping.
    pub implied_poisson_ratio: f64,
    pub warnings: Vec<String>,
}

/// Fits `G` to the torsion rows through `kappa = G J(t) / L` and `E` to the
/// bending rows through `k = 3 E I(t) / L^3`, each as a one-parameter least
/// squares problem. `nu = E / 2G - 1` is clamped into (0, 0.5).
pub fn calibrate_material(table: &[CalibrationRow], base: &FlatSllDesign) -> Result<Calibration> {
    if table.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 rows, got {}",
            table.len()
        )));
    }
    let t0 = table[0].thickness;
    if table.iter().all(|r| (r.thickness - t0).abs() <= 1e-12 * t0.abs().max(1.0)) {
        return Err(Error::DegenerateFit("all rows share one thickness".into()));
    }
    let l = base.length;
    let (mut gnum, mut gden, mut enum_, mut eden) = (0.0, 0.0, 0.0, 0.0);
    for r in table {
        if !(r.thickness > 0.0 && r.torsional_stiffness > 0.0 && r.bending_stiffness > 0.0) {
            return Err(Error::domain(format!("non-positive calibration row {r:?}")));
        }
        let s = SectionProps::thin_rectangle(base.width, r.thickness)?;
        let a = s.torsion_constant / l;
        let b = 3.0 * s.bending_inertia_weak / (l * l * l);
        gnum += a * r.torsional_stiffness;
        gden += a * a;
        enum_ += b * r.bending_stiffness;
        eden += b * b;
    }
    let g = gnum / gden;
    let e = enum_ / eden;
    let implied = e / (2.0 * g) - 1.0;
    let mut warnings = Vec::new();
    let nu = if implied <= 0.0 || implied >= 0.5 {
        let clamped = implied.clamp(0.01, 0.49);
        warnings.push(format!(
            "implied Poisson ratio {implied:.4} outside (0, 0.5); clamped to {clamped}"
        ));
        clamped
    } else {
        implied
    };
    let material = Material {
        name: format!("{}-calibrated", base.material.name),
        youngs_modulus: e,
        poisson_ratio: nu,
        shear_modulus: g,
        yield_stress: base.material.yield_stress,
    };
    material.validate()?;
    Ok(Calibration {
        material,
        implied_poisson_ratio: implied,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_angle_examples() {
        assert_eq!(twist_angle(12.5, 0.0).unwrap(), 0.0);
        assert!((twist_angle(12.5, 12.5).unwrap() - core::f64::consts::FRAC_PI_4).abs() < 1e-15);
        // atan(1 / 12.5)
        assert!((twist_angle(12.5, 1.0).unwrap() - 0.079_829_985_712_237).abs() < 1e-12);
    }

    #[test]
    fn twist_angle_domain() {
        assert!(matches!(twist_angle(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(twist_angle(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(twist_angle(1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_zero_loads() {
        let d = FlatSllDesign::standard(0.5, Material::pa6());
        assert!(matches!(analyze_flat(&d, 0.5, 0.0), Err(Error::Domain(_))));
        assert!(matches!(analyze_flat(&d, 0.0, 0.01), Err(Error::Domain(_))));
    }

    #[test]
    fn flat_matches_closed_form() {
        let d = FlatSllDesign::standard(1.0, Material::pa6());
        let r = analyze_flat(&d, 0.5, 0.01).unwrap();
        // twist T L / (G J) and its edge-angle reading
        let theta = 0.5 * 102.0 / (d.material.shear_modulus * 8.123_333_333_333_333);
        assert!((theta - 6.4642e-3).abs() < 1e-7, "{theta}");
        let beta = libm::atan(theta);
        assert!((r.twist_angle - beta).abs() < 1e-12 * beta);
        assert_eq!(r.torsional_stiffness * r.twist_angle, 0.5);
        let i = 25.0 / 12.0;
        let delta = 0.01 * 102.0_f64.powi(3) / (3.0 * 2700.0 * i);
        assert!((r.tip_deflection - delta).abs() < 1e-9 * delta);
    }

    #[test]
    fn calibration_rejects_degenerate_tables() {
        let d = FlatSllDesign::standard(0.5, Material::pa6());
        let row = FLAT_TABLE[2];
        assert!(matches!(calibrate_material(&[row], &d), Err(Error::DegenerateFit(_))));
        assert!(matches!(calibrate_material(&[row, row, row], &d), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn sweep_preserves_order_and_needs_input() {
        let base = TrsllDesign::standard(5, Material::pa6());
        assert!(sweep_triangles(&base, &[]).is_err());
        let pts = sweep_triangles(&base, &[7, 3, 0]).unwrap();
        assert_eq!(pts.iter().map(|p| p.triangle_count).collect::<Vec<_>>(), [7, 3, 0]);
        assert!(pts[2].outcome.is_err());
        assert!(pts[0].outcome.is_ok());
    }
}
