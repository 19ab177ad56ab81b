//! Run configuration.
//!
//! The file is TOML with units spelled out in key names. Every section and
//! key is optional; defaults reproduce the reference designs. Command-line
//! flags (`--seed`, `--workers`, `--out`, and `--set section.key=value`)
//! override file keys.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use trsll_core::geometry::{FlatSllDesign, TrsllDesign};
use trsll_core::grasp::{self, GraspMode};
use trsll_core::hsa::{GridLimits, HsaSpec};
use trsll_core::sll::{FLAT_FORCE, FLAT_MOMENT, TRSLL_FORCE, TRSLL_MOMENT};
use trsll_core::Material;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub material: MaterialConfig,
    pub flat: FlatConfig,
    pub triangles: TrianglesConfig,
    pub calibration: CalibrationConfig,
    pub hsa: HsaConfig,
    pub grasp: GraspSection,
    pub pull: PullConfig,
    pub payload: PayloadConfig,
    pub objects: Vec<ObjectEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    /// `pa6` or `pla`; defaults to PA-6.
    pub preset: Option<String>,
    /// Report document written by `calibrate`; its fitted material replaces
    /// the preset.
    pub calibration_report: Option<PathBuf>,
    pub name: Option<String>,
    pub youngs_modulus_mpa: Option<f64>,
    pub poisson_ratio: Option<f64>,
    pub yield_stress_mpa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlatConfig {
    pub length_mm: f64,
    pub width_mm: f64,
    pub thickness_min_mm: f64,
    pub thickness_max_mm: f64,
    pub thickness_step_mm: f64,
    pub torsion_moment_nmm: f64,
    pub bending_force_n: f64,
    /// Also fit the material to the stiffness table and rerun the sweep.
    pub calibrate: bool,
}

impl Default for FlatConfig {
    fn default() -> Self {
        FlatConfig {
            length_mm: 102.0,
            width_mm: 25.0,
            thickness_min_mm: 0.3,
            thickness_max_mm: 1.0,
            thickness_step_mm: 0.1,
            torsion_moment_nmm: FLAT_MOMENT,
            bending_force_n: FLAT_FORCE,
            calibrate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrianglesConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub torsion_moment_nmm: f64,
    pub bending_force_n: f64,
    pub base_length_mm: f64,
    pub triangle_span_mm: f64,
    pub end_extension_mm: f64,
    pub width_mm: f64,
    pub height_mm: f64,
    pub wall_thickness_mm: f64,
    pub base_thickness_mm: f64,
    /// Flat layer the peak is compared against.
    pub flat_reference_thickness_mm: f64,
    /// Triangle counts whose frame model and torsion solution are written out.
    pub export_models: Vec<usize>,
}

impl Default for TrianglesConfig {
    fn default() -> Self {
        TrianglesConfig {
            n_min: 2,
            n_max: 80,
            torsion_moment_nmm: TRSLL_MOMENT,
            bending_force_n: TRSLL_FORCE,
            base_length_mm: 102.0,
            triangle_span_mm: 100.0,
            end_extension_mm: 1.0,
            width_mm: 25.0,
            height_mm: 12.0,
            wall_thickness_mm: 0.8,
            base_thickness_mm: 0.4,
            flat_reference_thickness_mm: 0.4,
            export_models: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    /// `thickness_mm,kappa_nmm_per_rad,bending_n_per_mm`; the built-in
    /// flat-layer table when absent.
    pub table_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HsaConfig {
    /// `long` or `short` surrogate, ignored when `data_csv` is set.
    pub preset: String,
    pub data_csv: Option<PathBuf>,
    pub extension_max_mm: f64,
    pub rotation_max_deg: f64,
    pub extension_count: usize,
    pub rotation_count: usize,
    pub zero_band: f64,
    /// Heat-map resampling steps.
    pub heatmap_extension_step_mm: f64,
    pub heatmap_rotation_step_deg: f64,
    /// `blocked` or `cylinder`, used by the `ctau` command.
    pub ctau_path: String,
    pub cylinder_gap_mm: f64,
    /// Fingertip normal-force profile.
    pub profile_rotation_deg: f64,
    pub profile_extensions_mm: Vec<f64>,
    pub lever_arm_mm: f64,
    pub friction: f64,
    pub applied_force_n: f64,
}

impl Default for HsaConfig {
    fn default() -> Self {
        HsaConfig {
            preset: "long".into(),
            data_csv: None,
            extension_max_mm: 30.0,
            rotation_max_deg: 120.0,
            extension_count: 7,
            rotation_count: 14,
            zero_band: 0.5,
            heatmap_extension_step_mm: 1.0,
            heatmap_rotation_step_deg: 2.0,
            ctau_path: "blocked".into(),
            cylinder_gap_mm: 10.0,
            profile_rotation_deg: grasp::MAX_ROTATION,
            profile_extensions_mm: vec![0.0, 2.9, 5.8, 8.7, 11.6, 14.6, 17.5],
            lever_arm_mm: grasp::DEFAULT_HSA_LEVER_ARM,
            friction: grasp::PAD_FRICTION,
            applied_force_n: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraspSection {
    pub kappa_nmm_per_rad: Option<f64>,
    /// `sweep-triangles` report; kappa is read at `kappa_triangle_count`.
    pub kappa_artifact: Option<PathBuf>,
    pub kappa_triangle_count: usize,
    pub c_tau_nmm_per_deg: Option<f64>,
    /// `ctau` or `hsa` report; c_tau is read at `phi_deg` on the curve.
    pub c_tau_artifact: Option<PathBuf>,
    /// Curve of the artifact to read, `blocked` or `cylinder`.
    pub c_tau_curve: String,
    pub mu: f64,
    pub r_t_mm: f64,
    pub r_h_mm: f64,
    pub phi_deg: f64,
    pub shear_strength_mpa: f64,
    pub contact_area_mm2: f64,
    pub mode: GraspMode,
}

impl Default for GraspSection {
    fn default() -> Self {
        let r = grasp::GraspConfig::reference();
        GraspSection {
            kappa_nmm_per_rad: None,
            kappa_artifact: None,
            kappa_triangle_count: 5,
            c_tau_nmm_per_deg: None,
            c_tau_artifact: None,
            c_tau_curve: "blocked".into(),
            mu: r.mu,
            r_t_mm: r.r_t,
            r_h_mm: r.r_h,
            phi_deg: r.phi,
            shear_strength_mpa: r.shear_strength,
            contact_area_mm2: r.contact_area,
            mode: r.grasp_mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PullConfig {
    pub x_max_mm: f64,
    pub steps: usize,
}

impl Default for PullConfig {
    fn default() -> Self {
        PullConfig { x_max_mm: 3.0, steps: 31 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PayloadConfig {
    pub normal_forces_n: Vec<f64>,
    pub displacement_budget_mm: f64,
}

impl Default for PayloadConfig {
    fn default() -> Self {
        PayloadConfig {
            normal_forces_n: vec![1.0, 2.0, 4.0, 8.0],
            displacement_budget_mm: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectEntry {
    pub name: String,
    pub height_mm: f64,
    pub width_mm: f64,
}

/// Reads a config file (if any) and applies `section.key=value` overrides.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<FileConfig> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", p.display())))?;
            text.parse::<toml::Table>()
                .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?
        }
        None => toml::Table::new(),
    };
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::config(e.to_string()))
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("override `{spec}` is not key=value")))?;
    let value = parse_override_value(raw.trim());
    let mut parts: Vec<&str> = key.trim().split('.').collect();
    let leaf = parts.pop().filter(|k| !k.is_empty());
    let Some(leaf) = leaf else {
        return Err(CliError::config(format!("override `{spec}` has an empty key")));
    };
    let mut cur = table;
    for p in parts {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::config(format!("override `{spec}`: `{p}` is not a section")))?;
    }
    cur.insert(leaf.to_string(), value);
    Ok(())
}

/// TOML literal when it parses as one, otherwise a bare string.
fn parse_override_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

impl FileConfig {
    pub fn material(&self) -> Result<Material> {
        let m = &self.material;
        let mut base = match (&m.calibration_report, &m.preset) {
            (Some(path), _) => crate::artifacts::calibrated_material(path)?,
            (None, Some(name)) => Material::by_name(name)
                .ok_or_else(|| CliError::config(format!("unknown material preset `{name}`")))?,
            (None, None) => Material::pa6(),
        };
        if let Some(n) = &m.name {
            base.name = n.clone();
        }
        if let Some(y) = m.yield_stress_mpa {
            base.yield_stress = y;
        }
        if m.youngs_modulus_mpa.is_some() || m.poisson_ratio.is_some() {
            base = Material::isotropic(
                base.name,
                m.youngs_modulus_mpa.unwrap_or(base.youngs_modulus),
                m.poisson_ratio.unwrap_or(base.poisson_ratio),
                base.yield_stress,
            )?;
        }
        base.validate()?;
        Ok(base)
    }

    pub fn flat_design(&self, thickness: f64, material: Material) -> FlatSllDesign {
        FlatSllDesign {
            length: self.flat.length_mm,
            width: self.flat.width_mm,
            thickness,
            material,
        }
    }

    /// Thickness values `min, min + step, ...` up to `max` inclusive.
    pub fn thicknesses(&self) -> Result<Vec<f64>> {
        let f = &self.flat;
        let ok = f.thickness_step_mm > 0.0
            && f.thickness_min_mm > 0.0
            && f.thickness_max_mm >= f.thickness_min_mm
            && f.thickness_max_mm.is_finite();
        if !ok {
            return Err(CliError::InvalidRange(format!(
                "thickness {}..{} step {} is empty",
                f.thickness_min_mm, f.thickness_max_mm, f.thickness_step_mm
            )));
        }
        let count = ((f.thickness_max_mm - f.thickness_min_mm) / f.thickness_step_mm + 1e-9).floor() as usize + 1;
        if count > 10_000 {
            return Err(CliError::InvalidRange(format!("{count} thickness values is too many")));
        }
        Ok((0..count)
            .map(|k| f.thickness_min_mm + f.thickness_step_mm * k as f64)
            .collect())
    }

    pub fn trsll_design(&self, n: usize, material: Material) -> TrsllDesign {
        let t = &self.triangles;
        TrsllDesign {
            base_length: t.base_length_mm,
            triangle_span: t.triangle_span_mm,
            end_extension: t.end_extension_mm,
            width: t.width_mm,
            height: t.height_mm,
            wall_thickness: t.wall_thickness_mm,
            base_thickness: t.base_thickness_mm,
            triangle_count: n,
            material,
        }
    }

    pub fn triangle_counts(&self) -> Result<Vec<usize>> {
        let t = &self.triangles;
        if t.n_min < 1 || t.n_max > 200 || t.n_min > t.n_max {
            return Err(CliError::InvalidRange(format!(
                "triangle counts {}..={} must be a non-empty range within 1..=200",
                t.n_min, t.n_max
            )));
        }
        Ok((t.n_min..=t.n_max).collect())
    }

    pub fn hsa_limits(&self) -> GridLimits {
        let h = &self.hsa;
        GridLimits {
            extension_max: h.extension_max_mm,
            rotation_max: h.rotation_max_deg,
            shape: Some((h.extension_count, h.rotation_count)),
            zero_band: h.zero_band,
        }
    }

    pub fn hsa_spec(&self) -> Result<HsaSpec> {
        match self.hsa.preset.to_ascii_lowercase().as_str() {
            "long" => Ok(HsaSpec::long()),
            "short" => Ok(HsaSpec::short()),
            other => Err(CliError::config(format!("unknown HSA preset `{other}` (long|short)"))),
        }
    }

    /// Input files named by the config, in a fixed order.
    pub fn input_files(&self) -> Vec<&Path> {
        [
            self.material.calibration_report.as_deref(),
            self.calibration.table_csv.as_deref(),
            self.hsa.data_csv.as_deref(),
            self.grasp.kappa_artifact.as_deref(),
            self.grasp.c_tau_artifact.as_deref(),
        ]
        .into_iter()
        .flatten()
        .collect()
    }
}

/// Resolved configuration for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub file: FileConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(command: &str, file: FileConfig, out: Option<PathBuf>, seed: Option<u64>, workers: Option<usize>) -> Result<Self> {
        let workers = workers.or(file.workers).unwrap_or(1);
        if workers == 0 {
            return Err(CliError::config("worker count must be at least 1"));
        }
        Ok(RunConfig {
            command: command.to_string(),
            out_dir: out.or_else(|| file.out_dir.clone()).unwrap_or_else(|| PathBuf::from("trsll-out")),
            seed: seed.or(file.seed).unwrap_or(0),
            workers,
            file,
        })
    }

    /// SHA-256 over the command, seed, resolved config, and the bytes of
    /// every input file. Output directory and worker count are excluded:
    /// neither changes results.
    pub fn hash(&self) -> Result<String> {
        let mut cfg = self.file.clone();
        cfg.out_dir = None;
        cfg.workers = None;
        cfg.seed = None;
        let doc = serde_json::json!({
            "command": self.command,
            "seed": self.seed,
            "config": cfg,
        });
        let mut h = Sha256::new();
        h.update(doc.to_string().as_bytes());
        for p in self.file.input_files() {
            let bytes = std::fs::read(p).map_err(|e| CliError::io(format!("reading {}", p.display()), e))?;
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(&bytes);
        }
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_without_file() {
        let c = load(None, &[]).unwrap();
        assert_eq!(c, FileConfig::default());
        assert_eq!(c.thicknesses().unwrap().len(), 8);
        assert_eq!(c.triangle_counts().unwrap().len(), 79);
    }

    #[test]
    fn overrides_win() {
        let c = load(None, &["grasp.r_h_mm=20".into(), "hsa.preset=short".into(), "triangles.export_models=[5, 6]".into()]).unwrap();
        assert_eq!(c.grasp.r_h_mm, 20.0);
        assert_eq!(c.hsa.preset, "short");
        assert_eq!(c.triangles.export_models, vec![5, 6]);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(load(None, &["grasp.r_h=20".into()]).is_err());
        assert!(load(None, &["nokey".into()]).is_err());
    }

    #[test]
    fn ranges() {
        let mut c = FileConfig::default();
        c.flat.thickness_max_mm = 0.2;
        assert!(matches!(c.thicknesses(), Err(CliError::InvalidRange(_))));
        c.triangles.n_min = 5;
        c.triangles.n_max = 5;
        assert_eq!(c.triangle_counts().unwrap(), vec![5]);
        c.triangles.n_max = 201;
        assert!(c.triangle_counts().is_err());
    }

    #[test]
    fn hash_ignores_out_and_workers() {
        let a = RunConfig::new("payload", FileConfig::default(), Some("a".into()), None, Some(1)).unwrap();
        let b = RunConfig::new("payload", FileConfig::default(), Some("b".into()), None, Some(8)).unwrap();
        assert_eq!(a.hash().unwrap(), b.hash().unwrap());
        let c = RunConfig::new("payload", FileConfig::default(), None, Some(7), None).unwrap();
        assert_ne!(a.hash().unwrap(), c.hash().unwrap());
    }

    #[test]
    fn material_overrides() {
        let c = load(None, &["material.youngs_modulus_mpa=1000".into(), "material.poisson_ratio=0.25".into()]).unwrap();
        let m = c.material().unwrap();
        assert_eq!(m.shear_modulus, 400.0);
        assert!(load(None, &["material.preset=\"steel\"".into()]).unwrap().material().is_err());
    }
}
