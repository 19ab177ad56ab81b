//! HSA torsional spring constants and fingertip force prediction.
//!
//! `c_tau(phi) = torque(x(phi), phi) / phi` in Nmm per degree, where the
//! extension law `x(phi)` depends on the loading path:
//! - blocked: the HSA is held at zero extension and only rotates;
//! - cylinder: it extends freely along its zero-force contour until the gap
//!   to the object closes, then extension is blocked.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::HsaSurface;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "lowercase")]
pub enum CtauPath {
    Blocked,
    Cylinder {
        /// mm
        gap: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtauSample {
    /// degrees
    pub rotation: f64,
    /// mm, extension the path sits at
    pub extension: f64,
    /// Nmm
    pub torque: f64,
    /// Nmm/degree
    pub c_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CtauCurve {
    pub path: CtauPath,
    pub samples: Vec<CtauSample>,
    pub warnings: Vec<String>,
}

impl CtauCurve {
    /// Sample with the largest `c_tau`.
    pub fn peak(&self) -> Option<&CtauSample> {
        self.samples.iter().fold(None, |best: Option<&CtauSample>, s| match best {
            Some(b) if b.c_tau >= s.c_tau => best,
            _ => Some(s),
        })
    }
}

/// Evaluates `c_tau` at every grid rotation except zero.
pub fn ctau_curve(surface: &HsaSurface, path: CtauPath) -> Result<CtauCurve> {
    if let CtauPath::Cylinder { gap } = path {
        if !(gap >= 0.0) {
            return Err(Error::domain(format!("cylinder gap must be >= 0, got {gap}")));
        }
    }
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for &phi in surface.grid.rotations.iter().filter(|&&p| p != 0.0) {
        let x = match path {
            CtauPath::Blocked => 0.0,
            CtauPath::Cylinder { gap } => {
                let free = surface.free_extension(phi)?;
                if !free.root_found {
                    warnings.push(format!(
                        "force stays negative at {phi} deg; free extension taken as {} mm",
                        free.extension
                    ));
                }
                free.extension.min(gap)
            }
        };
        let torque = surface.torque(x, phi)?;
        samples.push(CtauSample {
            rotation: phi,
            extension: x,
            torque,
            c_tau: torque / phi,
        });
    }
    Ok(CtauCurve { path, samples, warnings })
}

/// Two torsional springs in series: `a b / (a + b)`.
pub fn series_combination(c_tau_a: f64, c_tau_b: f64) -> Result<f64> {
    if !(c_tau_a > 0.0 && c_tau_b > 0.0) || !(c_tau_a.is_finite() && c_tau_b.is_finite()) {
        return Err(Error::domain(format!(
            "series springs must be positive, got {c_tau_a} and {c_tau_b}"
        )));
    }
    Ok(c_tau_a * c_tau_b / (c_tau_a + c_tau_b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalForcePrediction {
    /// N, `c_tau phi / r_h`
    pub finger_force: f64,
    /// N, `(F_g - F_h) / mu`, never negative
    pub normal_force: f64,
    /// Set when the raw normal force was negative and clamped to zero.
    pub floored: bool,
}

/// Fingertip force balance `F_h = F_g - mu F_n` with the HSA force
/// `F_h = M_hsa / r_h` and moment `M_hsa = c_tau phi`.
pub fn predict_normal_force(
    c_tau: f64,
    phi: f64,
    r_h: f64,
    mu: f64,
    applied_gravity: f64,
) -> Result<NormalForcePrediction> {
    for (name, v) in [("r_h", r_h), ("mu", mu), ("phi", phi)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    if !(c_tau.is_finite() && applied_gravity.is_finite()) {
        return Err(Error::domain(format!(
            "non-finite c_tau {c_tau} or applied force {applied_gravity}"
        )));
    }
    let finger_force = c_tau * phi / r_h;
    let raw = (applied_gravity - finger_force) / mu;
    Ok(NormalForcePrediction {
        finger_force,
        normal_force: raw.max(0.0),
        floored: raw < 0.0,
    })
}

/// HSA operating point at a fingertip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsaState {
    /// mm
    pub extension: f64,
    /// degrees
    pub rotation: f64,
    /// Nmm/degree
    pub c_tau: f64,
    /// Nmm, `c_tau * rotation`
    pub hsa_moment: f64,
    /// N
    pub finger_force: f64,
    /// N
    pub normal_force: f64,
    pub floored: bool,
    /// mm
    pub lever_arm: f64,
}

/// Normal force predicted at each extension for a fixed rotation, using the
/// surface's `c_tau` at that operating point.
pub fn normal_force_profile(
    surface: &HsaSurface,
    extensions: &[f64],
    phi: f64,
    r_h: f64,
    mu: f64,
    applied_gravity: f64,
) -> Result<Vec<HsaState>> {
    extensions
        .iter()
        .map(|&x| {
            let c_tau = surface.torque(x, phi)? / phi;
            let p = predict_normal_force(c_tau, phi, r_h, mu, applied_gravity)?;
            Ok(HsaState {
                extension: x,
                rotation: phi,
                c_tau,
                hsa_moment: c_tau * phi,
                finger_force: p.finger_force,
                normal_force: p.normal_force,
                floored: p.floored,
                lever_arm: r_h,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsa::{GridLimits, GridPoint, HsaGrid, HsaSpec};

    fn surface(f: impl Fn(f64, f64) -> f64, t: impl Fn(f64, f64) -> f64) -> HsaSurface {
        let mut pts = Vec::new();
        for i in 0..7 {
            for j in 0..14 {
                let (x, phi) = (5.0 * i as f64, 120.0 * j as f64 / 13.0);
                pts.push(GridPoint { extension: x, rotation: phi, force: f(x, phi), torque: t(x, phi) });
            }
        }
        HsaSurface::new(HsaGrid::from_points(HsaSpec::long(), &pts, &GridLimits::default()).unwrap())
    }

    #[test]
    fn blocked_tail_value() {
        let s = surface(|x, p| x - p / 10.0, |x, p| 0.21 * p - x);
        let c = ctau_curve(&s, CtauPath::Blocked).unwrap();
        assert_eq!(c.samples.len(), 13);
        assert!(c.samples.iter().all(|s| s.rotation > 0.0 && s.extension == 0.0));
        let last = c.samples.last().unwrap();
        assert_eq!(last.rotation, 120.0);
        assert!((last.c_tau - 0.21).abs() < 1e-12);
        assert!((25.2_f64 / 120.0 - 0.21).abs() < 1e-15);
    }

    #[test]
    fn cylinder_paths() {
        let s = surface(|x, p| x - p / 10.0, |x, p| 0.21 * p - x);
        let blocked = ctau_curve(&s, CtauPath::Blocked).unwrap();
        let zero = ctau_curve(&s, CtauPath::Cylinder { gap: 0.0 }).unwrap();
        assert_eq!(blocked.samples, zero.samples);
        let wide = ctau_curve(&s, CtauPath::Cylinder { gap: 100.0 }).unwrap();
        for w in &wide.samples {
            assert!((w.extension - w.rotation / 10.0).abs() < 1e-12);
        }
        let mid = ctau_curve(&s, CtauPath::Cylinder { gap: 4.0 }).unwrap();
        assert!(mid.samples.iter().all(|m| m.extension <= 4.0));
        assert!(ctau_curve(&s, CtauPath::Cylinder { gap: -1.0 }).is_err());
    }

    #[test]
    fn series_examples() {
        assert_eq!(series_combination(2.0, 2.0).unwrap(), 1.0);
        assert_eq!(series_combination(3.0, 6.0).unwrap(), 2.0);
        assert!((series_combination(0.42, 0.42).unwrap() - 0.21).abs() < 1e-15);
        assert!(series_combination(0.0, 1.0).is_err());
        assert!(series_combination(1.0, -1.0).is_err());
    }

    #[test]
    fn normal_force_examples() {
        let p = predict_normal_force(0.21, 120.0, 17.14, 1.27, 5.0).unwrap();
        assert!((p.finger_force - 1.47).abs() < 0.005);
        assert!((p.normal_force - (5.0 - p.finger_force) / 1.27).abs() < 1e-15);
        let p = predict_normal_force(0.0, 120.0, 17.14, 1.27, 5.0).unwrap();
        assert_eq!(p.finger_force, 0.0);
        assert_eq!(p.normal_force, 5.0 / 1.27);
        let p = predict_normal_force(0.21, 120.0, 17.14, 1.27, 1.0).unwrap();
        assert!(p.floored && p.normal_force == 0.0);
        assert!(predict_normal_force(0.21, 120.0, 0.0, 1.27, 1.0).is_err());
        assert!(predict_normal_force(0.21, 0.0, 17.14, 1.27, 1.0).is_err());
        assert!(predict_normal_force(0.21, 120.0, 17.14, -1.0, 1.0).is_err());
    }

    #[test]
    fn profile_moment_matches_ctau() {
        let s = surface(|x, p| x - p / 10.0, |x, p| 0.21 * p - x);
        let states = normal_force_profile(&s, &[0.0, 2.9, 5.8], 120.0, 17.14, 1.27, 3.0).unwrap();
        for st in &states {
            assert!((st.hsa_moment - st.c_tau * st.rotation).abs() < 1e-12);
            assert!((st.hsa_moment - (25.2 - st.extension)).abs() < 1e-9);
        }
    }
}
