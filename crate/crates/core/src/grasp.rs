//! Payload limits of an antipodal grasp.
//!
//! Three failure modes bound the load a finger pair can hold:
//! - slip: `F = mu F_n`;
//! - twist: the strain-limiting layer rotates until the object moves by a
//!   displacement budget `x`, `F = kappa x / r_t^2 + c_tau phi / r_h`;
//! - shear: the gripping pad tears, `F = tau_f A` over a uniform patch.
//!
//! The smallest governs. `kappa` is in Nmm/rad and `c_tau` in Nmm/degree;
//! both terms of the twist limit come out in N without conversion because
//! `x / r_t` is already in radians and `phi` in degrees.

use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Friction coefficient between the gripping pad and the test cylinder.
pub const PAD_FRICTION: f64 = 1.27;
/// HSA lever arm reproducing the reported 1.47 N HSA contribution at
/// `c_tau = 0.21 Nmm/deg`, `phi = 120 deg` (25.2 / 1.47).
pub const DEFAULT_HSA_LEVER_ARM: f64 = 17.14;
/// Default rotation envelope, degrees.
pub const MAX_ROTATION: f64 = 120.0;
/// Shortest object the fingers can close on, mm.
pub const MIN_OBJECT_HEIGHT: f64 = 14.5;
/// Jaw opening, mm.
pub const MAX_OBJECT_WIDTH: f64 = 105.0;

/// Hardware results kept alongside predictions for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMeasurements {
    /// N
    pub pinch_peak: f64,
    /// N, as given in the summary and in the results text
    pub caging_peak_summary: f64,
    pub caging_peak_results: f64,
    /// N/mm over the first 3 mm
    pub pinch_stiffness: f64,
    pub caging_stiffness: f64,
    /// N, HSA contribution measured in the pinch pull test
    pub pinch_hsa_measured: f64,
    /// N, the same contribution as predicted
    pub pinch_hsa_predicted: f64,
}

pub const REFERENCE: ReferenceMeasurements = ReferenceMeasurements {
    pinch_peak: 5.8,
    caging_peak_summary: 14.5,
    caging_peak_results: 14.6,
    pinch_stiffness: 1.64,
    caging_stiffness: 3.06,
    pinch_hsa_measured: 1.98,
    pinch_hsa_predicted: 1.47,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraspMode {
    Pinch,
    PlanarCaging,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraspConfig {
    pub mu: f64,
    /// Nmm/rad
    pub kappa: f64,
    /// mm, torsion lever arm of the layer
    pub r_t: f64,
    /// mm, HSA lever arm
    pub r_h: f64,
    /// Nmm/degree
    pub c_tau: f64,
    /// degrees
    pub phi: f64,
    /// MPa
    pub shear_strength: f64,
    /// mm^2
    pub contact_area: f64,
    pub grasp_mode: GraspMode,
}

impl GraspConfig {
    /// Pinch grasp on the 5-triangle layer with the long-HSA tail constant.
    /// `r_t`, shear strength and contact area are placeholders to be
    /// replaced by measured values.
    pub fn reference() -> Self {
        GraspConfig {
            mu: PAD_FRICTION,
            kappa: 964.76,
            r_t: 15.0,
            r_h: DEFAULT_HSA_LEVER_ARM,
            c_tau: 0.21,
            phi: MAX_ROTATION,
            shear_strength: 0.2,
            contact_area: 100.0,
            grasp_mode: GraspMode::Pinch,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("r_t", self.r_t), ("r_h", self.r_h), ("shear_strength", self.shear_strength)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("kappa", self.kappa),
            ("c_tau", self.c_tau),
            ("phi", self.phi),
            ("contact_area", self.contact_area),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.phi > MAX_ROTATION {
            return Err(Error::domain(format!(
                "phi {} exceeds the {MAX_ROTATION} degree envelope",
                self.phi
            )));
        }
        Ok(())
    }
}

pub fn slip_limit(mu: f64, normal_force: f64) -> Result<f64> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::domain(format!("mu must be positive, got {mu}")));
    }
    if !(normal_force >= 0.0 && normal_force.is_finite()) {
        return Err(Error::domain(format!("normal force must be >= 0, got {normal_force}")));
    }
    Ok(mu * normal_force)
}

/// Layer term `kappa x / r_t^2`: the load whose moment `F r_t` twists the
/// layer by `x / r_t`.
pub fn layer_twist_force(kappa: f64, r_t: f64, x: f64) -> Result<f64> {
    if !(r_t > 0.0 && r_t.is_finite()) {
        return Err(Error::domain(format!("r_t must be positive, got {r_t}")));
    }
    if !(kappa >= 0.0 && kappa.is_finite() && x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("kappa {kappa} and x {x} must be >= 0")));
    }
    Ok(kappa * x / (r_t * r_t))
}

/// HSA term `c_tau phi / r_h`.
pub fn hsa_force(c_tau: f64, phi: f64, r_h: f64) -> Result<f64> {
    if !(r_h > 0.0 && r_h.is_finite()) {
        return Err(Error::domain(format!("r_h must be positive, got {r_h}")));
    }
    if !(c_tau >= 0.0 && c_tau.is_finite() && phi >= 0.0 && phi.is_finite()) {
        return Err(Error::domain(format!("c_tau {c_tau} and phi {phi} must be >= 0")));
    }
    Ok(c_tau * phi / r_h)
}

pub fn twist_capacity(kappa: f64, r_t: f64, x: f64, c_tau: f64, r_h: f64, phi: f64) -> Result<f64> {
    Ok(layer_twist_force(kappa, r_t, x)? + hsa_force(c_tau, phi, r_h)?)
}

/// Uniform shear over the contact patch. A zero patch carries nothing.
pub fn shear_limit(shear_strength: f64, contact_area: f64) -> Result<f64> {
    if !(shear_strength > 0.0 && shear_strength.is_finite()) {
        return Err(Error::domain(format!("shear strength must be positive, got {shear_strength}")));
    }
    if !(contact_area >= 0.0 && contact_area.is_finite()) {
        return Err(Error::domain(format!("contact area must be >= 0, got {contact_area}")));
    }
    Ok(shear_strength * contact_area)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureMode {
    Slip,
    Twist,
    Shear,
}

/// Smallest limit and its mode; ties go to slip, then twist.
pub fn governing(slip: f64, twist: f64, shear: f64) -> (FailureMode, f64) {
    let mut best = (FailureMode::Slip, slip);
    for (mode, v) in [(FailureMode::Twist, twist), (FailureMode::Shear, shear)] {
        if v < best.1 {
            best = (mode, v);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayloadReport {
    /// N
    pub f_slip: f64,
    pub f_twist_at_x: f64,
    pub f_shear: f64,
    pub governing_mode: FailureMode,
    pub capacity: f64,
}

pub fn payload(config: &GraspConfig, normal_force: f64, displacement_budget: f64) -> Result<PayloadReport> {
    config.validate()?;
    let f_slip = slip_limit(config.mu, normal_force)?;
    let f_twist_at_x = twist_capacity(
        config.kappa,
        config.r_t,
        displacement_budget,
        config.c_tau,
        config.r_h,
        config.phi,
    )?;
    let f_shear = shear_limit(config.shear_strength, config.contact_area)?;
    let (governing_mode, capacity) = governing(f_slip, f_twist_at_x, f_shear);
    Ok(PayloadReport {
        f_slip,
        f_twist_at_x,
        f_shear,
        governing_mode,
        capacity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullTestPrediction {
    /// mm
    pub displacements: Vec<f64>,
    /// N
    pub predicted_force: Vec<f64>,
    /// N, HSA contribution
    pub intercept: f64,
    /// N/mm, layer contribution `kappa / r_t^2`
    pub slope: f64,
}

/// Twist-limit line over `steps` evenly spaced displacements on `[0, x_max]`.
pub fn predict_pull_test(config: &GraspConfig, x_max: f64, steps: usize) -> Result<PullTestPrediction> {
    config.validate()?;
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::domain(format!("x_max must be positive, got {x_max}")));
    }
    if steps < 2 {
        return Err(Error::domain(format!("need at least 2 steps, got {steps}")));
    }
    let slope = config.kappa / (config.r_t * config.r_t);
    let intercept = hsa_force(config.c_tau, config.phi, config.r_h)?;
    let last = (steps - 1) as f64;
    let displacements: Vec<f64> = (0..steps).map(|k| x_max * k as f64 / last).collect();
    let predicted_force = displacements.iter().map(|&x| slope * x + intercept).collect();
    Ok(PullTestPrediction {
        displacements,
        predicted_force,
        intercept,
        slope,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectFit {
    Fits,
    TooShort,
    TooWide,
}

/// Checks height first, then width; both bounds are inclusive.
pub fn object_fit(height: f64, width: f64) -> Result<ObjectFit> {
    if !(height > 0.0 && width > 0.0 && height.is_finite() && width.is_finite()) {
        return Err(Error::domain(format!(
            "object dimensions must be positive, got {height} x {width}"
        )));
    }
    Ok(if height < MIN_OBJECT_HEIGHT {
        ObjectFit::TooShort
    } else if width > MAX_OBJECT_WIDTH {
        ObjectFit::TooWide
    } else {
        ObjectFit::Fits
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slip_examples() {
        assert_eq!(slip_limit(1.27, 1.0).unwrap(), 1.27);
        assert_eq!(slip_limit(0.8, 0.0).unwrap(), 0.0);
        assert_eq!(slip_limit(0.5, 4.0).unwrap(), 2.0);
        assert!(slip_limit(0.5, -1.0).is_err());
        assert!(slip_limit(0.0, 1.0).is_err());
    }

    #[test]
    fn twist_examples() {
        let f = twist_capacity(964.76, 15.0, 1.0, 0.21, 17.14, 120.0).unwrap();
        let layer = 964.76 / 225.0;
        let hsa = 25.2 / 17.14;
        assert!((f - (layer + hsa)).abs() < 1e-12);
        assert!((f - 5.758).abs() < 5e-4);
        assert_eq!(twist_capacity(964.76, 15.0, 0.0, 0.21, 17.14, 0.0).unwrap(), 0.0);
        let f2 = twist_capacity(964.76, 15.0, 2.0, 0.21, 17.14, 120.0).unwrap();
        assert!((f2 - f - layer).abs() < 1e-12);
        assert!(twist_capacity(964.76, 0.0, 1.0, 0.21, 17.14, 120.0).is_err());
        assert!(twist_capacity(964.76, 15.0, 1.0, 0.21, 0.0, 120.0).is_err());
    }

    #[test]
    fn shear_examples() {
        assert!((shear_limit(0.2, 100.0).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(shear_limit(0.2, 0.0).unwrap(), 0.0);
        assert_eq!(shear_limit(0.3, 50.0).unwrap() * 2.0, shear_limit(0.3, 100.0).unwrap());
        assert!(shear_limit(0.0, 10.0).is_err());
        assert!(shear_limit(0.2, -1.0).is_err());
    }

    #[test]
    fn governing_selection() {
        assert_eq!(governing(10.0, 5.0, 20.0), (FailureMode::Twist, 5.0));
        assert_eq!(governing(3.0, 3.0, 3.0), (FailureMode::Slip, 3.0));
        assert_eq!(governing(4.0, 3.0, 3.0), (FailureMode::Twist, 3.0));
        assert_eq!(governing(4.0, 5.0, 1.0), (FailureMode::Shear, 1.0));
    }

    #[test]
    fn payload_ignores_nonbinding_friction() {
        let mut c = GraspConfig::reference();
        let a = payload(&c, 10.0, 1.0).unwrap();
        assert_eq!(a.governing_mode, FailureMode::Twist);
        c.mu *= 2.0;
        let b = payload(&c, 10.0, 1.0).unwrap();
        assert_eq!(a.capacity, b.capacity);
    }

    #[test]
    fn pull_line() {
        let c = GraspConfig::reference();
        let p = predict_pull_test(&c, 10.0, 11).unwrap();
        assert!((p.intercept - 1.47).abs() < 0.01);
        assert_eq!(p.predicted_force[0], p.intercept);
        assert_eq!(p.displacements[10], 10.0);
        assert!((p.slope * 225.0 - 964.76).abs() <= 1e-12 * 964.76);
        let flat = predict_pull_test(&GraspConfig { kappa: 0.0, ..c }, 10.0, 5).unwrap();
        assert!(flat.predicted_force.iter().all(|&f| f == flat.intercept));
        assert!(REFERENCE.pinch_hsa_measured > p.intercept);
        assert!(predict_pull_test(&c, 10.0, 1).is_err());
        assert!(predict_pull_test(&c, 0.0, 5).is_err());
    }

    #[test]
    fn fit_envelope() {
        assert_eq!(object_fit(14.5, 90.0).unwrap(), ObjectFit::Fits);
        assert_eq!(object_fit(10.0, 50.0).unwrap(), ObjectFit::TooShort);
        assert_eq!(object_fit(50.0, 120.0).unwrap(), ObjectFit::TooWide);
        assert_eq!(object_fit(150.0, 105.0).unwrap(), ObjectFit::Fits);
        assert!(object_fit(0.0, 10.0).is_err());
    }
}
