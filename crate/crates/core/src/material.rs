use alloc::format;
use alloc::string::{String, ToString};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear-elastic isotropic material. Moduli and stresses in MPa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub shear_modulus: f64,
    pub yield_stress: f64,
}

/// Isotropic shear modulus `E / (2 (1 + nu))`.
///
/// `nu = 0` is accepted; anything outside `[0, 0.5)` is a domain error.
pub fn derive_shear_modulus(youngs_modulus: f64, poisson_ratio: f64) -> Result<f64> {
    if !(youngs_modulus > 0.0) || !youngs_modulus.is_finite() {
        return Err(Error::domain(format!(
            "Young's modulus must be positive, got {youngs_modulus}"
        )));
    }
    if !(0.0..0.5).contains(&poisson_ratio) {
        return Err(Error::domain(format!(
            "Poisson ratio must lie in [0, 0.5), got {poisson_ratio}"
        )));
    }
    Ok(youngs_modulus / (2.0 * (1.0 + poisson_ratio)))
}

impl Material {
    /// Isotropic material with the shear modulus derived from `E` and `nu`.
    pub fn isotropic(
        name: impl Into<String>,
        youngs_modulus: f64,
        poisson_ratio: f64,
        yield_stress: f64,
    ) -> Result<Self> {
        let shear_modulus = derive_shear_modulus(youngs_modulus, poisson_ratio)?;
        let m = Material {
            name: name.into(),
            youngs_modulus,
            poisson_ratio,
            shear_modulus,
            yield_stress,
        };
        m.validate()?;
        Ok(m)
    }

    /// Polyamide 6 (E = 2700 MPa, nu = 0.39).
    pub fn pa6() -> Self {
        Material::isotropic("PA-6", 2700.0, 0.39, 70.0).expect("PA-6 constants are valid")
    }

    /// PLA (E = 3500 MPa, nu = 0.36).
    pub fn pla() -> Self {
        Material::isotropic("PLA", 3500.0, 0.36, 60.0).expect("PLA constants are valid")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "pa-6" | "pa6" => Some(Material::pa6()),
            "pla" => Some(Material::pla()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::invariant("material", reason));
        if !(self.youngs_modulus > 0.0 && self.youngs_modulus.is_finite()) {
            return bad(format!("youngs_modulus = {}", self.youngs_modulus));
        }
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return bad(format!("poisson_ratio = {} not in (0, 0.5)", self.poisson_ratio));
        }
        if !(self.shear_modulus > 0.0 && self.shear_modulus.is_finite()) {
            return bad(format!("shear_modulus = {}", self.shear_modulus));
        }
        if !(self.yield_stress > 0.0) {
            return bad(format!("yield_stress = {}", self.yield_stress));
        }
        if self.name.is_empty() {
            return bad("empty name".to_string());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_modulus_examples() {
        assert_eq!(derive_shear_modulus(2000.0, 0.0).unwrap(), 1000.0);
        assert!((derive_shear_modulus(2700.0, 0.35).unwrap() - 1000.0).abs() < 1e-9);
        // 1100 / 2.78
        let g = derive_shear_modulus(1100.0, 0.39).unwrap();
        assert!((g - 395.683_453_237_41).abs() < 1e-9, "{g}");
    }

    #[test]
    fn shear_modulus_rejects_bad_poisson() {
        assert!(matches!(derive_shear_modulus(1000.0, 0.5), Err(Error::Domain(_))));
        assert!(matches!(derive_shear_modulus(1000.0, -0.1), Err(Error::Domain(_))));
        assert!(matches!(derive_shear_modulus(0.0, 0.3), Err(Error::Domain(_))));
    }

    #[test]
    fn defaults_are_isotropic() {
        for m in [Material::pa6(), Material::pla()] {
            let g = m.youngs_modulus / (2.0 * (1.0 + m.poisson_ratio));
            assert!((m.shear_modulus - g).abs() < 1e-12);
            m.validate().unwrap();
        }
        assert!((Material::pa6().shear_modulus - 971.223_021_582_733_8).abs() < 1e-9);
    }
}
