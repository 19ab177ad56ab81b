//! Unit conversions.
//!
//! Structural quantities use mm / N / Nmm / MPa and radians. HSA spring
//! constants are carried in Nmm per degree because that is how the
//! characterization data is tabulated. Every degree/radian crossing in the
//! crate goes through this module.

use core::f64::consts::PI;

pub const DEG_PER_RAD: f64 = 180.0 / PI;
pub const RAD_PER_DEG: f64 = PI / 180.0;

#[inline]
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * RAD_PER_DEG
}

#[inline]
pub fn rad_to_deg(rad: f64) -> f64 {
    rad * DEG_PER_RAD
}

/// Nmm/degree -> Nmm/rad.
#[inline]
pub fn per_deg_to_per_rad(k_per_deg: f64) -> f64 {
    k_per_deg * DEG_PER_RAD
}

/// Nmm/rad -> Nmm/degree.
#[inline]
pub fn per_rad_to_per_deg(k_per_rad: f64) -> f64 {
    k_per_rad * RAD_PER_DEG
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_invert() {
        assert!((rad_to_deg(deg_to_rad(37.5)) - 37.5).abs() < 1e-12);
        assert!((per_rad_to_per_deg(per_deg_to_per_rad(0.21)) - 0.21).abs() < 1e-15);
        assert!((deg_to_rad(180.0) - PI).abs() < 1e-15);
        // spring constant: 1 Nmm/deg is 57.29... Nmm/rad
        assert!((per_deg_to_per_rad(1.0) - 57.295_779_513_082_32).abs() < 1e-12);
    }
}
