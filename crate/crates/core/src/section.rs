use alloc::format;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Beam cross-section properties in mm units.
///
/// The section's wide dimension (depth) is aligned with the element's local
/// y axis, so `bending_inertia_strong` resists bending about local z and
/// `bending_inertia_weak` resists bending about local y. The fiber distances
/// are the extreme-fiber offsets used for peak bending stress.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionProps {
    pub area: f64,
    pub bending_inertia_strong: f64,
    pub bending_inertia_weak: f64,
    pub torsion_constant: f64,
    pub fiber_strong: f64,
    pub fiber_weak: f64,
}

impl SectionProps {
    /// Thin rectangle `depth x thickness` with the Saint-Venant correction
    /// `J = (b t^3 / 3) (1 - 0.63 t / b)`.
    pub fn thin_rectangle(depth: f64, thickness: f64) -> Result<Self> {
        let mut s = Self::thin_rectangle_uncorrected(depth, thickness)?;
        s.torsion_constant *= 1.0 - 0.63 * thickness / depth;
        Ok(s)
    }

    /// Thin rectangle with `J = b t^3 / 3` (no end correction).
    pub fn thin_rectangle_uncorrected(depth: f64, thickness: f64) -> Result<Self> {
        if !(depth > 0.0 && thickness > 0.0 && depth.is_finite() && thickness.is_finite()) {
            return Err(Error::domain(format!(
                "section dimensions must be positive, got {depth} x {thickness}"
            )));
        }
        let (b, t) = (depth, thickness);
        let t3 = t * t * t;
        Ok(SectionProps {
            area: b * t,
            bending_inertia_strong: t * b * b * b / 12.0,
            bending_inertia_weak: b * t3 / 12.0,
            torsion_constant: b * t3 / 3.0,
            fiber_strong: b / 2.0,
            fiber_weak: t / 2.0,
        })
    }

    /// Adds the torsional stiffness of a stub whose cross-section warping is
    /// held at both ends: over a length `L` that is short next to the depth
    /// `b`, the section twists by through-thickness bending of its strips,
    /// worth `12 E Gamma / L^3` with `Gamma = b^3 t^3 / 144`. The term is
    /// folded into an equivalent Saint-Venant constant for modulus ratio
    /// `E / G`.
    pub fn with_restrained_warping(mut self, length: f64, depth: f64, thickness: f64, e_over_g: f64) -> Self {
        let bt = depth * thickness;
        let warping = bt * bt * bt / 144.0;
        self.torsion_constant += 12.0 * e_over_g * warping / (length * length);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("area", self.area),
            ("bending_inertia_strong", self.bending_inertia_strong),
            ("bending_inertia_weak", self.bending_inertia_weak),
            ("torsion_constant", self.torsion_constant),
            ("fiber_strong", self.fiber_strong),
            ("fiber_weak", self.fiber_weak),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invariant("section", format!("{name} = {v}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn torsion_constant_examples() {
        let s = SectionProps::thin_rectangle(25.0, 1.0).unwrap();
        // (25/3)(1 - 0.63/25)
        assert!((s.torsion_constant - 8.123_333_333_333_333).abs() < 1e-12);
        let s = SectionProps::thin_rectangle(25.0, 0.3).unwrap();
        assert!((s.torsion_constant - 0.223_299).abs() < 1e-9);
        assert!((s.bending_inertia_weak - 25.0 * 0.027 / 12.0).abs() < 1e-15);
        assert!((s.bending_inertia_strong - 0.3 * 15625.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(SectionProps::thin_rectangle(0.0, 1.0).is_err());
        assert!(SectionProps::thin_rectangle(25.0, -1.0).is_err());
    }

    #[test]
    fn correction_varies_little_over_sll_range() {
        let ratio = |t: f64| SectionProps::thin_rectangle(25.0, t).unwrap().torsion_constant / (t * t * t);
        let (lo, hi) = (ratio(1.0), ratio(0.3));
        assert!(hi / lo - 1.0 < 0.02);
    }

    #[test]
    fn restrained_warping_stub() {
        let s = SectionProps::thin_rectangle(25.0, 0.4).unwrap();
        let stub = s.with_restrained_warping(1.0, 25.0, 0.4, 2.78);
        // 12 (E/G) (b t)^3 / 144 / L^2
        assert!((stub.torsion_constant - s.torsion_constant - 2.78 * 1000.0 / 12.0).abs() < 1e-9);
        assert_eq!(stub.bending_inertia_weak, s.bending_inertia_weak);
        let long = s.with_restrained_warping(100.0, 25.0, 0.4, 2.78);
        assert!(long.torsion_constant / s.torsion_constant - 1.0 < 0.1);
    }

    proptest! {
        #[test]
        fn uncorrected_scales_with_cube(t in 0.05f64..2.0, k in 0.1f64..4.0) {
            let a = SectionProps::thin_rectangle_uncorrected(25.0, t).unwrap();
            let b = SectionProps::thin_rectangle_uncorrected(25.0, k * t).unwrap();
            let k3 = k * k * k;
            prop_assert!((b.torsion_constant / a.torsion_constant - k3).abs() <= 1e-12 * k3);
            prop_assert!((b.bending_inertia_weak / a.bending_inertia_weak - k3).abs() <= 1e-12 * k3);
        }

        #[test]
        fn corrected_ratio_within_two_percent(t1 in 0.3f64..=1.0, t2 in 0.3f64..=1.0) {
            let r = |t: f64| SectionProps::thin_rectangle(25.0, t).unwrap().torsion_constant / (t * t * t);
            let (a, b) = (r(t1), r(t2));
            prop_assert!((a / b - 1.0).abs() < 0.02);
        }
    }
}
