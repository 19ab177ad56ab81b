//! Handed shearing auxetic (HSA) characterization data.
//!
//! A characterization grid holds the axial force (N, positive when the HSA
//! pulls on the environment) and torque (Nmm, positive when it resists
//! further twisting) measured over extension `x` (mm) and rotation `phi`
//! (degrees). [`HsaSurface`] interpolates it bilinearly; [`ctau`] derives
//! torsional spring constants along loading paths.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod ctau;
pub mod surrogate;

pub use ctau::{
    ctau_curve, normal_force_profile, predict_normal_force, series_combination, CtauCurve,
    CtauPath, CtauSample, HsaState, NormalForcePrediction,
};
pub use surrogate::{synthesize_surrogate, Anchor, Field, SurrogateFit, SurrogateShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsaSpec {
    pub name: String,
    /// Unit-cell rows along the tube.
    pub rows: usize,
    /// Unit-cell columns around the circumference.
    pub columns: usize,
    /// mm
    pub outer_diameter: f64,
    /// mm
    pub wall_thickness: f64,
    pub handedness: Handedness,
}

impl HsaSpec {
    /// 4 x 5 cells, 31.75 mm OD, 1.8 mm wall.
    pub fn short() -> Self {
        HsaSpec {
            name: "short".into(),
            rows: 4,
            columns: 5,
            outer_diameter: 31.75,
            wall_thickness: 1.8,
            handedness: Handedness::Right,
        }
    }

    /// 8 x 5 cells, 31.75 mm OD, 1.8 mm wall.
    pub fn long() -> Self {
        HsaSpec {
            name: "long".into(),
            rows: 8,
            ..Self::short()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |r: String| Err(Error::invariant("HSA spec", r));
        if self.rows == 0 || self.columns == 0 {
            return bad(format!("{} rows x {} columns", self.rows, self.columns));
        }
        if !(self.wall_thickness > 0.0 && self.outer_diameter.is_finite()) {
            return bad(format!("wall thickness {}", self.wall_thickness));
        }
        if !(self.outer_diameter > 2.0 * self.wall_thickness) {
            return bad(format!(
                "outer diameter {} must exceed twice the wall {}",
                self.outer_diameter, self.wall_thickness
            ));
        }
        Ok(())
    }
}

/// Acceptance envelope for a characterization grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridLimits {
    pub extension_max: f64,
    pub rotation_max: f64,
    /// Expected `(extensions, rotations)` counts; `None` accepts any shape.
    pub shape: Option<(usize, usize)>,
    /// Largest magnitude allowed for force and torque at rest.
    pub zero_band: f64,
}

impl Default for GridLimits {
    /// 0-30 mm, 0-120 degrees, 7 x 14 points, 0.5 N / 0.5 Nmm at rest.
    fn default() -> Self {
        GridLimits {
            extension_max: 30.0,
            rotation_max: 120.0,
            shape: Some((7, 14)),
            zero_band: 0.5,
        }
    }
}

/// One measured point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub extension: f64,
    pub rotation: f64,
    pub force: f64,
    pub torque: f64,
}

/// Rectangular force/torque grid, values stored extension-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsaGrid {
    pub spec: HsaSpec,
    pub extensions: Vec<f64>,
    pub rotations: Vec<f64>,
    pub force: Vec<f64>,
    pub torque: Vec<f64>,
}

impl HsaGrid {
    /// Builds a grid from points listed extension-major (all rotations for
    /// the first extension, then the next extension).
    pub fn from_points(spec: HsaSpec, points: &[GridPoint], limits: &GridLimits) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DimensionMismatch("no grid points".into()));
        }
        let x0 = points[0].extension;
        let block = points.iter().take_while(|p| p.extension == x0).count();
        let rotations: Vec<f64> = points[..block].iter().map(|p| p.rotation).collect();
        check_axis("rotation", &rotations, x0)?;
        if !points.len().is_multiple_of(block) {
            return Err(Error::DimensionMismatch(format!(
                "{} points do not fill rows of {block} rotations",
                points.len()
            )));
        }
        let mut extensions = Vec::with_capacity(points.len() / block);
        for (i, chunk) in points.chunks(block).enumerate() {
            let x = chunk[0].extension;
            for (j, p) in chunk.iter().enumerate() {
                if p.extension != x {
                    return Err(Error::DimensionMismatch(format!(
                        "extension block {i} has {j} rotations, expected {block}"
                    )));
                }
                if p.rotation != rotations[j] {
                    if j > 0 && p.rotation == chunk[j - 1].rotation {
                        return Err(Error::DuplicatePoint { x, phi: p.rotation });
                    }
                    return Err(Error::DimensionMismatch(format!(
                        "rotation {} at extension {x} does not match axis value {}",
                        p.rotation, rotations[j]
                    )));
                }
            }
            extensions.push(x);
        }
        if let Some(k) = extensions.windows(2).position(|w| w[1] == w[0]) {
            return Err(Error::DuplicatePoint {
                x: extensions[k],
                phi: rotations[0],
            });
        }
        check_axis("extension", &extensions, rotations[0])?;
        let grid = HsaGrid {
            spec,
            extensions,
            rotations,
            force: points.iter().map(|p| p.force).collect(),
            torque: points.iter().map(|p| p.torque).collect(),
        };
        grid.validate(limits)?;
        Ok(grid)
    }

    pub fn validate(&self, limits: &GridLimits) -> Result<()> {
        self.spec.validate()?;
        let (nx, np) = (self.extensions.len(), self.rotations.len());
        if nx == 0 || np == 0 || self.force.len() != nx * np || self.torque.len() != nx * np {
            return Err(Error::DimensionMismatch(format!(
                "{nx} extensions x {np} rotations vs {} force / {} torque entries",
                self.force.len(),
                self.torque.len()
            )));
        }
        if let Some((ex, ep)) = limits.shape {
            if (nx, np) != (ex, ep) {
                return Err(Error::DimensionMismatch(format!(
                    "grid is {nx} x {np}, expected {ex} x {ep}"
                )));
            }
        }
        check_axis("extension", &self.extensions, f64::NAN)?;
        check_axis("rotation", &self.rotations, f64::NAN)?;
        let in_range = |v: &[f64], hi: f64| v[0] >= 0.0 && v[v.len() - 1] <= hi;
        if !in_range(&self.extensions, limits.extension_max) {
            return Err(Error::invariant(
                "HSA grid",
                format!("extensions outside [0, {}]", limits.extension_max),
            ));
        }
        if !in_range(&self.rotations, limits.rotation_max) {
            return Err(Error::invariant(
                "HSA grid",
                format!("rotations outside [0, {}]", limits.rotation_max),
            ));
        }
        if let Some(v) = self.force.iter().chain(&self.torque).find(|v| !v.is_finite()) {
            return Err(Error::invariant("HSA grid", format!("non-finite value {v}")));
        }
        if self.extensions[0] == 0.0 && self.rotations[0] == 0.0 {
            let (f, t) = (self.force[0], self.torque[0]);
            if f.abs() > limits.zero_band || t.abs() > limits.zero_band {
                return Err(Error::invariant(
                    "HSA grid",
                    format!("rest state force {f} / torque {t} outside zero band {}", limits.zero_band),
                ));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.rotations.len() + j
    }

    pub fn len(&self) -> usize {
        self.force.len()
    }

    pub fn is_empty(&self) -> bool {
        self.force.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.extensions.iter().enumerate().flat_map(move |(i, &x)| {
            self.rotations.iter().enumerate().map(move |(j, &phi)| {
                let k = self.index(i, j);
                GridPoint {
                    extension: x,
                    rotation: phi,
                    force: self.force[k],
                    torque: self.torque[k],
                }
            })
        })
    }
}

fn check_axis(axis: &'static str, values: &[f64], other: f64) -> Result<()> {
    for (k, w) in values.windows(2).enumerate() {
        if w[1] == w[0] {
            let (x, phi) = if axis == "rotation" { (other, w[0]) } else { (w[0], other) };
            return Err(Error::DuplicatePoint { x, phi });
        }
        if !(w[1] > w[0]) {
            return Err(Error::AxisNotMonotone { axis, index: k + 1 });
        }
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invariant("HSA grid", format!("non-finite {axis} {v}")));
    }
    Ok(())
}

/// Bilinear interpolant over an [`HsaGrid`]. No extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsaSurface {
    pub grid: HsaGrid,
}

/// Cell index and local coordinate in `[0, 1]`.
fn locate(axis: &[f64], v: f64) -> (usize, f64) {
    if axis.len() == 1 {
        return (0, 0.0);
    }
    let i = axis.partition_point(|&a| a <= v).clamp(1, axis.len() - 1) - 1;
    (i, (v - axis[i]) / (axis[i + 1] - axis[i]))
}

/// Bilinear interpolation of extension-major `values`; `(x, phi)` must be
/// inside the axes.
pub(crate) fn bilinear(extensions: &[f64], rotations: &[f64], values: &[f64], x: f64, phi: f64) -> f64 {
    let np = rotations.len();
    let (i, t) = locate(extensions, x);
    let (j, u) = locate(rotations, phi);
    let i1 = (i + 1).min(extensions.len() - 1);
    let j1 = (j + 1).min(np - 1);
    let v = |a: usize, b: usize| values[a * np + b];
    let lo = (1.0 - t) * v(i, j) + t * v(i1, j);
    let hi = (1.0 - t) * v(i, j1) + t * v(i1, j1);
    (1.0 - u) * lo + u * hi
}

impl HsaSurface {
    pub fn new(grid: HsaGrid) -> Self {
        HsaSurface { grid }
    }

    pub fn extension_range(&self) -> (f64, f64) {
        let e = &self.grid.extensions;
        (e[0], e[e.len() - 1])
    }

    pub fn rotation_range(&self) -> (f64, f64) {
        let r = &self.grid.rotations;
        (r[0], r[r.len() - 1])
    }

    fn check_bounds(&self, x: f64, phi: f64) -> Result<()> {
        let (x_min, x_max) = self.extension_range();
        let (phi_min, phi_max) = self.rotation_range();
        if x >= x_min && x <= x_max && phi >= phi_min && phi <= phi_max {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                x,
                phi,
                x_min,
                x_max,
                phi_min,
                phi_max,
            })
        }
    }

    fn interpolate(&self, values: &[f64], x: f64, phi: f64) -> f64 {
        bilinear(&self.grid.extensions, &self.grid.rotations, values, x, phi)
    }

    /// `(force N, torque Nmm)` at `(x mm, phi degrees)`.
    pub fn query(&self, x: f64, phi: f64) -> Result<(f64, f64)> {
        self.check_bounds(x, phi)?;
        Ok((
            self.interpolate(&self.grid.force, x, phi),
            self.interpolate(&self.grid.torque, x, phi),
        ))
    }

    pub fn force(&self, x: f64, phi: f64) -> Result<f64> {
        self.check_bounds(x, phi)?;
        Ok(self.interpolate(&self.grid.force, x, phi))
    }

    pub fn torque(&self, x: f64, phi: f64) -> Result<f64> {
        self.check_bounds(x, phi)?;
        Ok(self.interpolate(&self.grid.torque, x, phi))
    }

    /// Smallest extension where the force reaches zero at rotation `phi`.
    ///
    /// Along a rotation line the interpolant is linear within each cell, so
    /// the first cell whose end values bracket zero holds the root in closed
    /// form. With no crossing the grid maximum is returned and flagged.
    pub fn free_extension(&self, phi: f64) -> Result<FreeExtension> {
        let (x_min, x_max) = self.extension_range();
        self.check_bounds(x_min, phi)?;
        let xs = &self.grid.extensions;
        let f = |x: f64| self.interpolate(&self.grid.force, x, phi);
        let mut prev = f(xs[0]);
        if prev >= 0.0 {
            return Ok(FreeExtension { extension: x_min, root_found: true });
        }
        for w in xs.windows(2) {
            let next = f(w[1]);
            if next >= 0.0 {
                let x = w[0] + (w[1] - w[0]) * (-prev / (next - prev));
                return Ok(FreeExtension { extension: x.clamp(w[0], w[1]), root_found: true });
            }
            prev = next;
        }
        Ok(FreeExtension { extension: x_max, root_found: false })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeExtension {
    /// mm
    pub extension: f64,
    /// False when force stays negative over the whole extension range.
    pub root_found: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64, f64) -> f64, t: impl Fn(f64, f64) -> f64) -> Vec<GridPoint> {
        let mut pts = Vec::new();
        for i in 0..7 {
            for j in 0..14 {
                let (x, phi) = (5.0 * i as f64, 120.0 * j as f64 / 13.0);
                pts.push(GridPoint { extension: x, rotation: phi, force: f(x, phi), torque: t(x, phi) });
            }
        }
        pts
    }

    fn surface(f: impl Fn(f64, f64) -> f64) -> HsaSurface {
        let pts = synthetic(f, |x, p| x * p / 100.0);
        HsaSurface::new(HsaGrid::from_points(HsaSpec::short(), &pts, &GridLimits::default()).unwrap())
    }

    #[test]
    fn presets() {
        assert_eq!(HsaSpec::long().rows, 8);
        assert_eq!(HsaSpec::short().rows, 4);
        HsaSpec::long().validate().unwrap();
        let mut s = HsaSpec::short();
        s.outer_diameter = 3.6;
        assert!(s.validate().is_err());
    }

    #[test]
    fn well_formed_grid_has_98_entries() {
        let pts = synthetic(|x, p| x - p / 10.0, |_, _| 0.0);
        let g = HsaGrid::from_points(HsaSpec::long(), &pts, &GridLimits::default()).unwrap();
        assert_eq!(g.len(), 98);
        assert_eq!(g.points().collect::<Vec<_>>(), pts);
    }

    #[test]
    fn ingestion_errors() {
        let lim = GridLimits::default();
        let mut pts = synthetic(|_, _| 0.0, |_, _| 0.0);
        pts.swap(3, 4);
        assert!(matches!(
            HsaGrid::from_points(HsaSpec::short(), &pts, &lim),
            Err(Error::AxisNotMonotone { axis: "rotation", index: 4 })
        ));

        let short: Vec<_> = synthetic(|_, _| 0.0, |_, _| 0.0)
            .into_iter()
            .filter(|p| p.rotation != 120.0)
            .collect();
        assert!(matches!(
            HsaGrid::from_points(HsaSpec::short(), &short, &lim),
            Err(Error::DimensionMismatch(_))
        ));

        let mut dup = synthetic(|_, _| 0.0, |_, _| 0.0);
        dup[20].rotation = dup[19].rotation;
        assert!(matches!(
            HsaGrid::from_points(HsaSpec::short(), &dup, &lim),
            Err(Error::DuplicatePoint { .. })
        ));

        let off = synthetic(|_, _| 2.0, |_, _| 0.0);
        assert!(matches!(
            HsaGrid::from_points(HsaSpec::short(), &off, &lim),
            Err(Error::Invariant { .. })
        ));
    }

    #[test]
    fn bilinear_identities() {
        let s = surface(|x, p| (x * 0.3).sin() * 10.0 + p * p / 500.0 - 0.0);
        let g = &s.grid;
        for p in g.points() {
            assert_eq!(s.force(p.extension, p.rotation).unwrap(), p.force);
        }
        let (x, phi) = (12.5, 0.5 * (g.rotations[3] + g.rotations[4]));
        let mean = (g.force[g.index(2, 3)] + g.force[g.index(3, 3)] + g.force[g.index(2, 4)] + g.force[g.index(3, 4)]) / 4.0;
        assert!((s.force(x, phi).unwrap() - mean).abs() < 1e-12);
        assert!(matches!(s.query(31.0, 0.0), Err(Error::OutOfBounds { .. })));
        assert!(matches!(s.query(0.0, -1e-9), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn free_extension_examples() {
        let s = surface(|x, p| x - p / 10.0);
        let phi = s.grid.rotations[5];
        let fe = s.free_extension(phi).unwrap();
        assert!(fe.root_found);
        assert!((fe.extension - phi / 10.0).abs() < 1e-12);
        assert_eq!(s.free_extension(0.0).unwrap().extension, 0.0);

        let s = surface(|x, p| x - p / 10.0 + 0.0 * p);
        let r = s.free_extension(50.0).unwrap();
        assert!((r.extension - 5.0).abs() < 1e-12, "{r:?}");

        let pushing = surface(|x, p| if x == 0.0 && p == 0.0 { 0.0 } else { -1.0 - x });
        let r = pushing.free_extension(60.0).unwrap();
        assert_eq!(r, FreeExtension { extension: 30.0, root_found: false });

        let pulling = surface(|x, p| x + p);
        assert_eq!(pulling.free_extension(40.0).unwrap().extension, 0.0);
    }
}
