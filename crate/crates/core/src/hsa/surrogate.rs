//! Smooth stand-in grids pinned to reported extrema.
//!
//! Each field is a sum of separable Gaussian bumps, one centred on each
//! anchor, sampled on the characterization grid. Coefficients are fitted by
//! least squares so that the bilinear surface over the sampled grid passes
//! through every anchor. The rest state `(0, 0) = 0` is always an anchor;
//! its bump is half a grid step wide so it only pins the origin.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{bilinear, GridLimits, HsaGrid, HsaSpec};
use crate::error::{Error, Result};
use crate::frame::factor::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Force,
    Torque,
}

/// A value the surrogate must reproduce at `(extension mm, rotation deg)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub extension: f64,
    pub rotation: f64,
    pub field: Field,
    pub value: f64,
}

impl Anchor {
    pub const fn new(extension: f64, rotation: f64, field: Field, value: f64) -> Self {
        Anchor { extension, rotation, field, value }
    }

    /// Reported extrema of the 4 x 5 HSA plus its c_tau tail (0.31 Nmm/deg)
    /// carried to 120 degrees.
    pub fn short_hsa() -> Vec<Anchor> {
        vec![
            Anchor::new(17.1, 0.0, Field::Force, 45.9),
            Anchor::new(0.0, 47.0, Field::Force, -29.6),
            Anchor::new(0.0, 39.2, Field::Torque, 139.2),
            Anchor::new(8.95, 0.0, Field::Torque, -56.02),
            Anchor::new(0.0, 120.0, Field::Torque, 0.31 * 120.0),
        ]
    }

    /// Reported extrema of the 8 x 5 HSA plus its c_tau tail (0.21 Nmm/deg)
    /// carried to 120 degrees. The force maximum sits past the tested range.
    pub fn long_hsa() -> Vec<Anchor> {
        vec![
            Anchor::new(31.9, 0.0, Field::Force, 23.56),
            Anchor::new(0.0, 48.4, Field::Force, -13.55),
            Anchor::new(0.0, 38.7, Field::Torque, 68.6),
            Anchor::new(15.9, 0.0, Field::Torque, -41.2),
            Anchor::new(0.0, 120.0, Field::Torque, 0.21 * 120.0),
        ]
    }
}

/// Sampling grid and bump widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateShape {
    pub extension_max: f64,
    pub rotation_max: f64,
    pub extension_count: usize,
    pub rotation_count: usize,
    /// Gaussian standard deviations, mm and degrees.
    pub extension_width: f64,
    pub rotation_width: f64,
}

impl Default for SurrogateShape {
    fn default() -> Self {
        SurrogateShape {
            extension_max: 30.0,
            rotation_max: 120.0,
            extension_count: 7,
            rotation_count: 14,
            extension_width: 5.0,
            rotation_width: 22.0,
        }
    }
}

impl SurrogateShape {
    fn axis(max: f64, count: usize) -> Vec<f64> {
        let last = (count - 1) as f64;
        (0..count).map(|k| max * k as f64 / last).collect()
    }

    pub fn extensions(&self) -> Vec<f64> {
        Self::axis(self.extension_max, self.extension_count)
    }

    pub fn rotations(&self) -> Vec<f64> {
        Self::axis(self.rotation_max, self.rotation_count)
    }

    pub fn limits(&self) -> GridLimits {
        GridLimits {
            extension_max: self.extension_max,
            rotation_max: self.rotation_max,
            shape: Some((self.extension_count, self.rotation_count)),
            ..GridLimits::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.extension_count >= 2
            && self.rotation_count >= 2
            && self.extension_max > 0.0
            && self.rotation_max > 0.0
            && self.extension_width > 0.0
            && self.rotation_width > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid surrogate shape {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateFit {
    pub grid: HsaGrid,
    /// Anchors as fitted: clipped into the grid, rest anchors included.
    pub anchors: Vec<Anchor>,
    pub warnings: Vec<String>,
}

pub fn synthesize_surrogate(spec: HsaSpec, anchors: &[Anchor], shape: &SurrogateShape) -> Result<SurrogateFit> {
    spec.validate()?;
    shape.validate()?;
    let mut warnings = Vec::new();
    let mut fitted = Vec::with_capacity(anchors.len() + 2);
    for a in anchors {
        if !(a.extension.is_finite() && a.rotation.is_finite() && a.value.is_finite()) {
            return Err(Error::domain(format!("non-finite anchor {a:?}")));
        }
        let x = a.extension.clamp(0.0, shape.extension_max);
        let phi = a.rotation.clamp(0.0, shape.rotation_max);
        if x != a.extension || phi != a.rotation {
            warnings.push(format!(
                "{:?} anchor {} at ({}, {}) clipped to ({x}, {phi})",
                a.field, a.value, a.extension, a.rotation
            ));
        }
        fitted.push(Anchor { extension: x, rotation: phi, ..*a });
    }

    let xs = shape.extensions();
    let ps = shape.rotations();
    let mut force = Vec::new();
    let mut torque = Vec::new();
    for field in [Field::Force, Field::Torque] {
        if !fitted.iter().any(|a| a.field == field) {
            return Err(Error::domain(format!("no {field:?} anchor")));
        }
        if !fitted.iter().any(|a| a.field == field && a.extension == 0.0 && a.rotation == 0.0) {
            fitted.push(Anchor::new(0.0, 0.0, field, 0.0));
        }
        let own = dedup(fitted.iter().filter(|a| a.field == field).copied().collect())?;
        let values = fit_field(&own, &xs, &ps, shape)?;
        match field {
            Field::Force => force = values,
            Field::Torque => torque = values,
        }
    }
    let grid = HsaGrid {
        spec,
        extensions: xs,
        rotations: ps,
        force,
        torque,
    };
    grid.validate(&shape.limits())?;
    Ok(SurrogateFit { grid, anchors: fitted, warnings })
}

/// Merges coincident anchors; coincident anchors must agree.
fn dedup(anchors: Vec<Anchor>) -> Result<Vec<Anchor>> {
    let mut out: Vec<Anchor> = Vec::with_capacity(anchors.len());
    for a in anchors {
        match out.iter().find(|b| b.extension == a.extension && b.rotation == a.rotation) {
            Some(b) if b.value == a.value => {}
            Some(b) => {
                return Err(Error::InfeasibleFit(format!(
                    "{:?} anchors at ({}, {}) demand both {} and {}",
                    a.field, a.extension, a.rotation, b.value, a.value
                )))
            }
            None => out.push(a),
        }
    }
    Ok(out)
}

fn fit_field(anchors: &[Anchor], xs: &[f64], ps: &[f64], shape: &SurrogateShape) -> Result<Vec<f64>> {
    let rest_x = 0.5 * (xs[1] - xs[0]);
    let rest_p = 0.5 * (ps[1] - ps[0]);
    let bumps: Vec<Vec<f64>> = anchors
        .iter()
        .map(|a| {
            let (sx, sp) = if a.extension == 0.0 && a.rotation == 0.0 && a.value == 0.0 {
                (rest_x, rest_p)
            } else {
                (shape.extension_width, shape.rotation_width)
            };
            sample_bump(a, sx, sp, xs, ps)
        })
        .collect();
    let k = anchors.len();
    // A[j][m]: bump m read back through the bilinear surface at anchor j
    let a: Vec<Vec<f64>> = anchors
        .iter()
        .map(|p| bumps.iter().map(|b| bilinear(xs, ps, b, p.extension, p.rotation)).collect())
        .collect();
    let mut normal = DenseMatrix::zeros(k);
    let mut rhs = vec![0.0; k];
    for m in 0..k {
        for n in 0..k {
            normal.set(m, n, (0..k).map(|j| a[j][m] * a[j][n]).sum());
        }
        rhs[m] = (0..k).map(|j| a[j][m] * anchors[j].value).sum();
    }
    let coef = normal
        .cholesky()
        .map_err(|_| Error::InfeasibleFit(format!("{} anchors are not independent on the grid", k)))?
        .solve(&rhs);
    let mut values = vec![0.0; xs.len() * ps.len()];
    for (c, b) in coef.iter().zip(&bumps) {
        for (v, w) in values.iter_mut().zip(b) {
            *v += c * w;
        }
    }
    // anchors sitting on grid nodes hold their value exactly
    for p in anchors {
        let i = xs.iter().position(|&x| x == p.extension);
        let j = ps.iter().position(|&q| q == p.rotation);
        if let (Some(i), Some(j)) = (i, j) {
            values[i * ps.len() + j] = p.value;
        }
    }
    for p in anchors {
        let got = bilinear(xs, ps, &values, p.extension, p.rotation);
        if (got - p.value).abs() > 1e-9 * p.value.abs().max(1.0) {
            return Err(Error::InfeasibleFit(format!(
                "anchor {} at ({}, {}) reproduced as {got}",
                p.value, p.extension, p.rotation
            )));
        }
    }
    Ok(values)
}

fn sample_bump(a: &Anchor, sx: f64, sp: f64, xs: &[f64], ps: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len() * ps.len());
    for &x in xs {
        let gx = (x - a.extension) / sx;
        for &p in ps {
            let gp = (p - a.rotation) / sp;
            out.push(libm::exp(-0.5 * (gx * gx + gp * gp)));
        }
    }
    out
}
