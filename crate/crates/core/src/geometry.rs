//! Parametric strain-limiting-layer designs and their space-frame models.
//!
//! Coordinates: x runs along the layer from the clamped end, y across its
//! width, z out of the base plane. Every model is built on its centerline
//! (y = 0); section depth directions carry the width.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::Material;
use crate::model::{DofMask, FrameModel};
use crate::section::SectionProps;

/// Global y: depth direction for every member lying in the x-z plane.
pub const ACROSS_WIDTH: [f64; 3] = [0.0, 1.0, 0.0];

/// Plain rectangular strip, `length x width x thickness` in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatSllDesign {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    pub material: Material,
}

impl FlatSllDesign {
    /// 102 x 25 mm strip of the given thickness.
    pub fn standard(thickness: f64, material: Material) -> Self {
        FlatSllDesign {
            length: 102.0,
            width: 25.0,
            thickness,
            material,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |r: String| Err(Error::invariant("flat SLL design", r));
        for (name, v) in [("length", self.length), ("width", self.width), ("thickness", self.thickness)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v}"));
            }
        }
        if self.thickness > self.width / 10.0 {
            return bad(format!(
                "thickness {} exceeds width/10 = {} (thin-strip model)",
                self.thickness,
                self.width / 10.0
            ));
        }
        self.material.validate()
    }

    pub fn section(&self) -> Result<SectionProps> {
        SectionProps::thin_rectangle(self.width, self.thickness)
    }

    pub fn id(&self) -> String {
        format!(
            "flat-{}x{}x{}-{}",
            self.length, self.width, self.thickness, self.material.name
        )
    }
}

/// Strip of `segments` collinear beam elements along x, clamped at x = 0.
pub fn build_flat_frame(design: &FlatSllDesign, segments: usize) -> Result<FrameModel> {
    design.validate()?;
    if segments == 0 {
        return Err(Error::domain("segments must be at least 1"));
    }
    let mut m = FrameModel::new();
    let mat = m.add_material(design.material.clone());
    let section = design.section()?;
    for i in 0..=segments {
        m.add_node([design.length * i as f64 / segments as f64, 0.0, 0.0]);
    }
    for i in 0..segments {
        m.add_element(i, i + 1, section, mat, ACROSS_WIDTH);
    }
    m.fix(0, DofMask::FIXED);
    Ok(m)
}

/// Triangulated strain-limiting layer: a base strip carrying a zigzag wall
/// ribbon of `triangle_count` triangles over `triangle_span`, with plain base
/// extensions of `end_extension` at both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrsllDesign {
    pub base_length: f64,
    pub triangle_span: f64,
    pub end_extension: f64,
    pub width: f64,
    pub height: f64,
    pub wall_thickness: f64,
    pub base_thickness: f64,
    pub triangle_count: usize,
    pub material: Material,
}

/// Layout tolerance for `base_length = span + 2 * extension`.
const LENGTH_TOL: f64 = 1e-9;

impl TrsllDesign {
    /// 102 mm base, 100 mm triangle span, 1 mm extensions, 25 mm wide,
    /// 12 mm tall, 0.8 mm walls on a 0.4 mm base.
    pub fn standard(triangle_count: usize, material: Material) -> Self {
        TrsllDesign {
            base_length: 102.0,
            triangle_span: 100.0,
            end_extension: 1.0,
            width: 25.0,
            height: 12.0,
            wall_thickness: 0.8,
            base_thickness: 0.4,
            triangle_count,
            material,
        }
    }

    pub fn with_triangles(&self, n: usize) -> Self {
        TrsllDesign {
            triangle_count: n,
            ..self.clone()
        }
    }

    pub fn triangle_width(&self) -> f64 {
        self.triangle_span / self.triangle_count as f64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |r: String| Err(Error::invariant("TR-SLL design", r));
        if self.triangle_count == 0 {
            return bad("triangle_count must be at least 1".into());
        }
        for (name, v) in [
            ("triangle_span", self.triangle_span),
            ("width", self.width),
            ("height", self.height),
            ("wall_thickness", self.wall_thickness),
            ("base_thickness", self.base_thickness),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v}"));
            }
        }
        if !(self.end_extension >= 0.0) {
            return bad(format!("end_extension = {}", self.end_extension));
        }
        let expect = self.triangle_span + 2.0 * self.end_extension;
        if (self.base_length - expect).abs() > LENGTH_TOL * expect.max(1.0) {
            return bad(format!(
                "base_length {} != triangle_span + 2 * end_extension = {expect}",
                self.base_length
            ));
        }
        self.material.validate()
    }

    pub fn id(&self) -> String {
        format!("trsll-n{}-{}", self.triangle_count, self.material.name)
    }
}

/// Node indices of interest in a TR-SLL frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TrsllLayout {
    /// Base-line nodes ordered by x, including the extension end nodes.
    pub base: Vec<usize>,
    pub apexes: Vec<usize>,
    pub clamped: usize,
    pub free_end: usize,
}

/// Frame idealization of a [`TrsllDesign`].
///
/// The base strip becomes chord members of section `width x base_thickness`
/// between consecutive base nodes. Each triangle side wall (a
/// `width x wall_thickness` panel) becomes one member along its mid-line
/// from a base vertex to an apex, with its depth across the width. Walls
/// form a single zigzag ribbon: consecutive triangles share base vertices,
/// and neighbouring apexes are joined by chords of the wall section.
///
/// The end extensions are short next to their width, so their members also
/// carry the restrained-warping torsion of a clamped stub (see
/// [`SectionProps::with_restrained_warping`]).
pub fn build_trsll_frame(design: &TrsllDesign) -> Result<FrameModel> {
    build_trsll_frame_with_layout(design).map(|(m, _)| m)
}

pub fn build_trsll_frame_with_layout(design: &TrsllDesign) -> Result<(FrameModel, TrsllLayout)> {
    design.validate()?;
    let n = design.triangle_count;
    let w = design.triangle_width();
    let x0 = design.end_extension;
    let mut m = FrameModel::new();
    let mat = m.add_material(design.material.clone());
    let base_section = SectionProps::thin_rectangle(design.width, design.base_thickness)?;
    let wall_section = SectionProps::thin_rectangle(design.width, design.wall_thickness)?;

    // nodes in ascending x keep the stiffness profile narrow
    let mut base = Vec::with_capacity(n + 3);
    let mut apexes = Vec::with_capacity(n);
    if design.end_extension > 0.0 {
        base.push(m.add_node([0.0, 0.0, 0.0]));
    }
    for i in 0..=n {
        base.push(m.add_node([x0 + w * i as f64, 0.0, 0.0]));
        if i < n {
            apexes.push(m.add_node([x0 + w * (i as f64 + 0.5), 0.0, design.height]));
        }
    }
    if design.end_extension > 0.0 {
        base.push(m.add_node([design.base_length, 0.0, 0.0]));
    }

    let e_over_g = design.material.youngs_modulus / design.material.shear_modulus;
    let last = base.len() - 2;
    for (k, pair) in base.windows(2).enumerate() {
        let is_stub = design.end_extension > 0.0 && (k == 0 || k == last);
        let section = if is_stub {
            base_section.with_restrained_warping(
                design.end_extension,
                design.width,
                design.base_thickness,
                e_over_g,
            )
        } else {
            base_section
        };
        m.add_element(pair[0], pair[1], section, mat, ACROSS_WIDTH);
    }
    let first_vertex = usize::from(design.end_extension > 0.0);
    for (i, &apex) in apexes.iter().enumerate() {
        let left = base[first_vertex + i];
        let right = base[first_vertex + i + 1];
        m.add_element(left, apex, wall_section, mat, ACROSS_WIDTH);
        m.add_element(apex, right, wall_section, mat, ACROSS_WIDTH);
    }
    for pair in apexes.windows(2) {
        m.add_element(pair[0], pair[1], wall_section, mat, ACROSS_WIDTH);
    }

    let clamped = base[0];
    let free_end = *base.last().expect("base has at least two nodes");
    m.fix(clamped, DofMask::FIXED);
    Ok((
        m,
        TrsllLayout {
            base,
            apexes,
            clamped,
            free_end,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(m: &FrameModel, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&i| m.nodes[i][0]).collect()
    }

    #[test]
    fn flat_frame_counts_and_section() {
        let d = FlatSllDesign::standard(1.0, Material::pa6());
        let m = build_flat_frame(&d, 1).unwrap();
        assert_eq!((m.nodes.len(), m.elements.len()), (2, 1));
        assert!((m.elements[0].section.torsion_constant - 8.123_333_333_333_333).abs() < 1e-12);
        let m = build_flat_frame(&d, 4).unwrap();
        assert_eq!((m.nodes.len(), m.elements.len()), (5, 4));
        let d = FlatSllDesign::standard(0.3, Material::pa6());
        let m = build_flat_frame(&d, 1).unwrap();
        assert!((m.elements[0].section.torsion_constant - 0.223_299).abs() < 1e-9);
    }

    #[test]
    fn flat_frame_rejects_bad_input() {
        let d = FlatSllDesign::standard(1.0, Material::pa6());
        assert!(build_flat_frame(&d, 0).is_err());
        let thick = FlatSllDesign::standard(3.0, Material::pa6());
        assert!(matches!(build_flat_frame(&thick, 2), Err(Error::Invariant { .. })));
    }

    #[test]
    fn two_triangle_layout() {
        let d = TrsllDesign::standard(2, Material::pa6());
        let (m, l) = build_trsll_frame_with_layout(&d).unwrap();
        assert_eq!(xs(&m, &l.base), [0.0, 1.0, 51.0, 101.0, 102.0]);
        assert_eq!(xs(&m, &l.apexes), [26.0, 76.0]);
        assert!(l.apexes.iter().all(|&a| m.nodes[a][2] == 12.0));
        // 4 base chords + 4 walls + 1 apex chord
        assert_eq!(m.elements.len(), 9);
    }

    #[test]
    fn single_triangle_apex_at_midspan() {
        let d = TrsllDesign::standard(1, Material::pa6());
        let (m, l) = build_trsll_frame_with_layout(&d).unwrap();
        assert_eq!(xs(&m, &l.apexes), [51.0]);
    }

    #[test]
    fn five_triangle_layout() {
        let d = TrsllDesign::standard(5, Material::pa6());
        let (m, l) = build_trsll_frame_with_layout(&d).unwrap();
        let inner = &xs(&m, &l.base)[1..7];
        for (k, x) in inner.iter().enumerate() {
            assert!((x - (1.0 + 20.0 * k as f64)).abs() < 1e-12);
        }
        for (k, x) in xs(&m, &l.apexes).iter().enumerate() {
            assert!((x - (1.0 + 10.0 * (2 * k + 1) as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn counts_follow_triangle_count() {
        for n in [1, 3, 17, 80] {
            let d = TrsllDesign::standard(n, Material::pa6());
            let m = build_trsll_frame(&d).unwrap();
            assert_eq!(m.nodes.len(), 2 * n + 3);
            assert_eq!(m.elements.len(), (n + 2) + 2 * n + (n - 1));
        }
    }

    #[test]
    fn base_length_and_mirror_symmetry() {
        for n in [1, 2, 7, 40] {
            let d = TrsllDesign::standard(n, Material::pa6());
            let (m, l) = build_trsll_frame_with_layout(&d).unwrap();
            let total: f64 = l
                .base
                .windows(2)
                .map(|p| m.nodes[p[1]][0] - m.nodes[p[0]][0])
                .sum();
            assert!((total - d.base_length).abs() < 1e-9);
            for p in &m.nodes {
                let mirrored = [d.base_length - p[0], p[1], p[2]];
                assert!(m
                    .nodes
                    .iter()
                    .any(|q| (0..3).all(|k| (q[k] - mirrored[k]).abs() < 1e-9)));
            }
        }
    }

    #[test]
    fn rejects_inconsistent_length() {
        let mut d = TrsllDesign::standard(3, Material::pa6());
        d.base_length = 103.0;
        assert!(build_trsll_frame(&d).is_err());
        let d = TrsllDesign::standard(0, Material::pa6());
        assert!(build_trsll_frame(&d).is_err());
    }
}
