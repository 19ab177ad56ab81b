#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trsll_core::math::{cross, norm, normalize, sub, Vec3};
use trsll_core::{DofMask, FrameModel, Material, SectionProps};

pub fn rect(depth: f64, thickness: f64) -> SectionProps {
    SectionProps::thin_rectangle(depth, thickness).unwrap()
}

/// Straight cantilever along x, clamped at node 0.
pub fn cantilever(length: f64, segments: usize, section: SectionProps, material: Material) -> FrameModel {
    let mut m = FrameModel::new();
    let mat = m.add_material(material);
    for i in 0..=segments {
        m.add_node([length * i as f64 / segments as f64, 0.0, 0.0]);
    }
    for i in 0..segments {
        m.add_element(i, i + 1, section, mat, [0.0, 1.0, 0.0]);
    }
    m.fix(0, DofMask::FIXED);
    m
}

fn unit(rng: &mut StdRng) -> Vec3 {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = norm(v);
        if n > 0.2 && n <= 1.0 {
            return normalize(v).unwrap();
        }
    }
}

/// Connected, clamped space frame: a random spanning tree over 4..10 nodes
/// plus a few extra members, random rectangular sections, one clamped node.
pub fn random_frame(seed: u64) -> FrameModel {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut m = FrameModel::new();
    let mat = m.add_material(Material::isotropic("random", rng.gen_range(1000.0..5000.0), rng.gen_range(0.2..0.45), 60.0).unwrap());
    let n = rng.gen_range(4..=10);
    for _ in 0..n {
        m.add_node([rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)]);
    }
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i));
    }
    for _ in 0..rng.gen_range(0..4) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    for (a, b) in edges {
        let axis = sub(m.nodes[b], m.nodes[a]);
        if norm(axis) < 5.0 {
            m.nodes[b][2] += 10.0;
        }
        let axis = sub(m.nodes[b], m.nodes[a]);
        let orient = loop {
            let o = unit(&mut rng);
            if norm(cross(o, axis)) > 0.3 * norm(axis) {
                break o;
            }
        };
        let depth = rng.gen_range(5.0..25.0);
        let thick = rng.gen_range(1.0..depth / 2.0);
        m.add_element(a, b, rect(depth, thick), mat, orient);
    }
    m.fix(0, DofMask::FIXED);
    m
}

/// Rotation matrix about a random axis.
pub fn random_rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = unit(&mut rng);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (s, c) = t.sin_cos();
    let v = 1.0 - c;
    [
        [c + k[0] * k[0] * v, k[0] * k[1] * v - k[2] * s, k[0] * k[2] * v + k[1] * s],
        [k[1] * k[0] * v + k[2] * s, c + k[1] * k[1] * v, k[1] * k[2] * v - k[0] * s],
        [k[2] * k[0] * v - k[1] * s, k[2] * k[1] * v + k[0] * s, c + k[2] * k[2] * v],
    ]
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}
