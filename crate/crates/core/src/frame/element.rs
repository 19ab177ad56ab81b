//! 12-DOF Euler-Bernoulli space-frame element.
//!
//! Local DOF order per node is `[u, v, w, rx, ry, rz]`. The local x axis runs
//! from node a to node b, local y is the orientation vector made normal to x,
//! and local z = x cross y.

use crate::error::{Error, Result};
use crate::material::Material;
use crate::math::{cross, normalize, sub, Vec3};
use crate::model::{Element, FrameModel};

pub type Mat12 = [[f64; 12]; 12];

/// Rows are the local x, y, z unit vectors in global coordinates.
pub fn local_axes(a: Vec3, b: Vec3, orientation: Vec3) -> Result<[[f64; 3]; 3]> {
    let ex = normalize(sub(b, a)).ok_or_else(|| Error::invariant("element", "zero length"))?;
    let ez = normalize(cross(ex, orientation))
        .ok_or_else(|| Error::invariant("element", "orientation parallel to axis"))?;
    let ey = cross(ez, ex);
    Ok([ex, ey, ez])
}

/// Element stiffness in local axes.
pub fn local_stiffness(e: &Element, m: &Material, len: f64) -> Mat12 {
    let s = &e.section;
    let ea = m.youngs_modulus * s.area / len;
    let gj = m.shear_modulus * s.torsion_constant / len;
    // v / rz bending uses the strong axis (depth along local y)
    let iz = m.youngs_modulus * s.bending_inertia_strong;
    let iy = m.youngs_modulus * s.bending_inertia_weak;
    let (l, l2, l3) = (len, len * len, len * len * len);

    let mut k = [[0.0; 12]; 12];
    let mut put = |i: usize, j: usize, v: f64| {
        k[i][j] = v;
        k[j][i] = v;
    };

    put(0, 0, ea);
    put(0, 6, -ea);
    put(6, 6, ea);

    put(3, 3, gj);
    put(3, 9, -gj);
    put(9, 9, gj);

    // v, rz
    put(1, 1, 12.0 * iz / l3);
    put(1, 5, 6.0 * iz / l2);
    put(1, 7, -12.0 * iz / l3);
    put(1, 11, 6.0 * iz / l2);
    put(5, 5, 4.0 * iz / l);
    put(5, 7, -6.0 * iz / l2);
    put(5, 11, 2.0 * iz / l);
    put(7, 7, 12.0 * iz / l3);
    put(7, 11, -6.0 * iz / l2);
    put(11, 11, 4.0 * iz / l);

    // w, ry
    put(2, 2, 12.0 * iy / l3);
    put(2, 4, -6.0 * iy / l2);
    put(2, 8, -12.0 * iy / l3);
    put(2, 10, -6.0 * iy / l2);
    put(4, 4, 4.0 * iy / l);
    put(4, 8, 6.0 * iy / l2);
    put(4, 10, 2.0 * iy / l);
    put(8, 8, 12.0 * iy / l3);
    put(8, 10, 6.0 * iy / l2);
    put(10, 10, 4.0 * iy / l);

    k
}

/// `R u` applied blockwise to a 12-vector (global -> local).
pub fn to_local(r: &[[f64; 3]; 3], u: &[f64; 12]) -> [f64; 12] {
    let mut out = [0.0; 12];
    for blk in 0..4 {
        for i in 0..3 {
            out[3 * blk + i] = (0..3).map(|j| r[i][j] * u[3 * blk + j]).sum();
        }
    }
    out
}

/// `R^T f` applied blockwise to a 12-vector (local -> global).
pub fn to_global(r: &[[f64; 3]; 3], f: &[f64; 12]) -> [f64; 12] {
    let mut out = [0.0; 12];
    for blk in 0..4 {
        for i in 0..3 {
            out[3 * blk + i] = (0..3).map(|j| r[j][i] * f[3 * blk + j]).sum();
        }
    }
    out
}

/// Element stiffness in global axes, `T^T K T`.
pub fn global_stiffness(model: &FrameModel, e: &Element) -> Result<Mat12> {
    let (a, b) = (model.nodes[e.node_a], model.nodes[e.node_b]);
    let r = local_axes(a, b, e.orientation)?;
    let kl = local_stiffness(e, &model.materials[e.material], model.element_length(e));

    let mut kt = [[0.0; 12]; 12];
    for i in 0..12 {
        for bj in 0..4 {
            for jj in 0..3 {
                let mut s = 0.0;
                for m in 0..3 {
                    s += kl[i][3 * bj + m] * r[m][jj];
                }
                kt[i][3 * bj + jj] = s;
            }
        }
    }
    let mut kg = [[0.0; 12]; 12];
    for bi in 0..4 {
        for ii in 0..3 {
            for j in 0..12 {
                let mut s = 0.0;
                for m in 0..3 {
                    s += r[m][ii] * kt[3 * bi + m][j];
                }
                kg[3 * bi + ii][j] = s;
            }
        }
    }
    // symmetrize round-off
    for i in 0..12 {
        for j in (i + 1)..12 {
            let v = 0.5 * (kg[i][j] + kg[j][i]);
            kg[i][j] = v;
            kg[j][i] = v;
        }
    }
    Ok(kg)
}

/// Gathers the element's 12 global displacement components.
pub fn gather(e: &Element, u: &[f64]) -> [f64; 12] {
    let mut ue = [0.0; 12];
    ue[..6].copy_from_slice(&u[6 * e.node_a..6 * e.node_a + 6]);
    ue[6..].copy_from_slice(&u[6 * e.node_b..6 * e.node_b + 6]);
    ue
}

/// Member end forces in local axes: `[N, Vy, Vz, T, My, Mz]` at each end.
pub fn end_forces(model: &FrameModel, e: &Element, u: &[f64]) -> Result<[f64; 12]> {
    let (a, b) = (model.nodes[e.node_a], model.nodes[e.node_b]);
    let r = local_axes(a, b, e.orientation)?;
    let kl = local_stiffness(e, &model.materials[e.material], model.element_length(e));
    let ul = to_local(&r, &gather(e, u));
    let mut f = [0.0; 12];
    for i in 0..12 {
        f[i] = (0..12).map(|j| kl[i][j] * ul[j]).sum();
    }
    Ok(f)
}

/// Peak fiber stress: `|N|/A + |M| c / I`, maximised over both ends and
/// both bending axes.
pub fn peak_fiber_stress(e: &Element, f: &[f64; 12]) -> f64 {
    let s = &e.section;
    let mut peak: f64 = 0.0;
    for end in [0, 6] {
        let axial = f[end].abs() / s.area;
        let weak = f[end + 4].abs() * s.fiber_weak / s.bending_inertia_weak;
        let strong = f[end + 5].abs() * s.fiber_strong / s.bending_inertia_strong;
        peak = peak.max(axial + weak).max(axial + strong);
    }
    peak
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::section::SectionProps;

    fn element() -> (FrameModel, Element) {
        let mut m = FrameModel::new();
        m.add_node([1.0, 2.0, 3.0]);
        m.add_node([4.0, -2.0, 9.0]);
        let mat = m.add_material(Material::pa6());
        let s = SectionProps::thin_rectangle(5.0, 1.0).unwrap();
        m.add_element(0, 1, s, mat, [0.3, 1.0, -0.2]);
        let e = m.elements[0].clone();
        (m, e)
    }

    #[test]
    fn axes_are_orthonormal() {
        let (m, e) = element();
        let r = local_axes(m.nodes[0], m.nodes[1], e.orientation).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn global_stiffness_symmetric_with_rigid_modes() {
        let (m, e) = element();
        let k = global_stiffness(&m, &e).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(k[i][j], k[j][i]);
            }
        }
        // rigid translation and rigid rotation about x produce no forces
        let scale = k.iter().flatten().fold(0.0_f64, |a, b| a.max(b.abs()));
        let mut t = [0.0; 12];
        t[0] = 1.0;
        t[6] = 1.0;
        let (a, b) = (m.nodes[0], m.nodes[1]);
        let mut rot = [0.0; 12];
        // small rotation w about global x: u = w x p
        for (blk, p) in [(0, a), (6, b)] {
            rot[blk] = 0.0;
            rot[blk + 1] = -p[2];
            rot[blk + 2] = p[1];
            rot[blk + 3] = 1.0;
        }
        for u in [t, rot] {
            for row in &k {
                let f: f64 = (0..12).map(|j| row[j] * u[j]).sum();
                assert!(f.abs() < 1e-10 * scale, "{f}");
            }
        }
    }
}
