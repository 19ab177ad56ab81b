//! Space-frame model: nodes, beam elements, supports, and nodal loads.

use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::Material;
use crate::math::{cross, norm, sub, Vec3};
use crate::section::SectionProps;

/// Degrees of freedom per node, in storage order.
pub const DOFS_PER_NODE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dof {
    Ux,
    Uy,
    Uz,
    Rx,
    Ry,
    Rz,
}

impl Dof {
    pub const ALL: [Dof; 6] = [Dof::Ux, Dof::Uy, Dof::Uz, Dof::Rx, Dof::Ry, Dof::Rz];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Dof::Ux => "ux",
            Dof::Uy => "uy",
            Dof::Uz => "uz",
            Dof::Rx => "rx",
            Dof::Ry => "ry",
            Dof::Rz => "rz",
        }
    }
}

/// Fixed-DOF mask over `[ux, uy, uz, rx, ry, rz]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DofMask(pub [bool; 6]);

impl DofMask {
    pub const FIXED: DofMask = DofMask([true; 6]);
    pub const FREE: DofMask = DofMask([false; 6]);
    pub const PINNED: DofMask = DofMask([true, true, true, false, false, false]);

    pub fn is_fixed(&self, dof: Dof) -> bool {
        self.0[dof.index()]
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn union(self, other: DofMask) -> DofMask {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a |= b;
        }
        DofMask(m)
    }
}

/// Two-node beam element.
///
/// `orientation` is any vector not parallel to the element axis; its
/// component normal to the axis defines the local y axis, which is the
/// direction of the section's depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub node_a: usize,
    pub node_b: usize,
    pub section: SectionProps,
    pub material: usize,
    pub orientation: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub node: usize,
    pub fixed: DofMask,
}

/// Force (N) and moment (Nmm) applied at a node, in global axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalLoad {
    pub node: usize,
    pub force: Vec3,
    pub moment: Vec3,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameModel {
    pub nodes: Vec<Vec3>,
    pub materials: Vec<Material>,
    pub elements: Vec<Element>,
    pub constraints: Vec<Constraint>,
    pub loads: Vec<NodalLoad>,
}

impl FrameModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, p: Vec3) -> usize {
        self.nodes.push(p);
        self.nodes.len() - 1
    }

    pub fn add_material(&mut self, m: Material) -> usize {
        if let Some(i) = self.materials.iter().position(|x| *x == m) {
            return i;
        }
        self.materials.push(m);
        self.materials.len() - 1
    }

    pub fn add_element(
        &mut self,
        node_a: usize,
        node_b: usize,
        section: SectionProps,
        material: usize,
        orientation: Vec3,
    ) -> usize {
        self.elements.push(Element {
            node_a,
            node_b,
            section,
            material,
            orientation,
        });
        self.elements.len() - 1
    }

    pub fn fix(&mut self, node: usize, fixed: DofMask) {
        self.constraints.push(Constraint { node, fixed });
    }

    pub fn load(&mut self, node: usize, force: Vec3, moment: Vec3) {
        self.loads.push(NodalLoad { node, force, moment });
    }

    pub fn dof_count(&self) -> usize {
        self.nodes.len() * DOFS_PER_NODE
    }

    /// Merged fixity per node.
    pub fn fixity(&self) -> Vec<DofMask> {
        let mut m = alloc::vec![DofMask::FREE; self.nodes.len()];
        for c in &self.constraints {
            if let Some(slot) = m.get_mut(c.node) {
                *slot = slot.union(c.fixed);
            }
        }
        m
    }

    pub fn constrained_dof_count(&self) -> usize {
        self.fixity().iter().map(DofMask::count).sum()
    }

    /// Global load vector (length `6 * nodes`).
    pub fn load_vector(&self) -> Vec<f64> {
        let mut f = alloc::vec![0.0; self.dof_count()];
        for l in &self.loads {
            let base = l.node * DOFS_PER_NODE;
            for k in 0..3 {
                f[base + k] += l.force[k];
                f[base + 3 + k] += l.moment[k];
            }
        }
        f
    }

    /// Copy of the model with every load multiplied by `s`.
    pub fn with_scaled_loads(&self, s: f64) -> FrameModel {
        let mut m = self.clone();
        for l in &mut m.loads {
            for k in 0..3 {
                l.force[k] *= s;
                l.moment[k] *= s;
            }
        }
        m
    }

    pub fn element_length(&self, e: &Element) -> f64 {
        norm(sub(self.nodes[e.node_b], self.nodes[e.node_a]))
    }

    /// Checks references, element lengths, and orientation vectors.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        let bad = |reason| Err(Error::invariant("frame model", reason));
        if let Some(i) = self.nodes.iter().position(|p| p.iter().any(|c| !c.is_finite())) {
            return bad(format!("node {i} has a non-finite coordinate"));
        }
        for m in &self.materials {
            m.validate()?;
        }
        // characteristic size for the zero-length test
        let extent = self
            .nodes
            .iter()
            .flat_map(|p| p.iter().map(|c| c.abs()))
            .fold(1.0_f64, f64::max);
        for (i, e) in self.elements.iter().enumerate() {
            if e.node_a >= n || e.node_b >= n {
                return bad(format!("element {i} references a missing node"));
            }
            if e.material >= self.materials.len() {
                return bad(format!("element {i} references missing material {}", e.material));
            }
            e.section.validate()?;
            let axis = sub(self.nodes[e.node_b], self.nodes[e.node_a]);
            let len = norm(axis);
            if len <= 1e-12 * extent {
                return bad(format!("element {i} has zero length"));
            }
            let on = norm(e.orientation);
            if !(on > 0.0) || norm(cross(axis, e.orientation)) <= 1e-9 * len * on {
                return bad(format!("element {i} orientation is parallel to its axis"));
            }
        }
        for c in &self.constraints {
            if c.node >= n {
                return bad(format!("constraint on missing node {}", c.node));
            }
        }
        for l in &self.loads {
            if l.node >= n {
                return bad(format!("load on missing node {}", l.node));
            }
            if l.force.iter().chain(l.moment.iter()).any(|v| !v.is_finite()) {
                return bad(format!("non-finite load on node {}", l.node));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node() -> FrameModel {
        let mut m = FrameModel::new();
        let a = m.add_node([0.0, 0.0, 0.0]);
        let b = m.add_node([10.0, 0.0, 0.0]);
        let mat = m.add_material(Material::pa6());
        let s = SectionProps::thin_rectangle(25.0, 1.0).unwrap();
        m.add_element(a, b, s, mat, [0.0, 1.0, 0.0]);
        m.fix(a, DofMask::FIXED);
        m
    }

    #[test]
    fn validates_good_model() {
        two_node().validate().unwrap();
    }

    #[test]
    fn rejects_zero_length_and_bad_refs() {
        let mut m = two_node();
        m.nodes[1] = [0.0, 0.0, 0.0];
        assert!(m.validate().is_err());

        let mut m = two_node();
        m.elements[0].node_b = 7;
        assert!(m.validate().is_err());

        let mut m = two_node();
        m.elements[0].orientation = [3.0, 0.0, 0.0];
        assert!(m.validate().is_err());
    }

    #[test]
    fn fixity_merges_constraints() {
        let mut m = two_node();
        m.fix(1, DofMask([true, false, false, false, false, false]));
        m.fix(1, DofMask([false, false, true, false, false, false]));
        let f = m.fixity();
        assert_eq!(f[1].count(), 2);
        assert_eq!(m.constrained_dof_count(), 8);
    }

    #[test]
    fn load_vector_layout() {
        let mut m = two_node();
        m.load(1, [1.0, 2.0, 3.0], [4.0, 5.0, 6.0]);
        m.load(1, [1.0, 0.0, 0.0], [0.0; 3]);
        let f = m.load_vector();
        assert_eq!(&f[6..12], &[2.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let g = m.with_scaled_loads(-2.0).load_vector();
        assert_eq!(g[6], -4.0);
    }
}
