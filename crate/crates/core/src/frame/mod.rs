//! Linear-elastic space-frame solver (direct stiffness method).
//!
//! Supports are applied by eliminating constrained rows and columns, so
//! constrained DOFs come back as exact zeros. Systems with fewer than
//! [`DENSE_LIMIT`] free DOFs use a dense Cholesky factorization; larger ones
//! use a skyline Cholesky over the node-ordered profile.

pub mod element;
pub mod factor;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{cross, norm_slice, Vec3};
use crate::model::{Dof, FrameModel, DOFS_PER_NODE};
use factor::{DenseCholesky, DenseMatrix, PivotFailure, SkylineCholesky, SkylineMatrix};

pub const DENSE_LIMIT: usize = 300;

/// A solve whose relative residual exceeds this is reported as a numeric
/// failure.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone)]
enum Factor {
    Dense(DenseCholesky),
    Skyline(SkylineCholesky),
}

/// Reduced (constraint-eliminated) stiffness operator and its factorization.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    /// Global DOF index for each free DOF, ascending.
    free: Vec<usize>,
    operator: SkylineMatrix,
    factor: Option<Factor>,
}

impl AssembledSystem {
    pub fn free_dofs(&self) -> &[usize] {
        &self.free
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.factor, Some(Factor::Dense(_)))
    }

    /// Reduced operator as a dense matrix (for inspection and tests).
    pub fn reduced_dense(&self) -> DenseMatrix {
        self.operator.to_dense()
    }

    /// Solves the reduced system for a reduced right-hand side.
    pub fn solve_reduced(&self, rhs: &[f64]) -> Vec<f64> {
        match &self.factor {
            None => Vec::new(),
            Some(Factor::Dense(f)) => f.solve(rhs),
            Some(Factor::Skyline(f)) => f.solve(rhs),
        }
    }
}

/// Builds and factors the constrained stiffness operator.
///
/// Fails with [`Error::Singular`] when the supports leave a rigid-body mode
/// or mechanism.
pub fn assemble(model: &FrameModel) -> Result<AssembledSystem> {
    model.validate()?;
    let ndof = model.dof_count();
    let fixity = model.fixity();

    let mut map = vec![usize::MAX; ndof];
    let mut free = Vec::new();
    for (node, mask) in fixity.iter().enumerate() {
        for d in Dof::ALL {
            if !mask.is_fixed(d) {
                let g = node * DOFS_PER_NODE + d.index();
                map[g] = free.len();
                free.push(g);
            }
        }
    }
    let nf = free.len();

    let mut first: Vec<usize> = (0..nf).collect();
    for e in &model.elements {
        let dofs = element_dofs(e.node_a, e.node_b);
        let lo = dofs.iter().filter_map(|&g| reduced(&map, g)).min();
        if let Some(lo) = lo {
            for &g in &dofs {
                if let Some(r) = reduced(&map, g) {
                    first[r] = first[r].min(lo);
                }
            }
        }
    }

    let mut op = SkylineMatrix::with_profile(first);
    for e in &model.elements {
        let k = element::global_stiffness(model, e)?;
        let dofs = element_dofs(e.node_a, e.node_b);
        for (a, &ga) in dofs.iter().enumerate() {
            let Some(ra) = reduced(&map, ga) else { continue };
            for (b, &gb) in dofs.iter().enumerate() {
                let Some(rb) = reduced(&map, gb) else { continue };
                if ra <= rb {
                    op.add(ra, rb, k[a][b]);
                }
            }
        }
    }

    let singular = |p: PivotFailure| {
        let g = free[p.column];
        Error::Singular {
            dof: p.column,
            node: g / DOFS_PER_NODE,
            component: Dof::ALL[g % DOFS_PER_NODE].name(),
            pivot: p.pivot,
        }
    };
    let factor = if nf == 0 {
        None
    } else if nf < DENSE_LIMIT {
        Some(Factor::Dense(op.to_dense().cholesky().map_err(singular)?))
    } else {
        Some(Factor::Skyline(op.clone().cholesky().map_err(singular)?))
    };

    Ok(AssembledSystem {
        free,
        operator: op,
        factor,
    })
}

fn reduced(map: &[usize], g: usize) -> Option<usize> {
    let r = map[g];
    (r != usize::MAX).then_some(r)
}

fn element_dofs(a: usize, b: usize) -> [usize; 12] {
    let mut d = [0; 12];
    for k in 0..6 {
        d[k] = a * DOFS_PER_NODE + k;
        d[6 + k] = b * DOFS_PER_NODE + k;
    }
    d
}

/// Displacement and member-force solution of a [`FrameModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub translations: Vec<Vec3>,
    pub rotations: Vec<Vec3>,
    /// Local end forces `[N, Vy, Vz, T, My, Mz]` at node a and node b.
    pub member_end_forces: Vec<[[f64; 6]; 2]>,
    pub member_peak_stress: Vec<f64>,
    /// Support reactions per node (zero where nothing is fixed).
    pub reactions: Vec<[f64; 6]>,
    /// `|K u - f| / |f|` over the free DOFs.
    pub relative_residual: f64,
}

impl SolveResult {
    /// Displacement vector in global DOF order.
    pub fn displacement_vector(&self) -> Vec<f64> {
        let mut u = Vec::with_capacity(self.translations.len() * 6);
        for (t, r) in self.translations.iter().zip(&self.rotations) {
            u.extend_from_slice(t);
            u.extend_from_slice(r);
        }
        u
    }

    /// Member mean of the peak fiber stress. This is a proxy for an
    /// "average stress" field, not a volume average.
    pub fn mean_peak_stress(&self) -> f64 {
        if self.member_peak_stress.is_empty() {
            return 0.0;
        }
        self.member_peak_stress.iter().sum::<f64>() / self.member_peak_stress.len() as f64
    }

    /// Net force and moment (about the origin) of applied loads plus
    /// reactions. Zero for an equilibrated solution.
    pub fn resultant(&self, model: &FrameModel) -> (Vec3, Vec3) {
        let mut f = [0.0; 3];
        let mut m = [0.0; 3];
        let mut acc = |node: usize, force: Vec3, moment: Vec3| {
            let arm = cross(model.nodes[node], force);
            for k in 0..3 {
                f[k] += force[k];
                m[k] += moment[k] + arm[k];
            }
        };
        for l in &model.loads {
            acc(l.node, l.force, l.moment);
        }
        for (node, r) in self.reactions.iter().enumerate() {
            acc(node, [r[0], r[1], r[2]], [r[3], r[4], r[5]]);
        }
        (f, m)
    }
}

/// Solves `K u = f` for the model's loads.
pub fn solve(model: &FrameModel) -> Result<SolveResult> {
    let sys = assemble(model)?;
    solve_with(model, &sys)
}

/// Solves with an already assembled system (the loads may differ from the
/// ones present at assembly time; the structure must not).
pub fn solve_with(model: &FrameModel, sys: &AssembledSystem) -> Result<SolveResult> {
    let f = model.load_vector();
    let rhs: Vec<f64> = sys.free.iter().map(|&g| f[g]).collect();
    let uf = sys.solve_reduced(&rhs);
    let mut u = vec![0.0; model.dof_count()];
    for (&g, v) in sys.free.iter().zip(uf) {
        u[g] = v;
    }

    // internal nodal forces K u, element by element
    let mut p = vec![0.0; model.dof_count()];
    let mut end_forces = Vec::with_capacity(model.elements.len());
    let mut peak = Vec::with_capacity(model.elements.len());
    for e in &model.elements {
        let k = element::global_stiffness(model, e)?;
        let ue = element::gather(e, &u);
        let dofs = element_dofs(e.node_a, e.node_b);
        for i in 0..12 {
            p[dofs[i]] += (0..12).map(|j| k[i][j] * ue[j]).sum::<f64>();
        }
        let fl = element::end_forces(model, e, &u)?;
        peak.push(element::peak_fiber_stress(e, &fl));
        let mut pair = [[0.0; 6]; 2];
        pair[0].copy_from_slice(&fl[..6]);
        pair[1].copy_from_slice(&fl[6..]);
        end_forces.push(pair);
    }

    let resid: Vec<f64> = sys.free.iter().map(|&g| p[g] - f[g]).collect();
    let fnorm = norm_slice(&rhs);
    let pnorm = norm_slice(&sys.free.iter().map(|&g| p[g]).collect::<Vec<_>>());
    let rnorm = norm_slice(&resid);
    let relative_residual = if fnorm > 0.0 {
        rnorm / fnorm
    } else if pnorm > 0.0 {
        rnorm / pnorm
    } else {
        0.0
    };
    if !(relative_residual <= RESIDUAL_LIMIT) {
        return Err(Error::Numeric(format!(
            "relative residual {relative_residual:e} exceeds {RESIDUAL_LIMIT:e}"
        )));
    }

    let fixity = model.fixity();
    let n = model.nodes.len();
    let mut reactions = vec![[0.0; 6]; n];
    for (node, mask) in fixity.iter().enumerate() {
        for d in Dof::ALL {
            if mask.is_fixed(d) {
                let g = node * DOFS_PER_NODE + d.index();
                reactions[node][d.index()] = p[g] - f[g];
            }
        }
    }

    Ok(SolveResult {
        translations: (0..n).map(|i| [u[6 * i], u[6 * i + 1], u[6 * i + 2]]).collect(),
        rotations: (0..n).map(|i| [u[6 * i + 3], u[6 * i + 4], u[6 * i + 5]]).collect(),
        member_end_forces: end_forces,
        member_peak_stress: peak,
        reactions,
        relative_residual,
    })
}

/// Relative tolerance used by [`linearity_check`].
pub const LINEARITY_TOL: f64 = 1e-9;

/// True when scaling every load by `scale` scales the displacement field by
/// the same factor (to [`LINEARITY_TOL`] relative to the base field).
pub fn linearity_check(model: &FrameModel, scale: f64) -> Result<bool> {
    if !scale.is_finite() {
        return Err(Error::domain(format!("scale must be finite, got {scale}")));
    }
    let sys = assemble(model)?;
    let base = solve_with(model, &sys)?.displacement_vector();
    let scaled = solve_with(&model.with_scaled_loads(scale), &sys)?.displacement_vector();
    let reference = norm_slice(&base) * scale.abs();
    let diff = norm_slice(
        &base
            .iter()
            .zip(&scaled)
            .map(|(b, s)| s - scale * b)
            .collect::<Vec<_>>(),
    );
    Ok(if reference > 0.0 {
        diff <= LINEARITY_TOL * reference
    } else {
        diff == 0.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::Material;
    use crate::model::DofMask;
    use crate::section::SectionProps;

    fn cantilever(len: f64, segments: usize) -> FrameModel {
        let mut m = FrameModel::new();
        let mat = m.add_material(Material::pa6());
        let s = SectionProps::thin_rectangle(25.0, 1.0).unwrap();
        for i in 0..=segments {
            m.add_node([len * i as f64 / segments as f64, 0.0, 0.0]);
        }
        for i in 0..segments {
            m.add_element(i, i + 1, s, mat, [0.0, 1.0, 0.0]);
        }
        m.fix(0, DofMask::FIXED);
        m
    }

    #[test]
    fn both_ends_fixed_has_no_free_dofs() {
        let mut m = cantilever(10.0, 1);
        m.fix(1, DofMask::FIXED);
        m.load(1, [1.0, 0.0, 0.0], [0.0; 3]);
        let sys = assemble(&m).unwrap();
        assert_eq!(sys.free_count(), 0);
        let r = solve(&m).unwrap();
        assert_eq!(r.translations[1], [0.0; 3]);
    }

    #[test]
    fn cantilever_operator_is_6x6_pd() {
        let m = cantilever(10.0, 1);
        let sys = assemble(&m).unwrap();
        assert_eq!(sys.free_count(), 6);
        let k = sys.reduced_dense();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(k.get(i, j), k.get(j, i));
            }
        }
        assert!(k.cholesky().is_ok());
    }

    #[test]
    fn free_floating_is_singular() {
        let mut m = cantilever(10.0, 2);
        m.constraints.clear();
        assert!(matches!(assemble(&m), Err(Error::Singular { .. })));
    }

    #[test]
    fn mechanism_is_singular() {
        // pinned support leaves the bar free to spin about its own axis
        let mut m = cantilever(10.0, 2);
        m.constraints.clear();
        m.fix(0, DofMask::PINNED);
        m.fix(2, DofMask([false, true, true, false, false, false]));
        let err = assemble(&m).unwrap_err();
        assert!(matches!(err, Error::Singular { component: "rx", .. }), "{err:?}");
    }

    #[test]
    fn skyline_path_matches_dense_path() {
        // 60 segments -> 360 free dofs, above the dense limit
        let mut m = cantilever(100.0, 60);
        m.load(60, [0.3, -0.2, 0.1], [0.5, 0.2, -0.1]);
        let sys = assemble(&m).unwrap();
        assert!(!sys.is_dense());
        let big = solve(&m).unwrap();
        let mut small = cantilever(100.0, 1);
        small.load(1, [0.3, -0.2, 0.1], [0.5, 0.2, -0.1]);
        let small = solve(&small).unwrap();
        for k in 0..3 {
            let (a, b) = (big.translations[60][k], small.translations[1][k]);
            assert!((a - b).abs() <= 1e-8 * b.abs().max(1e-12), "{a} {b}");
        }
    }

    #[test]
    fn zero_scale_gives_zero_field() {
        let mut m = cantilever(10.0, 3);
        m.load(3, [0.0, 0.0, 1.0], [0.0; 3]);
        let r = solve(&m.with_scaled_loads(0.0)).unwrap();
        assert!(r.displacement_vector().iter().all(|v| *v == 0.0));
        assert!(linearity_check(&m, 0.0).unwrap());
        assert!(linearity_check(&m, 2.0).unwrap());
    }
}
