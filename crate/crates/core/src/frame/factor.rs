//! Symmetric positive definite factorizations for the reduced stiffness
//! operator: a skyline (profile) Cholesky for banded frame models and a
//! dense Cholesky for small systems.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;

/// Pivots below `PIVOT_TOL` times the original diagonal entry are treated as
/// a loss of definiteness (a mechanism or unrestrained rigid-body mode).
pub const PIVOT_TOL: f64 = 1e-12;

/// Index of the failing column and its pivot value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotFailure {
    pub column: usize,
    pub pivot: f64,
}

/// Symmetric matrix stored by columns from the first structurally nonzero
/// row down to the diagonal.
#[derive(Debug, Clone)]
pub struct SkylineMatrix {
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl SkylineMatrix {
    /// `first[j]` is the smallest row index with a nonzero in column `j`.
    pub fn with_profile(first: Vec<usize>) -> Self {
        let mut start = Vec::with_capacity(first.len() + 1);
        let mut acc = 0;
        for (j, &f) in first.iter().enumerate() {
            debug_assert!(f <= j);
            start.push(acc);
            acc += j - f + 1;
        }
        start.push(acc);
        SkylineMatrix {
            first,
            start,
            values: vec![0.0; acc],
        }
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    pub fn stored(&self) -> usize {
        self.values.len()
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i < self.first[j] {
            None
        } else {
            Some(self.start[j] + (i - self.first[j]))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.values[s])
    }

    /// Adds to the symmetric pair `(i, j)` / `(j, i)`. Panics outside the
    /// profile.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j).expect("entry outside skyline profile");
        self.values[s] += v;
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut d = DenseMatrix::zeros(n);
        for j in 0..n {
            for i in self.first[j]..=j {
                let v = self.get(i, j);
                d.set(i, j, v);
                d.set(j, i, v);
            }
        }
        d
    }

    /// In-place `A = U^T U`; the upper factor overwrites the profile.
    pub fn cholesky(mut self) -> Result<SkylineCholesky, PivotFailure> {
        let n = self.dim();
        for j in 0..n {
            let fj = self.first[j];
            for i in fj..j {
                let fi = self.first[i];
                let k0 = fi.max(fj);
                let mut s = self.values[self.start[j] + (i - fj)];
                for k in k0..i {
                    s -= self.values[self.start[i] + (k - fi)] * self.values[self.start[j] + (k - fj)];
                }
                let uii = self.values[self.start[i] + (i - fi)];
                self.values[self.start[j] + (i - fj)] = s / uii;
            }
            let djj = self.values[self.start[j] + (j - fj)];
            let mut d = djj;
            for k in fj..j {
                let u = self.values[self.start[j] + (k - fj)];
                d -= u * u;
            }
            if !(d > PIVOT_TOL * djj.abs()) || !d.is_finite() {
                return Err(PivotFailure { column: j, pivot: d });
            }
            self.values[self.start[j] + (j - fj)] = sqrt(d);
        }
        Ok(SkylineCholesky { u: self })
    }
}

#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    u: SkylineMatrix,
}

impl SkylineCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let u = &self.u;
        let n = u.dim();
        let mut x = b.to_vec();
        // U^T y = b
        for j in 0..n {
            let fj = u.first[j];
            let mut s = x[j];
            for k in fj..j {
                s -= u.values[u.start[j] + (k - fj)] * x[k];
            }
            x[j] = s / u.values[u.start[j] + (j - fj)];
        }
        // U x = y, column sweep
        for j in (0..n).rev() {
            let fj = u.first[j];
            x[j] /= u.values[u.start[j] + (j - fj)];
            let xj = x[j];
            for k in fj..j {
                x[k] -= u.values[u.start[j] + (k - fj)] * xj;
            }
        }
        x
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    a: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, a: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.a[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Lower Cholesky factor `A = L L^T`.
    pub fn cholesky(&self) -> Result<DenseCholesky, PivotFailure> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let ajj = self.get(j, j);
            let mut d = ajj;
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > PIVOT_TOL * ajj.abs()) || !d.is_finite() {
                return Err(PivotFailure { column: j, pivot: d });
            }
            let ljj = sqrt(d);
            l[j * n + j] = ljj;
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(DenseCholesky { n, l })
    }
}

#[derive(Debug, Clone)]
pub struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let l = &self.l;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= l[i * n + k] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // tridiagonal-plus-band SPD matrix with a ragged profile
    fn banded(n: usize, seed: &[f64]) -> SkylineMatrix {
        let first: Vec<usize> = (0..n).map(|j| j.saturating_sub(1 + j % 3)).collect();
        let mut s = SkylineMatrix::with_profile(first.clone());
        for j in 0..n {
            for i in first[j]..j {
                s.add(i, j, -0.3 * seed[(i + j) % seed.len()]);
            }
        }
        for j in 0..n {
            s.add(j, j, 4.0 + seed[j % seed.len()]);
        }
        s
    }

    #[test]
    fn skyline_matches_dense() {
        let seed = [0.2, 0.9, 0.5, 0.7, 0.1];
        let s = banded(17, &seed);
        let d = s.to_dense();
        let b: Vec<f64> = (0..17).map(|i| (i as f64 * 0.37).sin()).collect();
        let xs = s.cholesky().unwrap().solve(&b);
        let xd = d.cholesky().unwrap().solve(&b);
        for (a, c) in xs.iter().zip(&xd) {
            assert!((a - c).abs() < 1e-13);
        }
        let r = d.mul_vec(&xs);
        for (a, c) in r.iter().zip(&b) {
            assert!((a - c).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_is_reported() {
        let mut s = SkylineMatrix::with_profile(vec![0, 0]);
        s.add(0, 0, 1.0);
        s.add(0, 1, 1.0);
        s.add(1, 1, 1.0);
        let err = s.clone().cholesky().unwrap_err();
        assert_eq!(err.column, 1);
        assert!(s.to_dense().cholesky().is_err());
    }

    proptest! {
        #[test]
        fn factorizations_solve(vals in proptest::collection::vec(0.0f64..1.0, 5..12), n in 2usize..30) {
            let s = banded(n, &vals);
            let d = s.to_dense();
            let b: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
            let x = s.cholesky().unwrap().solve(&b);
            let r = d.mul_vec(&x);
            for (a, c) in r.iter().zip(&b) {
                prop_assert!((a - c).abs() <= 1e-11 * c.abs().max(1.0));
            }
        }
    }
}
