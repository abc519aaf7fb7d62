//! The generalized symmetric problem `B u = λ M u`, solved through the
//! congruent standard problem `M^{-1/2} B M^{-1/2} y = λ y` on each
//! connected block of the coupling graph of `(B, M)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{GalerkinError, Result};

/// Eigenvalues of `M` are clamped from below before taking `M^{±1/2}`.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

/// Window isolating the unit eigenvalue from `0` and `√2`.
pub const UNIT_WINDOW: (f64, f64) = (0.8, 1.2);

/// Eigenvalues closer than this to a window endpoint are rejected.
pub const WINDOW_MARGIN: f64 = 1e-8;

/// Entries of `M` below this fraction of its largest entry do not couple.
const COUPLING_TOL: f64 = 1e-14;

fn spd_power(m: &DMatrix<f64>, power: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let d = eig.eigenvalues.map(|l| l.max(EIGENVALUE_FLOOR).powf(power));
    let q = &eig.eigenvectors;
    let mut out = q * DMatrix::from_diagonal(&d) * q.transpose();
    let t = out.transpose();
    out = (out + t) * 0.5;
    out
}

/// `M^{-1/2}` by eigendecomposition.
pub fn inv_sqrt_spd(m: &DMatrix<f64>) -> DMatrix<f64> {
    spd_power(m, -0.5)
}

/// `M^{1/2}` by eigendecomposition.
pub fn sqrt_spd(m: &DMatrix<f64>) -> DMatrix<f64> {
    spd_power(m, 0.5)
}

pub fn submatrix(a: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])])
}

/// Connected components of the graph with an edge wherever `B` or `M` is
/// nonzero, each sorted, ordered by smallest index.
pub fn coupling_blocks(b: &DMatrix<f64>, m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let d = b.nrows();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let tol = COUPLING_TOL * m.amax();
    for j in 0..d {
        for i in 0..j {
            if b[(i, j)] != 0.0 || m[(i, j)].abs() > tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..d {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

#[derive(Debug, Clone)]
pub struct GalerkinPencil {
    pub b: DMatrix<f64>,
    pub m: DMatrix<f64>,
    pub blocks: Vec<Vec<usize>>,
}

/// One generalized eigenpair with `uᵀ M u = 1`.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DVector<f64>,
}

impl GalerkinPencil {
    pub fn new(b: DMatrix<f64>, m: DMatrix<f64>) -> Self {
        let blocks = coupling_blocks(&b, &m);
        GalerkinPencil { b, m, blocks }
    }

    /// Reuses a known block structure, e.g. along a family with fixed sparsity.
    pub fn with_blocks(b: DMatrix<f64>, m: DMatrix<f64>, blocks: Vec<Vec<usize>>) -> Self {
        GalerkinPencil { b, m, blocks }
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }

    /// The symmetric standard operator `M^{-1/2} B M^{-1/2}` restricted to
    /// the given indices.
    pub fn standard_operator(&self, idx: &[usize]) -> (DMatrix<f64>, DMatrix<f64>) {
        let x = inv_sqrt_spd(&submatrix(&self.m, idx));
        let mut a = &x * submatrix(&self.b, idx) * &x;
        let t = a.transpose();
        a = (a + t) * 0.5;
        (a, x)
    }

    fn block_pairs(&self, idx: &[usize]) -> Vec<EigenPair> {
        let (a, x) = self.standard_operator(idx);
        let eig = SymmetricEigen::new(a);
        (0..idx.len())
            .map(|c| {
                let u = &x * eig.eigenvectors.column(c);
                let mut full = DVector::zeros(self.dim());
                for (r, &i) in idx.iter().enumerate() {
                    full[i] = u[r];
                }
                EigenPair { value: eig.eigenvalues[c], vector: full }
            })
            .collect()
    }

    /// All eigenpairs sorted by eigenvalue.
    pub fn eigenpairs(&self) -> Vec<EigenPair> {
        let mut all: Vec<EigenPair> = self.blocks.iter().flat_map(|blk| self.block_pairs(blk)).collect();
        all.sort_by(|a, b| a.value.total_cmp(&b.value));
        all
    }

    pub fn spectrum(&self) -> Vec<f64> {
        self.eigenpairs().into_iter().map(|p| p.value).collect()
    }

    /// Relative residual `‖B u − λ M u‖ / ‖M u‖`.
    pub fn residual(&self, u: &DVector<f64>, lambda: f64) -> f64 {
        let mu = &self.m * u;
        (&self.b * u - &mu * lambda).norm() / mu.norm()
    }

    pub fn rayleigh(&self, u: &DVector<f64>) -> f64 {
        u.dot(&(&self.b * u)) / u.dot(&(&self.m * u))
    }
}

/// Eigenpairs of a pencil inside an open window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenCluster {
    pub window: (f64, f64),
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<DVector<f64>>,
}

impl EigenCluster {
    pub fn center(&self) -> f64 {
        0.5 * (self.window.0 + self.window.1)
    }

    pub fn radius(&self) -> f64 {
        0.5 * (self.window.1 - self.window.0)
    }

    pub fn multiplicity(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvectors as the columns of a `D × k` matrix.
    pub fn frame(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&self.vectors)
    }
}

pub fn solve_pencil(pencil: &GalerkinPencil, window: (f64, f64)) -> Result<EigenCluster> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(GalerkinError::Invalid(format!("empty window ({lo}, {hi})")));
    }
    let mut eigenvalues = Vec::new();
    let mut vectors = Vec::new();
    for p in pencil.eigenpairs() {
        for end in [lo, hi] {
            let distance = (p.value - end).abs();
            if distance < WINDOW_MARGIN {
                return Err(GalerkinError::WindowTouchesSpectrum { eigenvalue: p.value, endpoint: end, distance });
            }
        }
        if p.value > lo && p.value < hi {
            eigenvalues.push(p.value);
            vectors.push(p.vector);
        }
    }
    Ok(EigenCluster { window, eigenvalues, vectors })
}
