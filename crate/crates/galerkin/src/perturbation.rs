//! The Galerkin pencil along the compatible family `g_ε`, the eigenvalue
//! curves of the `λ₀` cluster, and first-order (degenerate) perturbation
//! theory for them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use beltrami_contact::{variation_pairing, ContactForm, MetricFamily, OneForm};

use crate::basis::{build_basis, FormBasis};
use crate::error::{GalerkinError, Result};
use crate::exterior::assemble_exterior;
use crate::mass::{family_mass, family_mass_derivative};
use crate::pencil::{inv_sqrt_spd, solve_pencil, sqrt_spd, submatrix, EigenCluster, GalerkinPencil};
use crate::pimap::OperatorFamily;

/// Default finite-difference step for eigenvalue slopes.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Basis, exterior matrix and metric family bundled for repeated solves.
#[derive(Debug, Clone)]
pub struct PerturbationProblem {
    pub basis: FormBasis,
    pub b: DMatrix<f64>,
    pub form: ContactForm,
    pub family: MetricFamily,
    pub blocks: Vec<Vec<usize>>,
}

impl PerturbationProblem {
    /// The block structure is taken from `M` at `ε = 1e-3`, which carries
    /// every coupling present anywhere on the family.
    pub fn new(form: &ContactForm, family: &MetricFamily, k: u32) -> Result<Self> {
        let basis = build_basis(k);
        let b = assemble_exterior(&basis);
        let m = family_mass(family, 1e-3, &basis)?;
        let blocks = crate::pencil::coupling_blocks(&b, &m);
        Ok(PerturbationProblem { basis, b, form: form.clone(), family: family.clone(), blocks })
    }

    pub fn pencil(&self, epsilon: f64) -> Result<GalerkinPencil> {
        let m = family_mass(&self.family, epsilon, &self.basis)?;
        Ok(GalerkinPencil::with_blocks(self.b.clone(), m, self.blocks.clone()))
    }

    pub fn mass_derivative(&self, epsilon: f64) -> Result<DMatrix<f64>> {
        family_mass_derivative(&self.family, epsilon, &self.basis)
    }

    pub fn cluster(&self, epsilon: f64, window: (f64, f64)) -> Result<EigenCluster> {
        solve_pencil(&self.pencil(epsilon)?, window)
    }

    /// Coordinates of `α`; always present since `α` has `|k| = 1`.
    pub fn alpha_vector(&self) -> DVector<f64> {
        self.vector_of(&self.form.alpha).expect("α lies in every truncation K ≥ 1")
    }

    pub fn vector_of(&self, form: &OneForm) -> Result<DVector<f64>> {
        self.basis
            .coordinates(form)
            .ok_or_else(|| GalerkinError::Invalid(format!("form has modes beyond truncation {}", self.basis.truncation)))
    }

    /// Whether `K ≥ 1 + deg h`.
    pub fn truncation_exact(&self) -> bool {
        self.basis.truncation > self.family.variation.h.degree()
    }

    /// Indices of the blocks touched by a set of vectors.
    pub fn support_blocks(&self, vectors: &[DVector<f64>]) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .blocks
            .iter()
            .filter(|blk| blk.iter().any(|&i| vectors.iter().any(|v| v[i] != 0.0)))
            .flatten()
            .copied()
            .collect();
        idx.sort_unstable();
        idx
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplittingCurves {
    pub truncation: u32,
    pub truncation_exact: bool,
    pub window: (f64, f64),
    pub lambda0: f64,
    pub epsilons: Vec<f64>,
    /// Sorted cluster eigenvalues at each `ε`.
    pub curves: Vec<Vec<f64>>,
    /// `αᵀBα / αᵀM(ε)α`.
    pub alpha_rayleigh: Vec<f64>,
    /// `‖Bα − λ₀ M(ε) α‖ / ‖M(ε) α‖`.
    pub alpha_residual: Vec<f64>,
}

impl SplittingCurves {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.curves.iter().map(Vec::len).collect()
    }

    /// `max λ − min λ` at each `ε`.
    pub fn spread(&self) -> Vec<f64> {
        self.curves.iter().map(|c| c.last().copied().unwrap_or(0.0) - c.first().copied().unwrap_or(0.0)).collect()
    }

    /// Least-squares slope of the spread against `|ε|` through the origin,
    /// and the smallest ratio `spread / |ε|` over `ε ≠ 0`.
    pub fn spread_fit(&self) -> (f64, f64) {
        let sp = self.spread();
        let (mut num, mut den, mut min_ratio) = (0.0, 0.0, f64::INFINITY);
        for (e, s) in self.epsilons.iter().zip(&sp) {
            if *e == 0.0 {
                continue;
            }
            num += e.abs() * s;
            den += e * e;
            min_ratio = min_ratio.min(s / e.abs());
        }
        (if den > 0.0 { num / den } else { 0.0 }, min_ratio)
    }

    /// Per sorted index, the least-squares slope of `λ_i(ε) − λ₀` through
    /// the origin over `ε > 0`.
    pub fn positive_slopes(&self) -> Vec<f64> {
        let k = self.curves.iter().map(Vec::len).max().unwrap_or(0);
        (0..k)
            .map(|i| {
                let (mut num, mut den) = (0.0, 0.0);
                for (e, c) in self.epsilons.iter().zip(&self.curves) {
                    if *e > 0.0 && c.len() == k {
                        num += e * (c[i] - self.lambda0);
                        den += e * e;
                    }
                }
                if den > 0.0 {
                    num / den
                } else {
                    f64::NAN
                }
            })
            .collect()
    }

    pub fn alpha_drift(&self) -> f64 {
        self.alpha_rayleigh.iter().map(|r| (r - self.lambda0).abs()).fold(0.0, f64::max)
    }

    /// Header `epsilon,lambda_1,...,lambda_k`; missing values are left empty.
    pub fn to_csv(&self) -> String {
        let k = self.curves.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::from("epsilon");
        for i in 1..=k {
            out.push_str(&format!(",lambda_{i}"));
        }
        out.push('\n');
        for (e, c) in self.epsilons.iter().zip(&self.curves) {
            out.push_str(&format!("{e:e}"));
            for i in 0..k {
                match c.get(i) {
                    Some(v) => out.push_str(&format!(",{v:.17e}")),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

pub fn track_splitting(problem: &PerturbationProblem, epsilons: &[f64], window: (f64, f64)) -> Result<SplittingCurves> {
    let alpha = problem.alpha_vector();
    let lambda0 = problem.form.lambda0;
    let rows: Vec<Result<(Vec<f64>, f64, f64)>> = epsilons
        .par_iter()
        .map(|&e| {
            let pencil = problem.pencil(e)?;
            let c = solve_pencil(&pencil, window)?;
            Ok((c.eigenvalues, pencil.rayleigh(&alpha), pencil.residual(&alpha, lambda0)))
        })
        .collect();
    let mut curves = Vec::new();
    let mut alpha_rayleigh = Vec::new();
    let mut alpha_residual = Vec::new();
    for r in rows {
        let (c, ray, res) = r?;
        curves.push(c);
        alpha_rayleigh.push(ray);
        alpha_residual.push(res);
    }
    Ok(SplittingCurves {
        truncation: problem.basis.truncation,
        truncation_exact: problem.truncation_exact(),
        window,
        lambda0,
        epsilons: epsilons.to_vec(),
        curves,
        alpha_rayleigh,
        alpha_residual,
    })
}

/// Central differences of sorted cluster eigenvalues. For slope `s_i` the
/// `i`-th smallest eigenvalue at `+h` pairs with the `i`-th largest at `−h`.
fn central_slopes(problem: &PerturbationProblem, window: (f64, f64), h: f64) -> Result<Vec<f64>> {
    let plus = problem.cluster(h, window)?.eigenvalues;
    let minus = problem.cluster(-h, window)?.eigenvalues;
    if plus.len() != minus.len() {
        return Err(GalerkinError::Invalid(format!("cluster size changes between ±{h}: {} vs {}", plus.len(), minus.len())));
    }
    let k = plus.len();
    Ok((0..k).map(|i| (plus[i] - minus[k - 1 - i]) / (2.0 * h)).collect())
}

/// Sorted slopes `dλ_i/dε` at `ε = 0`, Richardson-extrapolated as
/// `2 D(h/2) − D(h)` (degenerate groups carry an `O(h)` pairing error).
pub fn finite_difference_slopes(problem: &PerturbationProblem, window: (f64, f64), h: f64) -> Result<Vec<f64>> {
    let coarse = central_slopes(problem, window, h)?;
    let fine = central_slopes(problem, window, 0.5 * h)?;
    Ok(fine.iter().zip(&coarse).map(|(f, c)| 2.0 * f - c).collect())
}

/// `Π = −λ Uᵀ M′ U` for an `M₀`-orthonormal frame `U`.
pub fn pencil_first_order(frame: &DMatrix<f64>, m_dot: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let mut p = frame.transpose() * m_dot * frame * (-lambda);
    let t = p.transpose();
    p = (p + t) * 0.5;
    p
}

/// `Π_ij = variation_pairing(u_i, u_j, h, g, λ)` by grid quadrature of the
/// frame's 1-forms.
pub fn pairing_first_order(problem: &PerturbationProblem, frame: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let forms: Vec<OneForm> = frame.column_iter().map(|c| problem.basis.to_form(&c.into_owned())).collect();
    let h = &problem.family.variation.h;
    let g = &problem.family.base;
    let k = forms.len();
    let mut p = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = variation_pairing(&forms[i], &forms[j], h, g, lambda);
            p[(i, j)] = v;
            p[(j, i)] = v;
        }
    }
    p
}

/// `M`-orthonormal frame of the cluster starting with the given vectors
/// (Gram–Schmidt, then the cluster eigenvectors fill the rest).
pub fn leading_frame(cluster: &EigenCluster, m: &DMatrix<f64>, leading: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let k = cluster.multiplicity();
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(k);
    for v in leading.iter().chain(cluster.vectors.iter()) {
        if cols.len() == k {
            break;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dot(&(m * &w));
                w -= c * proj;
            }
        }
        let n2 = w.dot(&(m * &w));
        let scale = v.dot(&(m * v));
        if n2 > 1e-16 * scale {
            cols.push(w / n2.sqrt());
        }
    }
    if cols.len() != k {
        return Err(GalerkinError::Invalid("leading vectors are not in the cluster span".into()));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Distance of a vector from the cluster span in the `M` norm, relative.
pub fn cluster_defect(cluster: &EigenCluster, m: &DMatrix<f64>, u: &DVector<f64>) -> f64 {
    let f = cluster.frame();
    let c = f.transpose() * (m * u);
    let r = u - &f * c;
    (r.dot(&(m * &r)) / u.dot(&(m * u))).sqrt()
}

/// First-order data at `ε = 0`: the cluster, `M′(0)`, and the frame
/// `(α, β, rest)`.
#[derive(Debug, Clone)]
pub struct FirstOrder {
    pub lambda0: f64,
    pub cluster: EigenCluster,
    pub m0: DMatrix<f64>,
    pub m_dot: DMatrix<f64>,
    pub frame: DMatrix<f64>,
    pub pi_pencil: DMatrix<f64>,
    pub pi_pairing: DMatrix<f64>,
}

impl FirstOrder {
    pub fn new(problem: &PerturbationProblem, window: (f64, f64)) -> Result<Self> {
        let lambda0 = problem.form.lambda0;
        let pencil = problem.pencil(0.0)?;
        let cluster = solve_pencil(&pencil, window)?;
        let m_dot = problem.mass_derivative(0.0)?;
        let alpha = problem.alpha_vector();
        let beta = problem.vector_of(&problem.family.beta)?;
        let frame = leading_frame(&cluster, &pencil.m, &[alpha, beta])?;
        let pi_pencil = pencil_first_order(&frame, &m_dot, lambda0);
        let pi_pairing = pairing_first_order(problem, &frame, lambda0);
        Ok(FirstOrder { lambda0, cluster, m0: pencil.m, m_dot, frame, pi_pencil, pi_pairing })
    }

    pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
        let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `π′` through the symmetric operator `A(ε) = M^{-1/2} B M^{-1/2}`:
    /// `Yᵀ A′ Y` with `Y = M₀^{1/2} U` on the blocks carrying the frame.
    pub fn operator_first_order(&self, problem: &PerturbationProblem) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.frame.column_iter().map(|c| c.into_owned()).collect();
        let idx = problem.support_blocks(&cols);
        let m0 = submatrix(&self.m0, &idx);
        let md = submatrix(&self.m_dot, &idx);
        let b = submatrix(&problem.b, &idx);
        let da = operator_derivative(&m0, &md, &b);
        let u = DMatrix::from_fn(idx.len(), self.frame.ncols(), |r, c| self.frame[(idx[r], c)]);
        let y = sqrt_spd(&m0) * u;
        crate::pimap::pi_derivative(&da, &y)
    }
}

/// `d/dε (X B X)` with `X = M^{-1/2}`, using the divided differences of
/// `t ↦ t^{-1/2}` on the eigenvalues of `M`.
pub fn operator_derivative(m: &DMatrix<f64>, m_dot: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let q = &eig.eigenvectors;
    let r = eig.eigenvalues.map(|l| l.max(crate::pencil::EIGENVALUE_FLOOR).sqrt());
    let c = q.transpose() * m_dot * q;
    let xd_e = DMatrix::from_fn(c.nrows(), c.ncols(), |i, j| -c[(i, j)] / (r[i] * r[j] * (r[i] + r[j])));
    let xd = q * xd_e * q.transpose();
    let x = inv_sqrt_spd(m);
    let mut d = &xd * b * &x + &x * b * &xd;
    let t = d.transpose();
    d = (d + t) * 0.5;
    d
}

/// The three first-order rates for one cluster direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HellmannFeynman {
    /// Richardson-extrapolated slope of the matching eigenvalue curve.
    pub finite_difference: f64,
    /// `−λ uᵀ M′ u / uᵀ M u`.
    pub pencil_formula: f64,
    /// `variation_pairing(u, u, h, g, λ) / uᵀ M u`.
    pub pairing: f64,
}

impl HellmannFeynman {
    pub fn max_relative_disagreement(&self, scale: f64) -> f64 {
        let v = [self.finite_difference, self.pencil_formula, self.pairing];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                let s = v[i].abs().max(v[j].abs()).max(scale);
                worst = worst.max((v[i] - v[j]).abs() / s);
            }
        }
        worst
    }
}

/// Residual tolerance for `u` to count as a direction diagonalizing `Π`.
pub const ADAPTED_TOL: f64 = 1e-8;

pub fn hellmann_feynman(
    problem: &PerturbationProblem,
    first: &FirstOrder,
    u: &DVector<f64>,
    window: (f64, f64),
    step: f64,
) -> Result<HellmannFeynman> {
    let lambda = first.lambda0;
    let norm2 = u.dot(&(&first.m0 * u));
    let defect = cluster_defect(&first.cluster, &first.m0, u);
    if defect > 1e-8 {
        return Err(GalerkinError::Invalid(format!("vector is not in the λ₀ cluster (relative defect {defect:e})")));
    }
    let pencil_formula = -lambda * u.dot(&(&first.m_dot * u)) / norm2;
    let form = problem.basis.to_form(u);
    let pairing = variation_pairing(&form, &form, &problem.family.variation.h, &problem.family.base, lambda) / norm2;

    // Adaptedness: the cluster coordinates of u must be an eigenvector of Π.
    let f = first.cluster.frame();
    let pi = pencil_first_order(&f, &first.m_dot, lambda);
    let c = f.transpose() * (&first.m0 * u) / norm2.sqrt();
    let mu = c.dot(&(&pi * &c));
    let scale = pi.amax().max(f64::MIN_POSITIVE);
    let residual = (&pi * &c - &c * mu).norm() / scale;
    if residual > ADAPTED_TOL {
        return Err(GalerkinError::DegenerateDirection { residual });
    }
    let slopes = finite_difference_slopes(problem, window, step)?;
    let sorted = FirstOrder::sorted_eigenvalues(&pi);
    let pos = (0..sorted.len())
        .min_by(|&a, &b| (sorted[a] - mu).abs().total_cmp(&(sorted[b] - mu).abs()))
        .ok_or_else(|| GalerkinError::Invalid("empty cluster".into()))?;
    Ok(HellmannFeynman { finite_difference: slopes[pos], pencil_formula, pairing })
}

/// The symmetric operator family `ε ↦ M(ε)^{-1/2} B M(ε)^{-1/2}` restricted
/// to a set of basis indices closed under coupling.
pub struct GalerkinFamily<'a> {
    pub problem: &'a PerturbationProblem,
    pub indices: Vec<usize>,
}

impl OperatorFamily for GalerkinFamily<'_> {
    fn operator(&self, t: f64) -> DMatrix<f64> {
        let m = family_mass(&self.problem.family, t, &self.problem.basis).expect("family member is positive definite");
        let x = inv_sqrt_spd(&submatrix(&m, &self.indices));
        let mut a = &x * submatrix(&self.problem.b, &self.indices) * &x;
        let tr = a.transpose();
        a = (a + tr) * 0.5;
        a
    }

    fn derivative(&self, t: f64) -> DMatrix<f64> {
        let m = family_mass(&self.problem.family, t, &self.problem.basis).expect("family member is positive definite");
        let md = self.problem.mass_derivative(t).expect("family member is positive definite");
        operator_derivative(&submatrix(&m, &self.indices), &submatrix(&md, &self.indices), &submatrix(&self.problem.b, &self.indices))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use beltrami_contact::{metric_family, standard_beta, std_contact_t3};

    fn problem(k: u32) -> PerturbationProblem {
        let (form, g) = std_contact_t3();
        let fam = metric_family(&form, &g, &standard_beta(), &[]).unwrap();
        PerturbationProblem::new(&form, &fam, k).unwrap()
    }

    #[test]
    fn alpha_is_an_exact_eigenvector_along_the_family() {
        let p = problem(1);
        let alpha = p.alpha_vector();
        for e in [-0.2, 0.1] {
            let pencil = p.pencil(e).unwrap();
            assert!(pencil.residual(&alpha, 1.0) < 1e-12);
        }
    }

    #[test]
    fn frame_starts_with_alpha_and_beta() {
        let p = problem(1);
        let fo = FirstOrder::new(&p, crate::pencil::UNIT_WINDOW).unwrap();
        let g = fo.frame.transpose() * &fo.m0 * &fo.frame;
        assert!((g - DMatrix::identity(6, 6)).amax() < 1e-12);
        assert!(fo.pi_pencil.row(0).amax() < 1e-15);
        assert!(fo.pi_pencil[(1, 1)] > 0.0);
    }

    #[test]
    fn derivative_of_operator_matches_pencil_formula() {
        let p = problem(1);
        let fo = FirstOrder::new(&p, crate::pencil::UNIT_WINDOW).unwrap();
        let via_operator = fo.operator_first_order(&p);
        assert!((via_operator - &fo.pi_pencil).amax() < 1e-12 * fo.pi_pencil.amax().max(1e-3));
    }
}
