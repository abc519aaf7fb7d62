//! `B_ij = ∫ e_i ∧ de_j = ∫ e_i · curl e_j dx`.
//!
//! For `e_j = φ dx_q` the coordinate curl is `∇φ × ê_q`, and only pairs
//! sharing a wave vector survive integration, so every entry is an
//! integer multiple of `4π³`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::basis::{FormBasis, Profile};

/// `(k × ê_q)_p`.
fn cross_unit(k: [i32; 3], q: usize, p: usize) -> i32 {
    let mut e = [0; 3];
    e[q] = 1;
    let c = [k[1] * e[2] - k[2] * e[1], k[2] * e[0] - k[0] * e[2], k[0] * e[1] - k[1] * e[0]];
    c[p]
}

/// Integer coefficients `B / (4π³)`.
pub fn exterior_integers(basis: &FormBasis) -> Vec<(usize, usize, i32)> {
    let mut out = Vec::new();
    for (j, ej) in basis.elements.iter().enumerate() {
        let partner = match ej.profile {
            Profile::Const => continue,
            Profile::Cos => Profile::Sin,
            Profile::Sin => Profile::Cos,
        };
        // curl(cos dx_q) = −sin (k × ê_q), curl(sin dx_q) = cos (k × ê_q)
        let sign = if ej.profile == Profile::Cos { -1 } else { 1 };
        for p in 0..3 {
            let c = sign * cross_unit(ej.k.0, ej.axis, p);
            if c == 0 {
                continue;
            }
            let ei = crate::basis::BasisElement { profile: partner, k: ej.k, axis: p };
            let i = basis.index_of(&ei).expect("partner element exists");
            out.push((i, j, c));
        }
    }
    out
}

pub fn assemble_exterior(basis: &FormBasis) -> DMatrix<f64> {
    let unit = 4.0 * PI.powi(3);
    let mut b = DMatrix::zeros(basis.dim(), basis.dim());
    for (i, j, c) in exterior_integers(basis) {
        b[(i, j)] = f64::from(c) * unit;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use beltrami_contact::{OneForm, TrigPoly};
    use beltrami_core::WaveVector;

    #[test]
    fn exactly_symmetric() {
        let b = assemble_exterior(&build_basis(2));
        assert_eq!(b, b.transpose());
    }

    #[test]
    fn exact_form_column_vanishes() {
        // d(sin x₁) = cos x₁ dx₁
        let basis = build_basis(1);
        let f = OneForm::new([TrigPoly::cos(WaveVector::unit(0), 1.0), TrigPoly::zero(), TrigPoly::zero()]);
        let v = basis.coordinates(&f).unwrap();
        let b = assemble_exterior(&basis);
        assert!((&b * v).amax() == 0.0);
    }

    #[test]
    fn entries_match_quadrature() {
        let basis = build_basis(1);
        let b = assemble_exterior(&basis);
        let n = 6;
        let vol = std::f64::consts::TAU.powi(3);
        let forms: Vec<_> = (0..basis.dim())
            .map(|i| {
                let mut e = nalgebra::DVector::zeros(basis.dim());
                e[i] = 1.0;
                basis.to_form(&e)
            })
            .collect();
        let grids: Vec<_> = forms.iter().map(|f| f.on_grid(n)).collect();
        let curls: Vec<_> = forms.iter().map(|f| f.coordinate_curl().on_grid(n)).collect();
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                let s: f64 = (0..n * n * n).map(|p| (0..3).map(|a| grids[i][a][p] * curls[j][a][p]).sum::<f64>()).sum();
                let q = s / (n * n * n) as f64 * vol;
                assert!((q - b[(i, j)]).abs() < 1e-11, "({i},{j}): {q} vs {}", b[(i, j)]);
            }
        }
    }
}
