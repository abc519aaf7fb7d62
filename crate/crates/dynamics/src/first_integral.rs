//! Grid checks of whether a scalar is a first integral of a field.

use serde::{Deserialize, Serialize};

use beltrami_core::{ScalarSpectralField, SpectralVectorField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstIntegralReport {
    /// `sup F − inf F` on the grid.
    pub range_gap: f64,
    /// `sup |∇F · v|` on the grid.
    pub derivative_sup: f64,
}

pub fn first_integral_report(v: &SpectralVectorField, f: &ScalarSpectralField, grid: usize) -> FirstIntegralReport {
    let values = f.on_grid(grid);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let vg = v.on_grid(grid);
    let grads: Vec<Vec<f64>> = (0..3).map(|j| f.partial(j).on_grid(grid)).collect();
    let derivative_sup = (0..values.len())
        .map(|p| (0..3).map(|j| grads[j][p] * vg[j][p]).sum::<f64>().abs())
        .fold(0.0, f64::max);
    FirstIntegralReport { range_gap: (max - min).max(0.0), derivative_sup }
}

#[cfg(test)]
mod tests {
    use super::*;
    use beltrami_core::{bernoulli, c0_first_integral, make_abc, AbcParams};

    #[test]
    fn bernoulli_of_abc() {
        let v = make_abc(AbcParams::new(1.0, 0.5, 0.1));
        let r = first_integral_report(&v, &bernoulli(&v), 16);
        assert!(r.range_gap <= 1e-11 && r.derivative_sup <= 1e-11, "{r:?}");
    }

    #[test]
    fn c0_integral_is_conserved_and_nonconstant() {
        let v = make_abc(AbcParams::new(1.0, 0.5, 0.0));
        let r = first_integral_report(&v, &c0_first_integral(1.0, 0.5), 16);
        assert!(r.derivative_sup <= 1e-12, "{r:?}");
        // H ranges over [−1.5, 1.5]; the 16³ grid hits both extremes.
        assert!((r.range_gap - 3.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn constants_are_trivial_integrals() {
        let v = make_abc(AbcParams::new(0.3, 0.2, 0.9));
        let r = first_integral_report(&v, &ScalarSpectralField::constant(4.0), 8);
        assert_eq!(r.range_gap, 0.0);
        assert_eq!(r.derivative_sup, 0.0);
    }
}
