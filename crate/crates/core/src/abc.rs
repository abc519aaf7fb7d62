//! The ABC family `(A sin x₃ + C cos x₂, B sin x₁ + A cos x₃, C sin x₂ + B cos x₁)`.

use serde::{Deserialize, Serialize};

use crate::field::SpectralVectorField;
use crate::lattice::WaveVector;
use crate::scalar::ScalarSpectralField;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AbcParams {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        AbcParams { a, b, c }
    }
}

/// Spectral ABC field. Always carries exactly the six modes `±e₁, ±e₂, ±e₃`.
pub fn make_abc(p: AbcParams) -> SpectralVectorField {
    let AbcParams { a, b, c } = p;
    let mut v = SpectralVectorField::zero(1);
    v.add_trig(WaveVector::unit(0), [0.0, 0.0, b], [0.0, b, 0.0]);
    v.add_trig(WaveVector::unit(1), [c, 0.0, 0.0], [0.0, 0.0, c]);
    v.add_trig(WaveVector::unit(2), [0.0, a, 0.0], [a, 0.0, 0.0]);
    v
}

/// Closed-form ABC value, used as an independent check on [`make_abc`].
pub fn abc_closed_form(p: AbcParams, x: &[f64; 3]) -> [f64; 3] {
    [
        p.a * x[2].sin() + p.c * x[1].cos(),
        p.b * x[0].sin() + p.a * x[2].cos(),
        p.c * x[1].sin() + p.b * x[0].cos(),
    ]
}

/// First integral `A cos x₃ + B sin x₁` of the `C = 0` member.
pub fn c0_first_integral(a: f64, b: f64) -> ScalarSpectralField {
    &ScalarSpectralField::cos_mode(WaveVector::unit(2), a) + &ScalarSpectralField::sin_mode(WaveVector::unit(0), b)
}
