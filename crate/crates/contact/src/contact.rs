//! Contact forms, Reeb fields and the compatibility conditions
//! `|α|_g = 1`, `⋆_g dα = λ₀ α`, `vol_g = α∧dα / λ₀`.

use serde::{Deserialize, Serialize};

use beltrami_core::{SpectralVectorField, WaveVector};

use crate::metric::{to_matrix, MetricField};
use crate::trig::{OneForm, TrigPoly};

/// The normalization `⋆_g dα = 2α` customary for compatible metrics. The
/// flat model below satisfies the same identities with `λ₀ = 1`; every
/// formula here takes `λ₀` as a parameter.
pub const CONVENTIONAL_LAMBDA0: f64 = 2.0;

/// Grid used for pointwise checks when none is given.
pub const DEFAULT_CHECK_GRID: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactForm {
    pub alpha: OneForm,
    #[serde(with = "field_json")]
    pub reeb: SpectralVectorField,
    pub lambda0: f64,
}

mod field_json {
    use beltrami_core::io::VectorFieldJson;
    use beltrami_core::SpectralVectorField;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &SpectralVectorField, s: S) -> Result<S::Ok, S::Error> {
        VectorFieldJson::from(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SpectralVectorField, D::Error> {
        let j = VectorFieldJson::deserialize(d)?;
        SpectralVectorField::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// Pointwise checks of the Reeb conditions and the contact condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReebCheck {
    /// `sup |α(R) − 1|`.
    pub normalization: f64,
    /// `sup |i_R dα|`.
    pub kernel: f64,
    /// `inf` of the density of `α∧dα`.
    pub min_contact_density: f64,
}

impl ContactForm {
    pub fn reeb_components(&self) -> [TrigPoly; 3] {
        [0, 1, 2].map(|i| TrigPoly(self.reeb.component(i)))
    }

    pub fn check_reeb(&self, n: usize) -> ReebCheck {
        let a = self.alpha.on_grid(n);
        let w = self.alpha.coordinate_curl().on_grid(n);
        let r = self.reeb.on_grid(n);
        let mut out = ReebCheck { normalization: 0.0, kernel: 0.0, min_contact_density: f64::INFINITY };
        for p in 0..n * n * n {
            let ar: f64 = (0..3).map(|i| a[i][p] * r[i][p]).sum();
            out.normalization = out.normalization.max((ar - 1.0).abs());
            // i_R dα = ι_R ι_W dx¹²³ has the components of W × R.
            let cross = [
                w[1][p] * r[2][p] - w[2][p] * r[1][p],
                w[2][p] * r[0][p] - w[0][p] * r[2][p],
                w[0][p] * r[1][p] - w[1][p] * r[0][p],
            ];
            out.kernel = out.kernel.max(cross.iter().fold(0.0f64, |m, c| m.max(c.abs())));
            let density: f64 = (0..3).map(|i| a[i][p] * w[i][p]).sum();
            out.min_contact_density = out.min_contact_density.min(density);
        }
        out
    }
}

/// `α = cos x₃ dx₁ − sin x₃ dx₂` with the flat metric: `R = (cos x₃, −sin x₃, 0)`,
/// `λ₀ = 1` and `α∧dα = dx₁∧dx₂∧dx₃`.
pub fn std_contact_t3() -> (ContactForm, MetricField) {
    let e3 = WaveVector::unit(2);
    let alpha = OneForm::new([TrigPoly::cos(e3, 1.0), TrigPoly::sin(e3, -1.0), TrigPoly::zero()]);
    let mut reeb = SpectralVectorField::zero(1);
    reeb.add_trig(e3, [1.0, 0.0, 0.0], [0.0, -1.0, 0.0]);
    (ContactForm { alpha, reeb, lambda0: 1.0 }, MetricField::flat())
}

/// Sup-norms over the grid of the three compatibility defects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    /// `sup ||α|_g − 1|`.
    pub norm_defect: f64,
    /// `sup |⋆_g dα − λ₀ α|` (max over components).
    pub star_defect: f64,
    /// `sup |√det g − (α∧dα)/λ₀|` in coordinate densities.
    pub volume_defect: f64,
    pub lambda0: f64,
    pub conventional_lambda0: f64,
    pub grid: usize,
}

impl CompatibilityReport {
    pub fn max_defect(&self) -> f64 {
        self.norm_defect.max(self.star_defect).max(self.volume_defect)
    }
}

pub fn check_compatibility(g: &MetricField, form: &ContactForm) -> CompatibilityReport {
    check_compatibility_on_grid(g, form, DEFAULT_CHECK_GRID)
}

pub fn check_compatibility_on_grid(g: &MetricField, form: &ContactForm, n: usize) -> CompatibilityReport {
    let a = form.alpha.on_grid(n);
    let w = form.alpha.coordinate_curl().on_grid(n);
    let gs = g.on_grid(n);
    let lambda0 = form.lambda0;
    let mut rep = CompatibilityReport {
        norm_defect: 0.0,
        star_defect: 0.0,
        volume_defect: 0.0,
        lambda0,
        conventional_lambda0: CONVENTIONAL_LAMBDA0,
        grid: n,
    };
    for (p, gm) in gs.iter().enumerate() {
        let m = to_matrix(gm);
        let det = m.determinant();
        let Some(inv) = m.try_inverse() else {
            rep.norm_defect = f64::INFINITY;
            continue;
        };
        let av = nalgebra::Vector3::new(a[0][p], a[1][p], a[2][p]);
        let wv = nalgebra::Vector3::new(w[0][p], w[1][p], w[2][p]);
        let norm = av.dot(&(inv * av)).sqrt();
        rep.norm_defect = rep.norm_defect.max((norm - 1.0).abs());
        let sqrt_det = det.sqrt();
        // ⋆_g (ι_W dx¹²³) = g W / √det g
        let star = (m * wv) / sqrt_det - av * lambda0;
        rep.star_defect = rep.star_defect.max(star.amax());
        rep.volume_defect = rep.volume_defect.max((sqrt_det - av.dot(&wv) / lambda0).abs());
    }
    rep
}
