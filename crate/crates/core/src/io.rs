//! JSON interchange for spectral fields and content hashing.
//!
//! A vector field is stored as
//!
//! ```json
//! {"truncation_radius": 1,
//!  "modes": [{"k": [0, 0, 1], "re": [0.0, 0.5, 0.0], "im": [-0.5, 0.0, 0.0]}]}
//! ```
//!
//! with one entry per `±k` pair (the representative, see
//! [`WaveVector::is_representative`]); the partner is implied by reality.
//! Scalar fields use the same layout with scalar `re`/`im`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, SpectralError};
use crate::field::SpectralVectorField;
use crate::lattice::WaveVector;
use crate::scalar::ScalarSpectralField;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorMode {
    pub k: WaveVector,
    pub re: [f64; 3],
    pub im: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFieldJson {
    pub truncation_radius: u32,
    pub modes: Vec<VectorMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarMode {
    pub k: WaveVector,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarFieldJson {
    pub truncation_radius: u32,
    pub modes: Vec<ScalarMode>,
}

fn check_modes<'a>(radius: u32, ks: impl Iterator<Item = &'a WaveVector>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for k in ks {
        if !k.is_representative() {
            return Err(SpectralError::InvalidField(format!("mode {k} is not the representative of its ±k pair")));
        }
        if k.inf_norm() > radius {
            return Err(SpectralError::InvalidField(format!("mode {k} exceeds truncation radius {radius}")));
        }
        if !seen.insert(*k) {
            return Err(SpectralError::InvalidField(format!("mode {k} listed twice")));
        }
    }
    Ok(())
}

impl From<&SpectralVectorField> for VectorFieldJson {
    fn from(v: &SpectralVectorField) -> Self {
        let modes = v
            .representatives()
            .map(|(k, c)| VectorMode { k: *k, re: c.map(|z| z.re), im: c.map(|z| z.im) })
            .collect();
        VectorFieldJson { truncation_radius: v.truncation_radius(), modes }
    }
}

impl TryFrom<&VectorFieldJson> for SpectralVectorField {
    type Error = SpectralError;

    fn try_from(j: &VectorFieldJson) -> Result<Self> {
        check_modes(j.truncation_radius, j.modes.iter().map(|m| &m.k))?;
        let mut v = SpectralVectorField::zero(j.truncation_radius);
        for m in &j.modes {
            if m.re.iter().chain(&m.im).any(|x| !x.is_finite()) {
                return Err(SpectralError::InvalidField(format!("non-finite coefficient at {}", m.k)));
            }
            if m.k.is_zero() && m.im.iter().any(|&x| x != 0.0) {
                return Err(SpectralError::InvalidField("mean mode must be real".into()));
            }
            v.set_pair(m.k, [0, 1, 2].map(|i| Complex64::new(m.re[i], m.im[i])));
        }
        Ok(v)
    }
}

impl From<&ScalarSpectralField> for ScalarFieldJson {
    fn from(f: &ScalarSpectralField) -> Self {
        let modes = f
            .iter()
            .filter(|(k, _)| k.is_representative())
            .map(|(k, c)| ScalarMode { k: *k, re: c.re, im: c.im })
            .collect();
        ScalarFieldJson { truncation_radius: f.truncation_radius(), modes }
    }
}

impl TryFrom<&ScalarFieldJson> for ScalarSpectralField {
    type Error = SpectralError;

    fn try_from(j: &ScalarFieldJson) -> Result<Self> {
        check_modes(j.truncation_radius, j.modes.iter().map(|m| &m.k))?;
        let mut f = ScalarSpectralField::zero(j.truncation_radius);
        for m in &j.modes {
            if !m.re.is_finite() || !m.im.is_finite() {
                return Err(SpectralError::InvalidField(format!("non-finite coefficient at {}", m.k)));
            }
            if m.k.is_zero() && m.im != 0.0 {
                return Err(SpectralError::InvalidField("mean mode must be real".into()));
            }
            f.set_pair(m.k, Complex64::new(m.re, m.im));
        }
        Ok(f)
    }
}

pub fn field_to_json(v: &SpectralVectorField) -> String {
    serde_json::to_string_pretty(&VectorFieldJson::from(v)).expect("field JSON is always serializable")
}

pub fn field_from_json(s: &str) -> Result<SpectralVectorField> {
    let j: VectorFieldJson = serde_json::from_str(s)?;
    SpectralVectorField::try_from(&j)
}

pub fn scalar_to_json(f: &ScalarSpectralField) -> String {
    serde_json::to_string_pretty(&ScalarFieldJson::from(f)).expect("field JSON is always serializable")
}

pub fn scalar_from_json(s: &str) -> Result<ScalarSpectralField> {
    let j: ScalarFieldJson = serde_json::from_str(s)?;
    ScalarSpectralField::try_from(&j)
}

/// Lower-case hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the canonical (compact) JSON encoding of a field. Equal fields
/// hash equally; coefficient bits are part of the hash.
pub fn field_hash(v: &SpectralVectorField) -> String {
    let canonical = serde_json::to_vec(&VectorFieldJson::from(v)).expect("field JSON is always serializable");
    sha256_hex(&canonical)
}
