//! Experiment configuration: `{ "kind", "params", "seed"?, "output_dir"? }`,
//! with the parameter block validated against the kind before any work.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use beltrami_core::sha256_hex;
use beltrami_dynamics::CrossingDirection;

use crate::error::{LabError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Spectrum,
    Abc,
    Bernoulli,
    Lyapunov,
    Poincare,
    Perturb,
    PiMap,
}

impl Kind {
    pub const ALL: [Kind; 7] = [Kind::Spectrum, Kind::Abc, Kind::Bernoulli, Kind::Lyapunov, Kind::Poincare, Kind::Perturb, Kind::PiMap];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Spectrum => "spectrum",
            Kind::Abc => "abc",
            Kind::Bernoulli => "bernoulli",
            Kind::Lyapunov => "lyapunov",
            Kind::Poincare => "poincare",
            Kind::Perturb => "perturb",
            Kind::PiMap => "pi-map",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: Kind,
    #[serde(default = "empty_object")]
    params: Value,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParams {
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbcRunParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_grid() -> usize {
    32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernoulliParams {
    pub n: u32,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSet {
    /// Points just off the separatrix of the `C = 0` first integral.
    Standard,
    /// Uniform points drawn from the global seed.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    Named(SeedSet),
    Points(Vec<[f64; 3]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(default = "default_seed_spec")]
    pub seeds: SeedSpec,
    /// Number of separatrix or uniform points; ignored for explicit points.
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default = "default_renorm")]
    pub renorm: f64,
    #[serde(default = "default_lyapunov_tol")]
    pub tol: f64,
    /// Every `history_stride`-th history point goes to the CSV.
    #[serde(default = "default_stride")]
    pub history_stride: usize,
}

fn default_seed_spec() -> SeedSpec {
    SeedSpec::Named(SeedSet::Standard)
}
fn default_count() -> usize {
    20
}
fn default_t_final() -> f64 {
    1e4
}
fn default_renorm() -> f64 {
    1.0
}
fn default_lyapunov_tol() -> f64 {
    beltrami_dynamics::lyapunov::DEFAULT_LYAPUNOV_TOL
}
fn default_stride() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x0: [f64; 3],
    #[serde(default = "default_crossings")]
    pub crossings: usize,
    #[serde(default = "default_axis")]
    pub axis: usize,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_direction")]
    pub direction: CrossingDirection,
}

fn default_crossings() -> usize {
    500
}
fn default_axis() -> usize {
    2
}
fn default_level() -> f64 {
    FRAC_PI_2
}
fn default_direction() -> CrossingDirection {
    CrossingDirection::Positive
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaChoice {
    /// `(2π)^{-3/2} (sin x₁ dx₂ + cos x₁ dx₃)`.
    Standard,
    /// A random unit-shell field orthogonalized against `α`, drawn from the
    /// global seed.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbParams {
    #[serde(default = "default_truncation")]
    pub k: u32,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_window")]
    pub window: [f64; 2],
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_beta")]
    pub beta: BetaChoice,
}

fn default_truncation() -> u32 {
    3
}
pub fn default_epsilons() -> Vec<f64> {
    (-4..=4).map(|i| f64::from(i) / 20.0).collect()
}
fn default_window() -> [f64; 2] {
    [beltrami_galerkin::UNIT_WINDOW.0, beltrami_galerkin::UNIT_WINDOW.1]
}
fn default_fd_step() -> f64 {
    beltrami_galerkin::DEFAULT_FD_STEP
}
fn default_beta() -> BetaChoice {
    BetaChoice::Standard
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PiSource {
    /// `A₀ + t A₁ + t² A₂` with a degenerate cluster at `t = 0`.
    Random,
    /// The Galerkin operator `M(ε)^{-1/2} B M(ε)^{-1/2}` on the blocks of
    /// the unit cluster.
    Galerkin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiMapParams {
    #[serde(default = "default_source")]
    pub source: PiSource,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_multiplicity")]
    pub multiplicity: usize,
    #[serde(default = "default_q")]
    pub q: Vec<f64>,
    #[serde(default = "default_pi_truncation")]
    pub k: u32,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

fn default_source() -> PiSource {
    PiSource::Random
}
fn default_dim() -> usize {
    40
}
fn default_multiplicity() -> usize {
    3
}
fn default_q() -> Vec<f64> {
    vec![-0.1, -0.05, 0.05, 0.1]
}
fn default_pi_truncation() -> u32 {
    1
}
fn default_nodes() -> usize {
    beltrami_galerkin::DEFAULT_NODES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum(SpectrumParams),
    Abc(AbcRunParams),
    Bernoulli(BernoulliParams),
    Lyapunov(LyapunovParams),
    Poincare(PoincareParams),
    Perturb(PerturbParams),
    PiMap(PiMapParams),
}

impl Experiment {
    pub fn kind(&self) -> Kind {
        match self {
            Experiment::Spectrum(_) => Kind::Spectrum,
            Experiment::Abc(_) => Kind::Abc,
            Experiment::Bernoulli(_) => Kind::Bernoulli,
            Experiment::Lyapunov(_) => Kind::Lyapunov,
            Experiment::Poincare(_) => Kind::Poincare,
            Experiment::Perturb(_) => Kind::Perturb,
            Experiment::PiMap(_) => Kind::PiMap,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

fn invalid<E: std::fmt::Display>(e: E) -> LabError {
    LabError::ConfigInvalid(e.to_string())
}

fn typed<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(invalid)
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(LabError::ConfigInvalid(msg.to_string()))
    }
}

fn finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(invalid)?;
        let experiment = match raw.kind {
            Kind::Spectrum => Experiment::Spectrum(typed(raw.params)?),
            Kind::Abc => Experiment::Abc(typed(raw.params)?),
            Kind::Bernoulli => Experiment::Bernoulli(typed(raw.params)?),
            Kind::Lyapunov => Experiment::Lyapunov(typed(raw.params)?),
            Kind::Poincare => Experiment::Poincare(typed(raw.params)?),
            Kind::Perturb => Experiment::Perturb(typed(raw.params)?),
            Kind::PiMap => Experiment::PiMap(typed(raw.params)?),
        };
        let cfg = ExperimentConfig { experiment, seed: raw.seed.unwrap_or(0), output_dir: raw.output_dir };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn kind(&self) -> Kind {
        self.experiment.kind()
    }

    /// Range checks that the type system does not express.
    pub fn validate(&self) -> Result<()> {
        match &self.experiment {
            Experiment::Spectrum(p) => check(p.n <= 1_000_000, "n must be at most 10⁶"),
            Experiment::Abc(p) => {
                check(finite(&[p.a, p.b, p.c]), "amplitudes must be finite")?;
                check((4..=256).contains(&p.grid), "grid must lie in 4..=256")
            }
            Experiment::Bernoulli(p) => {
                check(p.n >= 1 && !beltrami_core::lattice_shell(p.n).is_empty(), "n must index a nonempty shell")?;
                check((1..=1000).contains(&p.samples), "samples must lie in 1..=1000")
            }
            Experiment::Lyapunov(p) => {
                check(finite(&[p.a, p.b, p.c, p.t_final, p.renorm, p.tol]), "parameters must be finite")?;
                check(p.renorm > 0.0 && p.t_final >= p.renorm, "need t_final ≥ renorm > 0")?;
                check(p.tol > 0.0, "tol must be positive")?;
                check(p.history_stride >= 1, "history_stride must be positive")?;
                if let SeedSpec::Points(pts) = &p.seeds {
                    check(!pts.is_empty() && pts.iter().all(|x| finite(x)), "seed points must be finite and nonempty")?;
                }
                check(p.count >= 1, "count must be positive")
            }
            Experiment::Poincare(p) => {
                check(finite(&[p.a, p.b, p.c, p.level]) && finite(&p.x0), "parameters must be finite")?;
                check(p.axis < 3, "axis must be 0, 1 or 2")?;
                check(p.crossings >= 1, "crossings must be positive")
            }
            Experiment::Perturb(p) => {
                check((1..=4).contains(&p.k), "k must lie in 1..=4")?;
                check(!p.epsilons.is_empty() && finite(&p.epsilons), "epsilons must be finite and nonempty")?;
                check(p.epsilons.iter().all(|e| e.abs() <= 1.0), "epsilons must satisfy |ε| ≤ 1")?;
                check(p.window[0] < p.window[1], "window must be increasing")?;
                check(p.fd_step > 0.0 && p.fd_step <= 0.1, "fd_step must lie in (0, 0.1]")
            }
            Experiment::PiMap(p) => {
                check(!p.q.is_empty() && finite(&p.q) && p.q.iter().all(|q| q.abs() <= 0.5), "q values must satisfy |q| ≤ 0.5")?;
                check(p.nodes >= 4 && p.nodes % 2 == 0, "nodes must be even and at least 4")?;
                match p.source {
                    PiSource::Random => check(
                        (2..=400).contains(&p.dim) && p.multiplicity >= 1 && p.multiplicity < p.dim,
                        "need 2 ≤ dim ≤ 400 and 1 ≤ multiplicity < dim",
                    ),
                    PiSource::Galerkin => check((1..=2).contains(&p.k), "k must be 1 or 2 for the Galerkin source"),
                }
            }
        }
    }

    /// Canonical JSON of the experiment and seed (the output directory is
    /// not part of the identity of a run).
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(&self.experiment).expect("config serializes");
        v["seed"] = Value::from(self.seed);
        serde_json::to_string(&v).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        sha256_hex(self.canonical_json().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let e = ExperimentConfig::from_json(r#"{"kind":"spectrum","params":{"n":1,"extra":2}}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(ExperimentConfig::from_json(r#"{"kind":"spectrum","params":{"n":1},"colour":1}"#).is_err());
    }

    #[test]
    fn missing_required_field_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"kind":"spectrum","params":{}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"kind":"nope","params":{}}"#).is_err());
    }

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_json(r#"{"kind":"perturb"}"#).unwrap();
        match c.experiment {
            Experiment::Perturb(p) => {
                assert_eq!(p.k, 3);
                assert_eq!(p.epsilons.len(), 9);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn seed_points_parse() {
        let c = ExperimentConfig::from_json(r#"{"kind":"lyapunov","params":{"a":1,"b":0.5,"c":0,"seeds":[[0.1,0.2,0.3]]}}"#).unwrap();
        match c.experiment {
            Experiment::Lyapunov(p) => assert_eq!(p.seeds, SeedSpec::Points(vec![[0.1, 0.2, 0.3]])),
            _ => unreachable!(),
        }
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = ExperimentConfig::from_json(r#"{"kind":"spectrum","params":{"n":3},"output_dir":"x"}"#).unwrap();
        let b = ExperimentConfig::from_json(r#"{"kind":"spectrum","params":{"n":3}}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig::from_json(r#"{"kind":"spectrum","params":{"n":3},"seed":4}"#).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn range_checks() {
        assert!(ExperimentConfig::from_json(r#"{"kind":"bernoulli","params":{"n":7}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"kind":"poincare","params":{"a":1,"b":1,"c":1,"x0":[0,0,0],"axis":3}}"#).is_err());
    }
}
