//! The acceptance suite. Each criterion is a function returning its checks
//! so that it can be run alone or as part of [`verify_suite`].

use std::path::Path;
use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use beltrami_contact::{check_variation, metric_family, orthogonal_dual, standard_beta, std_contact_t3};
use beltrami_core::{
    bernoulli, check_eigenfamily, helicity_basis, lattice_shell, make_abc, min_norm, proportionality_factor, random_beltrami,
    steady_residual, AbcParams, SpectralVectorField,
};
use beltrami_dynamics::{lyapunov_max, standard_chaos_seeds, uniform_seed_point, CHAOS_THRESHOLD, INTEGRABLE_CEILING};
use beltrami_galerkin::samples::{clustered_family, clustered_symmetric};
use beltrami_galerkin::{cluster_frame, pi_derivative, pi_map, spectral_projector, OperatorFamily, DEFAULT_NODES};

use crate::config::{default_epsilons, ExperimentConfig, PerturbParams, PiMapParams, PiSource, BetaChoice};
use crate::experiments::{self, family_identities, Assertion, Outcome};
use crate::record::run;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Everything except the long Lyapunov runs.
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    /// Runtime budget in seconds.
    pub budget: f64,
    pub checks: Vec<Assertion>,
    pub notes: Vec<String>,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!("{status} criterion {}: {} ({} checks, {:.1} s", self.id, self.name, self.checks.len(), self.seconds);
        line.push_str(&format!(" of {:.0} s budget)", self.budget));
        if !failed.is_empty() {
            line.push_str(&format!(" failed: {}", failed.join(", ")));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub level: Level,
    pub passed: bool,
    pub seconds: f64,
    pub criteria: Vec<CriterionResult>,
}

fn finish(id: u32, name: &str, budget: f64, start: Instant, mut checks: Vec<Assertion>, notes: Vec<String>) -> CriterionResult {
    let seconds = start.elapsed().as_secs_f64();
    checks.push(Assertion::at_most("runtime_seconds", seconds, budget));
    CriterionResult { id, name: name.to_string(), passed: checks.iter().all(|c| c.passed), seconds, budget, checks, notes }
}

/// Curl eigenfamilies for every nonempty shell up to 100, including a
/// mutation check with a sign-flipped curl.
pub fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let ns: Vec<u32> = (1..=100).filter(|&n| !lattice_shell(n).is_empty()).collect();
    let reports: Vec<_> = ns.par_iter().map(|&n| check_eigenfamily(n, &helicity_basis(n).expect("nonempty shell"), SpectralVectorField::curl)).collect();
    let gram = reports.iter().map(|r| r.gram_deviation).fold(0.0, f64::max);
    let resid = reports.iter().map(|r| r.curl_residual).fold(0.0, f64::max);
    let size_mismatch = reports.iter().zip(&ns).filter(|(r, &n)| r.multiplicity != lattice_shell(n).multiplicity()).count();
    let flipped = check_eigenfamily(2, &helicity_basis(2).expect("nonempty shell"), |u| u.curl().scale(-1.0));
    let checks = vec![
        Assertion::at_most("curl_residual", resid, experiments::CURL_RESIDUAL_TOL),
        Assertion::at_most("gram_deviation", gram, experiments::GRAM_TOL),
        Assertion::equal("basis_size_mismatches", size_mismatch as f64, 0.0),
        Assertion::equal("unit_multiplicity", lattice_shell(1).multiplicity() as f64, 6.0),
        Assertion::check("flipped_curl_detected", flipped.curl_residual, experiments::Comparison::GreaterThan, experiments::CURL_RESIDUAL_TOL),
    ];
    let notes = vec![format!("{} shells checked", ns.len())];
    finish(1, "curl eigenfamilies", 10.0, start, checks, notes)
}

fn sup_on_grid(f: &beltrami_core::ScalarSpectralField, n: usize) -> f64 {
    f.on_grid(n).into_iter().map(f64::abs).fold(0.0, f64::max)
}

/// Steady residuals of random ABC fields, Bernoulli functions of Beltrami
/// fields, and the proportionality factor of ABC(1, 0.5, 0.1).
pub fn criterion_2() -> CriterionResult {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let triples: Vec<AbcParams> =
        (0..20).map(|_| AbcParams::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
    let steady = triples.par_iter().map(|p| {
        let r = steady_residual(&make_abc(*p));
        r.momentum.max(r.bernoulli)
    });
    let steady = steady.reduce(|| 0.0, f64::max);

    let mut fields: Vec<SpectralVectorField> = triples.iter().map(|p| make_abc(*p)).collect();
    for n in [1u32, 2, 3, 5, 6, 9] {
        fields.extend(helicity_basis(n).expect("nonempty shell"));
        for seed in 0..3 {
            fields.push(random_beltrami(n, seed).expect("nonempty shell"));
        }
    }
    let bern = fields.par_iter().map(|v| sup_on_grid(&bernoulli(v), 16)).reduce(|| 0.0, f64::max);
    let mut checks = vec![
        Assertion::at_most("abc_steady_residual", steady, experiments::STEADY_TOL),
        Assertion::at_most("bernoulli_sup", bern, experiments::BERNOULLI_SUP_TOL),
    ];
    match proportionality_factor(&make_abc(AbcParams::new(1.0, 0.5, 0.1)), 32) {
        Ok(r) => {
            checks.push(Assertion::at_most("factor_gap", r.gap(), experiments::FACTOR_GAP_TOL));
            checks.push(Assertion::at_most("factor_minus_one", (r.min - 1.0).abs().max((r.max - 1.0).abs()), experiments::FACTOR_GAP_TOL));
        }
        Err(_) => checks.push(Assertion::equal("factor_defined", 0.0, 1.0)),
    }
    finish(2, "steady-state pipeline", 30.0, start, checks, vec![format!("{} Beltrami fields", fields.len())])
}

/// Minimum speed of the three reference ABC fields.
pub fn criterion_3() -> CriterionResult {
    let start = Instant::now();
    let m = |a, b, c| min_norm(&make_abc(AbcParams::new(a, b, c)), 32);
    let checks = vec![
        Assertion::check("min_norm_abc_1_05_0", m(1.0, 0.5, 0.0), experiments::Comparison::GreaterThan, 0.1),
        Assertion::check("min_norm_abc_1_05_01", m(1.0, 0.5, 0.1), experiments::Comparison::GreaterThan, 0.05),
        Assertion::at_most("min_norm_abc_1_1_1", m(1.0, 1.0, 1.0), 1e-3),
    ];
    finish(3, "nonvanishing", 10.0, start, checks, vec!["reference values in calibration/min_norm_refinement.txt".into()])
}

/// Integrable baseline at `C = 0` and the chaos proxy at (1, 0.5, 0.1).
pub fn criterion_4() -> CriterionResult {
    let start = Instant::now();
    let mut jobs: Vec<(f64, [f64; 3])> = Vec::new();
    for b in [0.25, 0.5, 0.75] {
        for i in 0..10 {
            jobs.push((b, uniform_seed_point(4000 + i)));
        }
    }
    let integrable: Vec<f64> = jobs
        .par_iter()
        .map(|(b, x0)| lyapunov_max(&make_abc(AbcParams::new(1.0, *b, 0.0)), *x0, 1e4, 1.0).map(|e| e.lambda_max).unwrap_or(f64::NAN))
        .collect();
    let v = make_abc(AbcParams::new(1.0, 0.5, 0.1));
    let chaos: Vec<f64> =
        standard_chaos_seeds().par_iter().map(|x0| lyapunov_max(&v, *x0, 1e5, 1.0).map(|e| e.lambda_max).unwrap_or(f64::NAN)).collect();
    let worst_integrable = integrable.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best_chaos = chaos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let above_ceiling = chaos.iter().filter(|&&l| l >= INTEGRABLE_CEILING).count();
    let checks = vec![
        Assertion::equal("integrable_failures", integrable.iter().filter(|l| !l.is_finite()).count() as f64, 0.0),
        Assertion::at_most("integrable_max_lambda", worst_integrable, INTEGRABLE_CEILING),
        Assertion::at_least("chaos_max_lambda", best_chaos, CHAOS_THRESHOLD),
        Assertion::at_least("chaos_seeds_above_integrable_ceiling", above_ceiling as f64, 1.0),
    ];
    let notes = vec![format!(
        "integrable T = 1e4 over 30 runs; chaos T = 1e5 over 20 seeds, {} above θ = {CHAOS_THRESHOLD:e}, {above_ceiling} above {INTEGRABLE_CEILING:e}",
        chaos.iter().filter(|&&l| l >= CHAOS_THRESHOLD).count()
    )];
    finish(4, "integrable baseline and chaos proxy", 600.0, start, checks, notes)
}

/// Compatibility, volume and trace identities of `g_ε`.
pub fn criterion_5() -> CriterionResult {
    let start = Instant::now();
    let (form, g) = std_contact_t3();
    let eps: Vec<f64> = (-4..=4).map(|i| f64::from(i) / 20.0).collect();
    let mut checks = Vec::new();
    let betas = [("standard", standard_beta()), ("random", orthogonal_dual(&random_beltrami(1, 5).expect("unit shell"), &form, &g))];
    for (label, beta) in betas {
        match metric_family(&form, &g, &beta, &eps).map_err(|e| e.to_string()).and_then(|fam| {
            let (c, d) = family_identities(&fam, &form, &eps).map_err(|e| e.to_string())?;
            Ok((c, d, check_variation(&fam.variation, &form, &g, 32)))
        }) {
            Ok((compat, det, var)) => {
                checks.push(Assertion::at_most(&format!("{label}_compatibility"), compat, experiments::COMPATIBILITY_TOL));
                checks.push(Assertion::at_most(&format!("{label}_determinant"), det, experiments::DETERMINANT_TOL));
                checks.push(Assertion::at_most(&format!("{label}_trace"), var.trace, 1e-12));
            }
            Err(_) => checks.push(Assertion::equal(&format!("{label}_family_built"), 0.0, 1.0)),
        }
    }
    finish(5, "compatible-metric identities", 30.0, start, checks, Vec::new())
}

fn standard_perturb(k: u32) -> Result<Outcome, String> {
    let p = PerturbParams { k, epsilons: default_epsilons(), window: [0.8, 1.2], fd_step: beltrami_galerkin::DEFAULT_FD_STEP, beta: BetaChoice::Standard };
    experiments::perturb(&p, 0).map_err(|e| e.to_string())
}

fn pick(outcome: &Result<Outcome, String>, names: &[&str]) -> Vec<Assertion> {
    match outcome {
        Ok(o) => names
            .iter()
            .map(|n| o.assertions.iter().find(|a| a.name == *n).cloned().unwrap_or_else(|| Assertion::equal(&format!("{n}_present"), 0.0, 1.0)))
            .collect(),
        Err(_) => vec![Assertion::equal("perturb_run_succeeded", 0.0, 1.0)],
    }
}

/// Three routes to the first-order splitting at `K = 3`, and the α and β
/// pairings.
pub fn criterion_6() -> CriterionResult {
    let start = Instant::now();
    let o = standard_perturb(3);
    let checks = pick(&o, &["fd_vs_pencil", "fd_vs_pairing", "pencil_vs_pairing", "alpha_pairing", "beta_pairing_relative_error", "beta_three_way"]);
    let notes = o.iter().map(|o| format!("first order: {}", o.report["first_order"]["pencil_formula"])).collect();
    finish(6, "first-order variation three ways", 120.0, start, checks, notes)
}

/// Splitting of the six-fold cluster along `g_ε` at `K = 3`.
pub fn criterion_7() -> CriterionResult {
    let start = Instant::now();
    let o = standard_perturb(3);
    let checks = pick(&o, &["multiplicity_at_zero", "spread_fit", "slope_gap", "alpha_drift"]);
    let notes = o.iter().map(|o| format!("positive slopes {}", o.report["positive_slopes"])).collect();
    finish(7, "eigenvalue splitting", 300.0, start, checks, notes)
}

fn eigen_projector(a: &DMatrix<f64>, center: f64, radius: f64) -> DMatrix<f64> {
    let e = SymmetricEigen::new(a.clone());
    let mut p = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, l) in e.eigenvalues.iter().enumerate() {
        if (l - center).abs() < radius {
            let v = e.eigenvectors.column(i);
            p += v * v.transpose();
        }
    }
    p
}

/// Contour projectors, the compressed map `π`, its derivative, and the
/// Galerkin splitting certificate.
pub fn criterion_8() -> CriterionResult {
    let start = Instant::now();
    let errs: Vec<(f64, f64)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let d = 2 + (i as usize * 198) / 99;
            let c = clustered_symmetric(d, 8000 + i);
            match spectral_projector(&c.a, c.center, c.radius, DEFAULT_NODES) {
                Ok(p) => ((&p - eigen_projector(&c.a, c.center, c.radius)).amax(), (&p * &p - &p).amax()),
                Err(_) => (f64::INFINITY, f64::INFINITY),
            }
        })
        .collect();
    let proj = errs.iter().map(|e| e.0).fold(0.0, f64::max);
    let idem = errs.iter().map(|e| e.1).fold(0.0, f64::max);

    let fams: Vec<u64> = (0..20).collect();
    let sigma = fams
        .par_iter()
        .map(|&s| {
            let (fam, cl) = clustered_family(10 + 2 * s as usize, 1 + (s as usize % 4), 800 + s);
            [-0.1, -0.03, 0.02, 0.08]
                .iter()
                .map(|&q| pi_map(&fam, q, 0.0, &cl).map(|r| r.sigma_match_defect).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);

    let deriv = (0..5u64)
        .into_par_iter()
        .map(|s| {
            let (fam, cl) = clustered_family(20, 3, 900 + s);
            let Ok(u0) = cluster_frame(&fam, 0.0, &cl) else { return f64::INFINITY };
            let exact = pi_derivative(&fam.derivative(0.0), &u0);
            let pi = |t: f64| pi_map(&fam, t, 0.0, &cl).map(|r| r.pi);
            let central = |h: f64| -> Option<DMatrix<f64>> { Some((pi(h).ok()? - pi(-h).ok()?) / (2.0 * h)) };
            let h = 1e-2;
            match (central(0.5 * h), central(h)) {
                (Some(a), Some(b)) => ((a * 4.0 - b) / 3.0 - &exact).amax() / exact.amax(),
                _ => f64::INFINITY,
            }
        })
        .reduce(|| 0.0, f64::max);

    let galerkin = experiments::pi_map_run(&PiMapParams { source: PiSource::Galerkin, dim: 0, multiplicity: 6, q: vec![-0.05, 0.05], k: 1, nodes: DEFAULT_NODES }, 0);
    let cert = galerkin.as_ref().ok().and_then(|o| o.report["splitting_certificate"].as_f64()).unwrap_or(0.0);
    let gal_sigma = galerkin.as_ref().ok().and_then(|o| o.report["sigma_match_defect"].as_f64()).unwrap_or(f64::INFINITY);

    let checks = vec![
        Assertion::at_most("projector_vs_eigendecomposition", proj, 1e-8),
        Assertion::at_most("projector_idempotency", idem, 1e-10),
        Assertion::at_most("pi_sigma_match", sigma, experiments::SIGMA_MATCH_TOL),
        Assertion::at_most("pi_derivative_relative_error", deriv, experiments::PI_DERIVATIVE_TOL),
        Assertion::at_most("galerkin_pi_sigma_match", gal_sigma, experiments::SIGMA_MATCH_TOL),
        Assertion::positive("galerkin_splitting_certificate", cert),
    ];
    finish(8, "projector and compressed map", 120.0, start, checks, vec!["100 projector matrices of dimension 2..=200".into()])
}

const DETERMINISM_CONFIGS: [&str; 4] = [
    r#"{"kind":"spectrum","params":{"n":9}}"#,
    r#"{"kind":"poincare","params":{"a":1,"b":0.5,"c":0.1,"x0":[0.3,0.0,1.2],"crossings":100}}"#,
    r#"{"kind":"perturb","params":{"k":1,"epsilons":[-0.1,0.0,0.1]}}"#,
    r#"{"kind":"pi-map","params":{"dim":30,"multiplicity":2},"seed":11}"#,
];

/// Runs a configuration twice and compares every result file byte for
/// byte. The run record itself carries the wall time and is excluded.
pub fn rerun_identical(config: &str, scratch: &Path) -> Result<bool, String> {
    let cfg = ExperimentConfig::from_json(config).map_err(|e| e.to_string())?;
    let a = run(&cfg, Some(&scratch.join("a"))).map_err(|e| e.to_string())?;
    let b = run(&cfg, Some(&scratch.join("b"))).map_err(|e| e.to_string())?;
    if a.files != b.files {
        return Ok(false);
    }
    for e in &a.files {
        let x = std::fs::read(scratch.join("a").join(&e.file)).map_err(|e| e.to_string())?;
        let y = std::fs::read(scratch.join("b").join(&e.file)).map_err(|e| e.to_string())?;
        if x != y {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Byte-identical reruns, and the runtime of the suite so far against the
/// five-minute budget.
pub fn criterion_9(elapsed_before: f64, scratch: &Path) -> CriterionResult {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (i, c) in DETERMINISM_CONFIGS.iter().enumerate() {
        let ok = rerun_identical(c, &scratch.join(format!("rerun-{i}"))).unwrap_or(false);
        checks.push(Assertion::equal(&format!("byte_identical_rerun_{i}"), f64::from(u8::from(ok)), 1.0));
    }
    let total = elapsed_before + start.elapsed().as_secs_f64();
    checks.push(Assertion::at_most("quick_suite_seconds", total, 300.0));
    finish(9, "reproducibility", 300.0, start, checks, Vec::new())
}

/// Runs every criterion of the level in order.
pub fn verify_suite(level: Level, scratch: &Path) -> SuiteSummary {
    let start = Instant::now();
    let mut criteria = vec![criterion_1(), criterion_2(), criterion_3()];
    let mut quick_seconds: f64 = criteria.iter().map(|c| c.seconds).sum();
    if level == Level::Full {
        criteria.push(criterion_4());
    }
    for c in [criterion_5(), criterion_6(), criterion_7(), criterion_8()] {
        quick_seconds += c.seconds;
        criteria.push(c);
    }
    criteria.push(criterion_9(quick_seconds, scratch));
    SuiteSummary {
        level,
        passed: criteria.iter().all(|c| c.passed),
        seconds: start.elapsed().as_secs_f64(),
        criteria,
    }
}
