//! One runner per experiment kind. Each returns a JSON report, a list of
//! pass/fail assertions and the tables that become CSV files.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use beltrami_contact::{
    check_compatibility, metric_family, orthogonal_dual, standard_beta, standard_beta_quartic_half, std_contact_t3, ContactForm,
    MetricFamily, OneForm,
};
use beltrami_core::lattice::ceil_sqrt;
use beltrami_core::{
    bernoulli, check_eigenfamily, helicity_basis, make_abc, min_norm, proportionality_factor, random_beltrami, steady_residual,
    AbcParams, Admissibility, SpectralVectorField,
};
use beltrami_dynamics::{
    lyapunov_max_with_tol, poincare, separatrix_seeds, uniform_seed_point, SectionOptions, SectionPlane, CHAOS_THRESHOLD,
    INTEGRABLE_CEILING,
};
use beltrami_galerkin::io::{matrix_to_csv, metric_hash, MatrixMetadata};
use beltrami_galerkin::samples::clustered_family;
use beltrami_galerkin::{
    cluster_frame, finite_difference_slopes, hellmann_feynman, pi_derivative, pi_map, splitting_certificate, track_splitting,
    ClusterSpec, FirstOrder, GalerkinFamily, OperatorFamily, PerturbationProblem,
};

use crate::config::{
    AbcRunParams, BernoulliParams, BetaChoice, Experiment, ExperimentConfig, LyapunovParams, PerturbParams, PiMapParams, PiSource,
    PoincareParams, SeedSet, SeedSpec, SpectrumParams,
};
use crate::error::{LabError, Result};

/// Curl residual accepted as exact: a few units in the last place.
pub const CURL_RESIDUAL_TOL: f64 = 1e-13;
pub const GRAM_TOL: f64 = 1e-12;
pub const STEADY_TOL: f64 = 1e-10;
pub const BERNOULLI_SUP_TOL: f64 = 1e-11;
pub const FACTOR_GAP_TOL: f64 = 1e-10;
pub const SECTION_LEVEL_TOL: f64 = 1e-10;
pub const COMPATIBILITY_TOL: f64 = 1e-10;
pub const DETERMINANT_TOL: f64 = 1e-12;
pub const SLOPE_AGREEMENT_TOL: f64 = 1e-6;
pub const PAIRING_TOL: f64 = 1e-8;
pub const ALPHA_DRIFT_TOL: f64 = 1e-9;
pub const SIGMA_MATCH_TOL: f64 = 1e-9;
pub const PI_DERIVATIVE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
    GreaterThan,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub comparison: Comparison,
}

impl Assertion {
    pub fn check(name: &str, value: f64, comparison: Comparison, threshold: f64) -> Self {
        let passed = match comparison {
            Comparison::AtMost => value <= threshold,
            Comparison::AtLeast => value >= threshold,
            Comparison::GreaterThan => value > threshold,
            Comparison::Equal => value == threshold,
        };
        Assertion { name: name.to_string(), passed, value, threshold, comparison }
    }

    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self::check(name, value, Comparison::AtMost, threshold)
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self::check(name, value, Comparison::AtLeast, threshold)
    }

    pub fn positive(name: &str, value: f64) -> Self {
        Self::check(name, value, Comparison::GreaterThan, 0.0)
    }

    pub fn equal(name: &str, value: f64, expected: f64) -> Self {
        Self::check(name, value, Comparison::Equal, expected)
    }
}

/// A CSV file: header and preformatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file_name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file_name: &str, header: &[&str]) -> Self {
        Table { file_name: file_name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| num(*v)).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Everything a run produces, before it is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub assertions: Vec<Assertion>,
    pub tables: Vec<Table>,
    /// Files that are not tables (for instance matrix dumps), as `(name, text)`.
    pub extra_files: Vec<(String, String)>,
}

impl Outcome {
    fn new(report: Value) -> Self {
        Outcome { report, assertions: Vec::new(), tables: Vec::new(), extra_files: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    match &cfg.experiment {
        Experiment::Spectrum(p) => spectrum(p),
        Experiment::Abc(p) => abc(p),
        Experiment::Bernoulli(p) => bernoulli_run(p, cfg.seed),
        Experiment::Lyapunov(p) => lyapunov(p, cfg.seed),
        Experiment::Poincare(p) => poincare_run(p),
        Experiment::Perturb(p) => perturb(p, cfg.seed),
        Experiment::PiMap(p) => pi_map_run(p, cfg.seed),
    }
}

fn sup_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

pub fn spectrum(p: &SpectrumParams) -> Result<Outcome> {
    let adm = Admissibility::of(p.n);
    let shell = beltrami_core::lattice_shell(p.n);
    let mut out = Outcome::new(json!({
        "n": p.n,
        "eigenvalue": f64::from(p.n).sqrt(),
        "multiplicity": adm.multiplicity,
        "mod8_admissible": adm.mod8_rule,
        "shell_nonempty": adm.shell_nonempty,
        "predicates_agree": adm.predicates_agree(),
    }));
    let mut table = Table::new("shell.csv", &["k1", "k2", "k3"]);
    for k in &shell.vectors {
        table.rows.push(k.0.iter().map(|c| c.to_string()).collect());
    }
    out.tables.push(table);
    if p.n > 0 && !shell.is_empty() {
        let basis = helicity_basis(p.n).map_err(LabError::compute)?;
        let r = check_eigenfamily(p.n, &basis, SpectralVectorField::curl);
        out.report["gram_deviation"] = json!(r.gram_deviation);
        out.report["curl_residual"] = json!(r.curl_residual);
        out.assertions.push(Assertion::equal("basis_size_equals_multiplicity", r.multiplicity as f64, adm.multiplicity as f64));
        out.assertions.push(Assertion::at_most("gram_deviation", r.gram_deviation, GRAM_TOL));
        out.assertions.push(Assertion::at_most("curl_residual", r.curl_residual, CURL_RESIDUAL_TOL));
        if p.n == 1 {
            out.assertions.push(Assertion::equal("unit_shell_multiplicity", adm.multiplicity as f64, 6.0));
        }
    } else {
        out.report["note"] = json!(if p.n == 0 { "n = 0 carries only constant fields" } else { "empty shell" });
    }
    Ok(out)
}

pub fn abc(p: &AbcRunParams) -> Result<Outcome> {
    let params = AbcParams::new(p.a, p.b, p.c);
    let v = make_abc(params);
    let res = steady_residual(&v);
    let f_sup = sup_norm(&bernoulli(&v).on_grid(p.grid));
    let mn = min_norm(&v, p.grid);
    let mut out = Outcome::new(json!({
        "amplitudes": [p.a, p.b, p.c],
        "grid": p.grid,
        "momentum_residual": res.momentum,
        "bernoulli_residual": res.bernoulli,
        "bernoulli_sup": f_sup,
        "min_norm": mn,
    }));
    out.assertions.push(Assertion::at_most("momentum_residual", res.momentum, STEADY_TOL));
    out.assertions.push(Assertion::at_most("bernoulli_residual", res.bernoulli, STEADY_TOL));
    out.assertions.push(Assertion::at_most("bernoulli_sup", f_sup, BERNOULLI_SUP_TOL));
    match proportionality_factor(&v, p.grid) {
        Ok(r) => {
            out.report["factor_min"] = json!(r.min);
            out.report["factor_max"] = json!(r.max);
            out.report["factor_gap"] = json!(r.gap());
            out.assertions.push(Assertion::at_most("factor_gap", r.gap(), FACTOR_GAP_TOL));
            let mut buf = Vec::new();
            r.write_csv(&mut buf).map_err(LabError::compute)?;
            out.extra_files.push(("proportionality.csv".into(), String::from_utf8(buf).map_err(LabError::compute)?));
        }
        Err(e) => out.report["factor_undefined"] = json!(e.to_string()),
    }
    Ok(out)
}

pub fn bernoulli_run(p: &BernoulliParams, seed: u64) -> Result<Outcome> {
    let grid = (4 * ceil_sqrt(p.n) as usize + 2).max(16);
    let mut table = Table::new("bernoulli.csv", &["source", "index", "sup_norm"]);
    let mut worst: f64 = 0.0;
    for (i, u) in helicity_basis(p.n).map_err(LabError::compute)?.iter().enumerate() {
        let s = sup_norm(&bernoulli(u).on_grid(grid));
        worst = worst.max(s);
        table.rows.push(vec!["basis".into(), i.to_string(), num(s)]);
    }
    let sups: Vec<Result<f64>> = (0..p.samples as u64)
        .into_par_iter()
        .map(|i| {
            let v = random_beltrami(p.n, seed.wrapping_add(i)).map_err(LabError::compute)?;
            Ok(sup_norm(&bernoulli(&v).on_grid(grid)))
        })
        .collect();
    for (i, s) in sups.into_iter().enumerate() {
        let s = s?;
        worst = worst.max(s);
        table.rows.push(vec!["random".into(), seed.wrapping_add(i as u64).to_string(), num(s)]);
    }
    let mut out = Outcome::new(json!({ "n": p.n, "grid": grid, "samples": p.samples, "max_sup_norm": worst }));
    out.assertions.push(Assertion::at_most("bernoulli_sup", worst, BERNOULLI_SUP_TOL));
    out.tables.push(table);
    Ok(out)
}

pub fn lyapunov_seeds(p: &LyapunovParams, seed: u64) -> Vec<[f64; 3]> {
    match &p.seeds {
        SeedSpec::Named(SeedSet::Standard) => separatrix_seeds(AbcParams::new(p.a, p.b, p.c), p.count, 1e-3),
        SeedSpec::Named(SeedSet::Uniform) => (0..p.count as u64).map(|i| uniform_seed_point(seed.wrapping_add(i))).collect(),
        SeedSpec::Points(pts) => pts.clone(),
    }
}

pub fn lyapunov(p: &LyapunovParams, seed: u64) -> Result<Outcome> {
    let v = make_abc(AbcParams::new(p.a, p.b, p.c));
    let seeds = lyapunov_seeds(p, seed);
    let estimates: Vec<_> = seeds
        .par_iter()
        .map(|x0| lyapunov_max_with_tol(&v, *x0, p.t_final, p.renorm, p.tol))
        .collect::<std::result::Result<_, _>>()
        .map_err(LabError::compute)?;

    let mut summary = Table::new("lyapunov.csv", &["seed_index", "x1", "x2", "x3", "lambda_max", "tail_band"]);
    let mut history = Table::new("lyapunov_history.csv", &["seed_index", "t", "estimate"]);
    for (i, (x0, e)) in seeds.iter().zip(&estimates).enumerate() {
        summary.rows.push(vec![i.to_string(), num(x0[0]), num(x0[1]), num(x0[2]), num(e.lambda_max), num(e.tail_band)]);
        for h in e.history.iter().step_by(p.history_stride) {
            history.rows.push(vec![i.to_string(), num(h.t), num(h.estimate)]);
        }
    }
    let lambdas: Vec<f64> = estimates.iter().map(|e| e.lambda_max).collect();
    let max = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let above_threshold = lambdas.iter().filter(|&&l| l >= CHAOS_THRESHOLD).count();
    let above_ceiling = lambdas.iter().filter(|&&l| l >= INTEGRABLE_CEILING).count();
    let mut out = Outcome::new(json!({
        "amplitudes": [p.a, p.b, p.c],
        "t_final": p.t_final,
        "renorm": p.renorm,
        "tol": p.tol,
        "seeds": seeds.len(),
        "lambda_max": lambdas,
        "max_lambda": max,
        "chaos_threshold": CHAOS_THRESHOLD,
        "integrable_ceiling": INTEGRABLE_CEILING,
        "count_above_threshold": above_threshold,
        "count_above_ceiling": above_ceiling,
    }));
    out.assertions.push(Assertion::equal("estimates_finite", lambdas.iter().filter(|l| !l.is_finite()).count() as f64, 0.0));
    if p.c == 0.0 {
        out.assertions.push(Assertion::at_most("integrable_max_lambda", max, INTEGRABLE_CEILING));
    }
    out.tables.push(summary);
    out.tables.push(history);
    Ok(out)
}

pub fn poincare_run(p: &PoincareParams) -> Result<Outcome> {
    let v = make_abc(AbcParams::new(p.a, p.b, p.c));
    let plane = SectionPlane { axis: p.axis, level: p.level };
    let sec = poincare(&v, plane, p.direction, p.x0, p.crossings, SectionOptions::for_crossings(p.crossings))
        .map_err(LabError::compute)?;
    let mut table = Table::new("section.csv", &["s1", "s2"]);
    for q in sec.points() {
        table.push_numbers(&q);
    }
    let residual = sec.level_residual();
    let mut out = Outcome::new(json!({
        "amplitudes": [p.a, p.b, p.c],
        "x0": p.x0,
        "axis": p.axis,
        "level": p.level,
        "kept_axes": plane.kept_axes(),
        "crossings": sec.crossings.len(),
        "level_residual": residual,
        "occupied_cells_50": sec.occupancy(50),
    }));
    out.assertions.push(Assertion::equal("crossing_count", sec.crossings.len() as f64, p.crossings as f64));
    out.assertions.push(Assertion::at_most("level_residual", residual, SECTION_LEVEL_TOL));
    out.tables.push(table);
    Ok(out)
}

/// The perturbation direction for a perturb run.
pub fn perturbation_beta(choice: BetaChoice, form: &ContactForm, seed: u64) -> Result<OneForm> {
    Ok(match choice {
        BetaChoice::Standard => standard_beta(),
        BetaChoice::Random => {
            let (_, g) = std_contact_t3();
            orthogonal_dual(&random_beltrami(1, seed).map_err(LabError::compute)?, form, &g)
        }
    })
}

/// Largest compatibility defect and relative determinant error of `g_ε`
/// over a list of `ε`.
pub fn family_identities(family: &MetricFamily, form: &ContactForm, epsilons: &[f64]) -> Result<(f64, f64)> {
    let det0 = family.base.on_grid(16).iter().map(det_sym).collect::<Vec<_>>();
    let (mut compat, mut det_err): (f64, f64) = (0.0, 0.0);
    for &e in epsilons {
        let g = family.member(e).map_err(LabError::compute)?;
        compat = compat.max(check_compatibility(&g, form).max_defect());
        for (d, d0) in g.on_grid(16).iter().map(det_sym).zip(&det0) {
            det_err = det_err.max((d - d0).abs() / d0.abs());
        }
    }
    Ok((compat, det_err))
}

fn det_sym(g: &[[f64; 3]; 3]) -> f64 {
    beltrami_dynamics::det3(g)
}

fn matrix_files(name: &str, m: &DMatrix<f64>, truncation: u32, hash: &str) -> Result<Vec<(String, String)>> {
    let meta = MatrixMetadata {
        name: name.to_string(),
        truncation,
        dimension: m.nrows(),
        metric_hash: hash.to_string(),
        nonzeros: m.iter().filter(|v| **v != 0.0).count(),
    };
    Ok(vec![
        (format!("{name}.csv"), matrix_to_csv(m)),
        (format!("{name}.json"), serde_json::to_string_pretty(&meta).map_err(LabError::compute)?),
    ])
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn perturb(p: &PerturbParams, seed: u64) -> Result<Outcome> {
    let window = (p.window[0], p.window[1]);
    let (form, g) = std_contact_t3();
    let beta = perturbation_beta(p.beta, &form, seed)?;
    let family = metric_family(&form, &g, &beta, &p.epsilons).map_err(LabError::compute)?;
    let (compat, det_err) = family_identities(&family, &form, &p.epsilons)?;
    let problem = PerturbationProblem::new(&form, &family, p.k).map_err(LabError::compute)?;

    let curves = track_splitting(&problem, &p.epsilons, window).map_err(LabError::compute)?;
    let first = FirstOrder::new(&problem, window).map_err(LabError::compute)?;
    let fd = finite_difference_slopes(&problem, window, p.fd_step).map_err(LabError::compute)?;
    let pencil = FirstOrder::sorted_eigenvalues(&first.pi_pencil);
    let pairing = FirstOrder::sorted_eigenvalues(&first.pi_pairing);
    let operator = FirstOrder::sorted_eigenvalues(&first.operator_first_order(&problem));
    let scale = max_abs(&pencil);
    let rel = |a: &[f64], b: &[f64]| {
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
    };
    let fd_vs_pencil = rel(&fd, &pencil);
    let fd_vs_pairing = rel(&fd, &pairing);
    let pencil_vs_pairing = rel(&pencil, &pairing);
    let pencil_vs_operator = rel(&pencil, &operator);

    let alpha = hellmann_feynman(&problem, &first, &problem.alpha_vector(), window, p.fd_step).map_err(LabError::compute)?;
    let alpha_pairing = alpha.finite_difference.abs().max(alpha.pencil_formula.abs()).max(alpha.pairing.abs());
    let (spread_fit, min_ratio) = curves.spread_fit();
    let certificate = splitting_certificate(&first.pi_pencil);
    let slopes = curves.positive_slopes();
    let slope_gap = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max) - slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let m0 = curves.epsilons.iter().position(|e| *e == 0.0).map(|i| curves.curves[i].len());

    let mut out = Outcome::new(json!({
        "truncation": p.k,
        "dimension": problem.basis.dim(),
        "truncation_exact": problem.truncation_exact(),
        "beta": p.beta,
        "window": p.window,
        "epsilons": p.epsilons,
        "compatibility_defect": compat,
        "determinant_error": det_err,
        "multiplicities": curves.multiplicities(),
        "curves": curves.curves,
        "spread_fit": spread_fit,
        "min_spread_ratio": min_ratio,
        "positive_slopes": slopes,
        "slope_gap": slope_gap,
        "alpha_drift": curves.alpha_drift(),
        "first_order": {
            "finite_difference": fd,
            "pencil_formula": pencil,
            "pairing": pairing,
            "operator": operator,
            "fd_vs_pencil": fd_vs_pencil,
            "fd_vs_pairing": fd_vs_pairing,
            "pencil_vs_pairing": pencil_vs_pairing,
            "pencil_vs_operator": pencil_vs_operator,
        },
        "alpha_hellmann_feynman": [alpha.finite_difference, alpha.pencil_formula, alpha.pairing],
        "splitting_certificate": certificate,
    }));
    let a = &mut out.assertions;
    a.push(Assertion::at_most("compatibility_defect", compat, COMPATIBILITY_TOL));
    a.push(Assertion::at_most("determinant_error", det_err, DETERMINANT_TOL));
    if let Some(m) = m0 {
        a.push(Assertion::equal("multiplicity_at_zero", m as f64, 6.0));
    }
    a.push(Assertion::at_most("fd_vs_pencil", fd_vs_pencil, SLOPE_AGREEMENT_TOL));
    a.push(Assertion::at_most("fd_vs_pairing", fd_vs_pairing, SLOPE_AGREEMENT_TOL));
    a.push(Assertion::at_most("pencil_vs_pairing", pencil_vs_pairing, SLOPE_AGREEMENT_TOL));
    a.push(Assertion::at_most("alpha_pairing", alpha_pairing, PAIRING_TOL));
    a.push(Assertion::at_most("alpha_drift", curves.alpha_drift(), ALPHA_DRIFT_TOL));
    a.push(Assertion::positive("splitting_certificate", certificate));
    if p.epsilons.iter().any(|e| *e != 0.0) {
        a.push(Assertion::positive("spread_fit", spread_fit));
    }
    if p.epsilons.iter().any(|e| *e > 0.0) {
        a.push(Assertion::positive("slope_gap", slope_gap));
    }
    if p.beta == BetaChoice::Standard {
        let bv = problem.vector_of(&family.beta).map_err(LabError::compute)?;
        let b = hellmann_feynman(&problem, &first, &bv, window, p.fd_step).map_err(LabError::compute)?;
        let target = standard_beta_quartic_half();
        let err = (b.pairing - target).abs() / target;
        out.report["beta_hellmann_feynman"] = json!([b.finite_difference, b.pencil_formula, b.pairing]);
        out.report["beta_quartic_half"] = json!(target);
        out.assertions.push(Assertion::at_most("beta_pairing_relative_error", err, PAIRING_TOL));
        out.assertions.push(Assertion::at_most("beta_three_way", b.max_relative_disagreement(0.0), SLOPE_AGREEMENT_TOL));
    }

    let mut fo = Table::new("first_order.csv", &["index", "finite_difference", "pencil_formula", "pairing", "operator"]);
    for i in 0..pencil.len() {
        let cell = |v: &[f64]| v.get(i).map_or_else(String::new, |x| num(*x));
        fo.rows.push(vec![i.to_string(), cell(&fd), cell(&pencil), cell(&pairing), cell(&operator)]);
    }
    out.tables.push(fo);
    out.extra_files.push(("splitting_curves.csv".into(), curves.to_csv()));
    let hash = metric_hash(&g).map_err(LabError::compute)?;
    out.extra_files.extend(matrix_files("exterior", &problem.b, p.k, &hash)?);
    out.extra_files.extend(matrix_files("mass_derivative", &first.m_dot, p.k, &hash)?);
    Ok(out)
}

/// `π(q)` spectra, σ-match defects, the derivative check and the splitting
/// certificate of `π′` for one operator family.
fn pi_family_report(family: &dyn OperatorFamily, cluster: &ClusterSpec, qs: &[f64], out: &mut Outcome) -> Result<()> {
    let mut table = Table::new("pi_spectrum.csv", &[]);
    table.header = std::iter::once("q".to_string()).chain((1..=cluster.multiplicity).map(|i| format!("mu_{i}"))).collect();
    let mut sigma: f64 = 0.0;
    let mut idem: f64 = 0.0;
    let reports: Vec<_> =
        qs.par_iter().map(|&q| pi_map(family, q, 0.0, cluster)).collect::<std::result::Result<_, _>>().map_err(LabError::compute)?;
    for r in &reports {
        sigma = sigma.max(r.sigma_match_defect);
        idem = idem.max(r.idempotency_defect);
        let mut ev: Vec<f64> = r.pi.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let mut row = vec![r.q];
        row.extend(ev);
        table.push_numbers(&row);
    }
    let u0 = cluster_frame(family, 0.0, cluster).map_err(LabError::compute)?;
    let exact = pi_derivative(&family.derivative(0.0), &u0);
    let pi = |t: f64| pi_map(family, t, 0.0, cluster).map(|r| r.pi);
    let h = 1e-2;
    let central = |h: f64| -> Result<DMatrix<f64>> { Ok((pi(h).map_err(LabError::compute)? - pi(-h).map_err(LabError::compute)?) / (2.0 * h)) };
    let rich = (central(0.5 * h)? * 4.0 - central(h)?) / 3.0;
    let deriv_err = (rich - &exact).amax() / exact.amax().max(f64::MIN_POSITIVE);
    let certificate = splitting_certificate(&exact);
    out.report["sigma_match_defect"] = json!(sigma);
    out.report["idempotency_defect"] = json!(idem);
    out.report["pi_derivative_relative_error"] = json!(deriv_err);
    out.report["splitting_certificate"] = json!(certificate);
    out.assertions.push(Assertion::at_most("sigma_match_defect", sigma, SIGMA_MATCH_TOL));
    out.assertions.push(Assertion::at_most("pi_derivative_relative_error", deriv_err, PI_DERIVATIVE_TOL));
    out.tables.push(table);
    Ok(())
}

pub fn pi_map_run(p: &PiMapParams, seed: u64) -> Result<Outcome> {
    match p.source {
        PiSource::Random => {
            let (family, mut cluster) = clustered_family(p.dim, p.multiplicity, seed);
            cluster.nodes = p.nodes;
            let mut out = Outcome::new(json!({
                "source": "random",
                "dim": p.dim,
                "multiplicity": p.multiplicity,
                "center": cluster.center,
                "radius": cluster.radius,
                "q": p.q,
            }));
            pi_family_report(&family, &cluster, &p.q, &mut out)?;
            Ok(out)
        }
        PiSource::Galerkin => {
            let (form, g) = std_contact_t3();
            let fam = metric_family(&form, &g, &standard_beta(), &[]).map_err(LabError::compute)?;
            let problem = PerturbationProblem::new(&form, &fam, p.k).map_err(LabError::compute)?;
            let c0 = problem.cluster(0.0, beltrami_galerkin::UNIT_WINDOW).map_err(LabError::compute)?;
            let indices = problem.support_blocks(&c0.vectors);
            let family = GalerkinFamily { problem: &problem, indices };
            let cluster = ClusterSpec { center: 1.0, radius: 0.2, multiplicity: c0.multiplicity(), nodes: p.nodes };
            let mut out = Outcome::new(json!({
                "source": "galerkin",
                "truncation": p.k,
                "block_dimension": family.indices.len(),
                "multiplicity": cluster.multiplicity,
                "center": cluster.center,
                "radius": cluster.radius,
                "q": p.q,
            }));
            pi_family_report(&family, &cluster, &p.q, &mut out)?;
            let cert = out.report["splitting_certificate"].as_f64().unwrap_or(0.0);
            out.assertions.push(Assertion::positive("splitting_certificate", cert));
            Ok(out)
        }
    }
}
