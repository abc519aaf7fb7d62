//! Prints the first-order matrices, finite-difference slopes and splitting
//! curves for the standard perturbation at a given truncation.

use std::time::Instant;

use beltrami_contact::{metric_family, standard_beta, standard_beta_quartic_half, std_contact_t3};
use beltrami_galerkin::{
    finite_difference_slopes, hellmann_feynman, splitting_certificate, track_splitting, FirstOrder, PerturbationProblem,
    DEFAULT_FD_STEP, UNIT_WINDOW,
};

fn main() {
    let k: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let (form, g) = std_contact_t3();
    let fam = metric_family(&form, &g, &standard_beta(), &[]).unwrap();
    let t = Instant::now();
    let problem = PerturbationProblem::new(&form, &fam, k).unwrap();
    let sizes: Vec<usize> = problem.blocks.iter().map(Vec::len).filter(|&l| l > 6).collect();
    println!("K = {k}, D = {}, large blocks {sizes:?} ({:.2?})", problem.basis.dim(), t.elapsed());
    let t = Instant::now();
    let fo = FirstOrder::new(&problem, UNIT_WINDOW).unwrap();
    println!("first order ({:.2?})\nΠ pencil = {:.6e}Π pairing = {:.6e}", t.elapsed(), fo.pi_pencil, fo.pi_pairing);
    println!("eig Π = {:?}", FirstOrder::sorted_eigenvalues(&fo.pi_pencil));
    println!("β pairing target = {:.15e}", standard_beta_quartic_half());
    println!("certificate = {:e}", splitting_certificate(&fo.pi_pencil));
    let t = Instant::now();
    let fd = finite_difference_slopes(&problem, UNIT_WINDOW, DEFAULT_FD_STEP).unwrap();
    println!("fd slopes = {fd:?} ({:.2?})", t.elapsed());
    let alpha = problem.alpha_vector();
    println!("HF α: {:?}", hellmann_feynman(&problem, &fo, &alpha, UNIT_WINDOW, DEFAULT_FD_STEP));
    let beta = problem.vector_of(&fam.beta).unwrap();
    println!("HF β: {:?}", hellmann_feynman(&problem, &fo, &beta, UNIT_WINDOW, DEFAULT_FD_STEP));
    let t = Instant::now();
    let eps: Vec<f64> = (-4..=4).map(|i| 0.05 * f64::from(i)).collect();
    let curves = track_splitting(&problem, &eps, UNIT_WINDOW).unwrap();
    println!("curves ({:.2?}) spread fit {:?} α drift {:e}", t.elapsed(), curves.spread_fit(), curves.alpha_drift());
    println!("positive slopes {:?}", curves.positive_slopes());
}
