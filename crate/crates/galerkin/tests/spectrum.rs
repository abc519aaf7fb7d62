use beltrami_contact::{metric_family, standard_beta, standard_beta_quartic_half, std_contact_t3, MetricField, OneForm, TrigPoly};
use beltrami_core::{lattice_shell, WaveVector};
use beltrami_galerkin::io::{metric_hash, read_matrix, write_matrix};
use beltrami_galerkin::{
    assemble_exterior, assemble_mass, build_basis, family_mass, family_mass_derivative, finite_difference_slopes,
    hellmann_feynman, solve_pencil, splitting_certificate, track_splitting, FirstOrder, GalerkinError, GalerkinPencil,
    PerturbationProblem, DEFAULT_FD_STEP, UNIT_WINDOW,
};
use nalgebra::DMatrix;

fn flat_pencil(k: u32) -> GalerkinPencil {
    let basis = build_basis(k);
    GalerkinPencil::new(assemble_exterior(&basis), assemble_mass(&MetricField::flat(), &basis).unwrap())
}

fn standard_problem(k: u32) -> PerturbationProblem {
    let (form, g) = std_contact_t3();
    let fam = metric_family(&form, &g, &standard_beta(), &[]).unwrap();
    PerturbationProblem::new(&form, &fam, k).unwrap()
}

fn cube_count(n: i64, k: i32) -> usize {
    let mut c = 0;
    for a in -k..=k {
        for b in -k..=k {
            for d in -k..=k {
                if i64::from(a * a + b * b + d * d) == n {
                    c += 1;
                }
            }
        }
    }
    c
}

#[test]
fn flat_spectrum_is_lattice_shells() {
    let k = 3;
    let spectrum = flat_pencil(k).spectrum();
    let positive: Vec<f64> = spectrum.iter().copied().filter(|&l| l > 0.1).collect();
    let mut counted = 0;
    for n in 1..=27i64 {
        let root = (n as f64).sqrt();
        let m = positive.iter().filter(|l| (*l - root).abs() < 1e-9).count();
        assert_eq!(m, cube_count(n, k as i32), "n = {n}");
        if n <= i64::from((k - 1) * (k - 1)) {
            assert_eq!(m, lattice_shell(n as u32).multiplicity(), "n = {n}");
        }
        counted += m;
    }
    assert_eq!(counted, positive.len());
}

#[test]
fn zero_cluster_counts_closed_forms() {
    for k in 1..=2u32 {
        let c = solve_pencil(&flat_pencil(k), (-0.5, 0.5)).unwrap();
        assert_eq!(c.multiplicity(), (2 * k as usize + 1).pow(3) + 2);
    }
}

#[test]
fn sqrt_two_shell_is_twelvefold() {
    let c = solve_pencil(&flat_pencil(2), (1.2, 1.6)).unwrap();
    assert_eq!(c.multiplicity(), 12);
    assert!(c.eigenvalues.iter().all(|l| (l - 2f64.sqrt()).abs() < 1e-12));
}

#[test]
fn exterior_matches_flat_gram_on_unit_eigenforms() {
    // The six unit curl eigenfields written as 1-forms.
    let (e1, e2, e3) = (WaveVector::unit(0), WaveVector::unit(1), WaveVector::unit(2));
    let forms = [
        OneForm::new([TrigPoly::cos(e3, 1.0), TrigPoly::sin(e3, -1.0), TrigPoly::zero()]),
        OneForm::new([TrigPoly::sin(e3, 1.0), TrigPoly::cos(e3, 1.0), TrigPoly::zero()]),
        OneForm::new([TrigPoly::zero(), TrigPoly::sin(e1, 1.0), TrigPoly::cos(e1, 1.0)]),
        OneForm::new([TrigPoly::zero(), TrigPoly::cos(e1, 1.0), TrigPoly::sin(e1, -1.0)]),
        OneForm::new([TrigPoly::sin(e2, -1.0), TrigPoly::zero(), TrigPoly::cos(e2, 1.0)]),
        OneForm::new([TrigPoly::cos(e2, 1.0), TrigPoly::zero(), TrigPoly::sin(e2, 1.0)]),
    ];
    let basis = build_basis(1);
    let v = DMatrix::from_columns(&forms.iter().map(|f| basis.coordinates(f).unwrap()).collect::<Vec<_>>());
    let b = assemble_exterior(&basis);
    let gram = DMatrix::from_diagonal(&basis.flat_gram_diagonal());
    let lhs = v.transpose() * b * &v;
    let rhs = v.transpose() * gram * &v;
    assert!((lhs - rhs).amax() < 1e-12);
}

#[test]
fn family_mass_matches_direct_quadrature_of_inverse_family() {
    // For the flat base g_ε⁻¹ = g_{−ε}, and det g_ε = 1, so
    // M(ε)_ij = ∫ e_iᵀ g_{−ε} e_j dx: no matrix inversion or FFT involved.
    let (form, g) = std_contact_t3();
    let beta = OneForm::new([TrigPoly::zero(), TrigPoly::sin(WaveVector::unit(0), 1.0), TrigPoly::cos(WaveVector::unit(0), 1.0)]);
    let fam = metric_family(&form, &g, &beta, &[]).unwrap();
    let basis = build_basis(1);
    let eps = 0.15;
    let m = family_mass(&fam, eps, &basis).unwrap();
    let n = 48;
    let ginv = fam.member(-eps).unwrap().on_grid(n);
    let sub: Vec<usize> = (0..basis.dim()).step_by(4).collect();
    let unit = |i: usize| {
        let mut e = nalgebra::DVector::zeros(basis.dim());
        e[i] = 1.0;
        basis.to_form(&e).on_grid(n)
    };
    let grids: Vec<_> = sub.iter().map(|&i| unit(i)).collect();
    let vol = std::f64::consts::TAU.powi(3);
    for (a, &i) in sub.iter().enumerate() {
        for (b, &j) in sub.iter().enumerate() {
            let mut s = 0.0;
            for p in 0..n * n * n {
                for r in 0..3 {
                    for c in 0..3 {
                        s += grids[a][r][p] * ginv[p][r][c] * grids[b][c][p];
                    }
                }
            }
            let direct = s / (n * n * n) as f64 * vol;
            assert!((direct - m[(i, j)]).abs() < 1e-10 * vol, "({i},{j}) {direct} {}", m[(i, j)]);
        }
    }
}

#[test]
fn mass_derivative_matches_richardson_difference() {
    let (form, g) = std_contact_t3();
    let fam = metric_family(&form, &g, &standard_beta(), &[]).unwrap();
    let basis = build_basis(2);
    let exact = family_mass_derivative(&fam, 0.0, &basis).unwrap();
    let central = |h: f64| (family_mass(&fam, h, &basis).unwrap() - family_mass(&fam, -h, &basis).unwrap()) / (2.0 * h);
    let h = 1e-2;
    let rich = (central(0.5 * h) * 4.0 - central(h)) / 3.0;
    let scale = exact.amax();
    let err = (rich - &exact).amax() / scale;
    assert!(err <= 1e-8, "{err:e}");
}

#[test]
fn splitting_curves_start_sixfold_and_keep_alpha() {
    let p = standard_problem(2);
    let eps = [-0.2, -0.1, 0.0, 0.1, 0.2];
    let curves = track_splitting(&p, &eps, UNIT_WINDOW).unwrap();
    assert_eq!(curves.multiplicities(), vec![6; 5]);
    assert!(curves.curves[2].iter().all(|l| (l - 1.0).abs() < 1e-12));
    assert!(curves.alpha_drift() < 1e-9);
    assert!(curves.alpha_residual.iter().all(|r| *r < 1e-9));
    let (fit, min_ratio) = curves.spread_fit();
    assert!(fit > 0.0 && min_ratio > 0.0);
}

#[test]
fn slopes_match_first_order_matrix() {
    let p = standard_problem(2);
    let fo = FirstOrder::new(&p, UNIT_WINDOW).unwrap();
    let fd = finite_difference_slopes(&p, UNIT_WINDOW, DEFAULT_FD_STEP).unwrap();
    let ev = FirstOrder::sorted_eigenvalues(&fo.pi_pencil);
    let ep = FirstOrder::sorted_eigenvalues(&fo.pi_pairing);
    let scale = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..6 {
        assert!((fd[i] - ev[i]).abs() <= 1e-6 * scale, "{fd:?} {ev:?}");
        assert!((ep[i] - ev[i]).abs() <= 1e-12 * scale);
    }
    assert!(fo.pi_pencil.row(0).amax() <= 1e-14 && fo.pi_pencil.column(0).amax() <= 1e-14);
}

#[test]
fn hellmann_feynman_for_alpha_and_beta() {
    let p = standard_problem(1);
    let fo = FirstOrder::new(&p, UNIT_WINDOW).unwrap();
    let a = hellmann_feynman(&p, &fo, &p.alpha_vector(), UNIT_WINDOW, DEFAULT_FD_STEP).unwrap();
    assert!(a.finite_difference.abs() < 1e-8 && a.pencil_formula.abs() < 1e-8 && a.pairing.abs() < 1e-8, "{a:?}");
    let beta = p.vector_of(&p.family.beta).unwrap();
    let b = hellmann_feynman(&p, &fo, &beta, UNIT_WINDOW, DEFAULT_FD_STEP).unwrap();
    let target = standard_beta_quartic_half();
    assert!((b.pairing - target).abs() <= 1e-8 * target);
    assert!(b.max_relative_disagreement(0.0) <= 1e-6, "{b:?}");
}

#[test]
fn mixed_direction_is_degenerate() {
    let p = standard_problem(1);
    let fo = FirstOrder::new(&p, UNIT_WINDOW).unwrap();
    let mix = p.alpha_vector() + p.vector_of(&p.family.beta).unwrap();
    assert!(matches!(
        hellmann_feynman(&p, &fo, &mix, UNIT_WINDOW, DEFAULT_FD_STEP),
        Err(GalerkinError::DegenerateDirection { .. })
    ));
}

#[test]
fn galerkin_pi_prime_is_not_scalar() {
    let p = standard_problem(1);
    let fo = FirstOrder::new(&p, UNIT_WINDOW).unwrap();
    assert!(fo.pi_pencil[(0, 0)].abs() < 1e-15);
    assert!(fo.pi_pencil[(1, 1)] > 0.0);
    assert!(splitting_certificate(&fo.pi_pencil) > 1e-4);
    let via_operator = fo.operator_first_order(&p);
    assert!((via_operator - &fo.pi_pencil).amax() < 1e-12);
}

#[test]
fn matrices_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let basis = build_basis(1);
    let g = MetricField::flat();
    let m = assemble_mass(&g, &basis).unwrap();
    let hash = metric_hash(&g).unwrap();
    let meta = write_matrix(dir.path(), "mass", &m, 1, &hash).unwrap();
    let (back, meta2) = read_matrix(dir.path(), "mass").unwrap();
    assert_eq!(back, m);
    assert_eq!(meta, meta2);
    assert_eq!(meta.dimension, 81);
}
