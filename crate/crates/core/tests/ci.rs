use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trapci::ci::{
    classify_states, cluster_energies, evaluate_density_cut, AxisGrid, DEFAULT_DEGENERACY_TOL,
    DEFAULT_LINDEP, ROUTE_CHECK_LINDEP,
};
use trapci::linalg::s_orthonormality_residual;
use trapci::morse::{build_integral_tensor, DEFAULT_THRESHOLD};
use trapci::one_body::one_particle_spectrum;
use trapci::reference::{reference_spectrum, StateName};
use trapci::{
    assemble, enumerate_configurations, one_body_matrices, solve, solve_congruence,
    solve_congruence_pruned, BasisSet, CiMatrices, CiSolution, MorseParams, TrapParams,
};

fn ci(basis: &BasisSet, de: Option<f64>) -> (CiMatrices, CiSolution) {
    let one = one_body_matrices(basis, &TrapParams::default());
    let space = enumerate_configurations(basis.len()).unwrap();
    let tensor = de.map(|d| {
        build_integral_tensor(basis, &MorseParams::standard(d).unwrap(), DEFAULT_THRESHOLD).unwrap()
    });
    let m = assemble(&space, &one, tensor.as_ref()).unwrap();
    let s = solve(&space, &m, DEFAULT_LINDEP).unwrap();
    (m, s)
}

/// Symmetric two-boson states of the isotropic oscillator with `n` total quanta.
fn pair_degeneracy(n: u32) -> usize {
    let shell = |k: u32| ((k + 1) * (k + 2) / 2) as usize;
    (0..=n / 2)
        .map(|k| {
            let j = n - k;
            if k == j {
                shell(k) * (shell(k) + 1) / 2
            } else {
                shell(k) * shell(j)
            }
        })
        .sum()
}

#[test]
fn noninteracting_spectrum_is_pair_sums() {
    let basis = BasisSet::gto_ladder(1);
    let e1 = one_particle_spectrum(&basis, &TrapParams::default(), DEFAULT_LINDEP).unwrap();
    let mut sums: Vec<f64> = Vec::new();
    for i in 0..e1.len() {
        for j in i..e1.len() {
            sums.push(e1[i] + e1[j]);
        }
    }
    sums.sort_by(f64::total_cmp);
    let (_, s) = ci(&basis, None);
    assert_eq!(s.energies.len(), sums.len());
    for (got, want) in s.energies.iter().zip(&sums) {
        assert!((got - want).abs() <= 1e-10 * want.abs(), "{got} vs {want}");
    }
}

#[test]
fn matrices_symmetric_with_positive_overlap_diagonal() {
    let (m, _) = ci(&BasisSet::gto_ladder(1), Some(5.0));
    let n = m.h.nrows();
    for i in 0..n {
        assert!(m.s[(i, i)] > 0.0);
        for j in 0..i {
            assert!((m.h[(i, j)] - m.h[(j, i)]).abs() <= 1e-12);
            assert!((m.s[(i, j)] - m.s[(j, i)]).abs() <= 1e-12);
        }
    }
}

#[test]
fn eigenvectors_are_overlap_orthonormal() {
    let (m, s) = ci(&BasisSet::gto_ladder(2), Some(3.0));
    // states below 12 hbar omega; the tail is built from near-null overlap directions
    let low = s.energies.iter().take_while(|&&e| e < 12.0).count();
    let r = s_orthonormality_residual(s.coefficients.subcols(0, low), m.s.as_ref());
    assert!(r <= 1e-8, "{r}");
    assert!(s.energies.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn basis_order_does_not_matter() {
    let basis = BasisSet::gto_ladder(1);
    let mut shuffled = basis.clone();
    shuffled
        .primitives
        .shuffle(&mut ChaCha8Rng::seed_from_u64(5));
    assert_ne!(shuffled.primitives, basis.primitives);
    let (_, a) = ci(&basis, Some(5.0));
    let (_, b) = ci(&shuffled, Some(5.0));
    assert_eq!(a.kept, b.kept);
    for (x, y) in a.energies.iter().zip(&b.energies) {
        assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn solver_routes_agree() {
    let (m, full) = ci(&BasisSet::gto_ladder(2), Some(3.0));
    let a = solve(&full.space, &m, ROUTE_CHECK_LINDEP).unwrap();
    let b = solve_congruence_pruned(&full.space, &m, ROUTE_CHECK_LINDEP).unwrap();
    assert_eq!(a.kept, b.kept);
    for (x, y) in a.energies.iter().zip(&b.energies) {
        assert!((x - y).abs() <= 1e-9 * x.abs(), "{x} vs {y}");
    }
    // unpruned Cholesky against the default pruning for the lowest states
    let c = solve_congruence(&full.space, &m).unwrap();
    for (x, y) in full.energies.iter().zip(&c.energies).take(20) {
        assert!((x - y).abs() <= 1e-6 * x.abs(), "{x} vs {y}");
    }
}

#[test]
fn oscillator_degeneracies_without_interaction() {
    let (_, s) = ci(&BasisSet::gto(), None);
    let clusters = s.clusters(DEFAULT_DEGENERACY_TOL);
    for (k, c) in clusters.iter().take(3).enumerate() {
        assert_eq!(c.len(), pair_degeneracy(k as u32));
        assert!((s.energies[c[0]] - (3.0 + k as f64)).abs() < 1e-6);
    }
    let labels = classify_states(&s, DEFAULT_DEGENERACY_TOL);
    assert_eq!(labels[0].l_guess, Some(0));
    assert_eq!(labels[1].l_guess, Some(1));
}

#[test]
fn single_state_single_cluster() {
    assert_eq!(cluster_energies(&[2.5], 1e-4), vec![vec![0]]);
}

#[test]
fn ground_state_variational_on_the_ladder() {
    let reference = reference_spectrum(&MorseParams::standard(13.0).unwrap()).unwrap();
    let e_ref = reference.energy(StateName::Mgs).unwrap();
    let mut last = f64::INFINITY;
    for sigma in 0..=2 {
        let (_, s) = ci(&BasisSet::gto_ladder(sigma), Some(13.0));
        assert!(s.energies[0] <= last);
        assert!(s.energies[0] > e_ref);
        last = s.energies[0];
    }
}

#[test]
fn noninteracting_ground_density_peaks_at_origin() {
    let basis = BasisSet::gto_ladder(1);
    let (_, s) = ci(&basis, None);
    let grid = AxisGrid::new(-2.0, 2.0, 41).unwrap();
    let cut = evaluate_density_cut(&s, 0, &basis, &grid).unwrap();
    let centre = 20 * cut.n() + 20;
    let max = cut.density.iter().copied().fold(0.0, f64::max);
    assert_eq!(cut.density[centre], max);
    assert!(cut.amplitude[centre] > 0.0);
    assert!(cut.amplitude.iter().all(|&a| a > 0.0));
    assert!(evaluate_density_cut(&s, s.n_states(), &basis, &grid).is_err());
}
