mod common;

use common::tanh_sinh;
use proptest::prelude::*;
use trapci::basis::{shell_powers, GTO_EXPONENTS};
use trapci::linalg::solve_canonical;
use trapci::one_body::{
    kinetic, one_body_matrices, one_particle_spectrum, overlap, trap_potential,
};
use trapci::{
    expand_shells, morse_value, normalization_constant, BasisSet, GaussianWell, GtoPrimitive,
    MorseParams, ShellSpec, TrapParams,
};

/// `int f(x) dx` over the real line for a Gaussian-damped integrand near `c`.
fn line(f: impl Fn(f64) -> f64, c: f64) -> f64 {
    tanh_sinh(f, c - 14.0, c + 14.0, 1e-14)
}

fn axis(p: &GtoPrimitive, ax: usize, x: f64) -> f64 {
    let d = x - p.center[ax];
    d.powi(p.powers[ax] as i32) * (-p.tau * d * d).exp()
}

fn axis_derivative(p: &GtoPrimitive, ax: usize, x: f64) -> f64 {
    let d = x - p.center[ax];
    let i = p.powers[ax] as i32;
    let lower = if i > 0 { i as f64 * d.powi(i - 1) } else { 0.0 };
    (lower - 2.0 * p.tau * d.powi(i + 1)) * (-p.tau * d * d).exp()
}

fn norm2(p: &GtoPrimitive) -> f64 {
    p.norm * p.norm
}

fn prim_strategy(sigma_max: u32) -> impl Strategy<Value = GtoPrimitive> {
    (
        0..=sigma_max,
        0usize..21,
        0usize..4,
        prop::array::uniform3(-0.7f64..0.7),
    )
        .prop_map(|(s, k, t, c)| {
            let shell = shell_powers(s);
            GtoPrimitive::new(shell[k % shell.len()], GTO_EXPONENTS[t], c).unwrap()
        })
}

#[test]
fn normalization_matches_quadrature() {
    for sigma in 0..=5 {
        for powers in shell_powers(sigma) {
            for tau in GTO_EXPONENTS {
                let n = normalization_constant(powers[0], powers[1], powers[2], tau).unwrap();
                let integral: f64 = (0..3)
                    .map(|ax| {
                        line(
                            |x| x.powi(2 * powers[ax] as i32) * (-2.0 * tau * x * x).exp(),
                            0.0,
                        )
                    })
                    .product();
                assert!((n * n * integral - 1.0).abs() < 1e-10, "{powers:?} {tau}");
            }
        }
    }
}

#[test]
fn morse_minimum_sits_at_rm() {
    let m = MorseParams::standard(5.0).unwrap();
    let (mut best, mut at) = (f64::INFINITY, 0.0);
    for k in 1..200_000 {
        let r = k as f64 * 1e-5;
        let v = morse_value(&m, r);
        if v < best {
            best = v;
            at = r;
        }
    }
    assert!((at - m.rm).abs() <= 1e-5);
    assert!((best + 5.0).abs() < 1e-8);
}

#[test]
fn matrices_symmetric_and_overlap_definite() {
    let basis = BasisSet::gto();
    let m = one_body_matrices(&basis, &TrapParams::default());
    let n = basis.len();
    for i in 0..n {
        for j in 0..n {
            for mat in [&m.s, &m.t, &m.v, &m.h] {
                assert!((mat[(i, j)] - mat[(j, i)]).abs() <= 1e-14);
            }
        }
    }
    let evd = m.s.self_adjoint_eigen(faer::Side::Lower).unwrap();
    let vals: Vec<f64> = evd.S().column_vector().iter().copied().collect();
    let max = vals.iter().copied().fold(0.0, f64::max);
    assert!(vals.iter().all(|&v| v > 1e-10 * max));
}

#[test]
fn single_gaussian_is_the_oscillator_ground_state() {
    let basis = expand_shells(&[ShellSpec::new(0, &[0.5])]).unwrap();
    let e = one_particle_spectrum(&basis, &TrapParams::default(), 1e-10).unwrap();
    assert!((e[0] - 1.5).abs() < 1e-15);
}

#[test]
fn gto_basis_reproduces_low_oscillator_levels() {
    let e = one_particle_spectrum(&BasisSet::gto(), &TrapParams::default(), 1e-10).unwrap();
    let want = [1.5, 2.5, 2.5, 2.5, 3.5, 3.5, 3.5, 3.5, 3.5, 3.5];
    for (got, w) in e.iter().zip(want) {
        assert!((got - w).abs() < 1e-8, "{got} vs {w}");
    }
}

#[test]
fn gaussian_well_trap_is_variational() {
    let well = GaussianWell::from_oscillator_units([0.0; 3], 10.0, 1.0).unwrap();
    let trap = TrapParams::wells(vec![well]).unwrap();
    let m = one_body_matrices(&BasisSet::gto_ladder(1), &trap);
    let ground = solve_canonical(m.h.as_ref(), m.s.as_ref(), 1e-10)
        .unwrap()
        .values[0];
    assert!(ground > -10.0 && ground < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn overlap_kinetic_trap_match_quadrature(a in prim_strategy(3), b in prim_strategy(3)) {
        let nn = (norm2(&a) * norm2(&b)).sqrt();
        let s_ax: Vec<f64> = (0..3).map(|ax| line(|x| axis(&a, ax, x) * axis(&b, ax, x), a.center[ax])).collect();
        let t_ax: Vec<f64> = (0..3)
            .map(|ax| 0.5 * line(|x| axis_derivative(&a, ax, x) * axis_derivative(&b, ax, x), a.center[ax]))
            .collect();
        let x2_ax: Vec<f64> = (0..3)
            .map(|ax| line(|x| x * x * axis(&a, ax, x) * axis(&b, ax, x), a.center[ax]))
            .collect();
        let s = nn * s_ax.iter().product::<f64>();
        let others = |ax: usize| (0..3).filter(|&k| k != ax).map(|k| s_ax[k]).product::<f64>();
        let t = nn * (0..3).map(|ax| t_ax[ax] * others(ax)).sum::<f64>();
        let v = nn * 0.5 * (0..3).map(|ax| x2_ax[ax] * others(ax)).sum::<f64>();
        prop_assert!((overlap(&a, &b) - s).abs() < 1e-12);
        prop_assert!((kinetic(&a, &b) - t).abs() < 1e-11);
        prop_assert!((trap_potential(&a, &b, &TrapParams::default()) - v).abs() < 1e-11);
    }

    #[test]
    fn gaussian_well_matches_quadrature(a in prim_strategy(2), b in prim_strategy(2), c in prop::array::uniform3(-0.5f64..0.5), w in 0.3f64..2.0) {
        let well = GaussianWell::from_oscillator_units(c, 3.0, w).unwrap();
        let eta = well.eta();
        let nn = (norm2(&a) * norm2(&b)).sqrt();
        let want = -3.0 * nn * (0..3)
            .map(|ax| line(|x| axis(&a, ax, x) * axis(&b, ax, x) * (-eta * (x - well.center[ax]).powi(2)).exp(), a.center[ax]))
            .product::<f64>();
        let got = trap_potential(&a, &b, &TrapParams::wells(vec![well]).unwrap());
        prop_assert!((got - want).abs() < 1e-12, "{} vs {}", got, want);
    }

    #[test]
    fn shell_sizes(sigma in 0u32..8, ntau in 1usize..4) {
        let taus = &GTO_EXPONENTS[..ntau];
        let b = expand_shells(&[ShellSpec::new(sigma, taus)]).unwrap();
        prop_assert_eq!(b.len(), ((sigma + 1) * (sigma + 2) / 2) as usize * ntau);
    }
}
