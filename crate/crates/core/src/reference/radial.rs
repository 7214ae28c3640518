//! Finite-difference radial solver for the relative motion.

use crate::error::{Error, Result};
use crate::potential::{morse_value, MorseParams};
use crate::units::{self, MU, OMEGA};

/// `-(1/2mu) u'' + [l(l+1)/(2 mu r^2) + trap + U(r)] u = E u` with `u(0) = 0`
/// and `u(r_max) = 0`. Lengths in `d_ho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub ell: u32,
    pub morse: MorseParams,
    pub trapped: bool,
    pub r_max: f64,
    /// Interior points of the coarsest grid.
    pub n_points: usize,
}

pub const DEFAULT_R_MAX: f64 = 12.0;
pub const DEFAULT_POINTS: usize = 20_000;
/// Largest accepted change of a Richardson estimate under one more halving.
pub const RICHARDSON_TOL: f64 = 1e-5;

impl RadialProblem {
    pub fn trapped(ell: u32, morse: MorseParams) -> Self {
        Self {
            ell,
            morse,
            trapped: true,
            r_max: DEFAULT_R_MAX,
            n_points: DEFAULT_POINTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 5000 {
            return Err(Error::invalid(format!(
                "radial grid needs >= 5000 points, got {}",
                self.n_points
            )));
        }
        if !(self.r_max > 0.0) || (self.trapped && self.r_max < 10.0) {
            return Err(Error::invalid(format!(
                "trapped radial problems need r_max >= 10 d_ho, got {}",
                self.r_max
            )));
        }
        Ok(())
    }

    /// Effective potential in internal units.
    pub fn potential(&self, r: f64) -> f64 {
        let l = self.ell as f64;
        let mut v = l * (l + 1.0) / (2.0 * MU * r * r) + morse_value(&self.morse, r);
        if self.trapped {
            v += 0.5 * MU * OMEGA * OMEGA * r * r;
        }
        v
    }

    fn discretize(&self, n: usize) -> Tridiagonal {
        let r_max = units::length_from_dho(self.r_max);
        let h = r_max / (n + 1) as f64;
        let k = 1.0 / (2.0 * MU * h * h);
        let diag = (1..=n)
            .map(|i| 2.0 * k + self.potential(i as f64 * h))
            .collect();
        Tridiagonal { h, diag, off: -k }
    }
}

/// Symmetric tridiagonal matrix with a constant off-diagonal.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    pub h: f64,
    pub diag: Vec<f64>,
    pub off: f64,
}

impl Tridiagonal {
    /// Number of eigenvalues below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let o2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - o2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs()).max(1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th eigenvalue (from zero) by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let mut lo = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - 2.0 * self.off.abs();
        let mut step = 1.0;
        let mut hi = lo + step;
        while self.count_below(hi) <= k {
            lo = hi;
            step *= 2.0;
            hi += step;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an eigenvalue already found, by inverse iteration.
    fn eigenvector(&self, e: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = e - 1e-10 * e.abs().max(1.0);
        let mut x = vec![1.0; n];
        for _ in 0..4 {
            // Thomas algorithm on (T - shift) y = x
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            let mut denom = self.diag[0] - shift;
            c[0] = self.off / denom;
            d[0] = x[0] / denom;
            for i in 1..n {
                denom = self.diag[i] - shift - self.off * c[i - 1];
                c[i] = self.off / denom;
                d[i] = (x[i] - self.off * d[i - 1]) / denom;
            }
            let mut y = vec![0.0; n];
            y[n - 1] = d[n - 1];
            for i in (0..n - 1).rev() {
                y[i] = d[i] - c[i] * y[i + 1];
            }
            let norm = (y.iter().map(|v| v * v).sum::<f64>() * self.h).sqrt();
            x = y.into_iter().map(|v| v / norm).collect();
        }
        if x.iter()
            .find(|v| v.abs() > 1e-300)
            .is_some_and(|&v| v < 0.0)
        {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }
}

/// Richardson-extrapolated levels and the raw values behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectrum {
    pub energies: Vec<f64>,
    /// Raw grid eigenvalues for `h`, `h/2`, `h/4`.
    pub raw: [Vec<f64>; 3],
}

impl RadialSpectrum {
    /// Largest change between the two Richardson estimates.
    pub fn richardson_change(&self) -> f64 {
        let r1 = richardson(&self.raw[0], &self.raw[1]);
        let r2 = richardson(&self.raw[1], &self.raw[2]);
        r1.iter()
            .zip(&r2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

fn grid_levels(problem: &RadialProblem, n: usize, n_states: usize) -> Vec<f64> {
    let t = problem.discretize(n);
    (0..n_states).map(|k| t.eigenvalue(k)).collect()
}

/// Lowest `n_states` levels in units of `hbar omega`.
pub fn radial_spectrum(problem: &RadialProblem, n_states: usize) -> Result<RadialSpectrum> {
    problem.validate()?;
    if n_states == 0 {
        return Err(Error::invalid("n_states must be >= 1"));
    }
    let n = problem.n_points;
    // h, h/2, h/4 on the same r_max
    let raw = [
        grid_levels(problem, n, n_states),
        grid_levels(problem, 2 * n + 1, n_states),
        grid_levels(problem, 4 * n + 3, n_states),
    ];
    let energies = richardson(&raw[1], &raw[2]);
    let out = RadialSpectrum { energies, raw };
    let change = out.richardson_change();
    if !(change < RICHARDSON_TOL) {
        let orders: Vec<f64> = (0..n_states)
            .map(|k| ((out.raw[0][k] - out.raw[1][k]) / (out.raw[1][k] - out.raw[2][k])).log2())
            .collect();
        return Err(Error::Convergence {
            what: "radial grid refinement",
            detail: format!("Richardson estimates moved by {change:e}, observed orders {orders:?}"),
        });
    }
    Ok(out)
}

/// Radial function `u(r)` on a uniform grid in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub ell: u32,
    pub energy: f64,
    pub h: f64,
    /// `u(i h)` for `i = 1..=n`, normalized to `int u^2 dr = 1`.
    pub u: Vec<f64>,
}

impl RadialState {
    /// `u(r) / r` by linear interpolation; tends to `u'(0)` at the origin.
    pub fn value_over_r(&self, r: f64) -> f64 {
        let x = r / self.h;
        let n = self.u.len();
        if x <= 1.0 {
            return self.u[0] / self.h;
        }
        let i = x.floor() as usize;
        if i >= n {
            return 0.0;
        }
        let f = x - i as f64;
        let a = self.u[i - 1] / (i as f64 * self.h);
        let b = self.u[i] / ((i + 1) as f64 * self.h);
        a + f * (b - a)
    }
}

/// State `k` on the `h/2` grid, energy Richardson-extrapolated.
pub fn radial_state(problem: &RadialProblem, k: usize) -> Result<RadialState> {
    let spec = radial_spectrum(problem, k + 1)?;
    let t = problem.discretize(2 * problem.n_points + 1);
    let e_grid = spec.raw[1][k];
    Ok(RadialState {
        ell: problem.ell,
        energy: spec.energies[k],
        h: t.h,
        u: t.eigenvector(e_grid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_s_levels() {
        let p = RadialProblem::trapped(0, MorseParams::standard(0.0).unwrap());
        let s = radial_spectrum(&p, 3).unwrap();
        for (e, x) in s.energies.iter().zip([1.5, 3.5, 5.5]) {
            assert!((e - x).abs() < 1e-7, "{e} vs {x}");
        }
    }

    #[test]
    fn oscillator_d_level() {
        let p = RadialProblem::trapped(2, MorseParams::standard(0.0).unwrap());
        let s = radial_spectrum(&p, 1).unwrap();
        assert!((s.energies[0] - 3.5).abs() < 1e-7);
    }

    #[test]
    fn rejects_coarse_grids() {
        let mut p = RadialProblem::trapped(0, MorseParams::standard(1.0).unwrap());
        p.n_points = 100;
        assert!(radial_spectrum(&p, 1).is_err());
        p.n_points = DEFAULT_POINTS;
        p.r_max = 5.0;
        assert!(radial_spectrum(&p, 1).is_err());
    }

    #[test]
    fn eigenvector_is_normalized_ground_gaussian() {
        let p = RadialProblem::trapped(0, MorseParams::standard(0.0).unwrap());
        let st = radial_state(&p, 0).unwrap();
        // ground state u ~ r exp(-r^2 / 4)
        let r1 = 0.5;
        let r2 = 1.5;
        let ratio = st.value_over_r(r2) / st.value_over_r(r1);
        let exact = (-(r2 * r2 - r1 * r1) / 4.0f64).exp();
        assert!((ratio - exact).abs() < 1e-5);
        let norm: f64 = st.u.iter().map(|v| v * v).sum::<f64>() * st.h;
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
