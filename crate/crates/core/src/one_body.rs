//! One-particle integrals over Cartesian Gaussians.
//!
//! Products of two Gaussians are expanded in Hermite Gaussians
//! `Lambda_t(x) = (d/dP)^t exp(-p (x - P)^2)` with McMurchie–Davidson
//! coefficients `E^{ij}_t`; every one-body integral here reduces to the
//! `t = 0` coefficient of a power-shifted pair, except the Gaussian well,
//! which integrates each `Lambda_t` against the well in closed form.

use std::f64::consts::PI;

use faer::Mat;

use crate::basis::{BasisSet, GtoPrimitive};
use crate::potential::{GaussianWell, TrapParams};
use crate::special::hermite_polynomials;

/// `E^{ij}_t` for `i <= imax`, `j <= jmax` along one axis.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    jmax: usize,
    tlen: usize,
    data: Vec<f64>,
}

impl HermiteTable {
    pub fn new(imax: usize, jmax: usize, tau: f64, chi: f64, ax: f64, bx: f64) -> Self {
        let p = tau + chi;
        let px = (tau * ax + chi * bx) / p;
        let (xpa, xpb) = (px - ax, px - bx);
        let half_inv_p = 0.5 / p;
        let tlen = imax + jmax + 1;
        let mut data = vec![0.0; (imax + 1) * (jmax + 1) * tlen];
        let idx = |i: usize, j: usize, t: usize| (i * (jmax + 1) + j) * tlen + t;
        data[idx(0, 0, 0)] = (-tau * chi / p * (ax - bx).powi(2)).exp();
        for i in 0..=imax {
            if i > 0 {
                for t in 0..=i {
                    let lower = if t > 0 {
                        data[idx(i - 1, 0, t - 1)]
                    } else {
                        0.0
                    };
                    let upper = if t + 1 < i {
                        data[idx(i - 1, 0, t + 1)]
                    } else {
                        0.0
                    };
                    data[idx(i, 0, t)] =
                        half_inv_p * lower + xpa * data[idx(i - 1, 0, t)] + (t + 1) as f64 * upper;
                }
            }
            for j in 1..=jmax {
                for t in 0..=i + j {
                    let prev = |tt: usize| {
                        if tt < i + j {
                            data[idx(i, j - 1, tt)]
                        } else {
                            0.0
                        }
                    };
                    let lower = if t > 0 { prev(t - 1) } else { 0.0 };
                    data[idx(i, j, t)] =
                        half_inv_p * lower + xpb * prev(t) + (t + 1) as f64 * prev(t + 1);
                }
            }
        }
        Self { jmax, tlen, data }
    }

    /// Zero for `t > i + j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, t: usize) -> f64 {
        if t > i + j {
            return 0.0;
        }
        self.data[(i * (self.jmax + 1) + j) * self.tlen + t]
    }
}

/// `E^{ij}_t` for `t = 0 ..= i + j`.
pub fn hermite_coeffs(i: u32, j: u32, tau: f64, chi: f64, ax: f64, bx: f64) -> Vec<f64> {
    let tab = HermiteTable::new(i as usize, j as usize, tau, chi, ax, bx);
    (0..=(i + j) as usize)
        .map(|t| tab.get(i as usize, j as usize, t))
        .collect()
}

/// Combined exponent, center and per-axis Hermite tables of a primitive pair.
#[derive(Debug, Clone)]
pub struct GaussianPairData {
    pub p: f64,
    pub center: [f64; 3],
    pub e: [HermiteTable; 3],
}

impl GaussianPairData {
    /// Tables reach `extra` powers beyond those of `b`, for kinetic and moment shifts.
    pub fn new(a: &GtoPrimitive, b: &GtoPrimitive, extra: usize) -> Self {
        let p = a.tau + b.tau;
        let center = std::array::from_fn(|ax| (a.tau * a.center[ax] + b.tau * b.center[ax]) / p);
        let e = std::array::from_fn(|ax| {
            HermiteTable::new(
                a.powers[ax] as usize,
                b.powers[ax] as usize + extra,
                a.tau,
                b.tau,
                a.center[ax],
                b.center[ax],
            )
        });
        Self { p, center, e }
    }

    /// One-dimensional overlap of `(x-A)^i` with `(x-B)^j` under the pair Gaussian.
    #[inline]
    fn s1(&self, ax: usize, i: usize, j: usize) -> f64 {
        self.e[ax].get(i, j, 0) * (PI / self.p).sqrt()
    }
}

pub fn overlap(a: &GtoPrimitive, b: &GtoPrimitive) -> f64 {
    let pair = GaussianPairData::new(a, b, 0);
    let s: f64 = (0..3)
        .map(|ax| pair.s1(ax, a.powers[ax] as usize, b.powers[ax] as usize))
        .product();
    a.norm * b.norm * s
}

/// `<a| -1/2 nabla^2 |b>`, using
/// `d^2/dx^2 [(x-B)^j e^{-chi (x-B)^2}] = [j(j-1)(x-B)^{j-2} - 2chi(2j+1)(x-B)^j + 4chi^2 (x-B)^{j+2}] e^{..}`.
pub fn kinetic(a: &GtoPrimitive, b: &GtoPrimitive) -> f64 {
    let pair = GaussianPairData::new(a, b, 2);
    let chi = b.tau;
    let mut s = [0.0; 3];
    let mut d2 = [0.0; 3];
    for ax in 0..3 {
        let (i, j) = (a.powers[ax] as usize, b.powers[ax] as usize);
        s[ax] = pair.s1(ax, i, j);
        let lower = if j >= 2 {
            (j * (j - 1)) as f64 * pair.s1(ax, i, j - 2)
        } else {
            0.0
        };
        d2[ax] = lower - 2.0 * chi * (2 * j + 1) as f64 * s[ax]
            + 4.0 * chi * chi * pair.s1(ax, i, j + 2);
    }
    let lap = d2[0] * s[1] * s[2] + s[0] * d2[1] * s[2] + s[0] * s[1] * d2[2];
    -0.5 * a.norm * b.norm * lap
}

/// `<a| 1/2 m omega^2 r^2 |b>` with `r` measured from the origin.
pub fn trap_harmonic(a: &GtoPrimitive, b: &GtoPrimitive, omega: f64) -> f64 {
    let pair = GaussianPairData::new(a, b, 2);
    let mut s = [0.0; 3];
    let mut m2 = [0.0; 3];
    for ax in 0..3 {
        let (i, j) = (a.powers[ax] as usize, b.powers[ax] as usize);
        let bx = b.center[ax];
        s[ax] = pair.s1(ax, i, j);
        m2[ax] = pair.s1(ax, i, j + 2) + 2.0 * bx * pair.s1(ax, i, j + 1) + bx * bx * s[ax];
    }
    let r2 = m2[0] * s[1] * s[2] + s[0] * m2[1] * s[2] + s[0] * s[1] * m2[2];
    0.5 * crate::units::MASS * omega * omega * a.norm * b.norm * r2
}

/// `<a| -depth exp(-eta |r - C|^2) |b>`.
pub fn trap_gaussian_well(a: &GtoPrimitive, b: &GtoPrimitive, well: &GaussianWell) -> f64 {
    let pair = GaussianPairData::new(a, b, 0);
    let eta = well.eta();
    let kappa = pair.p * eta / (pair.p + eta);
    let sk = kappa.sqrt();
    let mut h = Vec::new();
    let mut prod = 1.0;
    for ax in 0..3 {
        let (i, j) = (a.powers[ax] as usize, b.powers[ax] as usize);
        let d = pair.center[ax] - well.center[ax];
        hermite_polynomials(i + j, sk * d, &mut h);
        let gauss = (-kappa * d * d).exp();
        let mut acc = 0.0;
        let mut scale = 1.0;
        for t in 0..=i + j {
            acc += pair.e[ax].get(i, j, t) * scale * h[t];
            scale *= -sk;
        }
        prod *= (PI / (pair.p + eta)).sqrt() * gauss * acc;
    }
    -well.depth * a.norm * b.norm * prod
}

pub fn trap_potential(a: &GtoPrimitive, b: &GtoPrimitive, trap: &TrapParams) -> f64 {
    match trap {
        TrapParams::HarmonicIsotropic { omega } => trap_harmonic(a, b, *omega),
        TrapParams::GaussianWells(ws) => ws.iter().map(|w| trap_gaussian_well(a, b, w)).sum(),
    }
}

/// Overlap and one-body Hamiltonian (kinetic plus trap) over a basis.
#[derive(Debug, Clone)]
pub struct OneBodyMatrices {
    pub s: Mat<f64>,
    pub t: Mat<f64>,
    pub v: Mat<f64>,
    pub h: Mat<f64>,
}

pub fn one_body_matrices(basis: &BasisSet, trap: &TrapParams) -> OneBodyMatrices {
    let n = basis.len();
    let mut s = Mat::zeros(n, n);
    let mut t = Mat::zeros(n, n);
    let mut v = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let (a, b) = (&basis.primitives[i], &basis.primitives[j]);
            let sv = overlap(a, b);
            let tv = kinetic(a, b);
            let vv = trap_potential(a, b, trap);
            s[(i, j)] = sv;
            s[(j, i)] = sv;
            t[(i, j)] = tv;
            t[(j, i)] = tv;
            v[(i, j)] = vv;
            v[(j, i)] = vv;
        }
    }
    let h = &t + &v;
    OneBodyMatrices { s, t, v, h }
}

/// Single-particle energies of the basis in the given trap.
pub fn one_particle_spectrum(
    basis: &BasisSet,
    trap: &TrapParams,
    lindep: f64,
) -> crate::Result<Vec<f64>> {
    let m = one_body_matrices(basis, trap);
    Ok(crate::linalg::solve_canonical(m.h.as_ref(), m.s.as_ref(), lindep)?.values)
}
