use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::potential::{morse_value, MorseParams};
use crate::quadrature::gauss_hermite;
use crate::special::{binomial, double_factorial, hermite_polynomials, ln_gamma, AngularTables};

use super::master_integrals;

/// Above this `xi Q^2` the general path integrates over a Gauss–Hermite grid
/// instead of summing the Taylor series.
pub const QUADRATURE_SWITCH: f64 = 30.0;
pub const TAYLOR_MAX_TERMS: usize = 200;
const TAYLOR_TOL: f64 = 1e-15;
const GH_POINTS: usize = 64;

fn xi_of(p: f64, q: f64) -> f64 {
    p * q / (p + q)
}

/// `4 pi (pi / (p+q))^{3/2}`.
fn radial_prefactor(p: f64, q: f64) -> f64 {
    4.0 * PI * (PI / (p + q)).powf(1.5)
}

/// Coefficients `b_n` of `g(R) = K exp(-xi R^2) sum_n b_n (xi R^2)^n / n!`,
/// `b_n = n! 4^n xi^n Pi_{2n+2}(xi) / (2n+1)!`, for `n <= n_max`.
pub fn taylor_coefficients(n_max: usize, xi: f64, morse: &MorseParams) -> Result<Vec<f64>> {
    if morse.de == 0.0 {
        return Ok(vec![0.0; n_max + 1]);
    }
    use crate::special::s_integral_recurrence;
    let ar = morse.am * morse.rm;
    let lam = 2 * n_max + 2;
    let s2 = s_integral_recurrence(lam, -2.0 * morse.am, xi)?;
    let s1 = s_integral_recurrence(lam, -morse.am, xi)?;
    Ok((0..=n_max)
        .map(|n| {
            let nf = n as f64;
            let ln_w = nf * (4.0 * xi).ln() + ln_gamma(nf + 1.0) - ln_gamma(2.0 * nf + 2.0);
            let l = 2 * n + 2;
            morse.de
                * ((2.0 * ar + s2.ln_value(l) + ln_w).exp()
                    - 2.0 * (ar + s1.ln_value(l) + ln_w).exp())
        })
        .collect())
}

fn angular(lmax: u32) -> AngularTables {
    static SHARED: OnceLock<AngularTables> = OnceLock::new();
    let shared = SHARED.get_or_init(|| AngularTables::new(24));
    if lmax <= shared.max_degree() {
        shared.clone()
    } else {
        AngularTables::new(lmax)
    }
}

/// All `R^{tuv}` at `R = 0` with `t + u + v <= lmax`.
///
/// Only the `R^0` part of each derivative survives, which gives
/// `R^{tuv}(0) = K (2N+1)!! <x^t y^u z^v> sum_{n<=N} (-1)^{N-n} C(N,n)
/// (2 xi)^{n+N} / (2n+1)!! Pi_{2n+2}(xi)` with `2N = t + u + v` and `<.>` the
/// average over the unit sphere; odd degrees vanish.
#[derive(Debug, Clone)]
pub struct RTableQ0 {
    lmax: u32,
    stride: usize,
    data: Vec<f64>,
}

impl RTableQ0 {
    pub fn new(lmax: u32, p: f64, q: f64, morse: &MorseParams) -> Result<Self> {
        let xi = xi_of(p, q);
        let n_top = (lmax / 2) as usize;
        let pi = master_integrals(2 * n_top + 2, xi, morse)?;
        let radial: Vec<f64> = (0..=n_top)
            .map(|big| {
                (0..=big)
                    .map(|n| {
                        let sign = if (big - n) % 2 == 0 { 1.0 } else { -1.0 };
                        sign * binomial(big as u32, n as u32) * (2.0 * xi).powi((n + big) as i32)
                            / double_factorial(2 * n as i64 + 1)
                            * pi[2 * n + 2]
                    })
                    .sum()
            })
            .collect();
        let ang = angular(lmax);
        let k = radial_prefactor(p, q);
        let stride = lmax as usize + 1;
        let mut data = vec![0.0; stride * stride * stride];
        for t in 0..=lmax {
            for u in 0..=lmax - t {
                for v in 0..=lmax - t - u {
                    let deg = t + u + v;
                    if deg % 2 == 1 {
                        continue;
                    }
                    let avg = ang.get(t, u, v).expect("angular table covers lmax");
                    if avg == 0.0 {
                        continue;
                    }
                    let big = (deg / 2) as usize;
                    data[(t as usize * stride + u as usize) * stride + v as usize] =
                        k * double_factorial(deg as i64 + 1) * avg * radial[big];
                }
            }
        }
        Ok(Self { lmax, stride, data })
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    #[inline]
    pub fn get(&self, t: usize, u: usize, v: usize) -> f64 {
        self.data[(t * self.stride + u) * self.stride + v]
    }
}

pub fn r_tensor_q0(t: u32, u: u32, v: u32, p: f64, q: f64, morse: &MorseParams) -> Result<f64> {
    check_exponents(p, q)?;
    if (t + u + v) % 2 == 1 {
        return Ok(0.0);
    }
    let tab = RTableQ0::new(t + u + v, p, q, morse)?;
    Ok(tab.get(t as usize, u as usize, v as usize))
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && q > 0.0) || !p.is_finite() || !q.is_finite() {
        return Err(Error::invalid(format!(
            "R tensor needs p, q > 0, got {p}, {q}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RTensorRequest {
    pub t: u32,
    pub u: u32,
    pub v: u32,
    pub p: f64,
    pub q: f64,
    /// `P - Q` in internal units.
    pub qvec: [f64; 3],
}

impl RTensorRequest {
    pub fn xi(&self) -> f64 {
        xi_of(self.p, self.q)
    }

    pub fn lmax(&self) -> u32 {
        self.t + self.u + self.v
    }
}

pub fn r_tensor_general(req: RTensorRequest, morse: &MorseParams) -> Result<f64> {
    let r = RTensorGeneral::new(req.p, req.q, req.qvec, req.lmax(), morse)?;
    r.get(req.t, req.u, req.v)
}

/// R tensor at an arbitrary separation, all entries up to `lmax`.
#[derive(Debug, Clone)]
pub enum RTensorGeneral {
    Taylor(TaylorRTensor),
    Quadrature(GhRTensor),
}

impl RTensorGeneral {
    pub fn new(p: f64, q: f64, qvec: [f64; 3], lmax: u32, morse: &MorseParams) -> Result<Self> {
        check_exponents(p, q)?;
        let xi = xi_of(p, q);
        let xq2 = xi * qvec.iter().map(|c| c * c).sum::<f64>();
        if xq2 > QUADRATURE_SWITCH {
            Ok(Self::Quadrature(GhRTensor::new(p, q, qvec, lmax, morse)))
        } else {
            Ok(Self::Taylor(TaylorRTensor::new(p, q, qvec, lmax, morse)?))
        }
    }

    pub fn get(&self, t: u32, u: u32, v: u32) -> Result<f64> {
        match self {
            Self::Taylor(r) => r.get(t, u, v),
            Self::Quadrature(r) => Ok(r.get(t, u, v)),
        }
    }
}

/// Derivatives of the Taylor form of `g`. With `x^ = sqrt(xi) x` and
/// `G_i^t(x^) = sum_s C(t,s) (2i)!/(2i-s)! x^^{2i-s}/i! (-1)^{t-s} H_{t-s}(x^)`,
/// `R^{tuv} = K exp(-xi Q^2) xi^{(t+u+v)/2} sum_n b_n sum_{i+j+k=n} G_i^t G_j^u G_k^v`.
#[derive(Debug, Clone)]
pub struct TaylorRTensor {
    lmax: u32,
    xq2: f64,
    pref: f64,
    sqrt_xi: f64,
    b: Vec<f64>,
    g: [Vec<f64>; 3],
}

impl TaylorRTensor {
    pub fn new(p: f64, q: f64, qvec: [f64; 3], lmax: u32, morse: &MorseParams) -> Result<Self> {
        let xi = xi_of(p, q);
        let sqrt_xi = xi.sqrt();
        let xq2 = xi * qvec.iter().map(|c| c * c).sum::<f64>();
        let b = taylor_coefficients(TAYLOR_MAX_TERMS, xi, morse)?;
        let tl = lmax as usize + 1;
        let mut h = Vec::new();
        let g = std::array::from_fn(|ax| {
            let xh = sqrt_xi * qvec[ax];
            hermite_polynomials(lmax as usize, xh, &mut h);
            let mut g = vec![0.0; (TAYLOR_MAX_TERMS + 1) * tl];
            for i in 0..=TAYLOR_MAX_TERMS {
                let ln_fact_i = ln_gamma(i as f64 + 1.0);
                for t in 0..tl {
                    let mut acc = 0.0;
                    let mut falling = 1.0;
                    for s in 0..=t.min(2 * i) {
                        if s > 0 {
                            falling *= (2 * i + 1 - s) as f64;
                        }
                        let e = 2 * i - s;
                        let pow_over_fact = if xh == 0.0 {
                            if e == 0 {
                                (-ln_fact_i).exp()
                            } else {
                                0.0
                            }
                        } else {
                            let mag = (e as f64 * xh.abs().ln() - ln_fact_i).exp();
                            if xh < 0.0 && e % 2 == 1 {
                                -mag
                            } else {
                                mag
                            }
                        };
                        let sign = if (t - s) % 2 == 0 { 1.0 } else { -1.0 };
                        acc += binomial(t as u32, s as u32)
                            * falling
                            * pow_over_fact
                            * sign
                            * h[t - s];
                    }
                    g[i * tl + t] = acc;
                }
            }
            g
        });
        Ok(Self {
            lmax,
            xq2,
            pref: radial_prefactor(p, q) * (-xq2).exp(),
            sqrt_xi,
            b,
            g,
        })
    }

    pub fn get(&self, t: u32, u: u32, v: u32) -> Result<f64> {
        if t + u + v > self.lmax {
            return Err(Error::invalid(format!(
                "R tensor entry ({t},{u},{v}) beyond lmax {}",
                self.lmax
            )));
        }
        let tl = self.lmax as usize + 1;
        let (t, u, v) = (t as usize, u as usize, v as usize);
        let min_terms = (t + u + v) / 2 + 1;
        let mut sum = 0.0;
        for n in 0..=TAYLOR_MAX_TERMS {
            let mut inner = 0.0;
            for i in 0..=n {
                let gx = self.g[0][i * tl + t];
                if gx == 0.0 {
                    continue;
                }
                for j in 0..=n - i {
                    let k = n - i - j;
                    inner += gx * self.g[1][j * tl + u] * self.g[2][k * tl + v];
                }
            }
            let term = self.b[n] * inner;
            sum += term;
            if n > min_terms && term.abs() <= TAYLOR_TOL * sum.abs() {
                return Ok(self.pref * self.sqrt_xi.powi((t + u + v) as i32) * sum);
            }
        }
        Err(Error::Convergence {
            what: "R tensor Taylor series",
            detail: format!(
                "({t},{u},{v}) at xi Q^2 = {:.6} not converged in {TAYLOR_MAX_TERMS} terms",
                self.xq2
            ),
        })
    }
}

/// `R^{tuv} = (pi/(p+q))^{3/2} xi^{(t+u+v-3)/2}
/// int d^3y U(|R + y / sqrt(xi)|) H_t(y_x) H_u(y_y) H_v(y_z) exp(-|y|^2)`
/// on a product Gauss–Hermite grid.
#[derive(Debug, Clone)]
pub struct GhRTensor {
    lmax: u32,
    stride: usize,
    data: Vec<f64>,
}

fn gh_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(GH_POINTS))
}

impl GhRTensor {
    pub fn new(p: f64, q: f64, qvec: [f64; 3], lmax: u32, morse: &MorseParams) -> Self {
        let xi = xi_of(p, q);
        let sx = xi.sqrt();
        let (y, w) = gh_rule();
        let tl = lmax as usize + 1;
        let mut hv = Vec::new();
        let herm: Vec<Vec<f64>> = y
            .iter()
            .map(|&yy| {
                hermite_polynomials(lmax as usize, yy, &mut hv);
                hv.clone()
            })
            .collect();
        let mut acc = vec![0.0; tl * tl * tl];
        for (ix, &yx) in y.iter().enumerate() {
            let x = qvec[0] + yx / sx;
            for (iy, &yy) in y.iter().enumerate() {
                let yv = qvec[1] + yy / sx;
                let wxy = w[ix] * w[iy];
                for (iz, &yz) in y.iter().enumerate() {
                    let z = qvec[2] + yz / sx;
                    let f = wxy * w[iz] * morse_value(morse, (x * x + yv * yv + z * z).sqrt());
                    for t in 0..tl {
                        let ft = f * herm[ix][t];
                        for u in 0..tl - t {
                            let fu = ft * herm[iy][u];
                            let row = (t * tl + u) * tl;
                            for v in 0..tl - t - u {
                                acc[row + v] += fu * herm[iz][v];
                            }
                        }
                    }
                }
            }
        }
        let base = (PI / (p + q)).powf(1.5) * xi.powf(-1.5);
        for t in 0..tl {
            for u in 0..tl - t {
                for v in 0..tl - t - u {
                    acc[(t * tl + u) * tl + v] *= base * sx.powi((t + u + v) as i32);
                }
            }
        }
        Self {
            lmax,
            stride: tl,
            data: acc,
        }
    }

    pub fn get(&self, t: u32, u: u32, v: u32) -> f64 {
        assert!(t + u + v <= self.lmax);
        self.data[(t as usize * self.stride + u as usize) * self.stride + v as usize]
    }
}
