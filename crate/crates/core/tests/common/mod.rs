//! Oracles shared by the integration tests. Nothing here calls into the
//! crate's quadrature, special-function or integral code.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Double-exponential quadrature on `[a, b]`, refined until two levels agree.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let node = |t: f64| {
        let s = 0.5 * PI * t.sinh();
        let x = s.tanh();
        let w = 0.5 * PI * t.cosh() / (s.cosh() * s.cosh());
        (x, w)
    };
    let t_max = 4.0;
    let mut h = 0.5;
    let mut sum = {
        let (_, w0) = node(0.0);
        f(c) * w0
    };
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        let (x, w) = node(t);
        let (lo, hi) = (c - d * x, c + d * x);
        if lo > a && hi < b {
            sum += w * (f(lo) + f(hi));
        }
        k += 1;
    }
    let mut estimate = d * h * sum;
    for _ in 0..12 {
        h *= 0.5;
        let mut extra = 0.0;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            let (x, w) = node(t);
            let (lo, hi) = (c - d * x, c + d * x);
            if lo > a && hi < b {
                extra += w * (f(lo) + f(hi));
            }
            k += 2;
        }
        sum += extra;
        let next = d * h * sum;
        let done = (next - estimate).abs() <= rel * next.abs().max(1e-300);
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}

/// `Gamma(n / 2)` for a positive integer `n`.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n > 0);
    if n % 2 == 0 {
        (1..n / 2).map(|k| k as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < n as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

pub fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Morse potential in internal units.
pub fn morse(de: f64, rm: f64, am: f64, r: f64) -> f64 {
    let e = (-am * (r - rm)).exp();
    de * (e * e - 2.0 * e)
}

/// Normalization of `x^i y^k z^m exp(-tau r^2)` from one-dimensional moments.
pub fn norm(powers: [u32; 3], tau: f64) -> f64 {
    let m: f64 = powers
        .iter()
        .map(|&i| gamma_half(2 * i + 1) / (2.0 * tau).powf(i as f64 + 0.5))
        .product();
    1.0 / m.sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct Prim {
    pub powers: [u32; 3],
    pub tau: f64,
    pub center: [f64; 3],
}

impl Prim {
    pub fn value(&self, r: [f64; 3]) -> f64 {
        let mut v = norm(self.powers, self.tau);
        let mut r2 = 0.0;
        for ax in 0..3 {
            let d = r[ax] - self.center[ax];
            v *= d.powi(self.powers[ax] as i32);
            r2 += d * d;
        }
        v * (-self.tau * r2).exp()
    }
}

/// Polynomial in `s` multiplying `exp(-mu s^2)` in the one-dimensional
/// cross-correlation `int (t+s)^i t^j exp(-p (t+s)^2 - q t^2) dt`.
fn correlation_poly(i: u32, j: u32, p: f64, q: f64) -> Vec<f64> {
    let big = p + q;
    let kappa = p / big;
    let mut out = vec![0.0; (i + j + 1) as usize];
    for alpha in 0..=i {
        for beta in 0..=j {
            let n = alpha + beta;
            if n % 2 == 1 {
                continue;
            }
            let moment = gamma_half(n + 1) / big.powf((n + 1) as f64 / 2.0);
            let deg = (i - alpha + j - beta) as usize;
            let c = binomial(i, alpha)
                * binomial(j, beta)
                * (1.0 - kappa).powi((i - alpha) as i32)
                * (-kappa).powi((j - beta) as i32)
                * moment;
            out[deg] += c;
        }
    }
    out
}

/// Average of `nx^a ny^b nz^c` over the unit sphere.
fn sphere_average(a: usize, b: usize, c: usize) -> f64 {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return 0.0;
    }
    let g = |k: usize| gamma_half(k as u32 + 1);
    2.0 * g(a) * g(b) * g(c) / gamma_half((a + b + c + 3) as u32) / (4.0 * PI)
}

/// `<ab|U|cd>` for primitives sharing the origin, reduced to a radial
/// integral over the interparticle distance.
pub fn single_center_oracle(a: &Prim, b: &Prim, c: &Prim, d: &Prim, m: [f64; 3]) -> f64 {
    let p = a.tau + c.tau;
    let q = b.tau + d.tau;
    let mu = p * q / (p + q);
    let polys: Vec<Vec<f64>> = (0..3)
        .map(|ax| {
            correlation_poly(
                a.powers[ax] + c.powers[ax],
                b.powers[ax] + d.powers[ax],
                p,
                q,
            )
        })
        .collect();
    let max_deg = polys.iter().map(|v| v.len() - 1).sum::<usize>();
    let mut radial = vec![0.0; max_deg + 1];
    for (kx, gx) in polys[0].iter().enumerate() {
        for (ky, gy) in polys[1].iter().enumerate() {
            for (kz, gz) in polys[2].iter().enumerate() {
                radial[kx + ky + kz] += gx * gy * gz * sphere_average(kx, ky, kz);
            }
        }
    }
    let prefactor = norm(a.powers, a.tau)
        * norm(b.powers, b.tau)
        * norm(c.powers, c.tau)
        * norm(d.powers, d.tau);
    let r_max = (60.0 / mu).sqrt();
    let f = |r: f64| {
        let poly: f64 = radial.iter().rev().fold(0.0, |acc, g| acc * r + g);
        4.0 * PI * r * r * morse(m[0], m[1], m[2], r) * (-mu * r * r).exp() * poly
    };
    // split at the potential minimum where the integrand bends sharply
    prefactor * (tanh_sinh(&f, 0.0, m[1], 1e-14) + tanh_sinh(&f, m[1], r_max, 1e-14))
}

/// Importance-sampled six-dimensional estimate of `<ab|U|cd>`, returned with
/// its standard error.
pub fn monte_carlo_oracle(
    a: &Prim,
    b: &Prim,
    c: &Prim,
    d: &Prim,
    m: [f64; 3],
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = |x: &Prim, y: &Prim| {
        let p = x.tau + y.tau;
        let center: [f64; 3] =
            std::array::from_fn(|ax| (x.tau * x.center[ax] + y.tau * y.center[ax]) / p);
        (p, center)
    };
    let (p, pc) = gauss(a, c);
    let (q, qc) = gauss(b, d);
    let n1 = Normal::new(0.0, (0.5 / p).sqrt()).unwrap();
    let n2 = Normal::new(0.0, (0.5 / q).sqrt()).unwrap();
    let density = |e: f64, r2: f64| (e / PI).powf(1.5) * (-e * r2).exp();
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for _ in 0..samples {
        let d1: [f64; 3] = std::array::from_fn(|_| n1.sample(&mut rng));
        let d2: [f64; 3] = std::array::from_fn(|_| n2.sample(&mut rng));
        let r1: [f64; 3] = std::array::from_fn(|ax| pc[ax] + d1[ax]);
        let r2: [f64; 3] = std::array::from_fn(|ax| qc[ax] + d2[ax]);
        let g1 = density(p, d1.iter().map(|x| x * x).sum());
        let g2 = density(q, d2.iter().map(|x| x * x).sum());
        let r12 = (0..3)
            .map(|ax| (r1[ax] - r2[ax]).powi(2))
            .sum::<f64>()
            .sqrt();
        let w =
            a.value(r1) * c.value(r1) * b.value(r2) * d.value(r2) * morse(m[0], m[1], m[2], r12)
                / (g1 * g2);
        sum += w;
        sum2 += w * w;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}
