//! Special functions needed by the Morse integral engine.

mod angular;
mod hypergeometric;
mod s_integral;

pub use angular::{spherical_average_monomial, AngularTables};
pub use hypergeometric::{kummer_m, kummer_m_scaled, tricomi_u};
pub use s_integral::{
    ln_s_integral, s_integral, s_integral_recurrence, SIntegralParams, SSequence,
};

use std::f64::consts::PI;

/// `n!` as a float. Exact for `n <= 22`.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `n!!` with the conventions `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> f64 {
    if n <= 0 {
        return 1.0;
    }
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Gamma function. Integer and half-integer arguments use exact products,
/// everything else goes through `libm`.
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if x > 0.0 && twice == twice.round() && twice <= 340.0 {
        let k = twice as i64;
        if k % 2 == 0 {
            return factorial((k / 2 - 1) as u32);
        }
        // Gamma(m + 1/2) = (2m-1)!! sqrt(pi) / 2^m
        let m = (k - 1) / 2;
        return double_factorial(2 * m - 1) * PI.sqrt() / 2f64.powi(m as i32);
    }
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    if x > 0.0 && x < 150.0 {
        let g = gamma(x);
        if g.is_finite() && g > 0.0 {
            return g.ln();
        }
    }
    libm::lgamma(x)
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        // erfcx(-x) = 2 exp(x^2) - erfcx(x)
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 2.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // Continued fraction erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    // evaluated with the modified Lentz algorithm.
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let an = 0.5 * n as f64;
        d = x + an * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// Physicists' Hermite polynomials `H_0(y) ..= H_n(y)`.
pub fn hermite_polynomials(n: usize, y: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if n == 0 {
        return;
    }
    out.push(2.0 * y);
    for k in 1..n {
        let next = 2.0 * y * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
}
