use super::{gamma, ln_gamma};
use crate::error::{Error, Result};
use crate::quadrature::integrate;

const SERIES_TERMS: usize = 500;
const SERIES_TOL: f64 = 1e-17;
/// Above this argument the scaled Kummer function switches to its
/// large-argument expansion.
const ASYMPTOTIC_FROM: f64 = 200.0;

fn check_b(b: f64) -> Result<()> {
    if b <= 0.0 && b == b.round() {
        return Err(Error::domain(
            "kummer_m",
            format!("b = {b} is a non-positive integer"),
        ));
    }
    Ok(())
}

/// Kummer's confluent hypergeometric function `M(a, b, x)` by its power series.
pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<f64> {
    check_b(b)?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) / (b + kf) * x / (kf + 1.0);
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        let next_ratio = (a + kf + 1.0) / (b + kf + 1.0) * x / (kf + 2.0);
        if term.abs() < SERIES_TOL * sum.abs() && next_ratio.abs() < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        what: "Kummer M series",
        detail: format!(
            "M({a}, {b}, {x}): partial sum {sum:e}, last term {term:e} after {SERIES_TERMS} terms"
        ),
    })
}

/// `exp(-x) M(a, b, x)` for `x >= 0`, finite even where `M` itself overflows.
pub fn kummer_m_scaled(a: f64, b: f64, x: f64) -> Result<f64> {
    check_b(b)?;
    if x < 0.0 {
        return Err(Error::domain("kummer_m_scaled", format!("x = {x} < 0")));
    }
    if x <= ASYMPTOTIC_FROM {
        return Ok(kummer_m(a, b, x)? * (-x).exp());
    }
    if a <= 0.0 {
        return Err(Error::domain(
            "kummer_m_scaled",
            format!("large-argument expansion needs a > 0, got {a}"),
        ));
    }
    // M(a,b,x) ~ Gamma(b)/Gamma(a) e^x x^(a-b) sum_k (b-a)_k (1-a)_k / (k! x^k)
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_TERMS {
        let kf = k as f64;
        let next = term * (b - a + kf) * (1.0 - a + kf) / ((kf + 1.0) * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term == 0.0 || term.abs() < SERIES_TOL * sum.abs() {
            break;
        }
    }
    let ln_pref = ln_gamma(b) - ln_gamma(a) + (a - b) * x.ln();
    Ok(sum * ln_pref.exp())
}

/// Tricomi's confluent hypergeometric function `U(a, b, x)` for `a > 0`, `x > 0`,
/// from its Laplace-type integral
/// `U = 1/Gamma(a) * int_0^inf exp(-x t) t^(a-1) (1+t)^(b-a-1) dt`.
pub fn tricomi_u(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x > 0.0) {
        return Err(Error::domain(
            "tricomi_u",
            format!("need a > 0 and x > 0, got a = {a}, x = {x}"),
        ));
    }
    let c = b - a - 1.0;
    const TOL: f64 = 1e-14;
    if x >= 1.0 {
        // t = v^2 / x
        let f = |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            2.0 * ((2.0 * a - 1.0) * v.ln() + c * (v * v / x).ln_1p() - v * v).exp()
        };
        let upper = (a - 0.5).max(0.0).sqrt() + 9.0;
        let val = integrate(f, 0.0, upper, TOL, 0.0)?;
        let ln_u = val.ln() - a * x.ln() - ln_gamma(a);
        return Ok(ln_u.exp());
    }
    // t = s^2 on [0, 1], t = 1/w^2 beyond
    let inner = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        2.0 * ((2.0 * a - 1.0) * s.ln() + c * (s * s).ln_1p() - x * s * s).exp()
    };
    let outer = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        2.0 * ((1.0 - 2.0 * b) * w.ln() + c * (w * w).ln_1p() - x / (w * w)).exp()
    };
    let total = integrate(inner, 0.0, 1.0, TOL, 0.0)? + integrate(outer, 0.0, 1.0, TOL, 0.0)?;
    Ok(total / gamma(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn kummer_constant_term() {
        assert_eq!(kummer_m(0.7, 1.3, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn kummer_exponential_reductions() {
        for &x in &[0.5f64, 2.0] {
            let m = kummer_m(1.0, 1.0, x).unwrap();
            assert!(((m - x.exp()) / x.exp()).abs() < 1e-15);
        }
        let m = kummer_m(1.5, 1.5, 1.0).unwrap();
        assert!(((m - E) / E).abs() < 1e-15);
    }

    #[test]
    fn kummer_rejects_nonpositive_integer_b() {
        assert!(matches!(
            kummer_m(1.0, -2.0, 1.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(kummer_m(1.0, 0.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn kummer_reports_nonconvergence() {
        let err = kummer_m(1.0, 1.0, 5000.0).unwrap_err();
        assert!(matches!(err, Error::Convergence { .. }), "{err}");
    }

    #[test]
    fn scaled_kummer_is_continuous_across_the_expansion_switch() {
        // M(1/2, 1/2, x) = e^x exactly, so the scaled value is 1.
        for &x in &[150.0, 199.9, 200.1, 900.0] {
            let v = kummer_m_scaled(0.5, 0.5, x).unwrap();
            assert!((v - 1.0).abs() < 1e-13, "x={x} v={v}");
        }
        let x = 200.001;
        let series = kummer_m(3.5, 1.5, x).unwrap() * f64::exp(-x);
        let expansion = kummer_m_scaled(3.5, 1.5, x).unwrap();
        assert!(((series - expansion) / series).abs() < 1e-12);
    }

    #[test]
    fn tricomi_matches_erfc_form() {
        // U(1/2, 1/2, x) = sqrt(pi) e^x erfc(sqrt x)
        for &x in &[0.01, 0.5, 1.0, 3.0, 40.0] {
            let exact = PI.sqrt() * super::super::erfcx(f64::sqrt(x));
            let u = tricomi_u(0.5, 0.5, x).unwrap();
            assert!(((u - exact) / exact).abs() < 1e-12, "x={x}: {u} vs {exact}");
        }
    }

    #[test]
    fn tricomi_large_argument_limit() {
        let x = 1e4;
        for &a in &[0.5, 1.5, 2.5] {
            let v = tricomi_u(a, 0.5, x).unwrap() * x.powf(a);
            assert!((v - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn tricomi_domain() {
        assert!(tricomi_u(0.0, 0.5, 1.0).is_err());
        assert!(tricomi_u(1.0, 0.5, 0.0).is_err());
    }
}
