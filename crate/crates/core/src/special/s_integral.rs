//! `S(alpha, beta, gamma) = int_0^inf x^alpha exp(beta x - gamma x^2) dx`.

use std::f64::consts::PI;

use super::{erfcx, kummer_m_scaled, ln_gamma, tricomi_u};
use crate::error::{Error, Result};

/// Largest `ln S` that still fits in an `f64`.
const LN_MAX: f64 = 709.78;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SIntegralParams {
    pub alpha: u32,
    pub beta: f64,
    pub gamma: f64,
}

impl SIntegralParams {
    pub fn new(alpha: u32, beta: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!(
                "S integral needs gamma > 0, got {gamma}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::invalid(format!(
                "S integral needs finite beta, got {beta}"
            )));
        }
        Ok(Self { alpha, beta, gamma })
    }
}

/// Natural log of the S integral through the closed forms in `beta`:
/// Tricomi `U` for `beta < 0`, a Gamma function for `beta = 0`, and two
/// Kummer `M` terms for `beta > 0`. The `beta > 0` branch is carried in
/// scaled form so that `exp(beta^2 / 4 gamma)` never overflows on its own.
pub fn ln_s_integral(p: SIntegralParams) -> Result<f64> {
    let SIntegralParams { alpha, beta, gamma } = SIntegralParams::new(p.alpha, p.beta, p.gamma)?;
    let af = alpha as f64;
    let x = beta * beta / (4.0 * gamma);
    if beta == 0.0 || x == 0.0 {
        return Ok(ln_gamma(0.5 * (af + 1.0)) - 2f64.ln() - 0.5 * (af + 1.0) * gamma.ln());
    }
    if beta < 0.0 {
        let u = tricomi_u(0.5 * (af + 1.0), 0.5, x)?;
        return Ok(ln_gamma(af + 1.0) - (af + 1.0) * (2.0 * gamma.sqrt()).ln() + u.ln());
    }
    let m1 = kummer_m_scaled(0.5 * af + 1.0, 1.5, x)?;
    let m2 = kummer_m_scaled(0.5 * (af + 1.0), 0.5, x)?;
    let bracket = beta * (ln_gamma(0.5 * af + 1.0).exp() * m1)
        + gamma.sqrt() * (ln_gamma(0.5 * (af + 1.0)).exp() * m2);
    Ok(x + bracket.ln() - 2f64.ln() - (0.5 * af + 1.0) * gamma.ln())
}

/// The S integral. Fails with [`Error::Overflow`] when the value exceeds the
/// `f64` range instead of returning infinity.
pub fn s_integral(p: SIntegralParams) -> Result<f64> {
    let ln = ln_s_integral(p)?;
    if ln > LN_MAX {
        return Err(Error::Overflow(format!(
            "S({}, {}, {}) = exp({ln:.3})",
            p.alpha, p.beta, p.gamma
        )));
    }
    Ok(ln.exp())
}

/// `S(0..=alpha_max)` for one `(beta, gamma)`, kept as logarithms since the
/// values span far more than the `f64` range at large `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct SSequence {
    pub ln_values: Vec<f64>,
    /// Entries produced by a forward step that lost most of its digits.
    pub low_confidence: Vec<bool>,
}

impl SSequence {
    pub fn value(&self, alpha: usize) -> f64 {
        self.ln_values[alpha].exp()
    }

    pub fn ln_value(&self, alpha: usize) -> f64 {
        self.ln_values[alpha]
    }
}

/// Builds `S(0..=alpha_max)` from the error-function forms of `S(0)`, `S(1)`
/// and the three-term relation `2 gamma S(a+1) = beta S(a) + a S(a-1)`.
///
/// The relation is run on `T(a) = 2 S(a) gamma^((a+1)/2) / Gamma((a+1)/2)`,
/// which obeys `T(a+1) = T(a-1) + y rho(a) T(a)` with `y = beta / (2 sqrt gamma)`
/// and `rho(a) = Gamma((a+1)/2) / Gamma(a/2 + 1)`, and stays of order one.
/// For `beta < 0` the wanted solution is the minimal one, so once `y^2` is not
/// small the relation runs downward (Miller's scheme, normalized to `T(0)`);
/// otherwise it runs forward and flags any step that cancels below `1e-10`
/// of its largest term.
pub fn s_integral_recurrence(alpha_max: usize, beta: f64, gamma: f64) -> Result<SSequence> {
    SIntegralParams::new(0, beta, gamma)?;
    let y = beta / (2.0 * gamma.sqrt());
    let mut rho = Vec::with_capacity(alpha_max + 1);
    rho.push(PI.sqrt());
    for a in 1..=alpha_max {
        rho.push(2.0 / (a as f64 * rho[a - 1]));
    }

    let (t, low, shift) = if beta < 0.0 && y * y >= 0.5 {
        (
            miller_downward(alpha_max, y, &rho),
            vec![false; alpha_max + 1],
            0.0,
        )
    } else {
        // beta > 0 carries exp(-y^2) to keep T finite
        let (shift, t0, unit) = if beta > 0.0 {
            (y * y, 1.0 + libm::erf(y), (-y * y).exp())
        } else {
            (0.0, erfcx(-y), 1.0)
        };
        let mut t = vec![t0];
        let mut low = vec![false];
        if alpha_max >= 1 {
            let step = PI.sqrt() * y * t0;
            t.push(unit + step);
            low.push((unit + step).abs() < 1e-10 * unit.max(step.abs()));
        }
        for a in 1..alpha_max {
            let step = y * rho[a] * t[a];
            let next = t[a - 1] + step;
            low.push(next.abs() < 1e-10 * t[a - 1].abs().max(step.abs()));
            t.push(next);
        }
        (t, low, shift)
    };
    let ln_values = t
        .iter()
        .enumerate()
        .map(|(a, &ta)| {
            let h = 0.5 * (a as f64 + 1.0);
            ta.ln() + shift + ln_gamma(h) - h * gamma.ln() - std::f64::consts::LN_2
        })
        .collect();
    Ok(SSequence {
        ln_values,
        low_confidence: low,
    })
}

/// Downward run of `T(a-1) = T(a+1) - y rho(a) T(a)` for `y < 0`; every step
/// adds positive terms.
fn miller_downward(alpha_max: usize, y: f64, rho: &[f64]) -> Vec<f64> {
    let ay = y.abs();
    // the dominant companion gains about exp(2 |y| sqrt(2 a)) over the minimal one
    let d = 20.0 / ay;
    let start = ((alpha_max as f64).sqrt() + d).powi(2).ceil() as usize + 10;
    let start = start.max(alpha_max + 10);
    let rho_at = |a: usize| {
        if a < rho.len() {
            rho[a]
        } else {
            // Gamma((a+1)/2) / Gamma(a/2 + 1)
            (ln_gamma(0.5 * (a as f64 + 1.0)) - ln_gamma(0.5 * a as f64 + 1.0)).exp()
        }
    };
    let mut out = vec![0.0; alpha_max + 1];
    let mut upper = 0.0;
    let mut cur = 1.0;
    for a in (1..=start).rev() {
        if a <= alpha_max {
            out[a] = cur;
        }
        let prev = upper + ay * rho_at(a) * cur;
        upper = cur;
        cur = prev;
        if cur > 1e250 {
            upper *= 1e-250;
            cur *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    out[0] = cur;
    let norm = erfcx(ay) / cur;
    for v in out.iter_mut() {
        *v *= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(alpha: u32, beta: f64, gamma: f64) -> f64 {
        s_integral(SIntegralParams::new(alpha, beta, gamma).unwrap()).unwrap()
    }

    #[test]
    fn zero_beta_closed_forms() {
        assert!((s(0, 0.0, 1.0) - 0.886_226_925_452_758).abs() < 1e-15);
        assert!((s(1, 0.0, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_gamma() {
        assert!(SIntegralParams::new(0, 1.0, 0.0).is_err());
        assert!(SIntegralParams::new(0, 1.0, -1.0).is_err());
    }

    #[test]
    fn overflow_is_an_error_not_infinity() {
        let p = SIntegralParams::new(2, 40.0, 0.05).unwrap();
        let ln = ln_s_integral(p).unwrap();
        assert!(ln > 709.0 && ln.is_finite());
        assert!(matches!(s_integral(p), Err(Error::Overflow(_))));
    }

    #[test]
    fn recurrence_matches_gamma_form_at_zero_beta() {
        let seq = s_integral_recurrence(10, 0.0, 1.0).unwrap();
        for a in 0..=10u32 {
            let exact = s(a, 0.0, 1.0);
            assert!(
                ((seq.value(a as usize) - exact) / exact).abs() < 1e-13,
                "alpha={a}"
            );
        }
    }

    #[test]
    fn forward_route_stays_clean_for_weak_negative_beta() {
        let seq = s_integral_recurrence(4, -1e-3, 1.0).unwrap();
        assert!(seq.low_confidence.iter().all(|f| !f));
        let seq = s_integral_recurrence(30, -1.3, 1.0).unwrap();
        assert!(seq.low_confidence.iter().all(|f| !f));
    }

    #[test]
    fn branch_continuity_at_zero_beta() {
        for alpha in [0u32, 3, 8] {
            for gamma in [0.3, 1.0, 5.0] {
                let at0 = s(alpha, 0.0, gamma);
                for eps in [1e-6, -1e-6] {
                    let near = s(alpha, eps, gamma);
                    assert!(((near - at0) / at0).abs() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn increasing_in_beta() {
        for alpha in [0u32, 2, 7] {
            let mut last = 0.0;
            for k in -20..=20 {
                let v = s(alpha, k as f64 * 0.5, 0.7);
                assert!(v > last, "alpha={alpha} beta={}", k as f64 * 0.5);
                last = v;
            }
        }
    }

    #[test]
    fn recurrence_reaches_large_alpha_without_overflow() {
        for beta in [-6.3, -3.2, 0.0, 2.0] {
            let seq = s_integral_recurrence(402, beta, 0.3).unwrap();
            assert!(seq.ln_values.iter().all(|v| v.is_finite()));
            assert!(seq.ln_value(402) > 700.0);
            let direct = ln_s_integral(SIntegralParams::new(40, beta, 0.3).unwrap()).unwrap();
            assert!((seq.ln_value(40) - direct).abs() < 1e-11, "beta={beta}");
        }
    }
}
