//! Zero-energy s-wave scattering in free space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{morse_value, MorseParams};
use crate::units::{self, MU};

/// Matching radii and Numerov step, all in `d_ho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringOptions {
    pub r_match: [f64; 2],
    pub step: f64,
}

impl Default for ScatteringOptions {
    fn default() -> Self {
        Self {
            r_match: [10.0, 14.0],
            step: 5e-5,
        }
    }
}

/// Beyond this `|a_s|` (in `d_ho`) the result is flagged as sitting on a pole.
pub const POLE_FLAG: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    /// Scattering length in `d_ho`.
    pub a_s: f64,
    pub de: f64,
    pub converged: bool,
    /// Inner matching radius in `d_ho`.
    pub matching_radius: f64,
    /// Free-space bound states, from the nodes of the zero-energy solution.
    pub bound_states: usize,
    /// `u'` at the matching radius for `u(r) ~ r` at the origin.
    pub slope: f64,
}

struct ZeroEnergy {
    u1: f64,
    u2: f64,
    r1: f64,
    r2: f64,
    nodes: usize,
}

fn integrate_zero_energy(morse: &MorseParams, opts: &ScatteringOptions) -> Result<ZeroEnergy> {
    let [m1, m2] = opts.r_match;
    if !(opts.step > 0.0) || !(m1 > 0.0) || !(m2 > m1) {
        return Err(Error::invalid(format!("bad scattering options {opts:?}")));
    }
    let h = units::length_from_dho(opts.step);
    let n1 = (units::length_from_dho(m1) / h).round() as usize;
    let n2 = (units::length_from_dho(m2) / h).round() as usize;
    let (r1, r2) = (n1 as f64 * h, n2 as f64 * h);
    let tail = morse_value(morse, r1).abs();
    if tail > 1e-12 * morse.de.max(1e-300) && morse.de > 0.0 {
        return Err(Error::Scattering(format!(
            "matching radius {m1} d_ho lies inside the potential range (|U| = {tail:e})"
        )));
    }
    // u'' = 2 mu U(r) u, Numerov in summed form on y = (1 - h^2 f / 12) u
    let f = |r: f64| 2.0 * MU * morse_value(morse, r);
    let c = h * h / 12.0;
    let (mut r_cur, mut u_cur) = (h, h);
    let mut f_cur = f(r_cur);
    let mut y = (1.0 - c * f_cur) * u_cur;
    // u(0) = 0
    let mut dy = y;
    let mut nodes = 0;
    let mut u1 = None;
    for i in 1..n2 {
        if i == n1 {
            u1 = Some(u_cur);
        }
        // past the well the recursion only adds roundoff to a straight line
        if r_cur > morse.rm && f_cur.abs() < 1e-16 {
            break;
        }
        dy += h * h * f_cur * u_cur;
        y += dy;
        let r_next = (i + 1) as f64 * h;
        let f_next = f(r_next);
        let u_next = y / (1.0 - c * f_next);
        if u_next == 0.0 || u_next.signum() != u_cur.signum() {
            nodes += 1;
        }
        (u_cur, r_cur, f_cur) = (u_next, r_next, f_next);
        if !u_cur.is_finite() {
            return Err(Error::Scattering(format!(
                "zero-energy solution diverged near r = {r_cur}"
            )));
        }
    }
    let slope = dy / h;
    let line = |r: f64| u_cur + slope * (r - r_cur);
    let u2 = if r_cur >= r2 { u_cur } else { line(r2) };
    // zero of the free line between the cut and the outer radius
    if r_cur < r2 && slope != 0.0 {
        let zero = r_cur - u_cur / slope;
        if zero > r_cur && zero <= r2 {
            nodes += 1;
        }
    }
    Ok(ZeroEnergy {
        u1: u1.unwrap_or_else(|| line(r1)),
        u2,
        r1,
        r2,
        nodes,
    })
}

/// `a_s` from the asymptotic line `u ~ (r - a_s)` through the two matching radii.
pub fn scattering_length(
    morse: &MorseParams,
    opts: &ScatteringOptions,
) -> Result<ScatteringResult> {
    if morse.de < 0.0 {
        return Err(Error::invalid("scattering length needs De >= 0"));
    }
    let z = integrate_zero_energy(morse, opts)?;
    let slope = (z.u2 - z.u1) / (z.r2 - z.r1);
    let a = z.r1 - z.u1 / slope;
    let a_s = units::length_to_dho(a);
    // a node of the straight line beyond the last grid point still counts
    let extra = usize::from(a > z.r2);
    Ok(ScatteringResult {
        a_s,
        de: morse.de,
        converged: a_s.is_finite() && a_s.abs() <= POLE_FLAG,
        matching_radius: opts.r_match[0],
        bound_states: z.nodes + extra,
        slope,
    })
}

/// Outcome of a pole search; `diagnostic` explains an empty list.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSearch {
    pub poles: Vec<f64>,
    pub diagnostic: Option<String>,
}

/// Depths where `1/a_s` vanishes, i.e. where the asymptotic slope changes sign.
/// The range is scanned with step `scan_step` and each bracket bisected to
/// `tol`.
pub fn pole_positions(
    template: &MorseParams,
    de_range: [f64; 2],
    scan_step: f64,
    tol: f64,
    opts: &ScatteringOptions,
) -> Result<PoleSearch> {
    let [lo, hi] = de_range;
    if !(lo >= 0.0) || !(hi > lo) || !(scan_step > 0.0) || !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "bad pole search range {de_range:?}"
        )));
    }
    let slope_at =
        |de: f64| -> Result<f64> { Ok(scattering_length(&template.with_de(de)?, opts)?.slope) };
    let steps = ((hi - lo) / scan_step).ceil() as usize;
    let mut poles = Vec::new();
    let mut a = lo;
    let mut sa = slope_at(a)?;
    for k in 1..=steps {
        let b = (lo + k as f64 * scan_step).min(hi);
        let sb = slope_at(b)?;
        if sa.signum() != sb.signum() {
            let (mut x0, mut x1, mut s0) = (a, b, sa);
            while x1 - x0 > tol {
                let mid = 0.5 * (x0 + x1);
                let sm = slope_at(mid)?;
                if sm.signum() == s0.signum() {
                    x0 = mid;
                    s0 = sm;
                } else {
                    x1 = mid;
                }
            }
            poles.push(0.5 * (x0 + x1));
        }
        a = b;
        sa = sb;
    }
    let diagnostic = poles
        .is_empty()
        .then(|| format!("no sign change of 1/a_s for De in [{lo}, {hi}]"));
    Ok(PoleSearch { poles, diagnostic })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_interaction_gives_zero_length() {
        let r = scattering_length(
            &MorseParams::standard(0.0).unwrap(),
            &ScatteringOptions::default(),
        )
        .unwrap();
        assert!(r.a_s.abs() < 1e-12, "{}", r.a_s);
        assert_eq!(r.bound_states, 0);
    }

    #[test]
    fn matching_inside_range_is_rejected() {
        let opts = ScatteringOptions {
            r_match: [0.5, 1.0],
            step: 1e-4,
        };
        let e = scattering_length(&MorseParams::standard(3.0).unwrap(), &opts).unwrap_err();
        assert!(matches!(e, Error::Scattering(_)));
    }

    #[test]
    fn empty_range_reports_diagnostic() {
        let m = MorseParams::standard(1.0).unwrap();
        let p = pole_positions(&m, [0.5, 2.0], 0.5, 1e-3, &ScatteringOptions::default()).unwrap();
        assert!(p.poles.is_empty());
        assert!(p.diagnostic.is_some());
    }
}
