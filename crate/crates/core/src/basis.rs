//! Cartesian Gaussian primitives and shell-based basis sets.

use std::collections::HashSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::double_factorial;
use crate::units;

/// Exponents of the named `GTO` basis.
pub const GTO_EXPONENTS: [f64; 4] = [0.3, 0.5, 1.0, 2.2];
/// Exponents of the `GTO-2` basis for shells up to `f`.
pub const GTO2_EXPONENTS: [f64; 3] = [1.0, 1.7, 2.3];
/// Exponent of the extra `g` and `h` shells in `GTO-2`.
pub const GTO2_HIGH_EXPONENT: f64 = 1.0;

/// `N (x-Ax)^i (y-Ay)^k (z-Az)^m exp(-tau |r-A|^2)` in internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GtoPrimitive {
    pub powers: [u32; 3],
    pub tau: f64,
    pub center: [f64; 3],
    pub norm: f64,
}

impl GtoPrimitive {
    pub fn new(powers: [u32; 3], tau: f64, center: [f64; 3]) -> Result<Self> {
        let norm = normalization_constant(powers[0], powers[1], powers[2], tau)?;
        Ok(Self {
            powers,
            tau,
            center,
            norm,
        })
    }

    pub fn sigma(&self) -> u32 {
        self.powers.iter().sum()
    }

    pub fn value(&self, r: [f64; 3]) -> f64 {
        let mut poly = 1.0;
        let mut r2 = 0.0;
        for ax in 0..3 {
            let d = r[ax] - self.center[ax];
            poly *= d.powi(self.powers[ax] as i32);
            r2 += d * d;
        }
        self.norm * poly * (-self.tau * r2).exp()
    }

    fn identity(&self) -> ([u32; 3], u64, [u64; 3]) {
        (
            self.powers,
            self.tau.to_bits(),
            self.center.map(f64::to_bits),
        )
    }
}

/// `(2 tau / pi)^(3/4) sqrt((4 tau)^(i+k+m) / ((2i-1)!! (2k-1)!! (2m-1)!!))`.
pub fn normalization_constant(i: u32, k: u32, m: u32, tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!(
            "GTO exponent must be positive, got {tau}"
        )));
    }
    let df = |n: u32| double_factorial(2 * n as i64 - 1);
    let sigma = (i + k + m) as i32;
    Ok((2.0 * tau / PI).powf(0.75) * ((4.0 * tau).powi(sigma) / (df(i) * df(k) * df(m))).sqrt())
}

/// Cartesian powers of one shell in descending lexicographic order
/// (`xx, xy, xz, yy, yz, zz` for `sigma = 2`).
pub fn shell_powers(sigma: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(((sigma + 1) * (sigma + 2) / 2) as usize);
    for i in (0..=sigma).rev() {
        for k in (0..=sigma - i).rev() {
            out.push([i, k, sigma - i - k]);
        }
    }
    out
}

/// One shell of the basis. Exponents are in internal units (see the crate
/// docs); the center is given in `d_ho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellSpec {
    pub sigma: u32,
    pub exponents: Vec<f64>,
    #[serde(default)]
    pub center: [f64; 3],
}

impl ShellSpec {
    pub fn new(sigma: u32, exponents: &[f64]) -> Self {
        Self {
            sigma,
            exponents: exponents.to_vec(),
            center: [0.0; 3],
        }
    }

    pub fn primitive_count(&self) -> usize {
        ((self.sigma + 1) * (self.sigma + 2) / 2) as usize * self.exponents.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub name: String,
    pub primitives: Vec<GtoPrimitive>,
    pub shells: Vec<ShellSpec>,
}

/// Expands shells in the order shell, exponent, Cartesian powers.
pub fn expand_shells(specs: &[ShellSpec]) -> Result<BasisSet> {
    let mut primitives = Vec::new();
    let mut seen = HashSet::new();
    for spec in specs {
        if spec.exponents.is_empty() {
            return Err(Error::Config(format!(
                "shell sigma={} has no exponents",
                spec.sigma
            )));
        }
        let center = units::vec_from_dho(spec.center);
        for &tau in &spec.exponents {
            for powers in shell_powers(spec.sigma) {
                let prim = GtoPrimitive::new(powers, tau, center)?;
                if !seen.insert(prim.identity()) {
                    return Err(Error::Config(format!(
                        "duplicate primitive: powers {powers:?}, tau {tau}, center {:?} d_ho",
                        spec.center
                    )));
                }
                primitives.push(prim);
            }
        }
    }
    if primitives.is_empty() {
        return Err(Error::Config("basis has no shells".into()));
    }
    Ok(BasisSet {
        name: "custom".into(),
        primitives,
        shells: specs.to_vec(),
    })
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.primitives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    pub fn sigma_max(&self) -> u32 {
        self.primitives
            .iter()
            .map(GtoPrimitive::sigma)
            .max()
            .unwrap_or(0)
    }

    pub fn from_shells(name: &str, specs: &[ShellSpec]) -> Result<Self> {
        let mut b = expand_shells(specs)?;
        b.name = name.to_string();
        Ok(b)
    }

    /// `s`, `p`, `d`, `f` shells sharing the four `GTO` exponents (80 functions).
    pub fn gto() -> Self {
        Self::gto_ladder(3)
    }

    /// The first `sigma_max + 1` shells of `GTO`: 4, 16, 40, 80 functions.
    pub fn gto_ladder(sigma_max: u32) -> Self {
        let shells: Vec<_> = (0..=sigma_max)
            .map(|s| ShellSpec::new(s, &GTO_EXPONENTS))
            .collect();
        let name = if sigma_max == 3 {
            "GTO".to_string()
        } else {
            format!("GTO[sigma<={sigma_max}]")
        };
        Self::from_shells(&name, &shells).expect("built-in basis is valid")
    }

    /// Three exponents for `s` through `f` plus one `g` and one `h` shell (96 functions).
    pub fn gto2() -> Self {
        let mut shells: Vec<_> = (0..=3)
            .map(|s| ShellSpec::new(s, &GTO2_EXPONENTS))
            .collect();
        shells.push(ShellSpec::new(4, &[GTO2_HIGH_EXPONENT]));
        shells.push(ShellSpec::new(5, &[GTO2_HIGH_EXPONENT]));
        Self::from_shells("GTO-2", &shells).expect("built-in basis is valid")
    }

    pub fn named(name: &str) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "GTO" => Ok(Self::gto()),
            "GTO-2" | "GTO2" => Ok(Self::gto2()),
            _ => Err(Error::Config(format!(
                "unknown basis '{name}', expected GTO or GTO-2"
            ))),
        }
    }

    /// Stable byte encoding of the primitives, used for cache keys.
    pub fn fingerprint_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len() * 44);
        for p in &self.primitives {
            for v in p.powers {
                out.extend_from_slice(&v.to_le_bytes());
            }
            out.extend_from_slice(&p.tau.to_le_bytes());
            for c in p.center {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
        out
    }
}
