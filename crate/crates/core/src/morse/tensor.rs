use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::one_body::GaussianPairData;
use crate::potential::MorseParams;

use super::quartet::two_particle_integral;
use super::rtensor::RTableQ0;

pub const DEFAULT_THRESHOLD: f64 = 1e-14;

/// Quartet `(a, b, c, d)` for `<ab|U|cd>` (`a, c` on particle 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuartetKey(pub [u32; 4]);

impl QuartetKey {
    /// Representative under `a <-> c`, `b <-> d` and the exchange of the two
    /// pairs: each pair sorted ascending, then the pairs sorted, smallest first.
    pub fn canonical(a: usize, b: usize, c: usize, d: usize) -> Self {
        let p1 = (a.min(c) as u32, a.max(c) as u32);
        let p2 = (b.min(d) as u32, b.max(d) as u32);
        let (x, y) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        QuartetKey([x.0, y.0, x.1, y.1])
    }
}

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

fn pair_from_index(k: usize) -> (usize, usize) {
    let mut hi = (((8 * k + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    while (hi + 1) * (hi + 2) / 2 <= k {
        hi += 1;
    }
    while hi * (hi + 1) / 2 > k {
        hi -= 1;
    }
    (hi, k - hi * (hi + 1) / 2)
}

/// Packed Morse integrals with all eight index symmetries folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTensor {
    n: usize,
    threshold: f64,
    morse: MorseParams,
    values: Vec<f64>,
}

impl IntegralTensor {
    pub(crate) fn from_values(
        n: usize,
        threshold: f64,
        morse: MorseParams,
        values: Vec<f64>,
    ) -> Result<Self> {
        let np = n * (n + 1) / 2;
        if values.len() != np * (np + 1) / 2 {
            return Err(Error::Dimension(format!(
                "{} tensor values for a basis of {n}",
                values.len()
            )));
        }
        Ok(Self {
            n,
            threshold,
            morse,
            values,
        })
    }

    pub fn basis_size(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn morse(&self) -> &MorseParams {
        &self.morse
    }

    /// Number of stored canonical entries.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.values[pair_index(pair_index(a, c), pair_index(b, d))]
    }

    pub fn try_get(&self, a: usize, b: usize, c: usize, d: usize) -> Result<f64> {
        if a.max(b).max(c).max(d) >= self.n {
            return Err(Error::MissingIntegral([a, b, c, d]));
        }
        Ok(self.get(a, b, c, d))
    }

    /// Canonical keys with their values, in storage order.
    pub fn canonical_entries(&self) -> impl Iterator<Item = (QuartetKey, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &v)| {
            let (p1, p2) = pair_from_index(k);
            let (a, c) = pair_from_index(p1);
            let (b, d) = pair_from_index(p2);
            (QuartetKey::canonical(a, b, c, d), v)
        })
    }

    /// The same tensor for another depth. Every integral is `De` times a
    /// `De`-independent quantity, so this is exact up to one rounding.
    pub fn rescale_de(&self, de: f64) -> Result<Self> {
        if self.morse.de == 0.0 {
            return Err(Error::invalid("cannot rescale a tensor built at De = 0"));
        }
        let morse = self.morse.with_de(de)?;
        let f = de / self.morse.de;
        let th = self.threshold;
        let values = self
            .values
            .iter()
            .map(|&v| {
                let s = v * f;
                if s.abs() < th {
                    0.0
                } else {
                    s
                }
            })
            .collect();
        Ok(Self {
            n: self.n,
            threshold: th,
            morse,
            values,
        })
    }
}

/// Hermite terms `(t, u, v, coefficient)` of one primitive pair, normalizations included.
struct PairTerms {
    p_class: usize,
    terms: Vec<(u8, u8, u8, f64)>,
}

fn single_center(basis: &BasisSet) -> bool {
    let c0 = basis.primitives[0].center;
    basis.primitives.iter().all(|p| p.center == c0)
}

/// Builds every canonical integral of `basis`. Values below `threshold` are
/// stored as zero. Rows of the packed storage are independent, so the result
/// does not depend on how rayon splits the work.
pub fn build_integral_tensor(
    basis: &BasisSet,
    morse: &MorseParams,
    threshold: f64,
) -> Result<IntegralTensor> {
    if basis.is_empty() {
        return Err(Error::invalid("empty basis"));
    }
    if !(threshold >= 0.0) {
        return Err(Error::invalid(format!(
            "screening threshold must be >= 0, got {threshold}"
        )));
    }
    let n = basis.len();
    let npair = n * (n + 1) / 2;
    let rows: Vec<std::result::Result<Vec<f64>, (usize, Error)>> = if single_center(basis) {
        let (pairs, tables) = single_center_setup(basis, morse)?;
        (0..npair)
            .into_par_iter()
            .map(|p1| Ok(single_center_row(p1, &pairs, &tables, threshold)))
            .collect()
    } else {
        (0..npair)
            .into_par_iter()
            .map(|p1| general_row(p1, basis, morse, threshold))
            .collect()
    };
    let mut values = Vec::with_capacity(npair * (npair + 1) / 2);
    let mut failures = 0usize;
    let mut first = None;
    for row in rows {
        match row {
            Ok(v) => values.extend(v),
            Err((count, e)) => {
                failures += count;
                first.get_or_insert(e);
            }
        }
    }
    if let Some(first) = first {
        return Err(Error::TensorBuild {
            count: failures,
            first: Box::new(first),
        });
    }
    IntegralTensor::from_values(n, threshold, *morse, values)
}

type RTables = BTreeMap<(usize, usize), RTableQ0>;

fn single_center_setup(basis: &BasisSet, morse: &MorseParams) -> Result<(Vec<PairTerms>, RTables)> {
    let prims = &basis.primitives;
    let n = prims.len();
    let mut p_values: Vec<f64> = Vec::new();
    let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
    for hi in 0..n {
        for lo in 0..=hi {
            let (a, c) = (&prims[hi], &prims[lo]);
            let pd = GaussianPairData::new(a, c, 0);
            let p_class = match p_values.iter().position(|&v| v == pd.p) {
                Some(k) => k,
                None => {
                    p_values.push(pd.p);
                    p_values.len() - 1
                }
            };
            let l: [usize; 3] = std::array::from_fn(|ax| (a.powers[ax] + c.powers[ax]) as usize);
            let e =
                |ax: usize, t: usize| pd.e[ax].get(a.powers[ax] as usize, c.powers[ax] as usize, t);
            let mut terms = Vec::new();
            for t in 0..=l[0] {
                for u in 0..=l[1] {
                    for v in 0..=l[2] {
                        let coef = a.norm * c.norm * e(0, t) * e(1, u) * e(2, v);
                        if coef != 0.0 {
                            terms.push((t as u8, u as u8, v as u8, coef));
                        }
                    }
                }
            }
            pairs.push(PairTerms { p_class, terms });
        }
    }
    let lmax = 4 * basis.sigma_max();
    let keys: Vec<(usize, usize)> = (0..p_values.len())
        .flat_map(|i| (0..=i).map(move |j| (i, j)))
        .collect();
    let built: Vec<Result<((usize, usize), RTableQ0)>> = keys
        .par_iter()
        .map(|&(i, j)| {
            Ok((
                (i, j),
                RTableQ0::new(lmax, p_values[i], p_values[j], morse)?,
            ))
        })
        .collect();
    let mut tables = BTreeMap::new();
    for b in built {
        let (k, t) = b?;
        tables.insert(k, t);
    }
    Ok((pairs, tables))
}

fn single_center_row(p1: usize, pairs: &[PairTerms], tables: &RTables, threshold: f64) -> Vec<f64> {
    let a = &pairs[p1];
    (0..=p1)
        .map(|p2| {
            let b = &pairs[p2];
            let key = (a.p_class.max(b.p_class), a.p_class.min(b.p_class));
            let r = &tables[&key];
            let mut sum = 0.0;
            for &(t1, u1, v1, c1) in &a.terms {
                let mut inner = 0.0;
                for &(t2, u2, v2, c2) in &b.terms {
                    let (t, u, v) = ((t1 + t2) as usize, (u1 + u2) as usize, (v1 + v2) as usize);
                    if (t | u | v) & 1 == 1 {
                        continue;
                    }
                    // particle-2 derivatives carry (-1)^{t2+u2+v2}
                    let term = c2 * r.get(t, u, v);
                    if (t2 + u2 + v2) & 1 == 1 {
                        inner -= term;
                    } else {
                        inner += term;
                    }
                }
                sum += c1 * inner;
            }
            if sum.abs() < threshold {
                0.0
            } else {
                sum
            }
        })
        .collect()
}

fn general_row(
    p1: usize,
    basis: &BasisSet,
    morse: &MorseParams,
    threshold: f64,
) -> std::result::Result<Vec<f64>, (usize, Error)> {
    let prims = &basis.primitives;
    let (a, c) = pair_from_index(p1);
    let mut out = Vec::with_capacity(p1 + 1);
    let mut failures = 0;
    let mut first = None;
    for p2 in 0..=p1 {
        let (b, d) = pair_from_index(p2);
        match two_particle_integral(&prims[a], &prims[b], &prims[c], &prims[d], morse) {
            Ok(v) => out.push(if v.abs() < threshold { 0.0 } else { v }),
            Err(e) => {
                failures += 1;
                first.get_or_insert(Error::Quartet {
                    a,
                    b,
                    c,
                    d,
                    source: Box::new(e),
                });
                out.push(f64::NAN);
            }
        }
    }
    match first {
        Some(e) => Err((failures, e)),
        None => Ok(out),
    }
}
