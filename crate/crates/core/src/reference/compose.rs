use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::MorseParams;

use super::radial::{radial_spectrum, RadialProblem};

/// Tracked states of the two-boson spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StateName {
    Mgs,
    Ms1,
    Ms2L0,
    Ms2L2,
    Ts1,
    Ts2,
    Ts3,
}

impl StateName {
    pub const ALL: [StateName; 7] = [
        StateName::Mgs,
        StateName::Ms1,
        StateName::Ms2L0,
        StateName::Ms2L2,
        StateName::Ts1,
        StateName::Ts2,
        StateName::Ts3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StateName::Mgs => "MGS",
            StateName::Ms1 => "MS1",
            StateName::Ms2L0 => "MS2_L0",
            StateName::Ms2L2 => "MS2_L2",
            StateName::Ts1 => "TS1",
            StateName::Ts2 => "TS2",
            StateName::Ts3 => "TS3",
        }
    }

    /// Total angular momentum.
    pub fn l(self) -> u32 {
        match self {
            StateName::Mgs | StateName::Ms2L0 | StateName::Ts1 | StateName::Ts2 => 0,
            StateName::Ms1 => 1,
            StateName::Ms2L2 | StateName::Ts3 => 2,
        }
    }

    /// `(relative l, relative radial index, centre-of-mass quanta)`.
    pub fn composition(self) -> (u32, usize, u32) {
        match self {
            StateName::Mgs => (0, 0, 0),
            StateName::Ms1 => (0, 0, 1),
            StateName::Ms2L0 | StateName::Ms2L2 => (0, 0, 2),
            StateName::Ts1 => (0, 1, 0),
            StateName::Ts2 => (0, 1, 2),
            StateName::Ts3 => (2, 0, 0),
        }
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositeLevel {
    pub ell: u32,
    pub n_rel: usize,
    pub n_com: u32,
    pub e_rel: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceResult {
    /// Relative levels per partial wave.
    pub relative: BTreeMap<u32, Vec<f64>>,
    /// All `E_rel + (N + 3/2)` combinations, ascending.
    pub totals: Vec<CompositeLevel>,
    pub named: Vec<(StateName, f64)>,
}

impl ReferenceResult {
    pub fn energy(&self, name: StateName) -> Option<f64> {
        self.named.iter().find(|(n, _)| *n == name).map(|&(_, e)| e)
    }
}

pub fn compose_totals(relative: &BTreeMap<u32, Vec<f64>>, n_com_max: u32) -> ReferenceResult {
    let mut totals: Vec<CompositeLevel> = relative
        .iter()
        .flat_map(|(&ell, levels)| {
            levels.iter().enumerate().flat_map(move |(n_rel, &e_rel)| {
                (0..=n_com_max).map(move |n_com| CompositeLevel {
                    ell,
                    n_rel,
                    n_com,
                    e_rel,
                    energy: e_rel + n_com as f64 + 1.5,
                })
            })
        })
        .collect();
    totals.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let named = StateName::ALL
        .iter()
        .filter_map(|&name| {
            let (ell, n_rel, n_com) = name.composition();
            let e = *relative.get(&ell)?.get(n_rel)?;
            (n_com <= n_com_max).then_some((name, e + n_com as f64 + 1.5))
        })
        .collect();
    ReferenceResult {
        relative: relative.clone(),
        totals,
        named,
    }
}

/// Relative s- and d-wave spectra in the trap, composed with the
/// centre-of-mass ladder up to two quanta.
pub fn reference_spectrum(morse: &MorseParams) -> Result<ReferenceResult> {
    let mut relative = BTreeMap::new();
    for (ell, count) in [(0u32, 3usize), (2, 1)] {
        let s = radial_spectrum(&RadialProblem::trapped(ell, *morse), count)?;
        relative.insert(ell, s.energies);
    }
    let r = compose_totals(&relative, 2);
    if r.named.len() != StateName::ALL.len() {
        return Err(Error::invalid("reference composition is missing states"));
    }
    Ok(r)
}
