//! Post-hoc state labels. The CI matrix itself is never symmetry blocked.

use std::collections::HashMap;

use faer::Mat;
use serde::Serialize;

use crate::basis::BasisSet;
use crate::error::{Error, Result};

use super::{CiSolution, ConfigurationSpace};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateLabel {
    pub state: usize,
    pub energy: f64,
    pub cluster_id: usize,
    pub cluster_size: usize,
    /// Guess from the cluster multiplicity alone.
    pub l_guess: Option<u32>,
}

/// Groups ascending energies whose neighbours lie within `tol`.
pub fn cluster_energies(energies: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &e) in energies.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if (e - energies[*c.last().unwrap()]).abs() <= tol => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    clusters
}

fn l_from_multiplicity(size: usize) -> Option<u32> {
    match size {
        1 => Some(0),
        3 => Some(1),
        5 => Some(2),
        7 => Some(3),
        _ => None,
    }
}

pub fn classify_states(solution: &CiSolution, degeneracy_tol: f64) -> Vec<StateLabel> {
    let mut out = Vec::with_capacity(solution.n_states());
    for (id, members) in cluster_energies(&solution.energies, degeneracy_tol)
        .into_iter()
        .enumerate()
    {
        let size = members.len();
        for k in members {
            out.push(StateLabel {
                state: k,
                energy: solution.energies[k],
                cluster_id: id,
                cluster_size: size,
                l_guess: l_from_multiplicity(size),
            });
        }
    }
    out
}

/// Signed axis permutations of the cube acting on configuration vectors.
/// Available only for bases whose primitives share one center at the origin
/// and are closed under axis permutations.
pub struct SymmetryProbe {
    /// Per operation: target configuration and sign for each configuration.
    ops: Vec<Vec<(usize, f64)>>,
    inversion: usize,
}

fn cube_operations() -> Vec<([usize; 3], [f64; 3])> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut ops = Vec::with_capacity(48);
    for p in perms {
        for s in 0..8u32 {
            let signs = std::array::from_fn(|ax| if s >> ax & 1 == 1 { -1.0 } else { 1.0 });
            ops.push((p, signs));
        }
    }
    ops
}

impl SymmetryProbe {
    pub fn new(basis: &BasisSet, space: &ConfigurationSpace) -> Result<Self> {
        if basis.len() != space.n_basis {
            return Err(Error::Dimension(
                "basis and configuration space differ".into(),
            ));
        }
        if basis.primitives.iter().any(|p| p.center != [0.0; 3]) {
            return Err(Error::invalid(
                "symmetry probe needs every primitive at the origin",
            ));
        }
        let lookup: HashMap<([u32; 3], u64), usize> = basis
            .primitives
            .iter()
            .enumerate()
            .map(|(k, p)| ((p.powers, p.tau.to_bits()), k))
            .collect();
        let cube = cube_operations();
        let mut ops = Vec::with_capacity(cube.len());
        let mut inversion = 0;
        for (o, (perm, signs)) in cube.iter().enumerate() {
            if *perm == [0, 1, 2] && *signs == [-1.0; 3] {
                inversion = o;
            }
            // (g f)(r) = f(g^-1 r): new x-power on axis perm[ax] comes from axis ax
            let prim_map: Vec<(usize, f64)> = basis
                .primitives
                .iter()
                .map(|p| {
                    let mut powers = [0u32; 3];
                    let mut sign = 1.0;
                    for ax in 0..3 {
                        powers[perm[ax]] = p.powers[ax];
                        if p.powers[ax] % 2 == 1 {
                            sign *= signs[ax];
                        }
                    }
                    lookup
                        .get(&(powers, p.tau.to_bits()))
                        .map(|&k| (k, sign))
                        .ok_or_else(|| {
                            Error::invalid("basis is not closed under axis permutations")
                        })
                })
                .collect::<Result<_>>()?;
            let conf = space
                .pairs
                .iter()
                .map(|&(a, b)| {
                    let (ga, sa) = prim_map[a];
                    let (gb, sb) = prim_map[b];
                    (space.index_of(ga, gb), sa * sb)
                })
                .collect();
            ops.push(conf);
        }
        Ok(Self { ops, inversion })
    }

    fn apply(&self, op: usize, c: &[f64], out: &mut [f64]) {
        for (k, &(target, sign)) in self.ops[op].iter().enumerate() {
            out[target] += sign * c[k];
        }
    }

    /// Weight of the fully symmetric cubic component, `<Psi|P_A1|Psi>` for an
    /// S-normalized state.
    pub fn a1_weight(&self, overlap: &Mat<f64>, c: &[f64]) -> f64 {
        let mut p = vec![0.0; c.len()];
        for op in 0..self.ops.len() {
            self.apply(op, c, &mut p);
        }
        let scale = 1.0 / self.ops.len() as f64;
        p.iter_mut().for_each(|x| *x *= scale);
        s_inner(overlap, &p, &p)
    }

    /// `<Psi|Pi|Psi>` for the joint inversion of both particles.
    pub fn parity(&self, overlap: &Mat<f64>, c: &[f64]) -> f64 {
        let mut p = vec![0.0; c.len()];
        self.apply(self.inversion, c, &mut p);
        s_inner(overlap, c, &p)
    }
}

fn s_inner(s: &Mat<f64>, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for j in 0..n {
        if y[j] == 0.0 {
            continue;
        }
        let col = s.col(j);
        let mut acc = 0.0;
        for (i, v) in col.iter().enumerate() {
            acc += x[i] * v;
        }
        total += acc * y[j];
    }
    total
}

/// Angular momentum read off the symmetry probe for one state.
pub fn symmetry_l(a1_weight: f64, parity: f64) -> u32 {
    if a1_weight > 0.5 {
        0
    } else if parity < 0.0 {
        1
    } else {
        2
    }
}

impl CiSolution {
    /// Members of every degeneracy cluster.
    pub fn clusters(&self, degeneracy_tol: f64) -> Vec<Vec<usize>> {
        cluster_energies(&self.energies, degeneracy_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_chains_neighbours() {
        let e = [1.0, 1.00005, 1.0001, 2.0, 3.0, 3.00001];
        let c = cluster_energies(&e, 1e-4);
        assert_eq!(c, vec![vec![0, 1, 2], vec![3], vec![4, 5]]);
        assert_eq!(cluster_energies(&[0.5], 1e-4), vec![vec![0]]);
    }

    #[test]
    fn cube_has_48_distinct_operations() {
        let ops = cube_operations();
        assert_eq!(ops.len(), 48);
        for i in 0..48 {
            for j in 0..i {
                assert_ne!(ops[i], ops[j]);
            }
        }
    }
}
