//! Full configuration interaction for two bosons.
//!
//! Configurations are the symmetrized, unnormalized products
//! `Phi_ab = phi_a(1) phi_b(2) + phi_b(1) phi_a(2)` for `a <= b`; the
//! generalized eigenproblem absorbs their normalization.

mod assign;
mod density;
mod symmetry;

pub use assign::{analyze_clusters, assign_states, Assignment, ClusterInfo, CROSSING_WINDOW};
pub use density::{
    cluster_density_cut, density_cut_for, evaluate_density_cut, AxisGrid, DensityCut,
};
pub use symmetry::{classify_states, cluster_energies, symmetry_l, StateLabel, SymmetryProbe};

use faer::Mat;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, GeneralizedEigen};
use crate::morse::IntegralTensor;
use crate::one_body::OneBodyMatrices;

pub const DEFAULT_LINDEP: f64 = 1e-10;
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-4;
/// Pruning for the cross-route comparison.
pub const ROUTE_CHECK_LINDEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationSpace {
    pub n_basis: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl ConfigurationSpace {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Position of the configuration `(a, b)` in either order.
    pub fn index_of(&self, a: usize, b: usize) -> usize {
        let (lo, hi) = (a.min(b), a.max(b));
        // pairs are ordered (0,0), (0,1), ..., (0,n-1), (1,1), ...
        lo * self.n_basis - lo * (lo.saturating_sub(1)) / 2 + (hi - lo)
    }
}

pub fn enumerate_configurations(n_basis: usize) -> Result<ConfigurationSpace> {
    if n_basis == 0 {
        return Err(Error::invalid(
            "configuration space needs at least one basis function",
        ));
    }
    let pairs = (0..n_basis)
        .flat_map(|a| (a..n_basis).map(move |b| (a, b)))
        .collect();
    Ok(ConfigurationSpace { n_basis, pairs })
}

#[derive(Debug, Clone)]
pub struct CiMatrices {
    pub h: Mat<f64>,
    pub s: Mat<f64>,
}

/// Hamiltonian and overlap over the configurations. `tensor = None` means no
/// interaction.
pub fn assemble(
    space: &ConfigurationSpace,
    one: &OneBodyMatrices,
    tensor: Option<&IntegralTensor>,
) -> Result<CiMatrices> {
    let n = space.n_basis;
    if one.s.nrows() != n || one.h.nrows() != n {
        return Err(Error::Dimension(format!(
            "one-body matrices are {}x{}, configurations need {n}",
            one.s.nrows(),
            one.s.ncols()
        )));
    }
    if let Some(t) = tensor {
        if t.basis_size() != n {
            return Err(Error::Dimension(format!(
                "integral tensor covers {} functions, configurations need {n}",
                t.basis_size()
            )));
        }
    }
    let (s1, h1) = (&one.s, &one.h);
    let m = space.len();
    let rows: Vec<Vec<(f64, f64)>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let (a, b) = space.pairs[i];
            (0..=i)
                .map(|j| {
                    let (c, d) = space.pairs[j];
                    let s = 2.0 * (s1[(a, c)] * s1[(b, d)] + s1[(a, d)] * s1[(b, c)]);
                    let mut h = 2.0
                        * (h1[(a, c)] * s1[(b, d)]
                            + s1[(a, c)] * h1[(b, d)]
                            + h1[(a, d)] * s1[(b, c)]
                            + s1[(a, d)] * h1[(b, c)]);
                    if let Some(t) = tensor {
                        h += 2.0 * (t.get(a, b, c, d) + t.get(a, b, d, c));
                    }
                    (h, s)
                })
                .collect()
        })
        .collect();
    let mut h = Mat::zeros(m, m);
    let mut s = Mat::zeros(m, m);
    for (i, row) in rows.iter().enumerate() {
        for (j, &(hv, sv)) in row.iter().enumerate() {
            h[(i, j)] = hv;
            h[(j, i)] = hv;
            s[(i, j)] = sv;
            s[(j, i)] = sv;
        }
    }
    Ok(CiMatrices { h, s })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverRoute {
    Canonical,
    Congruence,
}

#[derive(Debug, Clone)]
pub struct CiSolution {
    pub space: ConfigurationSpace,
    pub energies: Vec<f64>,
    /// One column per state, S-orthonormal.
    pub coefficients: Mat<f64>,
    pub kept: usize,
    pub route: SolverRoute,
}

impl CiSolution {
    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    pub fn state(&self, index: usize) -> Result<Vec<f64>> {
        if index >= self.n_states() {
            return Err(Error::StateOutOfRange {
                index,
                available: self.n_states(),
            });
        }
        Ok(self.coefficients.col(index).iter().copied().collect())
    }
}

fn wrap(space: &ConfigurationSpace, g: GeneralizedEigen, route: SolverRoute) -> CiSolution {
    CiSolution {
        space: space.clone(),
        energies: g.values,
        coefficients: g.vectors,
        kept: g.kept,
        route,
    }
}

/// Canonical orthogonalization with the given linear-dependence threshold.
pub fn solve(space: &ConfigurationSpace, m: &CiMatrices, lindep: f64) -> Result<CiSolution> {
    let g = linalg::solve_canonical(m.h.as_ref(), m.s.as_ref(), lindep)?;
    Ok(wrap(space, g, SolverRoute::Canonical))
}

/// Cholesky congruence route on the full configuration space.
pub fn solve_congruence(space: &ConfigurationSpace, m: &CiMatrices) -> Result<CiSolution> {
    let g = linalg::solve_congruence(m.h.as_ref(), m.s.as_ref())?;
    Ok(wrap(space, g, SolverRoute::Congruence))
}

/// Cholesky congruence in the subspace [`solve`] keeps at the same `lindep`.
pub fn solve_congruence_pruned(
    space: &ConfigurationSpace,
    m: &CiMatrices,
    lindep: f64,
) -> Result<CiSolution> {
    let g = linalg::solve_congruence_pruned(m.h.as_ref(), m.s.as_ref(), lindep)?;
    Ok(wrap(space, g, SolverRoute::Congruence))
}
