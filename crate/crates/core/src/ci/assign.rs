use faer::Mat;
use serde::Serialize;

use crate::reference::{ReferenceResult, StateName};

use super::symmetry::{cluster_energies, SymmetryProbe};
use super::CiSolution;

/// Window (in `hbar omega`) inside which a second cluster of the same `L` marks
/// an assignment as a possible crossing.
pub const CROSSING_WINDOW: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterInfo {
    pub id: usize,
    pub members: Vec<usize>,
    pub energy: f64,
    pub l: Option<u32>,
    /// Sum of the A1 weights of the members; 1 for `L = 0`, 0 for `L = 1, 2, 3`.
    pub a1_sum: Option<f64>,
    pub parity: Option<f64>,
}

impl ClusterInfo {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn l_from(size: usize, a1_sum: Option<f64>, parity: Option<f64>) -> Option<u32> {
    let guess = match size {
        1 => Some(0),
        3 => Some(1),
        5 => Some(2),
        7 => Some(3),
        _ => None,
    };
    let (Some(a1), Some(par)) = (a1_sum, parity) else {
        return guess;
    };
    let even = par > 0.0;
    match (size, even) {
        (1, true) if a1 > 0.5 => Some(0),
        (3, false) if a1 < 0.5 => Some(1),
        (5, true) if a1 < 0.5 => Some(2),
        (7, false) if a1 < 0.5 => Some(3),
        _ => None,
    }
}

/// Clusters of the states below `e_max` with their angular momentum.
pub fn analyze_clusters(
    solution: &CiSolution,
    probe: Option<&SymmetryProbe>,
    overlap: &Mat<f64>,
    degeneracy_tol: f64,
    e_max: f64,
) -> Vec<ClusterInfo> {
    let n = solution
        .energies
        .iter()
        .take_while(|&&e| e <= e_max)
        .count();
    cluster_energies(&solution.energies[..n], degeneracy_tol)
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            let energy =
                members.iter().map(|&k| solution.energies[k]).sum::<f64>() / members.len() as f64;
            let (a1_sum, parity) = match probe {
                Some(p) => {
                    let mut a1 = 0.0;
                    let mut par = 0.0;
                    for &k in &members {
                        let c: Vec<f64> = solution.coefficients.col(k).iter().copied().collect();
                        a1 += p.a1_weight(overlap, &c);
                        par += p.parity(overlap, &c);
                    }
                    (Some(a1), Some(par / members.len() as f64))
                }
                None => (None, None),
            };
            ClusterInfo {
                id,
                l: l_from(members.len(), a1_sum, parity),
                members,
                energy,
                a1_sum,
                parity,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assignment {
    pub name: StateName,
    pub cluster: usize,
    /// Lowest member of the cluster.
    pub state: usize,
    pub energy: f64,
    pub reference: f64,
    /// Another cluster with the same `L` lies within [`CROSSING_WINDOW`].
    pub crossing: bool,
}

/// Matches every named reference level to the closest CI cluster of the same
/// angular momentum.
pub fn assign_states(
    solution: &CiSolution,
    clusters: &[ClusterInfo],
    reference: &ReferenceResult,
) -> Vec<Assignment> {
    reference
        .named
        .iter()
        .filter_map(|&(name, e_ref)| {
            let l = name.l();
            let mut candidates: Vec<&ClusterInfo> =
                clusters.iter().filter(|c| c.l == Some(l)).collect();
            candidates.sort_by(|a, b| {
                (a.energy - e_ref)
                    .abs()
                    .total_cmp(&(b.energy - e_ref).abs())
            });
            let best = *candidates.first()?;
            let crossing = candidates
                .get(1)
                .is_some_and(|c| (c.energy - best.energy).abs() < CROSSING_WINDOW);
            Some(Assignment {
                name,
                cluster: best.id,
                state: best.members[0],
                energy: solution.energies[best.members[0]],
                reference: e_ref,
                crossing,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_alone_without_probe() {
        assert_eq!(l_from(1, None, None), Some(0));
        assert_eq!(l_from(5, None, None), Some(2));
        assert_eq!(l_from(6, None, None), None);
    }

    #[test]
    fn probe_overrides_inconsistent_multiplicity() {
        assert_eq!(l_from(1, Some(0.0), Some(1.0)), None);
        assert_eq!(l_from(3, Some(0.0), Some(-1.0)), Some(1));
        assert_eq!(l_from(3, Some(0.0), Some(1.0)), None);
    }
}
