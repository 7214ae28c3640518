use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::units::{self, D_HO};

use super::{CiSolution, ConfigurationSpace};

/// Uniform axis in oscillator lengths, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisGrid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Default for AxisGrid {
    fn default() -> Self {
        Self {
            min: -3.0,
            max: 3.0,
            n: 121,
        }
    }
}

impl AxisGrid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        let g = Self { min, max, n };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !(self.max > self.min) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::invalid(format!(
                "axis grid needs n >= 2 and min < max, got {:?}",
                self
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.min + h * i as f64).collect()
    }
}

/// Cut of a two-particle state at `x1 = y1 = x2 = y2 = 0`. Coordinates are in
/// `d_ho`, densities in `d_ho^-6`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCut {
    pub z: Vec<f64>,
    /// `Psi(z1 = z[i], z2 = z[j])` at `i * n + j`.
    pub amplitude: Vec<f64>,
    pub density: Vec<f64>,
    /// `Psi(z, z)`.
    pub diagonal: Vec<f64>,
    /// `Psi(z, -z)`.
    pub antidiagonal: Vec<f64>,
}

impl DensityCut {
    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn diagonal_density(&self) -> Vec<f64> {
        self.diagonal.iter().map(|v| v * v).collect()
    }

    pub fn antidiagonal_density(&self) -> Vec<f64> {
        self.antidiagonal.iter().map(|v| v * v).collect()
    }

    /// Builds a cut from a callable amplitude in `d_ho` units, applying the
    /// sign convention.
    pub fn from_amplitude(grid: &AxisGrid, psi: impl Fn(f64, f64) -> f64) -> Result<Self> {
        grid.validate()?;
        let z = grid.points();
        let n = z.len();
        let mut amplitude = Vec::with_capacity(n * n);
        for &z1 in &z {
            for &z2 in &z {
                amplitude.push(psi(z1, z2));
            }
        }
        let diagonal: Vec<f64> = z.iter().map(|&t| psi(t, t)).collect();
        let antidiagonal: Vec<f64> = z.iter().map(|&t| psi(t, -t)).collect();
        let mut cut = Self {
            density: Vec::new(),
            z,
            amplitude,
            diagonal,
            antidiagonal,
        };
        cut.fix_sign();
        cut.density = cut.amplitude.iter().map(|v| v * v).collect();
        Ok(cut)
    }

    fn fix_sign(&mut self) {
        let peak =
            self.diagonal
                .iter()
                .copied()
                .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        if peak < 0.0 {
            for v in self
                .amplitude
                .iter_mut()
                .chain(self.diagonal.iter_mut())
                .chain(self.antidiagonal.iter_mut())
            {
                *v = -*v;
            }
        }
    }

    /// Cosine similarity of the two densities on a common grid.
    pub fn overlap(&self, other: &DensityCut) -> Result<f64> {
        if self.z != other.z {
            return Err(Error::Dimension("density cuts on different grids".into()));
        }
        Ok(cosine(&self.density, &other.density))
    }
}

pub(crate) fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Symmetric pair-coefficient matrix: `Psi(r1, r2) = phi(r1)^T M phi(r2)`.
fn pair_matrix(space: &ConfigurationSpace, coefficients: &[f64]) -> Mat<f64> {
    let n = space.n_basis;
    let mut m = Mat::zeros(n, n);
    for (&(a, b), &c) in space.pairs.iter().zip(coefficients) {
        m[(a, b)] += c;
        m[(b, a)] += c;
    }
    m
}

/// Amplitude evaluator for an arbitrary coefficient vector.
pub(crate) fn amplitude_fn<'a>(
    space: &'a ConfigurationSpace,
    coefficients: &[f64],
    basis: &'a BasisSet,
) -> Result<impl Fn(f64, f64) -> f64 + 'a> {
    if basis.len() != space.n_basis || coefficients.len() != space.len() {
        return Err(Error::Dimension(format!(
            "{} coefficients over {} functions for a basis of {}",
            coefficients.len(),
            space.n_basis,
            basis.len()
        )));
    }
    let m = pair_matrix(space, coefficients);
    // Psi^2 d^6r is invariant, so amplitudes pick up d_ho^{3}
    let scale = D_HO.powi(3);
    Ok(move |z1: f64, z2: f64| {
        let f1: Vec<f64> = basis
            .primitives
            .iter()
            .map(|p| p.value([0.0, 0.0, units::length_from_dho(z1)]))
            .collect();
        let f2: Vec<f64> = basis
            .primitives
            .iter()
            .map(|p| p.value([0.0, 0.0, units::length_from_dho(z2)]))
            .collect();
        let n = f1.len();
        let mut s = 0.0;
        for a in 0..n {
            if f1[a] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for b in 0..n {
                row += m[(a, b)] * f2[b];
            }
            s += f1[a] * row;
        }
        scale * s
    })
}

pub fn evaluate_density_cut(
    solution: &CiSolution,
    state: usize,
    basis: &BasisSet,
    grid: &AxisGrid,
) -> Result<DensityCut> {
    let c = solution.state(state)?;
    density_cut_for(&solution.space, &c, basis, grid)
}

/// Cut of the state with coefficient vector `coefficients`.
pub fn density_cut_for(
    space: &ConfigurationSpace,
    coefficients: &[f64],
    basis: &BasisSet,
    grid: &AxisGrid,
) -> Result<DensityCut> {
    let psi = amplitude_fn(space, coefficients, basis)?;
    DensityCut::from_amplitude(grid, psi)
}

/// For a degenerate set of states, the normalized combination with the largest
/// weight on the cut plane: top eigenvector of the Gram matrix of the members'
/// cut amplitudes.
pub fn cluster_density_cut(
    solution: &CiSolution,
    members: &[usize],
    basis: &BasisSet,
    grid: &AxisGrid,
) -> Result<(Vec<f64>, DensityCut)> {
    if members.is_empty() {
        return Err(Error::invalid("empty state cluster"));
    }
    let coeffs: Vec<Vec<f64>> = members
        .iter()
        .map(|&k| solution.state(k))
        .collect::<Result<_>>()?;
    let cuts: Vec<DensityCut> = coeffs
        .iter()
        .map(|c| density_cut_for(&solution.space, c, basis, grid))
        .collect::<Result<_>>()?;
    let k = members.len();
    let gram = Mat::from_fn(k, k, |i, j| {
        cuts[i]
            .amplitude
            .iter()
            .zip(&cuts[j].amplitude)
            .map(|(x, y)| x * y)
            .sum::<f64>()
    });
    let evd = gram
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("cut Gram matrix: {e:?}")))?;
    let top = evd.U().col(k - 1);
    let m = solution.space.len();
    let mut mix = vec![0.0; m];
    for (w, c) in top.iter().zip(&coeffs) {
        for (x, y) in mix.iter_mut().zip(c) {
            *x += w * y;
        }
    }
    let cut = density_cut_for(&solution.space, &mix, basis, grid)?;
    Ok((mix, cut))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_include_endpoints() {
        let g = AxisGrid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(AxisGrid::new(1.0, 1.0, 5).is_err());
        assert!(AxisGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn sign_convention_makes_diagonal_peak_positive() {
        let g = AxisGrid::new(-2.0, 2.0, 41).unwrap();
        let cut = DensityCut::from_amplitude(&g, |a, b| -(-(a * a + b * b)).exp()).unwrap();
        assert!(cut.diagonal[20] > 0.0);
        assert!(cut.amplitude[20 * 41 + 20] > 0.0);
        assert!((cut.overlap(&cut).unwrap() - 1.0).abs() < 1e-14);
    }
}
