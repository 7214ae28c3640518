//! Generalized symmetric eigenproblem `H c = E S c`.

use faer::linalg::triangular_solve::{
    solve_lower_triangular_in_place, solve_upper_triangular_in_place,
};
use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Eigenpairs in ascending order; columns of `vectors` are S-orthonormal.
#[derive(Debug, Clone)]
pub struct GeneralizedEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
    /// Dimension of the subspace actually diagonalized.
    pub kept: usize,
}

fn eigh(m: MatRef<'_, f64>, what: &str) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{what}: {e:?}")))?;
    let vals = evd.S().column_vector().iter().copied().collect();
    Ok((vals, evd.U().to_owned()))
}

fn check_dims(h: MatRef<'_, f64>, s: MatRef<'_, f64>) -> Result<()> {
    if h.nrows() != h.ncols() || s.nrows() != s.ncols() || h.nrows() != s.nrows() {
        return Err(Error::Dimension(format!(
            "H is {}x{}, S is {}x{}",
            h.nrows(),
            h.ncols(),
            s.nrows(),
            s.ncols()
        )));
    }
    if h.nrows() == 0 {
        return Err(Error::Dimension("empty matrices".into()));
    }
    Ok(())
}

struct OverlapBasis {
    values: Vec<f64>,
    vectors: Mat<f64>,
    keep: Vec<usize>,
}

fn overlap_basis(s: MatRef<'_, f64>, lindep: f64) -> Result<OverlapBasis> {
    let (values, vectors) = eigh(s, "overlap")?;
    let smax = values.iter().copied().fold(f64::MIN, f64::max);
    if !(smax > 0.0) {
        return Err(Error::IndefiniteOverlap {
            eigenvalue: smax,
            threshold: 0.0,
        });
    }
    let cut = lindep * smax;
    if let Some(&bad) = values.iter().find(|&&v| v < -cut) {
        return Err(Error::IndefiniteOverlap {
            eigenvalue: bad,
            threshold: cut,
        });
    }
    let keep = (0..values.len()).filter(|&k| values[k] >= cut).collect();
    Ok(OverlapBasis {
        values,
        vectors,
        keep,
    })
}

/// Canonical orthogonalization: drops overlap eigenvectors whose eigenvalue is
/// below `lindep * max_eigenvalue` and diagonalizes `H` in the rest.
pub fn solve_canonical(
    h: MatRef<'_, f64>,
    s: MatRef<'_, f64>,
    lindep: f64,
) -> Result<GeneralizedEigen> {
    check_dims(h, s)?;
    let OverlapBasis {
        values: sv,
        vectors: su,
        keep,
    } = overlap_basis(s, lindep)?;
    let n = s.nrows();
    let x = Mat::from_fn(n, keep.len(), |i, j| su[(i, keep[j])] / sv[keep[j]].sqrt());
    let hx = h * &x;
    let hp = x.transpose() * &hx;
    let hp = symmetrize(hp);
    let (values, c) = eigh(hp.as_ref(), "transformed Hamiltonian")?;
    Ok(GeneralizedEigen {
        values,
        vectors: &x * &c,
        kept: keep.len(),
    })
}

/// Cholesky congruence restricted to the overlap eigenvectors that
/// [`solve_canonical`] keeps at the same `lindep`, so both routes diagonalize
/// the same pencil.
pub fn solve_congruence_pruned(
    h: MatRef<'_, f64>,
    s: MatRef<'_, f64>,
    lindep: f64,
) -> Result<GeneralizedEigen> {
    check_dims(h, s)?;
    let OverlapBasis {
        vectors: su, keep, ..
    } = overlap_basis(s, lindep)?;
    let x = Mat::from_fn(s.nrows(), keep.len(), |i, j| su[(i, keep[j])]);
    let hp = symmetrize(x.transpose() * (h * &x));
    let sp = symmetrize(x.transpose() * (s * &x));
    let g = solve_congruence(hp.as_ref(), sp.as_ref())?;
    Ok(GeneralizedEigen {
        values: g.values,
        vectors: &x * &g.vectors,
        kept: keep.len(),
    })
}

/// Congruence with the Cholesky factor `S = L L^T`; fails when `S` is not
/// numerically positive definite.
pub fn solve_congruence(h: MatRef<'_, f64>, s: MatRef<'_, f64>) -> Result<GeneralizedEigen> {
    check_dims(h, s)?;
    let llt = s
        .llt(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("Cholesky factorization of S: {e:?}")))?;
    let l = llt.L();
    let par = faer::get_global_parallelism();
    // L^{-1} H L^{-T} = L^{-1} (L^{-1} H)^T for symmetric H
    let mut y = h.to_owned();
    solve_lower_triangular_in_place(l, y.as_mut(), par);
    let mut hp = y.transpose().to_owned();
    solve_lower_triangular_in_place(l, hp.as_mut(), par);
    let hp = symmetrize(hp);
    let (values, mut c) = eigh(hp.as_ref(), "transformed Hamiltonian")?;
    solve_upper_triangular_in_place(l.transpose(), c.as_mut(), par);
    let kept = values.len();
    Ok(GeneralizedEigen {
        values,
        vectors: c,
        kept,
    })
}

fn symmetrize(m: Mat<f64>) -> Mat<f64> {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Largest `|C^T S C - 1|` entry.
pub fn s_orthonormality_residual(c: MatRef<'_, f64>, s: MatRef<'_, f64>) -> f64 {
    let g = c.transpose() * (s * c);
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}
