//! Internal bridge to dense decompositions (faer) plus a Hungarian solver.
//!
//! All matrices handled here are small (rank x rank, or a few hundred rows at
//! most); the bulk tensor arithmetic stays in `tensor` on ndarray storage.

use faer::Side;
use ndarray::Array2;

use crate::error::Error;
use crate::tensor::{CMat, C64};
use crate::Result;

pub(crate) fn to_faer(m: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub(crate) fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
    CMat::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Pseudo-inverse of a Hermitian PSD matrix via its eigendecomposition.
pub(crate) struct HermitianPinv {
    /// The pseudo-inverse.
    pub inv: CMat,
    /// Eigenvalues in ascending order (clamped at zero).
    pub eigs: Vec<f64>,
    /// Number of eigenvalues truncated by the floor.
    pub truncated: usize,
}

/// Inverts a Hermitian PSD Gramian `G = K^H K`, truncating eigenvalues that
/// correspond to singular values of `K` below `sv_rel_floor * sigma_max`.
pub(crate) fn pinv_hermitian(g: &CMat, sv_rel_floor: f64) -> Result<HermitianPinv> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "pinv_hermitian: matrix {}x{} not square",
            g.nrows(),
            g.ncols()
        )));
    }
    let eig = to_faer(g)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigendecomposition failed: {e:?}")))?;
    let u = from_faer(eig.U());
    let eigs: Vec<f64> = (0..n).map(|i| eig.S()[i].re.max(0.0)).collect();
    let lambda_max = eigs.iter().cloned().fold(0.0, f64::max);
    // sigma = sqrt(lambda); the singular-value floor squares on eigenvalues.
    let lambda_floor = sv_rel_floor * sv_rel_floor * lambda_max;
    let mut inv = CMat::zeros((n, n));
    let mut truncated = 0;
    for k in 0..n {
        if eigs[k] <= lambda_floor || eigs[k] == 0.0 {
            truncated += 1;
            continue;
        }
        let w = 1.0 / eigs[k];
        for i in 0..n {
            let ui = u[(i, k)];
            for j in 0..n {
                inv[(i, j)] += ui * u[(j, k)].conj() * w;
            }
        }
    }
    Ok(HermitianPinv { inv, eigs, truncated })
}

/// Thin SVD `A = U diag(s) V^H` with `s` nonincreasing.
pub(crate) struct ThinSvd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

pub(crate) fn thin_svd(a: &CMat) -> Result<ThinSvd> {
    let svd = to_faer(a)
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("svd failed: {e:?}")))?;
    let k = a.nrows().min(a.ncols());
    Ok(ThinSvd {
        u: from_faer(svd.U()),
        s: (0..k).map(|i| svd.S()[i].re).collect(),
        v: from_faer(svd.V()),
    })
}

/// Pseudo-inverse of a general matrix with a relative singular-value floor.
pub(crate) fn pinv(a: &CMat, sv_rel_floor: f64) -> Result<(CMat, usize)> {
    let ThinSvd { u, s, v } = thin_svd(a)?;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let floor = sv_rel_floor * smax;
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut out = CMat::zeros((cols, rows));
    let mut truncated = 0;
    for k in 0..s.len() {
        if s[k] <= floor || s[k] == 0.0 {
            truncated += 1;
            continue;
        }
        let w = 1.0 / s[k];
        for i in 0..cols {
            let vi = v[(i, k)];
            for j in 0..rows {
                out[(i, j)] += vi * u[(j, k)].conj() * w;
            }
        }
    }
    Ok((out, truncated))
}

/// Eigendecomposition of a general complex square matrix: columns of
/// `vectors` are right eigenvectors matching `values`.
pub(crate) struct EigPairs {
    pub values: Vec<C64>,
    pub vectors: CMat,
}

pub(crate) fn eig(a: &CMat) -> Result<EigPairs> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "eig: matrix {}x{} not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let dec = to_faer(a)
        .eigen()
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    let values = (0..n).map(|i| dec.S()[i]).collect();
    Ok(EigPairs {
        values,
        vectors: from_faer(dec.U()),
    })
}

/// Minimum-cost one-to-one assignment on a square cost matrix (Hungarian
/// algorithm with potentials, O(n^3)). Returns `assign` with `assign[row] =
/// column`.
pub(crate) fn min_cost_assignment(cost: &Array2<f64>) -> Result<Vec<usize>> {
    let n = cost.nrows();
    if cost.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "assignment: cost matrix {}x{} not square",
            cost.nrows(),
            cost.ncols()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // 1-based arrays; p[j] is the row matched to column j, column 0 is a stub.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    Ok(assign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::adjoint;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_cmat(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMat {
        CMat::from_shape_fn((rows, cols), |_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
    }

    fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn thin_svd_reconstructs() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let a = random_cmat(7, 3, &mut rng);
        let ThinSvd { u, s, v } = thin_svd(&a).unwrap();
        // A = U diag(s) V^H
        let mut us = u.clone();
        for (k, &sk) in s.iter().enumerate() {
            us.column_mut(k).mapv_inplace(|z| z * sk);
        }
        let rec = us.dot(&adjoint(&v));
        assert!(max_abs_diff(&rec, &a) < 1e-12);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn pinv_solves_least_squares() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let a = random_cmat(8, 3, &mut rng);
        let (ainv, truncated) = pinv(&a, 1e-12).unwrap();
        assert_eq!(truncated, 0);
        // A+ A = I for full column rank.
        let prod = ainv.dot(&a);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn pinv_hermitian_matches_inverse() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let a = random_cmat(6, 3, &mut rng);
        let g = adjoint(&a).dot(&a);
        let HermitianPinv { inv, eigs, truncated } = pinv_hermitian(&g, 1e-12).unwrap();
        assert_eq!(truncated, 0);
        assert!(eigs.iter().all(|&l| l > 0.0));
        let prod = inv.dot(&g);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn pinv_hermitian_truncates_rank_deficiency() {
        // Rank-1 Gramian from a single column repeated.
        let a = array![
            [C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(2.0, 0.0), C64::new(2.0, 0.0)]
        ];
        let g = adjoint(&a).dot(&a);
        let res = pinv_hermitian(&g, 1e-12).unwrap();
        assert_eq!(res.truncated, 1);
    }

    #[test]
    fn eig_diagonalizes() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let a = random_cmat(4, 4, &mut rng);
        let EigPairs { values, vectors } = eig(&a).unwrap();
        for k in 0..4 {
            let v = vectors.column(k);
            let av = a.dot(&v);
            for i in 0..4 {
                assert!((av[i] - values[k] * v[i]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn eig_one_by_one() {
        let a = array![[C64::new(0.3, -0.7)]];
        let EigPairs { values, .. } = eig(&a).unwrap();
        assert!((values[0] - C64::new(0.3, -0.7)).norm() < 1e-14);
    }

    #[test]
    fn assignment_identity_and_swap() {
        let cost = array![[0.0, 1.0], [1.0, 0.0]];
        assert_eq!(min_cost_assignment(&cost).unwrap(), vec![0, 1]);
        let cost = array![[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(min_cost_assignment(&cost).unwrap(), vec![1, 0]);
    }

    #[test]
    fn assignment_beats_greedy() {
        // Greedy row-wise argmin would send both rows to column 0.
        let cost = array![[0.6, 15.0], [0.1, 14.0]];
        let assign = min_cost_assignment(&cost).unwrap();
        assert_eq!(assign, vec![0, 1].iter().cloned().collect::<Vec<_>>().as_slice(), );
        // total = 0.6 + 14.0 = 14.6 < 15.0 + 0.1
    }

    #[test]
    fn assignment_matches_exhaustive_small() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..50 {
            let n = 4;
            let cost = Array2::from_shape_fn((n, n), |_| {
                let x: f64 = StandardNormal.sample(&mut rng);
                x.abs()
            });
            let assign = min_cost_assignment(&cost).unwrap();
            let total: f64 = (0..n).map(|i| cost[(i, assign[i])]).sum();
            let best = exhaustive_best(&cost);
            assert!(total <= best + 1e-12, "hungarian {total} vs best {best}");
        }
    }

    fn exhaustive_best(cost: &Array2<f64>) -> f64 {
        let n = cost.nrows();
        let mut cols: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut cols, 0, cost, &mut best);
        best
    }

    fn permute(cols: &mut Vec<usize>, k: usize, cost: &Array2<f64>, best: &mut f64) {
        let n = cols.len();
        if k == n {
            let total: f64 = (0..n).map(|i| cost[(i, cols[i])]).sum();
            if total < *best {
                *best = total;
            }
            return;
        }
        for i in k..n {
            cols.swap(k, i);
            permute(cols, k + 1, cost, best);
            cols.swap(k, i);
        }
    }
}
