//! Dense complex matrix / 3-way tensor kernels with pinned index conventions.
//!
//! Everything downstream (synthesis, ALS, the nested rearrangement) depends on
//! the exact index conventions fixed here, so they are spelled out once:
//!
//! - Storage is ndarray's standard (row-major, C) layout: the last index
//!   varies fastest. Formulas below use 0-based indices.
//! - `kron(a, b)[i * J + j] = a[i] * b[j]` for `a` of length `I`, `b` of
//!   length `J`.
//! - `khatri_rao(A, B)` is the column-wise Kronecker product: column `k`
//!   equals `kron(A[:, k], B[:, k])`.
//! - CP reconstruction: `T[i1, i2, i3] = Σ_k F1[i1, k] F2[i2, k] F3[i3, k]`.
//! - Mode-`n` unfolding follows the cyclic convention
//!
//!   ```text
//!   unfold_1(T)[i1, i3 * I2 + i2] = T[i1, i2, i3]
//!   unfold_2(T)[i2, i1 * I3 + i3] = T[i1, i2, i3]
//!   unfold_3(T)[i3, i2 * I1 + i1] = T[i1, i2, i3]
//!   ```
//!
//!   which makes `unfold_n(cp_reconstruct(F1, F2, F3)) = F_n * khatri_rao(F_b, F_a)^T`
//!   where `(a, b)` are the other two modes in cyclic order after `n`
//!   (mode 1: `(2, 3)`, mode 2: `(3, 1)`, mode 3: `(1, 2)`). This identity is
//!   enforced by tests rather than assumed.
//! - `vec_row(M)` concatenates the rows of `M`; `ivec_row` is its inverse,
//!   so `ivec_row(kron(a, b), I, J) = a * b^T`.

use ndarray::{Array1, Array2, Array3, Axis, Order};
use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Complex double-precision scalar used throughout.
pub type C64 = Complex64;
/// Dense complex vector.
pub type CVec = Array1<C64>;
/// Dense complex matrix (row-major).
pub type CMat = Array2<C64>;
/// Dense 3-way complex tensor (row-major).
pub type CTensor3 = Array3<C64>;

/// Returns an error if any entry of `m` is NaN or infinite.
pub fn ensure_finite_mat(m: &CMat, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} contains NaN/Inf entries")))
    }
}

/// Returns an error if any entry of `t` is NaN or infinite.
pub fn ensure_finite_tensor(t: &CTensor3, what: &str) -> Result<()> {
    if t.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} contains NaN/Inf entries")))
    }
}

/// Conjugate transpose.
pub fn adjoint(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

/// Frobenius norm of a matrix.
pub fn fro_norm_mat(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius norm of a 3-way tensor.
pub fn fro_norm_tensor(t: &CTensor3) -> f64 {
    t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product of two vectors: `out[i * J + j] = a[i] * b[j]`.
pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let (i_len, j_len) = (a.len(), b.len());
    let mut out = CVec::zeros(i_len * j_len);
    for i in 0..i_len {
        for j in 0..j_len {
            out[i * j_len + j] = a[i] * b[j];
        }
    }
    out
}

/// Column-wise Kronecker (Khatri-Rao) product of `A` (I x K) and `B` (J x K),
/// giving an `IJ x K` matrix whose column `k` is `kron(A[:, k], B[:, k])`.
pub fn khatri_rao(a: &CMat, b: &CMat) -> Result<CMat> {
    let k = a.ncols();
    if b.ncols() != k {
        return Err(Error::DimensionMismatch(format!(
            "khatri_rao: column counts differ ({} vs {})",
            k,
            b.ncols()
        )));
    }
    let (i_len, j_len) = (a.nrows(), b.nrows());
    let mut out = CMat::zeros((i_len * j_len, k));
    for col in 0..k {
        for i in 0..i_len {
            let ai = a[(i, col)];
            for j in 0..j_len {
                out[(i * j_len + j, col)] = ai * b[(j, col)];
            }
        }
    }
    Ok(out)
}

/// Sum of rank-1 terms: `T[i1, i2, i3] = Σ_k F1[i1, k] F2[i2, k] F3[i3, k]`.
pub fn cp_reconstruct(f1: &CMat, f2: &CMat, f3: &CMat) -> Result<CTensor3> {
    let k = f1.ncols();
    if f2.ncols() != k || f3.ncols() != k {
        return Err(Error::DimensionMismatch(format!(
            "cp_reconstruct: factor ranks differ ({}, {}, {})",
            k,
            f2.ncols(),
            f3.ncols()
        )));
    }
    let (i1, i2, i3) = (f1.nrows(), f2.nrows(), f3.nrows());
    let mut t = CTensor3::zeros((i1, i2, i3));
    let f2t = f2.t();
    // Frontal slice i3 is F1 * diag(F3[i3, :]) * F2^T.
    let mut scaled = CMat::zeros((i1, k));
    for s in 0..i3 {
        for col in 0..k {
            let w = f3[(s, col)];
            for row in 0..i1 {
                scaled[(row, col)] = f1[(row, col)] * w;
            }
        }
        let slice = scaled.dot(&f2t);
        t.index_axis_mut(Axis(2), s).assign(&slice);
    }
    Ok(t)
}

fn mode_axes(mode: usize) -> Result<[usize; 3]> {
    match mode {
        1 => Ok([0, 2, 1]),
        2 => Ok([1, 0, 2]),
        3 => Ok([2, 1, 0]),
        _ => Err(Error::InvalidArgument(format!(
            "unfold/fold mode must be 1, 2 or 3, got {mode}"
        ))),
    }
}

/// Mode-`n` unfolding under the cyclic convention in the module docs.
pub fn unfold(t: &CTensor3, mode: usize) -> Result<CMat> {
    let axes = mode_axes(mode)?;
    let permuted = t.view().permuted_axes(axes);
    let (r, c0, c1) = permuted.dim();
    let std = permuted.as_standard_layout().into_owned();
    let out = std
        .into_shape_with_order(((r, c0 * c1), Order::RowMajor))
        .expect("contiguous reshape");
    Ok(out)
}

/// Inverse of [`unfold`]: rebuilds the `(I1, I2, I3)` tensor from its mode-`n`
/// unfolding. `unfold(fold(M, n, dims), n) == M` holds exactly.
pub fn fold(m: &CMat, mode: usize, dims: (usize, usize, usize)) -> Result<CTensor3> {
    let axes = mode_axes(mode)?;
    let full = [dims.0, dims.1, dims.2];
    let perm_dims = (full[axes[0]], full[axes[1]], full[axes[2]]);
    if m.nrows() != perm_dims.0 || m.ncols() != perm_dims.1 * perm_dims.2 {
        return Err(Error::DimensionMismatch(format!(
            "fold: matrix {}x{} incompatible with mode {mode} of dims {dims:?}",
            m.nrows(),
            m.ncols()
        )));
    }
    let cube = m
        .to_owned()
        .into_shape_with_order((perm_dims, Order::RowMajor))
        .expect("contiguous reshape");
    // Each mode permutation is an involution, so applying it again inverts it.
    let back = cube.permuted_axes(axes);
    Ok(back.as_standard_layout().into_owned())
}

/// Row-major vectorization: concatenates the rows of `m`.
pub fn vec_row(m: &CMat) -> CVec {
    let len = m.len();
    m.to_owned()
        .into_shape_with_order((len, Order::RowMajor))
        .expect("contiguous reshape")
}

/// Inverse row-major vectorization: `out[i, j] = v[i * q + j]`.
pub fn ivec_row(v: &CVec, p: usize, q: usize) -> Result<CMat> {
    if v.len() != p * q {
        return Err(Error::DimensionMismatch(format!(
            "ivec_row: vector length {} != {p} * {q}",
            v.len()
        )));
    }
    Ok(v
        .to_owned()
        .into_shape_with_order(((p, q), Order::RowMajor))
        .expect("contiguous reshape"))
}

/// `unfold_n(T) * conj(khatri_rao(F_b, F_a))` — the matricized tensor times
/// Khatri-Rao product at the heart of each ALS update — computed through
/// zero-copy reshapes of the standard-layout tensor so each mode costs one
/// large matrix product.
pub(crate) fn mttkrp(t: &CTensor3, f1: &CMat, f2: &CMat, f3: &CMat, mode: usize) -> Result<CMat> {
    let (i1, i2, i3) = t.dim();
    let k = f1.ncols();
    if f2.ncols() != k || f3.ncols() != k {
        return Err(Error::DimensionMismatch(format!(
            "mttkrp: factor ranks differ ({}, {}, {})",
            k,
            f2.ncols(),
            f3.ncols()
        )));
    }
    let flat = t
        .view()
        .into_shape_with_order(((i1, i2 * i3), Order::RowMajor))
        .expect("standard-layout tensor");
    match mode {
        // P[i1, k] = Σ_{i2,i3} T[i1,i2,i3] conj(F2[i2,k]) conj(F3[i3,k]);
        // flat columns are (i2 * I3 + i3), matching khatri_rao(F2, F3) rows.
        1 => {
            let kr = khatri_rao(f2, f3)?.mapv(|z| z.conj());
            Ok(flat.dot(&kr))
        }
        // Contract over i1 first, then reduce the (i2, i3) pairs against F3.
        2 => {
            let c = flat.t().dot(&f1.mapv(|z| z.conj())); // (I2*I3, K)
            let mut p = CMat::zeros((i2, k));
            for r2 in 0..i2 {
                for s in 0..i3 {
                    let row = r2 * i3 + s;
                    for col in 0..k {
                        p[(r2, col)] += c[(row, col)] * f3[(s, col)].conj();
                    }
                }
            }
            Ok(p)
        }
        // Rows of the (I1*I2, I3) reshape are (i1 * I2 + i2), matching
        // khatri_rao(F1, F2) rows.
        3 => {
            let flat2 = t
                .view()
                .into_shape_with_order(((i1 * i2, i3), Order::RowMajor))
                .expect("standard-layout tensor");
            let kr = khatri_rao(f1, f2)?.mapv(|z| z.conj());
            Ok(flat2.t().dot(&kr))
        }
        _ => Err(Error::InvalidArgument(format!(
            "mttkrp mode must be 1, 2 or 3, got {mode}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_cmat(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMat {
        CMat::from_shape_fn((rows, cols), |_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(re, im) * 0.5
        })
    }

    fn max_abs_diff_mat(a: &CMat, b: &CMat) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn max_abs_diff_tensor(a: &CTensor3, b: &CTensor3) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    // Independent loop oracle for the column-wise Kronecker product.
    fn khatri_rao_oracle(a: &CMat, b: &CMat) -> CMat {
        let (i_len, j_len, k) = (a.nrows(), b.nrows(), a.ncols());
        let mut out = CMat::zeros((i_len * j_len, k));
        for col in 0..k {
            let mut row = 0;
            for i in 0..i_len {
                for j in 0..j_len {
                    out[(row, col)] = a[(i, col)] * b[(j, col)];
                    row += 1;
                }
            }
        }
        out
    }

    #[test]
    fn khatri_rao_single_column() {
        let a = array![[c(1.0, 0.0)], [c(2.0, 0.0)]];
        let b = array![[c(3.0, 0.0)], [c(4.0, 0.0)]];
        let kr = khatri_rao(&a, &b).unwrap();
        let expected = array![[c(3.0, 0.0)], [c(4.0, 0.0)], [c(6.0, 0.0)], [c(8.0, 0.0)]];
        assert_eq!(kr, expected);
    }

    #[test]
    fn khatri_rao_unit_columns() {
        let a = array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let b = array![[c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(-1.0, 0.0)]];
        let kr = khatri_rao(&a, &b).unwrap();
        let expected = array![
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0)]
        ];
        assert_eq!(kr, expected);
    }

    #[test]
    fn khatri_rao_matches_loop_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let a = random_cmat(3, 2, &mut rng);
        let b = random_cmat(4, 2, &mut rng);
        let kr = khatri_rao(&a, &b).unwrap();
        let oracle = khatri_rao_oracle(&a, &b);
        assert_eq!(kr, oracle);
    }

    #[test]
    fn khatri_rao_column_mismatch_is_error() {
        let a = CMat::zeros((2, 2));
        let b = CMat::zeros((3, 1));
        assert!(matches!(
            khatri_rao(&a, &b),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn khatri_rao_nesting_is_associative() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let a = random_cmat(3, 2, &mut rng);
        let b = random_cmat(4, 2, &mut rng);
        let d = random_cmat(5, 2, &mut rng);
        let left = khatri_rao(&khatri_rao(&a, &b).unwrap(), &d).unwrap();
        let right = khatri_rao(&a, &khatri_rao(&b, &d).unwrap()).unwrap();
        // Same products multiplied in a different order: ulp-scale tolerance.
        assert!(max_abs_diff_mat(&left, &right) < 1e-14);
    }

    #[test]
    fn cp_reconstruct_rank_one() {
        let f1 = array![[c(1.0, 0.0)], [c(2.0, 0.0)]];
        let f2 = array![[c(1.0, 0.0)], [c(-1.0, 0.0)]];
        let f3 = array![[c(1.0, 0.0)]];
        let t = cp_reconstruct(&f1, &f2, &f3).unwrap();
        assert_eq!(t.dim(), (2, 2, 1));
        assert_eq!(t[(0, 0, 0)], c(1.0, 0.0));
        assert_eq!(t[(0, 1, 0)], c(-1.0, 0.0));
        assert_eq!(t[(1, 0, 0)], c(2.0, 0.0));
        assert_eq!(t[(1, 1, 0)], c(-2.0, 0.0));
    }

    #[test]
    fn cp_reconstruct_zero_factors() {
        let f1 = CMat::zeros((2, 2));
        let f2 = CMat::zeros((3, 2));
        let f3 = CMat::zeros((4, 2));
        let t = cp_reconstruct(&f1, &f2, &f3).unwrap();
        assert!(t.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn cp_reconstruct_matches_triple_loop() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let f1 = random_cmat(2, 2, &mut rng);
        let f2 = random_cmat(2, 2, &mut rng);
        let f3 = random_cmat(2, 2, &mut rng);
        let t = cp_reconstruct(&f1, &f2, &f3).unwrap();
        for i1 in 0..2 {
            for i2 in 0..2 {
                for i3 in 0..2 {
                    let mut expected = c(0.0, 0.0);
                    for k in 0..2 {
                        expected += f1[(i1, k)] * f2[(i2, k)] * f3[(i3, k)];
                    }
                    assert!((t[(i1, i2, i3)] - expected).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn cp_reconstruct_rank_mismatch_is_error() {
        let f1 = CMat::zeros((2, 2));
        let f2 = CMat::zeros((2, 3));
        let f3 = CMat::zeros((2, 2));
        assert!(matches!(
            cp_reconstruct(&f1, &f2, &f3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn unfold_degenerate_third_mode() {
        let mut t = CTensor3::zeros((2, 2, 1));
        t[(0, 0, 0)] = c(1.0, 0.0);
        t[(0, 1, 0)] = c(2.0, 0.0);
        t[(1, 0, 0)] = c(3.0, 0.0);
        t[(1, 1, 0)] = c(4.0, 0.0);
        let u1 = unfold(&t, 1).unwrap();
        let expected = array![[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 0.0)]];
        assert_eq!(u1, expected);
    }

    #[test]
    fn unfold_matches_factor_identity() {
        // unfold_n(cp_reconstruct(F1,F2,F3)) == F_n * khatri_rao(F_b, F_a)^T
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let f1 = random_cmat(3, 2, &mut rng);
        let f2 = random_cmat(4, 2, &mut rng);
        let f3 = random_cmat(5, 2, &mut rng);
        let t = cp_reconstruct(&f1, &f2, &f3).unwrap();
        let norm = fro_norm_tensor(&t);

        let cases = [
            (1usize, &f1, khatri_rao(&f3, &f2).unwrap()),
            (2, &f2, khatri_rao(&f1, &f3).unwrap()),
            (3, &f3, khatri_rao(&f2, &f1).unwrap()),
        ];
        for (mode, fac, kr) in cases {
            let lhs = unfold(&t, mode).unwrap();
            let rhs = fac.dot(&kr.t());
            let err = lhs
                .iter()
                .zip(rhs.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err / norm < 1e-12, "mode {mode}: rel err {}", err / norm);
        }
    }

    #[test]
    fn fold_unfold_roundtrip_all_modes() {
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        let t = CTensor3::from_shape_fn((3, 4, 5), |_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c(re, im)
        });
        for mode in 1..=3 {
            let u = unfold(&t, mode).unwrap();
            let back = fold(&u, mode, (3, 4, 5)).unwrap();
            assert_eq!(back, t, "mode {mode} roundtrip not exact");
            let u2 = unfold(&back, mode).unwrap();
            assert_eq!(u2, u);
        }
    }

    #[test]
    fn fold_scalar_tensor() {
        let m = array![[c(5.0, 0.0)]];
        let t = fold(&m, 1, (1, 1, 1)).unwrap();
        assert_eq!(t[(0, 0, 0)], c(5.0, 0.0));
    }

    #[test]
    fn fold_wrong_dims_is_error() {
        let m = CMat::zeros((2, 3));
        assert!(matches!(
            fold(&m, 1, (2, 2, 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn unfold_invalid_mode_is_error() {
        let t = CTensor3::zeros((2, 2, 2));
        assert!(matches!(unfold(&t, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(unfold(&t, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn ivec_row_basic() {
        let v = CVec::from_vec((1..=6).map(|x| c(x as f64, 0.0)).collect());
        let m = ivec_row(&v, 2, 3).unwrap();
        let expected = array![
            [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            [c(4.0, 0.0), c(5.0, 0.0), c(6.0, 0.0)]
        ];
        assert_eq!(m, expected);
    }

    #[test]
    fn ivec_row_inverts_vec_row() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let m = random_cmat(3, 4, &mut rng);
        let v = vec_row(&m);
        let back = ivec_row(&v, 3, 4).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn ivec_row_length_mismatch_is_error() {
        let v = CVec::zeros(5);
        assert!(matches!(
            ivec_row(&v, 2, 3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn ivec_row_of_kron_is_outer_product() {
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let a = CVec::from_shape_fn(3, |_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c(re, im)
        });
        let b = CVec::from_shape_fn(4, |_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            c(re, im)
        });
        let m = ivec_row(&kron_vec(&a, &b), 3, 4).unwrap();
        // Loop oracle for a b^T.
        for i in 0..3 {
            for j in 0..4 {
                assert!((m[(i, j)] - a[i] * b[j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn ivec_row_is_linear_over_kron_sums() {
        // ivec_row(Σ_k kron(a_k, b_k), p, q) == Σ_k a_k b_k^T
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        let p = 3;
        let q = 5;
        let mut sum_vec = CVec::zeros(p * q);
        let mut sum_outer = CMat::zeros((p, q));
        for _ in 0..4 {
            let a = CVec::from_shape_fn(p, |_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                c(re, 0.3)
            });
            let b = CVec::from_shape_fn(q, |_| {
                let im: f64 = StandardNormal.sample(&mut rng);
                c(0.7, im)
            });
            sum_vec = sum_vec + kron_vec(&a, &b);
            for i in 0..p {
                for j in 0..q {
                    sum_outer[(i, j)] += a[i] * b[j];
                }
            }
        }
        let m = ivec_row(&sum_vec, p, q).unwrap();
        assert!(max_abs_diff_mat(&m, &sum_outer) < 1e-12);
    }

    #[test]
    fn mttkrp_matches_unfold_times_conj_khatri_rao() {
        let mut rng = ChaCha12Rng::seed_from_u64(53);
        let f1 = random_cmat(3, 2, &mut rng);
        let f2 = random_cmat(4, 2, &mut rng);
        let f3 = random_cmat(5, 2, &mut rng);
        let t = cp_reconstruct(&f1, &f2, &f3).unwrap();
        let cases = [
            (1usize, khatri_rao(&f3, &f2).unwrap()),
            (2, khatri_rao(&f1, &f3).unwrap()),
            (3, khatri_rao(&f2, &f1).unwrap()),
        ];
        for (mode, kr) in cases {
            let direct = unfold(&t, mode).unwrap().dot(&kr.mapv(|z| z.conj()));
            let fast = mttkrp(&t, &f1, &f2, &f3, mode).unwrap();
            assert!(
                max_abs_diff_mat(&direct, &fast) < 1e-12,
                "mode {mode} mismatch"
            );
        }
    }

    #[test]
    fn fold_unfold_property_random_shapes() {
        let mut rng = ChaCha12Rng::seed_from_u64(59);
        for &(a, b, d) in &[(1usize, 1usize, 1usize), (2, 3, 4), (6, 2, 7), (4, 4, 4)] {
            let t = CTensor3::from_shape_fn((a, b, d), |_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                c(re, im)
            });
            for mode in 1..=3 {
                let back = fold(&unfold(&t, mode).unwrap(), mode, (a, b, d)).unwrap();
                assert!(max_abs_diff_tensor(&back, &t) == 0.0);
            }
        }
    }
}
