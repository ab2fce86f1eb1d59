//! Two-stage (nested) CP estimation pipeline and the single-stage baseline.
//!
//! The nested pipeline:
//!
//! 1. **Outer decomposition** of the `(6MN, 6, L)` snapshot tensor into
//!    `(A_tqr, Q_r, S^T)`: composite steering factor, receive spatial
//!    responses, sources.
//! 2. **Rearrangement**: the summed columns of the estimated `A_tqr` are the
//!    row-major vectorization of `(A_t ⊙ Q_t) A_r^T`, so reshaping that
//!    vector yields the `(N, 6, M)` tensor `Σ_k a_rk ∘ q_tk ∘ a_tk` — no
//!    per-column rank-1 reconstruction needed.
//! 3. **Inner decomposition** of the small tensor into `(A_r, Q_t, A_t)`.
//! 4. **Extraction**: elevations from the rotation invariance of each
//!    steering matrix (eigenvalues of a shift operator), directions from the
//!    Poynting vector of each spatial response, polarization states from a
//!    least-squares fit against the angular response matrix.
//! 5. **Pairing**: transmit parameters are automatically aligned by the
//!    inner stage; receive responses (outer stage) are matched to receive
//!    steering columns (inner stage) by optimal assignment on elevation.
//!
//! The baseline method decomposes the `(6M, 6N, L)` arrangement in one stage
//! with composite factors `(A_t ⊙ Q_t, A_r ⊙ Q_r, S^T)` and splits each
//! composite column into steering and response parts via the dominant
//! singular pair, then runs the same extraction.

use ndarray::{s, Array2, ArrayView1};

use crate::cp::{cp_als, AlsOptions, AlsReport};
use crate::error::Error;
use crate::linalg::{eig, min_cost_assignment, pinv_hermitian, thin_svd, EigPairs, HermitianPinv, ThinSvd};
use crate::model::{spatial_angular_matrix, SnapshotData};
use crate::seed::derive_seed;
use crate::tensor::{adjoint, ivec_row, CMat, CTensor3, CVec, C64};
use crate::Result;

/// Relative singular-value floor shared with the ALS pseudo-inverses.
const SV_FLOOR: f64 = 1e-12;
/// Minimum electric/magnetic block norm for Poynting direction finding.
const RESPONSE_FLOOR: f64 = 1e-9;
/// Sub-seed stream tags for the outer and inner decomposition stages.
const OUTER_STREAM: u64 = 1;
const INNER_STREAM: u64 = 2;

/// Outer-stage factors of the snapshot tensor.
#[derive(Debug, Clone)]
pub struct OuterFactors {
    /// Composite factor estimate, `6MN x K`.
    pub a_tqr: CMat,
    /// Receive spatial response estimate, `6 x K`.
    pub q_r: CMat,
    /// Source estimate, `K x L`.
    pub s: CMat,
    pub report: AlsReport,
}

/// Inner-stage factors of the rearranged tensor.
#[derive(Debug, Clone)]
pub struct InnerFactors {
    /// Receive steering estimate, `N x K`.
    pub a_r: CMat,
    /// Transmit spatial response estimate, `6 x K`.
    pub q_t: CMat,
    /// Transmit steering estimate, `M x K`.
    pub a_t: CMat,
    pub report: AlsReport,
}

/// One recovered target: all eight parameters (radians) plus diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct TargetEstimate {
    pub theta_t: f64,
    pub phi_t: f64,
    pub gamma_t: f64,
    pub eta_t: f64,
    pub theta_r: f64,
    pub phi_r: f64,
    pub gamma_r: f64,
    pub eta_r: f64,
    /// Outer-stage column this target's receive responses came from.
    pub outer_index: usize,
    /// Rotation eigenvalue behind `theta_t`.
    pub lambda_t: C64,
    /// Rotation eigenvalue behind `theta_r`.
    pub lambda_r: C64,
}

impl TargetEstimate {
    /// Parameters in the fixed order
    /// `[theta_t, phi_t, gamma_t, eta_t, theta_r, phi_r, gamma_r, eta_r]`.
    pub fn params_array(&self) -> [f64; 8] {
        [
            self.theta_t,
            self.phi_t,
            self.gamma_t,
            self.eta_t,
            self.theta_r,
            self.phi_r,
            self.gamma_r,
            self.eta_r,
        ]
    }
}

/// Direction and polarization recovered from one spatial response column.
#[derive(Debug, Clone, Copy)]
pub struct ResponseParams {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub eta: f64,
}

/// Elevation recovered from one steering-matrix column, with the rotation
/// eigenvalue it came from.
#[derive(Debug, Clone, Copy)]
pub struct ElevationEstimate {
    pub theta: f64,
    pub eigenvalue: C64,
}

/// One bound of the identifiability verdict.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub description: String,
    pub satisfied: bool,
}

/// Verdict of [`check_identifiability`] with every bound listed.
#[derive(Debug, Clone)]
pub struct IdentifiabilityReport {
    pub passed: bool,
    /// `min(M - 1, N - 1)`, the rotation-invariance ceiling on K.
    pub max_targets: usize,
    pub bounds: Vec<BoundCheck>,
}

impl IdentifiabilityReport {
    /// Human-readable list of the failed bounds.
    pub fn failures(&self) -> String {
        self.bounds
            .iter()
            .filter(|b| !b.satisfied)
            .map(|b| b.description.as_str())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Checks the uniqueness bounds of both decomposition stages under generic
/// k-rank assumptions plus the rotation-invariance ceiling `K <= min(M-1,
/// N-1)`. Rank 1 passes the Kruskal-style sums by the essential uniqueness
/// of nonzero rank-1 decompositions.
pub fn check_identifiability(m: usize, n: usize, k: usize, l: usize) -> IdentifiabilityReport {
    let kappa = |d: usize| d.min(k);
    let outer_sum = kappa(6 * m * n) + kappa(6) + kappa(l);
    let inner_sum = kappa(m) + kappa(6) + kappa(n);
    let bounds = vec![
        BoundCheck {
            description: format!("K >= 1 (K = {k})"),
            satisfied: k >= 1,
        },
        BoundCheck {
            description: format!(
                "outer uniqueness 2K+2 <= k(A_tqr)+k(Q_r)+k(S): {} <= {outer_sum}",
                2 * k + 2
            ),
            satisfied: k == 1 || 2 * k + 2 <= outer_sum,
        },
        BoundCheck {
            description: format!(
                "inner uniqueness 2K+2 <= k(A_t)+k(Q_t)+k(A_r): {} <= {inner_sum}",
                2 * k + 2
            ),
            satisfied: k == 1 || 2 * k + 2 <= inner_sum,
        },
        BoundCheck {
            description: format!("K <= M-1: {k} <= {}", m.saturating_sub(1)),
            satisfied: k <= m.saturating_sub(1),
        },
        BoundCheck {
            description: format!("K <= N-1: {k} <= {}", n.saturating_sub(1)),
            satisfied: k <= n.saturating_sub(1),
        },
    ];
    IdentifiabilityReport {
        passed: bounds.iter().all(|b| b.satisfied),
        max_targets: m.saturating_sub(1).min(n.saturating_sub(1)),
        bounds,
    }
}

fn gate_identifiability(m: usize, n: usize, k: usize, l: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("target count K must be >= 1".into()));
    }
    let report = check_identifiability(m, n, k, l);
    if report.passed {
        Ok(())
    } else {
        Err(Error::Identifiability(report.failures()))
    }
}

/// Outer CP decomposition of the snapshot tensor with mode assignment
/// `(A_tqr, Q_r, S^T)`. The rank comes from `k`; `opts.rank` is ignored.
pub fn outer_decompose(data: &SnapshotData, k: usize, opts: &AlsOptions) -> Result<OuterFactors> {
    gate_identifiability(data.tx_sensors(), data.rx_sensors(), k, data.snapshots())?;
    let mut als = *opts;
    als.rank = k;
    let (factors, report) = cp_als(data.tensor(), &als)?;
    Ok(OuterFactors {
        a_tqr: factors.f1,
        q_r: factors.f2,
        s: factors.f3.t().to_owned(),
        report,
    })
}

/// Rearranges the estimated composite factor into the inner `(N, 6, M)`
/// tensor: the column sum `v = Σ_k A_tqr[:, k]` is read through the
/// Kronecker index map `v[(m*6 + p)*N + n] -> Y1[n, p, m]`, which makes
/// `Y1 = Σ_k a_rk ∘ q_tk ∘ a_tk` exactly when `A_tqr = A_t ⊙ Q_t ⊙ A_r`.
pub fn rearrange_to_inner(a_tqr_hat: &CMat, m: usize, n: usize) -> Result<CTensor3> {
    if a_tqr_hat.nrows() != 6 * m * n {
        return Err(Error::DimensionMismatch(format!(
            "composite factor has {} rows, expected 6*{m}*{n} = {}",
            a_tqr_hat.nrows(),
            6 * m * n
        )));
    }
    let k = a_tqr_hat.ncols();
    let mut v = CVec::zeros(6 * m * n);
    for col in 0..k {
        for (row, z) in a_tqr_hat.column(col).iter().enumerate() {
            v[row] += *z;
        }
    }
    let mut y1 = CTensor3::zeros((n, 6, m));
    for mt in 0..m {
        for p in 0..6 {
            for nr in 0..n {
                y1[(nr, p, mt)] = v[(mt * 6 + p) * n + nr];
            }
        }
    }
    Ok(y1)
}

/// Inner CP decomposition of the rearranged tensor with mode assignment
/// `(A_r, Q_t, A_t)`. The rank comes from `k`; `opts.rank` is ignored.
pub fn inner_decompose(y1: &CTensor3, k: usize, opts: &AlsOptions) -> Result<InnerFactors> {
    if k == 0 {
        return Err(Error::InvalidArgument("target count K must be >= 1".into()));
    }
    let (n, six, m) = y1.dim();
    if six != 6 {
        return Err(Error::DimensionMismatch(format!(
            "inner tensor second mode is {six}, expected 6"
        )));
    }
    let kappa = |d: usize| d.min(k);
    if k > 1 && 2 * k + 2 > kappa(m) + kappa(6) + kappa(n) {
        return Err(Error::Identifiability(format!(
            "inner uniqueness 2K+2 <= k(A_t)+k(Q_t)+k(A_r) fails: {} > {}",
            2 * k + 2,
            kappa(m) + kappa(6) + kappa(n)
        )));
    }
    let mut als = *opts;
    als.rank = k;
    let (factors, report) = cp_als(y1, &als)?;
    Ok(InnerFactors {
        a_r: factors.f1,
        q_t: factors.f2,
        a_t: factors.f3,
        report,
    })
}

/// Recovers the elevation behind each column of a ULA steering-matrix
/// estimate through the shift (rotation) invariance of the array.
///
/// Solves `J1 A Phi = J2 A` in least squares, eigendecomposes `Phi` and maps
/// each eigenvalue `lambda = e^{-j pi sin(theta)}` to
/// `theta = arcsin(-arg(lambda) / pi)`. Eigenvectors of an exactly recovered
/// steering matrix are scaled standard basis vectors, so eigenvalues are
/// matched to columns by an optimal assignment on eigenvector magnitudes;
/// results come back in column order.
pub fn elevation_from_steering(a_hat: &CMat) -> Result<Vec<ElevationEstimate>> {
    let p = a_hat.nrows();
    let k = a_hat.ncols();
    if p < 2 {
        return Err(Error::InvalidArgument(format!(
            "steering matrix needs >= 2 rows, got {p}"
        )));
    }
    if k > p - 1 {
        return Err(Error::InvalidArgument(format!(
            "rank {k} exceeds rotation-invariance limit {} for {p} sensors",
            p - 1
        )));
    }
    let a1 = a_hat.slice(s![..p - 1, ..]).to_owned();
    let a2 = a_hat.slice(s![1.., ..]).to_owned();
    let g = adjoint(&a1).dot(&a1);
    let HermitianPinv { inv, truncated, .. } = pinv_hermitian(&g, SV_FLOOR)?;
    if truncated > 0 {
        return Err(Error::Degenerate(
            "shifted steering submatrix is rank-deficient".into(),
        ));
    }
    let phi = inv.dot(&adjoint(&a1).dot(&a2));
    let EigPairs { values, vectors } = eig(&phi)?;

    // cost[column j][eigenpair q] = -|v_q[j]| / ||v_q||
    let mut cost = Array2::<f64>::zeros((k, k));
    for q in 0..k {
        let col = vectors.column(q);
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let norm = norm.max(f64::MIN_POSITIVE);
        for j in 0..k {
            cost[(j, q)] = -col[j].norm() / norm;
        }
    }
    let assign = min_cost_assignment(&cost)?;

    let out = (0..k)
        .map(|j| {
            let lambda = values[assign[j]];
            let ratio = -lambda.arg() / std::f64::consts::PI;
            if !(-1.0..=1.0).contains(&ratio) {
                log::warn!("rotation eigenvalue phase outside the arcsin domain; clamping");
            }
            ElevationEstimate {
                theta: ratio.clamp(-1.0, 1.0).asin(),
                eigenvalue: lambda,
            }
        })
        .collect();
    Ok(out)
}

/// Direction finding from one spatial response: the normalized Poynting
/// vector `(e / ‖e‖) x (conj(h) / ‖h‖)` equals
/// `[sin(theta)cos(phi), sin(theta)sin(phi), cos(theta)]`, so
/// `theta = arcsin(sqrt(u^2 + v^2))` and `phi = atan2(v, u)` wrapped to
/// `[0, 2pi)`. Exactly invariant under `q -> c q` for any nonzero complex
/// `c`. At zenith (`u = v = 0`) the azimuth is reported as 0.
pub fn direction_from_response(q: ArrayView1<'_, C64>) -> Result<(f64, f64)> {
    if q.len() != 6 {
        return Err(Error::DimensionMismatch(format!(
            "spatial response has {} entries, expected 6",
            q.len()
        )));
    }
    let e = [q[0], q[1], q[2]];
    let h = [q[3], q[4], q[5]];
    let en = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let hn = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if en < RESPONSE_FLOOR || hn < RESPONSE_FLOOR {
        return Err(Error::Degenerate(
            "electric or magnetic block of the response is near zero".into(),
        ));
    }
    let hc = [h[0].conj(), h[1].conj(), h[2].conj()];
    // cross product of the normalized blocks; the imaginary residual is
    // estimation noise and is dropped.
    let scale = 1.0 / (en * hn);
    let u = ((e[1] * hc[2] - e[2] * hc[1]) * scale).re;
    let v = ((e[2] * hc[0] - e[0] * hc[2]) * scale).re;
    let theta = (u * u + v * v).sqrt().min(1.0).asin();
    let phi = if u == 0.0 && v == 0.0 {
        0.0
    } else {
        v.atan2(u).rem_euclid(std::f64::consts::TAU)
    };
    Ok((theta, phi))
}

/// Polarization recovery from one spatial response at a known direction:
/// `g = pinv(F(theta, phi)) q`, then `gamma = arctan(|g1| / |g2|)` and
/// `eta = arg(g1 / g2)`. Scale-invariant in `q`; when `|g2|` vanishes,
/// `gamma` saturates at the `pi/2` limit (outside the open domain) and
/// `eta` is reported as 0.
pub fn polarization_from_response(
    q: ArrayView1<'_, C64>,
    theta: f64,
    phi: f64,
) -> Result<(f64, f64)> {
    if q.len() != 6 {
        return Err(Error::DimensionMismatch(format!(
            "spatial response has {} entries, expected 6",
            q.len()
        )));
    }
    let f = spatial_angular_matrix(theta, phi);
    // Normal equations on the real 6x2 matrix: G = F^H F is 2x2.
    let fh_q = adjoint(&f).dot(&q);
    let g_mat = adjoint(&f).dot(&f);
    let (a, b, c, d) = (g_mat[(0, 0)], g_mat[(0, 1)], g_mat[(1, 0)], g_mat[(1, 1)]);
    let det = a * d - b * c;
    if det.norm() < 1e-12 {
        return Err(Error::Degenerate(
            "angular response matrix lost column rank".into(),
        ));
    }
    let g1 = (d * fh_q[0] - b * fh_q[1]) / det;
    let g2 = (a * fh_q[1] - c * fh_q[0]) / det;
    let scale = g1.norm().max(g2.norm());
    if g2.norm() < 1e-12 * scale {
        log::warn!("polarization ratio denominator is ~0; reporting the gamma = pi/2 limit");
    }
    let gamma = g1.norm().atan2(g2.norm());
    // the phase difference is unobservable when either component vanishes
    let eta = if g1.norm() <= 1e-12 * scale || g2.norm() <= 1e-12 * scale {
        0.0
    } else {
        (g1 * g2.conj()).arg()
    };
    Ok((gamma, wrap_pm_pi(eta)))
}

fn wrap_pm_pi(x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let y = (x + pi).rem_euclid(std::f64::consts::TAU) - pi;
    if y >= pi {
        -pi
    } else {
        y
    }
}

/// How receive elevations are matched to receive response tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingStrategy {
    /// One-to-one assignment minimizing the total elevation mismatch.
    Optimal,
    /// Row-wise nearest-elevation matching. Kept for compatibility only: it
    /// can assign the same steering column to two response tuples.
    GreedyRowArgmin,
}

/// One paired receive 4-tuple: elevation from the steering (inner) stage,
/// the rest from the matched response (outer) column.
#[derive(Debug, Clone, Copy)]
pub struct PairedReceive {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub eta: f64,
    /// Index of the outer-stage column the tuple came from.
    pub outer_index: usize,
}

/// Pairs the steering-derived elevations with the response-derived tuples by
/// optimal assignment; output order follows the steering (inner-stage)
/// columns so transmit and receive parameters stay jointly paired.
pub fn pair_parameters(
    theta_from_ar: &[f64],
    rx_from_qr: &[ResponseParams],
) -> Result<Vec<PairedReceive>> {
    pair_parameters_with(theta_from_ar, rx_from_qr, PairingStrategy::Optimal)
}

/// [`pair_parameters`] with an explicit strategy. The greedy strategy
/// reproduces plain row-wise argmin matching (duplicates possible) and emits
/// results in response-tuple order instead.
pub fn pair_parameters_with(
    theta_from_ar: &[f64],
    rx_from_qr: &[ResponseParams],
    strategy: PairingStrategy,
) -> Result<Vec<PairedReceive>> {
    let k = theta_from_ar.len();
    if rx_from_qr.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "{k} steering elevations vs {} response tuples",
            rx_from_qr.len()
        )));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    match strategy {
        PairingStrategy::Optimal => {
            // cost[outer i][inner j] = |theta~_i - theta^_j|
            let cost = Array2::from_shape_fn((k, k), |(i, j)| {
                (rx_from_qr[i].theta - theta_from_ar[j]).abs()
            });
            let outer_to_inner = min_cost_assignment(&cost)?;
            let mut inner_to_outer = vec![0usize; k];
            for (outer, inner) in outer_to_inner.iter().enumerate() {
                inner_to_outer[*inner] = outer;
            }
            Ok((0..k)
                .map(|j| {
                    let i = inner_to_outer[j];
                    PairedReceive {
                        theta: theta_from_ar[j],
                        phi: rx_from_qr[i].phi,
                        gamma: rx_from_qr[i].gamma,
                        eta: rx_from_qr[i].eta,
                        outer_index: i,
                    }
                })
                .collect())
        }
        PairingStrategy::GreedyRowArgmin => Ok(rx_from_qr
            .iter()
            .enumerate()
            .map(|(i, rx)| {
                let j = (0..k)
                    .min_by(|&a, &b| {
                        let da = (rx.theta - theta_from_ar[a]).abs();
                        let db = (rx.theta - theta_from_ar[b]).abs();
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                PairedReceive {
                    theta: theta_from_ar[j],
                    phi: rx.phi,
                    gamma: rx.gamma,
                    eta: rx.eta,
                    outer_index: i,
                }
            })
            .collect()),
    }
}

/// Predicted operation count of a full run: `sweeps * (6MN + M + N + L + 12)
/// * K^2`, the per-sweep cost of the outer and inner updates combined.
pub fn complexity_estimate(m: usize, n: usize, l: usize, k: usize, sweeps: usize) -> u64 {
    (sweeps as u64) * ((6 * m * n + m + n + l + 12) as u64) * (k as u64) * (k as u64)
}

fn response_params(q: ArrayView1<'_, C64>) -> Result<ResponseParams> {
    let (theta, phi) = direction_from_response(q)?;
    let (gamma, eta) = polarization_from_response(q, theta, phi)?;
    Ok(ResponseParams {
        theta,
        phi,
        gamma,
        eta,
    })
}

fn stage<T>(r: Result<T>, name: &'static str) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Nested-pipeline result with the decomposition diagnostics attached.
#[derive(Debug, Clone)]
pub struct NestedEstimate {
    pub targets: Vec<TargetEstimate>,
    pub outer_report: AlsReport,
    pub inner_report: AlsReport,
}

/// Runs the full nested pipeline and returns `K` jointly paired targets.
///
/// Transmit tuples take their elevation from the transmit steering factor
/// and the rest from the transmit responses, both inner-stage columns
/// (automatically paired). Receive tuples are assembled by
/// [`pair_parameters`]. Azimuths land in `[0, 2pi)`, phase differences in
/// `[-pi, pi)`.
pub fn estimate_nested(
    data: &SnapshotData,
    k: usize,
    opts: &AlsOptions,
) -> Result<Vec<TargetEstimate>> {
    estimate_nested_with_report(data, k, opts).map(|e| e.targets)
}

/// [`estimate_nested`] keeping the per-stage ALS reports (used by the
/// benchmark harness to account for non-converged trials).
pub fn estimate_nested_with_report(
    data: &SnapshotData,
    k: usize,
    opts: &AlsOptions,
) -> Result<NestedEstimate> {
    let (m, n) = (data.tx_sensors(), data.rx_sensors());
    gate_identifiability(m, n, k, data.snapshots())?;

    let mut outer_opts = *opts;
    outer_opts.seed = derive_seed(opts.seed, &[OUTER_STREAM]);
    let outer = stage(outer_decompose(data, k, &outer_opts), "outer decomposition")?;

    let rx_tuples: Vec<ResponseParams> = (0..k)
        .map(|col| stage(response_params(outer.q_r.column(col)), "receive extraction"))
        .collect::<Result<_>>()?;

    let y1 = stage(rearrange_to_inner(&outer.a_tqr, m, n), "rearrangement")?;
    let mut inner_opts = *opts;
    inner_opts.seed = derive_seed(opts.seed, &[INNER_STREAM]);
    let inner = stage(inner_decompose(&y1, k, &inner_opts), "inner decomposition")?;

    let theta_t = stage(elevation_from_steering(&inner.a_t), "transmit elevation")?;
    let theta_r = stage(elevation_from_steering(&inner.a_r), "receive elevation")?;
    let tx_tuples: Vec<ResponseParams> = (0..k)
        .map(|col| stage(response_params(inner.q_t.column(col)), "transmit extraction"))
        .collect::<Result<_>>()?;

    let rx_thetas: Vec<f64> = theta_r.iter().map(|e| e.theta).collect();
    let paired = stage(pair_parameters(&rx_thetas, &rx_tuples), "pairing")?;

    let targets = (0..k)
        .map(|j| TargetEstimate {
            theta_t: theta_t[j].theta,
            phi_t: tx_tuples[j].phi,
            gamma_t: tx_tuples[j].gamma,
            eta_t: tx_tuples[j].eta,
            theta_r: paired[j].theta,
            phi_r: paired[j].phi,
            gamma_r: paired[j].gamma,
            eta_r: paired[j].eta,
            outer_index: paired[j].outer_index,
            lambda_t: theta_t[j].eigenvalue,
            lambda_r: theta_r[j].eigenvalue,
        })
        .collect();
    Ok(NestedEstimate {
        targets,
        outer_report: outer.report,
        inner_report: inner.report,
    })
}

/// Splits a composite `steering ⊗ response` column into its rank-1 parts via
/// the dominant singular pair of its `rows x 6` row-major reshape.
fn split_composite_column(col: ArrayView1<'_, C64>, rows: usize) -> Result<(CVec, CVec)> {
    let x = ivec_row(&col.to_owned(), rows, 6)?;
    let ThinSvd { u, s, v } = thin_svd(&x)?;
    let sigma = s[0];
    let a = u.column(0).to_owned();
    let q = v.column(0).mapv(|z| z.conj() * sigma);
    Ok((a, q))
}

/// Single-stage baseline: CP decomposition of the `(6M, 6N, L)` arrangement
/// with composite factors `(A_t ⊙ Q_t, A_r ⊙ Q_r, S^T)`, followed by a
/// rank-1 reconstruction of each composite column (dominant singular pair)
/// and the same extraction chain. Transmit/receive pairing is inherent in
/// the shared column index.
pub fn estimate_baseline_parafac(
    data: &SnapshotData,
    k: usize,
    opts: &AlsOptions,
) -> Result<Vec<TargetEstimate>> {
    let (m, n) = (data.tx_sensors(), data.rx_sensors());
    gate_identifiability(m, n, k, data.snapshots())?;

    let t = data.tensor();
    let l = data.snapshots();
    let mut z = CTensor3::zeros((6 * m, 6 * n, l));
    for mt in 0..m {
        for pt in 0..6 {
            let row = mt * 6 + pt;
            for nr in 0..n {
                for pr in 0..6 {
                    for snap in 0..l {
                        z[(row, nr * 6 + pr, snap)] = t[(row * n + nr, pr, snap)];
                    }
                }
            }
        }
    }

    let mut als = *opts;
    als.rank = k;
    als.seed = derive_seed(opts.seed, &[OUTER_STREAM]);
    let (factors, _report) = stage(cp_als(&z, &als), "baseline decomposition")?;

    let mut a_t = CMat::zeros((m, k));
    let mut q_t = CMat::zeros((6, k));
    let mut a_r = CMat::zeros((n, k));
    let mut q_r = CMat::zeros((6, k));
    for col in 0..k {
        let (a, q) = stage(
            split_composite_column(factors.f1.column(col), m),
            "transmit reconstruction",
        )?;
        a_t.column_mut(col).assign(&a);
        q_t.column_mut(col).assign(&q);
        let (a, q) = stage(
            split_composite_column(factors.f2.column(col), n),
            "receive reconstruction",
        )?;
        a_r.column_mut(col).assign(&a);
        q_r.column_mut(col).assign(&q);
    }

    let theta_t = stage(elevation_from_steering(&a_t), "transmit elevation")?;
    let theta_r = stage(elevation_from_steering(&a_r), "receive elevation")?;

    (0..k)
        .map(|col| {
            let tx = stage(response_params(q_t.column(col)), "transmit extraction")?;
            let rx = stage(response_params(q_r.column(col)), "receive extraction")?;
            Ok(TargetEstimate {
                theta_t: theta_t[col].theta,
                phi_t: tx.phi,
                gamma_t: tx.gamma,
                eta_t: tx.eta,
                theta_r: theta_r[col].theta,
                phi_r: rx.phi,
                gamma_r: rx.gamma,
                eta_r: rx.eta,
                outer_index: col,
                lambda_t: theta_t[col].eigenvalue,
                lambda_r: theta_r[col].eigenvalue,
            })
        })
        .collect()
}
