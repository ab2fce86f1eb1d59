//! Rank-K CP decomposition of a 3-way complex tensor by trilinear
//! alternating least squares.
//!
//! Each sweep solves the three linear least-squares problems
//! `min ‖unfold_n(T) - F_n khatri_rao(F_b, F_a)^T‖_F` in mode order 1, 2, 3.
//! The normal-equation solve goes through the Hermitian Gramian
//! `G = (F_a^H F_a) ∘ (F_b^H F_b)`; when `G` looks ill-conditioned the update
//! falls back to a truncated-SVD pseudo-inverse of the explicit Khatri-Rao
//! matrix (singular values below `1e-12 * sigma_max` are dropped and the run
//! is flagged as regularized).
//!
//! Initialization is random complex Gaussian from the option seed; restarts
//! re-draw the init from per-restart sub-seeds and the best run by final
//! residual wins (ties to the lower restart index). Convergence is declared
//! when the tensor-normalized reconstruction residual changes by less than
//! `rel_tol` between sweeps.

use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::linalg::{pinv, pinv_hermitian, HermitianPinv};
use crate::seed::rng_for;
use crate::tensor::{
    adjoint, cp_reconstruct, ensure_finite_tensor, fro_norm_tensor, khatri_rao, mttkrp, unfold,
    CMat, CTensor3, C64,
};
use crate::Result;

/// Relative singular-value floor for the pseudo-inverse.
const SV_FLOOR: f64 = 1e-12;
/// Gramian eigenvalues are only trusted down to singular values around
/// `1e-6 * sigma_max` (squaring halves the usable precision); below that the
/// update switches to an SVD of the Khatri-Rao matrix itself.
const GRAM_TRUST: f64 = 1e-6;
/// Below this relative residual the cheap Gramian residual formula loses
/// digits to cancellation and the exact one is used instead.
const CHEAP_RESIDUAL_FLOOR: f64 = 1e-5;

/// Three factor matrices with a common column count (the rank).
#[derive(Debug, Clone)]
pub struct CpFactors {
    pub f1: CMat,
    pub f2: CMat,
    pub f3: CMat,
}

impl CpFactors {
    /// Validates equal ranks across factors and that no column is all-zero.
    pub fn new(f1: CMat, f2: CMat, f3: CMat) -> Result<Self> {
        let k = f1.ncols();
        if f2.ncols() != k || f3.ncols() != k {
            return Err(Error::DimensionMismatch(format!(
                "factor ranks differ: {}, {}, {}",
                k,
                f2.ncols(),
                f3.ncols()
            )));
        }
        for (name, f) in [("F1", &f1), ("F2", &f2), ("F3", &f3)] {
            for col in 0..k {
                if f.column(col).iter().all(|z| z.norm_sqr() == 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "{name} column {col} is all zero"
                    )));
                }
            }
        }
        Ok(Self { f1, f2, f3 })
    }

    pub fn rank(&self) -> usize {
        self.f1.ncols()
    }

    /// Mode dimensions `(I1, I2, I3)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.f1.nrows(), self.f2.nrows(), self.f3.nrows())
    }

    /// Dense reconstruction `Σ_k f1_k ∘ f2_k ∘ f3_k`.
    pub fn reconstruct(&self) -> CTensor3 {
        cp_reconstruct(&self.f1, &self.f2, &self.f3).expect("ranks validated")
    }
}

/// Loop-control options for [`cp_als`].
#[derive(Debug, Clone, Copy)]
pub struct AlsOptions {
    /// Decomposition rank K.
    pub rank: usize,
    /// Maximum number of full sweeps per restart.
    pub max_iters: usize,
    /// Stop when the normalized residual changes less than this per sweep.
    pub rel_tol: f64,
    /// Number of random restarts; best final residual wins.
    pub restarts: usize,
    /// Seed for the random initializations.
    pub seed: u64,
}

impl AlsOptions {
    /// Defaults: 500 sweeps, `rel_tol = 1e-8`, a single restart, seed 0.
    pub fn new(rank: usize) -> Self {
        Self {
            rank,
            max_iters: 500,
            rel_tol: 1e-8,
            restarts: 1,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank < 1 {
            return Err(Error::InvalidArgument("rank must be >= 1".into()));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidArgument("max_iters must be >= 1".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument("rel_tol must be > 0".into()));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidArgument("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome diagnostics of one [`cp_als`] call (for the winning restart).
#[derive(Debug, Clone)]
pub struct AlsReport {
    /// Full sweeps run.
    pub iterations: usize,
    /// Exact normalized reconstruction residual at exit.
    pub final_residual: f64,
    /// Whether the residual-change criterion fired before `max_iters`.
    pub converged: bool,
    /// Which restart won.
    pub restart_index: usize,
    /// Whether any update needed the truncated pseudo-inverse fallback.
    pub regularized: bool,
    /// Whether the generic Kruskal uniqueness bound fails for these
    /// dimensions and rank (recovery may be non-unique).
    pub uniqueness_risk: bool,
    /// Normalized residual after each sweep.
    pub residual_history: Vec<f64>,
}

/// Generic-position Kruskal uniqueness check: `2K + 2 <= Σ min(I_m, K)`.
///
/// Rank-1 decompositions of a nonzero tensor are always essentially unique,
/// so `k == 1` passes even though the sufficient bound is vacuous there.
pub fn generic_kruskal_ok(dims: (usize, usize, usize), k: usize) -> bool {
    if k == 1 {
        return true;
    }
    let kappa = |d: usize| d.min(k);
    2 * k + 2 <= kappa(dims.0) + kappa(dims.1) + kappa(dims.2)
}

/// Normalized reconstruction residual `‖T - [[F]]‖_F / ‖T‖_F`
/// (absolute Frobenius error when `T` is the zero tensor).
pub fn residual(t: &CTensor3, f: &CpFactors) -> Result<f64> {
    if f.dims() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "residual: factors for {:?} vs tensor {:?}",
            f.dims(),
            t.dim()
        )));
    }
    let rec = f.reconstruct();
    let err = t
        .iter()
        .zip(rec.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let norm = fro_norm_tensor(t);
    Ok(if norm > 0.0 { err / norm } else { err })
}

fn random_factor(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMat {
    CMat::from_shape_fn((rows, cols), |_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

fn gram(f: &CMat) -> CMat {
    adjoint(f).dot(f)
}

fn hadamard(a: &CMat, b: &CMat) -> CMat {
    let mut out = a.clone();
    out.zip_mut_with(b, |x, y| *x *= *y);
    out
}

struct SweepState {
    f1: CMat,
    f2: CMat,
    f3: CMat,
    regularized: bool,
}

impl SweepState {
    fn factor(&self, mode: usize) -> &CMat {
        match mode {
            1 => &self.f1,
            2 => &self.f2,
            3 => &self.f3,
            _ => unreachable!(),
        }
    }

    fn set_factor(&mut self, mode: usize, f: CMat) {
        match mode {
            1 => self.f1 = f,
            2 => self.f2 = f,
            3 => self.f3 = f,
            _ => unreachable!(),
        }
    }

    /// One least-squares update of factor `mode`; returns the MTTKRP matrix
    /// so the caller can reuse it for the cheap residual.
    fn update(&mut self, t: &CTensor3, mode: usize) -> Result<CMat> {
        let (a, b) = match mode {
            1 => (&self.f2, &self.f3),
            2 => (&self.f1, &self.f3),
            3 => (&self.f1, &self.f2),
            _ => unreachable!(),
        };
        let g = hadamard(&gram(a), &gram(b));
        let p = mttkrp(t, &self.f1, &self.f2, &self.f3, mode)?;
        let HermitianPinv { inv, eigs, .. } = pinv_hermitian(&g, SV_FLOOR)?;
        let lambda_max = eigs.last().copied().unwrap_or(0.0);
        let trusted = eigs
            .first()
            .map(|&l| l > GRAM_TRUST * GRAM_TRUST * lambda_max && l > 0.0)
            .unwrap_or(false);
        let new = if trusted {
            p.dot(&inv.mapv(|z| z.conj()))
        } else {
            // Near rank deficiency the Gramian has lost too many digits:
            // apply the singular-value floor on the Khatri-Rao matrix itself.
            let (next1, next2) = match mode {
                1 => (&self.f2, &self.f3),
                2 => (&self.f3, &self.f1),
                3 => (&self.f1, &self.f2),
                _ => unreachable!(),
            };
            let kr = khatri_rao(next2, next1)?;
            let (kr_pinv, truncated) = pinv(&kr, SV_FLOOR)?;
            if truncated > 0 {
                self.regularized = true;
            }
            let u = unfold(t, mode)?;
            kr_pinv.dot(&u.t()).t().to_owned()
        };
        self.set_factor(mode, new);
        Ok(p)
    }
}

/// Rank-K CP decomposition by trilinear ALS. Deterministic for fixed
/// `(T, opts)`.
///
/// Restarts run sequentially from per-restart sub-seeds and act as a rescue
/// against stagnation (swamps): the first restart whose residual-change
/// criterion fires is returned immediately; if none converges within
/// `max_iters`, the best final residual wins, ties to the lower index.
pub fn cp_als(t: &CTensor3, opts: &AlsOptions) -> Result<(CpFactors, AlsReport)> {
    opts.validate()?;
    ensure_finite_tensor(t, "cp_als input")?;
    let dims = t.dim();
    let k = opts.rank;
    let max_rank = (dims.1 * dims.2).min(dims.0 * dims.2).min(dims.0 * dims.1);
    if k > max_rank {
        return Err(Error::InvalidArgument(format!(
            "rank {k} exceeds the mode-wise bound {max_rank} for dims {dims:?}"
        )));
    }
    let norm_t = fro_norm_tensor(t);
    let norm_t2 = norm_t * norm_t;

    let mut best: Option<(CpFactors, AlsReport)> = None;
    for restart in 0..opts.restarts {
        let mut rng = rng_for(opts.seed, &[restart as u64]);
        let mut state = SweepState {
            f1: random_factor(dims.0, k, &mut rng),
            f2: random_factor(dims.1, k, &mut rng),
            f3: random_factor(dims.2, k, &mut rng),
            regularized: false,
        };
        let mut history = Vec::new();
        let mut prev = f64::INFINITY;
        let mut converged = false;
        let mut sweeps = 0;
        for _ in 0..opts.max_iters {
            state.update(t, 1)?;
            state.update(t, 2)?;
            let p3 = state.update(t, 3)?;
            sweeps += 1;

            let res = sweep_residual(t, &state, &p3, norm_t, norm_t2)?;
            if !res.is_finite() {
                return Err(Error::Numerical(format!(
                    "residual became non-finite at sweep {sweeps}"
                )));
            }
            history.push(res);
            if (prev - res).abs() < opts.rel_tol {
                converged = true;
                break;
            }
            prev = res;
        }
        let factors = CpFactors {
            f1: state.f1,
            f2: state.f2,
            f3: state.f3,
        };
        let final_residual = residual(t, &factors)?;
        let report = AlsReport {
            iterations: sweeps,
            final_residual,
            converged,
            restart_index: restart,
            regularized: state.regularized,
            uniqueness_risk: !generic_kruskal_ok(dims, k),
            residual_history: history,
        };
        let better = match &best {
            None => true,
            Some((_, b)) => final_residual < b.final_residual,
        };
        if better {
            best = Some((factors, report));
        }
        if converged {
            break;
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Residual after a full sweep from the Gramian identity
/// `‖T - X‖² = ‖T‖² - 2 Re Σ conj(F3) ∘ P3 + 1^T (G1 ∘ G2 ∘ G3) 1`,
/// falling back to the exact residual when cancellation dominates.
fn sweep_residual(
    t: &CTensor3,
    state: &SweepState,
    p3: &CMat,
    norm_t: f64,
    norm_t2: f64,
) -> Result<f64> {
    let ip: C64 = state
        .f3
        .iter()
        .zip(p3.iter())
        .map(|(f, p)| f.conj() * p)
        .sum();
    let g = hadamard(
        &hadamard(&gram(&state.f1), &gram(&state.f2)),
        &gram(&state.f3),
    );
    let norm_est2: f64 = g.iter().map(|z| z.re).sum();
    let res2 = norm_t2 - 2.0 * ip.re + norm_est2;
    if norm_t == 0.0 {
        return Ok(res2.max(0.0).sqrt());
    }
    let res = (res2.max(0.0)).sqrt() / norm_t;
    if res < CHEAP_RESIDUAL_FLOOR {
        let factors = CpFactors {
            f1: state.f1.clone(),
            f2: state.f2.clone(),
            f3: state.f3.clone(),
        };
        residual(t, &factors)
    } else {
        Ok(res)
    }
}

/// Result of matching estimated factors against a reference up to the CP
/// permutation/scaling ambiguity.
#[derive(Debug, Clone)]
pub struct Alignment {
    /// Estimate with columns permuted and rescaled onto the reference.
    pub factors: CpFactors,
    /// `permutation[i]` is the estimate column matched to reference column `i`.
    pub permutation: Vec<usize>,
    /// Per-mode complex scales applied to each matched column.
    pub scales: Vec<[C64; 3]>,
    /// Congruence (product over modes of normalized inner-product moduli)
    /// of each matched column pair, in reference column order.
    pub congruences: Vec<f64>,
}

/// Greedily matches estimate columns to reference columns by maximum
/// congruence, then rescales each matched column per mode by the
/// least-squares complex scale onto the reference.
pub fn align_factors(est: &CpFactors, reference: &CpFactors) -> Result<Alignment> {
    if est.dims() != reference.dims() || est.rank() != reference.rank() {
        return Err(Error::DimensionMismatch(format!(
            "align_factors: {:?} rank {} vs {:?} rank {}",
            est.dims(),
            est.rank(),
            reference.dims(),
            reference.rank()
        )));
    }
    let k = est.rank();
    let modes_est = [&est.f1, &est.f2, &est.f3];
    let modes_ref = [&reference.f1, &reference.f2, &reference.f3];

    // congruence[i][j] between reference column i and estimate column j
    let mut congruence = vec![vec![1.0f64; k]; k];
    for m in 0..3 {
        for i in 0..k {
            let rc = modes_ref[m].column(i);
            let rn = rc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for j in 0..k {
                let ec = modes_est[m].column(j);
                let en = ec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let dot: C64 = ec.iter().zip(rc.iter()).map(|(e, r)| e.conj() * r).sum();
                let denom = (en * rn).max(f64::MIN_POSITIVE);
                congruence[i][j] *= dot.norm() / denom;
            }
        }
    }

    let mut permutation = vec![usize::MAX; k];
    let mut taken_ref = vec![false; k];
    let mut taken_est = vec![false; k];
    for _ in 0..k {
        let (mut bi, mut bj, mut bv) = (0, 0, f64::NEG_INFINITY);
        for i in 0..k {
            if taken_ref[i] {
                continue;
            }
            for j in 0..k {
                if !taken_est[j] && congruence[i][j] > bv {
                    bv = congruence[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        permutation[bi] = bj;
        taken_ref[bi] = true;
        taken_est[bj] = true;
    }

    let mut f1 = CMat::zeros(est.f1.dim());
    let mut f2 = CMat::zeros(est.f2.dim());
    let mut f3 = CMat::zeros(est.f3.dim());
    let mut scales = Vec::with_capacity(k);
    let mut congruences = Vec::with_capacity(k);
    for i in 0..k {
        let j = permutation[i];
        congruences.push(congruence[i][j]);
        let mut column_scales = [C64::new(1.0, 0.0); 3];
        let outs: [&mut CMat; 3] = [&mut f1, &mut f2, &mut f3];
        for (m, out) in outs.into_iter().enumerate() {
            let ec = modes_est[m].column(j);
            let rc = modes_ref[m].column(i);
            let num: C64 = ec.iter().zip(rc.iter()).map(|(e, r)| e.conj() * r).sum();
            let den: f64 = ec.iter().map(|z| z.norm_sqr()).sum();
            let s = if den > 0.0 { num / den } else { C64::new(0.0, 0.0) };
            column_scales[m] = s;
            for (row, e) in ec.iter().enumerate() {
                out[(row, i)] = e * s;
            }
        }
        scales.push(column_scales);
    }

    Ok(Alignment {
        factors: CpFactors { f1, f2, f3 },
        permutation,
        scales,
        congruences,
    })
}
