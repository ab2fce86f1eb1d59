//! Scene description and forward synthesis of the snapshot tensor.
//!
//! A scene is `K` far-field targets seen by a bistatic radar with `M`
//! transmit and `N` receive six-component vector sensors, both uniform linear
//! arrays at half-wavelength spacing. Each target carries eight parameters:
//! transmit/receive elevation `theta`, azimuth `phi`, polarization angle
//! `gamma` and polarization phase difference `eta` (radians).
//!
//! Synthesis builds the noiseless `(6MN, 6, L)` snapshot tensor
//! `cp_reconstruct(A_tqr, Q_r, S^T)` where `A_tqr = A_t ⊙ Q_t ⊙ A_r` stacks
//! the transmit steering, transmit spatial response and receive steering
//! factors column-wise (Kronecker order `a_t ⊗ q_t ⊗ a_r`), `Q_r` holds the
//! receive spatial responses and `S` is the `K x L` source matrix. Additive
//! noise is circular complex Gaussian calibrated to a per-entry SNR.

use ndarray::array;
use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::seed::rng_for;
use crate::tensor::{cp_reconstruct, ensure_finite_tensor, khatri_rao, CMat, CTensor3, CVec, C64};
use crate::Result;

/// Sub-seed stream tags used by [`synthesize`].
const SIGNAL_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

/// Eight ground-truth parameters of one target, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetParams {
    pub theta_t: f64,
    pub phi_t: f64,
    pub gamma_t: f64,
    pub eta_t: f64,
    pub theta_r: f64,
    pub phi_r: f64,
    pub gamma_r: f64,
    pub eta_r: f64,
}

impl TargetParams {
    /// Validates the parameter domains: `theta in [0, pi)`, `phi in [0, 2pi)`,
    /// `gamma in [0, pi/2)`, `eta in [-pi, pi)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theta_t: f64,
        phi_t: f64,
        gamma_t: f64,
        eta_t: f64,
        theta_r: f64,
        phi_r: f64,
        gamma_r: f64,
        eta_r: f64,
    ) -> Result<Self> {
        let p = Self {
            theta_t,
            phi_t,
            gamma_t,
            eta_t,
            theta_r,
            phi_r,
            gamma_r,
            eta_r,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same as [`TargetParams::new`] with all eight angles in degrees.
    #[allow(clippy::too_many_arguments)]
    pub fn from_degrees(
        theta_t: f64,
        phi_t: f64,
        gamma_t: f64,
        eta_t: f64,
        theta_r: f64,
        phi_r: f64,
        gamma_r: f64,
        eta_r: f64,
    ) -> Result<Self> {
        Self::new(
            theta_t.to_radians(),
            phi_t.to_radians(),
            gamma_t.to_radians(),
            eta_t.to_radians(),
            theta_r.to_radians(),
            phi_r.to_radians(),
            gamma_r.to_radians(),
            eta_r.to_radians(),
        )
    }

    fn validate(&self) -> Result<()> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let pi = std::f64::consts::PI;
        let two_pi = std::f64::consts::TAU;
        let checks = [
            ("theta_t", self.theta_t, 0.0, pi),
            ("theta_r", self.theta_r, 0.0, pi),
            ("phi_t", self.phi_t, 0.0, two_pi),
            ("phi_r", self.phi_r, 0.0, two_pi),
            ("gamma_t", self.gamma_t, 0.0, half_pi),
            ("gamma_r", self.gamma_r, 0.0, half_pi),
            ("eta_t", self.eta_t, -pi, pi),
            ("eta_r", self.eta_r, -pi, pi),
        ];
        for (name, value, lo, hi) in checks {
            if !value.is_finite() || value < lo || value >= hi {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {value} outside [{lo}, {hi})"
                )));
            }
        }
        Ok(())
    }

    /// All eight parameters in the fixed order
    /// `[theta_t, phi_t, gamma_t, eta_t, theta_r, phi_r, gamma_r, eta_r]`.
    pub fn to_array(self) -> [f64; 8] {
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

/// Ground-truth scene: targets plus array geometry and snapshot count.
#[derive(Debug, Clone)]
pub struct Scene {
    targets: Vec<TargetParams>,
    tx_sensors: usize,
    rx_sensors: usize,
    snapshots: usize,
}

impl Scene {
    /// Validates `K >= 1`, `M >= 2`, `N >= 2`, `L >= 1` and that no two
    /// targets share the same (transmit, receive) elevation pair, which would
    /// make pairing ambiguous. `L < K` is allowed here and reported as an
    /// identifiability warning at synthesis time.
    pub fn new(
        targets: Vec<TargetParams>,
        tx_sensors: usize,
        rx_sensors: usize,
        snapshots: usize,
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidArgument("scene needs at least one target".into()));
        }
        if tx_sensors < 2 || rx_sensors < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 sensors per array, got M={tx_sensors}, N={rx_sensors}"
            )));
        }
        if snapshots < 1 {
            return Err(Error::InvalidArgument("need at least one snapshot".into()));
        }
        for i in 0..targets.len() {
            for j in (i + 1)..targets.len() {
                if targets[i].theta_t == targets[j].theta_t
                    && targets[i].theta_r == targets[j].theta_r
                {
                    return Err(Error::InvalidArgument(format!(
                        "targets {i} and {j} share the same elevation pair"
                    )));
                }
            }
        }
        Ok(Self {
            targets,
            tx_sensors,
            rx_sensors,
            snapshots,
        })
    }

    pub fn targets(&self) -> &[TargetParams] {
        &self.targets
    }

    /// Number of targets `K`.
    pub fn num_targets(&self) -> usize {
        self.targets.len()
    }

    /// Transmit sensor count `M`.
    pub fn tx_sensors(&self) -> usize {
        self.tx_sensors
    }

    /// Receive sensor count `N`.
    pub fn rx_sensors(&self) -> usize {
        self.rx_sensors
    }

    /// Snapshot count `L`.
    pub fn snapshots(&self) -> usize {
        self.snapshots
    }
}

/// The scene used by the shipped reference benchmark configuration:
/// `M = 9`, `N = 10`, `L = 200` and three targets.
pub fn reference_scene() -> Scene {
    let deg = [
        // theta_t, phi_t, gamma_t, eta_t, theta_r, phi_r, gamma_r, eta_r
        [40.0, 15.0, 10.0, 38.0, 24.0, 21.0, 42.0, 17.0],
        [20.0, 25.0, 22.0, 48.0, 38.0, 32.0, 33.0, 27.0],
        [30.0, 35.0, 35.0, 56.0, 16.0, 55.0, 60.0, 39.0],
    ];
    let targets = deg
        .iter()
        .map(|p| TargetParams::from_degrees(p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]))
        .collect::<Result<Vec<_>>>()
        .expect("reference targets are in range");
    Scene::new(targets, 9, 10, 200).expect("reference scene is valid")
}

/// Snapshot tensor of shape `(6MN, 6, L)` with the SNR it was generated at
/// (`None` for noiseless data) and the array geometry it came from.
#[derive(Debug, Clone)]
pub struct SnapshotData {
    tensor: CTensor3,
    snr_db: Option<f64>,
    tx_sensors: usize,
    rx_sensors: usize,
}

impl SnapshotData {
    /// Validates that `tensor` has shape `(6 * M * N, 6, L)`.
    pub fn new(
        tensor: CTensor3,
        snr_db: Option<f64>,
        tx_sensors: usize,
        rx_sensors: usize,
    ) -> Result<Self> {
        let (i1, i2, i3) = tensor.dim();
        if i1 != 6 * tx_sensors * rx_sensors || i2 != 6 || i3 < 1 {
            return Err(Error::DimensionMismatch(format!(
                "snapshot tensor {i1}x{i2}x{i3} does not match (6*{tx_sensors}*{rx_sensors}, 6, L)"
            )));
        }
        ensure_finite_tensor(&tensor, "snapshot tensor")?;
        Ok(Self {
            tensor,
            snr_db,
            tx_sensors,
            rx_sensors,
        })
    }

    pub fn tensor(&self) -> &CTensor3 {
        &self.tensor
    }

    pub fn snr_db(&self) -> Option<f64> {
        self.snr_db
    }

    pub fn tx_sensors(&self) -> usize {
        self.tx_sensors
    }

    pub fn rx_sensors(&self) -> usize {
        self.rx_sensors
    }

    pub fn snapshots(&self) -> usize {
        self.tensor.dim().2
    }
}

/// Steering vector of a half-wavelength ULA: element `m` (1-based) is
/// `exp(-j pi m sin(theta))`, `m = 1..=count`.
pub fn ula_steering(theta: f64, count: usize) -> CVec {
    let s = theta.sin();
    CVec::from_shape_fn(count, |m| {
        Complex64::from_polar(1.0, -std::f64::consts::PI * (m as f64 + 1.0) * s)
    })
}

/// The 6x2 angular response matrix mapping a polarization state to the
/// six-component sensor output; rows 0..3 are the electric-field block, rows
/// 3..6 the magnetic-field block. Columns are orthogonal with norm sqrt(2).
pub fn spatial_angular_matrix(theta: f64, phi: f64) -> CMat {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let r = |x: f64| C64::new(x, 0.0);
    array![
        [r(cp * ct), r(-sp)],
        [r(sp * ct), r(cp)],
        [r(-st), r(0.0)],
        [r(-sp), r(-cp * ct)],
        [r(cp), r(-sp * ct)],
        [r(0.0), r(st)],
    ]
}

/// Unit-norm polarization state vector `[sin(gamma) e^{j eta}, cos(gamma)]`.
pub fn polarization_vector(gamma: f64, eta: f64) -> CVec {
    array![
        Complex64::from_polar(gamma.sin(), eta),
        C64::new(gamma.cos(), 0.0)
    ]
}

/// Spatial response of one vector sensor: `q = F(theta, phi) g(gamma, eta)`.
pub fn emvs_response(theta: f64, phi: f64, gamma: f64, eta: f64) -> CVec {
    spatial_angular_matrix(theta, phi).dot(&polarization_vector(gamma, eta))
}

/// The four per-target factor matrices of a scene.
#[derive(Debug, Clone)]
pub struct SteeringFactors {
    /// Transmit steering matrix, `M x K`.
    pub a_t: CMat,
    /// Transmit spatial response matrix, `6 x K`.
    pub q_t: CMat,
    /// Receive steering matrix, `N x K`.
    pub a_r: CMat,
    /// Receive spatial response matrix, `6 x K`.
    pub q_r: CMat,
}

impl SteeringFactors {
    /// Composite outer factor `A_t ⊙ Q_t ⊙ A_r` of shape `6MN x K`.
    pub fn composite(&self) -> CMat {
        let inner = khatri_rao(&self.q_t, &self.a_r).expect("equal ranks");
        khatri_rao(&self.a_t, &inner).expect("equal ranks")
    }
}

/// Assembles the steering/response factor matrices column-by-column.
pub fn build_factors(scene: &Scene) -> SteeringFactors {
    let k = scene.num_targets();
    let mut a_t = CMat::zeros((scene.tx_sensors(), k));
    let mut q_t = CMat::zeros((6, k));
    let mut a_r = CMat::zeros((scene.rx_sensors(), k));
    let mut q_r = CMat::zeros((6, k));
    for (col, t) in scene.targets().iter().enumerate() {
        a_t.column_mut(col)
            .assign(&ula_steering(t.theta_t, scene.tx_sensors()));
        q_t.column_mut(col)
            .assign(&emvs_response(t.theta_t, t.phi_t, t.gamma_t, t.eta_t));
        a_r.column_mut(col)
            .assign(&ula_steering(t.theta_r, scene.rx_sensors()));
        q_r.column_mut(col)
            .assign(&emvs_response(t.theta_r, t.phi_r, t.gamma_r, t.eta_r));
    }
    SteeringFactors { a_t, q_t, a_r, q_r }
}

/// Draws a `K x L` matrix of i.i.d. unit-variance circular complex Gaussians.
pub fn gaussian_source(rng: &mut ChaCha12Rng, k: usize, l: usize) -> CMat {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_shape_fn((k, l), |_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * scale, im * scale)
    })
}

/// Synthesizes the snapshot tensor with the default Gaussian source.
///
/// `snr_db = None` gives the exact noiseless signal tensor. Otherwise
/// circular complex Gaussian noise is added with per-entry variance
/// `sigma^2 = P_sig / 10^(snr_db / 10)` where `P_sig` is the mean squared
/// magnitude of the noiseless entries. Deterministic for a given `seed`; the
/// source uses stream 0 of the seed and the noise stream 1.
pub fn synthesize(scene: &Scene, snr_db: Option<f64>, seed: u64) -> Result<SnapshotData> {
    synthesize_with_source(scene, snr_db, seed, gaussian_source)
}

/// [`synthesize`] with a custom source-waveform generator (hook for non-
/// Gaussian sources). The generator receives the signal-stream RNG and must
/// return a `K x L` matrix.
pub fn synthesize_with_source(
    scene: &Scene,
    snr_db: Option<f64>,
    seed: u64,
    source: impl FnOnce(&mut ChaCha12Rng, usize, usize) -> CMat,
) -> Result<SnapshotData> {
    let k = scene.num_targets();
    let l = scene.snapshots();
    if l < k {
        log::warn!(
            "snapshot count L={l} below target count K={k}: source matrix cannot have full row rank"
        );
    }
    let factors = build_factors(scene);
    let a_tqr = factors.composite();

    let mut signal_rng = rng_for(seed, &[SIGNAL_STREAM]);
    let s = source(&mut signal_rng, k, l);
    if s.nrows() != k || s.ncols() != l {
        return Err(Error::DimensionMismatch(format!(
            "source matrix {}x{} does not match K={k}, L={l}",
            s.nrows(),
            s.ncols()
        )));
    }
    let s_t = s.t().to_owned();
    let mut tensor = cp_reconstruct(&a_tqr, &factors.q_r, &s_t)?;

    if let Some(snr) = snr_db {
        let p_sig =
            tensor.iter().map(|z| z.norm_sqr()).sum::<f64>() / tensor.len() as f64;
        let sigma2 = p_sig / 10f64.powf(snr / 10.0);
        let scale = (sigma2 / 2.0).sqrt();
        let mut noise_rng = rng_for(seed, &[NOISE_STREAM]);
        for z in tensor.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut noise_rng);
            let im: f64 = StandardNormal.sample(&mut noise_rng);
            *z += C64::new(re * scale, im * scale);
        }
    }

    SnapshotData::new(tensor, snr_db, scene.tx_sensors(), scene.rx_sensors())
}
