//! Bistatic EMVS-MIMO radar simulation and parameter estimation.
//!
//! The crate simulates the snapshot tensor observed by a bistatic MIMO radar
//! whose transmit and receive arrays are built from six-component
//! electromagnetic vector sensors (EMVS), and recovers all eight per-target
//! parameters — transmit/receive elevation, azimuth, polarization angle and
//! polarization phase difference — from that tensor via a two-stage (nested)
//! CP decomposition:
//!
//! 1. an *outer* rank-K CP decomposition of the `(6MN, 6, L)` snapshot tensor
//!    yields the receive spatial responses and a composite transmit/receive
//!    steering factor,
//! 2. the composite factor is rearranged into a small `(N, 6, M)` tensor whose
//!    *inner* CP decomposition separates the transmit steering, transmit
//!    spatial response and receive steering matrices.
//!
//! Elevations come from the rotation invariance of the uniform linear arrays,
//! directions from the Poynting vector of each spatial response, and
//! polarization states from a least-squares fit against the angular response
//! matrix. A single-stage CP baseline (with an explicit rank-1 reconstruction
//! step) is included for comparison, along with a deterministic Monte-Carlo
//! RMSE-vs-SNR benchmark harness.
//!
//! Modules map onto the processing stages:
//!
//! - [`tensor`]: dense complex matrix/tensor kernels (Khatri-Rao, unfolding,
//!   CP reconstruction) with pinned index conventions,
//! - [`model`]: scene description and forward synthesis of noisy snapshots,
//! - [`cp`]: rank-K CP decomposition by trilinear alternating least squares,
//! - [`estimator`]: the nested pipeline, parameter extraction and pairing,
//! - [`bench`]: Monte-Carlo sweep driver and RMSE aggregation,
//! - [`config`] / [`dataset`]: JSON configs and the binary snapshot format.

pub mod bench;
pub mod config;
pub mod cp;
pub mod dataset;
pub mod error;
pub mod estimator;
pub(crate) mod linalg;
pub mod model;
pub mod seed;
pub mod tensor;

pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
