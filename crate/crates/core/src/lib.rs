//! Joint transceiver design for RIS-assisted dual-function radar-communication with
//! movable antennas.
//!
//! The crate maximizes the radar output SINR at a base station whose transmit and receive
//! arrays consist of movable antennas, subject to per-user communication SINR constraints,
//! a transmit power budget and antenna placement constraints. The problem is split into
//! blocks (receive filter, beamformers, RIS phases, transmit positions, receive positions)
//! that are updated cyclically by [`bcd::run`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod linalg;
pub mod error;
pub mod config;
pub mod geometry;
pub mod metrics;
pub mod convex;
pub mod block;
pub mod beamforming;
pub mod ris;
pub mod antenna;
pub mod baselines;
pub mod bcd;
pub mod experiments;

pub use error::{DfrcError, Result};
