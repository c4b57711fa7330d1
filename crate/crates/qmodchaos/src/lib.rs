//! Quasi-chaotic oscillators built from reversible modular quantum circuits.
//!
//! A modular IIR filter over the ring of integers modulo `M` doubles as a
//! stream-cipher keystream generator; this crate provides the classical
//! encoder/decoder/oscillator ([`ring`]), reversible circuits computing one
//! filter section `x_out = <x_in + w*d> mod 2^n` ([`qarith`]), an exact
//! two-backend simulator for those circuits with bit-flip measurement noise
//! ([`qsim`]), and the experiment harness that validates the quantum path
//! against the classical oracle and measures noise robustness and
//! autocorrelation ([`experiments`]).
//!
//! Floating-point work (amplitudes, statistics) is generic over the
//! [`Real`] scalar; the aliases below fix the default `f64` instantiation.

pub mod experiments;
pub mod qarith;
pub mod qsim;
pub mod ring;
mod scalar;

pub use scalar::Real;

pub use qarith::{GateStats, QarithError, QmodLayout};
pub use qsim::{BackendKind, Circuit, Gate, Layout, NoiseModel, QsimError};
pub use ring::{FilterConfig, Modulus, Residue, RingError, SignedRange, TimeSeries};

/// Default-precision amplitude.
pub type Amplitude = num_complex::Complex<f64>;
/// Default-precision simulator state.
pub type State = qsim::QuantumState<f64>;
/// Single-precision simulator state, for cross-checking the generic path.
pub type State32 = qsim::QuantumState<f32>;
