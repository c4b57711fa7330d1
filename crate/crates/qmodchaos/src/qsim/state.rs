//! Quantum state backends and the prepare / apply / measure operations.

use super::{Circuit, Layout, NoiseModel, QsimError};
use crate::scalar::Real;
use num_complex::Complex;
use rand::Rng;
use std::collections::BTreeMap;

/// Which state representation to simulate with.
///
/// Sparse is the default: the gate set permutes basis states, so a state
/// prepared from `k` basis components always has exactly `k` nonzero
/// amplitudes. Dense is kept for cross-validation and for widths small
/// enough that the flat vector is cheaper than map bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackendKind {
    Dense,
    #[default]
    Sparse,
    /// Dense up to [`BackendKind::AUTO_DENSE_MAX_WIDTH`] qubits, sparse above.
    Auto,
}

impl BackendKind {
    /// Widest circuit the `Auto` policy simulates densely.
    pub const AUTO_DENSE_MAX_WIDTH: usize = 12;

    fn resolve(self, width: usize) -> BackendKind {
        match self {
            BackendKind::Auto if width <= Self::AUTO_DENSE_MAX_WIDTH => BackendKind::Dense,
            BackendKind::Auto => BackendKind::Sparse,
            other => other,
        }
    }
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(BackendKind::Dense),
            "sparse" => Ok(BackendKind::Sparse),
            "auto" => Ok(BackendKind::Auto),
            other => Err(format!("unknown backend `{other}` (dense|sparse|auto)")),
        }
    }
}

/// Flat amplitude vector of length `2^width`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState<R: Real> {
    width: usize,
    amps: Vec<Complex<R>>,
}

/// Map from basis state to amplitude; only nonzero amplitudes are stored.
/// A `BTreeMap` keeps iteration order deterministic, which measurement
/// sampling relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState<R: Real> {
    width: usize,
    amps: BTreeMap<u64, Complex<R>>,
}

/// Exact simulator state in one of the two backends.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState<R: Real> {
    Dense(DenseState<R>),
    Sparse(SparseState<R>),
}

impl<R: Real> QuantumState<R> {
    fn from_components(
        width: usize,
        components: Vec<(u64, Complex<R>)>,
        backend: BackendKind,
    ) -> Result<Self, QsimError> {
        if width > 63 {
            return Err(QsimError::WidthTooLarge(width));
        }
        Ok(match backend.resolve(width) {
            BackendKind::Dense => {
                let mut amps = vec![Complex::new(R::zero(), R::zero()); 1usize << width];
                for (basis, amp) in components {
                    amps[basis as usize] = amp;
                }
                QuantumState::Dense(DenseState { width, amps })
            }
            _ => QuantumState::Sparse(SparseState {
                width,
                amps: components.into_iter().collect(),
            }),
        })
    }

    pub fn width(&self) -> usize {
        match self {
            QuantumState::Dense(s) => s.width,
            QuantumState::Sparse(s) => s.width,
        }
    }

    pub fn backend_kind(&self) -> BackendKind {
        match self {
            QuantumState::Dense(_) => BackendKind::Dense,
            QuantumState::Sparse(_) => BackendKind::Sparse,
        }
    }

    /// Amplitude of one basis state.
    pub fn amplitude(&self, basis: u64) -> Complex<R> {
        match self {
            QuantumState::Dense(s) => s.amps[basis as usize],
            QuantumState::Sparse(s) => s
                .amps
                .get(&basis)
                .copied()
                .unwrap_or_else(|| Complex::new(R::zero(), R::zero())),
        }
    }

    /// Nonzero components in ascending basis order.
    pub fn components(&self) -> Vec<(u64, Complex<R>)> {
        match self {
            QuantumState::Dense(s) => s
                .amps
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm_sqr() > R::zero())
                .map(|(i, a)| (i as u64, *a))
                .collect(),
            QuantumState::Sparse(s) => s.amps.iter().map(|(&b, &a)| (b, a)).collect(),
        }
    }

    /// Number of basis states with nonzero amplitude.
    pub fn nonzero_count(&self) -> usize {
        self.components().len()
    }

    /// Total probability mass.
    pub fn norm_sqr(&self) -> R {
        match self {
            QuantumState::Dense(s) => s.amps.iter().fold(R::zero(), |a, c| a + c.norm_sqr()),
            QuantumState::Sparse(s) => {
                s.amps.values().fold(R::zero(), |a, c| a + c.norm_sqr())
            }
        }
    }

    /// The basis state when the state has exactly one nonzero component.
    pub fn sole_basis_state(&self) -> Option<u64> {
        let components = self.components();
        match components.as_slice() {
            [(basis, _)] => Some(*basis),
            _ => None,
        }
    }
}

fn register_value(layout: &Layout, name: &str, value: u64) -> Result<u64, QsimError> {
    let qubits = layout.register(name)?;
    if qubits.len() < 64 && value >> qubits.len() != 0 {
        return Err(QsimError::ValueTooWide {
            name: name.to_string(),
            value,
            width: qubits.len(),
        });
    }
    let mut basis = 0u64;
    for (bit, &q) in qubits.iter().enumerate() {
        if (value >> bit) & 1 == 1 {
            basis |= 1u64 << q;
        }
    }
    Ok(basis)
}

fn assignments_to_basis(
    layout: &Layout,
    assignments: &[(&str, u64)],
) -> Result<u64, QsimError> {
    let mut basis = 0u64;
    for &(name, value) in assignments {
        basis |= register_value(layout, name, value)?;
    }
    Ok(basis)
}

/// Computational basis state with each assigned register holding its value
/// little-endian. Unassigned registers (and unnamed qubits) stay |0>.
pub fn prepare_basis<R: Real>(
    width: usize,
    layout: &Layout,
    assignments: &[(&str, u64)],
    backend: BackendKind,
) -> Result<QuantumState<R>, QsimError> {
    let basis = assignments_to_basis(layout, assignments)?;
    QuantumState::from_components(
        width,
        vec![(basis, Complex::new(R::one(), R::zero()))],
        backend,
    )
}

/// As [`prepare_basis`], but the named register is placed in an
/// equal-amplitude superposition over all its values.
pub fn prepare_uniform<R: Real>(
    width: usize,
    layout: &Layout,
    superposed: &str,
    assignments: &[(&str, u64)],
    backend: BackendKind,
) -> Result<QuantumState<R>, QsimError> {
    let fixed = assignments_to_basis(layout, assignments)?;
    let qubits = layout.register(superposed)?.to_vec();
    let count = 1u64 << qubits.len();
    let amp = Complex::new(
        R::one() / R::from_u64(count).expect("register size fits the scalar").sqrt(),
        R::zero(),
    );
    let components = (0..count)
        .map(|value| {
            let mut basis = fixed;
            for (bit, &q) in qubits.iter().enumerate() {
                if (value >> bit) & 1 == 1 {
                    basis |= 1u64 << q;
                }
            }
            (basis, amp)
        })
        .collect();
    QuantumState::from_components(width, components, backend)
}

/// Run the circuit. Every gate is a basis-state permutation: the dense
/// backend swaps amplitude positions in place, the sparse backend rekeys
/// its components. The norm is preserved exactly in both.
pub fn apply<R: Real>(
    circuit: &Circuit,
    state: QuantumState<R>,
) -> Result<QuantumState<R>, QsimError> {
    if circuit.width() != state.width() {
        return Err(QsimError::WidthMismatch {
            circuit: circuit.width(),
            state: state.width(),
        });
    }
    Ok(match state {
        QuantumState::Dense(mut s) => {
            for gate in circuit.gates() {
                // Each gate is an involution pairing basis states, so one
                // in-place swap per ordered pair applies it.
                for basis in 0..s.amps.len() as u64 {
                    let image = gate.permute(basis);
                    if image > basis {
                        s.amps.swap(basis as usize, image as usize);
                    }
                }
            }
            QuantumState::Dense(s)
        }
        QuantumState::Sparse(s) => {
            let width = s.width;
            let amps = s
                .amps
                .into_iter()
                .map(|(basis, amp)| (circuit.permute(basis), amp))
                .collect();
            QuantumState::Sparse(SparseState { width, amps })
        }
    })
}

/// Outcome of measuring every qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    /// Measured (possibly noise-corrupted) bitstring, qubit 0 = bit 0.
    pub bits: u64,
    pub width: usize,
    /// Born probability of the basis state that was sampled, before any
    /// bit flips.
    pub probability: f64,
}

/// Sample a basis state by Born probabilities with the noise model's seeded
/// generator, then flip each classical bit independently with `p_flip`.
pub fn measure_all<R: Real>(state: &QuantumState<R>, noise: &NoiseModel) -> Measurement {
    let mut rng = noise.rng();
    measure_all_with(state, noise.p_flip(), &mut rng)
}

/// As [`measure_all`] but drawing from a caller-owned generator, so a run of
/// consecutive measurements shares one reproducible stream.
pub fn measure_all_with<R: Real, G: Rng>(
    state: &QuantumState<R>,
    p_flip: f64,
    rng: &mut G,
) -> Measurement {
    let components = state.components();
    let draw: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut sampled = components
        .last()
        .map(|&(b, a)| (b, a.norm_sqr()))
        .unwrap_or((0, Complex::new(R::zero(), R::zero()).norm_sqr()));
    for &(basis, amp) in &components {
        let p = amp.norm_sqr().to_f64().unwrap_or(0.0);
        cumulative += p;
        if draw < cumulative {
            sampled = (basis, amp.norm_sqr());
            break;
        }
    }
    let (mut bits, norm_sqr) = sampled;
    for bit in 0..state.width() {
        if rng.gen::<f64>() < p_flip {
            bits ^= 1u64 << bit;
        }
    }
    Measurement {
        bits,
        width: state.width(),
        probability: norm_sqr.to_f64().unwrap_or(0.0),
    }
}

/// Little-endian integer value of a named register within a measured
/// bitstring.
pub fn read_register(bits: u64, layout: &Layout, name: &str) -> Result<u64, QsimError> {
    let qubits = layout.register(name)?;
    let mut value = 0u64;
    for (bit, &q) in qubits.iter().enumerate() {
        value |= ((bits >> q) & 1) << bit;
    }
    Ok(value)
}
