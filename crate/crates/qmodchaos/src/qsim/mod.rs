//! Exact simulator for reversible circuits over {X, SWAP, multi-controlled X}.
//!
//! Every gate in this set permutes computational basis states, so a state is
//! simulated either as a dense amplitude vector or as a sparse map from basis
//! states to amplitudes; both backends are exact. Qubit 0 is the least
//! significant bit everywhere and registers are little-endian.

mod noise;
mod qasm;
mod state;

pub use noise::NoiseModel;
pub use qasm::to_qasm;
pub use state::{
    apply, measure_all, measure_all_with, prepare_basis, prepare_uniform, read_register,
    BackendKind, DenseState, Measurement, QuantumState, SparseState,
};

use thiserror::Error;

/// Errors produced by the simulator layer.
#[derive(Debug, Error)]
pub enum QsimError {
    #[error("qubit index {index} out of range for width {width}")]
    QubitOutOfRange { index: usize, width: usize },
    #[error("circuit width {circuit} does not match state width {state}")]
    WidthMismatch { circuit: usize, state: usize },
    #[error("register `{0}` already defined")]
    DuplicateRegister(String),
    #[error("register `{0}` overlaps a previously defined register")]
    RegisterOverlap(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("value {value} does not fit register `{name}` of {width} qubits")]
    ValueTooWide {
        name: String,
        value: u64,
        width: usize,
    },
    #[error("width {0} exceeds the 63-qubit basis-index limit")]
    WidthTooLarge(usize),
    #[error("flip probability {0} must lie in [0, 1]")]
    BadProbability(f64),
}

/// A reversible gate. `X` and `SWAP` carry no controls; `Mcx` covers CX
/// (one control), CCX (two) and the general multi-controlled NOT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    X { target: usize },
    Swap { a: usize, b: usize },
    Mcx { controls: Vec<usize>, target: usize },
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate::X { target }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "swap qubits must differ");
        Gate::Swap { a, b }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::mcx(vec![control], target)
    }

    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Gate::mcx(vec![c0, c1], target)
    }

    /// Multi-controlled NOT. Zero controls degenerates to `X`.
    pub fn mcx(mut controls: Vec<usize>, target: usize) -> Self {
        controls.sort_unstable();
        controls.dedup();
        assert!(
            !controls.contains(&target),
            "mcx controls must not contain the target"
        );
        if controls.is_empty() {
            Gate::X { target }
        } else {
            Gate::Mcx { controls, target }
        }
    }

    /// All qubit indices the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X { target } => vec![*target],
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::Mcx { controls, target } => {
                let mut q = controls.clone();
                q.push(*target);
                q
            }
        }
    }

    /// Number of control qubits.
    pub fn arity(&self) -> usize {
        match self {
            Gate::Mcx { controls, .. } => controls.len(),
            _ => 0,
        }
    }

    /// Image of a computational basis state under the gate. Each gate in the
    /// set is an involution on basis states.
    pub fn permute(&self, basis: u64) -> u64 {
        match self {
            Gate::X { target } => basis ^ (1u64 << target),
            Gate::Swap { a, b } => {
                let bit_a = (basis >> a) & 1;
                let bit_b = (basis >> b) & 1;
                if bit_a == bit_b {
                    basis
                } else {
                    basis ^ (1u64 << a) ^ (1u64 << b)
                }
            }
            Gate::Mcx { controls, target } => {
                if controls.iter().all(|&c| (basis >> c) & 1 == 1) {
                    basis ^ (1u64 << target)
                } else {
                    basis
                }
            }
        }
    }
}

/// Named register map over a circuit's qubits, least-significant qubit first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Layout {
    registers: Vec<(String, Vec<usize>)>,
}

impl Layout {
    pub fn new() -> Self {
        Layout::default()
    }

    /// Add a register. Registers must be pairwise disjoint.
    pub fn with(mut self, name: &str, qubits: Vec<usize>) -> Result<Self, QsimError> {
        if self.registers.iter().any(|(n, _)| n == name) {
            return Err(QsimError::DuplicateRegister(name.to_string()));
        }
        if self
            .registers
            .iter()
            .any(|(_, qs)| qs.iter().any(|q| qubits.contains(q)))
        {
            return Err(QsimError::RegisterOverlap(name.to_string()));
        }
        self.registers.push((name.to_string(), qubits));
        Ok(self)
    }

    pub fn register(&self, name: &str) -> Result<&[usize], QsimError> {
        self.registers
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, qs)| qs.as_slice())
            .ok_or_else(|| QsimError::UnknownRegister(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.registers.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.registers
            .iter()
            .map(|(n, qs)| (n.as_str(), qs.as_slice()))
    }

    fn max_index(&self) -> Option<usize> {
        self.registers
            .iter()
            .flat_map(|(_, qs)| qs.iter())
            .copied()
            .max()
    }
}

impl std::fmt::Display for Layout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (name, qubits) in &self.registers {
            let list = qubits
                .iter()
                .map(|q| format!("q[{q}]"))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(f, "{name}: {list}")?;
        }
        Ok(())
    }
}

/// An ordered list of reversible gates over `width` qubits, with a named
/// register layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    layout: Layout,
}

impl Circuit {
    pub fn new(width: usize, layout: Layout) -> Result<Self, QsimError> {
        if width > 63 {
            return Err(QsimError::WidthTooLarge(width));
        }
        if let Some(max) = layout.max_index() {
            if max >= width {
                return Err(QsimError::QubitOutOfRange { index: max, width });
            }
        }
        Ok(Circuit {
            width,
            gates: Vec::new(),
            layout,
        })
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), QsimError> {
        if let Some(&index) = gate.qubits().iter().find(|&&q| q >= self.width) {
            return Err(QsimError::QubitOutOfRange {
                index,
                width: self.width,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Image of a basis state under the whole circuit.
    pub fn permute(&self, basis: u64) -> u64 {
        self.gates.iter().fold(basis, |b, g| g.permute(b))
    }
}

/// The inverse circuit: the gate list reversed. Every gate in this set is
/// self-inverse.
pub fn inverse(circuit: &Circuit) -> Circuit {
    Circuit {
        width: circuit.width,
        gates: circuit.gates.iter().rev().cloned().collect(),
        layout: circuit.layout.clone(),
    }
}
