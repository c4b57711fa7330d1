//! Reversible modular-arithmetic circuit builders: QADD (modular addition),
//! QLEFT (multiply by two), QMUL (modular multiplication), the QMOD filter
//! section `x_out = <x_in + w * d> mod 2^n`, the unrolled oscillator cascade,
//! and gate/depth accounting.
//!
//! All arithmetic is modulo `2^n`: overflow past the top qubit is simply
//! dropped, which is the `2^n` reduction itself. Registers are little-endian
//! with qubit 0 least significant.

use crate::qsim::{Circuit, Gate, Layout, QsimError};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors from circuit construction and resource formulas.
#[derive(Debug, Error)]
pub enum QarithError {
    #[error("operand width must be at least 1")]
    ZeroWidth,
    #[error("registers `{0}` and `{1}` must be disjoint")]
    RegisterOverlap(&'static str, &'static str),
    #[error("register `{name}` must have {expected} qubits, got {got}")]
    RegisterWidth {
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

/// Register placement of one QMOD section: coefficient `w`, section input
/// `x_in`, delay `d`, `product` (which becomes the section output) and the
/// `n - 1` shift ancillas, `5n - 1` qubits in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmodLayout {
    n: usize,
    w: Vec<usize>,
    x_in: Vec<usize>,
    delay: Vec<usize>,
    product: Vec<usize>,
    shift: Vec<usize>,
}

impl QmodLayout {
    /// Contiguous placement `w | x_in | delay | product | shift`.
    pub fn standard(n: usize) -> Result<Self, QarithError> {
        if n == 0 {
            return Err(QarithError::ZeroWidth);
        }
        let block = |start: usize, len: usize| (start..start + len).collect::<Vec<_>>();
        Ok(QmodLayout {
            n,
            w: block(0, n),
            x_in: block(n, n),
            delay: block(2 * n, n),
            product: block(3 * n, n),
            shift: block(4 * n, n - 1),
        })
    }

    pub fn new(
        w: Vec<usize>,
        x_in: Vec<usize>,
        delay: Vec<usize>,
        product: Vec<usize>,
        shift: Vec<usize>,
    ) -> Result<Self, QarithError> {
        let n = w.len();
        if n == 0 {
            return Err(QarithError::ZeroWidth);
        }
        let named: [(&'static str, &[usize], usize); 5] = [
            ("w", &w, n),
            ("x_in", &x_in, n),
            ("delay", &delay, n),
            ("product", &product, n),
            ("shift", &shift, n - 1),
        ];
        for (name, reg, expected) in named {
            if reg.len() != expected {
                return Err(QarithError::RegisterWidth {
                    name,
                    expected,
                    got: reg.len(),
                });
            }
        }
        for (i, (name_a, reg_a, _)) in named.iter().enumerate() {
            for (name_b, reg_b, _) in named.iter().skip(i + 1) {
                check_disjoint(name_a, reg_a, name_b, reg_b)?;
            }
        }
        Ok(QmodLayout {
            n,
            w,
            x_in,
            delay,
            product,
            shift,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total qubit count, `5n - 1`.
    pub fn width(&self) -> usize {
        5 * self.n - 1
    }

    pub fn w(&self) -> &[usize] {
        &self.w
    }

    pub fn x_in(&self) -> &[usize] {
        &self.x_in
    }

    pub fn delay(&self) -> &[usize] {
        &self.delay
    }

    pub fn product(&self) -> &[usize] {
        &self.product
    }

    pub fn shift(&self) -> &[usize] {
        &self.shift
    }

    /// Named register map for state preparation and readback.
    pub fn to_layout(&self) -> Layout {
        Layout::new()
            .with("w", self.w.clone())
            .and_then(|l| l.with("x_in", self.x_in.clone()))
            .and_then(|l| l.with("delay", self.delay.clone()))
            .and_then(|l| l.with("product", self.product.clone()))
            .and_then(|l| l.with("shift", self.shift.clone()))
            .expect("layout registers validated disjoint at construction")
    }
}

fn check_disjoint(
    name_a: &'static str,
    a: &[usize],
    name_b: &'static str,
    b: &[usize],
) -> Result<(), QarithError> {
    if a.iter().any(|q| b.contains(q)) {
        Err(QarithError::RegisterOverlap(name_a, name_b))
    } else {
        Ok(())
    }
}

/// Emit the gates of `|a>|b> -> |a>|(a+b) mod 2^n>` onto `gates`.
///
/// For each source bit `j` (LSB first) an increment-by-`2^j` is applied to
/// `dst`, controlled on `src[j]`: a descending cascade of MCX gates, the one
/// targeting `dst[t]` controlled on `src[j]` and `dst[j..t-1]`. Flipping
/// high bits before reading lower ones keeps every control on the original
/// values; the carry past bit `n - 1` is dropped, which is the mod-`2^n`
/// reduction. `extra_control` threads one additional control through every
/// gate (used for the partial products of QMUL).
fn push_qadd_gates(
    gates: &mut Vec<Gate>,
    src: &[usize],
    dst: &[usize],
    extra_control: Option<usize>,
) {
    let n = src.len();
    for j in 0..n {
        for t in (j..n).rev() {
            let mut controls = vec![src[j]];
            controls.extend_from_slice(&dst[j..t]);
            controls.extend(extra_control);
            gates.push(Gate::mcx(controls, dst[t]));
        }
    }
}

/// Emit the gates of `|b>|0> -> |(2b) mod 2^n>|msb(b)>`: a swap cascade
/// moving every qubit one place toward the MSB, the old MSB landing in the
/// ancilla and the ancilla's |0> entering at the bottom.
fn push_qleft_gates(gates: &mut Vec<Gate>, reg: &[usize], ancilla: usize) {
    let n = reg.len();
    gates.push(Gate::swap(ancilla, reg[n - 1]));
    for t in (1..n).rev() {
        gates.push(Gate::swap(reg[t], reg[t - 1]));
    }
}

/// Emit the gates of `|a>|b>|0>|0> -> |a>|b>|(a*b) mod 2^n>|0>`: for each
/// bit `a[i]` a QADD of the current `b` into `product` with `a[i]` as an
/// extra control, a QLEFT doubling `b` between iterations, and the forward
/// shifts undone afterwards so `b` and the ancillas return to their inputs.
fn push_qmul_gates(
    gates: &mut Vec<Gate>,
    a: &[usize],
    b: &[usize],
    product: &[usize],
    ancillas: &[usize],
) {
    let n = a.len();
    for i in 0..n {
        push_qadd_gates(gates, b, product, Some(a[i]));
        if i < n - 1 {
            push_qleft_gates(gates, b, ancillas[i]);
        }
    }
    // Uncompute the n - 1 forward shifts in reverse order; each QLEFT is a
    // sequence of swaps, so its inverse is the reversed sequence.
    for i in (0..n - 1).rev() {
        let mut forward = Vec::new();
        push_qleft_gates(&mut forward, b, ancillas[i]);
        gates.extend(forward.into_iter().rev());
    }
}

fn circuit_from_gates(
    width: usize,
    layout: Layout,
    gates: Vec<Gate>,
) -> Result<Circuit, QarithError> {
    let mut circuit = Circuit::new(width, layout)?;
    for gate in gates {
        circuit.push(gate)?;
    }
    Ok(circuit)
}

/// Quantum modular adder on explicit registers: maps `|a>|b>` to
/// `|a>|(a+b) mod 2^n>` with the source register unchanged.
pub fn build_qadd(width: usize, src: &[usize], dst: &[usize]) -> Result<Circuit, QarithError> {
    if src.is_empty() || src.len() != dst.len() {
        return Err(QarithError::RegisterWidth {
            name: "dst",
            expected: src.len().max(1),
            got: dst.len(),
        });
    }
    check_disjoint("src", src, "dst", dst)?;
    let layout = Layout::new()
        .with("a", src.to_vec())
        .and_then(|l| l.with("b", dst.to_vec()))
        .map_err(QarithError::from)?;
    let mut gates = Vec::new();
    push_qadd_gates(&mut gates, src, dst, None);
    circuit_from_gates(width, layout, gates)
}

/// Quantum left shift on explicit registers: maps `|b>|0>` to
/// `|(2b) mod 2^n>|msb(b)>`. The ancilla output is garbage until uncomputed.
pub fn build_qleft(width: usize, reg: &[usize], ancilla: usize) -> Result<Circuit, QarithError> {
    if reg.is_empty() {
        return Err(QarithError::ZeroWidth);
    }
    check_disjoint("b", reg, "ancilla", &[ancilla])?;
    let layout = Layout::new()
        .with("b", reg.to_vec())
        .and_then(|l| l.with("ancilla", vec![ancilla]))
        .map_err(QarithError::from)?;
    let mut gates = Vec::new();
    push_qleft_gates(&mut gates, reg, ancilla);
    circuit_from_gates(width, layout, gates)
}

/// Quantum modular multiplier on explicit registers: maps `|a>|b>|0>|0>` to
/// `|a>|b>|(a*b) mod 2^n>|0>` with `b` and the `n - 1` shift ancillas
/// restored by uncomputing.
pub fn build_qmul(
    width: usize,
    a: &[usize],
    b: &[usize],
    product: &[usize],
    ancillas: &[usize],
) -> Result<Circuit, QarithError> {
    let n = a.len();
    if n == 0 {
        return Err(QarithError::ZeroWidth);
    }
    for (name, reg, expected) in [
        ("b", b, n),
        ("product", product, n),
        ("shift", ancillas, n - 1),
    ] {
        if reg.len() != expected {
            return Err(QarithError::RegisterWidth {
                name,
                expected,
                got: reg.len(),
            });
        }
    }
    let named: [(&'static str, &[usize]); 4] =
        [("a", a), ("b", b), ("product", product), ("shift", ancillas)];
    for (i, (name_a, reg_a)) in named.iter().enumerate() {
        for (name_b, reg_b) in named.iter().skip(i + 1) {
            check_disjoint(name_a, reg_a, name_b, reg_b)?;
        }
    }
    let layout = Layout::new()
        .with("a", a.to_vec())
        .and_then(|l| l.with("b", b.to_vec()))
        .and_then(|l| l.with("product", product.to_vec()))
        .and_then(|l| l.with("shift", ancillas.to_vec()))
        .map_err(QarithError::from)?;
    let mut gates = Vec::new();
    push_qmul_gates(&mut gates, a, b, product, ancillas);
    circuit_from_gates(width, layout, gates)
}

/// One filter section: maps `|w>|x_in>|d>|0>|0>` to
/// `|w>|x_in>|d>|x_out>|0>` with `x_out = (x_in + w*d) mod 2^n`.
/// QMUL accumulates `w*d` into the product register, then QADD folds the
/// section input in; every input register is preserved and the shift
/// ancillas end restored to |0>.
pub fn build_qmod_section(layout: &QmodLayout) -> Circuit {
    let mut gates = Vec::new();
    push_qmul_gates(
        &mut gates,
        layout.w(),
        layout.delay(),
        layout.product(),
        layout.shift(),
    );
    push_qadd_gates(&mut gates, layout.x_in(), layout.product(), None);
    circuit_from_gates(layout.width(), layout.to_layout(), gates)
        .expect("validated layout yields a well-formed circuit")
}

/// Register names of one section inside an unrolled cascade.
fn section_names(i: usize) -> (String, String, String) {
    (format!("w{i}"), format!("delay{i}"), format!("product{i}"))
}

/// Unrolled oscillator: a cascade of `sections` QMOD sections in which
/// section `i`'s product register feeds section `i + 1`'s input. The first
/// section occupies `5n - 1` qubits; each later one adds `3n` fresh qubits
/// (its coefficient, delay and product registers) and reuses the restored
/// shift ancillas. Registers are exposed as `x_in`, `shift` and per-section
/// `w{i}` / `delay{i}` / `product{i}`.
pub fn build_unrolled(n: usize, sections: usize) -> Result<Circuit, QarithError> {
    if n == 0 {
        return Err(QarithError::ZeroWidth);
    }
    if sections == 0 {
        return Err(QarithError::ZeroSamples);
    }
    let width = unrolled_width(n, sections);
    let block = |start: usize, len: usize| (start..start + len).collect::<Vec<_>>();

    let shift = block(4 * n, n - 1);
    let mut layout = Layout::new()
        .with("x_in", block(n, n))
        .and_then(|l| l.with("shift", shift.clone()))
        .map_err(QarithError::from)?;

    let mut gates = Vec::new();
    let mut input = block(n, n);
    let mut next_free = 5 * n - 1;
    for i in 1..=sections {
        let (w, delay, product) = if i == 1 {
            (block(0, n), block(2 * n, n), block(3 * n, n))
        } else {
            let w = block(next_free, n);
            let delay = block(next_free + n, n);
            let product = block(next_free + 2 * n, n);
            next_free += 3 * n;
            (w, delay, product)
        };
        let (w_name, d_name, p_name) = section_names(i);
        layout = layout
            .with(&w_name, w.clone())
            .and_then(|l| l.with(&d_name, delay.clone()))
            .and_then(|l| l.with(&p_name, product.clone()))
            .map_err(QarithError::from)?;
        push_qmul_gates(&mut gates, &w, &delay, &product, &shift);
        push_qadd_gates(&mut gates, &input, &product, None);
        input = product;
    }
    circuit_from_gates(width, layout, gates)
}

/// Width of the unrolled cascade: `5n - 1` for the first section plus `3n`
/// per additional one.
pub fn unrolled_width(n: usize, sections: usize) -> usize {
    5 * n - 1 + 3 * n * sections.saturating_sub(1)
}

/// Qubit count for a `k`-sample generator:
/// `5n - 1` for a single sample, `5n - 1 + 3nk` for `k >= 2`.
pub fn qubit_count(k: usize, n: usize) -> Result<usize, QarithError> {
    if k == 0 {
        return Err(QarithError::ZeroSamples);
    }
    if n == 0 {
        return Err(QarithError::ZeroWidth);
    }
    Ok(if k == 1 { 5 * n - 1 } else { 5 * n - 1 + 3 * n * k })
}

/// Gate census of one circuit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GateStats {
    /// Counts keyed by gate kind: `x`, `swap`, `mcx`.
    pub gate_count_by_kind: BTreeMap<&'static str, usize>,
    /// MCX counts keyed by control count (1 = CX, 2 = CCX, ...).
    pub mcx_count_by_arity: BTreeMap<usize, usize>,
    /// Critical-path length with every gate, MCX included, costing depth 1.
    /// Gates on disjoint qubits are scheduled in parallel.
    pub depth: usize,
    pub qubit_count: usize,
}

impl GateStats {
    pub fn total_gates(&self) -> usize {
        self.gate_count_by_kind.values().sum()
    }

    pub fn mcx_total(&self) -> usize {
        self.mcx_count_by_arity.values().sum()
    }
}

impl std::fmt::Display for GateStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "qubits: {}", self.qubit_count)?;
        writeln!(f, "gates: {}", self.total_gates())?;
        for (kind, count) in &self.gate_count_by_kind {
            writeln!(f, "  {kind}: {count}")?;
        }
        for (arity, count) in &self.mcx_count_by_arity {
            writeln!(f, "  mcx[{arity} controls]: {count}")?;
        }
        write!(f, "depth: {}", self.depth)
    }
}

/// Exact gate counts and scheduled depth of a circuit.
pub fn stats(circuit: &Circuit) -> GateStats {
    let mut s = GateStats {
        qubit_count: circuit.width(),
        ..GateStats::default()
    };
    let mut ready = vec![0usize; circuit.width()];
    for gate in circuit.gates() {
        let kind = match gate {
            Gate::X { .. } => "x",
            Gate::Swap { .. } => "swap",
            Gate::Mcx { .. } => "mcx",
        };
        *s.gate_count_by_kind.entry(kind).or_insert(0) += 1;
        if let Gate::Mcx { controls, .. } = gate {
            *s.mcx_count_by_arity.entry(controls.len()).or_insert(0) += 1;
        }
        let qubits = gate.qubits();
        let level = qubits.iter().map(|&q| ready[q]).max().unwrap_or(0) + 1;
        for q in qubits {
            ready[q] = level;
        }
        s.depth = s.depth.max(level);
    }
    s
}
