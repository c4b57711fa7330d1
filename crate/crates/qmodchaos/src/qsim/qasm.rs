//! OpenQASM 2.0 subset export for the reversible gate set.

use super::{Circuit, Gate};
use std::fmt::Write;

/// Emit a circuit as OpenQASM 2.0 text.
///
/// `x`, `cx`, `ccx` and `swap` map onto their qelib1 gates. A
/// multi-controlled X with three or more controls has no qelib1 primitive
/// and is emitted as a `// mcx k` annotation instead of a decomposition.
pub fn to_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.width());
    for (name, qubits) in circuit.layout().iter() {
        let list = qubits
            .iter()
            .map(|q| format!("q[{q}]"))
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(out, "// register {name}: {list}");
    }
    for gate in circuit.gates() {
        match gate {
            Gate::X { target } => {
                let _ = writeln!(out, "x q[{target}];");
            }
            Gate::Swap { a, b } => {
                let _ = writeln!(out, "swap q[{a}],q[{b}];");
            }
            Gate::Mcx { controls, target } => match controls.as_slice() {
                [c] => {
                    let _ = writeln!(out, "cx q[{c}],q[{target}];");
                }
                [c0, c1] => {
                    let _ = writeln!(out, "ccx q[{c0}],q[{c1}],q[{target}];");
                }
                many => {
                    let list = many
                        .iter()
                        .map(|q| format!("q[{q}]"))
                        .collect::<Vec<_>>()
                        .join(",");
                    let _ = writeln!(out, "// mcx {} {list} -> q[{target}];", many.len());
                }
            },
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Layout;

    #[test]
    fn emits_qelib_gates_and_mcx_annotation() {
        let layout = Layout::new().with("a", vec![0, 1]).unwrap();
        let mut c = Circuit::new(4, layout).unwrap();
        c.push(Gate::x(0)).unwrap();
        c.push(Gate::cx(0, 1)).unwrap();
        c.push(Gate::ccx(0, 1, 2)).unwrap();
        c.push(Gate::swap(2, 3)).unwrap();
        c.push(Gate::mcx(vec![0, 1, 2], 3)).unwrap();
        let text = to_qasm(&c);
        assert!(text.starts_with("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\n"));
        assert!(text.contains("// register a: q[0],q[1]\n"));
        assert!(text.contains("x q[0];\n"));
        assert!(text.contains("cx q[0],q[1];\n"));
        assert!(text.contains("ccx q[0],q[1],q[2];\n"));
        assert!(text.contains("swap q[2],q[3];\n"));
        assert!(text.contains("// mcx 3 q[0],q[1],q[2] -> q[3];\n"));
    }
}
