//! OpenQASM 2.0 export and import for the `h`/`rz`/`rx`/`cx` gate set.

use crate::circuit::{Circuit, Gate, ParamSlot};
use crate::error::{Error, Result};

/// Serializes a fully bound circuit. Angles print in Rust's shortest
/// round-trip form, so `parse` reproduces the circuit exactly.
pub fn export_qasm(c: &Circuit) -> Result<String> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str("// qubit 0 is the least-significant bit of measured bitstrings\n");
    out.push_str(&format!("qreg q[{}];\n", c.width()));
    for gate in c.gates() {
        match *gate {
            Gate::H { q } => out.push_str(&format!("h q[{q}];\n")),
            Gate::Rz { q, angle } => out.push_str(&format!("rz({}) q[{q}];\n", literal(angle)?)),
            Gate::Rx { q, angle } => out.push_str(&format!("rx({}) q[{q}];\n", literal(angle)?)),
            Gate::Cnot { control, target } => {
                out.push_str(&format!("cx q[{control}],q[{target}];\n"))
            }
        }
    }
    Ok(out)
}

fn literal(slot: ParamSlot) -> Result<f64> {
    match slot {
        ParamSlot::Literal(v) => Ok(v),
        ParamSlot::Gamma { layer, .. } => Err(Error::UnboundParameter(format!("gamma_{}", layer + 1))),
        ParamSlot::Beta { layer, .. } => Err(Error::UnboundParameter(format!("beta_{}", layer + 1))),
    }
}

/// Parses the subset emitted by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut width: Option<usize> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut saw_header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::QasmParse { line, message };
        let stmt = match raw.find("//") {
            Some(pos) => raw[..pos].trim(),
            None => raw.trim(),
        };
        if stmt.is_empty() {
            continue;
        }
        let stmt = stmt
            .strip_suffix(';')
            .ok_or_else(|| err("statement must end with `;`".into()))?
            .trim();
        if !saw_header {
            if stmt != "OPENQASM 2.0" {
                return Err(err("expected `OPENQASM 2.0;` header".into()));
            }
            saw_header = true;
            continue;
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg") {
            if width.is_some() {
                return Err(err("duplicate qreg declaration".into()));
            }
            width = Some(parse_qubit(rest.trim(), line)?);
            continue;
        }
        let width_now =
            width.ok_or_else(|| err("gate before qreg declaration".into()))?;
        let gate = parse_gate(stmt, line)?;
        if gate.qubits().iter().any(|&q| q >= width_now) {
            return Err(err(format!("qubit index out of range in `{stmt}`")));
        }
        gates.push(gate);
    }
    if !saw_header {
        return Err(Error::QasmParse { line: 1, message: "missing OPENQASM header".into() });
    }
    let width = width.ok_or(Error::QasmParse { line: 1, message: "missing qreg".into() })?;
    let mut circuit = Circuit::new(width, 0);
    circuit.extend(gates);
    Ok(circuit)
}

fn parse_qubit(expr: &str, line: usize) -> Result<usize> {
    let err = |message: String| Error::QasmParse { line, message };
    let inner = expr
        .strip_prefix("q[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(format!("expected q[<index>], got `{expr}`")))?;
    inner.parse().map_err(|e| err(format!("bad qubit index `{inner}`: {e}")))
}

fn parse_gate(stmt: &str, line: usize) -> Result<Gate> {
    let err = |message: String| Error::QasmParse { line, message };
    let (head, args) = stmt
        .split_once(' ')
        .ok_or_else(|| err(format!("malformed gate statement `{stmt}`")))?;
    let args = args.trim();
    if head == "h" {
        return Ok(Gate::H { q: parse_qubit(args, line)? });
    }
    if head == "cx" {
        let (a, b) = args
            .split_once(',')
            .ok_or_else(|| err("cx needs two qubits".into()))?;
        let control = parse_qubit(a.trim(), line)?;
        let target = parse_qubit(b.trim(), line)?;
        if control == target {
            return Err(err("cx control and target must differ".into()));
        }
        return Ok(Gate::Cnot { control, target });
    }
    for (name, is_rz) in [("rz", true), ("rx", false)] {
        if let Some(rest) = head.strip_prefix(name) {
            let angle_text = rest
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| err(format!("expected {name}(<angle>), got `{head}`")))?;
            let angle: f64 = angle_text
                .parse()
                .map_err(|e| err(format!("bad angle `{angle_text}`: {e}")))?;
            let q = parse_qubit(args, line)?;
            let slot = ParamSlot::Literal(angle);
            return Ok(if is_rz { Gate::Rz { q, angle: slot } } else { Gate::Rx { q, angle: slot } });
        }
    }
    Err(err(format!("unsupported gate `{head}`")))
}
