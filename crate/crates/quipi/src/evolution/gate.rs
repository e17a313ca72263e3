use crate::error::{Error, Result};
use std::fmt;

/// Gate set of the compiled evolution. `Hxp` is `exp(-iθ X_q ⊗ p)`, `Qp` is `exp(-iθ p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    Cnot { control: usize, target: usize },
    Hxp { qubit: usize, theta: f64 },
    Qp { theta: f64 },
}

impl Gate {
    /// Qubits the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Hxp { qubit, .. } => vec![qubit],
            Gate::Qp { .. } => vec![],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Hxp { qubit, theta } => write!(f, "HXP {qubit} {theta:.16e}"),
            Gate::Qp { theta } => write!(f, "QP {theta:.16e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub qubit_count: usize,
    pub trotter_steps: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubit_count: usize, trotter_steps: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Self { qubit_count, trotter_steps, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            let qs = g.qubits();
            if qs.iter().any(|&q| q >= self.qubit_count) {
                return Err(Error::InvalidArgument(format!("gate '{g}' out of range for {} qubits", self.qubit_count)));
            }
            if let Gate::Cnot { control, target } = g {
                if control == target {
                    return Err(Error::InvalidArgument(format!("gate '{g}' has control == target")));
                }
            }
            if let Gate::Hxp { theta, .. } | Gate::Qp { theta } = g {
                if !theta.is_finite() {
                    return Err(Error::InvalidArgument(format!("gate '{g}' has a non-finite angle")));
                }
            }
        }
        Ok(())
    }

    /// One gate per line, preceded by a `#` header carrying the register size.
    pub fn to_text(&self) -> String {
        let mut s = format!("# qubits {} trotter_steps {}\n", self.qubit_count, self.trotter_steps);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Without a header the register size is inferred from the gates.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let mut header: Option<(usize, usize)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: &str| Error::Parse { line: i + 1, msg: format!("{msg}: '{line}'") };
            if let Some(rest) = line.strip_prefix('#') {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if let ["qubits", n, "trotter_steps", t] = toks.as_slice() {
                    header = Some((n.parse().map_err(|_| err("bad qubit count"))?, t.parse().map_err(|_| err("bad step count"))?));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let q = |k: usize| -> Result<usize> { toks.get(k).ok_or_else(|| err("missing operand"))?.parse().map_err(|_| err("bad qubit index")) };
            let th = |k: usize| -> Result<f64> { toks.get(k).ok_or_else(|| err("missing angle"))?.parse().map_err(|_| err("bad angle")) };
            let (gate, arity) = match toks[0].to_ascii_uppercase().as_str() {
                "H" => (Gate::H(q(1)?), 2),
                "S" => (Gate::S(q(1)?), 2),
                "SDG" => (Gate::Sdg(q(1)?), 2),
                "CNOT" => (Gate::Cnot { control: q(1)?, target: q(2)? }, 3),
                "HXP" => (Gate::Hxp { qubit: q(1)?, theta: th(2)? }, 3),
                "QP" => (Gate::Qp { theta: th(1)? }, 2),
                _ => return Err(err("unknown gate")),
            };
            if toks.len() != arity {
                return Err(err("wrong operand count"));
            }
            gates.push(gate);
        }
        let inferred = gates.iter().flat_map(|g| g.qubits()).max().map_or(1, |m| m + 1);
        let (qubit_count, trotter_steps) = header.unwrap_or((inferred, 1));
        Self::new(qubit_count, trotter_steps, gates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let c = Circuit::new(
            3,
            2,
            vec![
                Gate::H(0),
                Gate::Sdg(2),
                Gate::Cnot { control: 2, target: 0 },
                Gate::Hxp { qubit: 2, theta: -0.1234567890123 },
                Gate::Qp { theta: 1.0 / 3.0 },
                Gate::S(1),
            ],
        )
        .unwrap();
        let back = Circuit::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parse_errors_and_inference() {
        assert!(Circuit::parse("FOO 1").is_err());
        assert!(Circuit::parse("CNOT 1").is_err());
        assert!(Circuit::parse("H 0 1").is_err());
        assert!(Circuit::parse("# qubits 1 trotter_steps 1\nH 3").is_err());
        let c = Circuit::parse("# comment\nH 2\n\nQP 0.5\n").unwrap();
        assert_eq!(c.qubit_count, 3);
        assert_eq!(c.gates.len(), 2);
    }
}
