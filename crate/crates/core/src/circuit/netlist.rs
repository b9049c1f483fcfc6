//! Gate-list circuits and the netlist text format.
//!
//! ```text
//! input a
//! input b
//! gate AND a b -> c
//! gate XOR c !a -> d
//! output d
//! clamp d 1
//! ```

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gadget::GateFn;
use crate::scalar::Scalar;

/// Gate operations accepted in netlists. Any catalogue function name is
/// accepted as well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateOp {
    Not,
    Copy,
    Two(GateFn),
}

impl GateOp {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "NOT" => Ok(GateOp::Not),
            "COPY" | "BUF" => Ok(GateOp::Copy),
            _ => name
                .parse::<GateFn>()
                .map(GateOp::Two)
                .map_err(|_| Error::UnknownGate(name.to_string())),
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateOp::Not | GateOp::Copy => 1,
            GateOp::Two(_) => 2,
        }
    }

    pub fn name(self) -> String {
        match self {
            GateOp::Not => "NOT".into(),
            GateOp::Copy => "COPY".into(),
            GateOp::Two(f) => f.name().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arg {
    pub wire: String,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub op: GateOp,
    pub args: Vec<Arg>,
    pub out: String,
}

impl Gate {
    /// The two-input function computed, with argument polarities folded in.
    /// Single-input gates read only `x1`.
    pub fn function(&self) -> GateFn {
        let base = match self.op {
            GateOp::Not => GateFn::NotX1,
            GateOp::Copy => GateFn::CopyX1,
            GateOp::Two(f) => f,
        };
        self.args
            .iter()
            .enumerate()
            .filter(|(_, a)| a.negated)
            .fold(base, |f, (i, _)| f.negate_input(i))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clamp<S> {
    pub wire: String,
    pub value: bool,
    pub weight: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<S> {
    pub inputs: Vec<String>,
    pub gates: Vec<Gate>,
    pub outputs: Vec<String>,
    pub clamps: Vec<Clamp<S>>,
}

impl<S: Scalar> Default for Circuit<S> {
    fn default() -> Self {
        Self::new()
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '.' || c == '[' || c == ']')
        && !s.starts_with('!')
}

impl<S: Scalar> Circuit<S> {
    pub fn new() -> Self {
        Circuit {
            inputs: Vec::new(),
            gates: Vec::new(),
            outputs: Vec::new(),
            clamps: Vec::new(),
        }
    }

    fn defined(&self) -> BTreeSet<&str> {
        self.inputs
            .iter()
            .map(String::as_str)
            .chain(self.gates.iter().map(|g| g.out.as_str()))
            .collect()
    }

    pub fn has_wire(&self, name: &str) -> bool {
        self.inputs.iter().any(|w| w == name) || self.gates.iter().any(|g| g.out == name)
    }

    pub fn add_input(&mut self, name: &str) -> Result<()> {
        if !valid_name(name) {
            return Err(Error::Wire(format!("invalid wire name {name:?}")));
        }
        if self.has_wire(name) {
            return Err(Error::Wire(format!("wire {name} defined twice")));
        }
        self.inputs.push(name.to_string());
        Ok(())
    }

    /// Appends a gate; `args` use a leading `!` for negated polarity.
    pub fn add_gate(&mut self, op: GateOp, args: &[&str], out: &str) -> Result<()> {
        if args.len() != op.arity() {
            return Err(Error::Wire(format!(
                "{} takes {} argument(s), got {}",
                op.name(),
                op.arity(),
                args.len()
            )));
        }
        let defined = self.defined();
        let mut parsed = Vec::with_capacity(args.len());
        for a in args {
            let (negated, wire) = match a.strip_prefix('!') {
                Some(w) => (true, w),
                None => (false, *a),
            };
            if !defined.contains(wire) {
                return Err(Error::Wire(format!("wire {wire} used before it is defined")));
            }
            if parsed.iter().any(|p: &Arg| p.wire == wire) {
                return Err(Error::Wire(format!("wire {wire} passed twice to one gate")));
            }
            parsed.push(Arg {
                wire: wire.to_string(),
                negated,
            });
        }
        if !valid_name(out) {
            return Err(Error::Wire(format!("invalid wire name {out:?}")));
        }
        if defined.contains(out) {
            return Err(Error::Wire(format!("wire {out} defined twice")));
        }
        self.gates.push(Gate {
            op,
            args: parsed,
            out: out.to_string(),
        });
        Ok(())
    }

    pub fn add_output(&mut self, name: &str) -> Result<()> {
        if !self.has_wire(name) {
            return Err(Error::Wire(format!("output {name} is not a wire")));
        }
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
        Ok(())
    }

    pub fn add_clamp(&mut self, wire: &str, value: bool, weight: S) -> Result<()> {
        if !self.has_wire(wire) {
            return Err(Error::Wire(format!("clamp on unknown wire {wire}")));
        }
        if !weight.is_positive() {
            return Err(Error::Domain("clamp weight must be positive".into()));
        }
        self.clamps.push(Clamp {
            wire: wire.to_string(),
            value,
            weight,
        });
        Ok(())
    }

    /// Parses the netlist text format. Errors carry line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Circuit::new();
        let mut any = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            any = true;
            let at = |e: Error| match e {
                Error::Wire(m) => Error::Wire(format!("line {line_no}: {m}")),
                Error::UnknownGate(g) => Error::UnknownGate(format!("{g} (line {line_no})")),
                Error::Domain(m) => Error::parse(line_no, m),
                other => other,
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "input" => {
                    if toks.len() < 2 {
                        return Err(Error::parse(line_no, "`input` needs a wire name"));
                    }
                    for w in &toks[1..] {
                        c.add_input(w).map_err(at)?;
                    }
                }
                "output" => {
                    if toks.len() < 2 {
                        return Err(Error::parse(line_no, "`output` needs a wire name"));
                    }
                    for w in &toks[1..] {
                        c.add_output(w).map_err(at)?;
                    }
                }
                "gate" => {
                    let arrow = toks
                        .iter()
                        .position(|t| *t == "->")
                        .ok_or_else(|| Error::parse(line_no, "gate line needs `-> out`"))?;
                    if toks.len() < 3 || arrow < 2 || arrow + 2 != toks.len() {
                        return Err(Error::parse(line_no, "expected `gate OP args... -> out`"));
                    }
                    let op = GateOp::parse(toks[1]).map_err(at)?;
                    c.add_gate(op, &toks[2..arrow], toks[arrow + 1]).map_err(at)?;
                }
                "clamp" => {
                    if !(3..=4).contains(&toks.len()) {
                        return Err(Error::parse(line_no, "expected `clamp wire 0|1 [weight]`"));
                    }
                    let value = match toks[2] {
                        "0" => false,
                        "1" => true,
                        v => return Err(Error::parse(line_no, format!("clamp value {v:?} is not 0 or 1"))),
                    };
                    let weight = match toks.get(3) {
                        Some(w) => {
                            S::parse_text(w).ok_or_else(|| Error::parse(line_no, format!("bad weight {w:?}")))?
                        }
                        None => S::one(),
                    };
                    c.add_clamp(toks[1], value, weight).map_err(at)?;
                }
                other => return Err(Error::parse(line_no, format!("unknown statement `{other}`"))),
            }
        }
        if !any {
            return Err(Error::parse(1, "netlist is empty"));
        }
        Ok(c)
    }

    /// Netlist text that parses back to this circuit.
    pub fn to_netlist(&self) -> String {
        let mut out = String::new();
        for w in &self.inputs {
            out.push_str(&format!("input {w}\n"));
        }
        for g in &self.gates {
            let args: Vec<String> = g
                .args
                .iter()
                .map(|a| {
                    if a.negated {
                        format!("!{}", a.wire)
                    } else {
                        a.wire.clone()
                    }
                })
                .collect();
            out.push_str(&format!("gate {} {} -> {}\n", g.op.name(), args.join(" "), g.out));
        }
        for w in &self.outputs {
            out.push_str(&format!("output {w}\n"));
        }
        for cl in &self.clamps {
            let w = if cl.weight == S::one() {
                String::new()
            } else {
                format!(" {}", cl.weight.to_text())
            };
            out.push_str(&format!("clamp {} {}{}\n", cl.wire, u8::from(cl.value), w));
        }
        out
    }

    /// Evaluates every wire for the given input values.
    pub fn execute(&self, inputs: &[bool]) -> Result<BTreeMap<String, bool>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::Dimension {
                expected: self.inputs.len(),
                found: inputs.len(),
            });
        }
        let mut values: BTreeMap<String, bool> = self.inputs.iter().cloned().zip(inputs.iter().copied()).collect();
        for g in &self.gates {
            let x1 = values[&g.args[0].wire];
            let x2 = g.args.get(1).is_some_and(|a| values[&a.wire]);
            values.insert(g.out.clone(), g.function().eval(x1, x2));
        }
        Ok(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64 as Q;

    const E1: &str = "input x1\ninput x2\ninput x3\ngate AND x1 x2 -> y\ngate OR y x3 -> z\noutput z\n";

    #[test]
    fn parse_and_execute() {
        let c = Circuit::<Q>::parse(E1).unwrap();
        assert_eq!(c.inputs, vec!["x1", "x2", "x3"]);
        assert_eq!(c.gates.len(), 2);
        let v = c.execute(&[true, true, false]).unwrap();
        assert!(v["y"] && v["z"]);
        let v = c.execute(&[true, false, false]).unwrap();
        assert!(!v["y"] && !v["z"]);
        assert_eq!(Circuit::<Q>::parse(&c.to_netlist()).unwrap(), c);
    }

    #[test]
    fn polarity_selects_variant() {
        let c = Circuit::<Q>::parse("input a b\ngate AND !a b -> c\ngate XOR c !b -> d\ngate NOT !d -> e\n").unwrap();
        assert_eq!(c.gates[0].function(), GateFn::Nx1AndX2);
        assert_eq!(c.gates[1].function(), GateFn::Eqv);
        assert_eq!(c.gates[2].function(), GateFn::CopyX1);
    }

    #[test]
    fn wire_errors() {
        let err = |t: &str| Circuit::<Q>::parse(t).unwrap_err();
        assert!(matches!(err("input a\ngate AND a b -> c\n"), Error::Wire(_)));
        assert!(matches!(err("input a b\ngate AND a a -> c\n"), Error::Wire(_)));
        assert!(matches!(err("input a b\ngate AND a b -> a\n"), Error::Wire(_)));
        assert!(matches!(err("input a a\n"), Error::Wire(_)));
        assert!(matches!(err("input a\nclamp b 1\n"), Error::Wire(_)));
        assert!(matches!(err("input a\noutput q\n"), Error::Wire(_)));
        assert!(matches!(err("input a b\ngate MUX a b -> c\n"), Error::UnknownGate(_)));
        assert!(matches!(err("input a\ngate NOT a b -> c\n"), Error::Wire(_)));
    }

    #[test]
    fn syntax_errors_have_lines() {
        let err = |t: &str| Circuit::<Q>::parse(t).unwrap_err();
        assert!(matches!(err(""), Error::Parse { line: 1, .. }));
        assert!(matches!(err("# only comments\n\n"), Error::Parse { .. }));
        assert!(matches!(err("input a\ngate AND a\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("input a\nclamp a 2\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("input a\nwire a\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("input a\nclamp a 1 -1\n"), Error::Parse { line: 2, .. }));
    }
}
