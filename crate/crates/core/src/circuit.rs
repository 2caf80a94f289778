//! Pure-Circuit instances, their satisfaction rules, and the m_δ decoding.

use crate::error::{input, Error, Result};
use crate::io::VarMap;
use crate::network::FinancialNetwork;
use crate::rational::Rational;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Not,
    Or,
    Purify,
}

impl GateKind {
    pub fn arity(self) -> (usize, usize) {
        match self {
            GateKind::Not => (1, 1),
            GateKind::Or => (2, 1),
            GateKind::Purify => (1, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Or => "OR",
            GateKind::Purify => "PURIFY",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Gate {
    pub fn new(kind: GateKind, inputs: &[&str], outputs: &[&str]) -> Result<Self> {
        let (ni, no) = kind.arity();
        if inputs.len() != ni || outputs.len() != no {
            return input(format!("{} takes {ni} input(s) and {no} output(s)", kind.name()));
        }
        Ok(Self {
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.kind.name(), self.inputs.join(" "), self.outputs.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Zero,
    One,
    Bottom,
}

impl Value {
    pub const ALL: [Value; 3] = [Value::Zero, Value::One, Value::Bottom];

    fn is_bit(self) -> bool {
        self != Value::Bottom
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Value::Zero => "0",
            Value::One => "1",
            Value::Bottom => "bot",
        })
    }
}

pub type Assignment = BTreeMap<String, Value>;

/// Largest instance [`PureCircuit::brute_force_solve`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Variables plus gates; no two gates share an output variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureCircuit {
    variables: BTreeSet<String>,
    gates: Vec<Gate>,
}

fn gate_holds(gate: &Gate, value: impl Fn(&str) -> Value) -> bool {
    let ins: Vec<Value> = gate.inputs.iter().map(|v| value(v)).collect();
    let outs: Vec<Value> = gate.outputs.iter().map(|v| value(v)).collect();
    match gate.kind {
        GateKind::Not => match ins[0] {
            Value::Zero => outs[0] == Value::One,
            Value::One => outs[0] == Value::Zero,
            Value::Bottom => true,
        },
        GateKind::Or => {
            if ins[0] == Value::One || ins[1] == Value::One {
                outs[0] == Value::One
            } else if ins[0] == Value::Zero && ins[1] == Value::Zero {
                outs[0] == Value::Zero
            } else {
                true
            }
        }
        GateKind::Purify => match ins[0] {
            Value::Zero => outs.iter().all(|&o| o == Value::Zero),
            Value::One => outs.iter().all(|&o| o == Value::One),
            Value::Bottom => outs.iter().any(|&o| o.is_bit()),
        },
    }
}

impl PureCircuit {
    pub fn new(gates: Vec<Gate>) -> Result<Self> {
        let mut outputs = BTreeSet::new();
        let mut variables = BTreeSet::new();
        for gate in &gates {
            let (ni, no) = gate.kind.arity();
            if gate.inputs.len() != ni || gate.outputs.len() != no {
                return input(format!("malformed gate {gate}"));
            }
            let own: BTreeSet<&String> = gate.outputs.iter().collect();
            if own.len() != gate.outputs.len() {
                return input(format!("gate {gate} repeats an output variable"));
            }
            for out in &gate.outputs {
                if !outputs.insert(out.clone()) {
                    return input(format!("variable {out:?} is the output of two gates"));
                }
            }
            variables.extend(gate.inputs.iter().cloned());
            variables.extend(gate.outputs.iter().cloned());
        }
        Ok(Self { variables, gates })
    }

    /// One gate per line: `NOT u w`, `OR u v w`, `PURIFY u v w`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let Some((&head, rest)) = tokens.split_first() else {
                continue;
            };
            let kind = match head.to_ascii_uppercase().as_str() {
                "NOT" => GateKind::Not,
                "OR" => GateKind::Or,
                "PURIFY" => GateKind::Purify,
                other => return input(format!("line {}: unknown gate {other:?}", lineno + 1)),
            };
            let (ni, no) = kind.arity();
            if rest.len() != ni + no {
                return input(format!("line {}: {head} needs {} variables", lineno + 1, ni + no));
            }
            gates.push(Gate::new(kind, &rest[..ni], &rest[ni..])?);
        }
        Self::new(gates)
    }

    pub fn variables(&self) -> &BTreeSet<String> {
        &self.variables
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Index of the first gate the assignment violates, or `None` if it satisfies all.
    pub fn first_violation(&self, x: &Assignment) -> Result<Option<usize>> {
        if let Some(missing) = self.variables.iter().find(|v| !x.contains_key(*v)) {
            return input(format!("assignment has no value for {missing:?}"));
        }
        Ok(self.gates.iter().position(|g| !gate_holds(g, |v| x[v])))
    }

    pub fn check_satisfies(&self, x: &Assignment) -> Result<bool> {
        Ok(self.first_violation(x)?.is_none())
    }

    /// Depth-first search over variables in lexicographic order with values
    /// tried as 0, 1, ⊥; every gate is checked once all its variables are set.
    fn search(&self, mut visit: impl FnMut(&[Value]) -> bool) -> Result<()> {
        let vars: Vec<&String> = self.variables.iter().collect();
        if vars.len() > BRUTE_FORCE_LIMIT {
            return Err(Error::Size(format!(
                "{} variables exceed the brute-force limit of {BRUTE_FORCE_LIMIT}",
                vars.len()
            )));
        }
        let pos: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        // Gates become checkable once their last variable (in search order) is set.
        let mut ready: Vec<Vec<&Gate>> = vec![Vec::new(); vars.len()];
        for g in &self.gates {
            let last = g.inputs.iter().chain(&g.outputs).map(|v| pos[v.as_str()]).max().unwrap_or(0);
            ready[last].push(g);
        }
        let mut values = vec![Value::Zero; vars.len()];
        let mut choice = vec![0usize; vars.len()];
        let mut depth = 0usize;
        if vars.is_empty() {
            visit(&values);
            return Ok(());
        }
        loop {
            if choice[depth] == Value::ALL.len() {
                choice[depth] = 0;
                if depth == 0 {
                    return Ok(());
                }
                depth -= 1;
                choice[depth] += 1;
                continue;
            }
            values[depth] = Value::ALL[choice[depth]];
            let ok = ready[depth].iter().all(|g| gate_holds(g, |v| values[pos[v]]));
            if !ok {
                choice[depth] += 1;
            } else if depth + 1 == vars.len() {
                if !visit(&values) {
                    return Ok(());
                }
                choice[depth] += 1;
            } else {
                depth += 1;
            }
        }
    }

    fn to_assignment(&self, values: &[Value]) -> Assignment {
        self.variables.iter().cloned().zip(values.iter().copied()).collect()
    }

    /// The first satisfying assignment in search order.
    pub fn brute_force_solve(&self) -> Result<Assignment> {
        let mut found = None;
        self.search(|values| {
            found = Some(values.to_vec());
            false
        })?;
        let values = found.ok_or_else(|| Error::Property("no satisfying assignment".into()))?;
        Ok(self.to_assignment(&values))
    }

    /// Every satisfying assignment, in search order.
    pub fn all_solutions(&self) -> Result<Vec<Assignment>> {
        let mut all = Vec::new();
        self.search(|values| {
            all.push(values.to_vec());
            true
        })?;
        Ok(all.iter().map(|v| self.to_assignment(v)).collect())
    }
}

/// m_δ: 0 on `[0, 1/2 − δ]`, 1 on `[1/2 + δ, 1]`, ⊥ in between.
pub fn decode_rate(rate: &Rational, delta: &Rational) -> Value {
    let half = crate::rational::ratio(1, 2);
    if *rate <= &half - delta {
        Value::Zero
    } else if *rate >= &half + delta {
        Value::One
    } else {
        Value::Bottom
    }
}

/// Decodes every variable of `varmap` from the bank rates of `net`.
pub fn decode(net: &FinancialNetwork, rates: &[Rational], varmap: &VarMap, delta: &Rational) -> Result<Assignment> {
    net.check_rates(rates)?;
    varmap.iter().map(|(var, bank)| Ok((var.clone(), decode_rate(&rates[net.index_of(bank)?], delta)))).collect()
}

/// Decodes the variables of `circuit`, failing on any variable missing from `varmap`.
pub fn decode_circuit(
    circuit: &PureCircuit,
    net: &FinancialNetwork,
    rates: &[Rational],
    varmap: &VarMap,
    delta: &Rational,
) -> Result<Assignment> {
    if let Some(missing) = circuit.variables().iter().find(|v| !varmap.contains_key(*v)) {
        return input(format!("variable {missing:?} has no bank"));
    }
    decode(net, rates, varmap, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, Rational};

    const SAMPLE_CIRCUIT: &str = "NOT u v\nOR v w y\nPURIFY v u w\n";

    fn assign(pairs: &[(&str, Value)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn parse_and_validate() {
        let c = PureCircuit::parse("# comment\nNOT u w  # trailing\n\nor a b c\n").unwrap();
        assert_eq!(c.gates().len(), 2);
        assert_eq!(c.variables().len(), 5);
        assert!(PureCircuit::parse("NOT u").is_err());
        assert!(PureCircuit::parse("XOR a b c").is_err());
        assert!(PureCircuit::parse("NOT a w\nNOT b w").is_err());
        assert!(PureCircuit::parse("PURIFY a w w").is_err());
    }

    #[test]
    fn sample_circuit_listed_assignment() {
        let c = PureCircuit::parse(SAMPLE_CIRCUIT).unwrap();
        use Value::*;
        let x = assign(&[("u", Bottom), ("v", Bottom), ("w", One), ("y", One)]);
        assert!(c.check_satisfies(&x).unwrap());
        assert!(c.all_solutions().unwrap().contains(&x));
        let first = c.brute_force_solve().unwrap();
        assert_eq!(first, assign(&[("u", Bottom), ("v", Bottom), ("w", Zero), ("y", Zero)]));
        for sol in c.all_solutions().unwrap() {
            assert_eq!((sol["u"], sol["v"]), (Bottom, Bottom));
        }
    }

    #[test]
    fn gate_rules() {
        use Value::*;
        let not = PureCircuit::parse("NOT u w").unwrap();
        assert!(!not.check_satisfies(&assign(&[("u", Zero), ("w", Zero)])).unwrap());
        assert!(not.check_satisfies(&assign(&[("u", Bottom), ("w", Zero)])).unwrap());
        assert!(not.check_satisfies(&assign(&[("u", Zero)])).is_err());
        let pur = PureCircuit::parse("PURIFY u v w").unwrap();
        assert!(!pur.check_satisfies(&assign(&[("u", Bottom), ("v", Bottom), ("w", Bottom)])).unwrap());
        assert!(pur.check_satisfies(&assign(&[("u", Bottom), ("v", Bottom), ("w", One)])).unwrap());
        assert!(!pur.check_satisfies(&assign(&[("u", One), ("v", One), ("w", Zero)])).unwrap());
        let or = PureCircuit::parse("OR a b c").unwrap();
        assert!(or.check_satisfies(&assign(&[("a", Bottom), ("b", Zero), ("c", Bottom)])).unwrap());
        assert!(!or.check_satisfies(&assign(&[("a", Bottom), ("b", One), ("c", Bottom)])).unwrap());
        assert!(!or.check_satisfies(&assign(&[("a", Zero), ("b", Zero), ("c", One)])).unwrap());
    }

    #[test]
    fn brute_force_examples() {
        use Value::*;
        let single = PureCircuit::parse("NOT u w").unwrap();
        assert_eq!(single.brute_force_solve().unwrap(), assign(&[("u", Zero), ("w", One)]));
        // An even NOT cycle has the pure solution u = 0, v = 1.
        let even = PureCircuit::parse("NOT u v\nNOT v u").unwrap();
        assert_eq!(even.brute_force_solve().unwrap(), assign(&[("u", Zero), ("v", One)]));
        let odd = PureCircuit::parse("NOT u v\nNOT v w\nNOT w u").unwrap();
        assert_eq!(odd.all_solutions().unwrap(), vec![assign(&[("u", Bottom), ("v", Bottom), ("w", Bottom)])]);
        let gates: String = (0..21).map(|i| format!("NOT a{i} b{i}\n")).collect();
        assert!(PureCircuit::parse(&gates).unwrap().brute_force_solve().is_err());
    }

    #[test]
    fn decode_bands() {
        let d = ratio(2, 13);
        assert_eq!(decode_rate(&ratio(3, 10), &d), Value::Zero);
        assert_eq!(decode_rate(&ratio(1, 2), &d), Value::Bottom);
        assert_eq!(decode_rate(&(ratio(1, 2) - &d), &d), Value::Zero);
        assert_eq!(decode_rate(&(ratio(1, 2) + &d), &d), Value::One);
        assert_eq!(decode_rate(&Rational::from_integer(1.into()), &d), Value::One);
    }
}
