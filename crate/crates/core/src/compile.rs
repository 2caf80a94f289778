//! Gadget networks simulating Pure-Circuit gates, whole-instance compilation
//! and the merge of all CDS debtors into one central debtor.

use crate::circuit::{Gate, GateKind, PureCircuit};
use crate::error::{property, Result};
use crate::io::VarMap;
use crate::network::{FinancialNetwork, NetworkBuilder};
use crate::params::GadgetParams;
use crate::rational::{int, Rational};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Bank id used for a circuit variable.
pub fn variable_bank(var: &str) -> String {
    format!("b_{var}")
}

/// A gadget before merging. Each variable bank owes exactly one unit debt to a
/// gadget-local sink; those debts are kept apart so merging can drop duplicates.
struct Gadget {
    banks: Vec<(String, Rational)>,
    debts: Vec<(String, String, Rational)>,
    cds: Vec<(String, String, String, Rational)>,
    /// (variable, is_output, creditor of the variable bank's unit debt)
    exits: Vec<(String, bool, String)>,
}

fn gadget(gate: &Gate, index: usize, params: &GadgetParams) -> Gadget {
    let local = |name: &str| format!("g{index}_{name}");
    let one = || int(1);
    let k1 = params.first_stage();
    let k2 = params.amplifier();
    let mut g = Gadget { banks: Vec::new(), debts: Vec::new(), cds: Vec::new(), exits: Vec::new() };
    let bank = |g: &mut Gadget, name: &str, e: Rational| g.banks.push((local(name), e));
    match gate.kind {
        GateKind::Not => {
            let (u, w) = (variable_bank(&gate.inputs[0]), variable_bank(&gate.outputs[0]));
            for name in ["1", "3", "4", "6", "7", "9"] {
                bank(&mut g, name, Rational::zero());
            }
            bank(&mut g, "2", k1.clone());
            bank(&mut g, "5", k2.clone());
            bank(&mut g, "8", one());
            g.debts.push((local("3"), local("4"), one()));
            g.debts.push((local("6"), local("7"), one()));
            g.cds.push((local("2"), local("3"), u, k1));
            g.cds.push((local("5"), local("6"), local("3"), k2));
            g.cds.push((local("8"), w, local("6"), one()));
            g.exits.push((gate.inputs[0].clone(), false, local("1")));
            g.exits.push((gate.outputs[0].clone(), true, local("9")));
        }
        GateKind::Or => {
            let u = variable_bank(&gate.inputs[0]);
            let v = variable_bank(&gate.inputs[1]);
            let w = variable_bank(&gate.outputs[0]);
            for name in ["1", "3", "4", "6", "7", "9", "10", "12", "13"] {
                bank(&mut g, name, Rational::zero());
            }
            bank(&mut g, "2", k1.clone());
            bank(&mut g, "5", k2.clone());
            bank(&mut g, "8", k1.clone());
            bank(&mut g, "11", k2.clone());
            g.debts.push((local("3"), local("4"), one()));
            g.debts.push((local("6"), w.clone(), one()));
            g.debts.push((local("9"), local("10"), one()));
            g.debts.push((local("12"), w, one()));
            g.cds.push((local("2"), local("3"), u, k1.clone()));
            g.cds.push((local("5"), local("6"), local("3"), k2.clone()));
            g.cds.push((local("8"), local("9"), v, k1));
            g.cds.push((local("11"), local("12"), local("9"), k2));
            g.exits.push((gate.inputs[0].clone(), false, local("1")));
            g.exits.push((gate.inputs[1].clone(), false, local("7")));
            g.exits.push((gate.outputs[0].clone(), true, local("13")));
        }
        GateKind::Purify => {
            let u = variable_bank(&gate.inputs[0]);
            let v = variable_bank(&gate.outputs[0]);
            let w = variable_bank(&gate.outputs[1]);
            for name in ["1", "3", "4", "6", "7", "10"] {
                bank(&mut g, name, Rational::zero());
            }
            let left = params.purify_left();
            let right = params.purify_right();
            bank(&mut g, "2", k1.clone());
            bank(&mut g, "5", int(2));
            bank(&mut g, "8", left.clone());
            bank(&mut g, "9", right.clone());
            g.debts.push((local("3"), local("4"), one()));
            g.debts.push((local("6"), local("7"), one()));
            g.cds.push((local("2"), local("3"), u.clone(), k1));
            g.cds.push((local("5"), local("6"), u, int(2)));
            g.cds.push((local("8"), v, local("3"), left));
            g.cds.push((local("9"), w, local("6"), right));
            g.exits.push((gate.inputs[0].clone(), false, local("1")));
            g.exits.push((gate.outputs[0].clone(), true, local("10")));
            g.exits.push((gate.outputs[1].clone(), true, local("10")));
        }
    }
    g
}

/// Compiles one gate into its gadget network.
pub fn compile_gate(gate: &Gate, params: &GadgetParams) -> Result<FinancialNetwork> {
    let circuit = PureCircuit::new(vec![gate.clone()])?;
    Ok(compile_instance(&circuit, params)?.0)
}

/// One gadget copy per gate, with the copies of each variable bank merged.
/// A merged bank keeps the unit debt of the gate producing the variable (or of
/// its first reading gate for a source variable); sinks left without any
/// contract are removed.
pub fn compile_instance(circuit: &PureCircuit, params: &GadgetParams) -> Result<(FinancialNetwork, VarMap)> {
    crate::params::params_from_delta(&params.delta)?;
    let gadgets: Vec<Gadget> = circuit.gates().iter().enumerate().map(|(i, g)| gadget(g, i, params)).collect();
    let mut kept: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (gi, g) in gadgets.iter().enumerate() {
        for (ei, (var, is_output, _)) in g.exits.iter().enumerate() {
            if *is_output {
                kept.insert(var.clone(), (gi, ei));
            } else {
                kept.entry(var.clone()).or_insert((gi, ei));
            }
        }
    }
    let mut b = NetworkBuilder::new();
    let varmap: VarMap = circuit.variables().iter().map(|v| (v.clone(), variable_bank(v))).collect();
    for bank in varmap.values() {
        b.bank(bank, Rational::zero());
    }
    let mut internal = Vec::new();
    for (gi, g) in gadgets.iter().enumerate() {
        for (id, e) in &g.banks {
            internal.push((id.clone(), e.clone()));
        }
        for (d, c, v) in &g.debts {
            b.debt(d, c, v.clone());
        }
        for (d, c, r, v) in &g.cds {
            b.cds(d, c, r, v.clone());
        }
        for (ei, (var, _, sink)) in g.exits.iter().enumerate() {
            if kept[var] == (gi, ei) {
                b.debt(&variable_bank(var), sink, int(1));
            }
        }
    }
    let mut used: BTreeSet<String> = BTreeSet::new();
    for (d, c, _) in b.debts() {
        used.insert(d.to_string());
        used.insert(c.to_string());
    }
    for (d, c, r, _) in b.cds_contracts() {
        used.extend([d.to_string(), c.to_string(), r.to_string()]);
    }
    for (id, e) in internal {
        if used.contains(&id) || !e.is_zero() {
            b.bank(&id, e);
        }
    }
    Ok((b.build()?, varmap))
}

/// Replaces every CDS debtor by one bank `ccd` holding their combined external
/// assets. Each merged debtor must owe no debt, cover its CDS notionals, and
/// not appear as creditor or reference of any CDS.
pub fn merge_central_debtor(net: &FinancialNetwork) -> Result<FinancialNetwork> {
    let debtors: BTreeSet<usize> = net.cds_contracts().map(|(d, ..)| d).collect();
    if debtors.is_empty() {
        return Ok(net.clone());
    }
    for &d in &debtors {
        let id = net.id(d);
        if net.has_debts(d) {
            return property(format!("CDS debtor {id:?} owes debt"));
        }
        if net.external_assets(d) < &net.worst_case_liability(d) {
            return property(format!("CDS debtor {id:?} cannot cover its CDS notionals"));
        }
        if net.cds_contracts().any(|(_, c, r, _)| c == d || r == d) {
            return property(format!("CDS debtor {id:?} is also creditor or reference of a CDS"));
        }
    }
    let remaining: BTreeSet<&str> = (0..net.len()).filter(|i| !debtors.contains(i)).map(|i| net.id(i)).collect();
    let mut name = "ccd".to_string();
    let mut suffix = 1;
    while remaining.contains(name.as_str()) {
        name = format!("ccd_{suffix}");
        suffix += 1;
    }
    let rename = |i: usize| if debtors.contains(&i) { name.clone() } else { net.id(i).to_string() };
    let mut b = NetworkBuilder::new();
    for &id in &remaining {
        b.bank(id, net.external_assets(net.index_of(id)?).clone());
    }
    let total: Rational = debtors.iter().map(|&d| net.external_assets(d)).sum();
    b.bank(&name, total);
    for (d, c, v) in net.debts() {
        b.debt(&rename(d), &rename(c), v.clone());
    }
    for (d, c, r, v) in net.cds_contracts() {
        b.cds(&rename(d), &rename(c), &rename(r), v.clone());
    }
    b.build()
}
