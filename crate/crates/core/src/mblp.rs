//! Mixed-binary linear program for central-CDS-debtor networks, exhaustive
//! enumeration of its binary part, and text emission of the nonlinear
//! program for general networks.
//!
//! Per bank `i` with liability `l_i` and big-M constant `B_i`, the program
//! holds, multiplied through by `l_i`:
//!
//! ```text
//! c1: l_i r_i >= a_i(r) - B_i l_i (1 - y_i)
//! c2: r_i >= 1 - B_i y_i
//! c3: l_i r_i <= a_i(r)
//! c4: 0 <= r_i <= 1
//! c5: y_i in {0, 1}
//! ```

use crate::error::{input, property, Error, Result};
use crate::lp::{lp_solve, lp_solve_traced, Bounds, Constraint, LinearProgram, LpOutcome, Relation, Sense};
use crate::network::{ClearingReport, FinancialNetwork};
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;

/// Solvency indicator per constrained bank: `true` means `y_i = 1` (in default).
pub type YConfiguration = BTreeMap<String, bool>;

/// Networks with more constrained banks than this are refused by
/// [`solve_exhaustive`].
pub const ENUMERATION_LIMIT: usize = 24;

/// A linear function of the recovery rates, by bank index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
}

impl Objective {
    pub fn value(&self, rates: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(i, c)| c * &rates[*i]).sum()
    }
}

/// Parses `"2*A + 1/2*B - C"` into an objective over the banks of `net`.
/// Terms are separated by standalone `+` or `-`; `·` may replace `*`.
pub fn parse_objective(net: &FinancialNetwork, text: &str, sense: Sense) -> Result<Objective> {
    let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut sign = Rational::one();
    let mut expect_term = true;
    for token in text.split_whitespace() {
        match token {
            "+" | "-" if !expect_term => {
                sign = if token == "-" { -Rational::one() } else { Rational::one() };
                expect_term = true;
            }
            _ if expect_term => {
                let (coef, bank) = match token.split_once(['*', '·']) {
                    Some((c, b)) => (parse_rational(c)?, b),
                    None => match token.strip_prefix('-') {
                        Some(b) => (-Rational::one(), b),
                        None => (Rational::one(), token),
                    },
                };
                *coeffs.entry(net.index_of(bank)?).or_insert_with(Rational::zero) += &sign * coef;
                sign = Rational::one();
                expect_term = false;
            }
            _ => return input(format!("unexpected token {token:?} in objective")),
        }
    }
    if expect_term {
        return input("objective is empty or ends with an operator");
    }
    Ok(Objective { coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(), sense })
}

/// `B_i = (e_i + incoming debt + incoming CDS notional) / (outgoing debt) + 1`.
pub fn big_m(net: &FinancialNetwork, i: usize) -> Result<Rational> {
    let out = net.total_debt(i);
    if out.is_zero() {
        return Err(Error::Input(format!("bank {:?} owes no debt and has no big-M constant", net.id(i))));
    }
    Ok((net.external_assets(i) + incoming_notional(net, i)) / out + Rational::one())
}

fn incoming_notional(net: &FinancialNetwork, i: usize) -> Rational {
    let debt: Rational = net.debts().filter(|&(_, c, _)| c == i).map(|(.., v)| v.clone()).sum();
    let cds: Rational = net.cds_contracts().filter(|&(_, c, _, _)| c == i).map(|(.., v)| v.clone()).sum();
    debt + cds
}

/// `a_i(r)` for a central-CDS-debtor network as a constant plus a linear form
/// over the model's variable positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAssets {
    pub constant: Rational,
    pub coeffs: BTreeMap<usize, Rational>,
}

#[derive(Clone, Debug)]
pub struct MblpModel<'a> {
    pub net: &'a FinancialNetwork,
    /// Constrained banks in index order; all other banks have rate 1.
    pub banks: Vec<usize>,
    pub big_m: Vec<Rational>,
    pub liabilities: Vec<Rational>,
    pub assets: Vec<AffineAssets>,
    pub objective: Option<Objective>,
}

pub fn build_mblp<'a>(net: &'a FinancialNetwork, objective: Option<Objective>) -> Result<MblpModel<'a>> {
    let check = net.check_central_cds_debtor();
    if !check.holds {
        return property(check.violations.join("; "));
    }
    let banks: Vec<usize> = (0..net.len()).filter(|&i| !net.is_sink(i) && Some(i) != check.ccd).collect();
    let position: BTreeMap<usize, usize> = banks.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut assets: Vec<AffineAssets> = banks
        .iter()
        .map(|&i| AffineAssets { constant: net.external_assets(i).clone(), coeffs: BTreeMap::new() })
        .collect();
    for (d, c, v) in net.debts() {
        if let Some(&p) = position.get(&c) {
            match position.get(&d) {
                Some(&q) => *assets[p].coeffs.entry(q).or_insert_with(Rational::zero) += v,
                None => assets[p].constant += v,
            }
        }
    }
    // The central debtor always pays in full, so each CDS pays (1 - r_k) c^k.
    for (_, c, k, v) in net.cds_contracts() {
        if let (Some(&p), Some(&q)) = (position.get(&c), position.get(&k)) {
            assets[p].constant += v;
            *assets[p].coeffs.entry(q).or_insert_with(Rational::zero) -= v;
        }
    }
    let big = banks.iter().map(|&i| big_m(net, i)).collect::<Result<_>>()?;
    let liabilities = banks.iter().map(|&i| net.total_debt(i)).collect();
    Ok(MblpModel { net, banks, big_m: big, liabilities, assets, objective })
}

impl MblpModel<'_> {
    pub fn len(&self) -> usize {
        self.banks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.banks.is_empty()
    }

    /// Big-M rows c1 and c2 per bank; c3 is an inequality row and c4 a bound.
    pub fn constraint_count(&self) -> usize {
        3 * self.banks.len()
    }

    /// Full rate vector from the model variables.
    pub fn rates(&self, point: &[Rational]) -> Vec<Rational> {
        let mut rates = vec![Rational::one(); self.net.len()];
        for (p, &i) in self.banks.iter().enumerate() {
            rates[i] = point[p].clone();
        }
        rates
    }

    /// The model variables of a full rate vector.
    pub fn restrict_rates(&self, rates: &[Rational]) -> Vec<Rational> {
        self.banks.iter().map(|&i| rates[i].clone()).collect()
    }

    fn y_vector(&self, y: &YConfiguration) -> Result<Vec<bool>> {
        if let Some(extra) = y.keys().find(|id| self.net.index_of(id).map_or(true, |i| !self.banks.contains(&i))) {
            return input(format!("bank {extra:?} is not constrained by the model"));
        }
        self.banks
            .iter()
            .map(|&i| {
                y.get(self.net.id(i))
                    .copied()
                    .ok_or_else(|| Error::Input(format!("y has no entry for bank {:?}", self.net.id(i))))
            })
            .collect()
    }

    fn y_config(&self, y: &[bool]) -> YConfiguration {
        self.banks.iter().zip(y).map(|(&i, &v)| (self.net.id(i).to_string(), v)).collect()
    }

    fn restrict(&self, y: &[bool]) -> LinearProgram {
        let names = self.banks.iter().map(|&i| format!("r_{}", self.net.id(i))).collect();
        let mut lp = LinearProgram::new(names);
        for (p, &default) in y.iter().enumerate() {
            let a = &self.assets[p];
            let l = &self.liabilities[p];
            if default {
                // c1 and c3: l_i r_i = a_i(r); c2 holds since B_i >= 1.
                lp.bounds[p] = Bounds::new(Rational::zero(), Rational::one());
                let mut coeffs: BTreeMap<usize, Rational> = a.coeffs.iter().map(|(&q, c)| (q, -c)).collect();
                *coeffs.entry(p).or_insert_with(Rational::zero) += l;
                lp.add(Constraint::new(nonzero(coeffs), Relation::Eq, a.constant.clone()));
            } else {
                // c2 and c4: r_i = 1; c3: a_i(r) >= l_i; c1 holds by the choice of B_i.
                lp.bounds[p] = Bounds::new(Rational::one(), Rational::one());
                let coeffs = a.coeffs.iter().map(|(&q, c)| (q, c.clone())).collect();
                lp.add(Constraint::new(nonzero(coeffs), Relation::Ge, l - &a.constant));
            }
        }
        if let Some(obj) = &self.objective {
            let position: BTreeMap<usize, usize> = self.banks.iter().enumerate().map(|(p, &i)| (i, p)).collect();
            let coeffs = obj.coeffs.iter().filter_map(|(i, c)| position.get(i).map(|&p| (p, c.clone()))).collect();
            lp.objective = Some((coeffs, obj.sense));
        }
        lp
    }

    /// Plain-text form of the program, in the grammar of [`emit_mbnlp`].
    pub fn to_text(&self) -> String {
        let fixed: BTreeSet<usize> = (0..self.net.len()).filter(|i| !self.banks.contains(i)).collect();
        write_program(self.net, &fixed)
    }
}

fn nonzero(coeffs: BTreeMap<usize, Rational>) -> Vec<(usize, Rational)> {
    coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// The linear program left after fixing the binary variables to `y`.
pub fn lp_restrict(model: &MblpModel, y: &YConfiguration) -> Result<LinearProgram> {
    Ok(model.restrict(&model.y_vector(y)?))
}

/// Indicator induced by a rate vector: default exactly when `a_i(r) < l_i`.
pub fn induce_y(model: &MblpModel, rates: &[Rational]) -> YConfiguration {
    model
        .banks
        .iter()
        .zip(&model.liabilities)
        .map(|(&i, l)| (model.net.id(i).to_string(), model.net.assets(rates, i) < *l))
        .collect()
}

#[derive(Clone, Debug)]
pub struct MblpSolution {
    pub report: ClearingReport,
    pub y: YConfiguration,
    /// Objective at the returned rates, constant-rate banks included.
    pub objective_value: Option<Rational>,
    pub lp_solves: usize,
}

/// Enumerates `y` as a binary counter (the lexicographically first bank is
/// the most significant bit, all zeros first). Without an objective returns
/// the first feasible restriction; with one, the best over all of them, ties
/// going to the smaller counter.
pub fn solve_exhaustive(net: &FinancialNetwork, objective: Option<Objective>) -> Result<MblpSolution> {
    solve_exhaustive_traced(net, objective, None)
}

/// As [`solve_exhaustive`], dumping every simplex tableau to `trace`.
pub fn solve_exhaustive_traced(
    net: &FinancialNetwork,
    objective: Option<Objective>,
    mut trace: Option<&mut dyn std::io::Write>,
) -> Result<MblpSolution> {
    let model = build_mblp(net, objective)?;
    let n = model.len();
    if n > ENUMERATION_LIMIT {
        return Err(Error::Size(format!("{n} constrained banks exceed the enumeration limit {ENUMERATION_LIMIT}")));
    }
    let mut best: Option<(Vec<Rational>, Vec<bool>, Rational)> = None;
    let mut lp_solves = 0;
    for counter in 0u64..(1u64 << n) {
        let y: Vec<bool> = (0..n).map(|p| counter >> (n - 1 - p) & 1 == 1).collect();
        lp_solves += 1;
        let lp = model.restrict(&y);
        let outcome = match trace.as_mut() {
            Some(out) => {
                let _ = writeln!(out, "# y = {}", y.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
                lp_solve_traced(&lp, Some(&mut **out))
            }
            None => lp_solve(&lp),
        };
        match outcome {
            LpOutcome::Infeasible => {}
            LpOutcome::Feasible(point) => {
                best = Some((point, y, Rational::zero()));
                break;
            }
            LpOutcome::Optimal { point, value } => {
                let better = match (&best, model.objective.as_ref().map(|o| o.sense)) {
                    (None, _) => true,
                    (Some((.., v)), Some(Sense::Max)) => value > *v,
                    (Some((.., v)), _) => value < *v,
                };
                if better {
                    best = Some((point, y, value));
                }
            }
            LpOutcome::Unbounded => unreachable!("rates are bounded"),
        }
    }
    let (point, y, _) = best.ok_or_else(|| Error::Property("no binary configuration is feasible".into()))?;
    let rates = model.rates(&point);
    let report = net.verify_crrv(&rates, &Rational::zero())?;
    let objective_value = model.objective.as_ref().map(|o| o.value(&rates));
    Ok(MblpSolution { report, y: model.y_config(&y), objective_value, lp_solves })
}

/// Plain-text mixed-binary nonlinear program for a general network.
///
/// Grammar, one item per line, `#` starting a comment:
///
/// ```text
/// var r_<bank> in [0, 1]
/// fix r_<bank> = 1
/// bin y_<bank>
/// def a_<bank> = <expr>
/// def l_<bank> = <expr>
/// const B_<bank> = <rational>
/// con c<k>_<bank>: <expr> (>= | <=) <expr>
/// ```
///
/// Expressions are sums of products joined by `*`; rationals are written
/// `p/q`. Banks that always pay in full (sinks, and CDS debtors without debt
/// whose external assets cover all their notionals) are fixed at rate 1 and
/// substituted, so a central-CDS-debtor network yields the linear program.
pub fn emit_mbnlp(net: &FinancialNetwork) -> String {
    let fixed: BTreeSet<usize> = (0..net.len())
        .filter(|&i| net.is_sink(i) || (!net.has_debts(i) && *net.external_assets(i) >= net.worst_case_liability(i)))
        .collect();
    write_program(net, &fixed)
}

fn write_program(net: &FinancialNetwork, fixed: &BTreeSet<usize>) -> String {
    let r = |i: usize| format!("r_{}", net.id(i));
    let free: Vec<usize> = (0..net.len()).filter(|i| !fixed.contains(i)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "# mixed-binary program: {} banks, {} binary", net.len(), free.len());
    for i in 0..net.len() {
        if fixed.contains(&i) {
            let _ = writeln!(out, "fix {} = 1", r(i));
        } else {
            let _ = writeln!(out, "var {} in [0, 1]", r(i));
        }
    }
    for &i in &free {
        let _ = writeln!(out, "bin y_{}", net.id(i));
    }
    // a_i(r) = e_i + Σ r_j c_{j,i} + Σ r_j (1 - r_k) c^k_{j,i}
    for i in 0..net.len() {
        let mut terms = vec![];
        let mut constant = net.external_assets(i).clone();
        for (d, _, v) in net.debts().filter(|&(_, c, _)| c == i) {
            if fixed.contains(&d) {
                constant += v;
            } else {
                terms.push(format!("{}*{}", format_rational(v), r(d)));
            }
        }
        for (d, _, k, v) in net.cds_contracts().filter(|&(_, c, _, _)| c == i) {
            if fixed.contains(&k) {
                continue;
            }
            let payer = if fixed.contains(&d) { String::new() } else { format!("*{}", r(d)) };
            terms.push(format!("{}{payer}*(1 - {})", format_rational(v), r(k)));
        }
        let _ = writeln!(out, "def a_{} = {}", net.id(i), join_sum(constant, terms));
    }
    // l_i(r) = Σ c_{i,j} + Σ (1 - r_k) c^k_{i,j}
    for &i in &free {
        let mut terms = vec![];
        for (_, _, k, v) in net.cds_contracts().filter(|&(d, ..)| d == i) {
            if !fixed.contains(&k) {
                terms.push(format!("{}*(1 - {})", format_rational(v), r(k)));
            }
        }
        let _ = writeln!(out, "def l_{} = {}", net.id(i), join_sum(net.total_debt(i), terms));
    }
    for &i in &free {
        let id = net.id(i);
        let (name, bound) = match big_m(net, i) {
            Ok(b) => ("B", b),
            Err(_) => ("M", net.external_assets(i) + incoming_notional(net, i) + Rational::one()),
        };
        if name == "M" {
            let _ =
                writeln!(out, "# {id} owes no debt: c1 uses M_{id} >= a_{id} - l_{id}*r_{id} instead of B_{id}*l_{id}");
        }
        let _ = writeln!(out, "const {name}_{id} = {}", format_rational(&bound));
        let scaled = if name == "B" { format!("B_{id}*l_{id}") } else { format!("M_{id}") };
        let _ = writeln!(out, "con c1_{id}: l_{id}*r_{id} >= a_{id} - {scaled}*(1 - y_{id})");
        let c2 = if name == "B" { format!("B_{id}*y_{id}") } else { format!("y_{id}") };
        let _ = writeln!(out, "con c2_{id}: r_{id} >= 1 - {c2}");
        let _ = writeln!(out, "con c3_{id}: l_{id}*r_{id} <= a_{id}");
    }
    out
}

fn join_sum(constant: Rational, terms: Vec<String>) -> String {
    let mut parts = Vec::new();
    if !constant.is_zero() || terms.is_empty() {
        parts.push(format_rational(&constant));
    }
    parts.extend(terms);
    let mut s = parts.join(" + ");
    if constant.is_negative() {
        s = s.replacen("+ -", "- ", 1);
    }
    s
}
