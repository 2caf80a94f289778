//! Financial networks of debt contracts and credit default swaps, the
//! proportional-payment clearing function and the structural property checks.

use crate::error::{input, Error, Result};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Mutable staging area for a network. Contracts between the same banks are
/// aggregated; validation happens in [`NetworkBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    external: BTreeMap<String, Rational>,
    debts: BTreeMap<(String, String), Rational>,
    cds: BTreeMap<(String, String, String), Rational>,
    duplicates: Vec<String>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bank(&mut self, id: &str, external_assets: Rational) -> &mut Self {
        if self.external.insert(id.to_string(), external_assets).is_some() {
            self.duplicates.push(id.to_string());
        }
        self
    }

    pub fn has_bank(&self, id: &str) -> bool {
        self.external.contains_key(id)
    }

    pub fn external_assets(&self, id: &str) -> Option<&Rational> {
        self.external.get(id)
    }

    pub fn set_external_assets(&mut self, id: &str, value: Rational) -> &mut Self {
        self.external.insert(id.to_string(), value);
        self
    }

    pub fn remove_bank(&mut self, id: &str) -> &mut Self {
        self.external.remove(id);
        self
    }

    /// Adds `notional` to the debt from `debtor` to `creditor`.
    pub fn debt(&mut self, debtor: &str, creditor: &str, notional: Rational) -> &mut Self {
        *self.debts.entry((debtor.to_string(), creditor.to_string())).or_insert_with(Rational::zero) += notional;
        self
    }

    /// Overwrites a debt notional; zero removes the contract.
    pub fn set_debt(&mut self, debtor: &str, creditor: &str, notional: Rational) -> &mut Self {
        let key = (debtor.to_string(), creditor.to_string());
        if notional.is_zero() {
            self.debts.remove(&key);
        } else {
            self.debts.insert(key, notional);
        }
        self
    }

    pub fn debt_notional(&self, debtor: &str, creditor: &str) -> Rational {
        self.debts.get(&(debtor.to_string(), creditor.to_string())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `notional` to the CDS where `debtor` pays `creditor` on `reference`'s default.
    pub fn cds(&mut self, debtor: &str, creditor: &str, reference: &str, notional: Rational) -> &mut Self {
        *self
            .cds
            .entry((debtor.to_string(), creditor.to_string(), reference.to_string()))
            .or_insert_with(Rational::zero) += notional;
        self
    }

    pub fn remove_cds(&mut self, debtor: &str, creditor: &str, reference: &str) -> &mut Self {
        self.cds.remove(&(debtor.to_string(), creditor.to_string(), reference.to_string()));
        self
    }

    pub fn bank_ids(&self) -> impl Iterator<Item = &str> {
        self.external.keys().map(String::as_str)
    }

    pub fn debts(&self) -> impl Iterator<Item = (&str, &str, &Rational)> {
        self.debts.iter().map(|((d, c), v)| (d.as_str(), c.as_str(), v))
    }

    pub fn cds_contracts(&self) -> impl Iterator<Item = (&str, &str, &str, &Rational)> {
        self.cds.iter().map(|((d, c, r), v)| (d.as_str(), c.as_str(), r.as_str(), v))
    }

    pub fn build(&self) -> Result<FinancialNetwork> {
        if let Some(dup) = self.duplicates.first() {
            return input(format!("duplicate bank id {dup:?}"));
        }
        let banks: Vec<String> = self.external.keys().cloned().collect();
        let index: HashMap<String, usize> = banks.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let lookup = |id: &str| -> Result<usize> {
            index.get(id).copied().ok_or_else(|| Error::Input(format!("unknown bank {id:?}")))
        };
        for (id, e) in &self.external {
            if id.is_empty() {
                return input("empty bank id");
            }
            if e.is_negative() {
                return input(format!("negative external assets at bank {id:?}"));
            }
        }
        let external = self.external.values().cloned().collect();
        let mut debts = BTreeMap::new();
        for ((d, c), v) in &self.debts {
            if d == c {
                return input(format!("debt contract from {d:?} to itself"));
            }
            if !v.is_positive() {
                return input(format!("non-positive debt notional {d:?} -> {c:?}"));
            }
            debts.insert((lookup(d)?, lookup(c)?), v.clone());
        }
        let mut cds = BTreeMap::new();
        for ((d, c, r), v) in &self.cds {
            if d == c || d == r || c == r {
                return input(format!("CDS ({d:?}, {c:?}, {r:?}) needs three distinct banks"));
            }
            if !v.is_positive() {
                return input(format!("non-positive CDS notional ({d:?}, {c:?}, {r:?})"));
            }
            cds.insert((lookup(d)?, lookup(c)?, lookup(r)?), v.clone());
        }
        Ok(FinancialNetwork { banks, index, external, debts, cds })
    }
}

/// An immutable network `(N, e, c)`. Banks are indexed in lexicographic id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinancialNetwork {
    banks: Vec<String>,
    index: HashMap<String, usize>,
    external: Vec<Rational>,
    debts: BTreeMap<(usize, usize), Rational>,
    cds: BTreeMap<(usize, usize, usize), Rational>,
}

/// Assets and total liabilities of every bank at one recovery rate vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub assets: Vec<Rational>,
    pub liabilities: Vec<Rational>,
}

/// Outcome of a structural check together with human-readable violations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub violations: Vec<String>,
}

impl PropertyCheck {
    fn from_violations(violations: Vec<String>) -> Self {
        Self { holds: violations.is_empty(), violations }
    }
}

/// Result of the central-CDS-debtor check; `ccd` is `None` when there are no CDSes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralDebtorCheck {
    pub holds: bool,
    pub ccd: Option<usize>,
    pub violations: Vec<String>,
}

/// Result of checking a rate vector against the weak approximate clearing condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearingReport {
    pub rates: Vec<Rational>,
    /// `|r_i - f(r)_i|` per bank.
    pub residuals: Vec<Rational>,
    pub max_residual: Rational,
    /// Banks whose external assets exceed every obligation they could owe.
    pub trivially_solvent: Vec<usize>,
    /// Trivially solvent banks whose rate is not exactly 1.
    pub pinned_violations: Vec<usize>,
    pub eps: Rational,
    pub passed: bool,
}

impl FinancialNetwork {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::new()
    }

    pub fn to_builder(&self) -> NetworkBuilder {
        let mut b = NetworkBuilder::new();
        for (id, e) in self.banks.iter().zip(&self.external) {
            b.bank(id, e.clone());
        }
        for (&(d, c), v) in &self.debts {
            b.debt(&self.banks[d], &self.banks[c], v.clone());
        }
        for (&(d, c, r), v) in &self.cds {
            b.cds(&self.banks[d], &self.banks[c], &self.banks[r], v.clone());
        }
        b
    }

    pub fn len(&self) -> usize {
        self.banks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.banks.is_empty()
    }

    pub fn bank_ids(&self) -> &[String] {
        &self.banks
    }

    pub fn id(&self, i: usize) -> &str {
        &self.banks[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::Input(format!("unknown bank {id:?}")))
    }

    pub fn external_assets(&self, i: usize) -> &Rational {
        &self.external[i]
    }

    /// Debt contracts as `(debtor, creditor, notional)` in lexicographic order.
    pub fn debts(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.debts.iter().map(|(&(d, c), v)| (d, c, v))
    }

    /// CDS contracts as `(debtor, creditor, reference, notional)` in lexicographic order.
    pub fn cds_contracts(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.cds.iter().map(|(&(d, c, r), v)| (d, c, r, v))
    }

    pub fn debt(&self, debtor: usize, creditor: usize) -> Option<&Rational> {
        self.debts.get(&(debtor, creditor))
    }

    pub fn cds_notional(&self, debtor: usize, creditor: usize, reference: usize) -> Option<&Rational> {
        self.cds.get(&(debtor, creditor, reference))
    }

    pub fn debt_count(&self) -> usize {
        self.debts.len()
    }

    pub fn cds_count(&self) -> usize {
        self.cds.len()
    }

    pub fn has_cds(&self) -> bool {
        !self.cds.is_empty()
    }

    /// Sum of the debt notionals bank `i` owes.
    pub fn total_debt(&self, i: usize) -> Rational {
        self.debts.range((i, 0)..(i + 1, 0)).map(|(_, v)| v).fold(Rational::zero(), |acc, v| acc + v)
    }

    /// Sum of all notionals where bank `i` is the debtor: what it owes when
    /// every CDS it wrote pays out in full.
    pub fn worst_case_liability(&self, i: usize) -> Rational {
        let cds: Rational =
            self.cds.range((i, 0, 0)..(i + 1, 0, 0)).map(|(_, v)| v).fold(Rational::zero(), |acc, v| acc + v);
        self.total_debt(i) + cds
    }

    pub fn has_outgoing_contracts(&self, i: usize) -> bool {
        self.debts.range((i, 0)..(i + 1, 0)).next().is_some()
            || self.cds.range((i, 0, 0)..(i + 1, 0, 0)).next().is_some()
    }

    pub fn has_debts(&self, i: usize) -> bool {
        self.debts.range((i, 0)..(i + 1, 0)).next().is_some()
    }

    pub fn is_cds_debtor(&self, i: usize) -> bool {
        self.cds.range((i, 0, 0)..(i + 1, 0, 0)).next().is_some()
    }

    /// Banks with no outgoing contract at all; their rate is 1 by the sink rule.
    pub fn is_sink(&self, i: usize) -> bool {
        !self.has_outgoing_contracts(i)
    }

    /// Condition (i) of the approximate clearing definition.
    pub fn is_trivially_solvent(&self, i: usize) -> bool {
        self.external[i] > self.worst_case_liability(i)
    }

    pub fn check_rates(&self, r: &[Rational]) -> Result<()> {
        if r.len() != self.len() {
            return input(format!("rate vector has {} entries, network has {} banks", r.len(), self.len()));
        }
        for (i, v) in r.iter().enumerate() {
            if v.is_negative() || *v > Rational::one() {
                return input(format!("rate of bank {:?} is outside [0,1]", self.banks[i]));
            }
        }
        Ok(())
    }

    /// `l_{i,j}(r) = c_{i,j} + sum_k (1 - r_k) c^k_{i,j}`.
    pub fn liability(&self, r: &[Rational], i: usize, j: usize) -> Rational {
        let mut l = self.debts.get(&(i, j)).cloned().unwrap_or_else(Rational::zero);
        for (&(_, _, k), v) in self.cds.range((i, j, 0)..(i, j + 1, 0)) {
            l += (Rational::one() - &r[k]) * v;
        }
        l
    }

    /// Liability between two banks given by id.
    pub fn liability_between(&self, r: &[Rational], debtor: &str, creditor: &str) -> Result<Rational> {
        self.check_rates(r)?;
        Ok(self.liability(r, self.index_of(debtor)?, self.index_of(creditor)?))
    }

    /// Assets and total liabilities of every bank in one pass over the contracts.
    pub fn evaluate(&self, r: &[Rational]) -> Evaluation {
        let mut assets = self.external.clone();
        let mut liabilities = vec![Rational::zero(); self.len()];
        for (&(i, j), v) in &self.debts {
            liabilities[i] += v;
            assets[j] += &r[i] * v;
        }
        for (&(i, j, k), v) in &self.cds {
            let owed = (Rational::one() - &r[k]) * v;
            assets[j] += &r[i] * &owed;
            liabilities[i] += owed;
        }
        Evaluation { assets, liabilities }
    }

    pub fn total_liability(&self, r: &[Rational], i: usize) -> Rational {
        self.evaluate(r).liabilities.swap_remove(i)
    }

    pub fn assets(&self, r: &[Rational], i: usize) -> Rational {
        self.evaluate(r).assets.swap_remove(i)
    }

    pub fn assets_of(&self, r: &[Rational], id: &str) -> Result<Rational> {
        self.check_rates(r)?;
        Ok(self.assets(r, self.index_of(id)?))
    }

    fn clearing_values(&self, r: &[Rational]) -> (Vec<Rational>, Vec<usize>) {
        let Evaluation { assets, liabilities } = self.evaluate(r);
        let mut degenerate = Vec::new();
        let f = assets
            .into_iter()
            .zip(liabilities)
            .enumerate()
            .map(|(i, (a, l))| {
                if l.is_zero() {
                    if a.is_zero() && self.is_cds_debtor(i) && !self.has_debts(i) {
                        degenerate.push(i);
                    }
                    Rational::one()
                } else if a >= l {
                    Rational::one()
                } else {
                    a / l
                }
            })
            .collect();
        (f, degenerate)
    }

    /// The clearing function `f(r)_i = a_i(r) / max(a_i(r), l_i(r))`, with rate 1
    /// wherever `l_i(r) = 0`.
    pub fn apply_f(&self, r: &[Rational]) -> Result<Vec<Rational>> {
        self.check_rates(r)?;
        let (f, degenerate) = self.clearing_values(r);
        match degenerate.first() {
            Some(&i) => Err(Error::Degenerate(format!(
                "bank {:?} only owes CDS payments and has no assets (0/0)",
                self.banks[i]
            ))),
            None => Ok(f),
        }
    }

    /// Checks `r` against the weak `eps`-approximate clearing condition.
    /// A 0/0 evaluation falls back to the sink rule here.
    pub fn verify_crrv(&self, r: &[Rational], eps: &Rational) -> Result<ClearingReport> {
        self.check_rates(r)?;
        let (f, _) = self.clearing_values(r);
        let residuals: Vec<Rational> = r.iter().zip(&f).map(|(x, y)| (x - y).abs()).collect();
        let trivially_solvent: Vec<usize> = (0..self.len()).filter(|&i| self.is_trivially_solvent(i)).collect();
        let pinned_violations: Vec<usize> = trivially_solvent.iter().copied().filter(|&i| !r[i].is_one()).collect();
        let solvent: BTreeSet<usize> = trivially_solvent.iter().copied().collect();
        let residual_ok = residuals.iter().enumerate().all(|(i, res)| solvent.contains(&i) || res <= eps);
        let max_residual = residuals.iter().max().cloned().unwrap_or_else(Rational::zero);
        Ok(ClearingReport {
            rates: r.to_vec(),
            residuals,
            max_residual,
            passed: residual_ok && pinned_violations.is_empty(),
            trivially_solvent,
            pinned_violations,
            eps: eps.clone(),
        })
    }

    /// Every CDS reference bank owes a debt, and every CDS debtor has positive
    /// external assets or owes a debt.
    pub fn check_nondegenerate(&self) -> PropertyCheck {
        let mut violations = Vec::new();
        let references: BTreeSet<usize> = self.cds.keys().map(|&(_, _, k)| k).collect();
        for k in references {
            if !self.has_debts(k) {
                violations.push(format!("reference bank {:?} owes no debt", self.banks[k]));
            }
        }
        let debtors: BTreeSet<usize> = self.cds.keys().map(|&(i, _, _)| i).collect();
        for i in debtors {
            if self.external[i].is_zero() && !self.has_debts(i) {
                violations.push(format!("CDS debtor {:?} has no external assets and owes no debt", self.banks[i]));
            }
        }
        PropertyCheck::from_violations(violations)
    }

    /// One debtor writes every CDS, owes no debt and can pay every CDS in full.
    pub fn check_central_cds_debtor(&self) -> CentralDebtorCheck {
        let debtors: BTreeSet<usize> = self.cds.keys().map(|&(i, _, _)| i).collect();
        let mut violations = Vec::new();
        if debtors.len() > 1 {
            let names: Vec<&str> = debtors.iter().map(|&i| self.banks[i].as_str()).collect();
            violations.push(format!("several CDS debtors: {}", names.join(", ")));
            return CentralDebtorCheck { holds: false, ccd: None, violations };
        }
        let Some(&ccd) = debtors.first() else {
            return CentralDebtorCheck { holds: true, ccd: None, violations };
        };
        if self.has_debts(ccd) {
            violations.push(format!("central debtor {:?} owes debt", self.banks[ccd]));
        }
        if self.external[ccd] < self.worst_case_liability(ccd) {
            violations.push(format!("central debtor {:?} cannot cover its CDS notionals", self.banks[ccd]));
        }
        CentralDebtorCheck { holds: violations.is_empty(), ccd: Some(ccd), violations }
    }

    /// Every CDS `(i, j, R)` has `c^R_{i,j} <= c_{R,j}`.
    pub fn check_covered(&self) -> PropertyCheck {
        let violations = self
            .cds
            .iter()
            .filter(|(&(_, j, k), v)| self.debts.get(&(k, j)).is_none_or(|d| *v > d))
            .map(|(&(i, j, k), _)| {
                format!(
                    "CDS ({:?}, {:?}, {:?}) exceeds the debt {:?} owes {:?}",
                    self.banks[i], self.banks[j], self.banks[k], self.banks[k], self.banks[j]
                )
            })
            .collect();
        PropertyCheck::from_violations(violations)
    }

    /// Every CDS debtor owes no debt and all its CDSes share one reference bank.
    pub fn check_dedicated(&self) -> PropertyCheck {
        let mut references: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &(i, _, k) in self.cds.keys() {
            references.entry(i).or_default().insert(k);
        }
        let mut violations = Vec::new();
        for (i, refs) in references {
            if self.has_debts(i) {
                violations.push(format!("CDS debtor {:?} owes debt", self.banks[i]));
            }
            if refs.len() > 1 {
                violations.push(format!("CDS debtor {:?} has several reference banks", self.banks[i]));
            }
        }
        PropertyCheck::from_violations(violations)
    }

    /// Directed dependency graph: `i -> j` when `r_j` enters `f_i`.
    pub fn dependencies(&self) -> Vec<BTreeSet<usize>> {
        let mut deps = vec![BTreeSet::new(); self.len()];
        for &(i, j) in self.debts.keys() {
            deps[j].insert(i);
        }
        for &(i, j, k) in self.cds.keys() {
            deps[i].insert(k);
            deps[j].insert(i);
            deps[j].insert(k);
        }
        deps
    }

    /// True when the dependency graph of the clearing function has a cycle.
    pub fn has_dependency_cycle(&self) -> bool {
        let deps = self.dependencies();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.len()];
        for start in 0..self.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, deps[start].iter().copied().collect::<Vec<_>>())];
            state[start] = 1;
            while let Some((node, children)) = stack.last_mut() {
                match children.pop() {
                    Some(next) if state[next] == 1 => return true,
                    Some(next) if state[next] == 0 => {
                        state[next] = 1;
                        let grand = deps[next].iter().copied().collect();
                        stack.push((next, grand));
                    }
                    Some(_) => {}
                    None => {
                        state[*node] = 2;
                        stack.pop();
                    }
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn two_banks() -> FinancialNetwork {
        let mut b = NetworkBuilder::new();
        b.bank("A", ratio(1, 2)).bank("B", int(0)).debt("A", "B", int(1));
        b.build().unwrap()
    }

    #[test]
    fn builder_rejects_bad_contracts() {
        let mut b = NetworkBuilder::new();
        b.bank("A", int(1)).debt("A", "A", int(1));
        assert!(b.build().is_err());
        let mut b = NetworkBuilder::new();
        b.bank("A", int(1)).debt("A", "Z", int(1));
        assert!(b.build().is_err());
        let mut b = NetworkBuilder::new();
        b.bank("A", int(1)).bank("B", int(1)).cds("A", "B", "A", int(1));
        assert!(b.build().is_err());
        let mut b = NetworkBuilder::new();
        b.bank("A", int(1)).bank("A", int(2));
        assert!(b.build().is_err());
        let mut b = NetworkBuilder::new();
        b.bank("A", int(-1));
        assert!(b.build().is_err());
    }

    #[test]
    fn duplicate_debts_aggregate() {
        let mut b = NetworkBuilder::new();
        b.bank("A", int(0)).bank("B", int(0)).debt("A", "B", int(1)).debt("A", "B", ratio(1, 2));
        let net = b.build().unwrap();
        assert_eq!(net.debt(0, 1), Some(&ratio(3, 2)));
    }

    #[test]
    fn single_cds_liability() {
        let mut b = NetworkBuilder::new();
        b.bank("i", int(4)).bank("j", int(0)).bank("R", int(0)).cds("i", "j", "R", int(4));
        let net = b.build().unwrap();
        let r_idx = net.index_of("R").unwrap();
        let mut r = vec![int(1); 3];
        r[r_idx] = ratio(3, 4);
        assert_eq!(net.liability_between(&r, "i", "j").unwrap(), int(1));
    }

    #[test]
    fn no_contracts_means_zero_liability() {
        let net = two_banks();
        let r = vec![ratio(1, 3), ratio(1, 5)];
        assert_eq!(net.total_liability(&r, 1), int(0));
        assert!(net.liability_between(&r, "B", "nope").is_err());
    }

    #[test]
    fn two_bank_assets_and_f() {
        let net = two_banks();
        let r = vec![ratio(1, 2), int(1)];
        assert_eq!(net.assets_of(&r, "B").unwrap(), ratio(1, 2));
        assert_eq!(net.apply_f(&[int(1), int(1)]).unwrap(), vec![ratio(1, 2), int(1)]);
    }

    #[test]
    fn isolated_rich_bank_passes_condition_one() {
        let mut b = NetworkBuilder::new();
        b.bank("x", int(10));
        let net = b.build().unwrap();
        let rep = net.verify_crrv(&[int(1)], &int(0)).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.trivially_solvent, vec![0]);
        let rep = net.verify_crrv(&[ratio(1, 2)], &int(1)).unwrap();
        assert!(!rep.passed);
    }

    #[test]
    fn degenerate_cds_debtor_is_reported() {
        let mut b = NetworkBuilder::new();
        b.bank("d", int(0)).bank("c", int(0)).bank("R", int(0)).cds("d", "c", "R", int(1));
        let net = b.build().unwrap();
        assert!(matches!(net.apply_f(&[int(1), int(1), int(1)]), Err(Error::Degenerate(_))));
        assert!(!net.check_nondegenerate().holds);
        let check = net.check_nondegenerate();
        assert!(check.violations.iter().any(|v| v.contains("\"R\"")));
    }

    #[test]
    fn covered_and_dedicated() {
        let mut b = NetworkBuilder::new();
        b.bank("d", int(3)).bank("j", int(0)).bank("R", int(0)).cds("d", "j", "R", int(3));
        assert!(!b.build().unwrap().check_covered().holds);
        b.debt("R", "j", int(5));
        let net = b.build().unwrap();
        assert!(net.check_covered().holds);
        assert!(net.check_dedicated().holds);
        let ccd = net.check_central_cds_debtor();
        assert!(ccd.holds);
        assert_eq!(ccd.ccd, Some(net.index_of("d").unwrap()));
    }

    #[test]
    fn cycle_detection() {
        let net = two_banks();
        assert!(!net.has_dependency_cycle());
        let mut b = NetworkBuilder::new();
        b.bank("A", int(0)).bank("B", int(0)).debt("A", "B", int(1)).debt("B", "A", int(1));
        assert!(b.build().unwrap().has_dependency_cycle());
    }
}
