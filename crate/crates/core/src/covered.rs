//! Exact clearing of debt-only networks by fictitious default, and of
//! covered-CDS networks with fully capitalized CDS debtors by transforming
//! every CDS into debt.

use crate::error::{input, property, Error, Result};
use crate::linalg;
use crate::network::{ClearingReport, FinancialNetwork};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// A clearing vector with the number of linear solves that produced it.
#[derive(Clone, Debug)]
pub struct DebtOnlySolution {
    pub report: ClearingReport,
    /// Outer fictitious-default passes; at most the number of banks.
    pub passes: usize,
    /// Banks in default at the returned vector.
    pub defaulters: Vec<usize>,
}

/// Greatest clearing vector of a network without CDSes.
///
/// Starting with nobody in default, each pass solves the payment equations
/// `l_i r_i − Σ_{j∈D} c_{j,i} r_j = e_i + Σ_{j∉D} c_{j,i}` over the default
/// set `D` (everyone else pays in full) and adds every bank whose assets fall
/// short of its liabilities. The set only grows, so the loop ends after at
/// most `n` passes.
pub fn solve_debt_only(net: &FinancialNetwork) -> Result<DebtOnlySolution> {
    if net.has_cds() {
        return input("network contains CDS contracts");
    }
    let n = net.len();
    let liabilities: Vec<Rational> = (0..n).map(|i| net.total_debt(i)).collect();
    let mut defaulted = vec![false; n];
    let mut passes = 0;
    loop {
        passes += 1;
        let rates = payment_solve(net, &liabilities, &defaulted)?;
        let assets = net.evaluate(&rates).assets;
        let fresh: Vec<usize> =
            (0..n).filter(|&i| !defaulted[i] && !liabilities[i].is_zero() && assets[i] < liabilities[i]).collect();
        if fresh.is_empty() {
            let report = net.verify_crrv(&rates, &Rational::zero())?;
            let defaulters = (0..n).filter(|&i| defaulted[i]).collect();
            return Ok(DebtOnlySolution { report, passes, defaulters });
        }
        for i in fresh {
            defaulted[i] = true;
        }
    }
}

fn payment_solve(net: &FinancialNetwork, liabilities: &[Rational], defaulted: &[bool]) -> Result<Vec<Rational>> {
    let members: Vec<usize> = (0..net.len()).filter(|&i| defaulted[i]).collect();
    let mut rates = vec![Rational::one(); net.len()];
    if members.is_empty() {
        return Ok(rates);
    }
    let pos: std::collections::HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let m = members.len();
    let mut a = vec![vec![Rational::zero(); m]; m];
    let mut b: Vec<Rational> = members.iter().map(|&i| net.external_assets(i).clone()).collect();
    for (k, &i) in members.iter().enumerate() {
        a[k][k] = liabilities[i].clone();
    }
    for (d, c, v) in net.debts() {
        if let Some(&row) = pos.get(&c) {
            match pos.get(&d) {
                Some(&col) => a[row][col] -= v,
                None => b[row] += v,
            }
        }
    }
    let x =
        linalg::solve(&a, &b).ok_or_else(|| Error::Property("singular payment system in fictitious default".into()))?;
    for (k, &i) in members.iter().enumerate() {
        rates[i] = x[k].clone();
    }
    Ok(rates)
}

/// Name for the dummy creditor of a transform step, unique in `taken`.
fn dummy_name(reference: &str, creditor: &str, taken: &dyn Fn(&str) -> bool) -> String {
    let base = format!("dummy__{reference}__{creditor}");
    let mut name = base.clone();
    let mut k = 1;
    while taken(&name) {
        name = format!("{base}_{k}");
        k += 1;
    }
    name
}

fn check_capitalized_debtor(net: &FinancialNetwork, debtor: usize) -> Result<()> {
    if net.has_debts(debtor) {
        return property(format!("CDS debtor {:?} owes debt", net.id(debtor)));
    }
    if net.external_assets(debtor) < &net.worst_case_liability(debtor) {
        return property(format!("CDS debtor {:?} cannot cover its CDS notionals", net.id(debtor)));
    }
    Ok(())
}

/// Replaces the covered CDS `(debtor, creditor, reference)` by debt: the
/// creditor's external assets grow by the notional `x`, the reference bank's
/// debt to the creditor shrinks by `x` (and disappears at zero), and the
/// reference bank owes `x` to a fresh dummy bank instead.
pub fn transform_step(
    net: &FinancialNetwork,
    debtor: &str,
    creditor: &str,
    reference: &str,
) -> Result<FinancialNetwork> {
    let (d, j, r) = (net.index_of(debtor)?, net.index_of(creditor)?, net.index_of(reference)?);
    let x = net
        .cds_notional(d, j, r)
        .ok_or_else(|| Error::Input(format!("no CDS ({debtor:?}, {creditor:?}, {reference:?})")))?
        .clone();
    check_capitalized_debtor(net, d)?;
    let y = net.debt(r, j).cloned().unwrap_or_else(Rational::zero);
    if x > y {
        return property(format!("CDS ({debtor:?}, {creditor:?}, {reference:?}) is not covered"));
    }
    let mut b = net.to_builder();
    let e_j = net.external_assets(j) + &x;
    b.set_external_assets(creditor, e_j);
    b.set_debt(reference, creditor, &y - &x);
    let dummy = {
        let taken = |id: &str| b.has_bank(id);
        dummy_name(reference, creditor, &taken)
    };
    b.bank(&dummy, Rational::zero());
    b.debt(reference, &dummy, x);
    b.remove_cds(debtor, creditor, reference);
    b.build()
}

/// Clearing vector of a covered network by transforming every CDS and
/// solving the resulting debt-only network.
#[derive(Clone, Debug)]
pub struct CoveredSolution {
    pub report: ClearingReport,
    pub transformed: FinancialNetwork,
    pub passes: usize,
}

/// Transforms all CDSes in lexicographic order. Accepts several CDS debtors as
/// long as each owes no debt and covers its notionals.
pub fn transform_all(net: &FinancialNetwork) -> Result<FinancialNetwork> {
    let debtors: BTreeSet<usize> = net.cds_contracts().map(|(d, ..)| d).collect();
    for &d in &debtors {
        check_capitalized_debtor(net, d)?;
    }
    let check = net.check_covered();
    if !check.holds {
        return property(check.violations.join("; "));
    }
    let contracts: Vec<(String, String, String)> = net
        .cds_contracts()
        .map(|(d, c, r, _)| (net.id(d).to_string(), net.id(c).to_string(), net.id(r).to_string()))
        .collect();
    let mut current = net.clone();
    for (d, c, r) in contracts {
        current = transform_step(&current, &d, &c, &r)?;
    }
    Ok(current)
}

pub fn solve_covered_central(net: &FinancialNetwork) -> Result<CoveredSolution> {
    let transformed = transform_all(net)?;
    let solution = solve_debt_only(&transformed)?;
    let rates: Vec<Rational> = net
        .bank_ids()
        .iter()
        .map(|id| Ok(solution.report.rates[transformed.index_of(id)?].clone()))
        .collect::<Result<_>>()?;
    let report = net.verify_crrv(&rates, &Rational::zero())?;
    Ok(CoveredSolution { report, transformed, passes: solution.passes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;
    use crate::rational::{int, ratio};

    fn rates_by_id(net: &FinancialNetwork, r: &[Rational], id: &str) -> Rational {
        r[net.index_of(id).unwrap()].clone()
    }

    #[test]
    fn two_banks() {
        let mut b = NetworkBuilder::new();
        b.bank("A", ratio(1, 2)).bank("B", int(0)).debt("A", "B", int(1));
        let net = b.build().unwrap();
        let s = solve_debt_only(&net).unwrap();
        assert_eq!(s.report.rates, vec![ratio(1, 2), int(1)]);
        assert_eq!(s.report.max_residual, int(0));
    }

    #[test]
    fn chain() {
        let mut b = NetworkBuilder::new();
        b.bank("A", ratio(1, 2)).bank("B", int(0)).bank("C", int(0));
        b.debt("A", "B", int(1)).debt("B", "C", int(1));
        let s = solve_debt_only(&b.build().unwrap()).unwrap();
        assert_eq!(s.report.rates, vec![ratio(1, 2), ratio(1, 2), int(1)]);
        assert!(s.passes <= 3);
    }

    #[test]
    fn cycle_takes_greatest() {
        let mut b = NetworkBuilder::new();
        b.bank("A", int(0)).bank("B", int(0)).debt("A", "B", int(1)).debt("B", "A", int(1));
        let net = b.build().unwrap();
        let s = solve_debt_only(&net).unwrap();
        assert_eq!(s.report.rates, vec![int(1), int(1)]);
        assert!(net.verify_crrv(&[int(0), int(0)], &int(0)).unwrap().passed);
    }

    #[test]
    fn rejects_cds() {
        let mut b = NetworkBuilder::new();
        b.bank("d", int(1)).bank("j", int(0)).bank("R", int(0));
        b.cds("d", "j", "R", int(1)).debt("R", "j", int(1));
        assert!(solve_debt_only(&b.build().unwrap()).is_err());
    }

    fn covered_example() -> FinancialNetwork {
        // R owes j 5 but only has 5/2, so it defaults at 1/2; the CCD insures 3 of it.
        let mut b = NetworkBuilder::new();
        b.bank("ccd", int(3)).bank("j", int(0)).bank("R", ratio(5, 2)).bank("k", int(0));
        b.debt("R", "j", int(5)).debt("j", "k", int(4)).cds("ccd", "j", "R", int(3));
        b.build().unwrap()
    }

    #[test]
    fn transform_step_partial_cover() {
        let net = covered_example();
        let t = transform_step(&net, "ccd", "j", "R").unwrap();
        assert_eq!(t.external_assets(t.index_of("j").unwrap()), &int(3));
        let (r, j) = (t.index_of("R").unwrap(), t.index_of("j").unwrap());
        assert_eq!(t.debt(r, j), Some(&int(2)));
        assert_eq!(t.debt(r, t.index_of("dummy__R__j").unwrap()), Some(&int(3)));
        assert!(!t.has_cds());
        assert_eq!(t.total_debt(r), net.total_debt(net.index_of("R").unwrap()));
    }

    #[test]
    fn transform_step_full_cover_removes_debt() {
        let mut b = NetworkBuilder::new();
        b.bank("ccd", int(3)).bank("j", int(0)).bank("R", int(1));
        b.debt("R", "j", int(3)).cds("ccd", "j", "R", int(3));
        let t = transform_step(&b.build().unwrap(), "ccd", "j", "R").unwrap();
        let r = t.index_of("R").unwrap();
        assert_eq!(t.debt(r, t.index_of("j").unwrap()), None);
        assert_eq!(t.debt(r, t.index_of("dummy__R__j").unwrap()), Some(&int(3)));
    }

    #[test]
    fn transform_step_rejects_uncovered() {
        let mut b = NetworkBuilder::new();
        b.bank("ccd", int(3)).bank("j", int(0)).bank("R", int(1));
        b.debt("R", "j", int(2)).cds("ccd", "j", "R", int(3));
        assert!(matches!(transform_step(&b.build().unwrap(), "ccd", "j", "R"), Err(Error::Property(_))));
    }

    #[test]
    fn dummy_name_avoids_collision() {
        let mut b = NetworkBuilder::new();
        b.bank("ccd", int(3)).bank("j", int(0)).bank("R", int(1)).bank("dummy__R__j", int(0));
        b.debt("R", "j", int(3)).cds("ccd", "j", "R", int(1));
        let t = transform_step(&b.build().unwrap(), "ccd", "j", "R").unwrap();
        assert!(t.index_of("dummy__R__j_1").is_ok());
    }

    #[test]
    fn covered_solution_verifies() {
        let net = covered_example();
        let s = solve_covered_central(&net).unwrap();
        assert!(s.report.passed);
        assert_eq!(rates_by_id(&net, &s.report.rates, "R"), ratio(1, 2));
        // j receives 5/2 from R plus 3/2 from the CDS against a debt of 4.
        assert_eq!(rates_by_id(&net, &s.report.rates, "j"), int(1));
    }

    #[test]
    fn no_cds_matches_debt_only() {
        let mut b = NetworkBuilder::new();
        b.bank("A", ratio(1, 2)).bank("B", int(0)).debt("A", "B", int(1));
        let net = b.build().unwrap();
        assert_eq!(solve_covered_central(&net).unwrap().report.rates, solve_debt_only(&net).unwrap().report.rates);
    }
}
