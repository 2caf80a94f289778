//! Damped fixed-point iteration on the clearing function, with a Newton
//! polish and seeded multi-start for networks where plain iteration cycles
//! or diverges. Results are heuristic; every report carries the residual
//! recomputed by `verify_crrv`.

use crate::error::{property, Result};
use crate::linalg;
use crate::network::{ClearingReport, FinancialNetwork};
use crate::rational::{clamp01, precision, ratio, round_significant, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Iterations without a new best residual before the iteration gives up.
pub const PATIENCE: usize = 200;

/// Significant digits kept in Newton Jacobians.
const JACOBIAN_DIGITS: u32 = 24;

/// Halvings tried by the Newton line search.
const LINE_SEARCH_STEPS: u32 = 40;

#[derive(Clone, Debug)]
pub struct IterationOutcome {
    pub report: ClearingReport,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the start that produced the report (0 for a single run).
    pub start: usize,
    /// Newton steps taken after the damped iteration.
    pub newton_steps: usize,
}

/// Damping 1 when no bank's payments depend cyclically on its own rate,
/// 1/2 otherwise.
pub fn default_damping(net: &FinancialNetwork) -> Rational {
    if net.has_dependency_cycle() {
        ratio(1, 2)
    } else {
        Rational::one()
    }
}

fn check_network(net: &FinancialNetwork) -> Result<()> {
    let check = net.check_nondegenerate();
    if !check.holds {
        return property(check.violations.join("; "));
    }
    Ok(())
}

fn pinned(net: &FinancialNetwork) -> Vec<bool> {
    (0..net.len()).map(|i| net.is_trivially_solvent(i)).collect()
}

fn max_residual(r: &[Rational], f: &[Rational]) -> Rational {
    r.iter().zip(f).map(|(x, y)| if x > y { x - y } else { y - x }).max().unwrap_or_else(Rational::zero)
}

/// `r <- (1 - damping) r + damping f(r)` from `r0` (all ones by default),
/// with trivially solvent banks pinned to 1 and every step rounded to the
/// working precision. Stops at residual `<= target_eps`, after `max_iter`
/// steps, or after [`PATIENCE`] steps without improvement, returning the best
/// vector seen.
pub fn iterate(
    net: &FinancialNetwork,
    r0: Option<&[Rational]>,
    damping: &Rational,
    max_iter: usize,
    target_eps: &Rational,
) -> Result<IterationOutcome> {
    check_network(net)?;
    if !(damping.is_positive() && *damping <= Rational::one()) {
        return crate::error::input("damping must lie in (0, 1]");
    }
    let pin = pinned(net);
    let digits = precision();
    let mut r: Vec<Rational> = match r0 {
        Some(r0) => {
            net.check_rates(r0)?;
            r0.to_vec()
        }
        None => vec![Rational::one(); net.len()],
    };
    for (x, &p) in r.iter_mut().zip(&pin) {
        if p {
            *x = Rational::one();
        }
    }
    let mut best = (None::<Rational>, r.clone(), 0usize);
    let mut iterations = 0;
    loop {
        let f = net.apply_f(&r)?;
        let residual = max_residual(&r, &f);
        if best.0.as_ref().is_none_or(|b| residual < *b) {
            best = (Some(residual.clone()), r.clone(), iterations);
        }
        if residual <= *target_eps || iterations >= max_iter || iterations - best.2 >= PATIENCE {
            break;
        }
        r = r
            .iter()
            .zip(&f)
            .zip(&pin)
            .map(
                |((x, y), &p)| {
                    if p {
                        Rational::one()
                    } else {
                        clamp01(&round_significant(&(x + damping * (y - x)), digits))
                    }
                },
            )
            .collect();
        iterations += 1;
    }
    let report = net.verify_crrv(&best.1, target_eps)?;
    Ok(IterationOutcome {
        converged: report.max_residual <= *target_eps,
        report,
        iterations,
        start: 0,
        newton_steps: 0,
    })
}

/// Jacobian of the active piece of `f` at `r`: rows of banks paying in full
/// (or pinned) are zero, defaulting rows differentiate `a_i(r) / l_i(r)`.
fn jacobian(net: &FinancialNetwork, r: &[Rational], pin: &[bool]) -> Vec<Vec<Rational>> {
    let n = net.len();
    let eval = net.evaluate(r);
    let mut da = vec![vec![Rational::zero(); n]; n];
    let mut dl = vec![vec![Rational::zero(); n]; n];
    for (d, c, v) in net.debts() {
        da[c][d] += v;
    }
    for (d, c, k, v) in net.cds_contracts() {
        da[c][d] += (Rational::one() - &r[k]) * v;
        da[c][k] -= &r[d] * v;
        dl[d][k] -= v;
    }
    let mut jac = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let (a, l) = (&eval.assets[i], &eval.liabilities[i]);
        if pin[i] || l.is_zero() || a >= l {
            continue;
        }
        let l2 = l * l;
        for m in 0..n {
            if !da[i][m].is_zero() || !dl[i][m].is_zero() {
                let v = (&da[i][m] * l - a * &dl[i][m]) / &l2;
                jac[i][m] = round_significant(&v, JACOBIAN_DIGITS);
            }
        }
    }
    jac
}

/// Semismooth Newton on `r - f(r) = 0` with a residual-decrease line search,
/// projected onto `[0, 1]^n`. Returns the improved vector and the steps taken.
pub fn newton_polish(
    net: &FinancialNetwork,
    r0: &[Rational],
    max_steps: usize,
    target_eps: &Rational,
) -> Result<(Vec<Rational>, usize)> {
    check_network(net)?;
    net.check_rates(r0)?;
    let pin = pinned(net);
    let digits = precision();
    let n = net.len();
    let mut r = r0.to_vec();
    let mut f = net.apply_f(&r)?;
    let mut residual = max_residual(&r, &f);
    let mut steps = 0;
    while steps < max_steps && residual > *target_eps {
        let jac = jacobian(net, &r, &pin);
        let a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|m| if i == m { Rational::one() - &jac[i][m] } else { -&jac[i][m] }).collect())
            .collect();
        let b: Vec<Rational> = f.iter().zip(&r).map(|(y, x)| y - x).collect();
        let Some(delta) = linalg::solve(&a, &b) else { break };
        let mut t = Rational::one();
        let mut accepted = None;
        for _ in 0..LINE_SEARCH_STEPS {
            let trial: Vec<Rational> =
                r.iter().zip(&delta).map(|(x, d)| clamp01(&round_significant(&(x + &t * d), digits))).collect();
            let trial_f = net.apply_f(&trial)?;
            let trial_residual = max_residual(&trial, &trial_f);
            if trial_residual < residual {
                accepted = Some((trial, trial_f, trial_residual));
                break;
            }
            t /= Rational::from_integer(BigInt::from(2));
        }
        let Some((next, next_f, next_residual)) = accepted else { break };
        r = next;
        f = next_f;
        residual = next_residual;
        steps += 1;
    }
    Ok((r, steps))
}

/// Runs [`iterate`] from `starts` seeded random vectors, polishing any run
/// that misses `target_eps` with [`newton_polish`], and returns the run with
/// the smallest residual (earlier start on ties).
pub fn multi_start(
    net: &FinancialNetwork,
    starts: usize,
    seed: u64,
    damping: &Rational,
    max_iter: usize,
    target_eps: &Rational,
) -> Result<IterationOutcome> {
    check_network(net)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<IterationOutcome> = None;
    for start in 0..starts.max(1) {
        let r0: Vec<Rational> = (0..net.len()).map(|_| ratio(rng.gen::<u32>() as i64, u32::MAX as i64)).collect();
        let mut outcome = run_polished(net, Some(&r0), damping, max_iter, target_eps)?;
        outcome.start = start;
        if best.as_ref().is_none_or(|b| outcome.report.max_residual < b.report.max_residual) {
            best = Some(outcome);
        }
    }
    Ok(best.expect("at least one start"))
}

/// [`iterate`] followed by [`newton_polish`] when the target is missed.
pub fn run_polished(
    net: &FinancialNetwork,
    r0: Option<&[Rational]>,
    damping: &Rational,
    max_iter: usize,
    target_eps: &Rational,
) -> Result<IterationOutcome> {
    let mut outcome = iterate(net, r0, damping, max_iter, target_eps)?;
    if !outcome.converged {
        let (r, steps) = newton_polish(net, &outcome.report.rates, max_iter, target_eps)?;
        let report = net.verify_crrv(&r, target_eps)?;
        if report.max_residual < outcome.report.max_residual {
            outcome.converged = report.max_residual <= *target_eps;
            outcome.report = report;
            outcome.newton_steps = steps;
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covered::solve_debt_only;
    use crate::network::NetworkBuilder;
    use crate::rational::{int, parse_rational, to_f64};

    fn mutual_insurance(c: Rational) -> FinancialNetwork {
        let mut b = NetworkBuilder::new();
        for id in ["1", "3", "4", "6"] {
            b.bank(id, int(0));
        }
        b.bank("2", int(1) - &c).bank("5", int(1) - &c);
        b.debt("2", "3", int(1)).debt("5", "4", int(1));
        b.cds("2", "1", "5", int(1)).cds("5", "6", "2", int(1));
        b.build().unwrap()
    }

    #[test]
    fn mutual_insurance_quarter() {
        let net = mutual_insurance(ratio(1, 4));
        let eps = parse_rational("1e-9").unwrap();
        let out = iterate(&net, None, &int(1), 100_000, &eps).unwrap();
        assert!(out.converged);
        for id in ["2", "5"] {
            let r = &out.report.rates[net.index_of(id).unwrap()];
            assert!((to_f64(r) - 0.5).abs() <= 1e-9);
        }
    }

    #[test]
    fn mutual_insurance_ninth() {
        let net = mutual_insurance(ratio(1, 9));
        let out = iterate(&net, None, &int(1), 100_000, &parse_rational("1e-12").unwrap()).unwrap();
        assert!((to_f64(&out.report.rates[net.index_of("2").unwrap()]) - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn newton_reaches_same_point() {
        let net = mutual_insurance(ratio(1, 2));
        let start = vec![int(1); net.len()];
        let (r, steps) = newton_polish(&net, &start, 50, &parse_rational("1e-30").unwrap()).unwrap();
        assert!(steps > 0);
        assert!((to_f64(&r[net.index_of("2").unwrap()]) - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn debt_only_matches_exact() {
        let mut b = NetworkBuilder::new();
        b.bank("A", ratio(1, 2)).bank("B", int(0)).bank("C", int(0)).bank("D", int(1));
        b.debt("A", "B", int(1)).debt("B", "C", int(2)).debt("C", "A", int(1)).debt("D", "C", int(3));
        let net = b.build().unwrap();
        let exact = solve_debt_only(&net).unwrap().report.rates;
        let eps = parse_rational("1e-12").unwrap();
        let out = iterate(&net, None, &int(1), 100_000, &eps).unwrap();
        assert!(out.converged);
        for (x, y) in out.report.rates.iter().zip(&exact) {
            assert!((to_f64(x) - to_f64(y)).abs() < 1e-9);
        }
    }

    #[test]
    fn dag_converges_exactly() {
        let mut b = NetworkBuilder::new();
        b.bank("A", ratio(1, 2)).bank("B", int(0)).bank("C", int(0));
        b.debt("A", "B", int(1)).debt("B", "C", int(1));
        let net = b.build().unwrap();
        let out = iterate(&net, None, &int(1), 10, &int(0)).unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 2);
    }

    #[test]
    fn rejects_degenerate() {
        let mut b = NetworkBuilder::new();
        b.bank("d", int(0)).bank("j", int(0)).bank("R", int(0));
        b.debt("R", "j", int(1)).cds("d", "j", "R", int(1));
        let net = b.build().unwrap();
        assert!(iterate(&net, None, &int(1), 10, &int(0)).is_err());
    }

    #[test]
    fn multi_start_is_deterministic() {
        let net = mutual_insurance(ratio(1, 4));
        let eps = parse_rational("1e-9").unwrap();
        let a = multi_start(&net, 3, 7, &ratio(1, 2), 10_000, &eps).unwrap();
        let b = multi_start(&net, 3, 7, &ratio(1, 2), 10_000, &eps).unwrap();
        assert_eq!(a.report.rates, b.report.rates);
        assert_eq!(a.start, b.start);
    }

    #[test]
    fn rejects_bad_damping() {
        let net = mutual_insurance(ratio(1, 4));
        assert!(iterate(&net, None, &int(0), 10, &int(0)).is_err());
        assert!(iterate(&net, None, &int(2), 10, &int(0)).is_err());
    }
}
