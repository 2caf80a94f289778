//! Output ranges of the gate gadgets in the interval calculus, and the table
//! that checks them against the claimed decode bands.

use crate::circuit::GateKind;
use crate::error::{input, Result};
use crate::interval::{add, one_minus, pm_interval, pm_number, scale, Tagged, UnitInterval};
use crate::params::GadgetParams;
use crate::rational::{int, ratio, Rational};
use num_traits::{One, Zero};
use std::collections::HashMap;

fn check_unit_parameter(name: &str, x: &Rational) -> Result<()> {
    if *x <= Rational::zero() || *x >= ratio(1, 2) {
        return input(format!("{name} = {x} is outside (0, 1/2)"));
    }
    Ok(())
}

fn check_rate(x: &Rational) -> Result<()> {
    if *x < Rational::zero() || *x > Rational::one() {
        return input(format!("input rate {x} is outside [0, 1]"));
    }
    Ok(())
}

/// Rate range of a bank receiving `notional · (1 − r_ref)` against a unit debt.
fn cds_stage(notional: &Rational, reference: &Tagged, eps: &Rational) -> Result<Tagged> {
    pm_interval(&scale(notional, &one_minus(reference))?, eps)
}

/// Bank 6 of the NOT chain (bank 6 or 12 in OR) for input rate `r`.
fn not_chain(r: &Rational, p: &GadgetParams) -> Result<Tagged> {
    let r3 = pm_number(&(p.first_stage() * (Rational::one() - r)), &p.epsilon)?;
    cds_stage(&p.amplifier(), &r3, &p.epsilon)
}

/// Output ranges of a gadget for point input rates, one interval per output.
/// `delta` and `eps` need not satisfy the encoding equation.
pub fn gate_output_range(
    kind: GateKind,
    inputs: &[Rational],
    delta: &Rational,
    eps: &Rational,
) -> Result<Vec<UnitInterval>> {
    check_unit_parameter("δ", delta)?;
    check_unit_parameter("ε", eps)?;
    let p = GadgetParams { delta: delta.clone(), epsilon: eps.clone() };
    output_range(kind, inputs, &p, &mut HashMap::new())
}

/// As [`gate_output_range`], reusing NOT-chain ranges already in `chains`.
fn output_range(
    kind: GateKind,
    inputs: &[Rational],
    p: &GadgetParams,
    chains: &mut HashMap<Rational, Tagged>,
) -> Result<Vec<UnitInterval>> {
    if inputs.len() != kind.arity().0 {
        return input(format!("{} takes {} input rate(s)", kind.name(), kind.arity().0));
    }
    inputs.iter().try_for_each(check_rate)?;
    let eps = &p.epsilon;
    let one = Rational::one();
    let mut chain = |r: &Rational| -> Result<Tagged> {
        if let Some(t) = chains.get(r) {
            return Ok(t.clone());
        }
        let t = not_chain(r, p)?;
        chains.insert(r.clone(), t.clone());
        Ok(t)
    };
    Ok(match kind {
        GateKind::Not => {
            let r6 = chain(&inputs[0])?;
            vec![pm_interval(&one_minus(&r6), eps)?.interval]
        }
        GateKind::Or => {
            let (r6, r12) = (chain(&inputs[0])?, chain(&inputs[1])?);
            vec![pm_interval(&add(&r6, &r12)?, eps)?.interval]
        }
        GateKind::Purify => {
            let r3 = pm_number(&(p.first_stage() * (&one - &inputs[0])), eps)?;
            let r6 = pm_number(&(int(2) * (&one - &inputs[0])), eps)?;
            vec![cds_stage(&p.purify_left(), &r3, eps)?.interval, cds_stage(&p.purify_right(), &r6, eps)?.interval]
        }
    })
}

/// Which part of [0,1] an input rate is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Band {
    Zero,
    Bottom,
    One,
}

impl Band {
    pub const ALL: [Band; 3] = [Band::Zero, Band::Bottom, Band::One];

    /// `n` evenly spaced rates in the band; closed bands include their ends,
    /// the open middle band excludes them.
    pub fn grid(self, p: &GadgetParams, n: usize) -> Vec<Rational> {
        let (lo, hi) = match self {
            Band::Zero => (Rational::zero(), p.zero_band_top()),
            Band::Bottom => (p.zero_band_top(), p.one_band_bottom()),
            Band::One => (p.one_band_bottom(), Rational::one()),
        };
        let width = &hi - &lo;
        match (self, n) {
            (_, 0) => Vec::new(),
            (Band::Bottom, _) => (1..=n).map(|k| &lo + &width * ratio(k as i64, n as i64 + 1)).collect(),
            (_, 1) => vec![lo],
            _ => (0..n).map(|k| &lo + &width * ratio(k as i64, n as i64 - 1)).collect(),
        }
    }
}

fn low_band(width: Rational) -> UnitInterval {
    UnitInterval::clamped(Rational::zero(), width)
}

fn high_band(width: Rational) -> UnitInterval {
    UnitInterval::clamped(Rational::one() - width, Rational::one())
}

/// One statement of the gadget claims: the band each output must land in.
#[derive(Clone, Debug)]
pub struct ClaimStatement {
    pub gate: GateKind,
    pub number: u8,
    pub text: &'static str,
    /// Input samples as rate vectors.
    pub samples: Vec<Vec<Rational>>,
    /// Per output: claimed band. For the "or" statement, one output suffices.
    pub claimed: Vec<UnitInterval>,
    pub simulation: Vec<UnitInterval>,
    pub any_output: bool,
}

/// Outcome of checking one statement over its samples.
#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub gate: GateKind,
    pub number: u8,
    pub text: &'static str,
    pub samples: usize,
    pub claimed_failures: usize,
    pub simulation_failures: usize,
    /// First sample that misses the claimed band, with its output ranges.
    pub first_failure: Option<(Vec<Rational>, Vec<UnitInterval>)>,
}

impl ClaimResult {
    pub fn claimed_ok(&self) -> bool {
        self.claimed_failures == 0
    }

    pub fn simulation_ok(&self) -> bool {
        self.simulation_failures == 0
    }
}

/// The seven claim statements with `per_band` samples along each varied input.
/// OR statements pair every varied sample with `cross` samples per band of the
/// other input.
pub fn claim_statements(p: &GadgetParams, per_band: usize, cross: usize) -> Vec<ClaimStatement> {
    let d = &p.delta;
    let e = &p.epsilon;
    let not_w = (int(1) + int(10) * d) / (int(4) * d) * e;
    let or_low = (int(1) + int(8) * d) / (int(2) * d) * e;
    let pur_v = (int(1) + int(4) * d) / (int(2) * d) * e;
    let pur_w = (int(1) + int(2) * d) / (int(2) * d) * e;
    let sim = p.simulation_width();
    let zero = Band::Zero.grid(p, per_band);
    let one = Band::One.grid(p, per_band);
    let bottom = Band::Bottom.grid(p, per_band);
    let singles = |g: &[Rational]| g.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>();
    let others: Vec<Rational> = Band::ALL.iter().flat_map(|b| b.grid(p, cross)).collect();
    let pairs = |varied: &[Rational], other: &[Rational]| {
        let mut out = Vec::new();
        for x in varied {
            for y in other {
                out.push(vec![x.clone(), y.clone()]);
                out.push(vec![y.clone(), x.clone()]);
            }
        }
        out
    };
    vec![
        ClaimStatement {
            gate: GateKind::Not,
            number: 1,
            text: "input 0 gives output 1",
            samples: singles(&zero),
            claimed: vec![high_band(not_w.clone())],
            simulation: vec![high_band(sim.clone())],
            any_output: false,
        },
        ClaimStatement {
            gate: GateKind::Not,
            number: 2,
            text: "input 1 gives output 0",
            samples: singles(&one),
            claimed: vec![low_band(not_w.clone())],
            simulation: vec![low_band(sim.clone())],
            any_output: false,
        },
        ClaimStatement {
            gate: GateKind::Or,
            number: 1,
            text: "an input 1 gives output 1",
            samples: pairs(&one, &others),
            claimed: vec![high_band(not_w)],
            simulation: vec![high_band(sim.clone())],
            any_output: false,
        },
        ClaimStatement {
            gate: GateKind::Or,
            number: 2,
            text: "inputs 0, 0 give output 0",
            samples: pairs(&zero, &Band::Zero.grid(p, cross)),
            claimed: vec![low_band(or_low)],
            simulation: vec![low_band(sim.clone())],
            any_output: false,
        },
        ClaimStatement {
            gate: GateKind::Purify,
            number: 1,
            text: "input 0 gives outputs 0, 0",
            samples: singles(&zero),
            claimed: vec![low_band(pur_v.clone()), low_band(pur_w.clone())],
            simulation: vec![low_band(sim.clone()), low_band(sim.clone())],
            any_output: false,
        },
        ClaimStatement {
            gate: GateKind::Purify,
            number: 2,
            text: "input 1 gives outputs 1, 1",
            samples: singles(&one),
            claimed: vec![high_band(pur_v.clone()), high_band(pur_w.clone())],
            simulation: vec![high_band(sim.clone()), high_band(sim.clone())],
            any_output: false,
        },
        ClaimStatement {
            gate: GateKind::Purify,
            number: 3,
            text: "input bot gives left 1 or right 0",
            samples: singles(&bottom),
            claimed: vec![high_band(pur_v), low_band(pur_w)],
            simulation: vec![high_band(sim.clone()), low_band(sim)],
            any_output: true,
        },
    ]
}

fn lands(outputs: &[UnitInterval], bands: &[UnitInterval], any: bool) -> bool {
    let mut hits = outputs.iter().zip(bands).map(|(o, b)| o.is_subset_of(b));
    if any {
        hits.any(|h| h)
    } else {
        hits.all(|h| h)
    }
}

/// Evaluates every statement with [`gate_output_range`].
pub fn check_claims(p: &GadgetParams, per_band: usize, cross: usize) -> Result<Vec<ClaimResult>> {
    check_unit_parameter("δ", &p.delta)?;
    check_unit_parameter("ε", &p.epsilon)?;
    let mut chains = HashMap::new();
    claim_statements(p, per_band, cross)
        .into_iter()
        .map(|st| {
            let mut result = ClaimResult {
                gate: st.gate,
                number: st.number,
                text: st.text,
                samples: st.samples.len(),
                claimed_failures: 0,
                simulation_failures: 0,
                first_failure: None,
            };
            for sample in &st.samples {
                let out = output_range(st.gate, sample, p, &mut chains)?;
                if !lands(&out, &st.simulation, st.any_output) {
                    result.simulation_failures += 1;
                }
                if !lands(&out, &st.claimed, st.any_output) {
                    result.claimed_failures += 1;
                    if result.first_failure.is_none() {
                        result.first_failure = Some((sample.clone(), out));
                    }
                }
            }
            Ok(result)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::optimal_params;

    #[test]
    fn not_at_band_edge_meets_claim_exactly() {
        let p = optimal_params();
        let out = gate_output_range(GateKind::Not, &[p.zero_band_top()], &p.delta, &p.epsilon).unwrap();
        let d = &p.delta;
        let width = (int(1) + int(10) * d) / (int(4) * d) * &p.epsilon;
        assert_eq!(out[0], high_band(width));
    }

    #[test]
    fn or_of_zeros_stays_low() {
        let p = optimal_params();
        let out = gate_output_range(GateKind::Or, &[int(0), int(0)], &p.delta, &p.epsilon).unwrap();
        assert!(out[0].is_subset_of(&low_band(p.simulation_width())));
    }

    #[test]
    fn purify_half_satisfies_statement_three() {
        let p = optimal_params();
        let out = gate_output_range(GateKind::Purify, &[ratio(1, 2)], &p.delta, &p.epsilon).unwrap();
        let d = &p.delta;
        let left = high_band((int(1) + int(4) * d) / (int(2) * d) * &p.epsilon);
        let right = low_band((int(1) + int(2) * d) / (int(2) * d) * &p.epsilon);
        assert!(out[0].is_subset_of(&left) || out[1].is_subset_of(&right));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gate_output_range(GateKind::Not, &[int(0)], &int(0), &ratio(1, 10)).is_err());
        assert!(gate_output_range(GateKind::Not, &[int(2)], &ratio(1, 10), &ratio(1, 10)).is_err());
        assert!(gate_output_range(GateKind::Or, &[int(0)], &ratio(1, 10), &ratio(1, 10)).is_err());
    }

    #[test]
    fn grids_respect_bands() {
        let p = optimal_params();
        let z = Band::Zero.grid(&p, 5);
        assert_eq!(z.first(), Some(&int(0)));
        assert_eq!(z.last(), Some(&p.zero_band_top()));
        let b = Band::Bottom.grid(&p, 3);
        assert!(b.iter().all(|x| *x > p.zero_band_top() && *x < p.one_band_bottom()));
    }
}
