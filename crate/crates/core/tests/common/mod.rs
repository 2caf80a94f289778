//! Seeded random networks shared by the integration tests.
#![allow(dead_code)]

use finclear_core::rational::int;
use finclear_core::{FinancialNetwork, NetworkBuilder, Rational};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Uniform rational in [0, 1] with denominator `den`.
pub fn unit(rng: &mut ChaCha8Rng, den: i64) -> Rational {
    Rational::new(rng.gen_range(0..=den).into(), den.into())
}

/// Uniform rational in [lo, hi] with denominator `den`.
pub fn between(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(lo * den..=hi * den).into(), den.into())
}

/// Debt-only network with `n` banks; roughly one bank in five is a sink.
pub fn debt_only(rng: &mut ChaCha8Rng, n: usize) -> FinancialNetwork {
    let ids: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let mut b = NetworkBuilder::new();
    for id in &ids {
        b.bank(id, int(rng.gen_range(0..=5)));
    }
    for (i, id) in ids.iter().enumerate() {
        if n < 2 || rng.gen_bool(0.2) {
            continue;
        }
        for _ in 0..rng.gen_range(1..=3) {
            let j = (i + rng.gen_range(1..n)) % n;
            b.debt(id, &ids[j], int(rng.gen_range(1..=9)));
        }
    }
    b.build().expect("generated network is valid")
}

/// Shape of a random central-CDS-debtor network.
#[derive(Clone, Copy, Debug)]
pub struct CcdShape {
    pub banks: usize,
    pub sinks: usize,
    pub cds: usize,
    /// Keep every CDS notional within the reference bank's debt to the creditor.
    pub covered: bool,
}

/// Network with a central CDS debtor `ccd`, `banks` debtor banks `b<i>` that
/// each owe at least one debt, and `sinks` banks `s<i>` that owe nothing.
pub fn ccd_network(rng: &mut ChaCha8Rng, shape: CcdShape) -> FinancialNetwork {
    let debtors: Vec<String> = (0..shape.banks).map(|i| format!("b{i}")).collect();
    let sinks: Vec<String> = (0..shape.sinks).map(|i| format!("s{i}")).collect();
    let all: Vec<&String> = debtors.iter().chain(&sinks).collect();
    let mut b = NetworkBuilder::new();
    for id in &all {
        b.bank(id, int(rng.gen_range(0..=4)));
    }
    let mut debts: BTreeMap<(String, String), i64> = BTreeMap::new();
    for id in &debtors {
        for _ in 0..rng.gen_range(1..=3) {
            let creditor = loop {
                let c = all.choose(rng).expect("at least two banks");
                if *c != id {
                    break (*c).clone();
                }
            };
            *debts.entry((id.clone(), creditor)).or_default() += rng.gen_range(1..=6);
        }
    }
    for ((d, c), v) in &debts {
        b.debt(d, c, int(*v));
    }
    let mut capacity = debts.clone();
    let mut total = 0;
    for _ in 0..shape.cds {
        let (reference, creditor, x) = if shape.covered {
            let open: Vec<_> = capacity.iter().filter(|(_, &v)| v > 0).map(|(k, &v)| (k.clone(), v)).collect();
            let Some(((r, c), room)) = open.choose(rng).cloned() else { break };
            let x = rng.gen_range(1..=room);
            *capacity.get_mut(&(r.clone(), c.clone())).expect("open debt") -= x;
            (r, c, x)
        } else {
            let r = debtors.choose(rng).expect("at least one debtor").clone();
            let c = loop {
                let c = all.choose(rng).expect("at least two banks");
                if **c != r {
                    break (*c).clone();
                }
            };
            (r, c, rng.gen_range(1..=6))
        };
        b.cds("ccd", &creditor, &reference, int(x));
        total += x;
    }
    b.bank("ccd", int(total + rng.gen_range(0..=2)));
    b.build().expect("generated network is valid")
}
