//! Worked instances used by the CLI, the tests and the documentation.

use crate::circuit::PureCircuit;
use crate::error::{input, Result};
use crate::network::{FinancialNetwork, NetworkBuilder};
use crate::rational::{int, Rational};
use num_traits::{One, Zero};

/// The three-gate circuit whose compiled network has bank `b_v` as the
/// reference of three CDSes.
pub const SAMPLE_CIRCUIT: &str = "NOT u v\nOR v w y\nPURIFY v u w\n";

pub fn sample_circuit() -> PureCircuit {
    PureCircuit::parse(SAMPLE_CIRCUIT).expect("built-in circuit parses")
}

/// Six banks where 2 and 5 each owe a unit debt and insure each other's
/// creditor with a unit CDS, holding `1 - c` in cash. For `c` in `(0, 1)` the
/// clearing rates of banks 2 and 5 are `1 - sqrt(c)`.
pub fn mutual_insurance(c: &Rational) -> Result<FinancialNetwork> {
    if !(*c > Rational::zero() && *c < Rational::one()) {
        return input("c must lie in (0, 1)");
    }
    let cash = Rational::one() - c;
    let mut b = NetworkBuilder::new();
    for id in ["1", "3", "4", "6"] {
        b.bank(id, int(0));
    }
    b.bank("2", cash.clone()).bank("5", cash);
    b.debt("2", "3", int(1)).debt("5", "4", int(1));
    b.cds("2", "1", "5", int(1)).cds("5", "6", "2", int(1));
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn mutual_insurance_quarter_clears_at_half() {
        let net = mutual_insurance(&ratio(1, 4)).unwrap();
        let mut r = vec![int(1); 6];
        r[net.index_of("2").unwrap()] = ratio(1, 2);
        r[net.index_of("5").unwrap()] = ratio(1, 2);
        assert!(net.verify_crrv(&r, &int(0)).unwrap().passed);
        assert!(net.check_nondegenerate().holds);
    }

    #[test]
    fn mutual_insurance_rejects_out_of_range() {
        assert!(mutual_insurance(&int(0)).is_err());
        assert!(mutual_insurance(&int(1)).is_err());
    }

    #[test]
    fn sample_circuit_parses() {
        assert_eq!(sample_circuit().gates().len(), 3);
    }
}
