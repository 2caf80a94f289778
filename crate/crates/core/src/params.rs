//! The gadget parameters δ and ε tied by `(1+8δ)/(2δ)·ε = 1/2 − δ`.

use crate::error::{input, Result};
use crate::rational::{int, ratio, sqrt, Rational};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetParams {
    pub delta: Rational,
    pub epsilon: Rational,
}

/// `ε(δ) = δ(1 − 2δ)/(1 + 8δ)`.
pub fn epsilon_for(delta: &Rational) -> Rational {
    delta * (Rational::one() - int(2) * delta) / (Rational::one() + int(8) * delta)
}

pub fn params_from_delta(delta: &Rational) -> Result<GadgetParams> {
    if *delta <= Rational::zero() || *delta >= ratio(1, 2) {
        return input(format!("δ = {delta} is outside (0, 1/2)"));
    }
    Ok(GadgetParams { delta: delta.clone(), epsilon: epsilon_for(delta) })
}

/// The rational default δ = 2/13, ε = 18/377, close to the irrational optimum.
pub fn optimal_params() -> GadgetParams {
    params_from_delta(&ratio(2, 13)).expect("2/13 lies in (0, 1/2)")
}

/// `(√5 − 1)/8` to about `digits` significant digits.
pub fn optimal_delta(digits: u32) -> Rational {
    (sqrt(&int(5), digits) - int(1)) / int(8)
}

/// `(3 − √5)/16` to about `digits` significant digits.
pub fn optimal_epsilon(digits: u32) -> Rational {
    (int(3) - sqrt(&int(5), digits)) / int(16)
}

impl GadgetParams {
    pub fn half(&self) -> Rational {
        ratio(1, 2)
    }

    /// Upper end of the 0 band and lower end of the 1 band: `1/2 ∓ δ`.
    pub fn zero_band_top(&self) -> Rational {
        ratio(1, 2) - &self.delta
    }

    pub fn one_band_bottom(&self) -> Rational {
        ratio(1, 2) + &self.delta
    }

    /// `(1+8δ)/(2δ)·ε`, the widest output deviation of any gadget.
    pub fn simulation_width(&self) -> Rational {
        (int(1) + int(8) * &self.delta) / (int(2) * &self.delta) * &self.epsilon
    }

    pub fn satisfies_encoding(&self) -> bool {
        self.simulation_width() == self.zero_band_top()
    }

    /// CDS notional feeding the first stage of NOT, OR and left PURIFY: `2/(1+2δ)`.
    pub fn first_stage(&self) -> Rational {
        int(2) / (int(1) + int(2) * &self.delta)
    }

    /// CDS notional of the amplifying stage of NOT and OR: `(1+2δ)/(4δ)`.
    pub fn amplifier(&self) -> Rational {
        (int(1) + int(2) * &self.delta) / (int(4) * &self.delta)
    }

    /// Left PURIFY amplifier `(1+2δ)/(2δ)`.
    pub fn purify_left(&self) -> Rational {
        (int(1) + int(2) * &self.delta) / (int(2) * &self.delta)
    }

    /// Right PURIFY amplifier `1/(2δ)`.
    pub fn purify_right(&self) -> Rational {
        Rational::one() / (int(2) * &self.delta)
    }
}
