//! Clamped interval arithmetic on subintervals of [0,1].
//!
//! Addition and scaling branch on the centre of their operands, so values
//! built from a ball `x ± ε` carry that representation as a [`PmForm`] tag.
//! The interval itself is always computed by the clamped endpoint rules; the
//! tag follows the substitution rules and is only consulted for branching.

use crate::error::{input, Result};
use crate::rational::{clamp01, Rational};
use num_traits::{One, Signed, Zero};

/// A closed subinterval of [0,1], or the empty interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitInterval {
    Empty,
    Closed { lo: Rational, hi: Rational },
}

impl UnitInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo.is_negative() || hi > Rational::one() || lo > hi {
            return input(format!("[{lo}, {hi}] is not a subinterval of [0,1]"));
        }
        Ok(UnitInterval::Closed { lo, hi })
    }

    pub fn point(x: Rational) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    pub fn full() -> Self {
        UnitInterval::Closed { lo: Rational::zero(), hi: Rational::one() }
    }

    /// `[lo, hi] ∩ [0, 1]`.
    pub fn clamped(lo: Rational, hi: Rational) -> Self {
        let lo = if lo.is_negative() { Rational::zero() } else { lo };
        let hi = if hi > Rational::one() { Rational::one() } else { hi };
        if lo > hi {
            UnitInterval::Empty
        } else {
            UnitInterval::Closed { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, UnitInterval::Empty)
    }

    pub fn lo(&self) -> Option<&Rational> {
        match self {
            UnitInterval::Closed { lo, .. } => Some(lo),
            UnitInterval::Empty => None,
        }
    }

    pub fn hi(&self) -> Option<&Rational> {
        match self {
            UnitInterval::Closed { hi, .. } => Some(hi),
            UnitInterval::Empty => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            UnitInterval::Closed { lo, hi } => lo <= x && x <= hi,
            UnitInterval::Empty => false,
        }
    }

    pub fn is_subset_of(&self, other: &UnitInterval) -> bool {
        match (self, other) {
            (UnitInterval::Empty, _) => true,
            (UnitInterval::Closed { .. }, UnitInterval::Empty) => false,
            (UnitInterval::Closed { lo, hi }, UnitInterval::Closed { lo: olo, hi: ohi }) => olo <= lo && hi <= ohi,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &UnitInterval) -> UnitInterval {
        match (self, other) {
            (UnitInterval::Empty, x) | (x, UnitInterval::Empty) => x.clone(),
            (UnitInterval::Closed { lo, hi }, UnitInterval::Closed { lo: olo, hi: ohi }) => {
                UnitInterval::Closed { lo: lo.min(olo).clone(), hi: hi.max(ohi).clone() }
            }
        }
    }
}

impl std::fmt::Display for UnitInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UnitInterval::Empty => write!(f, "∅"),
            UnitInterval::Closed { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// The representation `center ± radius` of a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmForm {
    pub center: Rational,
    pub radius: Rational,
}

impl PmForm {
    pub fn new(center: Rational, radius: Rational) -> Result<Self> {
        if !radius.is_positive() {
            return input("radius must be positive");
        }
        Ok(Self { center, radius })
    }

    /// The centre moved into [0,1]. A ball centred beyond an endpoint denotes the
    /// same set as one centred at that endpoint, and branching uses this value.
    pub fn canonical_center(&self) -> Rational {
        clamp01(&self.center)
    }

    pub fn interval(&self) -> UnitInterval {
        ball(&self.center, &self.radius)
    }
}

/// An interval value with the ball representation it was built from, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tagged {
    pub interval: UnitInterval,
    pub form: Option<PmForm>,
}

impl Tagged {
    pub fn untagged(interval: UnitInterval) -> Self {
        Self { interval, form: None }
    }

    fn form(&self) -> Result<&PmForm> {
        self.form.as_ref().ok_or_else(|| crate::error::Error::Input("operand has no ± representation".into()))
    }
}

fn ball(x: &Rational, eps: &Rational) -> UnitInterval {
    if x.is_negative() {
        UnitInterval::clamped(Rational::zero(), eps.clone())
    } else if *x > Rational::one() {
        UnitInterval::clamped(Rational::one() - eps, Rational::one())
    } else {
        UnitInterval::clamped(x - eps, x + eps)
    }
}

fn positive(eps: &Rational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        input("ε must be positive")
    }
}

/// The clamped ball around a number; centres outside [0,1] snap to the endpoint.
pub fn pm_number(x: &Rational, eps: &Rational) -> Result<Tagged> {
    positive(eps)?;
    Ok(Tagged { interval: ball(x, eps), form: Some(PmForm::new(x.clone(), eps.clone())?) })
}

/// `[inf x - ε, sup x + ε] ∩ [0,1]`.
pub fn pm_interval(x: &Tagged, eps: &Rational) -> Result<Tagged> {
    positive(eps)?;
    let interval = match &x.interval {
        UnitInterval::Empty => UnitInterval::Empty,
        UnitInterval::Closed { lo, hi } => UnitInterval::clamped(lo - eps, hi + eps),
    };
    let form = x.form.as_ref().map(|f| PmForm { center: f.center.clone(), radius: &f.radius + eps });
    Ok(Tagged { interval, form })
}

/// `[1 - sup x, 1 - inf x]`.
pub fn one_minus(x: &Tagged) -> Tagged {
    let interval = match &x.interval {
        UnitInterval::Empty => UnitInterval::Empty,
        UnitInterval::Closed { lo, hi } => UnitInterval::Closed { lo: Rational::one() - hi, hi: Rational::one() - lo },
    };
    let form = x.form.as_ref().map(|f| PmForm { center: Rational::one() - &f.center, radius: f.radius.clone() });
    Tagged { interval, form }
}

/// Sum of two balls, branching on the sum of their centres.
pub fn add(x: &Tagged, y: &Tagged) -> Result<Tagged> {
    let (fx, fy) = (x.form()?, y.form()?);
    let radius = &fx.radius + &fy.radius;
    let center = fx.canonical_center() + fy.canonical_center();
    let interval = match (&x.interval, &y.interval) {
        (UnitInterval::Empty, _) | (_, UnitInterval::Empty) => UnitInterval::Empty,
        _ if center > Rational::one() => UnitInterval::clamped(Rational::one() - &radius, Rational::one()),
        _ if center.is_negative() => UnitInterval::clamped(Rational::zero(), radius.clone()),
        (UnitInterval::Closed { lo, hi }, UnitInterval::Closed { lo: ylo, hi: yhi }) => {
            UnitInterval::clamped(lo + ylo, hi + yhi)
        }
    };
    Ok(Tagged { interval, form: Some(PmForm { center: &fx.center + &fy.center, radius }) })
}

/// `l · x` for `l >= 1`, branching on `l` times the centre.
pub fn scale(l: &Rational, x: &Tagged) -> Result<Tagged> {
    if *l < Rational::one() {
        return input("scale factor must be at least 1");
    }
    let f = x.form()?;
    let center = l * f.canonical_center();
    let radius = l * &f.radius;
    let interval = match &x.interval {
        UnitInterval::Empty => UnitInterval::Empty,
        _ if center > Rational::one() => UnitInterval::clamped(Rational::one() - &radius, Rational::one()),
        _ if center.is_negative() => UnitInterval::clamped(Rational::zero(), radius.clone()),
        UnitInterval::Closed { lo, hi } => UnitInterval::clamped(l * lo, l * hi),
    };
    Ok(Tagged { interval, form: Some(PmForm { center: l * &f.center, radius }) })
}

/// `inf x <= inf y` and `sup x <= sup y`; false when either side is empty.
pub fn precedes(x: &UnitInterval, y: &UnitInterval) -> bool {
    match (x, y) {
        (UnitInterval::Closed { lo, hi }, UnitInterval::Closed { lo: ylo, hi: yhi }) => lo <= ylo && hi <= yhi,
        _ => false,
    }
}
