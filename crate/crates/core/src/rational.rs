//! Exact rationals plus the decimal helpers used by numeric mode.

use crate::error::{input, Result};
use num_bigint::{BigInt, Sign};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Default number of significant digits kept in numeric mode.
pub const DEFAULT_PRECISION: u32 = 50;

/// Significant digits for numeric mode, honouring `FINCLEAR_PRECISION`.
pub fn precision() -> u32 {
    std::env::var("FINCLEAR_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&p| p > 0)
        .unwrap_or(DEFAULT_PRECISION)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Parses `p/q`, an integer, a decimal (`0.25`) or scientific notation (`1e-9`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return input("empty number");
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad(text))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad(text))?;
        if q.is_zero() {
            return input(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad(text))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad(text));
    }
    let all: BigInt = format!("{whole}{frac}0").parse().map_err(|_| bad(text))?;
    let mut value = Rational::new(all, pow10(frac.len() as u32 + 1));
    if exponent.unsigned_abs() > 10_000 {
        return input(format!("exponent out of range in {text:?}"));
    }
    let scale = Rational::from_integer(pow10(exponent.unsigned_abs() as u32));
    if exponent >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Ok(if negative { -value } else { value })
}

fn bad(text: &str) -> crate::error::Error {
    crate::error::Error::Input(format!("not a rational number: {text:?}"))
}

/// Canonical text: `p` for integers, `p/q` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Fixed-point decimal rendering with `frac_digits` digits after the point.
pub fn to_decimal_string(x: &Rational, frac_digits: u32) -> String {
    let scaled = (x * Rational::from_integer(pow10(frac_digits))).round().to_integer();
    let negative = scaled.sign() == Sign::Minus;
    let digits = scaled.abs().to_string();
    let width = frac_digits as usize + 1;
    let padded = format!("{digits:0>width$}");
    let (whole, frac) = padded.split_at(padded.len() - frac_digits as usize);
    let sign = if negative { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// Exact decimal text when the denominator has only factors 2 and 5.
pub fn exact_decimal_string(x: &Rational) -> Option<String> {
    let mut d = x.denom().clone();
    let (two, five) = (BigInt::from(2u32), BigInt::from(5u32));
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    d.is_one().then(|| to_decimal_string(x, twos.max(fives)))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Largest k with 10^k <= |x|, for nonzero x.
fn decimal_exponent(x: &Rational) -> i64 {
    let (p, q) = (x.numer().abs(), x.denom().clone());
    // bit lengths give an estimate within one of the answer
    let bits = p.bits() as i64 - q.bits() as i64;
    let mut k = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    // 10^k <= p/q  <=>  10^k q <= p (k >= 0) or q <= p 10^-k (k < 0)
    let at_most = |k: i64| -> bool {
        if k >= 0 {
            &q * pow10(k as u32) <= p
        } else {
            q <= &p * pow10(k.unsigned_abs() as u32)
        }
    };
    while !at_most(k) {
        k -= 1;
    }
    while at_most(k + 1) {
        k += 1;
    }
    k
}

/// Integer division rounding half away from zero.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (n_abs, d_abs) = (n.abs(), d.abs());
    let q = (&n_abs * 2u32 + &d_abs) / (&d_abs * 2u32);
    if (n.sign() == Sign::Minus) != (d.sign() == Sign::Minus) {
        -q
    } else {
        q
    }
}

/// Rounds to `digits` significant decimal digits (half away from zero).
pub fn round_significant(x: &Rational, digits: u32) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let shift = digits as i64 - 1 - decimal_exponent(x);
    let scale = pow10(shift.unsigned_abs() as u32);
    if shift >= 0 {
        Rational::new(div_round(&(x.numer() * &scale), x.denom()), scale)
    } else {
        Rational::from_integer(div_round(x.numer(), &(x.denom() * &scale)) * scale)
    }
}

/// Square root of a non-negative rational, exact when x is a perfect square,
/// otherwise truncated to roughly `digits` significant digits.
pub fn sqrt(x: &Rational, digits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let (p, q) = (x.numer(), x.denom());
    let (rp, rq) = (p.sqrt(), q.sqrt());
    if &(&rp * &rp) == p && &(&rq * &rq) == q {
        return Rational::new(rp, rq);
    }
    let m = digits + q.to_string().len() as u32 + 2;
    let s = pow10(m);
    let root = (p * q * &s * &s).sqrt();
    Rational::new(root, q * s)
}

pub fn clamp01(x: &Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else if *x > Rational::one() {
        Rational::one()
    } else {
        x.clone()
    }
}
