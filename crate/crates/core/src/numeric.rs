//! Small numeric helpers shared across modules.

use std::str::FromStr;

use bigdecimal::BigDecimal;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used for all finite-system computations.
pub type Rational = BigRational;

/// Parses a decimal literal (`"1"`, `"-0.25"`, `"1.5e-3"`) into an exact rational.
/// Fractions of the form `"p/q"` are accepted as well.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let dec = BigDecimal::from_str(text).ok()?;
    let (mantissa, scale) = dec.as_bigint_and_exponent();
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        Rational::new(mantissa, num_traits::pow(ten, scale as usize))
    } else {
        Rational::from_integer(mantissa * num_traits::pow(ten, (-scale) as usize))
    })
}

/// Exact conversion of a finite `f64` into a rational.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `p/q` or `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn abs_max<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Natural logarithm of an arbitrary-precision integer, to `f64` accuracy.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().map(|v| (v as f64).ln()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top: BigUint = n >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Powers `(1-ε)^k` for consecutive `k`, computed as `exp(k·ln1p(-ε))` with a
/// running product between periodic re-synchronisations.
#[derive(Clone, Debug)]
pub struct GeometricWeights {
    log_ratio: f64,
    ratio: f64,
    k: u64,
    current: f64,
}

const RESYNC: u64 = 256;

impl GeometricWeights {
    pub fn new(epsilon: f64) -> Self {
        Self {
            log_ratio: (-epsilon).ln_1p(),
            ratio: 1.0 - epsilon,
            k: 0,
            current: 1.0,
        }
    }

    /// `(1-ε)^k` for an arbitrary `k`.
    pub fn power(epsilon: f64, k: u64) -> f64 {
        (k as f64 * (-epsilon).ln_1p()).exp()
    }
}

impl Iterator for GeometricWeights {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let w = self.current;
        self.k += 1;
        self.current = if self.k.is_multiple_of(RESYNC) {
            (self.k as f64 * self.log_ratio).exp()
        } else {
            self.current * self.ratio
        };
        Some(w)
    }
}
