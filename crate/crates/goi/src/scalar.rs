//! Scalars, extended values and quantifiers.
//!
//! Every structure that carries weights or coefficients is generic over
//! [`Scalar`]. The exact instantiation is [`Rational`]; `f64` is provided for
//! quick experiments but none of the equality-based checks are meaningful
//! with it.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Exact rational numbers, the default scalar.
pub type Rational = BigRational;

pub trait Scalar:
    Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Serialised form, `"p/q"` for rationals.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Option<Self>;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_text(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    None
                } else {
                    Some(BigRational::new(p, q))
                }
            }
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn to_text(&self) -> String {
        format!("{self}")
    }

    fn parse_text(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
            None => s.trim().parse().ok(),
        }
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// A scalar extended with a single absorbing infinity.
///
/// Sums absorb `Inf`; `0 * Inf = 0`. Signs are not tracked on infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Ext<W> {
    Fin(W),
    Inf,
}

impl<W: Scalar> Ext<W> {
    pub fn zero() -> Self {
        Ext::Fin(W::zero())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ext::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Fin(w) if w.is_zero())
    }

    pub fn finite(&self) -> Option<&W> {
        match self {
            Ext::Fin(w) => Some(w),
            Ext::Inf => None,
        }
    }

    pub fn scale(&self, k: &W) -> Self {
        match self {
            _ if k.is_zero() => Ext::zero(),
            Ext::Fin(w) => Ext::Fin(w.clone() * k.clone()),
            Ext::Inf => Ext::Inf,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Ext::Fin(w) => w.to_text(),
            Ext::Inf => "inf".to_string(),
        }
    }

    pub fn parse_text(s: &str) -> Option<Self> {
        match s.trim() {
            "inf" | "∞" => Some(Ext::Inf),
            t => W::parse_text(t).map(Ext::Fin),
        }
    }
}

impl<W: Scalar> Add for Ext<W> {
    type Output = Ext<W>;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl<W: Scalar> Mul for Ext<W> {
    type Output = Ext<W>;

    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a * b),
            (Ext::Fin(a), Ext::Inf) | (Ext::Inf, Ext::Fin(a)) if a.is_zero() => Ext::zero(),
            _ => Ext::Inf,
        }
    }
}

impl<W: Scalar> std::iter::Sum for Ext<W> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Ext::zero(), |a, b| a + b)
    }
}

impl<W: Scalar> Display for Ext<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(w) => write!(f, "{w}"),
            Ext::Inf => write!(f, "∞"),
        }
    }
}

/// The map `m` turning circuit weights into measurement contributions.
pub trait Quantifier<W>: Send + Sync {
    fn eval(&self, w: &W) -> Ext<W>;
}

/// `m(w) = w / (1 - w)`, so `m(1) = ∞`. The default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Odds;

impl<W: Scalar> Quantifier<W> for Odds {
    fn eval(&self, w: &W) -> Ext<W> {
        let d = W::one() - w.clone();
        if d.is_zero() {
            Ext::Inf
        } else {
            Ext::Fin(w.clone() / d)
        }
    }
}

/// `m(w) = w`; finite everywhere.
#[derive(Clone, Copy, Debug, Default)]
pub struct Linear;

impl<W: Scalar> Quantifier<W> for Linear {
    fn eval(&self, w: &W) -> Ext<W> {
        Ext::Fin(w.clone())
    }
}

/// Lookup table with a fallback rule for weights not listed.
pub struct Table<W> {
    pub entries: Vec<(W, Ext<W>)>,
    pub fallback: Box<dyn Quantifier<W>>,
}

impl<W: Scalar> Quantifier<W> for Table<W> {
    fn eval(&self, w: &W) -> Ext<W> {
        self.entries
            .iter()
            .find(|(k, _)| k == w)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| self.fallback.eval(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odds_is_infinite_at_one() {
        assert!(Odds.eval(&rat(1, 1)).is_inf());
        assert_eq!(Odds.eval(&rat(1, 2)), Ext::Fin(rat(1, 1)));
    }

    #[test]
    fn zero_times_inf_is_zero() {
        let z: Ext<Rational> = Ext::zero();
        assert!((z * Ext::Inf).is_zero());
        assert!(Ext::<Rational>::Inf.scale(&rat(0, 1)).is_zero());
    }

    #[test]
    fn text_round_trip() {
        let r = rat(-6, 4);
        assert_eq!(r.to_text(), "-3/2");
        assert_eq!(Rational::parse_text("-3/2"), Some(r));
        assert_eq!(Rational::parse_text("5"), Some(rat(5, 1)));
        assert_eq!(Ext::<Rational>::parse_text("inf"), Some(Ext::Inf));
    }
}
