//! Exact non-negative rational labels.
//!
//! Labels form the semiring of non-negative rationals: there is addition and
//! multiplication but no subtraction. Integer-valued labels double as the
//! natural-number semiring used for plain multigraphs.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative value `{0}`")]
    Negative(String),
    #[error("cannot parse `{0}` as a non-negative rational")]
    Malformed(String),
}

/// A non-negative rational number kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(BigRational);

impl Label {
    pub fn zero() -> Self {
        Label(BigRational::zero())
    }

    pub fn one() -> Self {
        Label(BigRational::one())
    }

    pub fn from_biguint(n: BigUint) -> Self {
        Label(BigRational::from_integer(BigInt::from_biguint(
            Sign::Plus,
            n,
        )))
    }

    /// Builds `numer / denom`, reduced.
    pub fn new(numer: BigUint, denom: BigUint) -> Result<Self, LabelError> {
        if denom.is_zero() {
            return Err(LabelError::ZeroDenominator);
        }
        Ok(Label(BigRational::new(
            BigInt::from_biguint(Sign::Plus, numer),
            BigInt::from_biguint(Sign::Plus, denom),
        )))
    }

    /// Convenience constructor for small fractions.
    ///
    /// Panics if `denom` is zero.
    pub fn ratio(numer: u64, denom: u64) -> Self {
        Label::new(numer.into(), denom.into()).expect("zero denominator")
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as a natural number, if it is one.
    pub fn to_integer(&self) -> Option<BigUint> {
        self.is_integer().then(|| self.numer())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_integer().and_then(|n| n.to_u64())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Label(Pow::pow(&self.0, exp))
    }

    /// Division by a positive integer, the only division the bounds need.
    ///
    /// Panics if `d` is zero.
    pub fn div_int(&self, d: u64) -> Self {
        assert!(d > 0, "division by zero");
        Label(&self.0 / BigRational::from_integer(BigInt::from(d)))
    }

    /// Truncated decimal rendering with `digits` fractional digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let (whole, rem) = self.numer().div_rem(&self.denom());
        if digits == 0 {
            return whole.to_string();
        }
        let scale = BigUint::from(10u32).pow(digits as u32);
        let frac = (rem * scale) / self.denom();
        format!("{whole}.{frac:0>digits$}")
    }
}

impl Default for Label {
    fn default() -> Self {
        Label::zero()
    }
}

impl From<u64> for Label {
    fn from(n: u64) -> Self {
        Label(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<u32> for Label {
    fn from(n: u32) -> Self {
        Label::from(n as u64)
    }
}

impl From<BigUint> for Label {
    fn from(n: BigUint) -> Self {
        Label::from_biguint(n)
    }
}

/// Exact semiring addition.
pub fn label_add(a: &Label, b: &Label) -> Label {
    Label(&a.0 + &b.0)
}

/// Exact semiring multiplication.
pub fn label_mul(a: &Label, b: &Label) -> Label {
    Label(&a.0 * &b.0)
}

impl Add for Label {
    type Output = Label;
    fn add(self, rhs: Label) -> Label {
        Label(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Label> for &'a Label {
    type Output = Label;
    fn add(self, rhs: &'a Label) -> Label {
        label_add(self, rhs)
    }
}

impl AddAssign<&Label> for Label {
    fn add_assign(&mut self, rhs: &Label) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Label {
    fn add_assign(&mut self, rhs: Label) {
        self.0 += rhs.0;
    }
}

impl Mul for Label {
    type Output = Label;
    fn mul(self, rhs: Label) -> Label {
        Label(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Label> for &'a Label {
    type Output = Label;
    fn mul(self, rhs: &'a Label) -> Label {
        label_mul(self, rhs)
    }
}

impl MulAssign<&Label> for Label {
    fn mul_assign(&mut self, rhs: &Label) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Label {
    fn sum<I: Iterator<Item = Label>>(iter: I) -> Label {
        iter.fold(Label::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Label> for Label {
    fn sum<I: Iterator<Item = &'a Label>>(iter: I) -> Label {
        iter.fold(Label::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Product for Label {
    fn product<I: Iterator<Item = Label>>(iter: I) -> Label {
        iter.fold(Label::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Label> for Label {
    fn product<I: Iterator<Item = &'a Label>>(iter: I) -> Label {
        iter.fold(Label::one(), |mut acc, x| {
            acc *= x;
            acc
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Label {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('-') {
            return Err(LabelError::Negative(s.to_string()));
        }
        let parse = |part: &str| -> Result<BigUint, LabelError> {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(LabelError::Malformed(s.to_string()));
            }
            part.parse::<BigUint>()
                .map_err(|_| LabelError::Malformed(s.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Label::from_biguint(parse(s)?)),
            Some((n, d)) => Label::new(parse(n)?, parse(d)?),
        }
    }
}

/// Which semiring the labels of a graph are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Positive integers; a label `n` stands for `n` parallel edges.
    Nat,
    /// Positive rationals.
    Rat,
}

impl Mode {
    /// Whether `label` is admissible as an edge label in this mode.
    pub fn admits(self, label: &Label) -> bool {
        !label.is_zero() && (self == Mode::Rat || label.is_integer())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Nat => "nat",
            Mode::Rat => "rat",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "nat" => Ok(Mode::Nat),
            "rat" => Ok(Mode::Rat),
            other => Err(format!("unknown mode `{other}` (expected nat or rat)")),
        }
    }
}
