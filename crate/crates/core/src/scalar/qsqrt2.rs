//! Exact arithmetic in the real quadratic field ℚ(√2).
//!
//! Every structure constant, Gram entry and curvature value handled by this
//! crate lives in this field, so the whole connection/curvature pipeline can
//! run without a single rounding step. Coefficients are arbitrary-size
//! rationals, which keeps long chains of Gram inversions free of overflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `a + b·√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    a: Rational,
    b: Rational,
}

fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Square root of a non-negative rational when it is itself rational.
fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    /// `p/q + (r/s)·√2`. Panics if `q` or `s` is zero.
    pub fn from_parts(p: i64, q: i64, r: i64, s: i64) -> Self {
        QSqrt2::new(ratio(p, q), ratio(r, s))
    }

    pub fn from_int(n: i64) -> Self {
        QSqrt2::from_parts(n, 1, 0, 1)
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        QSqrt2::from_parts(p, q, 0, 1)
    }

    pub fn sqrt2() -> Self {
        QSqrt2::from_parts(0, 1, 1, 1)
    }

    /// Rational part.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn conjugate(&self) -> Self {
        QSqrt2::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 2b²`; zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(2)) * &self.b * &self.b
    }

    pub fn signum(&self) -> i8 {
        let (sa, sb) = (sign(&self.a), sign(&self.b));
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: the larger of a² and 2b² wins
        if self.norm().is_positive() {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QSqrt2::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.checked_inv()?)
    }

    /// Exact square root inside the field, if one exists.
    pub fn sqrt(&self) -> Result<Self> {
        let fail = || Error::NotASquare(self.to_string());
        if self.is_negative() {
            return Err(fail());
        }
        if self.is_zero() {
            return Ok(QSqrt2::zero());
        }
        // (x + y√2)² = (x² + 2y²) + 2xy√2
        let two = Rational::from_integer(BigInt::from(2));
        let s = rational_sqrt(&self.norm()).ok_or_else(fail)?;
        for x2 in [(&self.a + &s) / &two, (&self.a - &s) / &two] {
            let Some(x) = rational_sqrt(&x2) else {
                continue;
            };
            let cand = if x.is_zero() {
                match rational_sqrt(&(&self.a / &two)) {
                    Some(y) => QSqrt2::new(x, y),
                    None => continue,
                }
            } else {
                QSqrt2::new(x.clone(), &self.b / (&two * &x))
            };
            let cand = cand.abs();
            if &(&cand * &cand) == self {
                return Ok(cand);
            }
        }
        Err(fail())
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if sign(&self.a) * sign(&self.b) >= 0 {
            a + b * std::f64::consts::SQRT_2
        } else {
            // avoid cancellation: (a² − 2b²) / (a − b√2)
            self.norm().to_f64().unwrap_or(f64::NAN) / (a - b * std::f64::consts::SQRT_2)
        }
    }

    /// Serialized form `[p, q, r, s]` meaning `p/q + (r/s)√2`, reduced, `q, s > 0`.
    pub fn to_tuple(&self) -> Result<[i64; 4]> {
        let conv = |x: &BigInt| {
            x.to_i64()
                .ok_or_else(|| Error::Overflow(format!("{x} does not fit in 64 bits")))
        };
        Ok([
            conv(self.a.numer())?,
            conv(self.a.denom())?,
            conv(self.b.numer())?,
            conv(self.b.denom())?,
        ])
    }

    pub fn from_tuple(t: [i64; 4]) -> Result<Self> {
        if t[1] <= 0 || t[3] <= 0 {
            return Err(Error::Parse(format!(
                "denominators must be positive in {t:?}"
            )));
        }
        Ok(QSqrt2::from_parts(t[0], t[1], t[2], t[3]))
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        QSqrt2::new(Rational::one(), Rational::zero())
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::from_int(n)
    }
}

impl From<Rational> for QSqrt2 {
    fn from(r: Rational) -> Self {
        QSqrt2::new(r, Rational::zero())
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = Rational::from_integer(BigInt::from(2));
        QSqrt2::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a.clone(), -self.b.clone())
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a, -self.b)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $f(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $f(self, rhs: &QSqrt2) -> QSqrt2 {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<QSqrt2> for &'a QSqrt2 {
            type Output = QSqrt2;
            fn $f(self, rhs: QSqrt2) -> QSqrt2 {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Panics on a zero divisor; use [`QSqrt2::checked_div`] when that can happen.
impl Div<QSqrt2> for QSqrt2 {
    type Output = QSqrt2;
    fn div(self, rhs: QSqrt2) -> QSqrt2 {
        self.checked_div(&rhs)
            .expect("division by zero in Q(sqrt2)")
    }
}

impl<'a> Div<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn div(self, rhs: &QSqrt2) -> QSqrt2 {
        self.checked_div(rhs).expect("division by zero in Q(sqrt2)")
    }
}

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl AddAssign for QSqrt2 {
    fn add_assign(&mut self, rhs: QSqrt2) {
        *self += &rhs;
    }
}

impl SubAssign<&QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, rhs: &QSqrt2) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl SubAssign for QSqrt2 {
    fn sub_assign(&mut self, rhs: QSqrt2) {
        *self -= &rhs;
    }
}

impl std::iter::Sum for QSqrt2 {
    fn sum<I: Iterator<Item = QSqrt2>>(iter: I) -> Self {
        iter.fold(QSqrt2::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt2", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}*sqrt2", self.a, -self.b.clone())
                } else {
                    write!(f, "{} + {}*sqrt2", self.a, self.b)
                }
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Accepts sums of terms such as `3`, `-1/2`, `sqrt2`, `2*sqrt2`, `1/2 - 3/4*sqrt2`.
impl FromStr for QSqrt2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let text = text.replace('√', "sqrt");
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !text[..i].ends_with(['e', 'E', '*', '/']) {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);

        let mut acc = QSqrt2::zero();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let value = if let Some(coef) = body.strip_suffix("sqrt2") {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() {
                    Rational::one()
                } else {
                    parse_rational(coef)?
                };
                QSqrt2::new(Rational::zero(), c)
            } else {
                QSqrt2::from(parse_rational(body)?)
            };
            acc += if neg { -value } else { value };
        }
        Ok(acc)
    }
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        self.to_tuple()
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let t = <[i64; 4]>::deserialize(deserializer)?;
        QSqrt2::from_tuple(t).map_err(D::Error::custom)
    }
}
