//! Exact coefficient rings: the integers, prime fields, the rationals, and
//! Laurent-polynomial Novikov extensions of each.
//!
//! A [`RingDescriptor`] names a ring; a [`Coefficient`] is an element of one.
//! All public arithmetic goes through the descriptor, which checks that its
//! operands belong to it. The linear-algebra kernels work directly on
//! [`Scalar`] values once a complex has been validated.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational numbers, used for every action value.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{value} is not a unit in {ring}")]
    NonUnit { value: String, ring: String },
    #[error("the weight of the zero coefficient is undefined")]
    UndefinedWeight,
    #[error("{0} is not a Novikov ring")]
    NotNovikov(String),
    #[error("invalid ring descriptor `{text}`: {reason}")]
    BadDescriptor { text: String, reason: String },
    #[error("invalid coefficient `{text}`: {reason}")]
    BadCoefficient { text: String, reason: String },
}

/// Parses `a` or `a/b` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().ok()?;
    let den: BigInt = den.trim().parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A rational extended by the two infinities. Ordered with
/// `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// Sum with the convention that `-inf` absorbs: the sum of an empty
    /// infimum with anything stays `-inf`.
    pub fn plus(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::NegInf, _) | (_, Extended::NegInf) => Extended::NegInf,
            (Extended::PosInf, _) | (_, Extended::PosInf) => Extended::PosInf,
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
        }
    }

    pub fn plus_rational(&self, q: &Rational) -> Extended {
        self.plus(&Extended::Finite(q.clone()))
    }

    pub fn negate(&self) -> Extended {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::Finite(q) => Extended::Finite(-q),
            Extended::PosInf => Extended::NegInf,
        }
    }
}

impl From<Rational> for Extended {
    fn from(q: Rational) -> Self {
        Extended::Finite(q)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Finite(q) => write!(f, "{q}"),
            Extended::PosInf => write!(f, "+inf"),
        }
    }
}

/// The non-Novikov rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    PrimeField(u32),
    Rationals,
}

impl BaseRing {
    pub fn prime_field(p: u32) -> Result<BaseRing, CoeffError> {
        if is_prime(p) {
            Ok(BaseRing::PrimeField(p))
        } else {
            Err(CoeffError::BadDescriptor { text: format!("F{p}"), reason: format!("{p} is not prime") })
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, BaseRing::Integers)
    }

    pub fn zero(&self) -> Scalar {
        self.from_bigint(BigInt::zero())
    }

    pub fn one(&self) -> Scalar {
        self.from_bigint(BigInt::one())
    }

    pub fn from_i64(&self, value: i64) -> Scalar {
        self.from_bigint(BigInt::from(value))
    }

    pub fn from_bigint(&self, value: BigInt) -> Scalar {
        match self {
            BaseRing::Integers => Scalar::Int(value),
            BaseRing::PrimeField(p) => {
                let r = value.mod_floor(&BigInt::from(*p));
                Scalar::Mod { value: r.to_u32().expect("residue fits"), modulus: *p }
            }
            BaseRing::Rationals => Scalar::Rat(Rational::from_integer(value)),
        }
    }

    /// Maps a rational into this ring, when its denominator is invertible here.
    pub fn from_rational(&self, value: &Rational) -> Option<Scalar> {
        match self {
            BaseRing::Rationals => Some(Scalar::Rat(value.clone())),
            BaseRing::Integers => value.is_integer().then(|| Scalar::Int(value.to_integer())),
            BaseRing::PrimeField(_) => {
                let den = self.from_bigint(value.denom().clone());
                let inv = den.inverse()?;
                Some(self.from_bigint(value.numer().clone()).mul(&inv))
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (BaseRing::Integers, Scalar::Int(_)) => true,
            (BaseRing::Rationals, Scalar::Rat(_)) => true,
            (BaseRing::PrimeField(p), Scalar::Mod { value, modulus }) => p == modulus && value < p,
            _ => false,
        }
    }

    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, CoeffError> {
        let bad = |reason: &str| CoeffError::BadCoefficient { text: text.to_string(), reason: reason.to_string() };
        if text.contains('t') {
            return Err(CoeffError::RingMismatch(format!("Novikov monomial `{text}` in non-Novikov ring {self}")));
        }
        let q = parse_rational(text).ok_or_else(|| bad("not an integer or a/b rational"))?;
        self.from_rational(&q).ok_or_else(|| bad(&format!("denominator not invertible in {self}")))
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::PrimeField(p) => write!(f, "F{p}"),
            BaseRing::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for BaseRing {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "Z" => Ok(BaseRing::Integers),
            "Q" => Ok(BaseRing::Rationals),
            _ => {
                let p = s.strip_prefix('F').and_then(|rest| rest.parse::<u32>().ok()).ok_or_else(|| {
                    CoeffError::BadDescriptor {
                        text: s.to_string(),
                        reason: "expected Z, Q, F<p> or Novikov(...)".into(),
                    }
                })?;
                BaseRing::prime_field(p)
            }
        }
    }
}

/// Grading and weighting of the formal variable `t`: multiplying by `t`
/// lowers degree by `degree` and action by `action`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovPeriod {
    pub degree: i64,
    pub action: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Base(BaseRing),
    Novikov { base: BaseRing, period: NovikovPeriod },
}

/// An element of a base ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Mod { value: u32, modulus: u32 },
    Rat(Rational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(v) => v.is_one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: ((*a as u64 + *b as u64) % *p as u64) as u32, modulus: *p }
            }
            _ => unreachable!("scalar ring mismatch: {self:?} + {other:?}"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => {
                Scalar::Mod { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: ((*a as u64 * *b as u64) % *p as u64) as u32, modulus: *p }
            }
            _ => unreachable!("scalar ring mismatch: {self:?} * {other:?}"),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Int(a) => a.abs().is_one(),
            _ => !self.is_zero(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if !self.is_unit() {
            return None;
        }
        Some(match self {
            Scalar::Int(a) => Scalar::Int(a.clone()),
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { value, modulus } => {
                let p = *modulus as u64;
                let mut result = 1u64;
                let mut base = *value as u64;
                let mut exp = p - 2;
                while exp > 0 {
                    if exp & 1 == 1 {
                        result = result * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Scalar::Mod { value: result as u32, modulus: *modulus }
            }
        })
    }

    /// Exact quotient `self / divisor`, if it exists in the ring.
    pub fn div_exact(&self, divisor: &Scalar) -> Option<Scalar> {
        match (self, divisor) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                if b.is_zero() {
                    return None;
                }
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(Scalar::Int(q))
            }
            _ => divisor.inverse().map(|inv| self.mul(&inv)),
        }
    }

    /// Euclidean size used for pivot selection: `|a|` over the integers,
    /// 0/1 over fields.
    pub(crate) fn magnitude(&self) -> BigInt {
        match self {
            Scalar::Int(a) => a.abs(),
            _ if self.is_zero() => BigInt::zero(),
            _ => BigInt::one(),
        }
    }

    /// Quotient rounded so that `self - q * divisor` is smallest in magnitude.
    pub(crate) fn div_round(&self, divisor: &Scalar) -> Scalar {
        match (self, divisor) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a.div_floor(b)),
            _ => self.div_exact(divisor).expect("nonzero field divisor"),
        }
    }

    /// Normalizes a nonzero integer to be positive; identity elsewhere.
    pub(crate) fn abs(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(a.abs()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(a) => write!(f, "{a}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(a) => write!(f, "{a}"),
        }
    }
}

/// An element of a ring described by a [`RingDescriptor`]. Novikov elements
/// are finite Laurent sums `(power, scalar)`, powers strictly increasing,
/// scalars nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Scalar(Scalar),
    Laurent(Vec<(i64, Scalar)>),
}

impl Coefficient {
    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Scalar(s) => s.is_zero(),
            Coefficient::Laurent(terms) => terms.iter().all(|(_, s)| s.is_zero()),
        }
    }

    pub fn as_scalar(&self) -> Option<&Scalar> {
        match self {
            Coefficient::Scalar(s) => Some(s),
            Coefficient::Laurent(_) => None,
        }
    }

    /// Laurent terms, treating a base scalar as `s * t^0`.
    pub fn terms(&self) -> Vec<(i64, Scalar)> {
        match self {
            Coefficient::Scalar(s) if s.is_zero() => Vec::new(),
            Coefficient::Scalar(s) => vec![(0, s.clone())],
            Coefficient::Laurent(terms) => terms.clone(),
        }
    }

    /// Lowest power of `t` present; 0 for base scalars.
    pub fn min_power(&self) -> Option<i64> {
        match self {
            Coefficient::Scalar(s) => (!s.is_zero()).then_some(0),
            Coefficient::Laurent(terms) => terms.first().map(|(k, _)| *k),
        }
    }

    pub fn max_power(&self) -> Option<i64> {
        match self {
            Coefficient::Scalar(s) => (!s.is_zero()).then_some(0),
            Coefficient::Laurent(terms) => terms.last().map(|(k, _)| *k),
        }
    }
}

fn canonical_laurent(mut terms: Vec<(i64, Scalar)>) -> Vec<(i64, Scalar)> {
    terms.sort_by_key(|(k, _)| *k);
    let mut out: Vec<(i64, Scalar)> = Vec::with_capacity(terms.len());
    for (k, s) in terms {
        match out.last_mut() {
            Some((last, acc)) if *last == k => *acc = acc.add(&s),
            _ => out.push((k, s)),
        }
    }
    out.retain(|(_, s)| !s.is_zero());
    out
}

impl RingDescriptor {
    pub fn integers() -> Self {
        RingDescriptor::Base(BaseRing::Integers)
    }

    pub fn rationals() -> Self {
        RingDescriptor::Base(BaseRing::Rationals)
    }

    pub fn prime_field(p: u32) -> Result<Self, CoeffError> {
        BaseRing::prime_field(p).map(RingDescriptor::Base)
    }

    pub fn novikov(base: BaseRing, period_degree: i64, period_action: Rational) -> Result<Self, CoeffError> {
        if !period_action.is_positive() {
            return Err(CoeffError::BadDescriptor {
                text: format!("Novikov({base}, deg={period_degree}, area={period_action})"),
                reason: "period action must be positive".into(),
            });
        }
        Ok(RingDescriptor::Novikov { base, period: NovikovPeriod { degree: period_degree, action: period_action } })
    }

    pub fn base(&self) -> &BaseRing {
        match self {
            RingDescriptor::Base(b) => b,
            RingDescriptor::Novikov { base, .. } => base,
        }
    }

    pub fn period(&self) -> Option<&NovikovPeriod> {
        match self {
            RingDescriptor::Base(_) => None,
            RingDescriptor::Novikov { period, .. } => Some(period),
        }
    }

    pub fn is_novikov(&self) -> bool {
        matches!(self, RingDescriptor::Novikov { .. })
    }

    pub fn is_field(&self) -> bool {
        matches!(self, RingDescriptor::Base(b) if b.is_field())
    }

    pub fn zero(&self) -> Coefficient {
        match self {
            RingDescriptor::Base(b) => Coefficient::Scalar(b.zero()),
            RingDescriptor::Novikov { .. } => Coefficient::Laurent(Vec::new()),
        }
    }

    pub fn one(&self) -> Coefficient {
        self.from_i64(1)
    }

    pub fn from_i64(&self, value: i64) -> Coefficient {
        self.embed(self.base().from_i64(value))
    }

    /// Embeds a base scalar (as `s * t^0` in a Novikov ring).
    pub fn embed(&self, s: Scalar) -> Coefficient {
        match self {
            RingDescriptor::Base(_) => Coefficient::Scalar(s),
            RingDescriptor::Novikov { .. } => Coefficient::Laurent(canonical_laurent(vec![(0, s)])),
        }
    }

    /// `s * t^power`.
    pub fn monomial(&self, power: i64, s: Scalar) -> Result<Coefficient, CoeffError> {
        match self {
            RingDescriptor::Base(_) if power == 0 => Ok(Coefficient::Scalar(s)),
            RingDescriptor::Base(_) => Err(CoeffError::NotNovikov(self.to_string())),
            RingDescriptor::Novikov { .. } => Ok(Coefficient::Laurent(canonical_laurent(vec![(power, s)]))),
        }
    }

    pub fn contains(&self, c: &Coefficient) -> bool {
        match (self, c) {
            (RingDescriptor::Base(b), Coefficient::Scalar(s)) => b.contains(s),
            (RingDescriptor::Novikov { base, .. }, Coefficient::Laurent(terms)) => {
                terms.iter().all(|(_, s)| base.contains(s))
            }
            _ => false,
        }
    }

    fn check(&self, c: &Coefficient) -> Result<(), CoeffError> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(CoeffError::RingMismatch(format!("{c:?} is not an element of {self}")))
        }
    }

    /// Puts a coefficient into canonical form. Idempotent.
    pub fn normalize(&self, c: Coefficient) -> Coefficient {
        match c {
            Coefficient::Laurent(terms) => Coefficient::Laurent(canonical_laurent(terms)),
            other => other,
        }
    }

    pub fn is_zero(&self, c: &Coefficient) -> bool {
        c.is_zero()
    }

    pub fn add(&self, a: &Coefficient, b: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub fn sub(&self, a: &Coefficient, b: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    pub fn mul(&self, a: &Coefficient, b: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    /// Sound and complete for the base rings; in Novikov rings exactly the
    /// monomials `u * t^k` with `u` a base unit are reported as units.
    pub fn is_unit(&self, a: &Coefficient) -> Result<bool, CoeffError> {
        self.check(a)?;
        Ok(match a {
            Coefficient::Scalar(s) => s.is_unit(),
            Coefficient::Laurent(terms) => terms.len() == 1 && terms[0].1.is_unit(),
        })
    }

    pub fn inverse(&self, u: &Coefficient) -> Result<Coefficient, CoeffError> {
        let non_unit = || CoeffError::NonUnit { value: self.format(u), ring: self.to_string() };
        if !self.is_unit(u)? {
            return Err(non_unit());
        }
        Ok(match u {
            Coefficient::Scalar(s) => Coefficient::Scalar(s.inverse().ok_or_else(non_unit)?),
            Coefficient::Laurent(terms) => {
                let (k, s) = &terms[0];
                Coefficient::Laurent(vec![(-k, s.inverse().ok_or_else(non_unit)?)])
            }
        })
    }

    pub fn divide_by_unit(&self, a: &Coefficient, u: &Coefficient) -> Result<Coefficient, CoeffError> {
        self.check(a)?;
        let inv = self.inverse(u)?;
        Ok(self.mul_unchecked(a, &inv))
    }

    /// Degree shift of the lowest-power term and the largest action shift
    /// over all terms, for a nonzero Novikov coefficient.
    pub fn novikov_weight(&self, c: &Coefficient) -> Result<(i64, Rational), CoeffError> {
        let period = self.period().ok_or_else(|| CoeffError::NotNovikov(self.to_string()))?;
        self.check(c)?;
        let k = c.min_power().ok_or(CoeffError::UndefinedWeight)?;
        Ok((-k * period.degree, -(period.action.clone() * BigInt::from(k))))
    }

    pub(crate) fn add_unchecked(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        match (a, b) {
            (Coefficient::Scalar(x), Coefficient::Scalar(y)) => Coefficient::Scalar(x.add(y)),
            _ => {
                let mut terms = a.terms();
                terms.extend(b.terms());
                Coefficient::Laurent(canonical_laurent(terms))
            }
        }
    }

    pub(crate) fn neg_unchecked(&self, a: &Coefficient) -> Coefficient {
        match a {
            Coefficient::Scalar(x) => Coefficient::Scalar(x.neg()),
            Coefficient::Laurent(terms) => Coefficient::Laurent(terms.iter().map(|(k, s)| (*k, s.neg())).collect()),
        }
    }

    pub(crate) fn mul_unchecked(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        match (a, b) {
            (Coefficient::Scalar(x), Coefficient::Scalar(y)) => Coefficient::Scalar(x.mul(y)),
            _ => {
                let ta = a.terms();
                let tb = b.terms();
                let mut terms = Vec::with_capacity(ta.len() * tb.len());
                for (i, x) in &ta {
                    for (j, y) in &tb {
                        terms.push((i + j, x.mul(y)));
                    }
                }
                Coefficient::Laurent(canonical_laurent(terms))
            }
        }
    }

    /// Multiplies by `t^power`.
    pub(crate) fn shift_power(&self, a: &Coefficient, power: i64) -> Coefficient {
        match a {
            Coefficient::Laurent(terms) => {
                Coefficient::Laurent(terms.iter().map(|(k, s)| (k + power, s.clone())).collect())
            }
            Coefficient::Scalar(_) => a.clone(),
        }
    }

    pub fn parse_coefficient(&self, text: &str) -> Result<Coefficient, CoeffError> {
        let text = text.trim();
        match self {
            RingDescriptor::Base(b) => b.parse_scalar(text).map(Coefficient::Scalar),
            RingDescriptor::Novikov { base, .. } => {
                let bad =
                    |reason: &str| CoeffError::BadCoefficient { text: text.to_string(), reason: reason.to_string() };
                let mut terms = Vec::new();
                for term in text.split('+') {
                    let term = term.trim();
                    if term.is_empty() {
                        return Err(bad("empty term"));
                    }
                    let (scalar_text, power) = match term.split_once('t') {
                        None => (term, 0),
                        Some((head, tail)) => {
                            let power = match tail {
                                "" => 1,
                                _ => tail
                                    .strip_prefix('^')
                                    .and_then(|p| p.parse::<i64>().ok())
                                    .ok_or_else(|| bad("expected t^<int>"))?,
                            };
                            let head = match head.strip_suffix('*') {
                                Some(h) => h,
                                None if head.is_empty() => "1",
                                None if head == "-" => "-1",
                                None => return Err(bad("expected <scalar>*t^<int>")),
                            };
                            (head, power)
                        }
                    };
                    terms.push((power, base.parse_scalar(scalar_text)?));
                }
                Ok(Coefficient::Laurent(canonical_laurent(terms)))
            }
        }
    }

    /// Canonical text form, accepted back by [`RingDescriptor::parse_coefficient`].
    pub fn format(&self, c: &Coefficient) -> String {
        match c {
            Coefficient::Scalar(s) => s.to_string(),
            Coefficient::Laurent(terms) if terms.is_empty() => "0".to_string(),
            Coefficient::Laurent(terms) => {
                terms.iter().map(|(k, s)| format!("{s}*t^{k}")).collect::<Vec<_>>().join("+")
            }
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Base(b) => write!(f, "{b}"),
            RingDescriptor::Novikov { base, period } => {
                write!(f, "Novikov({base}, deg={}, area={})", period.degree, period.action)
            }
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let bad = |reason: &str| CoeffError::BadDescriptor { text: text.to_string(), reason: reason.to_string() };
        let Some(inner) = text.strip_prefix("Novikov(") else {
            return text.parse::<BaseRing>().map(RingDescriptor::Base);
        };
        let inner = inner.strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad("expected Novikov(<base>, deg=<int>, area=<rational>)"));
        }
        let base: BaseRing = parts[0].parse()?;
        let degree = parts[1]
            .strip_prefix("deg=")
            .and_then(|d| d.parse::<i64>().ok())
            .ok_or_else(|| bad("expected deg=<int>"))?;
        let action =
            parts[2].strip_prefix("area=").and_then(parse_rational).ok_or_else(|| bad("expected area=<rational>"))?;
        RingDescriptor::novikov(base, degree, action)
    }
}
