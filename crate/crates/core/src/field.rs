//! Exact scalar fields: prime fields GF(p) for small p, and arbitrary-precision rationals.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("unknown field {0:?} (expected gf2, gf5 or rational)")]
    UnknownField(String),
}

/// Scalars of an exact field.
///
/// All arithmetic is by reference so that big rationals are not cloned on every
/// operation.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Name used in serialized representations (`"gf2"`, `"gf5"`, `"rational"`).
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    /// A random element. Distribution is field-specific; rationals stay small.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Parses the canonical string form produced by `Display`.
    fn parse(s: &str) -> Result<Self, FieldError>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x = Self::random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

const fn is_small_prime(p: u32) -> bool {
    if p < 2 || p > 251 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of the prime field GF(P), `P ≤ 251`. Stored reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf<const P: u32>(u32);

pub type Gf2 = Gf<2>;
pub type Gf5 = Gf<5>;

impl<const P: u32> Gf<P> {
    const VALID: () = assert!(is_small_prime(P), "GF(p) requires a prime p <= 251");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID;
        Gf(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut e: u32) -> Self {
        let mut base = self.0;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Gf(acc)
    }
}

impl<const P: u32> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Field for Gf<P> {
    const NAME: &'static str = match P {
        2 => "gf2",
        3 => "gf3",
        5 => "gf5",
        7 => "gf7",
        _ => "gfp",
    };

    fn zero() -> Self {
        Self::new(0)
    }
    fn one() -> Self {
        Self::new(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        Gf((self.0 + rhs.0) % P)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Gf((self.0 + P - rhs.0) % P)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Gf(self.0 * rhs.0 % P)
    }
    fn neg(&self) -> Self {
        Gf((P - self.0) % P)
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(rng.gen_range(0..P) as i64)
    }
    fn parse(s: &str) -> Result<Self, FieldError> {
        let v: i64 = s.trim().parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        Ok(Self::new(v))
    }
}

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Rational {
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // Mostly small integers, occasionally a proper fraction.
        let num = rng.gen_range(-3i64..=3);
        let den = if rng.gen_bool(0.25) { rng.gen_range(2i64..=3) } else { 1 };
        Rational::new(num, den)
    }
    fn parse(s: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        let r = BigRational::new(num, den);
        debug_assert!(r.denom().is_positive());
        Ok(Rational(r))
    }
}

/// Runtime selector for the fields exposed on the command line and in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Gf2,
    Gf5,
    Rational,
}

impl FieldKind {
    pub const ALL: [FieldKind; 3] = [FieldKind::Gf2, FieldKind::Gf5, FieldKind::Rational];

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Gf2 => Gf2::NAME,
            FieldKind::Gf5 => Gf5::NAME,
            FieldKind::Rational => Rational::NAME,
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gf2" => Ok(FieldKind::Gf2),
            "gf5" => Ok(FieldKind::Gf5),
            "rational" => Ok(FieldKind::Rational),
            other => Err(FieldError::UnknownField(other.to_string())),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
