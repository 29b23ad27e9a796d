use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of every matrix and complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

/// A ring element. The variant is fixed by the ring: `Int` for ℤ, `Rat` for ℚ,
/// `Mod` for 𝔽_p (always reduced into `0..p`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Scalar::Rat(v) => write!(f, "{}/{}", v.numer(), v.denom()),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseRing {
    /// 𝔽_p; `p` must be a prime below 2³².
    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(BaseRing::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, BaseRing::Integers)
    }

    /// `z`, `q` or `fp:<p>`.
    pub fn descriptor(&self) -> String {
        match self {
            BaseRing::Integers => "z".into(),
            BaseRing::Rationals => "q".into(),
            BaseRing::PrimeField(p) => format!("fp:{p}"),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "z" | "Z" => Ok(BaseRing::Integers),
            "q" | "Q" => Ok(BaseRing::Rationals),
            _ => {
                let p = text
                    .strip_prefix("fp:")
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| Error::BadRing(text.to_string()))?;
                BaseRing::prime_field(p)
            }
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            BaseRing::PrimeField(p) => *p,
            _ => unreachable!("modulus of a ring without one"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            BaseRing::Integers => Scalar::Int(BigInt::zero()),
            BaseRing::Rationals => Scalar::Rat(BigRational::zero()),
            BaseRing::PrimeField(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            BaseRing::Integers => Scalar::Int(v.clone()),
            BaseRing::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            BaseRing::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::Mod(r.to_u64().expect("residue fits"))
            }
        }
    }

    /// Reinterprets an element of another ring here. Rationals only map out
    /// of ℚ when integral.
    pub fn convert(&self, s: &Scalar) -> Option<Scalar> {
        match s {
            Scalar::Int(v) => Some(self.from_bigint(v)),
            Scalar::Mod(v) => match self {
                BaseRing::PrimeField(_) => Some(self.from_bigint(&BigInt::from(*v))),
                _ => None,
            },
            Scalar::Rat(v) => match self {
                BaseRing::Rationals => Some(s.clone()),
                _ if v.is_integer() => Some(self.from_bigint(v.numer())),
                BaseRing::PrimeField(_) => {
                    let den = self.from_bigint(v.denom());
                    if self.is_zero(&den) {
                        return None;
                    }
                    Some(self.mul(&self.from_bigint(v.numer()), &self.inverse(&den)))
                }
                _ => None,
            },
        }
    }

    /// Parses a decimal integer or, over ℚ, a fraction `a/b`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::BadScalar { text: text.to_string(), ring: *self };
        match self {
            BaseRing::Rationals => {
                let (n, d) = match text.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (text, "1"),
                };
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rat(BigRational::new(n, d)))
            }
            _ => {
                let v: BigInt = text.trim().parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&v))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = self.modulus();
                let s = x + y;
                Scalar::Mod(if s >= p { s - p } else { s })
            }
            _ => unreachable!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Int(x) => Scalar::Int(-x),
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Mod(0) => Scalar::Mod(0),
            Scalar::Mod(x) => Scalar::Mod(self.modulus() - x),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x - y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % self.modulus() as u128) as u64)
            }
            _ => unreachable!("mixed scalar kinds"),
        }
    }

    /// `acc += a * b` in place.
    pub(crate) fn add_mul_assign(&self, acc: &mut Scalar, a: &Scalar, b: &Scalar) {
        match (acc, a, b) {
            (Scalar::Int(s), Scalar::Int(x), Scalar::Int(y)) => *s += x * y,
            (Scalar::Rat(s), Scalar::Rat(x), Scalar::Rat(y)) => *s += x * y,
            (Scalar::Mod(s), Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = self.modulus() as u128;
                *s = ((*s as u128 + *x as u128 * *y as u128) % p) as u64;
            }
            _ => unreachable!("mixed scalar kinds"),
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(v) => v.magnitude().is_one(),
            _ => !self.is_zero(a),
        }
    }

    /// Unit `u` such that `u·a` is the canonical associate (non-negative over ℤ, 1 over a field).
    pub fn normalizer(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Int(v) if v.is_negative() => self.from_i64(-1),
            Scalar::Int(_) => self.one(),
            _ if self.is_zero(a) => self.one(),
            _ => self.inverse(a),
        }
    }

    /// Inverse of a unit.
    pub fn inverse(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Int(v) => {
                assert!(v.magnitude().is_one(), "inverse of a non-unit");
                a.clone()
            }
            Scalar::Rat(v) => Scalar::Rat(v.recip()),
            Scalar::Mod(v) => {
                assert!(*v != 0, "inverse of zero");
                let p = self.modulus();
                let mut result = 1u128;
                let mut base = *v as u128;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * base % p as u128;
                    }
                    base = base * base % p as u128;
                    e >>= 1;
                }
                Scalar::Mod(result as u64)
            }
        }
    }

    /// Euclidean division `a = q·b + r` with `r` smaller than `b`. Over ℤ the
    /// remainder is the one of least absolute value.
    pub fn div_rem(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                let (mut q, mut r) = x.div_mod_floor(y);
                let twice: BigInt = &r * 2;
                if twice.magnitude() > y.magnitude() {
                    r -= y;
                    q += 1;
                }
                (Scalar::Int(q), Scalar::Int(r))
            }
            _ => (self.mul(a, &self.inverse(b)), self.zero()),
        }
    }

    /// Returns `(g, s, t)` with `g = s·a + t·b` a gcd of `a` and `b`.
    pub fn gcdext(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar, Scalar) {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                let e = x.extended_gcd(y);
                (Scalar::Int(e.gcd), Scalar::Int(e.x), Scalar::Int(e.y))
            }
            _ if !self.is_zero(a) => (self.one(), self.inverse(a), self.zero()),
            _ if !self.is_zero(b) => (self.one(), self.zero(), self.inverse(b)),
            _ => (self.zero(), self.zero(), self.zero()),
        }
    }

    /// Compares Euclidean sizes (absolute value over ℤ; all non-zero equal over fields).
    pub fn size_cmp(&self, a: &Scalar, b: &Scalar) -> Ordering {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => x.magnitude().cmp(y.magnitude()),
            _ => self.is_zero(b).cmp(&self.is_zero(a)),
        }
    }

    /// Whether `a` divides `b`.
    pub fn divides(&self, a: &Scalar, b: &Scalar) -> bool {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                if x.is_zero() {
                    y.is_zero()
                } else {
                    (y % x).is_zero()
                }
            }
            _ => !self.is_zero(a) || self.is_zero(b),
        }
    }

    /// `b / a` when `a` divides `b`.
    pub fn div_exact(&self, b: &Scalar, a: &Scalar) -> Scalar {
        match (b, a) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x / y),
            _ => self.mul(b, &self.inverse(a)),
        }
    }

    /// Canonical representative of `a` modulo `m` (`m` ≠ 0): `0..|m|` over ℤ, zero over fields.
    pub fn reduce_mod(&self, a: &Scalar, m: &Scalar) -> Scalar {
        match (a, m) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x.mod_floor(&y.abs())),
            _ => self.zero(),
        }
    }

    /// The integer behind a ℤ or 𝔽_p element, or an integral rational.
    pub fn to_bigint(&self, a: &Scalar) -> Option<BigInt> {
        match a {
            Scalar::Int(v) => Some(v.clone()),
            Scalar::Mod(v) => Some(BigInt::from(*v)),
            Scalar::Rat(v) if v.is_integer() => Some(v.numer().clone()),
            Scalar::Rat(_) => None,
        }
    }

    pub(crate) fn kind_matches(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (BaseRing::Integers, Scalar::Int(_))
                | (BaseRing::Rationals, Scalar::Rat(_))
                | (BaseRing::PrimeField(_), Scalar::Mod(_))
        )
    }
}
