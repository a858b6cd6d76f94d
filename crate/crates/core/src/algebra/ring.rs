use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact scalar. Values over `F_p` are kept as integers in `[0, p)`.
pub type Scalar = BigRational;

/// Coefficient ring of an algebra.
///
/// Linear algebra (spans, null spaces) is carried out over the fraction
/// field: ℚ for both `Integers` and `Rationals`, `F_p` for `PrimeField`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffRing {
    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffRing::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        self.reduce(Scalar::one())
    }

    pub fn from_int(&self, v: impl Into<BigInt>) -> Scalar {
        self.reduce(Scalar::from_integer(v.into()))
    }

    /// Canonical representative. Only `F_p` needs work: integers are reduced
    /// mod `p`, and a fraction `a/b` becomes `a·b⁻¹`.
    ///
    /// Panics if the denominator is divisible by `p`; callers that accept
    /// external input go through [`CoeffRing::parse`] instead.
    pub fn reduce(&self, x: Scalar) -> Scalar {
        match self {
            CoeffRing::PrimeField(p) => {
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                if x.denom().is_one() {
                    return Scalar::from_integer(num);
                }
                let den = x.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator invertible mod p");
                Scalar::from_integer((num * inv).mod_floor(&p))
            }
            _ => x,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    /// Inverse in the fraction field; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            CoeffRing::PrimeField(p) => {
                let p = BigInt::from(*p);
                mod_inverse(&a.numer().mod_floor(&p), &p).map(Scalar::from_integer)
            }
            _ => Some(a.recip()),
        }
    }

    pub fn is_integral(&self, a: &Scalar) -> bool {
        a.is_integer()
    }

    /// Parses `"7"`, `"-3"` or `"a/b"`. Over the integers only whole numbers
    /// are accepted; over `F_p` the denominator must be a unit.
    pub fn parse(&self, text: &str) -> Result<Scalar, String> {
        let t = text.trim();
        let value = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
                let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
                if d.is_zero() {
                    return Err(format!("zero denominator in {text:?}"));
                }
                Scalar::new(n, d)
            }
            None => Scalar::from_integer(t.parse().map_err(|_| format!("bad number {text:?}"))?),
        };
        match self {
            CoeffRing::Integers if !value.is_integer() => {
                Err(format!("{text:?} is not an integer"))
            }
            CoeffRing::PrimeField(p) if (value.denom() % BigInt::from(*p)).is_zero() => {
                Err(format!("{text:?} has a denominator divisible by {p}"))
            }
            _ => Ok(self.reduce(value)),
        }
    }

    /// Short textual form of a scalar: `"3"`, `"-1/2"`.
    pub fn format(&self, a: &Scalar) -> String {
        a.to_string()
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => f.write_str("integers"),
            CoeffRing::Rationals => f.write_str("rationals"),
            CoeffRing::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(p);
    if !g.gcd.abs().is_one() {
        return None;
    }
    Some(g.x.mod_floor(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_reduction() {
        let f5 = CoeffRing::PrimeField(5);
        assert_eq!(f5.parse("7").unwrap(), f5.from_int(2));
        assert_eq!(f5.parse("1/2").unwrap(), f5.from_int(3));
        assert_eq!(f5.mul(&f5.from_int(3), &f5.from_int(2)), f5.one());
        assert_eq!(f5.inv(&f5.from_int(2)), Some(f5.from_int(3)));
        assert!(f5.parse("1/10").is_err());
    }

    #[test]
    fn integer_parsing() {
        let z = CoeffRing::Integers;
        assert!(z.parse("1/2").is_err());
        assert_eq!(z.parse(" -4 ").unwrap(), z.from_int(-4));
        assert!(z.parse("x").is_err());
    }

    #[test]
    fn rationals() {
        let q = CoeffRing::Rationals;
        assert_eq!(q.parse("2/4").unwrap(), Scalar::new(1.into(), 2.into()));
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }
}
