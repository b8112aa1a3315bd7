//! Coefficient systems. Everything is stored as an exact `BigRational`;
//! the ring tag decides membership, normal forms, and which operations
//! exist. ℚ/ℤ is a group, not a ring, so it has no multiplication — cup
//! products over it are rejected rather than computed on representatives.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ring {
    Int,
    Rat,
    /// ℤ/n with canonical representatives 0…n−1.
    ModN(u32),
    /// ℚ/ℤ with canonical representatives in [0, 1).
    QModZ,
}

impl Ring {
    /// Canonical representative of x in this ring.
    pub fn normalize(&self, x: BigRational) -> BigRational {
        match self {
            Ring::Int | Ring::Rat => x,
            Ring::ModN(n) => {
                let n = BigRational::from_integer(BigInt::from(*n));
                let q = (&x / &n).floor();
                x - q * n
            }
            Ring::QModZ => {
                let f = x.floor();
                x - f
            }
        }
    }

    /// Does x lie in the ring (before normalization)?
    pub fn admits(&self, x: &BigRational) -> bool {
        match self {
            Ring::Int | Ring::ModN(_) => x.is_integer(),
            Ring::Rat | Ring::QModZ => true,
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.normalize(a + b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.normalize(-a)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.normalize(a - b)
    }

    /// Ring multiplication; undefined for ℚ/ℤ.
    pub fn mul(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        match self {
            Ring::QModZ => Err(Error::math(
                "Q/Z carries no ring multiplication; products of circle-valued cochains are undefined",
            )),
            _ => Ok(self.normalize(a * b)),
        }
    }

    pub fn one(&self) -> Result<BigRational> {
        match self {
            Ring::QModZ => Err(Error::math("Q/Z has no multiplicative unit")),
            _ => Ok(self.normalize(BigRational::one())),
        }
    }

    pub fn is_zero(&self, x: &BigRational) -> bool {
        self.normalize(x.clone()).is_zero()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Int => write!(f, "Z"),
            Ring::Rat => write!(f, "Q"),
            Ring::ModN(n) => write!(f, "Z/{n}"),
            Ring::QModZ => write!(f, "Q/Z"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(Ring::Int),
            "Q" => Ok(Ring::Rat),
            "Q/Z" => Ok(Ring::QModZ),
            _ => {
                if let Some(n) = s.strip_prefix("Z/") {
                    let n: u32 = n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad modulus in ring {s:?}")))?;
                    if n == 0 {
                        return Err(Error::Parse("modulus must be positive".into()));
                    }
                    Ok(Ring::ModN(n))
                } else {
                    Err(Error::Parse(format!(
                        "unknown ring {s:?} (expected Z, Q, Z/n, or Q/Z)"
                    )))
                }
            }
        }
    }
}

/// Render a rational as "p" or "p/q".
pub fn scalar_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_scalar(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("bad number {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, denom))
        }
    }
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}
