//! Exact scalars: arbitrary-precision rationals with p-adic valuations and
//! the dual-number ring of first-order infinitesimals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// The coefficient field is modeled by exact rationals.
pub type Scalar = BigRational;

/// Scalar from an integer pair `n/d`.
pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Scalar from an integer.
pub fn rat_int(n: i64) -> Scalar {
    BigRational::from(BigInt::from(n))
}

/// Parses `"num"` or `"num/den"` into a scalar.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid integer `{t}`")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
    }
}

/// Canonical string form: `"n"` for integers, `"n/d"` otherwise.
pub fn scalar_string(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// p-adic valuation value, with `Infinite` reserved for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// v_p of a rational, normalized so that `v_p(p) = 1`; `Infinite` for zero.
pub fn p_valuation(x: &Scalar, p: &BigInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let strip = |mut n: BigInt| -> (BigInt, i64) {
        let mut v = 0i64;
        loop {
            let (q, r) = n.div_rem(p);
            if r.is_zero() {
                n = q;
                v += 1;
            } else {
                return (n, v);
            }
        }
    };
    let (_, vn) = strip(x.numer().abs());
    let (_, vd) = strip(x.denom().abs());
    Valuation::Finite(vn - vd)
}

/// Dual number `a + bZ` with `Z² = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualScalar {
    pub a: Scalar,
    pub b: Scalar,
}

impl DualScalar {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        DualScalar { a, b }
    }

    pub fn constant(a: Scalar) -> Self {
        DualScalar { a, b: Scalar::zero() }
    }

    pub fn zero() -> Self {
        DualScalar::constant(Scalar::zero())
    }

    pub fn one() -> Self {
        DualScalar::constant(Scalar::one())
    }

    pub fn is_unit(&self) -> bool {
        !self.a.is_zero()
    }

    /// Multiplicative inverse `(1/a) − (b/a²)Z`; fails when the constant term
    /// vanishes.
    pub fn invert(&self) -> Result<DualScalar> {
        if self.a.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv = self.a.recip();
        Ok(DualScalar {
            a: inv.clone(),
            b: -(&self.b * &inv * &inv),
        })
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}Z", scalar_string(&self.a), scalar_string(&self.b))
    }
}

impl Add for &DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: &DualScalar) -> DualScalar {
        DualScalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: &DualScalar) -> DualScalar {
        DualScalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Mul for &DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: &DualScalar) -> DualScalar {
        DualScalar {
            a: &self.a * &rhs.a,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        let p3 = BigInt::from(3);
        assert_eq!(p_valuation(&rat_int(1), &p3), Valuation::Finite(0));
        assert_eq!(p_valuation(&rat_int(0), &p3), Valuation::Infinite);
        assert_eq!(p_valuation(&rat_int(18), &p3), Valuation::Finite(2));
        assert_eq!(p_valuation(&rat(1, 9), &p3), Valuation::Finite(-2));
    }

    #[test]
    fn dual_inverse_examples() {
        let x = DualScalar::new(rat_int(1), rat_int(1));
        assert_eq!(x.invert().unwrap(), DualScalar::new(rat_int(1), rat_int(-1)));

        let y = DualScalar::new(rat_int(2), rat_int(0));
        assert_eq!(y.invert().unwrap(), DualScalar::new(rat(1, 2), rat_int(0)));

        // Frozen by multiplying back out: (3 + 6Z)(1/3 − (2/3)Z) = 1.
        let z = DualScalar::new(rat_int(3), rat_int(6));
        let zi = z.invert().unwrap();
        assert_eq!(zi, DualScalar::new(rat(1, 3), rat(-2, 3)));
        assert_eq!(&z * &zi, DualScalar::one());

        assert!(matches!(
            DualScalar::new(rat_int(0), rat_int(5)).invert(),
            Err(Error::NotAUnit)
        ));
    }

    #[test]
    fn scalar_round_trip() {
        for s in ["0", "-7", "1/3", "-22/7"] {
            let x = parse_scalar(s).unwrap();
            assert_eq!(scalar_string(&x), s);
        }
        assert_eq!(scalar_string(&parse_scalar("4/2").unwrap()), "2");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }
}
