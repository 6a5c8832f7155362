//! Exact scalars: rational numbers with an optional Gaussian part.
//!
//! Every coefficient in the kernel is a `Scalar`. Arithmetic is exact; there
//! is no floating point anywhere. The imaginary part is only populated when
//! the owning table's field flag is Gaussian — the parser enforces this, the
//! arithmetic itself is flag-agnostic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exact inverse. Panics on zero; callers check first.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero scalar");
        // (a + bi)^-1 = (a - bi) / (a^2 + b^2)
        let norm = &self.re * &self.re + &self.im * &self.im;
        Scalar {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        Scalar {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        Scalar {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        // i^2 = -1
        Scalar {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Canonical form: `a`, `b*i`, or `(a+b*i)`; pure imaginary unit prints `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return write!(f, "i");
            }
            if (-&self.im).is_one() {
                return write!(f, "-i");
            }
            return write!(f, "{}*i", fmt_rational(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        let abs_im = self.im.abs();
        if abs_im.is_one() {
            write!(f, "({}{}i)", fmt_rational(&self.re), sign)
        } else {
            write!(
                f,
                "({}{}{}*i)",
                fmt_rational(&self.re),
                sign,
                fmt_rational(&abs_im)
            )
        }
    }
}
