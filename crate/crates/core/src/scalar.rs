//! Exact scalar fields.
//!
//! Everything downstream is generic over [`Field`]. Two concrete fields are
//! provided: the rationals ([`crate::Q`]) and the cyclotomic field
//! `Q(ζ)` with `ζ² + ζ + 1 = 0` ([`crate::QZeta`]), which is needed as soon as a
//! diagram automorphism of order three is diagonalised.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact field with decidable zero test.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn from_i64(n: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// Multiplicative inverse. Panics on zero, like integer division.
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// `exp(2πi/k)` when the field contains it.
    fn primitive_root(k: u32) -> Option<Self>;

    /// The value as a rational number, if it lies in `Q`.
    fn to_rational(&self) -> Option<BigRational>;

    /// The value as an integer, if it is one.
    fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Short tag used in reports and descriptors.
    fn field_name() -> &'static str;
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn inv(&self) -> Self {
        self.recip()
    }

    fn primitive_root(k: u32) -> Option<Self> {
        match k {
            1 => Some(Self::one()),
            2 => Some(-Self::one()),
            _ => None,
        }
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn field_name() -> &'static str {
        "Q"
    }
}

/// `a + b·ζ` with `ζ² = -1 - ζ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo3<R> {
    pub a: R,
    pub b: R,
}

impl<R: Field> Cyclo3<R> {
    pub fn new(a: R, b: R) -> Self {
        Cyclo3 { a, b }
    }

    pub fn zeta() -> Self {
        Cyclo3::new(R::zero(), R::one())
    }

    /// Image under the Galois automorphism ζ ↦ ζ².
    pub fn conj(&self) -> Self {
        // a + bζ² = (a - b) - bζ
        Cyclo3::new(self.a.clone() - self.b.clone(), -self.b.clone())
    }

    /// Field norm to the base: a² - ab + b².
    pub fn norm(&self) -> R {
        self.a.clone() * self.a.clone() - self.a.clone() * self.b.clone()
            + self.b.clone() * self.b.clone()
    }
}

impl<R: Field> Debug for Cyclo3<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<R: Field> Display for Cyclo3<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*z3", self.b),
            (false, false) => write!(f, "{} + ({})*z3", self.a, self.b),
        }
    }
}

impl<R: Field> Zero for Cyclo3<R> {
    fn zero() -> Self {
        Cyclo3::new(R::zero(), R::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<R: Field> One for Cyclo3<R> {
    fn one() -> Self {
        Cyclo3::new(R::one(), R::zero())
    }
}

impl<R: Field> Add for Cyclo3<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cyclo3::new(self.a + o.a, self.b + o.b)
    }
}

impl<R: Field> Sub for Cyclo3<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cyclo3::new(self.a - o.a, self.b - o.b)
    }
}

impl<R: Field> Neg for Cyclo3<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclo3::new(-self.a, -self.b)
    }
}

impl<R: Field> Mul for Cyclo3<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (a + bζ)(c + dζ) = ac + (ad + bc)ζ + bdζ² = (ac - bd) + (ad + bc - bd)ζ
        let bd = self.b.clone() * o.b.clone();
        let a = self.a.clone() * o.a.clone() - bd.clone();
        let b = self.a * o.b + self.b * o.a - bd;
        Cyclo3::new(a, b)
    }
}

impl<R: Field> Div for Cyclo3<R> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(ζ)");
        let c = self * o.conj();
        Cyclo3::new(c.a / n.clone(), c.b / n)
    }
}

impl<R: Field> AddAssign for Cyclo3<R> {
    fn add_assign(&mut self, o: Self) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl<R: Field> SubAssign for Cyclo3<R> {
    fn sub_assign(&mut self, o: Self) {
        self.a -= o.a;
        self.b -= o.b;
    }
}

impl<R: Field> MulAssign for Cyclo3<R> {
    fn mul_assign(&mut self, o: Self) {
        *self = self.clone() * o;
    }
}

impl<R: Field> Field for Cyclo3<R> {
    fn from_i64(n: i64) -> Self {
        Cyclo3::new(R::from_i64(n), R::zero())
    }

    fn from_rational(r: &BigRational) -> Self {
        Cyclo3::new(R::from_rational(r), R::zero())
    }

    fn primitive_root(k: u32) -> Option<Self> {
        match k {
            1 => Some(Self::one()),
            2 => Some(-Self::one()),
            3 => Some(Self::zeta()),
            // -ζ² = 1 + ζ is a primitive sixth root
            6 => Some(Cyclo3::new(R::one(), R::one())),
            _ => None,
        }
    }

    fn to_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            self.a.to_rational()
        } else {
            None
        }
    }

    fn field_name() -> &'static str {
        "Q(z3)"
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Z3 = Cyclo3<BigRational>;

    fn z(a: i64, b: i64) -> Z3 {
        Cyclo3::new(BigRational::from_i64(a), BigRational::from_i64(b))
    }

    #[test]
    fn zeta_is_cube_root_of_unity() {
        let w = Z3::zeta();
        let w3 = w.clone() * w.clone() * w.clone();
        assert_eq!(w3, Z3::one());
        assert_ne!(w.clone(), Z3::one());
        assert_eq!(w.clone() * w.clone() + w + Z3::one(), Z3::zero());
    }

    #[test]
    fn inverse_roundtrip() {
        for (a, b) in [(1, 1), (2, -3), (0, 5), (7, 0), (-4, 9)] {
            let x = z(a, b);
            assert_eq!(x.clone() * x.inv(), Z3::one());
        }
    }

    #[test]
    fn rational_roots() {
        assert_eq!(BigRational::primitive_root(2), Some(-BigRational::one()));
        assert!(BigRational::primitive_root(3).is_none());
        let r6 = Z3::primitive_root(6).unwrap();
        let mut p = Z3::one();
        for _ in 0..6 {
            p *= r6.clone();
        }
        assert_eq!(p, Z3::one());
    }
}
