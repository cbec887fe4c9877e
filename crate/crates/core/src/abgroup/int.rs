//! Arbitrary-precision integer with an inline fast path for values that fit
//! in an `i64`. Every operation promotes to `BigInt` on overflow, so results
//! are always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Exact integer. The `Big` variant is only used for values outside the
/// `i64` range, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Floor division; panics on a zero divisor.
    pub fn div_floor(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if !(*a == i64::MIN && *b == -1) {
                return Int::Small(a.div_floor(b));
            }
        }
        Int::from_big(self.to_big().div_floor(&other.to_big()))
    }

    /// Remainder with the sign of the divisor (so it lies in `[0, m)` for `m > 0`).
    pub fn mod_floor(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if *b != -1 {
                return Int::Small(a.mod_floor(b));
            }
            return Int::ZERO;
        }
        Int::from_big(self.to_big().mod_floor(&other.to_big()))
    }

    /// Division that is known to be exact.
    pub fn div_exact(&self, other: &Int) -> Int {
        self.div_floor(other)
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.mod_floor(self).is_zero()
    }

    /// Quotient rounded towards the nearest integer (ties towards negative
    /// infinity); keeps remainders small during elimination.
    pub fn div_round(&self, other: &Int) -> Int {
        let q = self.div_floor(other);
        let r = self - &(&q * other);
        let twice = &r + &r;
        if twice.abs() > other.abs() {
            if other.signum() > 0 {
                q + Int::ONE
            } else {
                q - Int::ONE
            }
        } else {
            q
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            let g = (a.unsigned_abs()).gcd(&b.unsigned_abs());
            if g <= i64::MAX as u64 {
                return Int::Small(g as i64);
            }
        }
        Int::from_big(self.to_big().gcd(&other.to_big()))
    }

    pub fn lcm(&self, other: &Int) -> Int {
        if self.is_zero() || other.is_zero() {
            return Int::ZERO;
        }
        let g = self.gcd(other);
        (self.div_exact(&g) * other).abs()
    }

    /// Returns `(g, s, t)` with `g = s*a + t*b`, `g >= 0`.
    pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
        if let (Int::Small(x), Int::Small(y)) = (a, b) {
            let (mut r0, mut r1) = (*x as i128, *y as i128);
            let (mut s0, mut s1, mut t0, mut t1) = (1i128, 0i128, 0i128, 1i128);
            while r1 != 0 {
                let q = r0.div_euclid(r1);
                (r0, r1) = (r1, r0 - q * r1);
                (s0, s1) = (s1, s0 - q * s1);
                (t0, t1) = (t1, t0 - q * t1);
            }
            if r0 < 0 {
                (r0, s0, t0) = (-r0, -s0, -t0);
            }
            if let (Ok(g), Ok(s), Ok(t)) = (i64::try_from(r0), i64::try_from(s0), i64::try_from(t0)) {
                return (Int::Small(g), Int::Small(s), Int::Small(t));
            }
        }
        let e = a.to_big().extended_gcd(&b.to_big());
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        (Int::from_big(g), Int::from_big(s), Int::from_big(t))
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        match i64::try_from(v) {
            Ok(x) => Int::Small(x),
            Err(_) => Int::from_big(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl std::str::FromStr for Int {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Int, Self::Err> {
        s.trim().parse::<BigInt>().map(Int::from_big)
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Int> for &'a Int {
    type Output = Int;
    #[inline]
    fn add(self, rhs: &'a Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_add(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Sub<&'a Int> for &'a Int {
    type Output = Int;
    #[inline]
    fn sub(self, rhs: &'a Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_sub(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() - rhs.to_big())
    }
}

impl<'a> Mul<&'a Int> for &'a Int {
    type Output = Int;
    #[inline]
    fn mul(self, rhs: &'a Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_mul(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() * rhs.to_big())
    }
}

impl<'a> Neg for &'a Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(a) => match a.checked_neg() {
                Some(c) => Int::Small(c),
                None => Int::from_big(-BigInt::from(*a)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Int> for Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: Int) -> Int {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Int> for Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: &'a Int) -> Int {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<'a> AddAssign<&'a Int> for Int {
    #[inline]
    fn add_assign(&mut self, rhs: &'a Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(c) = a.checked_add(*b) {
                *self = Int::Small(c);
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl<'a> SubAssign<&'a Int> for Int {
    #[inline]
    fn sub_assign(&mut self, rhs: &'a Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(c) = a.checked_sub(*b) {
                *self = Int::Small(c);
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl AddAssign<Int> for Int {
    fn add_assign(&mut self, rhs: Int) {
        *self += &rhs;
    }
}

impl SubAssign<Int> for Int {
    fn sub_assign(&mut self, rhs: Int) {
        *self -= &rhs;
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

/// `acc += a * b` without intermediate clones in the common small case.
#[inline]
pub fn add_mul(acc: &mut Int, a: &Int, b: &Int) {
    if let (Int::Small(x), Int::Small(y), Int::Small(z)) = (&*acc, a, b) {
        if let Some(p) = y.checked_mul(*z) {
            if let Some(s) = x.checked_add(p) {
                *acc = Int::Small(s);
                return;
            }
        }
    }
    *acc = &*acc + &(a * b);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(&b - &Int::ONE, a);
        let sq = &a * &a;
        assert_eq!(sq.to_big(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
    }

    #[test]
    fn floor_ops() {
        let m = Int::from(5);
        assert_eq!(Int::from(-7).mod_floor(&m), Int::from(3));
        assert_eq!(Int::from(-7).div_floor(&m), Int::from(-2));
        assert_eq!(Int::from(7).div_round(&m), Int::from(1));
        assert_eq!(Int::from(8).div_round(&m), Int::from(2));
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(12i64, 18i64), (-4, 6), (0, 5), (7, 0), (-3, -9)] {
            let (g, s, t) = Int::ext_gcd(&Int::from(a), &Int::from(b));
            assert_eq!(&(&s * &Int::from(a)) + &(&t * &Int::from(b)), g);
            assert!(!g.is_negative());
        }
    }
}
