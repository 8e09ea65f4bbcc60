//! Scalar abstraction shared by the polynomial, sampling and LP layers.
//!
//! Everything numeric in the crate is written against [`Scalar`], which is
//! implemented for `f32`, `f64` and the double-double type [`Dd`]. The
//! double-double type is used where best-approximation errors must be
//! resolved below the `f64` rounding floor.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Real scalar usable as a polynomial coefficient and LP entry.
pub trait Scalar:
    Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Copy
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + 'static
{
    /// Exact conversion for every value the type can hold.
    fn of(x: f64) -> Self;

    /// Nearest `f64`.
    fn as_f64(self) -> f64;

    fn sqrt(self) -> Self;

    fn exp(self) -> Self;

    fn is_finite(self) -> bool;

    /// Feasibility / optimality tolerance used by the simplex engine.
    fn lp_tolerance() -> Self;

    /// Smallest pivot the simplex engine accepts.
    fn pivot_tolerance() -> Self {
        Self::lp_tolerance()
    }

    /// Unit roundoff of the type.
    fn unit_roundoff() -> f64;

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut e = n;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn from_usize(n: usize) -> Self {
        Self::of(n as f64)
    }
}

impl Scalar for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn as_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn lp_tolerance() -> Self {
        1e-9
    }
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }
}

impl Scalar for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
    fn sqrt(self) -> Self {
        f32::sqrt(self)
    }
    fn exp(self) -> Self {
        f32::exp(self)
    }
    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
    fn lp_tolerance() -> Self {
        1e-4
    }
    fn unit_roundoff() -> f64 {
        f32::EPSILON as f64 / 2.0
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving roughly 106
/// bits of significand.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Builds from two components, renormalising.
    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn recip(self) -> Self {
        Dd::ONE / self
    }

    fn floor(self) -> Self {
        let h = self.hi.floor();
        if h == self.hi {
            let (s, e) = quick_two_sum(h, self.lo.floor());
            Dd { hi: s, lo: e }
        } else {
            Dd { hi: h, lo: 0.0 }
        }
    }

    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            -(-self).floor()
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, b: Dd) -> Dd {
        // long division: three correction steps
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Dd {
            #[inline]
            fn $m(&mut self, rhs: Dd) {
                *self = *self $op rhs;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd::ONE
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(Dd::new)
    }
}

impl Signed for Dd {
    fn abs(&self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -*self
        } else {
            *self
        }
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if *self <= *other {
            Dd::ZERO
        } else {
            *self - *other
        }
    }
    fn signum(&self) -> Self {
        if self.is_positive() {
            Dd::ONE
        } else if self.is_negative() {
            -Dd::ONE
        } else {
            Dd::ZERO
        }
    }
    fn is_positive(&self) -> bool {
        self.hi > 0.0 || (self.hi == 0.0 && self.lo > 0.0)
    }
    fn is_negative(&self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Some(Dd::from_parts(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Dd::from_parts(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Dd::new(x))
    }
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        Some(t.hi as i64 + t.lo as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        if self.is_negative() {
            None
        } else {
            let t = self.trunc();
            Some((t.hi as i128 + t.lo as i128) as u64)
        }
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl Scalar for Dd {
    fn of(x: f64) -> Self {
        Dd::new(x)
    }

    fn as_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(self.hi.sqrt());
        }
        // one Newton step on the f64 root
        let x = self.hi.sqrt();
        let xd = Dd::new(x);
        let r = self - xd * xd;
        xd + Dd::new(r.hi / (2.0 * x))
    }

    fn exp(self) -> Self {
        if !self.hi.is_finite() {
            return Dd::new(self.hi.exp());
        }
        // x = k ln2 + r, then halve r, Taylor, square back, scale by 2^k
        const LN2: Dd = Dd {
            hi: 0.6931471805599453,
            lo: 2.3190468138462996e-17,
        };
        let k = (self.hi / LN2.hi).round();
        if k.abs() > 1000.0 {
            return Dd::new(self.hi.exp());
        }
        let mut r = self - LN2 * Dd::new(k);
        for _ in 0..3 {
            r = r * Dd::new(0.5);
        }
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for n in 1..=20 {
            term = term * r / Dd::new(n as f64);
            sum += term;
        }
        for _ in 0..3 {
            sum = sum * sum;
        }
        let scale = 2f64.powi(k as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn lp_tolerance() -> Self {
        Dd::new(1e-26)
    }

    fn pivot_tolerance() -> Self {
        Dd::new(1e-12)
    }

    fn unit_roundoff() -> f64 {
        // 2^-104
        4.930380657631324e-32
    }
}

impl Dd {
    /// Reciprocal, exposed for callers outside the trait.
    pub fn inv(self) -> Self {
        self.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn third() -> Dd {
        Dd::ONE / Dd::new(3.0)
    }

    #[test]
    fn division_is_double_double_accurate() {
        let r = third() * Dd::new(3.0) - Dd::ONE;
        assert!(r.abs().as_f64() < 1e-31, "{r:?}");
    }

    #[test]
    fn harmonic_sum_matches_high_precision() {
        // sum_{i<=1000} 1/i to 40 digits
        let mut s = Dd::ZERO;
        for i in 1..=1000 {
            s += Dd::ONE / Dd::new(i as f64);
        }
        let reference = Dd::from_parts(7.485470860550345, -1.387086659858835e-16);
        let err = (s - reference).abs().as_f64();
        assert!(err < 1e-28, "err {err:e}");
    }

    #[test]
    fn exp_matches_high_precision() {
        // exp(-0.97) and exp(1), reference digits from a 40-digit computation
        let e1 = Dd::ONE.exp();
        let e_ref = Dd::from_parts(2.718281828459045, 1.4456468917292502e-16);
        assert!((e1 - e_ref).abs().as_f64() < 1e-29);
        let em = Dd::new(-0.97).exp();
        let em_ref = Dd::from_parts(0.37908303810339883, 1.9373982114624076e-19);
        assert!((em - em_ref).abs().as_f64() < 1e-28, "{em:?}");
    }

    #[test]
    fn sqrt_two() {
        let s = Dd::new(2.0).sqrt();
        assert!((s * s - Dd::new(2.0)).abs().as_f64() < 1e-31);
    }

    #[test]
    fn ordering_and_sign() {
        let a = Dd::from_parts(1.0, 1e-20);
        let b = Dd::ONE;
        assert!(a > b);
        assert!((b - a).is_negative());
        assert_eq!(Dd::new(-2.5).abs(), Dd::new(2.5));
        assert_eq!(Dd::new(7.0) % Dd::new(3.0), Dd::ONE);
    }

    #[test]
    fn powi_by_squaring() {
        assert_eq!(Scalar::powi(3.0_f64, 5), 243.0);
        assert_eq!(Scalar::powi(Dd::new(2.0), 10), Dd::new(1024.0));
    }
}
