//! Midpoint-radius real numbers.
//!
//! An [`ApproxReal`] is a multiprecision midpoint paired with an absolute
//! error radius. Every arithmetic operation propagates the radius of its
//! inputs and adds a bound on its own rounding error, so the exact value of
//! the expression tree always lies in `[value - err, value + err]`.
//!
//! Radii are kept at [`ERR_PREC`] bits and always rounded upward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::Float;

use crate::error::{Error, Result};

/// Precision, in bits, of error radii.
pub const ERR_PREC: u32 = 64;

macro_rules! up {
    ($e:expr) => {
        Float::with_val_round(ERR_PREC, $e, Round::Up).0
    };
}

macro_rules! down {
    ($e:expr) => {
        Float::with_val_round(ERR_PREC, $e, Round::Down).0
    };
}

fn sum_up(a: &Float, b: &Float) -> Float {
    up!(a + b)
}

/// Upper bound on the round-to-nearest error of a value stored at `prec` bits.
fn rounding(v: &Float, prec: u32) -> Float {
    let mag: Float = up!(&*v.as_abs());
    mag >> (prec - 1)
}

#[derive(Clone, Debug)]
pub struct ApproxReal {
    value: Float,
    err: Float,
}

impl ApproxReal {
    /// An exactly known value.
    pub fn exact(value: Float) -> Self {
        ApproxReal {
            value,
            err: Float::new(ERR_PREC),
        }
    }

    /// A value with a caller-supplied error radius.
    ///
    /// Panics if `err` is negative or not finite.
    pub fn with_err(value: Float, err: &Float) -> Self {
        assert!(
            err.is_finite() && !err.is_sign_negative(),
            "error radius must be finite and non-negative"
        );
        ApproxReal {
            value,
            err: up!(err),
        }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Self::exact(Float::with_val(prec, x))
    }

    pub fn from_u64(x: u64, prec: u32) -> Self {
        Self::exact(Float::with_val(prec, x))
    }

    /// Correctly rounded value of a rug expression, with its rounding bound.
    pub(crate) fn rounded(value: Float) -> Self {
        let err = rounding(&value, value.prec());
        ApproxReal { value, err }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn err(&self) -> &Float {
        &self.err
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Error radius as an `f64`, rounded upward (may be `inf`).
    pub fn err_f64(&self) -> f64 {
        self.err.to_f64_round(Round::Up)
    }

    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec(), &self.value - &self.err, Round::Down).0
    }

    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec(), &self.value + &self.err, Round::Up).0
    }

    pub fn contains(&self, x: &Float) -> bool {
        let d = Float::with_val_round(ERR_PREC, &self.value - x, Round::Zero).0;
        d.abs() <= self.err
    }

    /// True when the two enclosures intersect.
    pub fn overlaps(&self, other: &ApproxReal) -> bool {
        let d: Float = Float::with_val_round(ERR_PREC, &self.value - &other.value, Round::Zero).0.abs();
        let r: Float = up!(&self.err + &other.err);
        d <= r
    }

    /// Certainly strictly positive.
    pub fn is_positive(&self) -> bool {
        self.value.cmp0() == Some(Ordering::Greater) && *self.value.as_abs() > self.err
    }

    /// Certainly strictly negative.
    pub fn is_negative(&self) -> bool {
        self.value.cmp0() == Some(Ordering::Less) && *self.value.as_abs() > self.err
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.err.is_finite()
    }

    /// Widens the radius by `extra`.
    pub fn inflate(&mut self, extra: &Float) {
        self.err = up!(&self.err + extra);
    }

    pub fn abs(&self) -> Self {
        ApproxReal {
            value: self.value.clone().abs(),
            err: self.err.clone(),
        }
    }

    /// Re-rounds the midpoint to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        let value = Float::with_val(prec, &self.value);
        let mut err: Float = up!(&value - &self.value);
        err.abs_mut();
        let err = up!(&err + &self.err);
        ApproxReal { value, err }
    }

    fn lower_abs(&self) -> Float {
        down!(&*self.value.as_abs() - &self.err)
    }

    fn upper_abs(&self) -> Float {
        up!(&*self.value.as_abs() + &self.err)
    }

    pub fn mul_u64(&self, m: u64) -> Self {
        let value = Float::with_val(self.prec(), &self.value * m);
        let err = sum_up(&up!(&self.err * m), &rounding(&value, self.prec()));
        ApproxReal { value, err }
    }

    pub fn div_u64(&self, d: u64) -> Self {
        assert!(d > 0, "division by zero");
        let value = Float::with_val(self.prec(), &self.value / d);
        let err = sum_up(&up!(&self.err / d), &rounding(&value, self.prec()));
        ApproxReal { value, err }
    }

    /// Multiplies by an exact power of two.
    pub fn mul_pow2(&self, e: i32) -> Self {
        ApproxReal {
            value: self.value.clone() << e,
            err: self.err.clone() << e,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn checked_div(&self, rhs: &ApproxReal) -> Result<Self> {
        let b_lo = rhs.lower_abs();
        if b_lo.cmp0() != Some(Ordering::Greater) {
            return Err(Error::domain("division by an enclosure containing zero"));
        }
        let prec = self.prec().max(rhs.prec());
        let value = Float::with_val(prec, &self.value / &rhs.value);
        // |a/b - a'/b'| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
        let num = sum_up(&up!(&*self.value.as_abs() * &rhs.err), &up!(&*rhs.value.as_abs() * &self.err));
        let den: Float = down!(&*rhs.value.as_abs() * &b_lo);
        let err = sum_up(&up!(&num / &den), &rounding(&value, prec));
        Ok(ApproxReal { value, err })
    }

    pub fn recip(&self) -> Result<Self> {
        ApproxReal::exact(Float::with_val(self.prec(), 1)).checked_div(self)
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let value = Float::with_val(prec, self.value.exp_ref());
        // e^(v+d) - e^v <= e^v (e^|d| - 1); e^v <= |value| (1 + 2^(1-prec))
        let ev = sum_up(&up!(&value), &rounding(&value, prec));
        let grow: Float = up!(self.err.exp_m1_ref());
        let err = sum_up(&up!(&ev * &grow), &rounding(&value, prec));
        ApproxReal { value, err }
    }

    /// `exp(x) - 1` without cancellation near zero.
    pub fn exp_m1(&self) -> Self {
        let prec = self.prec();
        let value = Float::with_val(prec, self.value.exp_m1_ref());
        let hi: Float = up!(&self.value + &self.err);
        let upper_exp: Float = up!(hi.exp_ref());
        let grow: Float = up!(self.err.exp_m1_ref());
        let err = sum_up(&up!(&upper_exp * &grow), &rounding(&value, prec));
        ApproxReal { value, err }
    }

    pub fn ln(&self) -> Result<Self> {
        if self.value.cmp0() != Some(Ordering::Greater) {
            return Err(Error::domain("logarithm of a non-positive enclosure"));
        }
        let lo = self.lower_abs();
        if lo.cmp0() != Some(Ordering::Greater) {
            return Err(Error::domain("logarithm of an enclosure reaching zero"));
        }
        let prec = self.prec();
        let value = Float::with_val(prec, self.value.ln_ref());
        // ln(v / (v - e)) <= e / (v - e)
        let err = sum_up(&up!(&self.err / &lo), &rounding(&value, prec));
        Ok(ApproxReal { value, err })
    }

    /// `ln(1 + x)` without cancellation near zero.
    pub fn ln_1p(&self) -> Result<Self> {
        let one_plus_lo: Float = down!(1 + self.lower());
        if one_plus_lo.cmp0() != Some(Ordering::Greater) {
            return Err(Error::domain("ln_1p of an enclosure reaching -1"));
        }
        let prec = self.prec();
        let value = Float::with_val(prec, self.value.ln_1p_ref());
        let err = sum_up(&up!(&self.err / &one_plus_lo), &rounding(&value, prec));
        Ok(ApproxReal { value, err })
    }

    /// Integer power.
    pub fn pow_u(&self, n: u32) -> Self {
        let prec = self.prec();
        if n == 0 {
            return ApproxReal::exact(Float::with_val(prec, 1));
        }
        let value = Float::with_val(prec, rug::ops::Pow::pow(&self.value, n));
        // |(a+d)^n - a^n| <= n (|a| + e)^(n-1) e
        let hi = self.upper_abs();
        let mut bound: Float = up!(rug::ops::Pow::pow(&hi, n - 1));
        bound = up!(&bound * &self.err);
        bound = up!(&bound * n);
        let err = sum_up(&bound, &rounding(&value, prec));
        ApproxReal { value, err }
    }

    /// Real power `self^y` for a positive base.
    pub fn powf(&self, y: &ApproxReal) -> Result<Self> {
        Ok((&self.ln()? * y).exp())
    }

    /// Positive `n`-th root of a positive enclosure.
    pub fn root(&self, n: u32) -> Result<Self> {
        if n == 1 {
            return Ok(self.clone());
        }
        Ok(self.ln()?.div_u64(u64::from(n)).exp())
    }

    /// Renders the midpoint with `digits` significant decimal digits.
    pub fn value_string(&self, digits: usize) -> String {
        self.value.to_string_radix(10, Some(digits))
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((f64::from(self.prec()) * std::f64::consts::LOG10_2) as usize).max(2);
        write!(
            f,
            "{} ± {}",
            self.value.to_string_radix(10, Some(digits)),
            self.err.to_string_radix(10, Some(4))
        )
    }
}

impl Neg for &ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        ApproxReal {
            value: -self.value.clone(),
            err: self.err.clone(),
        }
    }
}

impl Neg for ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        ApproxReal {
            value: -self.value,
            err: self.err,
        }
    }
}

impl Add for &ApproxReal {
    type Output = ApproxReal;
    fn add(self, rhs: &ApproxReal) -> ApproxReal {
        let prec = self.prec().max(rhs.prec());
        let value = Float::with_val(prec, &self.value + &rhs.value);
        let err = sum_up(&up!(&self.err + &rhs.err), &rounding(&value, prec));
        ApproxReal { value, err }
    }
}

impl Sub for &ApproxReal {
    type Output = ApproxReal;
    fn sub(self, rhs: &ApproxReal) -> ApproxReal {
        let prec = self.prec().max(rhs.prec());
        let value = Float::with_val(prec, &self.value - &rhs.value);
        let err = sum_up(&up!(&self.err + &rhs.err), &rounding(&value, prec));
        ApproxReal { value, err }
    }
}

impl Mul for &ApproxReal {
    type Output = ApproxReal;
    fn mul(self, rhs: &ApproxReal) -> ApproxReal {
        let prec = self.prec().max(rhs.prec());
        let value = Float::with_val(prec, &self.value * &rhs.value);
        let cross = sum_up(&up!(&*self.value.as_abs() * &rhs.err), &up!(&*rhs.value.as_abs() * &self.err));
        let err = sum_up(&sum_up(&cross, &up!(&self.err * &rhs.err)), &rounding(&value, prec));
        ApproxReal { value, err }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ApproxReal {
            type Output = ApproxReal;
            fn $m(self, rhs: ApproxReal) -> ApproxReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ApproxReal> for ApproxReal {
            type Output = ApproxReal;
            fn $m(self, rhs: &ApproxReal) -> ApproxReal {
                (&self).$m(rhs)
            }
        }
        impl $tr<ApproxReal> for &ApproxReal {
            type Output = ApproxReal;
            fn $m(self, rhs: ApproxReal) -> ApproxReal {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
