//! Extended-precision scalars.
//!
//! Reals are MPFR floats (`rug::Float`); complex numbers are a plain pair of
//! them. Every value carries its own precision, and binary operations produce
//! results at the precision of the left operand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::Float;

use crate::error::{Error, Result};

pub type Real = Float;

/// Precisions accepted by the front end.
pub const SUPPORTED_PRECISIONS: [u32; 4] = [64, 128, 256, 512];

pub const DEFAULT_PRECISION: u32 = 128;

/// Working precision for a moment problem of maximal degree `maxdeg`:
/// 128 bits, raised to 256 once the degree exceeds 24.
pub fn default_precision_for(maxdeg: usize) -> u32 {
    if maxdeg > 24 {
        256
    } else {
        DEFAULT_PRECISION
    }
}

pub fn check_precision(bits: u32) -> Result<u32> {
    if bits >= 64 {
        Ok(bits)
    } else {
        Err(Error::InvalidArgument(format!(
            "precision must be at least 64 bits, got {bits}"
        )))
    }
}

#[inline]
pub fn real(prec: u32, v: f64) -> Real {
    Float::with_val(prec, v)
}

#[inline]
pub fn pi(prec: u32) -> Real {
    Float::with_val(prec, Constant::Pi)
}

/// log(n!) at the given precision.
pub fn ln_factorial(n: u64, prec: u32) -> Real {
    Float::with_val(prec, n + 1).ln_gamma()
}

pub fn factorial(n: u32, prec: u32) -> Real {
    Float::with_val(prec, Float::factorial(n))
}

/// 10^(-digits) as an f64, saturating at the smallest normal number.
pub fn decimal_floor(digits: f64) -> f64 {
    10f64.powf(-digits).max(f64::MIN_POSITIVE)
}

/// Number of significant decimal digits emitted for a `prec`-bit value.
pub fn output_digits(prec: u32) -> usize {
    (prec as f64 * 0.3).ceil() as usize
}

/// Decimal string of a real, rounded to `output_digits(prec)` digits.
pub fn to_decimal(x: &Real) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    x.to_string_radix(10, Some(output_digits(x.prec())))
}

#[derive(Clone, PartialEq)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl fmt::Debug for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Cplx {
    pub fn zero(prec: u32) -> Self {
        Cplx {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Cplx {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Cplx { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cplx {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    /// exp(i·theta)
    pub fn cis(theta: &Real) -> Self {
        let prec = theta.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(prec));
        Cplx { re: c, im: s }
    }

    #[inline]
    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Cplx {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Real {
        let mut r = Float::with_val(self.prec(), self.re.square_ref());
        r += Float::with_val(self.prec(), self.im.square_ref());
        r
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn scale(&self, s: &Real) -> Self {
        let p = self.prec();
        Cplx {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Cplx {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -(&self.im / &n).complete(p)),
        }
    }

    pub fn div(&self, other: &Cplx) -> Self {
        self * &other.recip()
    }

    pub fn sqrt(&self) -> Self {
        // principal branch
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return Cplx::zero(p);
        }
        let half = Float::with_val(p, 0.5);
        let mut a = Float::with_val(p, &r + &self.re);
        a *= &half;
        let a = a.sqrt();
        let mut b = Float::with_val(p, &r - &self.re);
        b *= &half;
        let mut b = b.sqrt();
        if self.im.is_sign_negative() {
            b = -b;
        }
        Cplx { re: a, im: b }
    }

    /// self += a * b
    #[inline]
    pub fn add_mul(&mut self, a: &Cplx, b: &Cplx) {
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    /// self += a * conj(b)
    #[inline]
    pub fn add_mul_conj(&mut self, a: &Cplx, b: &Cplx) {
        self.re += &a.re * &b.re;
        self.re += &a.im * &b.im;
        self.im -= &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    /// self += a * s for real s
    #[inline]
    pub fn add_mul_real(&mut self, a: &Cplx, s: &Real) {
        self.re += &a.re * s;
        self.im += &a.im * s;
    }

    pub fn add_assign(&mut self, other: &Cplx) {
        self.re += &other.re;
        self.im += &other.im;
    }

    pub fn sub_assign(&mut self, other: &Cplx) {
        self.re -= &other.re;
        self.im -= &other.im;
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cplx::one(self.prec());
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

impl<'a> Add<&'a Cplx> for &'a Cplx {
    type Output = Cplx;
    fn add(self, o: &Cplx) -> Cplx {
        let p = self.prec();
        Cplx {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
}

impl<'a> Sub<&'a Cplx> for &'a Cplx {
    type Output = Cplx;
    fn sub(self, o: &Cplx) -> Cplx {
        let p = self.prec();
        Cplx {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
}

impl<'a> Mul<&'a Cplx> for &'a Cplx {
    type Output = Cplx;
    fn mul(self, o: &Cplx) -> Cplx {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= &self.im * &o.im;
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += &self.im * &o.re;
        Cplx { re, im }
    }
}

impl Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx {
            re: -self.re,
            im: -self.im,
        }
    }
}



#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arithmetic_matches_f64() {
        let a = Cplx::from_f64(128, 1.5, -0.25);
        let b = Cplx::from_f64(128, -0.5, 2.0);
        let za = a.to_c64();
        let zb = b.to_c64();
        assert!(((&a * &b).to_c64() - za * zb).norm() < 1e-15);
        assert!((a.div(&b).to_c64() - za / zb).norm() < 1e-15);
        assert!((a.sqrt().to_c64() - za.sqrt()).norm() < 1e-15);
        let mut acc = Cplx::zero(128);
        acc.add_mul_conj(&a, &b);
        assert!((acc.to_c64() - za * zb.conj()).norm() < 1e-15);
        assert!((a.powu(5).to_c64() - za.powi(5)).norm() < 1e-12);
    }

    #[test]
    fn decimal_output_width_tracks_precision() {
        assert_eq!(output_digits(256), 77);
        let s = to_decimal(&pi(256));
        assert!(s.starts_with("3.14159265358979323846264338327950288419716939937510"));
    }

    #[test]
    fn ln_factorial_small_values() {
        let v = ln_factorial(5, 128).to_f64();
        assert!((v - 120f64.ln()).abs() < 1e-14);
        assert!(ln_factorial(0, 128).is_zero());
    }
}
