use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

use super::Real;
use crate::error::{Error, Result};

/// Complex number with MPFR parts of equal precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Complexz {
    pub re: Real,
    pub im: Real,
}

impl Complexz {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Self::new(Float::new(bits), Float::new(bits))
    }

    pub fn one(bits: u32) -> Self {
        Self::new(Float::with_val(bits, 1), Float::new(bits))
    }

    /// `r * e^{i phi}`.
    pub fn from_polar(r: &Real, phi: &Real) -> Self {
        let bits = r.prec().max(phi.prec());
        let (s, c) = Float::with_val(bits, phi).sin_cos(Float::new(bits));
        Self::new(c * r, s * r)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Real {
        let bits = self.prec();
        Float::with_val(bits, self.re.square_ref()) + Float::with_val(bits, self.im.square_ref())
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Real {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(&self, s: &Real) -> Self {
        let bits = self.prec();
        Self::new(
            Float::with_val(bits, &self.re * s),
            Float::with_val(bits, &self.im * s),
        )
    }

    pub fn add_real(&self, s: &Real) -> Self {
        Self::new(Float::with_val(self.prec(), &self.re + s), self.im.clone())
    }

    pub fn recip(&self) -> Self {
        let bits = self.prec();
        let d = self.norm_sqr();
        Self::new(
            Float::with_val(bits, &self.re / &d),
            Float::with_val(bits, -Float::with_val(bits, &self.im / &d)),
        )
    }

    pub fn div(&self, rhs: &Complexz) -> Self {
        self * &rhs.recip()
    }

    pub fn exp(&self) -> Self {
        let bits = self.prec();
        let m = Float::with_val(bits, self.re.exp_ref());
        Self::from_polar(&m, &self.im)
    }

    /// Principal square root, `Re >= 0`, cut along the negative real axis.
    pub fn sqrt(&self) -> Self {
        let bits = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return Self::zero(bits);
        }
        let r = self.abs();
        let two = Float::with_val(bits, 2);
        if !self.re.is_sign_negative() {
            let t = Float::with_val(bits, &r + &self.re) / &two;
            let t = t.sqrt();
            let im = Float::with_val(bits, &self.im / &t) / &two;
            Self::new(t, im)
        } else {
            let t = Float::with_val(bits, &r - &self.re) / &two;
            let t = t.sqrt();
            let re = Float::with_val(bits, self.im.abs_ref()) / &t / &two;
            let im = if self.im.is_sign_negative() { -t } else { t };
            Self::new(re, im)
        }
    }
}

impl Add for &Complexz {
    type Output = Complexz;
    fn add(self, rhs: &Complexz) -> Complexz {
        let bits = self.prec();
        Complexz::new(
            Float::with_val(bits, &self.re + &rhs.re),
            Float::with_val(bits, &self.im + &rhs.im),
        )
    }
}

impl Sub for &Complexz {
    type Output = Complexz;
    fn sub(self, rhs: &Complexz) -> Complexz {
        let bits = self.prec();
        Complexz::new(
            Float::with_val(bits, &self.re - &rhs.re),
            Float::with_val(bits, &self.im - &rhs.im),
        )
    }
}

impl Mul for &Complexz {
    type Output = Complexz;
    fn mul(self, rhs: &Complexz) -> Complexz {
        let bits = self.prec();
        let rr = Float::with_val(bits, &self.re * &rhs.re);
        let ii = Float::with_val(bits, &self.im * &rhs.im);
        let ri = Float::with_val(bits, &self.re * &rhs.im);
        let ir = Float::with_val(bits, &self.im * &rhs.re);
        Complexz::new(rr - ii, ri + ir)
    }
}

impl Neg for &Complexz {
    type Output = Complexz;
    fn neg(self) -> Complexz {
        let bits = self.prec();
        Complexz::new(
            Float::with_val(bits, -&self.re),
            Float::with_val(bits, -&self.im),
        )
    }
}

fn on_nonnegative_axis(z: &Complexz) -> bool {
    z.im.is_zero() && !z.re.is_sign_negative()
}

/// `sqrt(-z)` on the principal branch, so that `Re > 0` for every `z`
/// off `[0, inf)`.
pub fn complex_sqrt_neg(z: &Complexz) -> Result<Complexz> {
    if on_nonnegative_axis(z) {
        return Err(Error::branch(
            "complex_sqrt_neg",
            "argument lies on the non-negative real axis",
        ));
    }
    Ok((-z).sqrt())
}

/// `z^alpha` with `arg z` taken in `(0, 2 pi)`, so the cut is the positive
/// real axis.
pub fn complex_pow_alpha(z: &Complexz, alpha: &Real) -> Result<Complexz> {
    if on_nonnegative_axis(z) {
        return Err(Error::branch(
            "complex_pow_alpha",
            "argument is zero or on the positive real axis",
        ));
    }
    let bits = z.prec().max(alpha.prec());
    let mut theta = z.arg();
    if theta.is_sign_negative() {
        theta += Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    }
    let log_mod = z.abs().ln();
    let modulus = Float::with_val(bits, &log_mod * alpha).exp();
    let phase = Float::with_val(bits, &theta * alpha);
    Ok(Complexz::from_polar(&modulus, &phase))
}
