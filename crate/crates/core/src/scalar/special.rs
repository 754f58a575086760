use rug::ops::Pow;
use rug::{Assign, Float};

use super::Real;
use crate::error::{Error, Result};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Gamma function for positive arguments, at the precision of `x`.
pub fn gamma(x: &Real) -> Result<Real> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::domain(
            "gamma",
            format!("argument must be positive, got {}", x.to_f64()),
        ));
    }
    Ok(Float::with_val(x.prec(), x.gamma_ref()))
}

/// Bessel function of the first kind `J_nu(x)` for `nu >= 0`.
///
/// Evaluated from the ascending series. The terms peak near `e^|x|`, so the
/// series runs with `|x| log2(e)` extra bits and the result is rounded back
/// to the precision of the arguments.
pub fn bessel_j(nu: &Real, x: &Real) -> Result<Real> {
    let bits = nu.prec().max(x.prec());
    if !nu.is_finite() || nu.is_sign_negative() && !nu.is_zero() {
        return Err(Error::domain("bessel_j", "order must be non-negative"));
    }
    if !x.is_finite() {
        return Err(Error::domain("bessel_j", "argument must be finite"));
    }
    let negate = if x.is_sign_negative() && !x.is_zero() {
        if !nu.is_integer() {
            return Err(Error::domain(
                "bessel_j",
                "negative argument requires an integer order",
            ));
        }
        // odd integer orders flip sign
        !Float::with_val(nu.prec() + 1, nu / 2u32).is_integer()
    } else {
        false
    };
    if x.is_zero() {
        let v = if nu.is_zero() { 1 } else { 0 };
        return Ok(Float::with_val(bits, v));
    }

    let ax_f = x.to_f64().abs();
    let extra = (ax_f * LOG2_E).ceil() as u32 + 32;
    let wp = bits + extra;
    let half = Float::with_val(wp, x.abs_ref()) / 2u32;
    let nu_w = Float::with_val(wp, nu);

    let mut term = if nu.is_zero() {
        Float::with_val(wp, 1)
    } else {
        let num = Float::with_val(wp, (&half).pow(&nu_w));
        let den = Float::with_val(wp, &nu_w + 1u32).gamma();
        num / den
    };
    let y = -Float::with_val(wp, half.square_ref());
    let mut sum = term.clone();
    let mut max_term = Float::with_val(wp, term.abs_ref());
    let peak = ax_f / 2.0;
    let mut m: u64 = 0;
    loop {
        m += 1;
        let den = Float::with_val(wp, &nu_w + m) * m;
        term *= &y;
        term /= &den;
        sum += &term;
        let at = Float::with_val(wp, term.abs_ref());
        if at > max_term {
            max_term = at.clone();
        }
        if (m as f64) > peak && (at << wp as i32) <= max_term {
            break;
        }
        if m > 10_000_000 {
            return Err(Error::Accuracy("bessel_j series did not converge".into()));
        }
    }
    let out = Float::with_val(bits, &sum);
    Ok(if negate { -out } else { out })
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real `|z| < 1`.
///
/// Plain power series. A double-precision pass locates the largest term so
/// that cancellation among terms of mixed sign is paid for with extra bits;
/// if the sum still comes out much smaller than that term, the evaluation is
/// repeated with the observed loss added on. A sum that keeps landing at the
/// rounding level of the largest term is an exact zero and returned as such.
pub fn hyp2f1(a: &Real, b: &Real, c: &Real, z: &Real) -> Result<Real> {
    let bits = a.prec().max(b.prec()).max(c.prec()).max(z.prec());
    if z.to_f64().abs() >= 1.0 {
        return Err(Error::domain("hyp2f1", "series requires |z| < 1"));
    }
    if *c <= 0 && c.is_integer() {
        return Err(Error::domain("hyp2f1", "c must not be a non-positive integer"));
    }
    let terms = expected_terms(a.to_f64(), b.to_f64(), c.to_f64(), z.to_f64(), bits);
    if terms > MAX_TERMS {
        return Err(Error::Accuracy(format!(
            "hyp2f1 series at z = {:.9} needs about {terms:.1e} terms",
            z.to_f64()
        )));
    }
    let log2_max = log2_max_term(a.to_f64(), b.to_f64(), c.to_f64(), z.to_f64());
    let mut extra = log2_max.max(0.0).ceil() as u32 + 32;
    let mut at_rounding = 0;
    for _ in 0..6 {
        let wp = bits + extra;
        let (sum, max_term) = hyp2f1_series(a, b, c, z, wp)?;
        if sum.is_zero() {
            return Ok(Float::with_val(bits, 0));
        }
        let lost = log2_ratio(&max_term, &sum);
        if lost + 16.0 <= extra as f64 {
            return Ok(Float::with_val(bits, &sum));
        }
        if lost + 32.0 >= wp as f64 {
            at_rounding += 1;
            if at_rounding == 2 {
                return Ok(Float::with_val(bits, 0));
            }
        }
        extra = lost.ceil() as u32 + 64;
    }
    Err(Error::Accuracy(
        "hyp2f1 cancellation could not be resolved".into(),
    ))
}

/// Upper limit on series terms before giving up.
const MAX_TERMS: f64 = 5.0e6;

/// Terms until `|z|^j` has dropped `bits` bits past the peak of the series.
fn expected_terms(a: f64, b: f64, c: f64, z: f64, bits: u32) -> f64 {
    let settle = a.abs() + b.abs() + c.abs();
    let decay = -z.abs().ln();
    if decay <= 0.0 {
        return f64::INFINITY;
    }
    settle + (f64::from(bits) + 64.0) * std::f64::consts::LN_2 / decay
}

fn log2_ratio(num: &Real, den: &Real) -> f64 {
    let n = Float::with_val(64, num.abs_ref()).log2().to_f64();
    let d = Float::with_val(64, den.abs_ref()).log2().to_f64();
    n - d
}

/// log2 of the largest series term, estimated in double precision.
fn log2_max_term(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut log_t = 0.0f64;
    let mut best = 0.0f64;
    let lz = z.abs().ln();
    for j in 0..10_000_000u64 {
        let jf = j as f64;
        let num = (a + jf) * (b + jf);
        if num == 0.0 {
            break;
        }
        log_t += num.abs().ln() - ((c + jf) * (jf + 1.0)).abs().ln() + lz;
        best = best.max(log_t);
        // past the peak and well below it
        if jf > a.abs() + b.abs() + c.abs() && log_t < best - 800.0 {
            break;
        }
    }
    best * LOG2_E
}

fn hyp2f1_series(a: &Real, b: &Real, c: &Real, z: &Real, wp: u32) -> Result<(Real, Real)> {
    let a = Float::with_val(wp, a);
    let b = Float::with_val(wp, b);
    let c = Float::with_val(wp, c);
    let z = Float::with_val(wp, z);
    let mut term = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, 1);
    let mut max_term = Float::with_val(wp, 1);
    let mut num = Float::new(wp);
    let mut den = Float::new(wp);
    let settle_at = a.to_f64().abs() + b.to_f64().abs() + c.to_f64().abs();
    let mut j: u64 = 0;
    loop {
        num.assign(&a + j);
        let bj = Float::with_val(wp, &b + j);
        if num.is_zero() || bj.is_zero() {
            break;
        }
        num *= &bj;
        den.assign(&c + j);
        den *= j + 1;
        term *= &num;
        term /= &den;
        term *= &z;
        sum += &term;
        let at = Float::with_val(wp, term.abs_ref());
        if at > max_term {
            max_term.clone_from(&at);
        }
        j += 1;
        // terms decrease monotonically once j exceeds |a| + |b| + |c|
        if (j as f64) > settle_at && (at << wp as i32) <= Float::with_val(wp, sum.abs_ref()) {
            break;
        }
        if j as f64 > 2.0 * MAX_TERMS {
            return Err(Error::Accuracy("hyp2f1 series did not converge".into()));
        }
    }
    Ok((sum, max_term))
}
