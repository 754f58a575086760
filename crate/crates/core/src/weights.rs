//! Weight functions on `[0, inf)` and their raw moments.
//!
//! Two families are supported:
//!
//! * `BesselPlusOne`: `x^alpha e^{-cx} [J_nu(x) + 1]`
//! * `GenLaguerre`:   `x^alpha e^{-cx}`
//!
//! The moments of the Laguerre part are `Gamma(k+alpha+1) / c^(k+alpha+1)`.
//! The Bessel part `F(s) = int_0^inf x^(s-1) e^{-cx} J_nu(x) dx` has the
//! closed form
//!
//! ```text
//! F(s) = Gamma(s+nu) / (2^nu Gamma(nu+1) (1+c^2)^((s+nu)/2))
//!        * 2F1((s+nu)/2, (nu+1-s)/2; nu+1; 1/(1+c^2))
//! ```
//!
//! whose hypergeometric argument lies in `(0, 1)` for every `c > 0`. Along
//! `s` it also satisfies the exact three-term relation
//!
//! ```text
//! (1+c^2) F(s+2) = c (2s+1) F(s+1) - (s^2 - nu^2) F(s)
//! ```
//!
//! obtained by integrating Bessel's equation against `x^(s-1) e^{-cx}` by
//! parts. Both characteristic roots have modulus `s / sqrt(1+c^2)`, so the
//! forward recursion neither grows nor damps relative errors.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{gamma, hyp2f1, parse_real, to_decimal, PrecisionContext, Real};

/// Which weight a [`WeightSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `x^alpha e^{-cx} [J_nu(x) + 1]`
    BesselPlusOne,
    /// `x^alpha e^{-cx}`
    GenLaguerre,
}

impl Family {
    /// One-letter tag used on the command line (`J` or `L`).
    pub fn tag(&self) -> &'static str {
        match self {
            Family::BesselPlusOne => "J",
            Family::GenLaguerre => "L",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" | "j" | "bessel" | "BesselPlusOne" => Ok(Family::BesselPlusOne),
            "L" | "l" | "laguerre" | "GenLaguerre" => Ok(Family::GenLaguerre),
            other => Err(Error::Config(format!("unknown weight family {other:?}"))),
        }
    }
}

/// A weight function with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub family: Family,
    /// Bessel order; kept but unused for `GenLaguerre`.
    pub nu: Real,
    pub alpha: Real,
    pub c: Real,
}

impl WeightSpec {
    pub fn new(family: Family, nu: Real, alpha: Real, c: Real) -> Result<Self> {
        if !(nu.is_finite() && alpha.is_finite() && c.is_finite()) {
            return Err(Error::Config("weight parameters must be finite".into()));
        }
        if alpha <= -1 {
            return Err(Error::domain(
                "WeightSpec",
                format!("alpha must exceed -1, got {}", alpha.to_f64()),
            ));
        }
        if c <= 0 {
            return Err(Error::domain(
                "WeightSpec",
                format!("c must be positive, got {}", c.to_f64()),
            ));
        }
        if nu < 0 {
            return Err(Error::domain(
                "WeightSpec",
                format!("nu must be non-negative, got {}", nu.to_f64()),
            ));
        }
        Ok(Self {
            family,
            nu,
            alpha,
            c,
        })
    }

    pub fn bessel_plus_one(nu: Real, alpha: Real, c: Real) -> Result<Self> {
        Self::new(Family::BesselPlusOne, nu, alpha, c)
    }

    pub fn gen_laguerre(alpha: Real, c: Real) -> Result<Self> {
        let nu = Float::new(alpha.prec());
        Self::new(Family::GenLaguerre, nu, alpha, c)
    }

    /// Builds a spec from decimal strings, parsed at working precision.
    pub fn parse(family: Family, nu: &str, alpha: &str, c: &str, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(family, ctx.parse(nu)?, ctx.parse(alpha)?, ctx.parse(c)?)
    }

    /// The `x^alpha e^{-cx}` weight sharing this spec's `alpha` and `c`.
    pub fn laguerre_part(&self) -> Self {
        Self {
            family: Family::GenLaguerre,
            nu: Float::new(self.alpha.prec()),
            alpha: self.alpha.clone(),
            c: self.c.clone(),
        }
    }

    /// Copy with every parameter carried at `bits` of precision. The values
    /// themselves are unchanged when `bits` exceeds the current precision.
    pub fn with_bits(&self, bits: u32) -> Self {
        Self {
            family: self.family,
            nu: Float::with_val(bits, &self.nu),
            alpha: Float::with_val(bits, &self.alpha),
            c: Float::with_val(bits, &self.c),
        }
    }

    pub fn to_json(&self) -> WeightSpecJson {
        WeightSpecJson {
            family: self.family,
            nu: to_decimal(&self.nu),
            alpha: to_decimal(&self.alpha),
            c: to_decimal(&self.c),
        }
    }

    pub fn from_json(json: &WeightSpecJson, bits: u32) -> Result<Self> {
        Self::new(
            json.family,
            parse_real(&json.nu, bits)?,
            parse_real(&json.alpha, bits)?,
            parse_real(&json.c, bits)?,
        )
    }
}

/// Serialized form of [`WeightSpec`] with decimal-string parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpecJson {
    pub family: Family,
    pub nu: String,
    pub alpha: String,
    pub c: String,
}

/// Raw moments `m[k] = int_0^inf x^k w(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub spec: WeightSpec,
    pub m: Vec<Real>,
}

impl MomentVector {
    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Precision the moments were computed at.
    pub fn bits(&self) -> u32 {
        self.m.first().map(|x| x.prec()).unwrap_or(0)
    }
}

/// `Gamma(k+alpha+1) / c^(k+alpha+1)` at the precision of `alpha`.
pub fn laguerre_moment(k: usize, alpha: &Real, c: &Real) -> Result<Real> {
    if *alpha <= -1 {
        return Err(Error::domain(
            "laguerre_moment",
            "alpha <= -1 makes the integral diverge",
        ));
    }
    if *c <= 0 {
        return Err(Error::domain("laguerre_moment", "c must be positive"));
    }
    let bits = alpha.prec().max(c.prec());
    let s = Float::with_val(bits, alpha + (k as u64 + 1));
    let g = gamma(&s)?;
    let p = Float::with_val(bits, c.pow(&s));
    Ok(g / p)
}

/// `int_0^inf x^(k+alpha) e^{-cx} J_nu(x) dx` from the hypergeometric
/// closed form.
pub fn bessel_moment(k: usize, nu: &Real, alpha: &Real, c: &Real) -> Result<Real> {
    let bits = nu.prec().max(alpha.prec()).max(c.prec());
    let s = Float::with_val(bits, alpha + (k as u64 + 1));
    bessel_laplace_mellin(&s, nu, c)
}

/// `F(s) = int_0^inf x^(s-1) e^{-cx} J_nu(x) dx`, requiring `s + nu > 0`.
fn bessel_laplace_mellin(s: &Real, nu: &Real, c: &Real) -> Result<Real> {
    let bits = s.prec().max(nu.prec()).max(c.prec());
    if *c <= 0 {
        return Err(Error::domain("bessel_moment", "c must be positive"));
    }
    if *nu < 0 {
        return Err(Error::domain("bessel_moment", "nu must be non-negative"));
    }
    let s_nu = Float::with_val(bits, s + nu);
    if s_nu <= 0 {
        return Err(Error::domain(
            "bessel_moment",
            "k + alpha + nu must exceed -1 for convergence at the origin",
        ));
    }
    let one_c2 = Float::with_val(bits, c.square_ref()) + 1u32;
    let z = Float::with_val(bits, one_c2.recip_ref());
    let a = Float::with_val(bits, &s_nu / 2u32);
    let b = (Float::with_val(bits, nu - s) + 1u32) / 2u32;
    let cc = Float::with_val(bits, nu + 1u32);
    let f = hyp2f1(&a, &b, &cc, &z)?;

    let two_nu = Float::with_val(bits, 2).pow(nu);
    let den = two_nu * gamma(&cc)? * Float::with_val(bits, (&one_c2).pow(&a));
    Ok(gamma(&s_nu)? * f / den)
}

/// Moments `m[0..count]` of `spec` at the precision of `ctx`.
///
/// For `BesselPlusOne` these are the Laguerre moments plus the Bessel
/// moments; the latter are seeded from the closed form at `k = 0, 1` and
/// continued by the three-term relation in the module docs.
pub fn weight_moments(spec: &WeightSpec, count: usize, ctx: &PrecisionContext) -> Result<MomentVector> {
    if count == 0 {
        return Err(Error::Argument("at least one moment is required".into()));
    }
    let bits = ctx.bits();
    let spec = spec.with_bits(bits);
    let mut m = Vec::with_capacity(count);

    // Laguerre part: m[k+1] = m[k] (k + alpha + 1) / c
    let mut lag = laguerre_moment(0, &spec.alpha, &spec.c)?;
    for k in 0..count {
        m.push(lag.clone());
        let factor = Float::with_val(bits, &spec.alpha + (k as u64 + 1)) / &spec.c;
        lag *= factor;
    }

    if spec.family == Family::BesselPlusOne {
        for (k, f) in bessel_moments(&spec, count)?.into_iter().enumerate() {
            m[k] += f;
        }
    }
    Ok(MomentVector { spec, m })
}

fn bessel_moments(spec: &WeightSpec, count: usize) -> Result<Vec<Real>> {
    let out_bits = spec.alpha.prec();
    // a few extra bits absorb the slow linear error growth of the recursion
    let bits = out_bits + 64;
    let nu = Float::with_val(bits, &spec.nu);
    let c = Float::with_val(bits, &spec.c);
    let alpha = Float::with_val(bits, &spec.alpha);

    let mut out = Vec::with_capacity(count);
    let mut prev = bessel_moment(0, &nu, &alpha, &c)?;
    out.push(Float::with_val(out_bits, &prev));
    if count == 1 {
        return Ok(out);
    }
    let mut cur = bessel_moment(1, &nu, &alpha, &c)?;
    out.push(Float::with_val(out_bits, &cur));

    let one_c2 = Float::with_val(bits, c.square_ref()) + 1u32;
    let nu2 = Float::with_val(bits, nu.square_ref());
    for k in 0..count.saturating_sub(2) {
        // s = k + alpha + 1 indexes F(s) = prev, F(s+1) = cur
        let s = Float::with_val(bits, &alpha + (k as u64 + 1));
        let lin = Float::with_val(bits, &s * 2u32) + 1u32;
        let lin = lin * &c * &cur;
        let quad = (Float::with_val(bits, s.square_ref()) - &nu2) * &prev;
        let next = (lin - quad) / &one_c2;
        out.push(Float::with_val(out_bits, &next));
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}
