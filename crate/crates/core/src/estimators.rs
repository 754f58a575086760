//! Integrals against `x^alpha e^{-cx} J_nu(x)` with error estimates.
//!
//! The weight changes sign, so the integral is split as
//! `I^J(f) - I^L(f)` over the positive weights `x^alpha e^{-cx} [J_nu + 1]`
//! and `x^alpha e^{-cx}`. Each part is approximated by its Gauss rule; the
//! averaged and generalized averaged rules of both families give two a
//! posteriori estimates of the error, and the integrand's dominant pole pair
//! gives an a priori one.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::recurrence::RecurrenceTable;
use crate::rules::{averaged_rule, gauss_rule, gen_averaged_rule};
use crate::scalar::{complex_sqrt_neg, to_decimal_digits, Complexz, PrecisionContext, Real};
use crate::weights::WeightSpec;

/// A simple pole `z0` of the integrand (its conjugate is implied) and the
/// residue there.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSpec {
    pub z0: Complexz,
    pub residue: Complexz,
}

impl PoleSpec {
    pub fn new(z0: Complexz, residue: Complexz) -> Result<Self> {
        if !z0.is_finite() || !residue.is_finite() {
            return Err(Error::Config("pole and residue must be finite".into()));
        }
        if z0.im.is_zero() && !z0.re.is_sign_negative() {
            return Err(Error::branch("PoleSpec", "pole lies on [0, inf)"));
        }
        Ok(Self { z0, residue })
    }
}

/// Integrands with a known dominant pole.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// `1 / (1 + e^{-x})`, poles at `+-i pi` with residue 1.
    Logistic,
    /// `1 / (1 + x^2)`, poles at `+-i` with residue `-i/2` at `i`.
    Runge,
    /// `sum c_k x^k`.
    Polynomial(Vec<Real>),
}

impl Builtin {
    pub fn name(&self) -> String {
        match self {
            Builtin::Logistic => "logistic".into(),
            Builtin::Runge => "runge".into(),
            Builtin::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| to_decimal_digits(x, 20)).collect();
                format!("poly[{}]", parts.join(","))
            }
        }
    }

    /// Dominant pole in the upper half plane, at `bits` of precision.
    pub fn pole(&self, bits: u32) -> Option<PoleSpec> {
        let z = |re: Real, im: Real| Complexz::new(re, im);
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        match self {
            Builtin::Logistic => Some(PoleSpec {
                z0: z(Float::new(bits), pi),
                residue: Complexz::one(bits),
            }),
            Builtin::Runge => Some(PoleSpec {
                z0: z(Float::new(bits), Float::with_val(bits, 1)),
                residue: z(Float::new(bits), Float::with_val(bits, -0.5)),
            }),
            Builtin::Polynomial(_) => None,
        }
    }
}

impl Integrand for Builtin {
    fn eval(&self, x: &Real) -> std::result::Result<Real, String> {
        let bits = x.prec();
        let one = Float::with_val(bits, 1);
        let v = match self {
            Builtin::Logistic => {
                let e = Float::with_val(bits, -x).exp();
                one / (e + 1u32)
            }
            Builtin::Runge => one / (Float::with_val(bits, x.square_ref()) + 1u32),
            Builtin::Polynomial(c) => {
                let mut acc = Float::new(bits);
                for ck in c.iter().rev() {
                    acc *= x;
                    acc += ck;
                }
                acc
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value at x = {x}"))
        }
    }
}

/// Registry lookup: `logistic` or `runge`, with the dominant pole.
pub fn builtin_integrand(name: &str, bits: u32) -> Result<(Builtin, PoleSpec)> {
    let f = match name {
        "logistic" => Builtin::Logistic,
        "runge" => Builtin::Runge,
        other => return Err(Error::UnknownIntegrand(other.to_string())),
    };
    let pole = f.pole(bits).expect("registry entries carry a pole");
    Ok((f, pole))
}

/// `n-bar = 4n + alpha + 2`.
fn n_bar(alpha: &Real, n: usize) -> Real {
    Float::with_val(alpha.prec(), alpha + (4 * n as u64 + 2))
}

/// `[exp sqrt(-c z0)]^{-2 sqrt(n-bar)}` on the principal branch.
fn decay_factor(z0: &Complexz, alpha: &Real, c: &Real, n: usize) -> Result<Complexz> {
    let w = complex_sqrt_neg(&z0.scale(c))?;
    let bits = w.prec();
    let s = Float::with_val(bits, n_bar(alpha, n).sqrt_ref()) * -2i32;
    Ok(w.scale(&s).exp())
}

/// `c^{1-alpha}`.
fn c_factor(alpha: &Real, c: &Real) -> Real {
    let bits = alpha.prec().max(c.prec());
    let e = Float::with_val(bits, 1u32 - alpha);
    Float::with_val(bits, rug::ops::Pow::pow(c, &e))
}

/// A priori magnitude estimate `2 E` with
/// `E = 4 pi c^{1-alpha} |Res| |exp sqrt(-c z0)|^{-2 sqrt(4n+alpha+2)}`.
pub fn barrett_estimate(pole: &PoleSpec, alpha: &Real, c: &Real, n: usize) -> Result<Real> {
    if n == 0 {
        return Err(Error::Argument("a priori estimate needs n >= 1".into()));
    }
    let decay = decay_factor(&pole.z0, alpha, c, n)?;
    let bits = decay.prec();
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let mut e = pi * 8u32;
    e *= c_factor(alpha, c);
    e *= pole.residue.abs();
    e *= decay.abs();
    Ok(e)
}

/// Signed asymptotic error of the Gauss rule for `x^alpha e^{-cx}`:
/// `4 pi c^{1-alpha} Re{ Res e^{-i alpha pi} [exp sqrt(-c z0)]^{-2 sqrt(n-bar)} }`.
pub fn signed_laguerre_estimate(pole: &PoleSpec, alpha: &Real, c: &Real, n: usize) -> Result<Real> {
    if n == 0 {
        return Err(Error::Argument("a priori estimate needs n >= 1".into()));
    }
    let decay = decay_factor(&pole.z0, alpha, c, n)?;
    let bits = decay.prec();
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let angle = -Float::with_val(bits, alpha * &pi);
    let phase = Complexz::from_polar(&Float::with_val(bits, 1), &angle);
    let z = &(&pole.residue * &phase) * &decay;
    let mut e = pi * 4u32;
    e *= c_factor(alpha, c);
    e *= &z.re;
    Ok(e)
}

/// Gauss value and the two a posteriori estimates for one weight family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEstimate {
    /// `I_n(f)`
    pub gauss: Real,
    /// averaged rule minus Gauss rule
    pub e_averaged: Real,
    /// generalized averaged rule minus Gauss rule
    pub e_gen_averaged: Real,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    /// `I_n^J(f) - I_n^L(f)`
    pub value: Real,
    pub e_averaged: Real,
    pub e_gen_averaged: Real,
    /// `2 E`, present when a pole was supplied
    pub e_apriori: Option<Real>,
    pub j: FamilyEstimate,
    pub l: FamilyEstimate,
}

impl ErrorReport {
    pub fn to_json(&self, digits: u32) -> ErrorReportJson {
        let d = |x: &Real| to_decimal_digits(x, digits as usize);
        let fam = |f: &FamilyEstimate| FamilyEstimateJson {
            gauss: d(&f.gauss),
            e_averaged: d(&f.e_averaged),
            e_gen_averaged: d(&f.e_gen_averaged),
        };
        ErrorReportJson {
            n: self.n,
            value: d(&self.value),
            e_averaged: d(&self.e_averaged),
            e_gen_averaged: d(&self.e_gen_averaged),
            e_apriori: self.e_apriori.as_ref().map(d),
            j: fam(&self.j),
            l: fam(&self.l),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEstimateJson {
    pub gauss: String,
    pub e_averaged: String,
    pub e_gen_averaged: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReportJson {
    pub n: usize,
    pub value: String,
    pub e_averaged: String,
    pub e_gen_averaged: String,
    pub e_apriori: Option<String>,
    pub j: FamilyEstimateJson,
    pub l: FamilyEstimateJson,
}

/// Recurrence tables of both families for one `(nu, alpha, c)`, deep enough
/// for every `n <= max_n`.
#[derive(Debug, Clone)]
pub struct Estimator {
    table_j: RecurrenceTable,
    table_l: RecurrenceTable,
}

impl Estimator {
    pub fn new(nu: &Real, alpha: &Real, c: &Real, max_n: usize, ctx: &PrecisionContext) -> Result<Self> {
        let spec_j = WeightSpec::bessel_plus_one(nu.clone(), alpha.clone(), c.clone())?;
        let spec_l = spec_j.laguerre_part();
        let pairs = max_n + 2;
        let (j, l) = rayon::join(
            || RecurrenceTable::for_weight(&spec_j, pairs, ctx),
            || RecurrenceTable::for_weight(&spec_l, pairs, ctx),
        );
        Ok(Self {
            table_j: j?,
            table_l: l?,
        })
    }

    /// Largest `n` the cached tables support.
    pub fn max_n(&self) -> usize {
        self.table_j.len().min(self.table_l.len()) - 2
    }

    pub fn table_j(&self) -> &RecurrenceTable {
        &self.table_j
    }

    pub fn table_l(&self) -> &RecurrenceTable {
        &self.table_l
    }

    pub fn alpha(&self) -> &Real {
        &self.table_l.spec.alpha
    }

    pub fn c(&self) -> &Real {
        &self.table_l.spec.c
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_n() {
            return Err(Error::Argument(format!(
                "n = {n} outside 1..={} supported by the cached tables",
                self.max_n()
            )));
        }
        Ok(())
    }

    /// `I_n^J(f) - I_n^L(f)` from the two Gauss rules alone.
    pub fn gauss_value(&self, f: &(impl Integrand + ?Sized), n: usize) -> Result<Real> {
        self.check(n)?;
        let j = gauss_rule(&self.table_j, n)?.apply(f)?;
        let l = gauss_rule(&self.table_l, n)?.apply(f)?;
        Ok(j - l)
    }

    fn family(table: &RecurrenceTable, f: &(impl Integrand + ?Sized), n: usize) -> Result<FamilyEstimate> {
        let gauss = gauss_rule(table, n)?.apply(f)?;
        let avg = averaged_rule(table, n)?.apply(f)?;
        let gen = gen_averaged_rule(table, n)?.apply(f)?;
        Ok(FamilyEstimate {
            e_averaged: Float::with_val(gauss.prec(), &avg - &gauss),
            e_gen_averaged: Float::with_val(gauss.prec(), &gen - &gauss),
            gauss,
        })
    }

    pub fn report(
        &self,
        f: &(impl Integrand + ?Sized),
        n: usize,
        pole: Option<&PoleSpec>,
    ) -> Result<ErrorReport> {
        self.check(n)?;
        let (j, l) = rayon::join(
            || Self::family(&self.table_j, f, n),
            || Self::family(&self.table_l, f, n),
        );
        let (j, l) = (j?, l?);
        let sub = |a: &Real, b: &Real| Float::with_val(a.prec(), a - b);
        let e_apriori = pole
            .map(|p| barrett_estimate(p, self.alpha(), self.c(), n))
            .transpose()?;
        Ok(ErrorReport {
            n,
            value: sub(&j.gauss, &l.gauss),
            e_averaged: sub(&j.e_averaged, &l.e_averaged),
            e_gen_averaged: sub(&j.e_gen_averaged, &l.e_gen_averaged),
            e_apriori,
            j,
            l,
        })
    }
}

/// One-shot evaluation of `int_0^inf f(x) x^alpha e^{-cx} J_nu(x) dx` with
/// `n`-point rules and all estimates.
pub fn integrate_with_estimates(
    nu: &Real,
    alpha: &Real,
    c: &Real,
    f: &(impl Integrand + ?Sized),
    n: usize,
    pole: Option<&PoleSpec>,
    ctx: &PrecisionContext,
) -> Result<ErrorReport> {
    Estimator::new(nu, alpha, c, n, ctx)?.report(f, n, pole)
}

/// Pipeline value at a large `n`, used as the "true" integral.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceValue {
    pub value: Real,
    pub n_ref: usize,
    /// `|V(n_ref) - V(n_ref + step)|`
    pub discrepancy: Real,
}

/// How the reference `n` is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePolicy {
    /// First candidate is `n_max + offset`.
    pub offset: usize,
    /// Agreement is checked against `n_ref + step`.
    pub step: usize,
    /// Required digits of agreement below the smallest estimate magnitude.
    pub margin_digits: i32,
    /// Candidates grow by this factor until agreement or `limit`.
    pub growth: f64,
    pub limit: usize,
}

impl Default for ReferencePolicy {
    fn default() -> Self {
        Self {
            offset: 30,
            step: 10,
            margin_digits: 10,
            growth: 1.3,
            limit: 600,
        }
    }
}

impl ReferencePolicy {
    /// Candidate reference indices for a sweep ending at `n_max`.
    pub fn candidates(&self, n_max: usize) -> Vec<usize> {
        let mut out = vec![n_max + self.offset];
        loop {
            let last = *out.last().unwrap();
            let next = ((last as f64) * self.growth).ceil() as usize;
            if next + self.step > self.limit {
                break;
            }
            out.push(next);
        }
        out
    }

    /// Agreement needed: `margin_digits` below `scale`, but never below the
    /// working tolerance relative to `value`.
    pub fn threshold(&self, scale: &Real, value: &Real, ctx: &PrecisionContext) -> Real {
        let floor = {
            let mag = Float::with_val(ctx.bits(), value.abs_ref()).max(&ctx.one());
            ctx.pow10(-(ctx.decimal_digits as i32) + 10) * mag
        };
        let t = Float::with_val(ctx.bits(), scale * &ctx.pow10(-self.margin_digits));
        t.max(&floor)
    }
}

/// Smallest non-zero magnitude among the estimates of `reports`.
pub fn smallest_estimate(reports: &[ErrorReport]) -> Option<Real> {
    reports
        .iter()
        .flat_map(|r| {
            [Some(&r.e_averaged), Some(&r.e_gen_averaged), r.e_apriori.as_ref()]
                .into_iter()
                .flatten()
        })
        .filter(|x| !x.is_zero())
        .map(|x| Float::with_val(x.prec(), x.abs_ref()))
        .min_by(|a, b| a.partial_cmp(b).expect("finite estimates"))
}

/// Searches the policy's candidates for a reference index whose value
/// agrees with the one `step` further on to within `threshold(scale)`.
#[allow(clippy::too_many_arguments)]
pub fn reference_value(
    nu: &Real,
    alpha: &Real,
    c: &Real,
    f: &(impl Integrand + ?Sized),
    n_max: usize,
    scale: &Real,
    policy: &ReferencePolicy,
    ctx: &PrecisionContext,
) -> Result<ReferenceValue> {
    let mut last = None;
    for n_ref in policy.candidates(n_max) {
        let est = Estimator::new(nu, alpha, c, n_ref + policy.step, ctx)?;
        let (a, b) = rayon::join(
            || est.gauss_value(f, n_ref),
            || est.gauss_value(f, n_ref + policy.step),
        );
        let (a, b) = (a?, b?);
        let discrepancy = Float::with_val(ctx.bits(), &a - &b).abs();
        let ok = discrepancy <= policy.threshold(scale, &b, ctx);
        let rv = ReferenceValue {
            value: b,
            n_ref: n_ref + policy.step,
            discrepancy,
        };
        if ok {
            return Ok(rv);
        }
        last = Some(rv);
    }
    let msg = match last {
        Some(rv) => format!(
            "reference value did not settle: discrepancy {} at n_ref = {}",
            to_decimal_digits(&rv.discrepancy, 6),
            rv.n_ref
        ),
        None => "no reference candidates within the policy limit".into(),
    };
    Err(Error::Accuracy(msg))
}

/// One row of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub report: ErrorReport,
    /// reference value minus `report.value`
    pub err_true: Real,
}

/// Reports for every `n` in `ns`, computed in parallel, in the order of `ns`.
pub fn sweep_reports(
    nu: &Real,
    alpha: &Real,
    c: &Real,
    f: &(impl Integrand + ?Sized),
    pole: Option<&PoleSpec>,
    ns: &[usize],
    ctx: &PrecisionContext,
) -> Result<Vec<ErrorReport>> {
    let n_max = *ns
        .iter()
        .max()
        .ok_or_else(|| Error::Argument("empty n range".into()))?;
    let est = Estimator::new(nu, alpha, c, n_max, ctx)?;
    ns.par_iter().map(|&n| est.report(f, n, pole)).collect()
}

/// Pairs each report with its true error against `reference`.
pub fn attach_reference(reports: Vec<ErrorReport>, reference: &Real) -> Vec<ConvergenceRow> {
    reports
        .into_iter()
        .map(|report| ConvergenceRow {
            err_true: Float::with_val(reference.prec(), reference - &report.value),
            report,
        })
        .collect()
}

/// Reports for every `n` in `ns` plus the true error against a reference
/// chosen by `policy`.
#[allow(clippy::too_many_arguments)]
pub fn convergence_sweep(
    nu: &Real,
    alpha: &Real,
    c: &Real,
    f: &(impl Integrand + ?Sized),
    pole: Option<&PoleSpec>,
    ns: &[usize],
    policy: &ReferencePolicy,
    ctx: &PrecisionContext,
) -> Result<(Vec<ConvergenceRow>, ReferenceValue)> {
    let reports = sweep_reports(nu, alpha, c, f, pole, ns, ctx)?;
    let n_max = *ns.iter().max().expect("checked by sweep_reports");
    let scale = smallest_estimate(&reports).unwrap_or_else(|| ctx.zero());
    let reference = reference_value(nu, alpha, c, f, n_max, &scale, policy, ctx)?;
    Ok((attach_reference(reports, &reference.value), reference))
}
