//! Whether anti-Gauss and companion nodes stay inside `[0, inf)`.
//!
//! The anti-Gauss rule `A_{n+1}` is internal iff
//! `pi_{n+1}(0) / pi_{n-1}(0) >= beta_n`; the companion rule of the
//! generalized averaged rule iff the same ratio is `>= beta_{n+1}`.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::{anti_gauss_rule, companion_rule};
use crate::error::{Error, Result};
use crate::recurrence::{eval_monic_real, RecurrenceTable};
use crate::scalar::{to_decimal, to_decimal_digits, PrecisionContext, Real};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InternalityMode {
    AntiGauss,
    GenAveraged,
}

impl std::str::FromStr for InternalityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anti" | "antigauss" | "anti_gauss" => Ok(InternalityMode::AntiGauss),
            "genavg" | "gen_averaged" => Ok(InternalityMode::GenAveraged),
            other => Err(Error::Config(format!("unknown internality mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InternalityReport {
    pub mode: InternalityMode,
    pub n: usize,
    /// `pi_{n+1}(0) / pi_{n-1}(0)`
    pub ratio: Real,
    /// `beta_n` or `beta_{n+1}`
    pub threshold: Real,
    pub internal: bool,
    pub smallest_node: Real,
}

impl InternalityReport {
    pub fn margin(&self) -> Real {
        Float::with_val(self.ratio.prec(), &self.ratio - &self.threshold)
    }

    /// The ratio test agrees with the sign of the smallest node.
    pub fn is_consistent(&self) -> bool {
        self.internal == !self.smallest_node.is_sign_negative()
    }
}

fn ratio_and_threshold(
    table: &RecurrenceTable,
    n: usize,
    mode: InternalityMode,
) -> Result<(Real, Real)> {
    if n == 0 {
        return Err(Error::Argument("internality check needs n >= 1".into()));
    }
    table.require(n + 2, "internality check")?;
    let zero = Float::new(table.bits());
    let lo = eval_monic_real(table, n - 1, &zero)?;
    if lo.is_zero() {
        return Err(Error::DegenerateRatio { degree: n - 1 });
    }
    let hi = eval_monic_real(table, n + 1, &zero)?;
    let ratio = Float::with_val(table.bits(), &hi / &lo);
    let threshold = match mode {
        InternalityMode::AntiGauss => table.beta(n).clone(),
        InternalityMode::GenAveraged => table.beta(n + 1).clone(),
    };
    Ok((ratio, threshold))
}

/// Ratio test plus the smallest node of the rule it predicts.
pub fn internality_check(
    table: &RecurrenceTable,
    n: usize,
    mode: InternalityMode,
) -> Result<InternalityReport> {
    let (ratio, threshold) = ratio_and_threshold(table, n, mode)?;
    let rule = match mode {
        InternalityMode::AntiGauss => anti_gauss_rule(table, n)?,
        InternalityMode::GenAveraged => companion_rule(table, n)?,
    };
    Ok(InternalityReport {
        mode,
        n,
        internal: ratio >= threshold,
        ratio,
        threshold,
        smallest_node: rule.nodes[0].clone(),
    })
}

/// [`internality_check`] on a freshly built table for `spec`.
pub fn internality_at(
    spec: &WeightSpec,
    n: usize,
    mode: InternalityMode,
    ctx: &PrecisionContext,
) -> Result<InternalityReport> {
    let table = RecurrenceTable::for_weight(spec, n + 2, ctx)?;
    internality_check(&table, n, mode)
}

/// `ratio - threshold` without building the rule; non-negative iff internal.
pub fn internality_margin(
    spec: &WeightSpec,
    n: usize,
    mode: InternalityMode,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let table = RecurrenceTable::for_weight(spec, n + 2, ctx)?;
    let (ratio, threshold) = ratio_and_threshold(&table, n, mode)?;
    Ok(ratio - threshold)
}

fn with_alpha(base: &WeightSpec, alpha: &Real) -> Result<WeightSpec> {
    WeightSpec::new(base.family, base.nu.clone(), alpha.clone(), base.c.clone())
}

/// Bisects on `alpha` for the point where the internality flag flips,
/// down to a bracket no wider than `width`. Returns `None` when both ends
/// carry the same flag.
pub fn bisect_internality_flip(
    base: &WeightSpec,
    n: usize,
    mode: InternalityMode,
    lo: &Real,
    hi: &Real,
    width: &Real,
    ctx: &PrecisionContext,
) -> Result<Option<(Real, Real)>> {
    let inside = |a: &Real| -> Result<bool> {
        Ok(!internality_margin(&with_alpha(base, a)?, n, mode, ctx)?.is_sign_negative())
    };
    let mut lo = ctx.round(lo);
    let mut hi = ctx.round(hi);
    let flag_lo = inside(&lo)?;
    if flag_lo == inside(&hi)? {
        return Ok(None);
    }
    while Float::with_val(ctx.bits(), &hi - &lo) > *width {
        let mid = Float::with_val(ctx.bits(), &lo + &hi) / 2u32;
        if inside(&mid)? == flag_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo, hi)))
}

/// Reports over a grid of `alpha` values and the refined flip bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct InternalitySweep {
    pub spec: WeightSpec,
    pub mode: InternalityMode,
    pub n: usize,
    pub points: Vec<(Real, InternalityReport)>,
    pub flip: Option<(Real, Real)>,
}

impl InternalitySweep {
    pub fn to_json(&self, digits: u32) -> InternalitySweepJson {
        let d = |x: &Real| to_decimal_digits(x, digits as usize);
        InternalitySweepJson {
            family: self.spec.family.tag().to_string(),
            nu: to_decimal(&self.spec.nu),
            c: to_decimal(&self.spec.c),
            mode: self.mode,
            n: self.n,
            reports: self
                .points
                .iter()
                .map(|(a, r)| InternalityReportJson {
                    alpha: d(a),
                    ratio: d(&r.ratio),
                    threshold: d(&r.threshold),
                    internal: r.internal,
                    smallest_node: d(&r.smallest_node),
                })
                .collect(),
            flip: self.flip.as_ref().map(|(a, b)| [d(a), d(b)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalityReportJson {
    pub alpha: String,
    pub ratio: String,
    pub threshold: String,
    pub internal: bool,
    pub smallest_node: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalitySweepJson {
    pub family: String,
    pub nu: String,
    pub c: String,
    pub mode: InternalityMode,
    pub n: usize,
    pub reports: Vec<InternalityReportJson>,
    pub flip: Option<[String; 2]>,
}

/// Evaluates the report at each `alpha` in `alphas` (ascending) and refines
/// the first sign change of the flag by bisection to `width`.
pub fn internality_sweep(
    base: &WeightSpec,
    n: usize,
    mode: InternalityMode,
    alphas: &[Real],
    width: &Real,
    ctx: &PrecisionContext,
) -> Result<InternalitySweep> {
    let points = alphas
        .par_iter()
        .map(|a| Ok((ctx.round(a), internality_at(&with_alpha(base, a)?, n, mode, ctx)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut flip = None;
    for w in points.windows(2) {
        if w[0].1.internal != w[1].1.internal {
            flip = bisect_internality_flip(base, n, mode, &w[0].0, &w[1].0, width, ctx)?;
            break;
        }
    }
    Ok(InternalitySweep {
        spec: base.clone(),
        mode,
        n,
        points,
        flip,
    })
}
