//! Ratio and weight-decay diagnostics.
//!
//! For a weight `w` with monic orthogonal polynomials `pi_n`, the function
//! `Psi_n(z) = q_n(z) / pi_n(z)` with `q_n(z) = int w(x) pi_n(x) / (z - x) dx`
//! is the kernel of the contour-integral representation of the Gauss error.
//! For `x^alpha e^{-x}` it behaves for large `n` like
//!
//! ```text
//! Phi_n(z) = -2 pi e^{-i alpha pi} z^alpha e^{-z} [exp sqrt(-z)]^{-2 sqrt(4n+alpha+2)}
//! ```
//!
//! and for `x^alpha e^{-cx}` like `c^{-alpha} Phi_n(cz)`.

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::recurrence::{eval_monic, RecurrenceTable};
use crate::rules::{gauss_rule, QuadratureRule};
use crate::scalar::{
    complex_pow_alpha, complex_sqrt_neg, log10_abs, to_decimal_digits, Complexz, PrecisionContext, Real,
};
use crate::weights::WeightSpec;

/// Default endpoint margin of the `theta` grid, in units of `pi`.
pub const THETA_MARGIN: f64 = 0.01;

/// `Phi_n(z)`.
pub fn phi_asymptotic(n: usize, alpha: &Real, z: &Complexz) -> Result<Complexz> {
    let bits = z.prec().max(alpha.prec());
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let n_bar = Float::with_val(bits, alpha + (4 * n as u64 + 2));
    let angle = -Float::with_val(bits, alpha * &pi);
    let phase = Complexz::from_polar(&Float::with_val(bits, 1), &angle);
    let za = complex_pow_alpha(z, alpha)?;
    let w = complex_sqrt_neg(z)?;
    let s = Float::with_val(bits, n_bar.sqrt_ref()) * 2u32;
    // e^{-z} [exp sqrt(-z)]^{-2 sqrt(n-bar)} in one exponential
    let expo = -&(z + &w.scale(&s));
    let out = &(&phase * &za) * &expo.exp();
    Ok(out.scale(&(pi * -2i32)))
}

/// `c^{-alpha} Phi_n(cz)`, the asymptotic kernel of `x^alpha e^{-cx}`.
pub fn phi_asymptotic_scaled(n: usize, alpha: &Real, c: &Real, z: &Complexz) -> Result<Complexz> {
    let bits = z.prec().max(alpha.prec());
    let phi = phi_asymptotic(n, alpha, &z.scale(c))?;
    let neg = -Float::with_val(bits, alpha);
    let f = Float::with_val(bits, rug::ops::Pow::pow(c, &neg));
    Ok(phi.scale(&f))
}

/// `q_n(z) / pi_n(z)` with `q_n` evaluated by the `n_quad`-point Gauss rule
/// of the same weight.
pub fn psi_ratio(table: &RecurrenceTable, n: usize, z: &Complexz, n_quad: usize) -> Result<Complexz> {
    let rule = gauss_rule(table, n_quad)?;
    psi_ratio_with_rule(table, &rule, n, z)
}

fn psi_ratio_with_rule(
    table: &RecurrenceTable,
    rule: &QuadratureRule,
    n: usize,
    z: &Complexz,
) -> Result<Complexz> {
    if rule.len() < 4 * n {
        return Err(Error::Argument(format!(
            "psi_ratio needs at least 4n = {} quadrature points, got {}",
            4 * n,
            rule.len()
        )));
    }
    if z.im.is_zero() && !z.re.is_sign_negative() {
        return Err(Error::branch("psi_ratio", "z lies on [0, inf)"));
    }
    let bits = table.bits();
    let near = Float::with_val(bits, z.abs() * &Float::with_val(bits, 1e-8));
    let mut q = Complexz::zero(bits);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let d = z.add_real(&Float::with_val(bits, -x));
        if d.abs() < near {
            return Err(Error::Accuracy(format!(
                "z is within 1e-8 |z| of the quadrature node {}",
                to_decimal_digits(x, 12)
            )));
        }
        let p = eval_monic(table, n, &Complexz::from_real(x.clone()))?;
        q = &q + &p.scale(w).div(&d);
    }
    let pz = eval_monic(table, n, z)?;
    Ok(q.div(&pz))
}

/// One point of a ratio sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSample {
    /// argument of `z` in units of `pi`
    pub theta: Real,
    pub z: Complexz,
    pub psi_over_phi_j: Complexz,
    pub psi_over_phi_l: Complexz,
}

/// Uniform grid on `[margin, 2 - margin]` with `steps` points; symmetric
/// about 1.
pub fn theta_grid(steps: usize, margin: f64, bits: u32) -> Result<Vec<Real>> {
    if steps < 2 {
        return Err(Error::Argument("theta grid needs at least 2 steps".into()));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::Argument(format!("theta margin {margin} outside (0, 1)")));
    }
    let m = Float::with_val(bits, margin);
    let span = Float::with_val(bits, 2u32 - Float::with_val(bits, &m * 2u32));
    Ok((0..steps)
        .map(|k| {
            let t = Float::with_val(bits, &span * k as u64) / (steps as u64 - 1);
            t + &m
        })
        .collect())
}

/// `Psi_n / Phi_n` for the Bessel weight `spec` and its Laguerre part on the
/// circle `|z| = r`, using `n_quad`-point Gauss rules.
pub fn ratio_sweep(
    spec: &WeightSpec,
    n: usize,
    r: &Real,
    theta_steps: usize,
    n_quad: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<RatioSample>> {
    if *r <= 0 {
        return Err(Error::Argument("sweep radius must be positive".into()));
    }
    let spec_l = spec.laguerre_part();
    let (tj, tl) = rayon::join(
        || RecurrenceTable::for_weight(spec, n_quad, ctx),
        || RecurrenceTable::for_weight(&spec_l, n_quad, ctx),
    );
    let (tj, tl) = (tj?, tl?);
    let (gj, gl) = rayon::join(|| gauss_rule(&tj, n_quad), || gauss_rule(&tl, n_quad));
    let (gj, gl) = (gj?, gl?);
    let bits = ctx.bits();
    let pi = ctx.pi();
    let r = ctx.round(r);
    theta_grid(theta_steps, THETA_MARGIN, bits)?
        .into_par_iter()
        .map(|theta| {
            let z = Complexz::from_polar(&r, &Float::with_val(bits, &theta * &pi));
            let phi = phi_asymptotic_scaled(n, &spec.alpha, &spec.c, &z)?;
            let pj = psi_ratio_with_rule(&tj, &gj, n, &z)?;
            let pl = psi_ratio_with_rule(&tl, &gl, n, &z)?;
            Ok(RatioSample {
                psi_over_phi_j: pj.div(&phi),
                psi_over_phi_l: pl.div(&phi),
                theta,
                z,
            })
        })
        .collect()
}

/// CSV with columns `theta,re_j,im_j,re_l,im_l`.
pub fn ratio_csv(samples: &[RatioSample], digits: usize) -> String {
    let d = |x: &Real| to_decimal_digits(x, digits);
    let mut out = String::from("theta,re_j,im_j,re_l,im_l\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            d(&s.theta),
            d(&s.psi_over_phi_j.re),
            d(&s.psi_over_phi_j.im),
            d(&s.psi_over_phi_l.re),
            d(&s.psi_over_phi_l.im)
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub index: usize,
    pub node: Real,
    pub weight: Real,
    pub log10_weight: f64,
}

/// Weights of a rule against their nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    /// least-squares slope of `log10(weight)` against the node
    pub slope: f64,
    /// `log10(max weight / min weight)`
    pub log10_spread: f64,
    pub weight_sum: Real,
}

pub fn weight_decay_report(rule: &QuadratureRule) -> DecayReport {
    let rows: Vec<DecayRow> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .enumerate()
        .map(|(i, (x, w))| DecayRow {
            index: i + 1,
            node: x.clone(),
            weight: w.clone(),
            log10_weight: log10_abs(w),
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.node.to_f64()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log10_weight).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    DecayReport {
        rows,
        slope,
        log10_spread: hi - lo,
        weight_sum: rule.weight_sum(),
    }
}

/// CSV with columns `index,node,weight,log10_weight`.
pub fn decay_csv(report: &DecayReport, digits: usize) -> String {
    let mut out = String::from("index,node,weight,log10_weight\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{:.6}\n",
            r.index,
            to_decimal_digits(&r.node, digits),
            to_decimal_digits(&r.weight, digits),
            r.log10_weight
        ));
    }
    out
}
