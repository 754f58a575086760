//! Three-term recurrence coefficients of monic orthogonal polynomials,
//!
//! ```text
//! pi_{k+1}(x) = (x - alpha_k) pi_k(x) - beta_k pi_{k-1}(x),  pi_0 = 1, pi_{-1} = 0
//! ```
//!
//! For the Laguerre weight `x^alpha e^{-cx}` they are known in closed form:
//! `alpha_k = (2k+alpha+1)/c` and `beta_k = k(k+alpha)/c^2`. For the Bessel
//! weight they come from the raw moments through the classical Chebyshev
//! algorithm, which is badly conditioned and therefore runs with extra
//! digits (see [`PrecisionContext::conditioning_digits`]).

use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{gamma, parse_real, to_decimal, Complexz, PrecisionContext, Real};
use crate::weights::{weight_moments, Family, MomentVector, WeightSpec, WeightSpecJson};

/// Recurrence coefficients `alpha_0..alpha_{N-1}`, `beta_0..beta_{N-1}`.
///
/// `beta_0` is the zeroth moment of the weight, so Gauss weights built from
/// the table sum to it.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub spec: WeightSpec,
    alpha: Vec<Real>,
    beta: Vec<Real>,
}

impl RecurrenceTable {
    /// Assembles a table, checking positivity of every `beta_k`.
    pub fn new(spec: WeightSpec, alpha: Vec<Real>, beta: Vec<Real>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(Error::Argument(format!(
                "recurrence table needs matching non-empty alpha/beta, got {} and {}",
                alpha.len(),
                beta.len()
            )));
        }
        for (k, b) in beta.iter().enumerate() {
            if !b.is_finite() || *b <= 0 {
                return Err(Error::PrecisionExhausted {
                    index: k,
                    value: to_decimal(b),
                });
            }
        }
        if let Some(k) = alpha.iter().position(|a| !a.is_finite()) {
            return Err(Error::PrecisionExhausted {
                index: k,
                value: to_decimal(&alpha[k]),
            });
        }
        Ok(Self { spec, alpha, beta })
    }

    /// Coefficients of `spec` for `n_pairs` pairs at the precision of `ctx`.
    pub fn for_weight(spec: &WeightSpec, n_pairs: usize, ctx: &PrecisionContext) -> Result<Self> {
        if n_pairs == 0 {
            return Err(Error::Argument("at least one recurrence pair is required".into()));
        }
        match spec.family {
            Family::GenLaguerre => {
                let spec = spec.with_bits(ctx.bits());
                laguerre_recurrence(n_pairs, &spec.alpha, &spec.c)
            }
            Family::BesselPlusOne => {
                let hi = ctx.with_extra_guard(PrecisionContext::conditioning_digits(n_pairs));
                let moments = weight_moments(spec, 2 * n_pairs, &hi)?;
                let table = chebyshev_from_moments(&moments)?;
                Ok(table.with_bits(ctx.bits()))
            }
        }
    }

    /// Number of coefficient pairs.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.alpha[0].prec()
    }

    pub fn alpha(&self, k: usize) -> &Real {
        &self.alpha[k]
    }

    /// `beta_k`; `beta(0)` is the zeroth moment.
    pub fn beta(&self, k: usize) -> &Real {
        &self.beta[k]
    }

    pub fn beta0(&self) -> &Real {
        &self.beta[0]
    }

    pub fn alphas(&self) -> &[Real] {
        &self.alpha
    }

    pub fn betas(&self) -> &[Real] {
        &self.beta
    }

    /// Fails unless at least `n` pairs are present.
    pub fn require(&self, n: usize, what: &str) -> Result<()> {
        if self.len() < n {
            return Err(Error::Argument(format!(
                "{what} needs {n} recurrence pairs, table has {}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Leading `n` pairs.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        self.require(n, "truncation")?;
        Ok(Self {
            spec: self.spec.clone(),
            alpha: self.alpha[..n].to_vec(),
            beta: self.beta[..n].to_vec(),
        })
    }

    /// Rounds every coefficient to `bits`.
    pub fn with_bits(&self, bits: u32) -> Self {
        let round = |v: &Vec<Real>| v.iter().map(|x| Float::with_val(bits, x)).collect();
        Self {
            spec: self.spec.with_bits(bits),
            alpha: round(&self.alpha),
            beta: round(&self.beta),
        }
    }

    pub fn to_json(&self) -> RecurrenceTableJson {
        RecurrenceTableJson {
            spec: self.spec.to_json(),
            beta0: to_decimal(&self.beta[0]),
            alpha: self.alpha.iter().map(to_decimal).collect(),
            beta: self.beta[1..].iter().map(to_decimal).collect(),
        }
    }

    pub fn from_json(json: &RecurrenceTableJson, bits: u32) -> Result<Self> {
        let spec = WeightSpec::from_json(&json.spec, bits)?;
        let alpha = json
            .alpha
            .iter()
            .map(|s| parse_real(s, bits))
            .collect::<Result<Vec<_>>>()?;
        let mut beta = vec![parse_real(&json.beta0, bits)?];
        for s in &json.beta {
            beta.push(parse_real(s, bits)?);
        }
        Self::new(spec, alpha, beta)
    }
}

/// Serialized [`RecurrenceTable`]; `beta` holds `beta_1..beta_{N-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceTableJson {
    pub spec: WeightSpecJson,
    pub beta0: String,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
}

/// Closed-form coefficients of `x^alpha e^{-cx}`, at the precision of `alpha`.
pub fn laguerre_recurrence(n_pairs: usize, alpha: &Real, c: &Real) -> Result<RecurrenceTable> {
    if n_pairs == 0 {
        return Err(Error::Argument("at least one recurrence pair is required".into()));
    }
    let spec = WeightSpec::gen_laguerre(alpha.clone(), c.clone())?;
    let bits = alpha.prec().max(c.prec());
    let c2 = Float::with_val(bits, c.square_ref());

    let a1 = Float::with_val(bits, alpha + 1u32);
    let beta0 = gamma(&a1)? / Float::with_val(bits, rug::ops::Pow::pow(c, &a1));
    let mut a = Vec::with_capacity(n_pairs);
    let mut b = Vec::with_capacity(n_pairs);
    b.push(beta0);
    for k in 0..n_pairs as u64 {
        a.push(Float::with_val(bits, alpha + (2 * k + 1)) / c);
        if k > 0 {
            b.push(Float::with_val(bits, alpha + k) * k / &c2);
        }
    }
    RecurrenceTable::new(spec, a, b)
}

/// Classical Chebyshev algorithm: `2N` raw moments to `N` recurrence pairs.
///
/// Runs at the precision the moments carry. A non-positive `beta_k` means
/// the moments did not carry enough digits for the requested depth.
pub fn chebyshev_from_moments(moments: &MomentVector) -> Result<RecurrenceTable> {
    let m = &moments.m;
    let n = m.len() / 2;
    if n == 0 {
        return Err(Error::Argument("need at least two moments".into()));
    }
    let bits = moments.bits();
    if m[0] <= 0 {
        return Err(Error::PrecisionExhausted {
            index: 0,
            value: to_decimal(&m[0]),
        });
    }
    let len = 2 * n;
    let mut a: Vec<Real> = Vec::with_capacity(n);
    let mut b: Vec<Real> = Vec::with_capacity(n);
    a.push(Float::with_val(bits, &m[1] / &m[0]));
    b.push(m[0].clone());

    // sigma_{k-2, l}, sigma_{k-1, l}
    let mut prev: Vec<Real> = vec![Float::new(bits); len];
    let mut cur: Vec<Real> = m[..len].to_vec();
    let mut next: Vec<Real> = vec![Float::new(bits); len];
    let mut tmp = Float::new(bits);
    for k in 1..n {
        for l in k..len - k {
            next[l].clone_from(&cur[l + 1]);
            tmp.assign(&a[k - 1] * &cur[l]);
            next[l] -= &tmp;
            if k > 1 {
                tmp.assign(&b[k - 1] * &prev[l]);
                next[l] -= &tmp;
            }
        }
        let ak = Float::with_val(bits, &next[k + 1] / &next[k])
            - Float::with_val(bits, &cur[k] / &cur[k - 1]);
        let bk = Float::with_val(bits, &next[k] / &cur[k - 1]);
        if !bk.is_finite() || bk <= 0 || !ak.is_finite() {
            return Err(Error::PrecisionExhausted {
                index: k,
                value: to_decimal(&bk),
            });
        }
        a.push(ak);
        b.push(bk);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    RecurrenceTable::new(moments.spec.clone(), a, b)
}

/// Monic orthogonal polynomial `pi_k(z)` by forward recurrence.
pub fn eval_monic(table: &RecurrenceTable, k: usize, z: &Complexz) -> Result<Complexz> {
    if k > table.len() {
        return Err(Error::Argument(format!(
            "degree {k} exceeds table length {}",
            table.len()
        )));
    }
    let bits = table.bits().max(z.prec());
    let mut prev = Complexz::zero(bits);
    let mut cur = Complexz::one(bits);
    for j in 0..k {
        let shifted = z.add_real(&Float::with_val(bits, -table.alpha(j)));
        let mut next = &shifted * &cur;
        if j > 0 {
            next = &next - &prev.scale(table.beta(j));
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Real-argument version of [`eval_monic`].
pub fn eval_monic_real(table: &RecurrenceTable, k: usize, x: &Real) -> Result<Real> {
    if k > table.len() {
        return Err(Error::Argument(format!(
            "degree {k} exceeds table length {}",
            table.len()
        )));
    }
    let bits = table.bits().max(x.prec());
    let mut prev = Float::new(bits);
    let mut cur = Float::with_val(bits, 1);
    for j in 0..k {
        let mut next = Float::with_val(bits, x - table.alpha(j)) * &cur;
        if j > 0 {
            next -= Float::with_val(bits, table.beta(j) * &prev);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::weight_moments;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn abs_diff(a: &Real, b: &Real) -> f64 {
        Float::with_val(a.prec(), a - b).abs().to_f64()
    }

    #[test]
    fn laguerre_examples() {
        let ctx = ctx();
        let t = laguerre_recurrence(2, &ctx.zero(), &ctx.one()).unwrap();
        assert_eq!(*t.beta0(), 1);
        assert_eq!(*t.alpha(0), 1);
        assert_eq!(*t.alpha(1), 3);
        assert_eq!(*t.beta(1), 1);

        let t = laguerre_recurrence(2, &ctx.zero(), &ctx.int(2)).unwrap();
        assert_eq!(*t.alpha(0), 0.5);
        assert_eq!(*t.alpha(1), 1.5);
        assert_eq!(*t.beta(1), 0.25);
        assert_eq!(*t.beta0(), 0.5);

        let half = ctx.parse("0.5").unwrap();
        let t = laguerre_recurrence(1, &half, &ctx.one()).unwrap();
        assert_eq!(*t.alpha(0), 1.5);
        let g = gamma(&ctx.parse("1.5").unwrap()).unwrap();
        assert!(abs_diff(t.beta0(), &g) < 1e-135);
        let spec = WeightSpec::gen_laguerre(half, ctx.one()).unwrap();
        let mv = weight_moments(&spec, 2, &ctx).unwrap();
        let ratio = Float::with_val(ctx.bits(), &mv.m[1] / &mv.m[0]);
        assert!(abs_diff(t.alpha(0), &ratio) < 1e-135);
    }

    #[test]
    fn chebyshev_examples() {
        let ctx = ctx();
        let spec = WeightSpec::gen_laguerre(ctx.zero(), ctx.one()).unwrap();
        let mv = MomentVector {
            spec: spec.clone(),
            m: [1, 1, 2, 6].iter().map(|&v| ctx.int(v)).collect(),
        };
        let t = chebyshev_from_moments(&mv).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(*t.alpha(0), 1);
        assert_eq!(*t.beta(1), 1);
        assert_eq!(*t.alpha(1), 3);

        // two moments of any positive weight: alpha_0 = m1/m0
        let mv = MomentVector {
            spec,
            m: vec![ctx.parse("2.5").unwrap(), ctx.parse("4").unwrap()],
        };
        let t = chebyshev_from_moments(&mv).unwrap();
        assert_eq!(t.len(), 1);
        let d = Float::with_val(ctx.bits(), t.alpha(0) - ctx.parse("1.6").unwrap());
        assert!(d.abs() < ctx.tolerance());
    }

    #[test]
    fn chebyshev_reports_exhaustion() {
        // 30 working digits cannot carry 60 Laguerre pairs
        let lo = PrecisionContext::new(30, 0).unwrap();
        let spec = WeightSpec::gen_laguerre(lo.zero(), lo.one()).unwrap();
        let mv = weight_moments(&spec, 120, &lo).unwrap();
        match chebyshev_from_moments(&mv) {
            Err(Error::PrecisionExhausted { index, .. }) => assert!(index > 5),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn chebyshev_matches_laguerre_closed_form() {
        let ctx = ctx();
        for (alpha, c) in [("0", "1"), ("1.5", "0.8"), ("-0.5", "2")] {
            let spec = WeightSpec::parse(Family::GenLaguerre, "0", alpha, c, &ctx).unwrap();
            let mv = weight_moments(&spec, 80, &ctx).unwrap();
            let t = chebyshev_from_moments(&mv).unwrap();
            let exact = laguerre_recurrence(40, &spec.alpha, &spec.c).unwrap();
            for k in 0..40 {
                let ra = abs_diff(t.alpha(k), exact.alpha(k)) / exact.alpha(k).to_f64();
                let rb = abs_diff(t.beta(k), exact.beta(k)) / exact.beta(k).to_f64();
                assert!(ra < 1e-90 && rb < 1e-90, "alpha={alpha} c={c} k={k}: {ra:e} {rb:e}");
            }
        }
    }

    #[test]
    fn bessel_table_positive_at_depth_101() {
        let ctx = ctx();
        let spec = WeightSpec::parse(Family::BesselPlusOne, "1", "0.7", "0.5", &ctx).unwrap();
        let t = RecurrenceTable::for_weight(&spec, 101, &ctx).unwrap();
        assert_eq!(t.len(), 101);
        assert!(t.betas().iter().all(|b| *b > 0));
        assert_eq!(t.bits(), ctx.bits());
    }

    #[test]
    fn bessel_table_stable_under_extra_digits() {
        let ctx = ctx();
        let spec = WeightSpec::parse(Family::BesselPlusOne, "0", "-0.5", "0.8", &ctx).unwrap();
        let t = RecurrenceTable::for_weight(&spec, 60, &ctx).unwrap();
        let hi = ctx.with_extra_guard(60);
        let u = RecurrenceTable::for_weight(&spec, 60, &hi).unwrap();
        for k in 0..60 {
            let ra = abs_diff(t.alpha(k), u.alpha(k)) / u.alpha(k).to_f64().abs();
            let rb = abs_diff(t.beta(k), u.beta(k)) / u.beta(k).to_f64();
            assert!(ra < 1e-120 && rb < 1e-120, "k={k}: {ra:e} {rb:e}");
        }
    }

    #[test]
    fn eval_monic_examples() {
        let ctx = ctx();
        let t = laguerre_recurrence(3, &ctx.zero(), &ctx.one()).unwrap();
        let z = Complexz::new(ctx.parse("0.3").unwrap(), ctx.parse("-1.1").unwrap());
        assert_eq!(eval_monic(&t, 0, &z).unwrap(), Complexz::one(ctx.bits()));
        let p2 = eval_monic(&t, 2, &Complexz::zero(ctx.bits())).unwrap();
        assert_eq!(p2.re, 2);
        assert!(p2.im.is_zero());
        let p1 = eval_monic_real(&t, 1, &ctx.one()).unwrap();
        assert!(p1.is_zero());
        assert!(eval_monic(&t, 4, &z).is_err());
        // monic L2 = x^2 - 4x + 2
        let x = ctx.parse("1.75").unwrap();
        let v = eval_monic_real(&t, 2, &x).unwrap();
        let expected = Float::with_val(ctx.bits(), x.square_ref()) - x.clone() * 4u32 + 2u32;
        assert!(abs_diff(&v, &expected) < 1e-135);
    }

    #[test]
    fn laguerre_scaling_law() {
        // pi_k^{(c)}(x) = c^-k pi_k^{(1)}(c x)
        let ctx = ctx();
        let alpha = ctx.parse("0.3").unwrap();
        let c = ctx.parse("2.5").unwrap();
        let tc = laguerre_recurrence(12, &alpha, &c).unwrap();
        let t1 = laguerre_recurrence(12, &alpha, &ctx.one()).unwrap();
        let x = ctx.parse("0.77").unwrap();
        let cx = Float::with_val(ctx.bits(), &c * &x);
        for k in 0..=12 {
            let a = eval_monic_real(&tc, k, &x).unwrap();
            let b = eval_monic_real(&t1, k, &cx).unwrap();
            let scaled = b / Float::with_val(ctx.bits(), rug::ops::Pow::pow(&c, k as u32));
            assert!(abs_diff(&a, &scaled) <= 1e-130 * scaled.to_f64().abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn orthogonality_from_moments() {
        // int pi_i pi_j w = sum of coefficient products against moments
        let ctx = ctx();
        let spec = WeightSpec::parse(Family::BesselPlusOne, "1", "0.7", "0.5", &ctx).unwrap();
        let t = RecurrenceTable::for_weight(&spec, 6, &ctx).unwrap();
        let mv = weight_moments(&spec, 12, &ctx).unwrap();
        let coeffs: Vec<Vec<Real>> = (0..=5).map(|k| monomial_coeffs(&t, k, ctx.bits())).collect();
        let inner = |p: &Vec<Real>, q: &Vec<Real>| {
            let mut s = ctx.zero();
            for (i, a) in p.iter().enumerate() {
                for (j, b) in q.iter().enumerate() {
                    s += Float::with_val(ctx.bits(), a * b) * &mv.m[i + j];
                }
            }
            s
        };
        for i in 0..=5 {
            let norm = inner(&coeffs[i], &coeffs[i]);
            assert!(norm > 0);
            for j in 0..i {
                let ip = inner(&coeffs[i], &coeffs[j]);
                let r = (ip / &norm).to_f64().abs();
                assert!(r < 1e-90, "({i},{j}) {r:e}");
            }
        }
    }

    fn monomial_coeffs(t: &RecurrenceTable, k: usize, bits: u32) -> Vec<Real> {
        let mut prev: Vec<Real> = vec![];
        let mut cur: Vec<Real> = vec![Float::with_val(bits, 1)];
        for j in 0..k {
            let mut next = vec![Float::new(bits); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= Float::with_val(bits, t.alpha(j) * c);
            }
            for (i, p) in prev.iter().enumerate() {
                next[i] -= Float::with_val(bits, t.beta(j) * p);
            }
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    }

    #[test]
    fn json_round_trip() {
        let ctx = ctx();
        let spec = WeightSpec::parse(Family::BesselPlusOne, "1", "0.7", "0.5", &ctx).unwrap();
        let t = RecurrenceTable::for_weight(&spec, 8, &ctx).unwrap();
        let json = serde_json::to_string(&t.to_json()).unwrap();
        let parsed: RecurrenceTableJson = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.beta.len(), 7);
        let back = RecurrenceTable::from_json(&parsed, ctx.bits()).unwrap();
        assert_eq!(back, t);
    }
}
