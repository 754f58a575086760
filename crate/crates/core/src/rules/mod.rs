//! Quadrature rules from recurrence coefficients.
//!
//! Every rule is the Golub-Welsch eigendecomposition of a symmetric
//! tridiagonal matrix built from a [`RecurrenceTable`]:
//!
//! * Gauss `I_n`: the Jacobi matrix `J_n`.
//! * anti-Gauss `A_{n+1}`: `J_{n+1}` with the last off-diagonal entry
//!   replaced by `sqrt(2 beta_n)`.
//! * companion `Abar_{n+1}`: same, with `sqrt(beta_n + beta_{n+1})`.
//! * averaged `(I_n + A_{n+1}) / 2`.
//! * generalized averaged
//!   `beta_{n+1}/(beta_n+beta_{n+1}) I_n + beta_n/(beta_n+beta_{n+1}) Abar_{n+1}`,
//!   which is also the Gauss-type rule of the `(2n+1)`-square matrix
//!   [`gen_averaged_full`] assembles from `J_n`, `alpha_n` and the reversed
//!   `J_n`.

mod internality;
mod tridiag;

pub use internality::{
    bisect_internality_flip, internality_at, internality_check, internality_margin,
    internality_sweep, InternalityMode, InternalityReport, InternalitySweep,
};
pub use tridiag::eigen_first_components;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::recurrence::RecurrenceTable;
use crate::scalar::{to_decimal_digits, Real};
use crate::weights::{WeightSpec, WeightSpecJson};

/// Which construction produced a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Gauss,
    AntiGauss,
    Averaged,
    GenAveragedCompanion,
    GenAveraged,
}

impl RuleKind {
    pub const ALL: [RuleKind; 5] = [
        RuleKind::Gauss,
        RuleKind::AntiGauss,
        RuleKind::Averaged,
        RuleKind::GenAveragedCompanion,
        RuleKind::GenAveraged,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            RuleKind::Gauss => "gauss",
            RuleKind::AntiGauss => "anti",
            RuleKind::Averaged => "avg",
            RuleKind::GenAveragedCompanion => "companion",
            RuleKind::GenAveraged => "genavg",
        }
    }

    /// Number of nodes of the rule built for index `n`.
    pub fn points(&self, n: usize) -> usize {
        match self {
            RuleKind::Gauss => n,
            RuleKind::AntiGauss | RuleKind::GenAveragedCompanion => n + 1,
            RuleKind::Averaged | RuleKind::GenAveraged => 2 * n + 1,
        }
    }

    /// Certified degree of exactness for index `n`.
    pub fn exactness(&self, n: usize) -> usize {
        match self {
            RuleKind::Gauss | RuleKind::AntiGauss | RuleKind::GenAveragedCompanion => 2 * n - 1,
            RuleKind::Averaged | RuleKind::GenAveraged => 2 * n + 1,
        }
    }

    /// Recurrence pairs the construction reads.
    pub fn pairs_needed(&self, n: usize) -> usize {
        match self {
            RuleKind::Gauss => n,
            RuleKind::AntiGauss | RuleKind::Averaged => n + 1,
            RuleKind::GenAveragedCompanion | RuleKind::GenAveraged => n + 2,
        }
    }
}

impl std::fmt::Display for RuleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss" => Ok(RuleKind::Gauss),
            "anti" | "antigauss" | "anti_gauss" => Ok(RuleKind::AntiGauss),
            "avg" | "averaged" => Ok(RuleKind::Averaged),
            "companion" | "gen_averaged_companion" => Ok(RuleKind::GenAveragedCompanion),
            "genavg" | "gen_averaged" => Ok(RuleKind::GenAveraged),
            other => Err(Error::Config(format!("unknown rule kind {other:?}"))),
        }
    }
}

/// Nodes in ascending order with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub n: usize,
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
    pub exactness: usize,
    pub spec: WeightSpec,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.nodes[0].prec()
    }

    pub fn weight_sum(&self) -> Real {
        let mut s = Float::new(self.bits());
        for w in &self.weights {
            s += w;
        }
        s
    }

    pub fn smallest_node(&self) -> &Real {
        &self.nodes[0]
    }

    /// `sum w_i f(x_i)`, accumulated in ascending node order.
    pub fn apply(&self, f: &(impl Integrand + ?Sized)) -> Result<Real> {
        let mut s = Float::new(self.bits());
        for (index, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let fx = f
                .eval(x)
                .map_err(|msg| Error::Integrand { index, msg })?;
            s += Float::with_val(self.bits(), &fx * w);
        }
        Ok(s)
    }

    pub fn to_json(&self, digits: u32) -> RuleJson {
        let fmt = |v: &Vec<Real>| {
            v.iter()
                .map(|x| to_decimal_digits(x, digits as usize))
                .collect()
        };
        RuleJson {
            kind: self.kind,
            spec: self.spec.to_json(),
            n: self.n,
            exactness: self.exactness,
            nodes: fmt(&self.nodes),
            weights: fmt(&self.weights),
            digits,
        }
    }
}

/// Serialized [`QuadratureRule`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleJson {
    pub kind: RuleKind,
    pub spec: WeightSpecJson,
    pub n: usize,
    pub exactness: usize,
    pub nodes: Vec<String>,
    pub weights: Vec<String>,
    pub digits: u32,
}

/// `sum w_i f(x_i)` over `rule`.
pub fn apply_rule(rule: &QuadratureRule, f: &(impl Integrand + ?Sized)) -> Result<Real> {
    rule.apply(f)
}

/// Builds the rule of `kind` for index `n`.
pub fn build_rule(table: &RecurrenceTable, kind: RuleKind, n: usize) -> Result<QuadratureRule> {
    match kind {
        RuleKind::Gauss => gauss_rule(table, n),
        RuleKind::AntiGauss => anti_gauss_rule(table, n),
        RuleKind::Averaged => averaged_rule(table, n),
        RuleKind::GenAveragedCompanion => companion_rule(table, n),
        RuleKind::GenAveraged => gen_averaged_rule(table, n),
    }
}

fn check_index(table: &RecurrenceTable, kind: RuleKind, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument(format!("{kind} rule needs n >= 1")));
    }
    table.require(kind.pairs_needed(n), kind.tag())
}

fn sqrt_of(x: &Real) -> Real {
    Float::with_val(x.prec(), x.sqrt_ref())
}

/// Golub-Welsch: nodes are eigenvalues, weights `beta_0 v_0^2`.
fn eigen_rule(
    table: &RecurrenceTable,
    kind: RuleKind,
    n: usize,
    diag: &[Real],
    off: &[Real],
) -> Result<QuadratureRule> {
    let pairs = eigen_first_components(diag, off)?;
    let bits = table.bits();
    let (nodes, weights) = pairs
        .into_iter()
        .map(|(x, v2)| (x, Float::with_val(bits, &v2 * table.beta0())))
        .unzip();
    Ok(QuadratureRule {
        kind,
        n,
        nodes,
        weights,
        exactness: kind.exactness(n),
        spec: table.spec.clone(),
    })
}

/// `J_{n+1}` with its last off-diagonal entry replaced by `corner`.
fn modified_jacobi(
    table: &RecurrenceTable,
    kind: RuleKind,
    n: usize,
    corner: Real,
) -> Result<QuadratureRule> {
    let diag = &table.alphas()[..=n];
    let mut off: Vec<Real> = table.betas()[1..n].iter().map(sqrt_of).collect();
    off.push(corner);
    eigen_rule(table, kind, n, diag, &off)
}

/// `n`-point Gauss rule, exact through degree `2n-1`.
pub fn gauss_rule(table: &RecurrenceTable, n: usize) -> Result<QuadratureRule> {
    check_index(table, RuleKind::Gauss, n)?;
    let off: Vec<Real> = table.betas()[1..n].iter().map(sqrt_of).collect();
    eigen_rule(table, RuleKind::Gauss, n, &table.alphas()[..n], &off)
}

/// `(n+1)`-point anti-Gauss rule, whose error on polynomials of degree up
/// to `2n+1` is the negative of the Gauss error.
pub fn anti_gauss_rule(table: &RecurrenceTable, n: usize) -> Result<QuadratureRule> {
    check_index(table, RuleKind::AntiGauss, n)?;
    let corner = Float::with_val(table.bits(), table.beta(n) * 2u32).sqrt();
    modified_jacobi(table, RuleKind::AntiGauss, n, corner)
}

/// `(n+1)`-point companion rule of the generalized averaged rule.
pub fn companion_rule(table: &RecurrenceTable, n: usize) -> Result<QuadratureRule> {
    check_index(table, RuleKind::GenAveragedCompanion, n)?;
    let corner = Float::with_val(table.bits(), table.beta(n) + table.beta(n + 1)).sqrt();
    modified_jacobi(table, RuleKind::GenAveragedCompanion, n, corner)
}

/// Union of two rules with interlacing nodes, weights scaled by `sa` and `sb`.
fn merge(
    a: QuadratureRule,
    sa: &Real,
    b: QuadratureRule,
    sb: &Real,
    kind: RuleKind,
    n: usize,
) -> Result<QuadratureRule> {
    let bits = a.bits();
    let mut pts: Vec<(Real, Real)> = a
        .nodes
        .into_iter()
        .zip(a.weights)
        .map(|(x, w)| (x, w * sa))
        .chain(b.nodes.into_iter().zip(b.weights).map(|(x, w)| (x, w * sb)))
        .collect();
    pts.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite nodes"));

    // interlacing is strict in exact arithmetic; a near-tie means the
    // coefficients were already wrong
    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) / 2));
    for i in 1..pts.len() {
        let gap = Float::with_val(bits, &pts[i].0 - &pts[i - 1].0);
        let scale = Float::with_val(bits, pts[i].0.abs_ref()).max(&Float::with_val(bits, pts[i - 1].0.abs_ref()));
        if gap <= Float::with_val(bits, &tol * &scale) {
            return Err(Error::NodeCollision {
                index: i - 1,
                next: i,
            });
        }
    }
    let (nodes, weights) = pts.into_iter().unzip();
    Ok(QuadratureRule {
        kind,
        n,
        nodes,
        weights,
        exactness: kind.exactness(n),
        spec: a.spec,
    })
}

/// `(I_n + A_{n+1}) / 2`, exact through degree `2n+1`.
pub fn averaged_rule(table: &RecurrenceTable, n: usize) -> Result<QuadratureRule> {
    check_index(table, RuleKind::Averaged, n)?;
    let half = Float::with_val(table.bits(), 0.5);
    let g = gauss_rule(table, n)?;
    let a = anti_gauss_rule(table, n)?;
    merge(g, &half, a, &half, RuleKind::Averaged, n)
}

/// Generalized averaged rule in the compact form
/// `beta_{n+1}/(beta_n+beta_{n+1}) I_n + beta_n/(beta_n+beta_{n+1}) Abar_{n+1}`.
pub fn gen_averaged_rule(table: &RecurrenceTable, n: usize) -> Result<QuadratureRule> {
    check_index(table, RuleKind::GenAveraged, n)?;
    let bits = table.bits();
    let sum = Float::with_val(bits, table.beta(n) + table.beta(n + 1));
    let sg = Float::with_val(bits, table.beta(n + 1) / &sum);
    let sc = Float::with_val(bits, table.beta(n) / &sum);
    let g = gauss_rule(table, n)?;
    let c = companion_rule(table, n)?;
    merge(g, &sg, c, &sc, RuleKind::GenAveraged, n)
}

/// Generalized averaged rule from the eigendecomposition of the full
/// `(2n+1)`-square matrix with diagonal
/// `alpha_0..alpha_{n-1}, alpha_n, alpha_{n-1}..alpha_0` and off-diagonal
/// `sqrt(beta_1)..sqrt(beta_n), sqrt(beta_{n+1}), sqrt(beta_{n-1})..sqrt(beta_1)`.
pub fn gen_averaged_full(table: &RecurrenceTable, n: usize) -> Result<QuadratureRule> {
    check_index(table, RuleKind::GenAveraged, n)?;
    let a = table.alphas();
    let diag: Vec<Real> = a[..=n]
        .iter()
        .chain(a[..n].iter().rev())
        .cloned()
        .collect();
    let roots: Vec<Real> = table.betas()[1..=n + 1].iter().map(sqrt_of).collect();
    let off: Vec<Real> = roots
        .iter()
        .cloned()
        .chain(roots[..n - 1].iter().rev().cloned())
        .collect();
    eigen_rule(table, RuleKind::GenAveraged, n, &diag, &off)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::laguerre_recurrence;
    use crate::scalar::PrecisionContext;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60, 10).unwrap()
    }

    fn lag(ctx: &PrecisionContext, alpha: &str, c: &str, pairs: usize) -> RecurrenceTable {
        laguerre_recurrence(pairs, &ctx.parse(alpha).unwrap(), &ctx.parse(c).unwrap()).unwrap()
    }

    fn mono(k: u32) -> impl Fn(&Real) -> Real + Sync {
        move |x: &Real| Float::with_val(x.prec(), rug::ops::Pow::pow(x, k))
    }

    fn close(a: &Real, b: &Real, tol: &Real) -> bool {
        Float::with_val(a.prec(), a - b).abs() <= *tol
    }

    fn assert_rule(rule: &QuadratureRule, nodes: &[Real], weights: &[Real], tol: &Real) {
        assert_eq!(rule.len(), nodes.len());
        for (x, e) in rule.nodes.iter().zip(nodes) {
            assert!(close(x, e, tol), "node {x} vs {e}");
        }
        for (w, e) in rule.weights.iter().zip(weights) {
            assert!(close(w, e, tol), "weight {w} vs {e}");
        }
    }

    #[test]
    fn gauss_examples() {
        let ctx = ctx();
        let tol = ctx.tolerance();
        let t = lag(&ctx, "0", "1", 4);
        let r = gauss_rule(&t, 1).unwrap();
        assert_rule(&r, &[ctx.int(1)], &[ctx.int(1)], &tol);

        let s2 = ctx.int(2).sqrt();
        let r = gauss_rule(&t, 2).unwrap();
        let nodes = [ctx.int(2) - s2.clone(), ctx.int(2) + s2.clone()];
        let weights = [(ctx.int(2) + s2.clone()) / 4u32, (ctx.int(2) - s2.clone()) / 4u32];
        assert_rule(&r, &nodes, &weights, &tol);
        assert_eq!(r.exactness, 3);

        let t2 = lag(&ctx, "0", "2", 4);
        let r2 = gauss_rule(&t2, 2).unwrap();
        let half: Vec<Real> = nodes.iter().map(|x| Float::with_val(ctx.bits(), x / 2u32)).collect();
        let whalf: Vec<Real> = weights.iter().map(|x| Float::with_val(ctx.bits(), x / 2u32)).collect();
        assert_rule(&r2, &half, &whalf, &tol);
    }

    #[test]
    fn anti_gauss_examples() {
        let ctx = ctx();
        let tol = ctx.tolerance();
        let t = lag(&ctx, "0", "1", 4);
        let r = anti_gauss_rule(&t, 1).unwrap();
        let s3 = ctx.int(3).sqrt();
        let nodes = [ctx.int(2) - s3.clone(), ctx.int(2) + s3.clone()];
        let weights = [
            ctx.one() / (ctx.int(3) - s3.clone()),
            ctx.one() / (ctx.int(3) + s3.clone()),
        ];
        assert_rule(&r, &nodes, &weights, &tol);
        let sq = r.apply(&mono(2)).unwrap();
        assert!(close(&sq, &ctx.int(3), &tol));
        // interlacing with the single Gauss node at 1
        assert!(r.nodes[0] < 1 && r.nodes[1] > 1);
    }

    #[test]
    fn averaged_examples() {
        let ctx = ctx();
        let tol = ctx.tolerance();
        let t = lag(&ctx, "0", "1", 4);
        let r = averaged_rule(&t, 1).unwrap();
        let s3 = ctx.int(3).sqrt();
        let nodes = [ctx.int(2) - s3.clone(), ctx.int(1), ctx.int(2) + s3.clone()];
        let weights = [
            ctx.one() / (ctx.int(3) - s3.clone()) / 2u32,
            ctx.one() / 2u32,
            ctx.one() / (ctx.int(3) + s3.clone()) / 2u32,
        ];
        assert_rule(&r, &nodes, &weights, &tol);
        let cube = r.apply(&mono(3)).unwrap();
        assert!(close(&cube, &ctx.int(6), &tol));
        assert!(close(&r.weight_sum(), &ctx.one(), &tol));
    }

    #[test]
    fn gen_averaged_examples() {
        let ctx = ctx();
        let tol = ctx.tolerance();
        let t = lag(&ctx, "0", "1", 4);
        let c = companion_rule(&t, 1).unwrap();
        let s6 = ctx.int(6).sqrt();
        assert!(close(&c.nodes[0], &(ctx.int(2) - s6.clone()), &tol));
        assert!(close(&c.nodes[1], &(ctx.int(2) + s6.clone()), &tol));
        assert!(c.nodes[0] < 0);
        // weights (1 + 1/sqrt6)/2 and (1 - 1/sqrt6)/2
        let w0 = (ctx.one() + ctx.one() / s6.clone()) / 2u32;
        assert!(close(&c.weights[0], &w0, &tol));
        assert!((c.weights[0].to_f64() - 0.704124).abs() < 1e-6);

        let r = gen_averaged_rule(&t, 1).unwrap();
        assert_eq!(r.len(), 3);
        // Ahat_3 = 4/5 I_1 + 1/5 Abar_2
        let mid = r.nodes.iter().position(|x| *x == 1).unwrap();
        assert!(close(&r.weights[mid], &(ctx.int(4) / 5u32), &tol));
        let sq = r.apply(&mono(2)).unwrap();
        let cube = r.apply(&mono(3)).unwrap();
        assert!(close(&sq, &ctx.int(2), &tol));
        assert!(close(&cube, &ctx.int(6), &tol));
    }

    #[test]
    fn gen_averaged_full_matches_compact() {
        let ctx = ctx();
        let tol = ctx.pow10(-55);
        for (alpha, c) in [("0", "1"), ("1.5", "0.8")] {
            let t = lag(&ctx, alpha, c, 8);
            for n in [1, 2, 5] {
                let a = gen_averaged_rule(&t, n).unwrap();
                let b = gen_averaged_full(&t, n).unwrap();
                assert_rule(&a, &b.nodes, &b.weights, &tol);
            }
        }
    }

    #[test]
    fn apply_rule_examples() {
        let ctx = ctx();
        let tol = ctx.tolerance();
        let t = lag(&ctx, "0", "1", 6);
        let g = gauss_rule(&t, 2).unwrap();
        assert!(close(&apply_rule(&g, &|x: &Real| Float::with_val(x.prec(), 1)).unwrap(), t.beta0(), &tol));
        assert!(close(&apply_rule(&g, &mono(3)).unwrap(), &ctx.int(6), &tol));
        let q = apply_rule(&g, &mono(4)).unwrap();
        assert!(!close(&q, &ctx.int(24), &ctx.pow10(-10)));
    }

    #[test]
    fn integrand_failure_carries_node_index() {
        struct Picky;
        impl Integrand for Picky {
            fn eval(&self, x: &Real) -> std::result::Result<Real, String> {
                if *x > 2 {
                    Err("too large".into())
                } else {
                    Ok(x.clone())
                }
            }
        }
        let ctx = ctx();
        let t = lag(&ctx, "0", "1", 4);
        let g = gauss_rule(&t, 2).unwrap();
        match g.apply(&Picky) {
            Err(Error::Integrand { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn short_table_is_rejected() {
        let ctx = ctx();
        let t = lag(&ctx, "0", "1", 3);
        assert!(gauss_rule(&t, 3).is_ok());
        assert!(anti_gauss_rule(&t, 3).is_err());
        assert!(gen_averaged_rule(&t, 2).is_err());
        assert!(gauss_rule(&t, 0).is_err());
    }

    #[test]
    fn kinds_parse_and_count() {
        for k in RuleKind::ALL {
            assert_eq!(k.tag().parse::<RuleKind>().unwrap(), k);
        }
        assert_eq!(RuleKind::GenAveraged.points(3), 7);
        assert_eq!(RuleKind::AntiGauss.exactness(3), 5);
        assert!("bogus".parse::<RuleKind>().is_err());
    }

    #[test]
    fn json_shape() {
        let ctx = ctx();
        let t = lag(&ctx, "0", "1", 4);
        let r = gen_averaged_rule(&t, 1).unwrap();
        let v = serde_json::to_value(r.to_json(60)).unwrap();
        assert_eq!(v["kind"], "gen_averaged");
        assert_eq!(v["n"], 1);
        assert_eq!(v["exactness"], 3);
        assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
        assert!(v["nodes"][0].as_str().unwrap().starts_with("-4.494897427831780981972840747"));
        assert_eq!(v["digits"], 60);
    }
}
