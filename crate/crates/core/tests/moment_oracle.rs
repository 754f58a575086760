//! Bessel moments against oracles that never touch the hypergeometric form.

use besselquad::scalar::{bessel_j, gamma, PrecisionContext, Real};
use besselquad::weights::{bessel_moment, laguerre_moment, weight_moments, Family, WeightSpec};
use rug::ops::Pow;
use rug::Float;

/// Error relative to `|b|` plus the Laguerre moment of the same order, since
/// some Bessel moments vanish exactly.
fn rel(k: usize, alpha: &Real, c: &Real, a: &Real, b: &Real) -> Real {
    let bits = a.prec();
    let scale = laguerre_moment(k, alpha, c).unwrap() + Float::with_val(bits, b.abs_ref());
    Float::with_val(bits, a - b).abs() / scale
}

/// Termwise Laplace transform of the ascending series of `J_nu`; converges
/// for `c > 1`.
fn series_oracle(k: usize, nu: &Real, alpha: &Real, c: &Real) -> Real {
    let bits = nu.prec();
    let s = Float::with_val(bits, alpha + (k as u64 + 1));
    let c2 = Float::with_val(bits, c * c);
    let mut total = Float::new(bits);
    // term_m = (-1)^m Gamma(s+nu+2m) / (m! Gamma(m+nu+1) 2^(2m+nu) c^(s+nu+2m))
    let base = Float::with_val(bits, &s + nu);
    let mut term = gamma(&base).unwrap()
        / gamma(&Float::with_val(bits, nu + 1u32)).unwrap()
        / Float::with_val(bits, Float::with_val(bits, 2).pow(nu))
        / Float::with_val(bits, c.pow(&base));
    let eps = Float::with_val(bits, Float::with_val(bits, 2).pow(-(bits as i32)));
    for m in 0u64..100_000 {
        total += &term;
        if Float::with_val(bits, term.abs_ref()) < eps.clone() * Float::with_val(bits, total.abs_ref()) {
            return total;
        }
        let a = Float::with_val(bits, &base + 2 * m);
        let num = Float::with_val(bits, &a * Float::with_val(bits, &a + 1u32));
        let den = Float::with_val(bits, Float::with_val(bits, nu + (m + 1)) * (m + 1)) * 4u32 * &c2;
        term *= num;
        term /= den;
        term = -term;
    }
    panic!("series oracle did not converge");
}

/// exp-sinh quadrature of `x^(k+alpha) e^{-cx} J_nu(x)` on `[0, inf)`.
fn exp_sinh_oracle(k: usize, nu: &Real, alpha: &Real, c: &Real, h: f64) -> Real {
    let bits = nu.prec();
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    let expo = Float::with_val(bits, alpha + k as u64);
    let cutoff = Float::with_val(bits, 300u32) / c;
    let hh = Float::with_val(bits, h);
    let mut total = Float::new(bits);
    let mut j: i64 = -(6.0 / h) as i64;
    loop {
        let t = Float::with_val(bits, &hh * j);
        let sh = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        let x = sh.exp();
        if x > cutoff {
            break;
        }
        let dx = Float::with_val(bits, t.cosh_ref()) * &half_pi * &x;
        let f = Float::with_val(bits, (&x).pow(&expo))
            * (-Float::with_val(bits, c * &x)).exp()
            * bessel_j(nu, &x).unwrap();
        total += f * dx;
        j += 1;
    }
    total * hh
}

fn grid(ctx: &PrecisionContext) -> Vec<(Real, Real)> {
    let p = |s: &str| ctx.parse(s).unwrap();
    let mut out = Vec::new();
    for nu in ["0", "0.5", "1", "2.3"] {
        for alpha in ["-0.5", "0", "0.7", "1.7"] {
            out.push((p(nu), p(alpha)));
        }
    }
    out
}

#[test]
fn closed_form_matches_series_for_large_c() {
    let ctx = PrecisionContext::new(60, 20).unwrap();
    let tol = ctx.pow10(-55);
    for c in ["1.5", "2"] {
        let c = ctx.parse(c).unwrap();
        for (nu, alpha) in grid(&ctx) {
            for k in 0..=6 {
                let got = bessel_moment(k, &nu, &alpha, &c).unwrap();
                let want = series_oracle(k, &nu, &alpha, &c);
                assert!(rel(k, &alpha, &c, &got, &want) < tol, "nu={nu} alpha={alpha} c={c} k={k}");
            }
        }
    }
}

#[test]
fn closed_form_matches_quadrature_for_small_c() {
    let ctx = PrecisionContext::new(30, 10).unwrap();
    let tol = ctx.pow10(-30);
    for c in ["0.5", "0.8", "1"] {
        let c = ctx.parse(c).unwrap();
        for (nu, alpha) in grid(&ctx) {
            for k in [0, 3, 6] {
                let got = bessel_moment(k, &nu, &alpha, &c).unwrap();
                let want = exp_sinh_oracle(k, &nu, &alpha, &c, 1.0 / 256.0);
                assert!(rel(k, &alpha, &c, &got, &want) < tol, "nu={nu} alpha={alpha} c={c} k={k}");
            }
        }
    }
}

#[test]
fn recursed_moments_match_closed_form() {
    let ctx = PrecisionContext::new(60, 20).unwrap();
    let tol = ctx.pow10(-50);
    for (nu, alpha) in grid(&ctx) {
        for c in ["0.5", "1", "1.5"] {
            let c = ctx.parse(c).unwrap();
            let spec = WeightSpec::new(Family::BesselPlusOne, nu.clone(), alpha.clone(), c.clone()).unwrap();
            let lag = WeightSpec::new(Family::GenLaguerre, nu.clone(), alpha.clone(), c.clone()).unwrap();
            let m = weight_moments(&spec, 40, &ctx).unwrap().m;
            let l = weight_moments(&lag, 40, &ctx).unwrap().m;
            // k = 20 with nu = 1/2, alpha = -1/2, c = 1 is an exact zero
            for k in [0, 1, 2, 7, 20, 39] {
                let direct = bessel_moment(k, &nu, &alpha, &c).unwrap();
                let j = Float::with_val(ctx.bits(), &m[k] - &l[k]);
                let scale = Float::with_val(ctx.bits(), l[k].abs_ref());
                let err = Float::with_val(ctx.bits(), &j - &direct).abs();
                assert!(err < Float::with_val(ctx.bits(), &tol * &scale), "nu={nu} alpha={alpha} k={k}");
            }
        }
    }
}
