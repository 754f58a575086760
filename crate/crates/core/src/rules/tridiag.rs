//! Symmetric tridiagonal eigenproblem in extended precision.
//!
//! Implicit-shift QL with Wilkinson-style shifts. Only the first row of the
//! eigenvector matrix is accumulated, which is all a Gauss rule needs.

use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 200;

/// Eigenvalues of the matrix with diagonal `diag` and off-diagonal `off`
/// (length `diag.len() - 1`), paired with the squared first component of
/// the normalized eigenvector. Sorted by eigenvalue.
pub fn eigen_first_components(diag: &[Real], off: &[Real]) -> Result<Vec<(Real, Real)>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    assert_eq!(off.len() + 1, n, "off-diagonal must be one shorter than diagonal");
    let bits = diag
        .iter()
        .chain(off.iter())
        .map(|x| x.prec())
        .max()
        .unwrap_or(64);

    let mut d: Vec<Real> = diag.iter().map(|x| Float::with_val(bits, x)).collect();
    let mut e: Vec<Real> = off.iter().map(|x| Float::with_val(bits, x)).collect();
    e.push(Float::new(bits));
    let mut z: Vec<Real> = (0..n).map(|i| Float::with_val(bits, (i == 0) as u32)).collect();

    let mut dd = Float::new(bits);
    let mut g = Float::new(bits);
    let mut r = Float::new(bits);
    let mut s = Float::new(bits);
    let mut c = Float::new(bits);
    let mut p = Float::new(bits);
    let mut f = Float::new(bits);
    let mut b = Float::new(bits);
    let mut t = Float::new(bits);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // look for a negligible off-diagonal element
            let mut m = l;
            while m + 1 < n {
                dd.assign(d[m].abs_ref());
                t.assign(d[m + 1].abs_ref());
                dd += &t;
                t.assign(e[m].abs_ref());
                t += &dd;
                if t == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence { index: l });
            }

            // shift from the leading 2x2 block
            g.assign(&d[l + 1] - &d[l]);
            t.assign(&e[l] * 2u32);
            g /= &t;
            r.assign(g.hypot_ref(&Float::with_val(bits, 1)));
            if g.is_sign_negative() {
                t.assign(&g - &r);
            } else {
                t.assign(&g + &r);
            }
            g.assign(&d[m] - &d[l]);
            f.assign(&e[l] / &t);
            g += &f;

            s.assign(1);
            c.assign(1);
            p.assign(0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                f.assign(&s * &e[i]);
                b.assign(&c * &e[i]);
                r.assign(f.hypot_ref(&g));
                e[i + 1].assign(&r);
                if r.is_zero() {
                    d[i + 1] -= &p;
                    e[m].assign(0);
                    deflated = true;
                    break;
                }
                s.assign(&f / &r);
                c.assign(&g / &r);
                g.assign(&d[i + 1] - &p);
                r.assign(&d[i] - &g);
                r *= &s;
                t.assign(&c * &b);
                t *= 2u32;
                r += &t;
                p.assign(&s * &r);
                d[i + 1].assign(&g + &p);
                g.assign(&c * &r);
                g -= &b;

                // rotate the tracked first row
                f.assign(&z[i + 1]);
                t.assign(&s * &z[i]);
                z[i + 1].assign(&c * &f);
                z[i + 1] += &t;
                t.assign(&s * &f);
                z[i] *= &c;
                z[i] -= &t;
            }
            if deflated {
                continue;
            }
            d[l] -= &p;
            e[l].assign(&g);
            e[m].assign(0);
        }
    }

    let mut pairs: Vec<(Real, Real)> = d
        .into_iter()
        .zip(z)
        .map(|(val, comp)| {
            let w = Float::with_val(bits, comp.square_ref());
            (val, w)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PrecisionContext;

    #[test]
    fn two_by_two() {
        // [[1, sqrt2], [sqrt2, 3]] has eigenvalues 2 -+ sqrt3
        let ctx = PrecisionContext::default();
        let d = vec![ctx.int(1), ctx.int(3)];
        let o = vec![ctx.int(2).sqrt()];
        let pairs = eigen_first_components(&d, &o).unwrap();
        let s3 = ctx.int(3).sqrt();
        let lo = Float::with_val(ctx.bits(), &pairs[0].0 - (ctx.int(2) - s3.clone()));
        let hi = Float::with_val(ctx.bits(), &pairs[1].0 - (ctx.int(2) + s3));
        assert!(lo.abs() < ctx.tolerance());
        assert!(hi.abs() < ctx.tolerance());
        let total = Float::with_val(ctx.bits(), &pairs[0].1 + &pairs[1].1);
        assert!(Float::with_val(ctx.bits(), total - 1u32).abs() < ctx.tolerance());
    }

    #[test]
    fn one_by_one_and_empty() {
        let ctx = PrecisionContext::default();
        let pairs = eigen_first_components(&[ctx.int(5)], &[]).unwrap();
        assert_eq!(pairs[0].0, 5);
        assert_eq!(pairs[0].1, 1);
        assert!(eigen_first_components(&[], &[]).unwrap().is_empty());
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let ctx = PrecisionContext::new(60, 10).unwrap();
        let n = 40;
        let d: Vec<Real> = (0..n).map(|i| ctx.from_f64(((i * 7) % 11) as f64 - 3.5)).collect();
        let o: Vec<Real> = (1..n).map(|i| ctx.from_f64(0.5 + (i % 5) as f64)).collect();
        let pairs = eigen_first_components(&d, &o).unwrap();
        let mut tr = ctx.zero();
        let mut fro = ctx.zero();
        for x in &d {
            tr += x;
            fro += Float::with_val(ctx.bits(), x.square_ref());
        }
        for x in &o {
            fro += Float::with_val(ctx.bits(), x.square_ref()) * 2u32;
        }
        let mut tr2 = ctx.zero();
        let mut fro2 = ctx.zero();
        let mut wsum = ctx.zero();
        for (v, w) in &pairs {
            tr2 += v;
            fro2 += Float::with_val(ctx.bits(), v.square_ref());
            wsum += w;
        }
        let tol = ctx.pow10(-55);
        assert!(Float::with_val(ctx.bits(), &tr - &tr2).abs() < tol);
        assert!(Float::with_val(ctx.bits(), &fro - &fro2).abs() < tol * &fro);
        assert!(Float::with_val(ctx.bits(), wsum - 1u32).abs() < ctx.pow10(-55));
        assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
    }
}
