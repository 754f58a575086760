use crate::scalar::Real;

/// A real function sampled at quadrature nodes.
///
/// Anti-Gaussian and generalized averaged rules may place nodes slightly
/// left of the origin, so implementations should be defined there too.
pub trait Integrand: Sync {
    fn eval(&self, x: &Real) -> Result<Real, String>;
}

impl<F> Integrand for F
where
    F: Fn(&Real) -> Real + Sync,
{
    fn eval(&self, x: &Real) -> Result<Real, String> {
        Ok(self(x))
    }
}
