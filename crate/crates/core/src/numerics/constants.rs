//! Closed-form constants attached to the golden ratio.

use super::real::Real;

/// The closed-form constants of the radial asymptotics at `z = 1`.
#[derive(Clone, Debug)]
pub struct GoldenConstants<T> {
    /// `ρ = (1+√5)/2`
    pub rho: T,
    /// `lg ρ = ln ρ / ln 2`
    pub lg_rho: T,
    /// `μ₁ = ρ²`, the radial limit of `μ` at 1.
    pub mu1: T,
    /// `μ₁′ = (21+8√5)/11`, the radial limit of `μ′` at 1.
    pub mu1p: T,
    /// `λ = μ₁′/(μ₁ ln μ₁)`
    pub lambda: T,
    /// `c₁ = (23+3√5)/66`, coefficient of the linear term of `ln F(e^{-t})`.
    pub c1: T,
}

pub fn golden_constants<T: Real>(prec: u32) -> GoldenConstants<T> {
    let sqrt5 = T::from_f64(5.0, prec).sqrt();
    let rho = (sqrt5.clone() + 1.0) / 2.0;
    let lg_rho = rho.ln() / T::ln2(prec);
    let mu1 = (sqrt5.clone() + 3.0) / 2.0;
    let mu1p = (sqrt5.clone() * 8.0 + 21.0) / 11.0;
    let lambda = mu1p.clone() / (mu1.clone() * mu1.ln());
    let c1 = (sqrt5 * 3.0 + 23.0) / 66.0;
    GoldenConstants {
        rho,
        lg_rho,
        mu1,
        mu1p,
        lambda,
        c1,
    }
}
