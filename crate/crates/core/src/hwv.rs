//! Highest weight vectors of the simplicial harmonics `𝓗_{k,l}`.

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::poly::{Dim, Polynomial};

/// `conj(z₁^{k−l}(z₁w₂ − z₂w₁)^l)` with `z_j = x_{2j−1} + i·x_{2j}` and
/// `w_j = u_{2j−1} + i·u_{2j}`.
pub fn highest_weight_vector(dim: Dim, k: u32, l: u32) -> Result<Polynomial> {
    if k < l {
        return Err(Error::IndexOutOfRange(format!("highest weight needs k >= l, got ({k}, {l})")));
    }
    dim.require_transvector()?;
    let i = Polynomial::constant(dim, GaussianRational::i());
    let z = |j: usize| &Polynomial::x(dim, 2 * j) + &(&i * &Polynomial::x(dim, 2 * j + 1));
    let w = |j: usize| &Polynomial::u(dim, 2 * j) + &(&i * &Polynomial::u(dim, 2 * j + 1));
    let minor = &(&z(0) * &w(1)) - &(&z(1) * &w(0));
    Ok((&z(0).pow(k - l) * &minor.pow(l)).conj())
}
