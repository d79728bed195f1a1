//! Seeded random inputs for tests and verification suites.

use rand::Rng;

use crate::coeff::{int, GaussianRational};
use crate::poly::{Dim, Monomial, Polynomial};
use crate::transvector::extremal_projection_s;

fn random_exponents<R: Rng + ?Sized>(m: usize, degree: u32, rng: &mut R) -> Vec<u16> {
    let mut e = vec![0u16; m];
    for _ in 0..degree {
        e[rng.random_range(0..m)] += 1;
    }
    e
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    loop {
        let re = rng.random_range(-4i64..=4);
        let im = if rng.random_bool(0.25) { rng.random_range(-2i64..=2) } else { 0 };
        let c = GaussianRational::new(int(re), int(im));
        if c != GaussianRational::default() {
            return c;
        }
    }
}

/// A sparse bihomogeneous polynomial of bidegree `(k, l)` with small
/// Gaussian-integer coefficients and up to `terms` monomials.
pub fn random_bihomogeneous<R: Rng + ?Sized>(dim: Dim, k: u32, l: u32, terms: usize, rng: &mut R) -> Polynomial {
    let m = dim.get();
    loop {
        let p = Polynomial::from_terms(
            dim,
            (0..terms.max(1)).map(|_| {
                let mono = Monomial::new(&random_exponents(m, k, rng), &random_exponents(m, l, rng));
                (mono, random_coefficient(rng))
            }),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// A nonzero double harmonic of bidegree `(k, l)`: `π_s` of a random sparse input.
pub fn random_double_harmonic<R: Rng + ?Sized>(dim: Dim, k: u32, l: u32, rng: &mut R) -> Polynomial {
    loop {
        let p = extremal_projection_s(&random_bihomogeneous(dim, k, l, 3, rng));
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random polynomial whose bihomogeneous parts have bidegrees `≤ (k, l)`.
pub fn random_polynomial<R: Rng + ?Sized>(dim: Dim, k: u32, l: u32, rng: &mut R) -> Polynomial {
    let mut out = Polynomial::zero(dim);
    for _ in 0..3 {
        let (a, b) = (rng.random_range(0..=k), rng.random_range(0..=l));
        out = &out + &random_bihomogeneous(dim, a, b, 2, rng);
    }
    out
}
