//! Closed forms for the action of `S_x, S_u, A, C` on the ladder cells
//! `C^i S_u^j 𝓗_{k,l}`, and the coefficients of the master projection.

use num_traits::{One, Zero};

use crate::coeff::{int, Rational};
use crate::error::{Error, Result};
use crate::poly::Dim;
use crate::special::{factorial, falling, rising};

fn check_cell(k: u32, l: u32, j: u32) -> Result<()> {
    if k < l {
        return Err(Error::IndexOutOfRange(format!("ladder needs k >= l, got ({k}, {l})")));
    }
    if j > k - l {
        return Err(Error::IndexOutOfRange(format!("S_u power {j} exceeds k - l = {}", k - l)));
    }
    Ok(())
}

fn nonzero(den: Rational, what: &str) -> Result<Rational> {
    if den.is_zero() {
        Err(Error::IndexOutOfRange(format!("{what}: vanishing denominator")))
    } else {
        Ok(den)
    }
}

/// `S_x : C^iS_u^j H ↦ φ_{i,j} C^iS_u^{j−1} H`.
pub fn ladder_phi(dim: Dim, i: u32, j: u32, k: u32, l: u32) -> Result<Rational> {
    check_cell(k, l, j)?;
    let h = dim.half();
    let (i, j, k, l) = (int(i as i64), int(j as i64), int(k as i64), int(l as i64));
    let den = nonzero(&l + &i + &j + &h - int(2), "phi")?;
    Ok(&j * (&k - &l - &j + int(1)) * (&l + &j + &h - int(2)) / den)
}

/// `A : C^i H ↦ c_i C^{i−1} H`, with `c_0 = 0`.
pub fn ladder_c(dim: Dim, i: u32, k: u32, l: u32) -> Result<Rational> {
    check_cell(k, l, 0)?;
    if i == 0 {
        return Ok(Rational::zero());
    }
    let h = dim.half();
    let m = int(dim.get() as i64);
    let (i, k, l) = (int(i as i64), int(k as i64), int(l as i64));
    let den = nonzero(&k + &h + &i - int(2), "c")?;
    Ok(&i * (&k + &h + &i - int(1)) * (&k + &l + &m + &i - int(3)) / den)
}

/// `A : C^iS_u^j H ↦ ψ_{i,j} C^{i−1}S_u^j H`.
pub fn ladder_psi(dim: Dim, i: u32, j: u32, k: u32, l: u32) -> Result<Rational> {
    check_cell(k, l, j)?;
    if i == 0 {
        return Ok(Rational::zero());
    }
    let h = dim.half();
    let m = int(dim.get() as i64);
    let (i, j, k, l) = (int(i as i64), int(j as i64), int(k as i64), int(l as i64));
    let den = nonzero((&k + &h + &i - &j - int(2)) * (&l + &h + &i + &j - int(2)), "psi")?;
    Ok(&i * (&k + &h + &i - int(1)) * (&l + &h + &i - int(2)) * (&k + &l + &m + &i - int(3)) / den)
}

/// `A^pS_x^q : C^iS_u^j H ↦ α^{p,q}_{i,j} C^{i−p}S_u^{j−q} H`.
pub fn ladder_alpha(dim: Dim, i: u32, j: u32, p: u32, q: u32, k: u32, l: u32) -> Result<Rational> {
    check_cell(k, l, j)?;
    if p > i || q > j {
        return Err(Error::IndexOutOfRange(format!("alpha needs p <= i, q <= j, got ({p},{q}) on ({i},{j})")));
    }
    let h = dim.half();
    let m = int(dim.get() as i64);
    let r = |n: u32| int(n as i64);
    let (ir, jr, kr, lr) = (r(i), r(j), r(k), r(l));
    let num = falling(&ir, p)
        * falling(&jr, q)
        * rising(&(&kr - &lr - &jr + int(1)), q)
        * falling(&(&kr + &h + &ir - int(1)), p)
        * falling(&(&lr + &h + &jr - int(2)), q)
        * falling(&(&lr + &h + &ir - int(2)), p)
        * falling(&(&kr + &lr + &m + &ir - int(3)), p);
    let den = falling(&(&kr + &h + &ir - &jr + r(q) - int(2)), p)
        * falling(&(&lr + &h + &ir + &jr - int(2)), q)
        * falling(&(&lr + &h + &ir + &jr - r(q) - int(2)), p);
    Ok(num / nonzero(den, "alpha")?)
}

/// Coefficient of `C^iS_u^jA^iS_x^j` in the master projection at bidegree `(k, l)`.
pub fn ladder_beta(dim: Dim, i: u32, j: u32, k: u32, l: u32) -> Result<Rational> {
    if k < l {
        return Err(Error::IndexOutOfRange(format!("master projection needs k >= l, got ({k}, {l})")));
    }
    let h = dim.half();
    let m = int(dim.get() as i64);
    let (ir, jr, kr, lr) = (int(i as i64), int(j as i64), int(k as i64), int(l as i64));
    let sign = if (i + j).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let num = (&kr + &h - &ir + &jr - int(1)) * falling(&(&lr + &h - &jr - int(3)), i);
    let den = factorial(i)
        * factorial(j)
        * (&kr + &h + &jr - int(1))
        * falling(&(&lr + &h - int(3)), i)
        * falling(&(&kr + &lr + &m - int(4)), i)
        * rising(&(&kr - &lr + int(2)), j);
    Ok(sign * num / nonzero(den, "beta")?)
}

/// Factor picked up by moving `S_u` past `C^n` onto `C^n S_u^t H_{k,l}`:
/// `S_u C^n S_u^t H = ((H_x+n+1)/(H_x+1)) C^n S_u^{t+1} H`, evaluated on the
/// image.
pub fn su_reorder_factor(dim: Dim, n: u32, t: u32, k: u32) -> Result<Rational> {
    // x-degree of C^n S_u^{t+1} H_{k,l}
    let x_degree = int(k as i64 + n as i64 - t as i64 - 1);
    let hx = -(x_degree + dim.half());
    let den = nonzero(&hx + int(1), "reorder")?;
    Ok((hx + int(n as i64 + 1)) / den)
}

/// The scalar by which the master projection at bidegree `(k, l)` acts on the
/// ladder cell `C^iS_u^j 𝓗_{k−i+j, l−i−j}`.
pub fn g_sum(dim: Dim, k: u32, l: u32, i: u32, j: u32) -> Result<Rational> {
    if k < l || i + j > l {
        return Err(Error::IndexOutOfRange(format!("cell ({i},{j}) does not occur at bidegree ({k},{l})")));
    }
    let (kp, lp) = (k + j - i, l - i - j);
    check_cell(kp, lp, j)?;
    let mut total = Rational::zero();
    for a in 0..=i {
        for b in 0..=j {
            let mut term = ladder_beta(dim, a, b, k, l)? * ladder_alpha(dim, i, j, a, b, kp, lp)?;
            // S_u^b C^{i−a} S_u^{j−b} H
            for t in 0..b {
                term *= su_reorder_factor(dim, i - a, j - b + t, kp)?;
            }
            total += term;
        }
    }
    Ok(total)
}
