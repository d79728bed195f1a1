//! Terminating generalised hypergeometric sums and exact checks of the
//! identities behind the master projection coefficients.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::coeff::{int, Rational};
use crate::error::{Error, Result};
use crate::poly::Dim;
use crate::simplicial::ladder::g_sum;
use crate::special::rising;

/// `pFq(a₁…a_p; b₁…b_q; z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PFQSpec {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub argument: Rational,
}

fn nonpositive_integer(r: &Rational) -> Option<u64> {
    if r.is_integer() && !r.is_positive() {
        Some((-r.to_integer()).try_into().unwrap_or(u64::MAX))
    } else {
        None
    }
}

impl PFQSpec {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, argument: Rational) -> Self {
        PFQSpec { upper, lower, argument }
    }

    /// `Σ b − Σ a`; the series is `k`-balanced when this equals `k`.
    pub fn balance(&self) -> Rational {
        self.lower.iter().sum::<Rational>() - self.upper.iter().sum::<Rational>()
    }

    pub fn is_balanced(&self, k: i64) -> bool {
        self.balance() == int(k)
    }

    /// Index of the last nonzero term when some upper parameter is a
    /// non-positive integer.
    pub fn termination_index(&self) -> Option<u64> {
        self.upper.iter().filter_map(nonpositive_integer).min()
    }
}

/// The finite sum `Σ_j ∏(a)^{(j)}/∏(b)^{(j)} z^j/j!`.
pub fn eval_pfq(spec: &PFQSpec) -> Result<Rational> {
    let n = match spec.termination_index() {
        Some(n) => n,
        None if spec.argument.is_zero() => 0,
        None => return Err(Error::NonTerminating),
    };
    for b in &spec.lower {
        if let Some(t) = nonpositive_integer(b) {
            if t < n {
                return Err(Error::LowerParameterPole(crate::coeff::fmt_rational(b)));
            }
        }
    }
    let mut total = Rational::zero();
    let mut term = Rational::one();
    for j in 0..=n {
        total += &term;
        if j == n {
            break;
        }
        let jr = int(j as i64);
        let num = spec.upper.iter().fold(Rational::one(), |acc, a| acc * (a + &jr));
        let den = spec.lower.iter().fold(Rational::one(), |acc, b| acc * (b + &jr));
        term = term * num * &spec.argument / (den * (&jr + int(1)));
    }
    Ok(total)
}

/// Rejects lower parameters `−t` with `t < len`: the identity is a rational
/// function identity and the truncated sum is not its limit there.
fn generic_poles(lower: &[&Rational], len: u32) -> Result<()> {
    for b in lower {
        if let Some(t) = nonpositive_integer(b) {
            if t < len as u64 {
                return Err(Error::LowerParameterPole(crate::coeff::fmt_rational(b)));
            }
        }
    }
    Ok(())
}

/// A `₄F₃` whose generic length is `len`.
fn f43(upper: [&Rational; 4], lower: [&Rational; 3], z: &Rational, len: u32) -> Result<Rational> {
    generic_poles(&lower, len)?;
    eval_pfq(&PFQSpec::new(upper.map(Clone::clone).to_vec(), lower.map(Clone::clone).to_vec(), z.clone()))
}

fn f32_minus_one(upper: [&Rational; 2], lower: [&Rational; 2], z: &Rational) -> Result<Rational> {
    generic_poles(&lower, 1)?;
    eval_pfq(&PFQSpec::new(vec![-Rational::one(), upper[0].clone(), upper[1].clone()], lower.map(Clone::clone).to_vec(), z.clone()))
}

/// `₄F₃(a,b,c,d; e−1,f,g; 1) = ₄F₃(a,b,c,d; e,f,g; 1)
///   + abcd/((e−1)efg) ₄F₃(a+1,b+1,c+1,d+1; e+1,f+1,g+1; 1)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_contiguous(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    e: &Rational,
    f: &Rational,
    g: &Rational,
) -> Result<bool> {
    let one = Rational::one();
    let em1 = e - &one;
    let len = nonpositive_integer(d).map_or(0, |t| t.min(u32::MAX as u64) as u32);
    let lhs = f43([a, b, c, d], [&em1, f, g], &one, len)?;
    let first = f43([a, b, c, d], [e, f, g], &one, len)?;
    let den = &em1 * e * f * g;
    if den.is_zero() {
        return Err(Error::LowerParameterPole("(e−1)efg".into()));
    }
    let coef = a * b * c * d / den;
    let shifted = if coef.is_zero() {
        Rational::zero()
    } else {
        let (a1, b1, c1, d1) = (a + &one, b + &one, c + &one, d + &one);
        let (e1, f1, g1) = (e + &one, f + &one, g + &one);
        f43([&a1, &b1, &c1, &d1], [&e1, &f1, &g1], &one, len.saturating_sub(1))?
    };
    Ok(lhs == first + coef * shifted)
}

/// `₄F₃(a,b,−z,−n; u,v,w; 1)
///   = (v+z)^{(n)}(w+z)^{(n)}/((v)^{(n)}(w)^{(n)}) ₄F₃(u−a,u−b,−z,−n; u,1−v−z−n,1−w−z−n; 1)`
/// for a 1-balanced left side.
#[allow(clippy::too_many_arguments)]
pub fn verify_whipple(
    a: &Rational,
    b: &Rational,
    z: &Rational,
    n: u32,
    u: &Rational,
    v: &Rational,
    w: &Rational,
) -> Result<bool> {
    let nr = int(n as i64);
    let one = Rational::one();
    if u + v + w != a + b - z - &nr + &one {
        return Err(Error::IndexOutOfRange("left side is not 1-balanced".into()));
    }
    let den = rising(v, n) * rising(w, n);
    if den.is_zero() {
        return Err(Error::GammaPole(format!("Γ(v)/Γ(v+n) or Γ(w)/Γ(w+n) at v = {v}, w = {w}")));
    }
    let prefactor = rising(&(v + z), n) * rising(&(w + z), n) / den;
    let (mz, mn) = (-z, -nr.clone());
    let lhs = f43([a, b, &mz, &mn], [u, v, w], &one, n)?;
    let (ua, ub) = (u - a, u - b);
    let lv = &one - v - z - &nr;
    let lw = &one - w - z - &nr;
    let rhs = f43([&ua, &ub, &mz, &mn], [u, &lv, &lw], &one, n)?;
    Ok(lhs == prefactor * rhs)
}

/// The product reduction of a 3-balanced ₄F₃:
///
/// `₃F₂(−1,a+c,b−c; a+n,b+n; z) ₄F₃(1−n,a+b+n+1,a+c,b−c; a+1,b+1,a+b+1; z)
///   − ₄F₃(−n,a+b+n,a+c,b−c; a+1,b+1,a+b+1; z)`
/// `= z(z−1)(1−n)(a+b+n+1)(a+c)(b−c)/((a+1)(b+1)(a+n)(b+n))
///   ₄F₃(2−n,a+b+n+2,a+c+1,b−c+1; a+2,b+2,a+b+1; z)`.
///
/// A vanishing prefactor makes the right side zero without evaluating the
/// series, which does not terminate at `n = 1`.
pub fn verify_product_reduction(a: &Rational, b: &Rational, c: &Rational, z: &Rational, n: u32) -> Result<bool> {
    let one = Rational::one();
    let nr = int(n as i64);
    let (ac, bc) = (a + c, b - c);
    let (a1, b1, ab1) = (a + &one, b + &one, a + b + &one);
    let f32 = f32_minus_one([&ac, &bc], [&(a + &nr), &(b + &nr)], z)?;
    let up1 = [&one - &nr, a + b + &nr + &one];
    let first = f43([&up1[0], &up1[1], &ac, &bc], [&a1, &b1, &ab1], z, n.saturating_sub(1))?;
    let up0 = [-nr.clone(), a + b + &nr];
    let second = f43([&up0[0], &up0[1], &ac, &bc], [&a1, &b1, &ab1], z, n)?;
    let lhs = f32 * first - second;
    let den = &a1 * &b1 * (a + &nr) * (b + &nr);
    if den.is_zero() {
        return Err(Error::LowerParameterPole("(a+1)(b+1)(a+n)(b+n)".into()));
    }
    let prefactor = z * (z - &one) * (&one - &nr) * (a + b + &nr + &one) * &ac * &bc / den;
    let rhs = if prefactor.is_zero() {
        Rational::zero()
    } else {
        let two = int(2);
        let up = [&two - &nr, a + b + &nr + &two, &ac + &one, &bc + &one];
        prefactor * f43([&up[0], &up[1], &up[2], &up[3]], [&(a + &two), &(b + &two), &ab1], z, n.saturating_sub(2))?
    };
    Ok(lhs == rhs)
}

/// The reduction at `z = 1`, together with the closed form
/// `₃F₂(−1,a+c,b−c; a+n,b+n; 1) = 1 − (a+c)(b−c)/((a+n)(b+n))`.
pub fn verify_product_reduction_at_one(a: &Rational, b: &Rational, c: &Rational, n: u32) -> Result<bool> {
    let one = Rational::one();
    let nr = int(n as i64);
    let (ac, bc) = (a + c, b - c);
    let (a1, b1, ab1) = (a + &one, b + &one, a + b + &one);
    let f32 = f32_minus_one([&ac, &bc], [&(a + &nr), &(b + &nr)], &one)?;
    let closed = &one - &ac * &bc / ((a + &nr) * (b + &nr));
    let up0 = [-nr.clone(), a + b + &nr];
    let lhs = f43([&up0[0], &up0[1], &ac, &bc], [&a1, &b1, &ab1], &one, n)?;
    let up1 = [&one - &nr, a + b + &nr + &one];
    let rhs = f32.clone() * f43([&up1[0], &up1[1], &ac, &bc], [&a1, &b1, &ab1], &one, n.saturating_sub(1))?;
    Ok(f32 == closed && lhs == rhs)
}

/// `G(k,l) = 0`: `Π` at bidegree `(k,l)` kills the cell `C^iS_u^j 𝓗_{k−i+j, l−i−j}`.
pub fn verify_g_vanishes(k: u32, l: u32, i: u32, j: u32, dim: Dim) -> Result<bool> {
    dim.require_transvector()?;
    if i + j == 0 {
        return Err(Error::IndexOutOfRange("G is only claimed to vanish for i + j > 0".into()));
    }
    Ok(g_sum(dim, k, l, i, j)?.is_zero())
}

/// One exact identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub parameters: Vec<Rational>,
    pub passed: bool,
}

/// `G` over every `(k,l) ≤ max`, `1 ≤ i+j ≤ max_ij` whose cell occurs.
pub fn verify_g_grid(dim: Dim, max: (u32, u32), max_ij: u32) -> Result<Vec<IdentityCheck>> {
    let mut jobs = Vec::new();
    for k in 0..=max.0 {
        for l in 0..=k.min(max.1) {
            for i in 0..=max_ij {
                for j in 0..=(max_ij - i) {
                    if i + j == 0 || i + j > l {
                        continue;
                    }
                    let (kp, lp) = (k + j - i, l - i - j);
                    if k + j < i || kp < lp || j > kp - lp {
                        continue;
                    }
                    jobs.push((k, l, i, j));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|&(k, l, i, j)| {
            let passed = verify_g_vanishes(k, l, i, j, dim)?;
            let parameters = [dim.get() as u32, k, l, i, j].iter().map(|&v| int(v as i64)).collect();
            Ok(IdentityCheck { identity: "G vanishing", parameters, passed })
        })
        .collect()
}

/// A rational `p/q` with `|p| ≤ 40`, `2 ≤ q ≤ 9`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(rng.random_range(-40i64..=40).into(), rng.random_range(2i64..=9).into())
}

fn is_pole(e: &Error) -> bool {
    matches!(e, Error::LowerParameterPole(_) | Error::GammaPole(_) | Error::NonTerminating)
}

/// Runs `check` on fresh parameter draws until `draws` of them avoid poles.
fn sampled<R, F>(rng: &mut R, draws: usize, arity: usize, identity: &'static str, mut check: F) -> Result<Vec<IdentityCheck>>
where
    R: Rng + ?Sized,
    F: FnMut(&[Rational]) -> Result<bool>,
{
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < draws {
        attempts += 1;
        if attempts > 100 * draws {
            return Err(Error::IndexOutOfRange(format!("{identity}: too many parameter draws hit poles")));
        }
        let params: Vec<Rational> = (0..arity).map(|_| random_rational(rng)).collect();
        match check(&params) {
            Ok(passed) => out.push(IdentityCheck { identity, parameters: params, passed }),
            Err(e) if is_pole(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Contiguous relation, Whipple's transformation and the product reduction
/// (general `z` and `z = 1`) on `draws` random parameter sets each, for every
/// `n ∈ {1, 2, 3}`.
pub fn verify_hypergeometric_identities<R: Rng + ?Sized>(rng: &mut R, draws: usize) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for n in 1..=3u32 {
        let nr = int(n as i64);
        out.extend(sampled(rng, draws, 6, "contiguous", |p| {
            verify_contiguous(&p[0], &p[1], &p[2], &-nr.clone(), &p[3], &p[4], &p[5])
        })?);
        out.extend(sampled(rng, draws, 5, "Whipple", |p| {
            let w = &p[0] + &p[1] - &p[2] - &nr + int(1) - &p[3] - &p[4];
            verify_whipple(&p[0], &p[1], &p[2], n, &p[3], &p[4], &w)
        })?);
        out.extend(sampled(rng, draws, 4, "product reduction", |p| verify_product_reduction(&p[0], &p[1], &p[2], &p[3], n))?);
        out.extend(sampled(rng, draws, 3, "product reduction at 1", |p| {
            verify_product_reduction_at_one(&p[0], &p[1], &p[2], n)
        })?);
    }
    Ok(out)
}
