//! Integration over the Stiefel manifold `V₂(ℝ^m)` and the sphere by
//! finite sums of invariant operators at the origin, plus a Monte Carlo
//! oracle for the Stiefel integral.

use std::fmt;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::coeff::{int, rat, GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::fischer::double_fischer;
use crate::operator::{apply_power, OperatorAtom};
use crate::poly::{Dim, Polynomial};
use crate::special::{factorial, rising};
use crate::transvector::GeneratorTag;

/// Coefficients `[c₀, c₁, …, c_β]` of the Gegenbauer polynomial `C_β^λ(t)`.
pub fn gegenbauer(beta: u32, lambda: &Rational) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); beta as usize + 1];
    for j in 0..=beta / 2 {
        let n = beta - 2 * j;
        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        coeffs[n as usize] = sign * rising(lambda, beta - j) * int(2).pow(n as i32) / (factorial(j) * factorial(n));
    }
    coeffs
}

/// `C^β[1]` from the zonal closed form
/// `β!/(2^β (λ)^{(β)}) |x|^β|u|^β C_β^λ(⟨u,x⟩/(|x||u|))`, `λ = m/2 − 1`.
pub fn c_power_one(beta: u32, dim: Dim) -> Result<Polynomial> {
    dim.require_transvector()?;
    let lambda = dim.half() - int(1);
    let scale = factorial(beta) / (int(2).pow(beta as i32) * rising(&lambda, beta));
    let coeffs = gegenbauer(beta, &lambda);
    let c = Polynomial::inner_ux(dim);
    let r = &Polynomial::norm_sq_x(dim) * &Polynomial::norm_sq_u(dim);
    let mut out = Polynomial::zero(dim);
    for j in 0..=beta / 2 {
        let n = beta - 2 * j;
        let term = &c.pow(n) * &r.pow(j);
        out = &out + &term.scale_rational(&(&coeffs[n as usize] * &scale));
    }
    Ok(out)
}

/// `A^n C^n [1] = ∏_{i=1}^n c_i(0,0) = n! ((n+λ)/λ) (m−2)^{(n)}`, `λ = m/2 − 1`.
pub fn a_c_power_constant(n: u32, dim: Dim) -> Rational {
    let lambda = dim.half() - int(1);
    factorial(n) * (int(n as i64) + &lambda) / &lambda * rising(&int(dim.get() as i64 - 2), n)
}

/// Weight of `A^{2i}` applied to the `(2i, 2i)` double harmonic parts:
/// `(−1)^i / (4^{2i} i! (m/2)^{(2i)} ((m−1)/2)^{(i)})`.
pub fn gamma_constant(i: u32, dim: Dim) -> Result<Rational> {
    dim.require_transvector()?;
    let sign = if i.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let den = int(16).pow(i as i32)
        * factorial(i)
        * rising(&dim.half(), 2 * i)
        * rising(&rat(dim.get() as i64 - 1, 2), i);
    Ok(sign / den)
}

/// Exact Stiefel integral against the normalised invariant measure.
pub fn stiefel_value(p: &Polynomial) -> Result<GaussianRational> {
    let dim = p.dim();
    dim.require_transvector()?;
    let mut total = GaussianRational::zero();
    for ((k, l), part) in p.bidegree_split() {
        if k % 2 == 1 || l % 2 == 1 {
            continue;
        }
        for f in double_fischer(&part)? {
            let (hk, hl) = (k - 2 * f.i, l - 2 * f.j);
            if hk != hl {
                continue;
            }
            let i = hk / 2;
            let lowered = apply_power(OperatorAtom::CrossDD, &f.part, 2 * i);
            let c = lowered.constant_term();
            if !c.is_zero() {
                total += &c.scale(&gamma_constant(i, dim)?);
            }
        }
    }
    Ok(total)
}

/// Pizzetti value with an optional Monte Carlo cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureReport {
    pub pizzetti_value: GaussianRational,
    pub monte_carlo: Option<MonteCarloEstimate>,
}

/// `𝓘₂(p)`, and the sampling estimate when `mc` is given.
pub fn stiefel_integrate(p: &Polynomial, mc: Option<&MonteCarloOptions>) -> Result<QuadratureReport> {
    let pizzetti_value = stiefel_value(p)?;
    let monte_carlo = match mc {
        Some(opts) => Some(stiefel_monte_carlo_batch(std::slice::from_ref(p), opts)?.remove(0)),
        None => None,
    };
    Ok(QuadratureReport { pizzetti_value, monte_carlo })
}

/// An exact sphere integral `coeff · π^{pi_power}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereValue {
    pub coeff: GaussianRational,
    pub pi_power: u32,
}

impl fmt::Display for SphereValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() || self.pi_power == 0 {
            return write!(f, "{}", self.coeff);
        }
        let pi = if self.pi_power == 1 { "pi".to_string() } else { format!("pi^{}", self.pi_power) };
        if self.coeff.is_real() {
            write!(f, "{} * {}", self.coeff, pi)
        } else {
            write!(f, "({}) * {}", self.coeff, pi)
        }
    }
}

/// `2π^{m/2}/Γ(k+m/2)` as `coeff · π^{⌊m/2⌋}`.
fn sphere_weight(k: u32, m: usize) -> Rational {
    let half = m as u32 / 2;
    if m.is_multiple_of(2) {
        int(2) / factorial(k + half - 1)
    } else {
        // Γ(n + 1/2) = √π (1/2)^{(n)}
        int(2) / rising(&rat(1, 2), k + half)
    }
}

fn sphere_sum<F>(p: &Polynomial, mut laplace_power_at_zero: F) -> Result<SphereValue>
where
    F: FnMut(&Polynomial, u32) -> GaussianRational,
{
    if !p.is_x_only() {
        return Err(Error::NotXOnly);
    }
    let m = p.m();
    let mut coeff = GaussianRational::zero();
    for ((deg, _), part) in p.bidegree_split() {
        if deg % 2 == 1 {
            continue;
        }
        let k = deg / 2;
        let v = laplace_power_at_zero(&part, k);
        let w = sphere_weight(k, m) / (int(4).pow(k as i32) * factorial(k));
        coeff += &v.scale(&w);
    }
    Ok(SphereValue { coeff, pi_power: m as u32 / 2 })
}

/// Surface integral over `S^{m−1}`, `Σ_k 2π^{m/2}/(4^k k! Γ(k+m/2)) Δ^k p|₀`.
/// For odd `m` the `√π` cancels and the unit is `π^{(m−1)/2}`.
pub fn sphere_integrate(p: &Polynomial) -> Result<SphereValue> {
    sphere_sum(p, |part, k| apply_power(OperatorAtom::LaplacianX, part, k).constant_term())
}

/// The same sum with `Δ^k x^{2β}|₀ = k! ∏ (2β_j)!/β_j!` read off monomial by
/// monomial.
pub fn sphere_integrate_by_monomials(p: &Polynomial) -> Result<SphereValue> {
    sphere_sum(p, |part, k| {
        let mut acc = GaussianRational::zero();
        for (mono, c) in part.terms() {
            let xe = mono.xexp();
            if xe.iter().any(|e| e % 2 == 1) {
                continue;
            }
            let w = xe.iter().fold(factorial(k), |w, &e| w * factorial(e as u32) / factorial(e as u32 / 2));
            acc += &c.scale(&w);
        }
        acc
    })
}

/// Settings for the sampling oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonteCarloOptions {
    pub samples: u64,
    pub seed: u64,
    /// Average each sample over signed coordinate permutations and the
    /// right `O(2)` action before accumulating.
    pub symmetrize: bool,
    pub parallel: bool,
}

impl MonteCarloOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        MonteCarloOptions { samples, seed, symmetrize: false, parallel: true }
    }
}

/// Sample mean and standard error of the real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub estimate_im: f64,
    pub stderr_im: f64,
    pub samples: u64,
}

const CHUNK: u64 = 8192;

/// A Haar-distributed orthonormal pair by Gram–Schmidt on two Gaussian vectors.
pub fn sample_frame<R: rand::Rng + ?Sized>(m: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    loop {
        let a: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).collect();
        let b: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).collect();
        let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if na < 1e-12 {
            continue;
        }
        let w: Vec<f64> = a.iter().map(|v| v / na).collect();
        let proj: f64 = w.iter().zip(&b).map(|(x, y)| x * y).sum();
        let c: Vec<f64> = b.iter().zip(&w).map(|(y, x)| y - proj * x).collect();
        let nc = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nc < 1e-12 {
            continue;
        }
        let e = c.iter().map(|v| v / nc).collect();
        return (w, e);
    }
}

/// A term prepared for orbit-averaged evaluation: the mean over injective
/// coordinate maps, expanded by Möbius inversion over set partitions of the
/// support into products of power sums `M[a][b] = Σ_c ω_c^a η_c^b`.
struct OrbitTerm {
    coeff: (f64, f64),
    /// `(μ(π)/#maps, blocks (a_B, b_B))` per set partition `π`.
    partitions: Vec<(f64, Vec<(usize, usize)>)>,
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mut p in set_partitions(n - 1) {
        for b in 0..p.len() {
            let mut q = p.clone();
            q[b].push(n - 1);
            out.push(q);
        }
        p.push(vec![n - 1]);
        out.push(p);
    }
    out
}

fn orbit_terms(p: &Polynomial) -> Vec<OrbitTerm> {
    let m = p.m();
    let mut out = Vec::new();
    for (mono, c) in p.terms() {
        let support: Vec<(usize, usize)> = mono
            .xexp()
            .iter()
            .zip(mono.uexp())
            .filter(|(a, b)| **a + **b > 0)
            .map(|(&a, &b)| (a as usize, b as usize))
            .collect();
        let u_total: usize = support.iter().map(|s| s.1).sum();
        if support.iter().any(|(a, b)| (a + b) % 2 == 1) || u_total % 2 == 1 {
            continue;
        }
        let maps: f64 = (0..support.len()).map(|t| (m - t) as f64).product();
        let partitions = set_partitions(support.len())
            .into_iter()
            .map(|blocks| {
                let mu: f64 = blocks
                    .iter()
                    .map(|b| {
                        let f: f64 = (1..b.len()).map(|t| t as f64).product();
                        if b.len() % 2 == 0 { -f } else { f }
                    })
                    .product();
                let sums = blocks
                    .iter()
                    .map(|b| b.iter().fold((0, 0), |(x, y), &j| (x + support[j].0, y + support[j].1)))
                    .collect();
                (mu / maps, sums)
            })
            .collect();
        out.push(OrbitTerm { coeff: c.to_f64_pair(), partitions });
    }
    out
}

/// `M[a][b] = Σ_c ω_c^a η_c^b` for `a, b ≤ d`.
fn moment_table(w: &[f64], e: &[f64], d: usize) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0; d + 1]; d + 1];
    for (wc, ec) in w.iter().zip(e) {
        let mut wa = 1.0;
        for row in table.iter_mut() {
            let mut eb = 1.0;
            for cell in row.iter_mut() {
                *cell += wa * eb;
                eb *= ec;
            }
            wa *= wc;
        }
    }
    table
}

fn orbit_value(terms: &[OrbitTerm], table: &[Vec<f64>]) -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    for t in terms {
        let mut v = 0.0;
        for (weight, blocks) in &t.partitions {
            let direct: f64 = blocks.iter().map(|&(a, b)| table[a][b]).product();
            let swapped: f64 = blocks.iter().map(|&(a, b)| table[b][a]).product();
            v += weight * 0.5 * (direct + swapped);
        }
        re += t.coeff.0 * v;
        im += t.coeff.1 * v;
    }
    (re, im)
}

#[derive(Clone, Copy, Default)]
struct Moments {
    re: f64,
    re2: f64,
    im: f64,
    im2: f64,
}

fn run_chunk(polys: &[Polynomial], orbits: &[Vec<OrbitTerm>], opts: &MonteCarloOptions, chunk: u64) -> Vec<Moments> {
    let m = polys[0].m();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(chunk);
    let n = CHUNK.min(opts.samples - chunk * CHUNK);
    let degree = polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0) as usize;
    let mut acc = vec![Moments::default(); polys.len()];
    for _ in 0..n {
        let (w, e) = sample_frame(m, &mut rng);
        let table = if opts.symmetrize { moment_table(&w, &e, degree) } else { vec![] };
        for (idx, slot) in acc.iter_mut().enumerate() {
            let (re, im) = if opts.symmetrize { orbit_value(&orbits[idx], &table) } else { polys[idx].eval_f64(&w, &e) };
            slot.re += re;
            slot.re2 += re * re;
            slot.im += im;
            slot.im2 += im * im;
        }
    }
    acc
}

fn mean_and_stderr(sum: f64, sum2: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = ((sum2 - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Estimates `𝓘₂` of every polynomial on one shared stream of frames.
///
/// Chunk `c` of the samples draws from the ChaCha stream `c` of `seed`, and
/// chunk sums are combined in chunk order, so the parallel and sequential
/// runs agree bit for bit.
pub fn stiefel_monte_carlo_batch(polys: &[Polynomial], opts: &MonteCarloOptions) -> Result<Vec<MonteCarloEstimate>> {
    if opts.samples == 0 {
        return Err(Error::IndexOutOfRange("Monte Carlo needs at least one sample".into()));
    }
    let Some(first) = polys.first() else {
        return Ok(vec![]);
    };
    for p in polys {
        if p.dim() != first.dim() {
            return Err(Error::DimensionMismatch { left: first.m(), right: p.m() });
        }
    }
    let orbits: Vec<Vec<OrbitTerm>> = if opts.symmetrize { polys.iter().map(orbit_terms).collect() } else { vec![] };
    let chunks = opts.samples.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<Moments>> = if opts.parallel {
        (0..chunks).into_par_iter().map(|c| run_chunk(polys, &orbits, opts, c)).collect()
    } else {
        (0..chunks).map(|c| run_chunk(polys, &orbits, opts, c)).collect()
    };
    let mut total = vec![Moments::default(); polys.len()];
    for chunk in per_chunk {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.re += c.re;
            t.re2 += c.re2;
            t.im += c.im;
            t.im2 += c.im2;
        }
    }
    Ok(total
        .into_iter()
        .map(|t| {
            let (estimate, stderr) = mean_and_stderr(t.re, t.re2, opts.samples);
            let (estimate_im, stderr_im) = mean_and_stderr(t.im, t.im2, opts.samples);
            MonteCarloEstimate { estimate, stderr, estimate_im, stderr_im, samples: opts.samples }
        })
        .collect())
}

/// Averages `p(ω, η)` over `samples` Haar frames drawn from `seed`.
pub fn stiefel_monte_carlo(p: &Polynomial, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    Ok(stiefel_monte_carlo_batch(std::slice::from_ref(p), &MonteCarloOptions::new(samples, seed))?.remove(0))
}

/// `C^β[1]` by iterating the generator `C` on the constant `1`.
pub fn c_power_one_iterated(beta: u32, dim: Dim) -> Result<Polynomial> {
    dim.require_transvector()?;
    let c = GeneratorTag::C.operator(dim);
    let mut p = Polynomial::one(dim);
    for _ in 0..beta {
        p = c.apply(&p)?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;

    fn d(m: usize) -> Dim {
        Dim::new(m).unwrap()
    }

    #[test]
    fn gegenbauer_small() {
        let l = rat(3, 2);
        assert_eq!(gegenbauer(0, &l), vec![int(1)]);
        assert_eq!(gegenbauer(1, &l), vec![int(0), int(3)]);
        // 2λ(λ+1)t² − λ
        assert_eq!(gegenbauer(2, &l), vec![rat(-3, 2), int(0), rat(15, 2)]);
    }

    #[test]
    fn c_power_one_matches_iteration() {
        for m in [5, 6] {
            for beta in 0..=4 {
                let closed = c_power_one(beta, d(m)).unwrap();
                assert_eq!(closed, c_power_one_iterated(beta, d(m)).unwrap(), "m={m} beta={beta}");
                if beta % 2 == 1 {
                    assert!(closed.constant_term().is_zero());
                }
            }
        }
        assert_eq!(c_power_one(1, d(7)).unwrap(), Polynomial::inner_ux(d(7)));
    }

    #[test]
    fn a_c_constant_is_product_of_ladder_c() {
        use crate::simplicial::ladder::ladder_c;
        assert_eq!(a_c_power_constant(0, d(6)), int(1));
        assert_eq!(a_c_power_constant(1, d(6)), int(6));
        for m in [5, 6, 7] {
            let mut prod = int(1);
            for n in 1..=6 {
                prod *= ladder_c(d(m), n, 0, 0).unwrap();
                assert_eq!(a_c_power_constant(n, d(m)), prod);
            }
        }
    }

    #[test]
    fn a_c_constant_by_operators() {
        let dim = d(5);
        let c2 = c_power_one(2, dim).unwrap();
        let lowered = apply_power(OperatorAtom::CrossDD, &c2, 2);
        assert_eq!(lowered, Polynomial::one(dim).scale_rational(&a_c_power_constant(2, dim)));
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_constant(0, d(5)).unwrap(), int(1));
        assert_eq!(gamma_constant(1, d(6)).unwrap(), rat(-1, 480));
        for i in 0..5 {
            let g = gamma_constant(i, d(7)).unwrap();
            assert_eq!(g < int(0), i % 2 == 1);
        }
    }

    #[test]
    fn gamma_is_constant_term_over_ladder_product() {
        for m in [5, 6, 8] {
            for i in 0..4 {
                // coefficient of (|x|²|u|²)^i in C^{2i}[1], the value on the frame
                let lambda = d(m).half() - int(1);
                let c = factorial(2 * i) / (int(4).pow(i as i32) * rising(&lambda, 2 * i)) * &gegenbauer(2 * i, &lambda)[0];
                let expected = c / a_c_power_constant(2 * i, d(m));
                assert_eq!(gamma_constant(i, d(m)).unwrap(), expected);
            }
        }
    }

    #[test]
    fn printed_gamma_breaks_invariance() {
        // (−1)^i/(4^{2i} i! (m/2)^{(2i−1)} (m/2+i−1)^{(i+1)}) at i = 1
        let dim = d(6);
        let printed = -int(1) / (int(16) * dim.half() * rising(&dim.half(), 2));
        assert_eq!(printed, rat(-1, 576));
        // ⟨u,x⟩² = C²[1] + |x|²|u|²/m, and ⟨u,x⟩ vanishes on the frame
        let c2 = c_power_one(2, dim).unwrap();
        let a2 = a_c_power_constant(2, dim);
        let with_printed = &printed * &a2 + rat(1, 6);
        assert_ne!(with_printed, int(0));
        assert_eq!(stiefel_value(&Polynomial::inner_ux(dim).pow(2)).unwrap(), GaussianRational::zero());
        assert_eq!(&c2 + &(&Polynomial::norm_sq_x(dim) * &Polynomial::norm_sq_u(dim)).scale_rational(&rat(1, 6)), Polynomial::inner_ux(dim).pow(2));
    }

    #[test]
    fn stiefel_examples() {
        let dim = d(5);
        let g = |p: &Polynomial| stiefel_value(p).unwrap();
        assert_eq!(g(&Polynomial::one(dim)), GaussianRational::one());
        assert_eq!(g(&Polynomial::x(dim, 0).pow(2)), GaussianRational::from_rational(rat(1, 5)));
        assert!(g(&(&Polynomial::x(dim, 0) * &Polynomial::u(dim, 0))).is_zero());
        // E[ω₁²η₁²] = 1/(m(m+2))
        let p = &Polynomial::x(dim, 0).pow(2) * &Polynomial::u(dim, 0).pow(2);
        assert_eq!(g(&p), GaussianRational::from_rational(rat(1, 35)));
        // E[ω₁⁴] = 3/(m(m+2))
        assert_eq!(g(&Polynomial::x(dim, 0).pow(4)), GaussianRational::from_rational(rat(3, 35)));
        let sum: GaussianRational = (0..5).map(|j| g(&Polynomial::x(dim, j).pow(2))).fold(GaussianRational::zero(), |a, b| &a + &b);
        assert_eq!(sum, GaussianRational::one());
    }

    #[test]
    fn stiefel_rotation_invariance() {
        let dim = d(5);
        let mut p = &Polynomial::x(dim, 0).pow(3) * &Polynomial::u(dim, 1);
        p = &p + &(&Polynomial::x(dim, 1).pow(2) * &Polynomial::u(dim, 1).pow(2));
        p = &p + &Polynomial::var(dim, Var::X(2)).pow(2).scale(&GaussianRational::i());
        let g = Polynomial::givens_345(dim, 1, 2);
        assert_eq!(stiefel_value(&p.linear_substitute(&g)).unwrap(), stiefel_value(&p).unwrap());
    }

    #[test]
    fn sphere_examples() {
        let one = Polynomial::one(Dim::classical(4).unwrap());
        let v = sphere_integrate(&one).unwrap();
        assert_eq!(v, SphereValue { coeff: GaussianRational::from_integer(2), pi_power: 2 });
        assert_eq!(v.to_string(), "2 * pi^2");
        let dim = Dim::classical(3).unwrap();
        // area of S² is 4π
        assert_eq!(sphere_integrate(&Polynomial::one(dim)).unwrap().to_string(), "4 * pi");
        assert!(sphere_integrate(&Polynomial::x(dim, 0)).unwrap().coeff.is_zero());
        assert_eq!(sphere_integrate(&Polynomial::norm_sq_x(dim)).unwrap(), sphere_integrate(&Polynomial::one(dim)).unwrap());
        assert_eq!(sphere_integrate(&Polynomial::u(d(5), 0)), Err(Error::NotXOnly));
    }

    #[test]
    fn sphere_moments_two_orders() {
        for m in 1..8 {
            let dim = Dim::classical(m).unwrap();
            let area = sphere_integrate(&Polynomial::one(dim)).unwrap().coeff;
            for k in 0..5 {
                let p = Polynomial::x(dim, 0).pow(2 * k);
                let a = sphere_integrate(&p).unwrap();
                assert_eq!(a, sphere_integrate_by_monomials(&p).unwrap());
                // (1/2)^{(k)} / (m/2)^{(k)}
                let moment = rising(&rat(1, 2), k) / rising(&dim.half(), k);
                assert_eq!(a.coeff, area.scale(&moment));
            }
        }
    }

    #[test]
    fn monte_carlo_basic() {
        let dim = d(5);
        let one = stiefel_monte_carlo(&Polynomial::one(dim), 1000, 3).unwrap();
        assert_eq!((one.estimate, one.stderr), (1.0, 0.0));
        let c = stiefel_monte_carlo(&Polynomial::inner_ux(dim), 1000, 3).unwrap();
        assert!(c.estimate.abs() < 1e-12);
        let x2 = stiefel_monte_carlo(&Polynomial::x(dim, 0).pow(2), 20_000, 3).unwrap();
        assert!((x2.estimate - 0.2).abs() <= 3.0 * x2.stderr);
    }

    #[test]
    fn monte_carlo_parallel_matches_sequential() {
        let dim = d(6);
        let p = &Polynomial::x(dim, 0).pow(2) * &Polynomial::u(dim, 1).pow(2);
        for symmetrize in [false, true] {
            let mut opts = MonteCarloOptions { samples: 3 * CHUNK + 17, seed: 11, symmetrize, parallel: true };
            let a = stiefel_monte_carlo_batch(std::slice::from_ref(&p), &opts).unwrap();
            opts.parallel = false;
            let b = stiefel_monte_carlo_batch(std::slice::from_ref(&p), &opts).unwrap();
            assert_eq!(a, b);
        }
    }

    fn brute_orbit_mean(p: &Polynomial, w: &[f64], e: &[f64]) -> f64 {
        // signed permutations and the swap, enumerated
        let m = w.len();
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..m {
            let mut next = Vec::new();
            for p in &perms {
                for c in (0..m).filter(|c| !p.contains(c)) {
                    next.push([p.clone(), vec![c]].concat());
                }
            }
            perms = next;
        }
        let (mut total, mut count) = (0.0, 0.0);
        for perm in &perms {
            for signs in 0..(1u32 << m) {
                for eta_sign in [1.0, -1.0] {
                    for swap in [false, true] {
                        let s = |c: usize| if signs >> c & 1 == 1 { -1.0 } else { 1.0 };
                        let x: Vec<f64> = (0..m).map(|c| s(c) * w[perm[c]]).collect();
                        let u: Vec<f64> = (0..m).map(|c| eta_sign * s(c) * e[perm[c]]).collect();
                        let (x, u) = if swap { (u, x) } else { (x, u) };
                        total += p.eval_f64(&x, &u).0;
                        count += 1.0;
                    }
                }
            }
        }
        total / count
    }

    #[test]
    fn orbit_expansion_matches_enumeration() {
        let dim = d(5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (w, e) = sample_frame(5, &mut rng);
        let x = |j| Polynomial::x(dim, j);
        let u = |j| Polynomial::u(dim, j);
        let polys = [
            &x(0).pow(2) * &u(1).pow(2),
            &(&x(0).pow(2) * &x(1).pow(2)) * &u(2).pow(2),
            &(&x(0) * &u(0)) * &(&x(1) * &u(1)),
            &x(0).pow(3) * &u(0).pow(3),
            x(0).pow(4),
        ];
        for p in &polys {
            let table = moment_table(&w, &e, 6);
            let fast = orbit_value(&orbit_terms(p), &table).0;
            assert!((fast - brute_orbit_mean(p, &w, &e)).abs() < 1e-12, "{p}");
        }
    }

    #[test]
    fn symmetrized_estimates() {
        let dim = d(5);
        let opts = MonteCarloOptions { samples: 20_000, seed: 5, symmetrize: true, parallel: true };
        let polys = vec![
            Polynomial::x(dim, 0).pow(2),
            &Polynomial::x(dim, 0) * &Polynomial::u(dim, 1),
            &Polynomial::x(dim, 0).pow(2) * &Polynomial::u(dim, 1).pow(2),
        ];
        let est = stiefel_monte_carlo_batch(&polys, &opts).unwrap();
        assert!((est[0].estimate - 0.2).abs() < 1e-12);
        assert_eq!(est[1].estimate, 0.0);
        // (m+1)/(m(m+2)(m−1))
        let exact = 3.0 / 70.0;
        let exact_value = stiefel_value(&polys[2]).unwrap().to_f64_pair().0;
        assert!((exact - exact_value).abs() < 1e-15);
        assert!((est[2].estimate - exact_value).abs() <= 3.0 * est[2].stderr + 1e-12);
    }
}
