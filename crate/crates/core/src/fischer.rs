//! Fischer decompositions and the Fischer inner product.

use num_traits::{One, Zero};

use crate::coeff::{int, GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::operator::{apply_power, OperatorAtom};
use crate::poly::{Dim, Polynomial};
use crate::special::{factorial, rising};
use crate::transvector::{
    extremal_projection_s, extremal_projection_x, extremal_projection_u, is_double_harmonic, GeneratorTag,
};

/// Which vector variable a one-variable Fischer projection acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    U,
}

/// `|x|^{2s}` times the harmonic piece of `p` in its x-Fischer decomposition
/// (or the same for `u`).
pub fn sphere_fischer_project(p: &Polynomial, s: u32, side: Side) -> Result<Polynomial> {
    let (k, l) = p.bidegree().ok_or(Error::NotBihomogeneous)?;
    let e = match side {
        Side::X => k,
        Side::U => l,
    };
    if p.is_zero() || e < 2 * s {
        return Ok(Polynomial::zero(p.dim()));
    }
    let (lap, norm) = match side {
        Side::X => (OperatorAtom::LaplacianX, OperatorAtom::NormSqX),
        Side::U => (OperatorAtom::LaplacianU, OperatorAtom::NormSqU),
    };
    // Γ(e+m/2−2s)/Γ(e+m/2−s) = 1/(e+m/2−2s)^{(s)}
    let base = int(e as i64 - 2 * s as i64) + p.dim().half();
    let denominator = int(4).pow(s as i32) * factorial(s) * rising(&base, s);
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator(k, l));
    }
    let reduced = apply_power(lap, p, s);
    let harmonic = match side {
        Side::X => extremal_projection_x(&reduced),
        Side::U => extremal_projection_u(&reduced),
    };
    Ok(apply_power(norm, &harmonic, s).scale_rational(&(Rational::one() / denominator)))
}

/// `|x|^{2i}|u|^{2j}·part` in the double Fischer decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleFischerComponent {
    pub i: u32,
    pub j: u32,
    /// Double harmonic of bidegree `(k − 2i, l − 2j)`.
    pub part: Polynomial,
}

impl DoubleFischerComponent {
    /// `|x|^{2i}|u|^{2j}·part`.
    pub fn embedded(&self) -> Polynomial {
        let p = apply_power(OperatorAtom::NormSqX, &self.part, self.i);
        apply_power(OperatorAtom::NormSqU, &p, self.j)
    }
}

/// The nonzero components of the decomposition
/// `p = Σ |x|^{2i}|u|^{2j} H_{k−2i, l−2j}` into double harmonics.
pub fn double_fischer(p: &Polynomial) -> Result<Vec<DoubleFischerComponent>> {
    let (k, l) = p.bidegree().ok_or(Error::NotBihomogeneous)?;
    let half = p.dim().half();
    let mut out = Vec::new();
    if p.is_zero() {
        return Ok(out);
    }
    for i in 0..=k / 2 {
        let px = apply_power(OperatorAtom::LaplacianX, p, i);
        if px.is_zero() {
            break;
        }
        for j in 0..=l / 2 {
            let pxu = apply_power(OperatorAtom::LaplacianU, &px, j);
            if pxu.is_zero() {
                break;
            }
            let (ik, il) = (k - 2 * i, l - 2 * j);
            let ax = int(ik as i64) + &half;
            let au = int(il as i64) + &half;
            let denominator = int(4).pow((i + j) as i32)
                * factorial(i)
                * factorial(j)
                * rising(&ax, i)
                * rising(&au, j);
            let part = extremal_projection_s(&pxu).scale_rational(&(Rational::one() / denominator));
            if !part.is_zero() {
                out.push(DoubleFischerComponent { i, j, part });
            }
        }
    }
    Ok(out)
}

/// `⟨p, q⟩ = conj(p)(∂_x, ∂_u) q |_{x=u=0} = Σ_α conj(p_α) q_α α!`.
pub fn fischer_inner_product(p: &Polynomial, q: &Polynomial) -> Result<GaussianRational> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.m(), right: q.m() });
    }
    let (small, large, flip) = if p.len() <= q.len() { (p, q, false) } else { (q, p, true) };
    let mut acc = GaussianRational::zero();
    for (mono, a) in small.terms() {
        let b = large.coeff(mono);
        if b.is_zero() {
            continue;
        }
        let weight = mono.exps().iter().fold(Rational::one(), |w, &e| w * factorial(e as u32));
        let (cp, cq) = if flip { (&b, a) } else { (a, &b) };
        acc += &(&cp.conj() * cq).scale(&weight);
    }
    Ok(acc)
}

/// One adjointness identity and the pairs it failed on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointReport {
    pub identity: &'static str,
    pub checked: usize,
    pub failures: Vec<(usize, usize)>,
}

impl AdjointReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `⟨Cp,q⟩ = ⟨p,Aq⟩`, `⟨S_u p,q⟩ = ⟨p,S_x q⟩` on double-harmonic
/// samples and `⟨π_s p,q⟩ = ⟨p,π_s q⟩` on all samples, over all ordered pairs.
pub fn verify_adjoints(samples: &[Polynomial]) -> Result<Vec<AdjointReport>> {
    let mut reports = vec![
        AdjointReport { identity: "<Cp,q> = <p,Aq>", checked: 0, failures: vec![] },
        AdjointReport { identity: "<S_u p,q> = <p,S_x q>", checked: 0, failures: vec![] },
        AdjointReport { identity: "<pi_s p,q> = <p,pi_s q>", checked: 0, failures: vec![] },
    ];
    let Some(first) = samples.first() else { return Ok(reports) };
    let dim: Dim = first.dim();
    let harmonic: Vec<bool> = samples.iter().map(is_double_harmonic).collect();
    let gens = if dim.get() > 4 {
        Some([GeneratorTag::C, GeneratorTag::A, GeneratorTag::Su, GeneratorTag::Sx].map(|g| g.operator(dim)))
    } else {
        None
    };
    let projected: Vec<Polynomial> = samples.iter().map(extremal_projection_s).collect();
    for (a, p) in samples.iter().enumerate() {
        for (b, q) in samples.iter().enumerate() {
            if let (Some([c, aa, su, sx]), true, true) = (&gens, harmonic[a], harmonic[b]) {
                let lhs = fischer_inner_product(&c.apply(p)?, q)?;
                let rhs = fischer_inner_product(p, &aa.apply(q)?)?;
                reports[0].checked += 1;
                if lhs != rhs {
                    reports[0].failures.push((a, b));
                }
                let lhs = fischer_inner_product(&su.apply(p)?, q)?;
                let rhs = fischer_inner_product(p, &sx.apply(q)?)?;
                reports[1].checked += 1;
                if lhs != rhs {
                    reports[1].failures.push((a, b));
                }
            }
            reports[2].checked += 1;
            if fischer_inner_product(&projected[a], q)? != fischer_inner_product(p, &projected[b])? {
                reports[2].failures.push((a, b));
            }
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::poly::Var;
    use crate::random::{random_bihomogeneous, random_double_harmonic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(m: usize) -> Dim {
        Dim::new(m).unwrap()
    }

    /// Inner product through literal differentiation: `conj(p)(∂) q` at 0.
    fn inner_by_differentiation(p: &Polynomial, q: &Polynomial) -> GaussianRational {
        let m = p.m();
        let mut acc = GaussianRational::zero();
        for (mono, c) in p.terms() {
            let mut r = q.clone();
            for j in 0..m {
                for _ in 0..mono.xexp()[j] {
                    r = r.partial(Var::X(j));
                }
                for _ in 0..mono.uexp()[j] {
                    r = r.partial(Var::U(j));
                }
            }
            acc += &(&c.conj() * &r.constant_term());
        }
        acc
    }

    #[test]
    fn inner_product_examples() {
        let dim = d(5);
        let x1 = Polynomial::x(dim, 0);
        let ix1 = x1.scale(&GaussianRational::i());
        assert_eq!(fischer_inner_product(&x1.pow(2), &x1.pow(2)).unwrap(), 2.into());
        assert_eq!(fischer_inner_product(&x1, &Polynomial::u(dim, 0)).unwrap(), GaussianRational::zero());
        assert_eq!(fischer_inner_product(&ix1, &x1).unwrap(), -GaussianRational::i());
    }

    #[test]
    fn factorial_formula_matches_differentiation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dim = d(5);
        for _ in 0..10 {
            let p = random_bihomogeneous(dim, 2, 2, 6, &mut rng);
            let q = random_bihomogeneous(dim, 2, 2, 6, &mut rng);
            let q = &q + &p;
            assert_eq!(fischer_inner_product(&p, &q).unwrap(), inner_by_differentiation(&p, &q));
        }
    }

    #[test]
    fn one_variable_fischer() {
        let dim = d(5);
        let p = Polynomial::norm_sq_x(dim);
        assert_eq!(sphere_fischer_project(&p, 1, Side::X).unwrap(), p);
        let x1sq = Polynomial::x(dim, 0).pow(2);
        let s0 = sphere_fischer_project(&x1sq, 0, Side::X).unwrap();
        let s1 = sphere_fischer_project(&x1sq, 1, Side::X).unwrap();
        assert_eq!(s1, Polynomial::norm_sq_x(dim).scale_rational(&rat(1, 5)));
        assert_eq!(&s0 + &s1, x1sq);
        let h = Polynomial::x(dim, 0);
        assert!(sphere_fischer_project(&h, 1, Side::X).unwrap().is_zero());
    }

    #[test]
    fn one_variable_fischer_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dim = d(6);
        for side in [Side::X, Side::U] {
            let p = random_bihomogeneous(dim, 5, 4, 5, &mut rng);
            let total: Polynomial = (0..=2).map(|s| sphere_fischer_project(&p, s, side).unwrap()).sum();
            assert_eq!(total, p);
        }
    }

    #[test]
    fn double_fischer_examples() {
        let dim = d(5);
        let x1sq = Polynomial::x(dim, 0).pow(2);
        let comps = double_fischer(&x1sq).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!((comps[0].i, comps[0].j), (0, 0));
        assert_eq!(comps[0].part, &x1sq - &Polynomial::norm_sq_x(dim).scale_rational(&rat(1, 5)));
        assert_eq!((comps[1].i, comps[1].j), (1, 0));
        assert_eq!(comps[1].part, Polynomial::one(dim).scale_rational(&rat(1, 5)));

        let both = &Polynomial::norm_sq_x(dim) * &Polynomial::norm_sq_u(dim);
        let comps = double_fischer(&both).unwrap();
        assert_eq!(comps, vec![DoubleFischerComponent { i: 1, j: 1, part: Polynomial::one(dim) }]);
    }

    #[test]
    fn double_fischer_reconstructs_with_harmonic_orthogonal_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for m in [5, 6, 7] {
            let dim = d(m);
            let p = random_bihomogeneous(dim, 4, 3, 6, &mut rng);
            let comps = double_fischer(&p).unwrap();
            let total: Polynomial = comps.iter().map(|c| c.embedded()).sum();
            assert_eq!(total, p);
            for c in &comps {
                assert!(is_double_harmonic(&c.part));
            }
            for a in &comps {
                for b in &comps {
                    if (a.i, a.j) != (b.i, b.j) {
                        assert!(fischer_inner_product(&a.embedded(), &b.embedded()).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn double_harmonic_is_its_own_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = random_double_harmonic(d(6), 3, 2, &mut rng);
        let comps = double_fischer(&h).unwrap();
        assert_eq!(comps, vec![DoubleFischerComponent { i: 0, j: 0, part: h }]);
    }

    #[test]
    fn norm_square_is_adjoint_to_laplacian() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let dim = d(5);
        for _ in 0..5 {
            let p = random_bihomogeneous(dim, 2, 1, 4, &mut rng);
            let q = random_bihomogeneous(dim, 4, 1, 4, &mut rng);
            let lhs = fischer_inner_product(&OperatorAtom::NormSqX.apply(&p), &q).unwrap();
            let rhs = fischer_inner_product(&p, &OperatorAtom::LaplacianX.apply(&q)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn adjoint_examples() {
        let dim = d(6);
        let one = Polynomial::one(dim);
        let c1 = GeneratorTag::C.operator(dim).apply(&one).unwrap();
        assert_eq!(fischer_inner_product(&c1, &c1).unwrap(), 6.into());
        let x1 = Polynomial::x(dim, 0);
        let u1 = Polynomial::u(dim, 0);
        let su = GeneratorTag::Su.operator(dim).apply(&x1).unwrap();
        assert_eq!(fischer_inner_product(&su, &u1).unwrap(), 1.into());
    }

    #[test]
    fn adjoints_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let dim = d(5);
        let mut samples: Vec<_> =
            [(0, 0), (1, 1), (2, 1), (1, 2), (2, 2)].iter().map(|&(k, l)| random_double_harmonic(dim, k, l, &mut rng)).collect();
        samples.push(random_bihomogeneous(dim, 2, 2, 5, &mut rng));
        for r in verify_adjoints(&samples).unwrap() {
            assert!(r.ok(), "{} failed on {:?}", r.identity, r.failures);
            assert!(r.checked > 0);
        }
    }
}
