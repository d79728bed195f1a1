//! The master projection `Π` onto `𝓗_{k,l}` and the component projections
//! `Π_{i,j}`.

use num_traits::{One, Zero};

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::fischer::{fischer_inner_product, AdjointReport};
use crate::poly::Polynomial;
use crate::simplicial::ladder::{ladder_alpha, ladder_beta};
use crate::transvector::{is_double_harmonic, GeneratorTag, Generators};

/// Labels the cell `C^i S_u^j 𝓗_{k,l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderIndex {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub l: u32,
}

/// A simplicial harmonic together with its ladder position and the
/// normalising constant `1/α^{i,j}_{i,j}(k,l)` used to extract it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComponent {
    pub index: LadderIndex,
    pub normalizer: Rational,
    pub harmonic: Polynomial,
}

impl SimplicialComponent {
    /// `C^i S_u^j H`.
    pub fn embedded(&self) -> Polynomial {
        let g = Generators::new(self.harmonic.dim());
        embed(&g, self.index.i, self.index.j, &self.harmonic)
    }
}

pub(crate) fn embed(g: &Generators, i: u32, j: u32, h: &Polynomial) -> Polynomial {
    g.power(GeneratorTag::C, &g.power(GeneratorTag::Su, h, j), i)
}

fn checked_bidegree(p: &Polynomial) -> Result<(u32, u32)> {
    p.dim().require_transvector()?;
    let b = p.bidegree().ok_or(Error::NotBihomogeneous)?;
    if !is_double_harmonic(p) {
        return Err(Error::NotDoubleHarmonic);
    }
    Ok(b)
}

pub(crate) fn master_projection_unchecked(g: &Generators, p: &Polynomial, k: u32, l: u32) -> Result<Polynomial> {
    if k < l {
        return Err(Error::IndexOutOfRange(format!("master projection needs k >= l, got ({k}, {l})")));
    }
    let dim = p.dim();
    // lowered[b][a] = A^a S_x^b p
    let mut lowered: Vec<Vec<Polynomial>> = Vec::new();
    let mut sx = p.clone();
    for b in 0..=l {
        if b > 0 {
            sx = g.power(GeneratorTag::Sx, &sx, 1);
        }
        let mut row = vec![sx.clone()];
        for _ in 1..=(l - b) {
            let next = g.power(GeneratorTag::A, row.last().expect("nonempty"), 1);
            row.push(next);
        }
        lowered.push(row);
    }
    // Σ_a C^a Σ_b β_{a,b} S_u^b A^a S_x^b p, nested from the innermost power
    let mut out = Polynomial::zero(dim);
    for a in (0..=l).rev() {
        let mut inner = Polynomial::zero(dim);
        for b in (0..=(l - a)).rev() {
            inner = g.power(GeneratorTag::Su, &inner, 1);
            let y = &lowered[b as usize][a as usize];
            if y.is_zero() {
                continue;
            }
            let term = if a == 0 && b == 0 { y.clone() } else { y.scale_rational(&ladder_beta(dim, a, b, k, l)?) };
            inner = &inner + &term;
        }
        out = &g.power(GeneratorTag::C, &out, 1) + &inner;
    }
    Ok(out)
}

/// `Π = Σ β_{i,j}(k,l) C^iS_u^jA^iS_x^j` on a double harmonic of bidegree
/// `(k, l)`, `k ≥ l`.
pub fn master_projection(p: &Polynomial) -> Result<Polynomial> {
    let (k, l) = checked_bidegree(p)?;
    if p.is_zero() {
        return Ok(p.clone());
    }
    master_projection_unchecked(&Generators::new(p.dim()), p, k, l)
}

/// Target `(k, l) = (p−i+j, q−i−j)` of `Π_{i,j}` on bidegree `(p, q)`, or the
/// reason the cell is empty.
pub fn component_target(p: u32, q: u32, i: u32, j: u32) -> Result<(u32, u32)> {
    if i + j > q {
        return Err(Error::IndexOutOfRange(format!("({i},{j}) needs i + j <= {q}")));
    }
    if p + j < i || p + j - i < q - i - j {
        return Err(Error::IndexOutOfRange(format!("({i},{j}) leaves the dominant cone at bidegree ({p},{q})")));
    }
    Ok((p + j - i, q - i - j))
}

/// The normalising constant of `Π_{i,j}`; `ZeroNormalizer` marks an absent cell.
pub fn component_normalizer(dim: crate::poly::Dim, p: u32, q: u32, i: u32, j: u32) -> Result<Rational> {
    let (k, l) = component_target(p, q, i, j)?;
    if j > k - l {
        return Err(Error::ZeroNormalizer { i, j, p, q });
    }
    let alpha = ladder_alpha(dim, i, j, i, j, k, l)?;
    if alpha.is_zero() {
        return Err(Error::ZeroNormalizer { i, j, p, q });
    }
    Ok(Rational::one() / alpha)
}

pub(crate) fn project_component_unchecked(
    g: &Generators,
    p: &Polynomial,
    pq: (u32, u32),
    i: u32,
    j: u32,
) -> Result<SimplicialComponent> {
    let normalizer = component_normalizer(p.dim(), pq.0, pq.1, i, j)?;
    let (k, l) = component_target(pq.0, pq.1, i, j)?;
    let lowered = g.power(GeneratorTag::A, &g.power(GeneratorTag::Sx, p, j), i);
    let harmonic = if lowered.is_zero() {
        lowered
    } else {
        master_projection_unchecked(g, &lowered, k, l)?.scale_rational(&normalizer)
    };
    Ok(SimplicialComponent { index: LadderIndex { i, j, k, l }, normalizer, harmonic })
}

/// `Π_{i,j} = Π A^iS_x^j / α^{i,j}_{i,j}(k,l)`.
pub fn project_component(p: &Polynomial, i: u32, j: u32) -> Result<SimplicialComponent> {
    let pq = checked_bidegree(p)?;
    project_component_unchecked(&Generators::new(p.dim()), p, pq, i, j)
}

/// `⟨Πp, q⟩ = ⟨p, Πq⟩` over all ordered pairs of samples sharing a bidegree.
pub fn verify_projection_self_adjoint(samples: &[Polynomial]) -> Result<AdjointReport> {
    let mut report = AdjointReport { identity: "<Pi p,q> = <p,Pi q>", checked: 0, failures: vec![] };
    let projected: Vec<Polynomial> = samples.iter().map(master_projection).collect::<Result<_>>()?;
    for (a, p) in samples.iter().enumerate() {
        for (b, q) in samples.iter().enumerate() {
            if p.bidegree() != q.bidegree() {
                continue;
            }
            report.checked += 1;
            if fischer_inner_product(&projected[a], q)? != fischer_inner_product(p, &projected[b])? {
                report.failures.push((a, b));
            }
        }
    }
    Ok(report)
}
