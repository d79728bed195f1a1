//! Full decomposition `P = Σ |x|^{2a}|u|^{2b} C^iS_u^j H_{k,l}`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::fischer::{double_fischer, fischer_inner_product};
use crate::operator::{apply_power, OperatorAtom};
use crate::poly::{Dim, Polynomial};
use crate::simplicial::projection::{
    component_normalizer, component_target, embed, project_component_unchecked, LadderIndex, SimplicialComponent,
};
use crate::transvector::{is_double_harmonic, GeneratorTag, Generators};

/// How the ladder components of a double harmonic are extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// `Π_{i,j} = Π A^iS_x^j / α` for every cell independently.
    #[default]
    Direct,
    /// Peel cells off in order of decreasing `j`, then decreasing `i`,
    /// subtracting each embedded component before the next extraction.
    Sequential,
}

/// The cells `(i, j)` that can occur in double harmonics of bidegree `(p, q)`.
pub fn ladder_cells(p: u32, q: u32) -> Vec<(u32, u32)> {
    let mut cells = Vec::new();
    for i in 0..=q {
        for j in 0..=(q - i) {
            if component_target(p, q, i, j).is_ok() && q_cell_present(p, q, i, j) {
                cells.push((i, j));
            }
        }
    }
    cells
}

fn q_cell_present(p: u32, q: u32, i: u32, j: u32) -> bool {
    // S_u^j H_{k,l} vanishes for j > k − l
    match component_target(p, q, i, j) {
        Ok((k, l)) => j <= k - l,
        Err(_) => false,
    }
}

fn decompose_checked(g: &Generators, p: &Polynomial, pq: (u32, u32), strategy: Strategy) -> Result<Vec<SimplicialComponent>> {
    let dim = p.dim();
    let cells = ladder_cells(pq.0, pq.1);
    let mut out = Vec::new();
    match strategy {
        Strategy::Direct => {
            for (i, j) in cells {
                let c = project_component_unchecked(g, p, pq, i, j)?;
                if !c.harmonic.is_zero() {
                    out.push(c);
                }
            }
        }
        Strategy::Sequential => {
            let mut order: Vec<(u32, u32)> = cells.into_iter().filter(|&c| c != (0, 0)).collect();
            order.sort_by_key(|&(i, j)| std::cmp::Reverse((j, i)));
            let mut residual = p.clone();
            for (i, j) in order {
                let normalizer = component_normalizer(dim, pq.0, pq.1, i, j)?;
                let (k, l) = component_target(pq.0, pq.1, i, j)?;
                let lowered = g.power(GeneratorTag::A, &g.power(GeneratorTag::Sx, &residual, j), i);
                if lowered.is_zero() {
                    continue;
                }
                let harmonic = lowered.scale_rational(&normalizer);
                residual = &residual - &embed(g, i, j, &harmonic);
                out.push(SimplicialComponent { index: LadderIndex { i, j, k, l }, normalizer, harmonic });
            }
            if !residual.is_zero() {
                let normalizer = component_normalizer(dim, pq.0, pq.1, 0, 0)?;
                let (k, l) = pq;
                out.push(SimplicialComponent { index: LadderIndex { i: 0, j: 0, k, l }, normalizer, harmonic: residual });
            }
            out.sort_by_key(|c| (c.index.i, c.index.j));
        }
    }
    Ok(out)
}

/// Splits a bihomogeneous double harmonic into its simplicial components
/// `C^iS_u^j H_{p−i+j, q−i−j}`; zero components are omitted.
pub fn decompose_double_harmonic(p: &Polynomial, strategy: Strategy) -> Result<Vec<SimplicialComponent>> {
    p.dim().require_transvector()?;
    let pq = p.bidegree().ok_or(Error::NotBihomogeneous)?;
    if !is_double_harmonic(p) {
        return Err(Error::NotDoubleHarmonic);
    }
    if p.is_zero() {
        return Ok(vec![]);
    }
    decompose_checked(&Generators::new(p.dim()), p, pq, strategy)
}

/// One summand `|x|^{2a}|u|^{2b} C^iS_u^j H` of a full decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionComponent {
    /// Bidegree of the bihomogeneous part of the input this came from.
    pub source: (u32, u32),
    pub a: u32,
    pub b: u32,
    pub component: SimplicialComponent,
}

impl DecompositionComponent {
    pub fn embedded(&self) -> Polynomial {
        let p = self.component.embedded();
        let p = apply_power(OperatorAtom::NormSqX, &p, self.a);
        apply_power(OperatorAtom::NormSqU, &p, self.b)
    }
}

/// `(source bidegree, a, b)`.
type GroupKey = ((u32, u32), u32, u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    pub dim: Dim,
    /// Sorted by `(source, a, b, i, j)`.
    pub components: Vec<DecompositionComponent>,
}

impl DecompositionResult {
    /// `Σ |x|^{2a}|u|^{2b} C^iS_u^j H` over all components.
    pub fn reconstruct(&self) -> Polynomial {
        let mut groups: BTreeMap<GroupKey, BTreeMap<(u32, u32), &Polynomial>> = BTreeMap::new();
        for c in &self.components {
            groups.entry((c.source, c.a, c.b)).or_default().insert((c.component.index.i, c.component.index.j), &c.component.harmonic);
        }
        let g = Generators::new(self.dim);
        let dim = self.dim;
        let parts: Vec<Polynomial> = groups
            .par_iter()
            .map(|(&(_, a, b), cells)| {
                let max_i = cells.keys().map(|c| c.0).max().unwrap_or(0);
                let max_j = cells.keys().map(|c| c.1).max().unwrap_or(0);
                let mut out = Polynomial::zero(dim);
                for i in (0..=max_i).rev() {
                    let mut inner = Polynomial::zero(dim);
                    for j in (0..=max_j).rev() {
                        inner = g.power(GeneratorTag::Su, &inner, 1);
                        if let Some(h) = cells.get(&(i, j)) {
                            inner = &inner + *h;
                        }
                    }
                    out = &g.power(GeneratorTag::C, &out, 1) + &inner;
                }
                let out = apply_power(OperatorAtom::NormSqX, &out, a);
                apply_power(OperatorAtom::NormSqU, &out, b)
            })
            .collect();
        parts.into_iter().fold(Polynomial::zero(self.dim), |acc, p| &acc + &p)
    }
}

/// Double Fischer decomposition of every bihomogeneous part, followed by the
/// ladder decomposition of each double harmonic.
pub fn decompose_full(p: &Polynomial, strategy: Strategy) -> Result<DecompositionResult> {
    let dim = p.dim();
    dim.require_transvector()?;
    let g = Generators::new(dim);
    let mut jobs = Vec::new();
    for (source, part) in p.bidegree_split() {
        for f in double_fischer(&part)? {
            jobs.push((source, f));
        }
    }
    let pieces: Vec<Result<Vec<DecompositionComponent>>> = jobs
        .par_iter()
        .map(|(source, f)| {
            let pq = (source.0 - 2 * f.i, source.1 - 2 * f.j);
            Ok(decompose_checked(&g, &f.part, pq, strategy)?
                .into_iter()
                .map(|component| DecompositionComponent { source: *source, a: f.i, b: f.j, component })
                .collect())
        })
        .collect();
    let mut components = Vec::new();
    for piece in pieces {
        components.extend(piece?);
    }
    components.sort_by_key(|c| (c.source, c.a, c.b, c.component.index.i, c.component.index.j));
    Ok(DecompositionResult { dim, components })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub pairs_checked: usize,
    /// `(index, index, inner product)` for every non-orthogonal pair.
    pub nonzero: Vec<(usize, usize, GaussianRational)>,
}

impl OrthogonalityReport {
    pub fn ok(&self) -> bool {
        self.nonzero.is_empty()
    }
}

/// Fischer inner products between all pairs of distinct embedded components.
pub fn verify_component_orthogonality(result: &DecompositionResult) -> Result<OrthogonalityReport> {
    let embedded: Vec<Polynomial> = result.components.par_iter().map(|c| c.embedded()).collect();
    let mut pairs = Vec::new();
    for a in 0..embedded.len() {
        for b in a + 1..embedded.len() {
            pairs.push((a, b));
        }
    }
    let values: Vec<Result<GaussianRational>> =
        pairs.par_iter().map(|&(a, b)| fischer_inner_product(&embedded[a], &embedded[b])).collect();
    let mut nonzero = Vec::new();
    for (&(a, b), v) in pairs.iter().zip(values) {
        let v = v?;
        if !v.is_zero() {
            nonzero.push((a, b, v));
        }
    }
    Ok(OrthogonalityReport { pairs_checked: pairs.len(), nonzero })
}
