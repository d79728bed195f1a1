//! Brute-force checks of the ladder closed forms and of the master projection
//! against operator chains applied to highest weight vectors.

use rayon::prelude::*;

use crate::coeff::Rational;
use crate::error::Result;
use crate::hwv::highest_weight_vector;
use crate::poly::{Dim, Polynomial};
use crate::simplicial::ladder::{ladder_alpha, ladder_c, ladder_phi, ladder_psi, su_reorder_factor};
use crate::simplicial::projection::{embed, master_projection_unchecked};
use crate::transvector::{GeneratorTag, Generators};

/// Which coefficient a check concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LadderCoefficient {
    Phi,
    C,
    Psi,
    /// `α^{p,q}_{i,j}`
    Alpha { p: u32, q: u32 },
    /// Moving `S_u` past `C^i`.
    Reorder,
}

/// One brute-force comparison on the cell `C^iS_u^j H_{k,l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderCheck {
    pub coefficient: LadderCoefficient,
    pub m: usize,
    pub k: u32,
    pub l: u32,
    pub i: u32,
    pub j: u32,
    pub closed_form: Rational,
    pub passed: bool,
}

fn cell(g: &Generators, h: &Polynomial, i: u32, j: u32) -> Polynomial {
    embed(g, i, j, h)
}

fn check(
    coefficient: LadderCoefficient,
    dim: Dim,
    (k, l, i, j): (u32, u32, u32, u32),
    closed_form: Rational,
    observed: &Polynomial,
    target: &Polynomial,
) -> LadderCheck {
    let passed = *observed == target.scale_rational(&closed_form);
    LadderCheck { coefficient, m: dim.get(), k, l, i, j, closed_form, passed }
}

fn cell_checks(g: &Generators, dim: Dim, h: &Polynomial, k: u32, l: u32, i: u32, j: u32) -> Result<Vec<LadderCheck>> {
    let idx = (k, l, i, j);
    let here = cell(g, h, i, j);
    let mut out = Vec::new();
    if j >= 1 {
        let observed = g.power(GeneratorTag::Sx, &here, 1);
        out.push(check(LadderCoefficient::Phi, dim, idx, ladder_phi(dim, i, j, k, l)?, &observed, &cell(g, h, i, j - 1)));
    }
    if i >= 1 {
        let observed = g.power(GeneratorTag::A, &here, 1);
        let below = cell(g, h, i - 1, j);
        out.push(check(LadderCoefficient::Psi, dim, idx, ladder_psi(dim, i, j, k, l)?, &observed, &below));
        if j == 0 {
            out.push(check(LadderCoefficient::C, dim, idx, ladder_c(dim, i, k, l)?, &observed, &below));
        }
    }
    for p in 0..=i {
        for q in 0..=j {
            let observed = g.power(GeneratorTag::A, &g.power(GeneratorTag::Sx, &here, q), p);
            let alpha = ladder_alpha(dim, i, j, p, q, k, l)?;
            out.push(check(LadderCoefficient::Alpha { p, q }, dim, idx, alpha, &observed, &cell(g, h, i - p, j - q)));
        }
    }
    if j < k - l {
        // S_u C^i S_u^j H against C^i S_u^{j+1} H
        let observed = g.power(GeneratorTag::Su, &here, 1);
        let factor = su_reorder_factor(dim, i, j, k)?;
        out.push(check(LadderCoefficient::Reorder, dim, idx, factor, &observed, &cell(g, h, i, j + 1)));
    }
    Ok(out)
}

/// Checks `φ, c, ψ, α` and the `S_u` reordering factor on every cell
/// `C^iS_u^j H_{k,l}` with `H` the highest weight vector, `(k,l) ≤ max`,
/// `i, j ≤ max_ij`.
pub fn verify_ladder(dim: Dim, max: (u32, u32), max_ij: u32) -> Result<Vec<LadderCheck>> {
    dim.require_transvector()?;
    let g = Generators::new(dim);
    let mut jobs = Vec::new();
    for k in 0..=max.0 {
        for l in 0..=k.min(max.1) {
            for i in 0..=max_ij {
                for j in 0..=max_ij.min(k - l) {
                    jobs.push((k, l, i, j));
                }
            }
        }
    }
    let results: Vec<Result<Vec<LadderCheck>>> = jobs
        .par_iter()
        .map(|&(k, l, i, j)| {
            let h = highest_weight_vector(dim, k, l)?;
            cell_checks(&g, dim, &h, k, l, i, j)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// What the master projection was applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionCase {
    /// `Π H = H` for the highest weight vector.
    Identity,
    /// `Π (H∘g) = H∘g` for a rotated highest weight vector.
    RotatedIdentity,
    /// `Π C^iS_u^j H' = 0` for `1 ≤ i+j`.
    Annihilates { i: u32, j: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionCheck {
    pub case: ProjectionCase,
    pub m: usize,
    pub k: u32,
    pub l: u32,
    pub passed: bool,
}

/// `Π` at bidegree `(k, l) ≤ max` is the identity on `𝓗_{k,l}` and kills
/// every ladder cell `C^iS_u^j 𝓗_{k−i+j, l−i−j}` with `1 ≤ i+j ≤ max_ij`.
pub fn verify_master_projection(dim: Dim, max: (u32, u32), max_ij: u32) -> Result<Vec<ProjectionCheck>> {
    dim.require_transvector()?;
    let g = Generators::new(dim);
    let rot = {
        let a = Polynomial::givens_345(dim, 0, 1);
        let b = Polynomial::givens_345(dim, 1, 2);
        let m = dim.get();
        (0..m)
            .map(|r| (0..m).map(|c| (0..m).map(|t| &a[r][t] * &b[t][c]).sum::<Rational>()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let mut jobs = Vec::new();
    for k in 0..=max.0 {
        for l in 0..=k.min(max.1) {
            jobs.push((k, l, ProjectionCase::Identity));
            jobs.push((k, l, ProjectionCase::RotatedIdentity));
            for i in 0..=max_ij {
                for j in 0..=(max_ij - i) {
                    if i + j == 0 || i + j > l || k + j < i {
                        continue;
                    }
                    let (kp, lp) = (k + j - i, l - i - j);
                    if kp < lp || j > kp - lp {
                        continue;
                    }
                    jobs.push((k, l, ProjectionCase::Annihilates { i, j }));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|&(k, l, case)| {
            let (input, expected) = match case {
                ProjectionCase::Identity => {
                    let h = highest_weight_vector(dim, k, l)?;
                    (h.clone(), h)
                }
                ProjectionCase::RotatedIdentity => {
                    let h = highest_weight_vector(dim, k, l)?.linear_substitute(&rot);
                    (h.clone(), h)
                }
                ProjectionCase::Annihilates { i, j } => {
                    let h = highest_weight_vector(dim, k + j - i, l - i - j)?;
                    (cell(&g, &h, i, j), Polynomial::zero(dim))
                }
            };
            let observed = master_projection_unchecked(&g, &input, k, l)?;
            let passed = observed == expected && !(matches!(case, ProjectionCase::Annihilates { .. }) && input.is_zero());
            Ok(ProjectionCheck { case, m: dim.get(), k, l, passed })
        })
        .collect()
}
