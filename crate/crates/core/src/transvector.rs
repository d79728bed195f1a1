//! Extremal projections `π_x, π_u, π_s` and the generators `S_x, S_u, A, C`
//! acting on double harmonics, with their quadratic relations.

use std::fmt;

use num_traits::One;

use crate::coeff::{int, Rational};
use crate::error::{Error, Result};
use crate::operator::{hu_plus, hx_plus, EulerPoly, EulerRationalScale, LinearOperator, OperatorAtom};
use crate::poly::{Dim, Polynomial};
use crate::special::factorial;

use OperatorAtom::*;

/// True iff `p` is killed by both Laplacians.
pub fn is_double_harmonic(p: &Polynomial) -> bool {
    LaplacianX.apply(p).is_zero() && LaplacianU.apply(p).is_zero()
}

/// True iff `p` lies in the kernel of `Δ_x, Δ_u, ⟨∂_u,∂_x⟩, ⟨x,∂_u⟩`.
pub fn is_simplicial_harmonic(p: &Polynomial) -> bool {
    is_double_harmonic(p) && CrossDD.apply(p).is_zero() && SkewXU.apply(p).is_zero()
}

fn max_degrees(p: &Polynomial) -> (u32, u32) {
    p.terms().fold((0, 0), |(a, b), (mono, _)| {
        let (k, l) = mono.bidegree();
        (a.max(k), b.max(l))
    })
}

fn extremal_operator(dim: Dim, bound: u32, x_side: bool) -> LinearOperator {
    let (norm, lap) = if x_side { (NormSqX, LaplacianX) } else { (NormSqU, LaplacianU) };
    let h_plus = |c: i64| if x_side { hx_plus(dim, int(c)) } else { hu_plus(dim, int(c)) };
    let mut op = LinearOperator::zero(dim);
    for j in 0..=bound {
        let denominator = (2..=j as i64 + 1).fold(EulerPoly::one(), |acc, n| acc.mul(&h_plus(n)));
        let c = Rational::one() / (int(4).pow(j as i32) * factorial(j));
        let scale = EulerRationalScale::new(EulerPoly::constant(c), denominator);
        let mut atoms = vec![norm; j as usize];
        atoms.extend(std::iter::repeat_n(lap, j as usize));
        op = op.plus(&LinearOperator::term(dim, scale, atoms)).expect("same dimension");
    }
    op
}

/// `π_x` as an operator, truncated for x-degrees up to `2·bound + 1`.
pub fn extremal_projection_x_operator(dim: Dim, bound: u32) -> LinearOperator {
    extremal_operator(dim, bound, true)
}

/// `π_u` as an operator, truncated for u-degrees up to `2·bound + 1`.
pub fn extremal_projection_u_operator(dim: Dim, bound: u32) -> LinearOperator {
    extremal_operator(dim, bound, false)
}

/// Projection onto the x-harmonic part along `|x|²·P`.
pub fn extremal_projection_x(p: &Polynomial) -> Polynomial {
    let (k, _) = max_degrees(p);
    extremal_projection_x_operator(p.dim(), k / 2).apply(p).expect("no poles for the extremal series")
}

pub fn extremal_projection_u(p: &Polynomial) -> Polynomial {
    let (_, l) = max_degrees(p);
    extremal_projection_u_operator(p.dim(), l / 2).apply(p).expect("no poles for the extremal series")
}

/// `π_s = π_x π_u`.
pub fn extremal_projection_s(p: &Polynomial) -> Polynomial {
    extremal_projection_x(&extremal_projection_u(p))
}

/// The four generators of the transvector algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorTag {
    Sx,
    Su,
    A,
    C,
}

impl GeneratorTag {
    pub const ALL: [GeneratorTag; 4] = [GeneratorTag::Sx, GeneratorTag::Su, GeneratorTag::A, GeneratorTag::C];

    pub fn shift(self) -> (i32, i32) {
        match self {
            GeneratorTag::Sx => (1, -1),
            GeneratorTag::Su => (-1, 1),
            GeneratorTag::A => (-1, -1),
            GeneratorTag::C => (1, 1),
        }
    }

    /// The generator as an explicit operator on double harmonics.
    pub fn operator(self, dim: Dim) -> LinearOperator {
        let m4 = int(dim.get() as i64 - 4);
        // 1/(2E_x + m − 4) and 1/(2E_u + m − 4)
        let inv_x = || EulerRationalScale::inverse_affine(int(2), int(0), m4.clone());
        let inv_u = || EulerRationalScale::inverse_affine(int(0), int(2), m4.clone());
        let one = EulerRationalScale::one;
        let neg = |s: EulerRationalScale| s.scale(&-Rational::one());
        let terms: Vec<(EulerRationalScale, Vec<OperatorAtom>)> = match self {
            GeneratorTag::Sx => vec![(one(), vec![SkewXU]), (neg(inv_x()), vec![NormSqX, CrossDD])],
            GeneratorTag::Su => vec![(one(), vec![SkewUX]), (neg(inv_u()), vec![NormSqU, CrossDD])],
            GeneratorTag::A => vec![(one(), vec![CrossDD])],
            GeneratorTag::C => vec![
                (one(), vec![InnerUX]),
                (neg(inv_x()), vec![NormSqX, SkewUX]),
                (neg(inv_u()), vec![NormSqU, SkewXU]),
                (inv_x().mul(&inv_u()), vec![NormSqX, NormSqU, CrossDD]),
            ],
        };
        terms.into_iter().fold(LinearOperator::zero(dim), |acc, (s, atoms)| {
            acc.plus(&LinearOperator::term(dim, s, atoms)).expect("same dimension")
        })
    }
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeneratorTag::Sx => "S_x",
            GeneratorTag::Su => "S_u",
            GeneratorTag::A => "A",
            GeneratorTag::C => "C",
        };
        f.write_str(s)
    }
}

/// Applies a generator to a double harmonic.
pub fn apply_generator(g: GeneratorTag, p: &Polynomial) -> Result<Polynomial> {
    p.dim().require_transvector()?;
    if !is_double_harmonic(p) {
        return Err(Error::NotDoubleHarmonic);
    }
    g.operator(p.dim()).apply(p)
}

/// Precomputed generator operators for repeated application inside one
/// double-harmonic computation.
#[derive(Clone, Debug)]
pub(crate) struct Generators {
    sx: LinearOperator,
    su: LinearOperator,
    a: LinearOperator,
    c: LinearOperator,
}

impl Generators {
    pub(crate) fn new(dim: Dim) -> Self {
        Self {
            sx: GeneratorTag::Sx.operator(dim),
            su: GeneratorTag::Su.operator(dim),
            a: GeneratorTag::A.operator(dim),
            c: GeneratorTag::C.operator(dim),
        }
    }

    pub(crate) fn get(&self, g: GeneratorTag) -> &LinearOperator {
        match g {
            GeneratorTag::Sx => &self.sx,
            GeneratorTag::Su => &self.su,
            GeneratorTag::A => &self.a,
            GeneratorTag::C => &self.c,
        }
    }

    /// `g^n p` for `p` already known to be double harmonic.
    pub(crate) fn power(&self, g: GeneratorTag, p: &Polynomial, n: u32) -> Polynomial {
        let mut out = p.clone();
        for _ in 0..n {
            if out.is_zero() {
                break;
            }
            out = self.get(g).apply(&out).expect("generators are pole-free for m > 4");
        }
        out
    }
}

/// The six quadratic relations between the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadraticRelation {
    /// `A S_x = ((H_x+2)/(H_x+1)) S_x A`
    ASx,
    /// `A S_u = ((H_u+2)/(H_u+1)) S_u A`
    ASu,
    /// `S_u C = ((H_x+2)/(H_x+1)) C S_u`
    SuC,
    /// `S_x C = ((H_u+2)/(H_u+1)) C S_x`
    SxC,
    /// `[S_x, S_u] = ((H_x−H_u)/((1+H_x)(1+H_u))) C A − (H_x − H_u)`
    SxSu,
    /// `A C = ((H_x+H_xH_u+H_u)/((H_x+1)(H_u+1))) C A − (H_x+H_u)
    ///   + S_xS_u/(H_x+1) + S_uS_x/(H_u+1)`
    AC,
}

impl QuadraticRelation {
    pub const ALL: [QuadraticRelation; 6] = [
        QuadraticRelation::ASx,
        QuadraticRelation::ASu,
        QuadraticRelation::SuC,
        QuadraticRelation::SxC,
        QuadraticRelation::SxSu,
        QuadraticRelation::AC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QuadraticRelation::ASx => "A S_x",
            QuadraticRelation::ASu => "A S_u",
            QuadraticRelation::SuC => "S_u C",
            QuadraticRelation::SxC => "S_x C",
            QuadraticRelation::SxSu => "[S_x, S_u]",
            QuadraticRelation::AC => "A C",
        }
    }

    /// Both sides as operators on double harmonics.
    pub fn sides(self, dim: Dim) -> (LinearOperator, LinearOperator) {
        let g = Generators::new(dim);
        let op = |t: GeneratorTag| g.get(t).clone();
        let prod = |a: GeneratorTag, b: GeneratorTag| op(a).compose(&op(b)).expect("same dimension");
        let scaled = |num: EulerPoly, den: EulerPoly, o: LinearOperator| {
            LinearOperator::scaling(dim, EulerRationalScale::new(num, den)).compose(&o).expect("same dimension")
        };
        let hx = |c: i64| hx_plus(dim, int(c));
        let hu = |c: i64| hu_plus(dim, int(c));
        use GeneratorTag::*;
        match self {
            QuadraticRelation::ASx => (prod(A, Sx), scaled(hx(2), hx(1), prod(Sx, A))),
            QuadraticRelation::ASu => (prod(A, Su), scaled(hu(2), hu(1), prod(Su, A))),
            QuadraticRelation::SuC => (prod(Su, C), scaled(hx(2), hx(1), prod(C, Su))),
            QuadraticRelation::SxC => (prod(Sx, C), scaled(hu(2), hu(1), prod(C, Sx))),
            QuadraticRelation::SxSu => {
                let lhs = prod(Sx, Su).minus(&prod(Su, Sx)).expect("same dimension");
                let diff = hx(0).add(&hu(0).scale(&-Rational::one()));
                let rhs = scaled(diff.clone(), hx(1).mul(&hu(1)), prod(C, A))
                    .minus(&LinearOperator::scaling(dim, EulerRationalScale::new(diff, EulerPoly::one())))
                    .expect("same dimension");
                (lhs, rhs)
            }
            QuadraticRelation::AC => {
                let num = hx(0).add(&hx(0).mul(&hu(0))).add(&hu(0));
                let sum = hx(0).add(&hu(0));
                let rhs = scaled(num, hx(1).mul(&hu(1)), prod(C, A))
                    .minus(&LinearOperator::scaling(dim, EulerRationalScale::new(sum, EulerPoly::one())))
                    .and_then(|o| o.plus(&scaled(EulerPoly::one(), hx(1), prod(Sx, Su))))
                    .and_then(|o| o.plus(&scaled(EulerPoly::one(), hu(1), prod(Su, Sx))))
                    .expect("same dimension");
                (prod(A, C), rhs)
            }
        }
    }
}

/// Outcome of one relation over a sample set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: QuadraticRelation,
    pub passed: usize,
    /// Indices of samples on which the two sides differ.
    pub failures: Vec<usize>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks all six relations exactly on every sample.
pub fn verify_quadratic_relations(samples: &[Polynomial]) -> Result<Vec<RelationReport>> {
    let Some(first) = samples.first() else {
        return Ok(QuadraticRelation::ALL
            .iter()
            .map(|&relation| RelationReport { relation, passed: 0, failures: vec![] })
            .collect());
    };
    let dim = first.dim();
    dim.require_transvector()?;
    for p in samples {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim.get(), right: p.m() });
        }
        if !is_double_harmonic(p) {
            return Err(Error::NotDoubleHarmonic);
        }
    }
    let mut reports = Vec::new();
    for relation in QuadraticRelation::ALL {
        let (lhs, rhs) = relation.sides(dim);
        let mut report = RelationReport { relation, passed: 0, failures: vec![] };
        for (idx, p) in samples.iter().enumerate() {
            if lhs.apply(p)? == rhs.apply(p)? {
                report.passed += 1;
            } else {
                report.failures.push(idx);
            }
        }
        reports.push(report);
    }
    Ok(reports)
}
