//! Linear operators on polynomial space built from the SO(m)-invariant atoms
//! `Δ_x, Δ_u, |x|², |u|², ⟨u,x⟩, ⟨∂_u,∂_x⟩, ⟨u,∂_x⟩, ⟨x,∂_u⟩, 𝔼_x, 𝔼_u`
//! together with scalings that are rational functions of the Euler
//! eigenvalues.
//!
//! A fraction `A / B` with `B` a function of the Euler operators means
//! `B⁻¹A`: the atoms of a term act first, then its scale is evaluated at the
//! bidegree of the intermediate result. Every atom maps a bihomogeneous
//! polynomial to a bihomogeneous one, so that bidegree is known in advance.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::coeff::{int, Rational};
use crate::error::{Error, Result};
use crate::poly::{Dim, Polynomial, TermAccumulator};

/// One of the ten generating invariant operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorAtom {
    LaplacianX,
    LaplacianU,
    NormSqX,
    NormSqU,
    /// Multiplication by `⟨u, x⟩`.
    InnerUX,
    /// `⟨∂_u, ∂_x⟩`.
    CrossDD,
    /// `⟨u, ∂_x⟩`.
    SkewUX,
    /// `⟨x, ∂_u⟩`.
    SkewXU,
    EulerX,
    EulerU,
}

impl OperatorAtom {
    pub const ALL: [OperatorAtom; 10] = [
        OperatorAtom::LaplacianX,
        OperatorAtom::LaplacianU,
        OperatorAtom::NormSqX,
        OperatorAtom::NormSqU,
        OperatorAtom::InnerUX,
        OperatorAtom::CrossDD,
        OperatorAtom::SkewUX,
        OperatorAtom::SkewXU,
        OperatorAtom::EulerX,
        OperatorAtom::EulerU,
    ];

    /// Bidegree shift `(Δk, Δl)` of the atom.
    pub fn shift(self) -> (i32, i32) {
        use OperatorAtom::*;
        match self {
            LaplacianX => (-2, 0),
            LaplacianU => (0, -2),
            NormSqX => (2, 0),
            NormSqU => (0, 2),
            InnerUX => (1, 1),
            CrossDD => (-1, -1),
            SkewUX => (-1, 1),
            SkewXU => (1, -1),
            EulerX | EulerU => (0, 0),
        }
    }

    /// Applies the atom to any polynomial.
    pub fn apply(self, p: &Polynomial) -> Polynomial {
        use OperatorAtom::*;
        let m = p.m();
        let dim = p.dim();
        let mut acc = TermAccumulator::new(dim);
        for (mono, c) in p.terms() {
            match self {
                LaplacianX | LaplacianU => {
                    let base = if self == LaplacianX { 0 } else { m };
                    for j in 0..m {
                        let e = mono.exps()[base + j] as i64;
                        if e >= 2 {
                            acc.add(mono.shifted(base + j, -2).unwrap(), c.scale_int(e * (e - 1)));
                        }
                    }
                }
                NormSqX | NormSqU => {
                    let base = if self == NormSqX { 0 } else { m };
                    for j in 0..m {
                        acc.add(mono.shifted(base + j, 2).unwrap(), c.clone());
                    }
                }
                InnerUX => {
                    for j in 0..m {
                        acc.add(mono.shifted(j, 1).unwrap().shifted(m + j, 1).unwrap(), c.clone());
                    }
                }
                CrossDD => {
                    for j in 0..m {
                        let (a, b) = (mono.exps()[j] as i64, mono.exps()[m + j] as i64);
                        if a > 0 && b > 0 {
                            acc.add(mono.shifted(j, -1).unwrap().shifted(m + j, -1).unwrap(), c.scale_int(a * b));
                        }
                    }
                }
                SkewUX => {
                    for j in 0..m {
                        let a = mono.exps()[j] as i64;
                        if a > 0 {
                            acc.add(mono.shifted(j, -1).unwrap().shifted(m + j, 1).unwrap(), c.scale_int(a));
                        }
                    }
                }
                SkewXU => {
                    for j in 0..m {
                        let b = mono.exps()[m + j] as i64;
                        if b > 0 {
                            acc.add(mono.shifted(m + j, -1).unwrap().shifted(j, 1).unwrap(), c.scale_int(b));
                        }
                    }
                }
                EulerX => {
                    let (k, _) = mono.bidegree();
                    acc.add(mono.clone(), c.scale_int(k as i64));
                }
                EulerU => {
                    let (_, l) = mono.bidegree();
                    acc.add(mono.clone(), c.scale_int(l as i64));
                }
            }
        }
        acc.finish()
    }

    pub fn symbol(self) -> &'static str {
        use OperatorAtom::*;
        match self {
            LaplacianX => "Δx",
            LaplacianU => "Δu",
            NormSqX => "|x|²",
            NormSqU => "|u|²",
            InnerUX => "⟨u,x⟩",
            CrossDD => "⟨∂u,∂x⟩",
            SkewUX => "⟨u,∂x⟩",
            SkewXU => "⟨x,∂u⟩",
            EulerX => "Ex",
            EulerU => "Eu",
        }
    }
}

/// Bivariate polynomial with rational coefficients in the formal Euler
/// eigenvalues `(E_x, E_u)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EulerPoly {
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl EulerPoly {
    pub fn constant(c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert((0, 0), c);
        }
        EulerPoly { coeffs }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `a·E_x + b·E_u + c`.
    pub fn affine(a: Rational, b: Rational, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        for (key, v) in [((1, 0), a), ((0, 1), b), ((0, 0), c)] {
            if !v.is_zero() {
                coeffs.insert(key, v);
            }
        }
        EulerPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &EulerPoly) -> EulerPoly {
        let mut coeffs = self.coeffs.clone();
        for (key, v) in &other.coeffs {
            let e = coeffs.entry(*key).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                coeffs.remove(key);
            }
        }
        EulerPoly { coeffs }
    }

    pub fn mul(&self, other: &EulerPoly) -> EulerPoly {
        let mut out = EulerPoly::default();
        for ((a1, b1), v1) in &self.coeffs {
            for ((a2, b2), v2) in &other.coeffs {
                out = out.add(&EulerPoly { coeffs: BTreeMap::from([((a1 + a2, b1 + b2), v1 * v2)]) });
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> EulerPoly {
        if r.is_zero() {
            return EulerPoly::default();
        }
        EulerPoly { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * r)).collect() }
    }

    pub fn eval(&self, k: &Rational, l: &Rational) -> Rational {
        self.coeffs
            .iter()
            .map(|((a, b), v)| v * pow(k, *a) * pow(l, *b))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Substitutes `E_x ↦ E_x + dk`, `E_u ↦ E_u + dl`.
    pub fn shifted(&self, dk: i32, dl: i32) -> EulerPoly {
        if dk == 0 && dl == 0 {
            return self.clone();
        }
        let ex = EulerPoly::affine(Rational::one(), Rational::zero(), int(dk as i64));
        let eu = EulerPoly::affine(Rational::zero(), Rational::one(), int(dl as i64));
        let mut out = EulerPoly::default();
        for ((a, b), v) in &self.coeffs {
            let mut t = EulerPoly::constant(v.clone());
            for _ in 0..*a {
                t = t.mul(&ex);
            }
            for _ in 0..*b {
                t = t.mul(&eu);
            }
            out = out.add(&t);
        }
        out
    }
}

fn pow(r: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

impl fmt::Debug for EulerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|((a, b), v)| format!("({})·Ex^{}·Eu^{}", crate::coeff::fmt_rational(v), a, b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A rational function `numerator(E_x, E_u) / denominator(E_x, E_u)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EulerRationalScale {
    numerator: EulerPoly,
    denominator: EulerPoly,
}

impl EulerRationalScale {
    pub fn new(numerator: EulerPoly, denominator: EulerPoly) -> Self {
        assert!(!denominator.is_zero(), "identically zero denominator");
        Self { numerator, denominator }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(EulerPoly::constant(c), EulerPoly::one())
    }

    /// `1 / (a·E_x + b·E_u + c)`.
    pub fn inverse_affine(a: Rational, b: Rational, c: Rational) -> Self {
        Self::new(EulerPoly::one(), EulerPoly::affine(a, b, c))
    }

    pub fn numerator(&self) -> &EulerPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &EulerPoly {
        &self.denominator
    }

    pub fn mul(&self, other: &EulerRationalScale) -> EulerRationalScale {
        Self::new(self.numerator.mul(&other.numerator), self.denominator.mul(&other.denominator))
    }

    pub fn scale(&self, r: &Rational) -> EulerRationalScale {
        Self::new(self.numerator.scale(r), self.denominator.clone())
    }

    pub fn shifted(&self, dk: i32, dl: i32) -> EulerRationalScale {
        Self::new(self.numerator.shifted(dk, dl), self.denominator.shifted(dk, dl))
    }

    /// Value at bidegree `(k, l)`; errors on a pole.
    pub fn eval(&self, k: u32, l: u32) -> Result<Rational> {
        let (kr, lr) = (int(k as i64), int(l as i64));
        let den = self.denominator.eval(&kr, &lr);
        if den.is_zero() {
            return Err(Error::ZeroDenominator(k, l));
        }
        Ok(self.numerator.eval(&kr, &lr) / den)
    }
}

/// `Σ scale_t · (atom_1 ∘ … ∘ atom_n)_t`; atoms of a term are stored in
/// composition order, so the last one acts first.
#[derive(Clone, Debug)]
pub struct LinearOperator {
    dim: Dim,
    terms: Vec<(EulerRationalScale, Vec<OperatorAtom>)>,
}

fn total_shift(atoms: &[OperatorAtom]) -> (i32, i32) {
    atoms.iter().fold((0, 0), |(a, b), at| {
        let (da, db) = at.shift();
        (a + da, b + db)
    })
}

impl LinearOperator {
    pub fn zero(dim: Dim) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn identity(dim: Dim) -> Self {
        Self::term(dim, EulerRationalScale::one(), vec![])
    }

    pub fn atom(dim: Dim, atom: OperatorAtom) -> Self {
        Self::term(dim, EulerRationalScale::one(), vec![atom])
    }

    pub fn term(dim: Dim, scale: EulerRationalScale, atoms: Vec<OperatorAtom>) -> Self {
        Self { dim, terms: vec![(scale, atoms)] }
    }

    /// Pure scaling by a rational function of the Euler eigenvalues.
    pub fn scaling(dim: Dim, scale: EulerRationalScale) -> Self {
        Self::term(dim, scale, vec![])
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn terms(&self) -> &[(EulerRationalScale, Vec<OperatorAtom>)] {
        &self.terms
    }

    fn check_dim(&self, other: &LinearOperator) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch { left: self.dim.get(), right: other.dim.get() })
        } else {
            Ok(())
        }
    }

    pub fn plus(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check_dim(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(LinearOperator { dim: self.dim, terms })
    }

    pub fn minus(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.plus(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, r: &Rational) -> LinearOperator {
        LinearOperator { dim: self.dim, terms: self.terms.iter().map(|(s, a)| (s.scale(r), a.clone())).collect() }
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.check_dim(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (sa, aa) in &self.terms {
            let (dk, dl) = total_shift(aa);
            for (sb, ab) in &other.terms {
                let scale = sa.mul(&sb.shifted(-dk, -dl));
                let mut atoms = aa.clone();
                atoms.extend_from_slice(ab);
                terms.push((scale, atoms));
            }
        }
        Ok(LinearOperator { dim: self.dim, terms })
    }

    /// Exact image of `p`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim.get(), right: p.m() });
        }
        let mut out = TermAccumulator::new(self.dim);
        for ((k, l), part) in p.bidegree_split() {
            let mut cache: HashMap<&[OperatorAtom], Polynomial> = HashMap::new();
            for (scale, atoms) in &self.terms {
                let image = apply_atoms_cached(atoms, &part, &mut cache);
                if image.is_zero() {
                    continue;
                }
                let (dk, dl) = total_shift(atoms);
                let (ik, il) = ((k as i32 + dk) as u32, (l as i32 + dl) as u32);
                let s = scale.eval(ik, il)?;
                if s.is_zero() {
                    continue;
                }
                for (mono, c) in image.terms() {
                    out.add(mono.clone(), c.scale(&s));
                }
            }
        }
        Ok(out.finish())
    }
}

fn apply_atoms_cached<'a>(
    atoms: &'a [OperatorAtom],
    input: &Polynomial,
    cache: &mut HashMap<&'a [OperatorAtom], Polynomial>,
) -> Polynomial {
    if atoms.is_empty() {
        return input.clone();
    }
    if let Some(p) = cache.get(atoms) {
        return p.clone();
    }
    // longest cached suffix
    let mut start = atoms.len();
    let mut current = input.clone();
    for s in 1..atoms.len() {
        if let Some(p) = cache.get(&atoms[s..]) {
            start = s;
            current = p.clone();
            break;
        }
    }
    for idx in (0..start).rev() {
        if current.is_zero() {
            break;
        }
        current = atoms[idx].apply(&current);
        cache.insert(&atoms[idx..], current.clone());
    }
    current
}

/// True iff `(ab − ba − rhs)` annihilates every sample exactly.
pub fn commutator_check(
    a: &LinearOperator,
    b: &LinearOperator,
    rhs: &LinearOperator,
    samples: &[Polynomial],
) -> Result<bool> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    for p in samples {
        let lhs = &ab.apply(p)? - &ba.apply(p)?;
        if lhs != rhs.apply(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monomial-level helper used by other modules: `Δ^n` in one variable group.
pub(crate) fn apply_power(atom: OperatorAtom, p: &Polynomial, n: u32) -> Polynomial {
    let mut out = p.clone();
    for _ in 0..n {
        if out.is_zero() {
            break;
        }
        out = atom.apply(&out);
    }
    out
}

/// Affine Euler expression `H_x = −(E_x + m/2)` shifted by `c`: `H_x + c`.
pub fn hx_plus(dim: Dim, c: Rational) -> EulerPoly {
    EulerPoly::affine(-Rational::one(), Rational::zero(), c - dim.half())
}

/// `H_u + c = −(E_u + m/2) + c`.
pub fn hu_plus(dim: Dim, c: Rational) -> EulerPoly {
    EulerPoly::affine(Rational::zero(), -Rational::one(), c - dim.half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, GaussianRational};
    use OperatorAtom::*;

    fn d(m: usize) -> Dim {
        Dim::new(m).unwrap()
    }

    #[test]
    fn cross_dd_on_inner_product_gives_m() {
        for m in 5..8 {
            let out = CrossDD.apply(&Polynomial::inner_ux(d(m)));
            assert_eq!(out, Polynomial::constant(d(m), GaussianRational::from_integer(m as i64)));
        }
    }

    #[test]
    fn laplacian_of_x1_squared() {
        let out = LaplacianX.apply(&Polynomial::x(d(5), 0).pow(2));
        assert_eq!(out, Polynomial::constant(d(5), 2.into()));
    }

    #[test]
    fn scale_is_evaluated_at_image_bidegree() {
        // (1/(2E_x + m − 4)) |x|² ⟨∂u,∂x⟩ on x1 u1 at m = 6
        let dim = d(6);
        let scale = EulerRationalScale::inverse_affine(int(2), int(0), int(6 - 4));
        let op = LinearOperator::term(dim, scale, vec![NormSqX, CrossDD]);
        let p = &Polynomial::x(dim, 0) * &Polynomial::u(dim, 0);
        let expected = Polynomial::norm_sq_x(dim).scale_rational(&rat(1, 6));
        assert_eq!(op.apply(&p).unwrap(), expected);
    }

    #[test]
    fn euler_after_norm() {
        let dim = d(5);
        let op = LinearOperator::atom(dim, EulerX).compose(&LinearOperator::atom(dim, NormSqX)).unwrap();
        assert_eq!(op.apply(&Polynomial::one(dim)).unwrap(), Polynomial::norm_sq_x(dim).scale_rational(&int(2)));
    }

    #[test]
    fn pole_is_reported() {
        let dim = d(5);
        // 1/(E_x − 2) on a degree-2 polynomial
        let op = LinearOperator::scaling(dim, EulerRationalScale::inverse_affine(int(1), int(0), int(-2)));
        assert_eq!(op.apply(&Polynomial::x(dim, 0).pow(2)), Err(Error::ZeroDenominator(2, 0)));
        assert!(op.apply(&Polynomial::x(dim, 0)).is_ok());
    }

    #[test]
    fn compose_shifts_inner_scale() {
        // (1/E_x) ∘ |x|²: scale seen at final degree k+2 must be 1/(k+2)
        let dim = d(5);
        let inv_ex = LinearOperator::scaling(dim, EulerRationalScale::inverse_affine(int(1), int(0), int(0)));
        let comp = LinearOperator::atom(dim, NormSqX).compose(&inv_ex).unwrap();
        let p = Polynomial::x(dim, 0);
        // inner: (1/1)·x1, then |x|²
        assert_eq!(comp.apply(&p).unwrap(), &Polynomial::norm_sq_x(dim) * &p);
    }

    #[test]
    fn dimension_mismatch_on_compose() {
        let a = LinearOperator::identity(d(5));
        let b = LinearOperator::identity(d(6));
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn euler_poly_shift() {
        // (E_x + 1)(E_u) shifted by (2, -1) → (E_x + 3)(E_u − 1)
        let p = EulerPoly::affine(int(1), int(0), int(1)).mul(&EulerPoly::affine(int(0), int(1), int(0)));
        let s = p.shifted(2, -1);
        let (k, l) = (int(4), int(7));
        assert_eq!(s.eval(&k, &l), int(7 * 6));
    }
}
