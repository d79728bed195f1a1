//! Sparse exact polynomials in two vector variables `x, u ∈ ℝ^m`.
//!
//! A [`Polynomial`] is a map from [`Monomial`]s to nonzero
//! [`GaussianRational`] coefficients. Monomials are ordered graded
//! lexicographically, which fixes the canonical term order used for
//! printing and serialization.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeff::{GaussianRational, Rational};
use crate::error::{Error, Result};

/// The ambient dimension `m` of each vector variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(usize);

impl Dim {
    /// Dimension for the two-vector machinery; rejects `m <= 4`.
    pub fn new(m: usize) -> Result<Self> {
        if m <= 4 {
            return Err(Error::DimensionTooSmall(m));
        }
        Ok(Dim(m))
    }

    /// Any `m >= 1`. Only the classical one-variable sphere formula accepts
    /// such dimensions; the transvector operations re-check `m > 4`.
    pub fn classical(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionTooSmall(0));
        }
        Ok(Dim(m))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `m / 2` as an exact rational.
    pub fn half(self) -> Rational {
        crate::coeff::rat(self.0 as i64, 2)
    }

    pub(crate) fn require_transvector(self) -> Result<()> {
        if self.0 <= 4 {
            Err(Error::DimensionTooSmall(self.0))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A coordinate: `X(j)` is `x_{j+1}`, `U(j)` is `u_{j+1}` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(usize),
    U(usize),
}

impl Var {
    fn slot(self, m: usize) -> usize {
        match self {
            Var::X(j) => j,
            Var::U(j) => m + j,
        }
    }
}

/// Exponent vector `(x^a, u^b)`, stored as one slice of length `2m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u16]>,
}

impl Monomial {
    pub fn one(dim: Dim) -> Self {
        Monomial { exps: vec![0; 2 * dim.0].into_boxed_slice() }
    }

    /// Builds a monomial from its x- and u-exponents; both must have length `m`.
    pub fn new(xexp: &[u16], uexp: &[u16]) -> Self {
        assert_eq!(xexp.len(), uexp.len(), "exponent vectors must have equal length");
        let mut v = Vec::with_capacity(2 * xexp.len());
        v.extend_from_slice(xexp);
        v.extend_from_slice(uexp);
        Monomial { exps: v.into_boxed_slice() }
    }

    pub fn m(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn xexp(&self) -> &[u16] {
        &self.exps[..self.m()]
    }

    pub fn uexp(&self) -> &[u16] {
        &self.exps[self.m()..]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, var: Var) -> u16 {
        self.exps[var.slot(self.m())]
    }

    pub fn bidegree(&self) -> (u32, u32) {
        let m = self.m();
        let k = self.exps[..m].iter().map(|&e| e as u32).sum();
        let l = self.exps[m..].iter().map(|&e| e as u32).sum();
        (k, l)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { exps }
    }

    /// `slot`-th exponent shifted by `delta`; `None` if it would go negative.
    pub(crate) fn shifted(&self, slot: usize, delta: i32) -> Option<Monomial> {
        let e = self.exps[slot] as i32 + delta;
        if e < 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[slot] = e as u16;
        Some(Monomial { exps })
    }

    pub(crate) fn swap_xu(&self) -> Monomial {
        let m = self.m();
        let mut v = Vec::with_capacity(2 * m);
        v.extend_from_slice(&self.exps[m..]);
        v.extend_from_slice(&self.exps[..m]);
        Monomial { exps: v.into_boxed_slice() }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponents of
    /// `x_1, …, x_m, u_1, …, u_m` in turn.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", monomial_text(self).unwrap_or_else(|| "1".into()))
    }
}

/// `x1^2*u3` style text, `None` for the constant monomial.
fn monomial_text(mono: &Monomial) -> Option<String> {
    let m = mono.m();
    let mut parts = Vec::new();
    for (slot, &e) in mono.exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = if slot < m { format!("x{}", slot + 1) } else { format!("u{}", slot - m + 1) };
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

/// Sparse polynomial with exact Gaussian-rational coefficients.
///
/// Values are immutable once built; every operation returns a new polynomial
/// with zero coefficients pruned.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: Dim,
    terms: BTreeMap<Monomial, GaussianRational>,
}

/// Accumulates terms before building a [`Polynomial`].
pub(crate) struct TermAccumulator {
    dim: Dim,
    terms: HashMap<Monomial, GaussianRational>,
}

impl TermAccumulator {
    pub(crate) fn new(dim: Dim) -> Self {
        Self { dim, terms: HashMap::new() }
    }

    pub(crate) fn add(&mut self, mono: Monomial, coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub(crate) fn finish(self) -> Polynomial {
        let terms = self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { dim: self.dim, terms }
    }
}

impl Polynomial {
    pub fn zero(dim: Dim) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: Dim) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    pub fn constant(dim: Dim, c: GaussianRational) -> Self {
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(dim), c);
        }
        p
    }

    /// The coordinate function `var`. Panics if the index is `>= m`.
    pub fn var(dim: Dim, var: Var) -> Self {
        let slot = var.slot(dim.0);
        assert!(
            match var {
                Var::X(j) | Var::U(j) => j < dim.0,
            },
            "variable index out of range"
        );
        let mono = Monomial::one(dim).shifted(slot, 1).expect("non-negative");
        Self::from_terms(dim, [(mono, GaussianRational::one())])
    }

    pub fn x(dim: Dim, j: usize) -> Self {
        Self::var(dim, Var::X(j))
    }

    pub fn u(dim: Dim, j: usize) -> Self {
        Self::var(dim, Var::U(j))
    }

    /// Builds a polynomial from terms, merging duplicates and dropping zeros.
    ///
    /// Panics if a monomial has the wrong length.
    pub fn from_terms<I>(dim: Dim, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut acc = TermAccumulator::new(dim);
        for (mono, c) in terms {
            assert_eq!(mono.m(), dim.0, "monomial length does not match m");
            acc.add(mono, c);
        }
        acc.finish()
    }

    /// `|x|² = Σ x_j²`.
    pub fn norm_sq_x(dim: Dim) -> Self {
        Self::from_terms(
            dim,
            (0..dim.0).map(|j| (Monomial::one(dim).shifted(j, 2).unwrap(), GaussianRational::one())),
        )
    }

    /// `|u|² = Σ u_j²`.
    pub fn norm_sq_u(dim: Dim) -> Self {
        Self::from_terms(
            dim,
            (0..dim.0).map(|j| (Monomial::one(dim).shifted(dim.0 + j, 2).unwrap(), GaussianRational::one())),
        )
    }

    /// `⟨u, x⟩ = Σ u_j x_j`.
    pub fn inner_ux(dim: Dim) -> Self {
        Self::from_terms(
            dim,
            (0..dim.0).map(|j| {
                let mono = Monomial::one(dim).shifted(j, 1).unwrap().shifted(dim.0 + j, 1).unwrap();
                (mono, GaussianRational::one())
            }),
        )
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.dim.0
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> GaussianRational {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// Value at `x = u = 0`.
    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one(self.dim))
    }

    fn check_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch { left: self.dim.0, right: other.dim.0 })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut terms = self.terms.clone();
        for (mono, c) in &other.terms {
            match terms.get_mut(mono) {
                Some(existing) => {
                    *existing += c;
                    if existing.is_zero() {
                        terms.remove(mono);
                    }
                }
                None => {
                    terms.insert(mono.clone(), c.clone());
                }
            }
        }
        Ok(Polynomial { dim: self.dim, terms })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dim(other)?;
        let mut acc = TermAccumulator::new(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add(ma.mul(mb), ca * cb);
            }
        }
        Ok(acc.finish())
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        let terms = self.terms.iter().map(|(mono, v)| (mono.clone(), v * c)).collect();
        Polynomial { dim: self.dim, terms }
    }

    pub fn scale_rational(&self, r: &Rational) -> Polynomial {
        self.scale(&GaussianRational::from_rational(r.clone()))
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(self.dim);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Exact partial derivative with respect to `var`.
    pub fn partial(&self, var: Var) -> Polynomial {
        let slot = var.slot(self.dim.0);
        let mut acc = TermAccumulator::new(self.dim);
        for (mono, c) in &self.terms {
            let e = mono.exps[slot];
            if e == 0 {
                continue;
            }
            acc.add(mono.shifted(slot, -1).unwrap(), c.scale_int(e as i64));
        }
        acc.finish()
    }

    /// Multiplication by the coordinate `var`.
    pub fn mul_var(&self, var: Var) -> Polynomial {
        let slot = var.slot(self.dim.0);
        let terms = self.terms.iter().map(|(mono, c)| (mono.shifted(slot, 1).unwrap(), c.clone())).collect();
        Polynomial { dim: self.dim, terms }
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(mono, c)| (mono.clone(), c.conj())).collect();
        Polynomial { dim: self.dim, terms }
    }

    /// `P(x, u) ↦ P(u, x)`.
    pub fn swap_xu(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(mono, c)| (mono.swap_xu(), c.clone())).collect();
        Polynomial { dim: self.dim, terms }
    }

    /// Splits into bihomogeneous parts keyed by bidegree `(k, l)`.
    pub fn bidegree_split(&self) -> BTreeMap<(u32, u32), Polynomial> {
        let mut out: BTreeMap<(u32, u32), Polynomial> = BTreeMap::new();
        for (mono, c) in &self.terms {
            out.entry(mono.bidegree())
                .or_insert_with(|| Polynomial::zero(self.dim))
                .terms
                .insert(mono.clone(), c.clone());
        }
        out
    }

    /// `Some((k, l))` if every term has bidegree `(k, l)`; `Some((0, 0))` for zero.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(mono) => mono.bidegree(),
            None => return Some((0, 0)),
        };
        if it.all(|mono| mono.bidegree() == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.bidegree().is_some()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|mono| mono.degree()).max()
    }

    /// True if no `u` variable occurs.
    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|mono| mono.uexp().iter().all(|&e| e == 0))
    }

    /// If `self = λ·other` for a scalar `λ`, returns `λ`.
    ///
    /// Returns `None` when `other` is zero and `self` is not, or when the two
    /// are not proportional.
    pub fn ratio_to(&self, other: &Polynomial) -> Option<GaussianRational> {
        if self.dim != other.dim {
            return None;
        }
        let (mono, c) = match other.terms.iter().next() {
            Some(t) => t,
            None => return if self.is_zero() { Some(GaussianRational::zero()) } else { None },
        };
        let lambda = self.coeff(mono) / c.clone();
        if *self == other.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }

    /// Substitutes `x ↦ g x`, `u ↦ g u` for an `m × m` rational matrix `g`.
    pub fn linear_substitute(&self, g: &[Vec<Rational>]) -> Polynomial {
        let m = self.dim.0;
        assert_eq!(g.len(), m, "matrix must be m x m");
        let image = |var: Var| -> Polynomial {
            let (row, is_x) = match var {
                Var::X(j) => (j, true),
                Var::U(j) => (j, false),
            };
            let terms = (0..m).filter(|&c| !g[row][c].is_zero()).map(|c| {
                let v = if is_x { Var::X(c) } else { Var::U(c) };
                let mono = Monomial::one(self.dim).shifted(v.slot(m), 1).unwrap();
                (mono, GaussianRational::from_rational(g[row][c].clone()))
            });
            Polynomial::from_terms(self.dim, terms)
        };
        let images: Vec<Polynomial> = (0..m).map(|j| image(Var::X(j))).chain((0..m).map(|j| image(Var::U(j)))).collect();
        let mut out = Polynomial::zero(self.dim);
        for (mono, c) in &self.terms {
            let mut t = Polynomial::constant(self.dim, c.clone());
            for (slot, &e) in mono.exps.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &images[slot];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// The rotation by the angle with cosine 3/5 in the coordinate plane `(a, b)`.
    pub fn givens_345(dim: Dim, a: usize, b: usize) -> Vec<Vec<Rational>> {
        let m = dim.0;
        assert!(a < m && b < m && a != b, "plane must be two distinct coordinates");
        let mut g: Vec<Vec<Rational>> =
            (0..m).map(|r| (0..m).map(|c| if r == c { Rational::one() } else { Rational::zero() }).collect()).collect();
        let (c, s) = (Rational::new(3.into(), 5.into()), Rational::new(4.into(), 5.into()));
        g[a][a] = c.clone();
        g[b][b] = c;
        g[a][b] = -s.clone();
        g[b][a] = s;
        g
    }

    /// Floating-point evaluation at `(x, u)`; returns `(re, im)`.
    pub fn eval_f64(&self, x: &[f64], u: &[f64]) -> (f64, f64) {
        let m = self.dim.0;
        let mut re = 0.0;
        let mut im = 0.0;
        for (mono, c) in &self.terms {
            let mut v = 1.0;
            for j in 0..m {
                let (a, b) = (mono.exps[j], mono.exps[m + j]);
                if a > 0 {
                    v *= x[j].powi(a as i32);
                }
                if b > 0 {
                    v *= u[j].powi(b as i32);
                }
            }
            let (cr, ci) = c.to_f64_pair();
            re += cr * v;
            im += ci * v;
        }
        (re, im)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    /// Panics on dimension mismatch; use [`Polynomial::try_add`] to handle it.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(mono, c)| (mono.clone(), -c)).collect();
        Polynomial { dim: self.dim, terms }
    }
}

impl std::iter::Sum for Polynomial {
    /// Panics on an empty iterator (no dimension to attach to zero).
    fn sum<I: Iterator<Item = Polynomial>>(mut iter: I) -> Polynomial {
        let first = iter.next().expect("sum of an empty polynomial iterator");
        iter.fold(first, |acc, p| &acc + &p)
    }
}

/// Expression text in the CLI grammar, highest-degree terms first, e.g.
/// `x1^2*u1 - 3/2*u2 + (1+2i)*x1`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in self.terms.iter().rev() {
            let mono_txt = monomial_text(mono);
            let negative_real = c.is_real() && c.re() < &Rational::zero();
            let negative_imaginary = c.re().is_zero() && c.im() < &Rational::zero();
            let (negative, mag) = if negative_real || negative_imaginary {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let coeff_txt = if mag.is_real() {
                crate::coeff::fmt_rational(mag.re())
            } else if mag.re().is_zero() {
                if mag.im().is_one() {
                    "i".to_string()
                } else {
                    format!("{}*i", crate::coeff::fmt_rational(mag.im()))
                }
            } else {
                let sign = if mag.im() < &Rational::zero() { "-" } else { "+" };
                let im_abs = num_traits::Signed::abs(mag.im());
                let im_txt = if im_abs.is_one() { "i".to_string() } else { format!("{}*i", crate::coeff::fmt_rational(&im_abs)) };
                format!("({}{}{})", crate::coeff::fmt_rational(mag.re()), sign, im_txt)
            };
            let body = match (&mono_txt, mag.is_one()) {
                (Some(mt), true) => mt.clone(),
                (Some(mt), false) => format!("{coeff_txt}*{mt}"),
                (None, _) => coeff_txt,
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[m={}]({})", self.dim.0, self)
    }
}
