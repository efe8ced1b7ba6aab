//! Sparse multivariate polynomials with real coefficients and exact integer
//! exponents.
//!
//! Terms are kept sorted by exponent vector and like terms are merged, so two
//! polynomials built from the same monomials in any order compare equal.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(coeff: f64, exponents: Vec<u32>) -> Self {
        Self { coeff, exponents }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn eval(&self, q: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(q)
            .fold(self.coeff, |acc, (&e, &x)| acc * x.powi(e as i32))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    /// Builds a polynomial in `dim` variables, merging like terms and dropping
    /// zero coefficients.
    pub fn new(dim: usize, terms: Vec<Monomial>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("polynomial dimension must be positive".into()));
        }
        for m in &terms {
            if m.exponents.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.exponents.len(),
                });
            }
            if !m.coeff.is_finite() {
                return Err(Error::Domain("non-finite coefficient".into()));
            }
        }
        Ok(Self::from_terms_unchecked(dim, terms))
    }

    fn from_terms_unchecked(dim: usize, mut terms: Vec<Monomial>) -> Self {
        terms.sort_by(|a, b| a.exponents.cmp(&b.exponents));
        let mut merged: Vec<Monomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exponents == t.exponents => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|m| m.coeff != 0.0);
        Self { dim, terms: merged }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_terms_unchecked(dim, vec![Monomial::new(c, vec![0; dim])])
    }

    /// The coordinate function `q_var`.
    pub fn variable(dim: usize, var: usize) -> Self {
        let mut e = vec![0; dim];
        e[var] = 1;
        Self::from_terms_unchecked(dim, vec![Monomial::new(1.0, e)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Returns the common total degree if every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.first()?.degree();
        self.terms
            .iter()
            .all(|m| m.degree() == first)
            .then_some(first)
    }

    pub fn eval(&self, q: &[f64]) -> f64 {
        debug_assert_eq!(q.len(), self.dim);
        self.terms.iter().map(|m| m.eval(q)).sum()
    }

    /// Exact partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|m| m.exponents[var] > 0)
            .map(|m| {
                let mut e = m.exponents.clone();
                let k = e[var];
                e[var] -= 1;
                Monomial::new(m.coeff * k as f64, e)
            })
            .collect();
        Self::from_terms_unchecked(self.dim, terms)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.dim).map(|i| self.derivative(i)).collect()
    }

    /// Symmetric matrix of second partials, row-major `dim × dim`.
    pub fn hessian(&self) -> Vec<Self> {
        let grad = self.gradient();
        let mut out = Vec::with_capacity(self.dim * self.dim);
        for gi in &grad {
            for j in 0..self.dim {
                out.push(gi.derivative(j));
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|m| Monomial::new(m.coeff * s, m.exponents.clone()))
            .collect();
        Self::from_terms_unchecked(self.dim, terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms_unchecked(self.dim, terms)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let e = a
                    .exponents
                    .iter()
                    .zip(&b.exponents)
                    .map(|(x, y)| x + y)
                    .collect();
                terms.push(Monomial::new(a.coeff * b.coeff, e));
            }
        }
        Self::from_terms_unchecked(self.dim, terms)
    }

    /// Taylor polynomial of the given order centered at `center`, expanded
    /// back into monomials of `q`:
    /// `Σ_{|α| ≤ order} ∂^α P(center) / α! · (q − center)^α`.
    pub fn taylor(&self, center: &[f64], order: u32) -> Self {
        self.taylor_range(center, 0, order)
    }

    /// Like [`Polynomial::taylor`] but keeping only multi-indices with
    /// `min_order ≤ |α| ≤ max_order`.
    pub fn taylor_range(&self, center: &[f64], min_order: u32, max_order: u32) -> Self {
        let d = self.dim;
        let mut acc = Self::zero(d);
        for alpha in multi_indices(d, max_order) {
            let k: u32 = alpha.iter().sum();
            if k < min_order {
                continue;
            }
            let mut deriv = self.clone();
            let mut factorial = 1.0;
            for (var, &a) in alpha.iter().enumerate() {
                for n in 1..=a {
                    deriv = deriv.derivative(var);
                    factorial *= n as f64;
                }
            }
            let c = deriv.eval(center) / factorial;
            if c == 0.0 {
                continue;
            }
            let mut term = Self::constant(d, c);
            for (var, &a) in alpha.iter().enumerate() {
                let shift = Self::variable(d, var).add(&Self::constant(d, -center[var]));
                for _ in 0..a {
                    term = term.mul(&shift);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

/// All multi-indices in `dim` variables with total degree ≤ `max_order`,
/// in graded lexicographic order.
pub fn multi_indices(dim: usize, max_order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=max_order {
        let mut current = vec![0u32; dim];
        fill_indices(&mut out, &mut current, 0, total);
    }
    out
}

fn fill_indices(out: &mut Vec<Vec<u32>>, current: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.to_vec());
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        fill_indices(out, current, pos + 1, remaining - k);
    }
    current[pos] = 0;
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", m.coeff)?;
            for (v, &e) in m.exponents.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*q{}", v + 1)?,
                    _ => write!(f, "*q{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}
