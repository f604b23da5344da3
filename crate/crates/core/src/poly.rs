//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Exponent vector. Ordered graded-lexicographically: lower total degree
/// first, then the larger exponent of the earliest variable first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    /// Monomial from a multiset of variable indices.
    pub fn from_indices(nvars: usize, idx: &[usize]) -> Self {
        let mut e = vec![0; nvars];
        for &i in idx {
            e[i] += 1;
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Variable indices with multiplicity, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect()
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in a fixed number of variables; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), F::one());
        p
    }

    /// `c + Σ coef_i x_i`.
    pub fn affine(c: F, coef: &[F]) -> Self {
        let nvars = coef.len();
        let mut p = Self::constant(nvars, c);
        for (i, a) in coef.iter().enumerate() {
            p.add_term(Monomial::var(nvars, i), a.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        assert_eq!(m.nvars(), self.nvars, "monomial variable count mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    /// Panicking `try_add` for internal use where variable counts agree.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("variable count mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("variable count mismatch")
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, F::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, point: &[F]) -> Result<F> {
        if point.len() != self.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: point.len() });
        }
        Ok(self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let v = m
                .exponents()
                .iter()
                .zip(point)
                .filter(|(&k, _)| k > 0)
                .fold(c.clone(), |v, (&k, x)| (0..k).fold(v, |v, _| v * x.clone()));
            acc + v
        }))
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Substitutes `x_i ↦ s·x_i` for every variable: degree-`d` terms pick
    /// up `s^d`.
    pub fn rescale_vars(&self, s: &F) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let v = (0..m.degree()).fold(c.clone(), |v, _| v * s.clone());
                    (!v.is_zero()).then(|| (m.clone(), v))
                })
                .collect(),
        }
    }

    /// Univariate restriction along the line `x = base + t·dir`, returned as
    /// coefficients of `t^0, t^1, …`.
    pub fn along_line(&self, base: &[F], dir: &[F]) -> Vec<F> {
        let lines: Vec<MultiPoly<F>> = base
            .iter()
            .zip(dir)
            .map(|(b, d)| MultiPoly::affine(b.clone(), std::slice::from_ref(d)))
            .collect();
        let mut acc = MultiPoly::zero(1);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(1, c.clone());
            for (i, &k) in m.exponents().iter().enumerate() {
                if k > 0 {
                    term = term.mul(&lines[i].pow(k));
                }
            }
            acc = acc.add(&term);
        }
        let deg = acc.degree().unwrap_or(0) as usize;
        (0..=deg).map(|k| acc.coeff(&Monomial::from_exponents(vec![k as u32]))).collect()
    }

    /// Renders with the given variable names in ascending graded-lex order.
    pub fn display_with(&self, names: &[String]) -> String {
        self.display_joined(names, "*")
    }

    /// As [`display_with`](Self::display_with), joining variables with
    /// `product`; a coefficient is still attached with `*`.
    pub fn display_joined(&self, names: &[String], product: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&factors.join(product));
            } else {
                out.push_str(&format!("{}*{}", abs, factors.join(product)));
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("e{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}
