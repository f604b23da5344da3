//! Homogeneous elements of the symmetric powers of thickening space.
//!
//! A degree-`i` element is a homogeneous polynomial of degree `i` in one
//! variable per facet. Products like `N⌢E⌢B` are ordinary commutative
//! products of those variables.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymExpr<F> {
    degree: usize,
    poly: MultiPoly<F>,
}

/// Monomial basis of `Sym^i` in `f` variables: index multisets in
/// lexicographic order (`e0e0, e0e1, …, e1e1, …`).
pub fn sym_basis(f: usize, i: usize) -> Vec<Monomial> {
    (0..f).combinations_with_replacement(i).map(|idx| Monomial::from_indices(f, &idx)).collect()
}

impl<F: Field> SymExpr<F> {
    pub fn zero(f: usize, degree: usize) -> Self {
        SymExpr { degree, poly: MultiPoly::zero(f) }
    }

    /// The empty product.
    pub fn one(f: usize) -> Self {
        SymExpr { degree: 0, poly: MultiPoly::constant(f, F::one()) }
    }

    pub fn var(f: usize, i: usize) -> Self {
        SymExpr { degree: 1, poly: MultiPoly::var(f, i) }
    }

    pub fn monomial(m: &Monomial) -> Self {
        SymExpr { degree: m.degree() as usize, poly: MultiPoly::from_terms(m.nvars(), [(m.clone(), F::one())]) }
    }

    /// Degree-1 element with the given coordinates on the facets.
    pub fn linear(tau: &[F]) -> Self {
        let f = tau.len();
        SymExpr { degree: 1, poly: MultiPoly::from_terms(f, tau.iter().enumerate().map(|(i, c)| (Monomial::var(f, i), c.clone()))) }
    }

    /// Requires `poly` to be homogeneous of degree `degree` (zero allowed).
    pub fn from_poly(degree: usize, poly: MultiPoly<F>) -> Result<Self> {
        match poly.degree() {
            Some(d) if !poly.is_homogeneous(d) || d as usize != degree => {
                Err(Error::DegreeMismatch { expected: degree, got: d as usize })
            }
            _ => Ok(SymExpr { degree, poly }),
        }
    }

    /// Element with coordinates `c` on the given monomial basis.
    pub fn from_coords(degree: usize, basis: &[Monomial], c: &[F]) -> Self {
        let f = basis.first().map_or(0, Monomial::nvars);
        SymExpr { degree, poly: MultiPoly::from_terms(f, basis.iter().cloned().zip(c.iter().cloned())) }
    }

    /// Coordinates on a monomial basis that spans the support.
    pub fn coords(&self, basis: &[Monomial]) -> Vec<F> {
        basis.iter().map(|m| self.poly.coeff(m)).collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &MultiPoly<F> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.poly.terms()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::VariableCountMismatch { left: self.nvars(), right: other.nvars() });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(SymExpr { degree: self.degree, poly: self.poly.add(&other.poly) })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(SymExpr { degree: self.degree, poly: self.poly.sub(&other.poly) })
    }

    pub fn scale(&self, s: &F) -> Self {
        SymExpr { degree: self.degree, poly: self.poly.scale(s) }
    }

    /// Product without a degree cap.
    pub fn mul(&self, other: &Self) -> Self {
        SymExpr { degree: self.degree + other.degree, poly: self.poly.mul(&other.poly) }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(SymExpr::one(self.nvars()), |acc, _| acc.mul(self))
    }

    /// Parses expressions such as `E*W - N*S`, `N⌢E⌢B`, `2*N^2 + 1/2*E*B`
    /// over the given facet names. The result must be homogeneous.
    pub fn parse(src: &str, names: &[String]) -> Result<Self> {
        let mut p = ExprParser { src, pos: 0, names };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.error("trailing input"));
        }
        let degree = e.degree().unwrap_or(0);
        if !e.is_homogeneous(degree) {
            return Err(Error::BadExpression(format!("{src:?} is not homogeneous")));
        }
        Ok(SymExpr { degree: degree as usize, poly: e })
    }

    /// Renders with `⌢` between factors.
    pub fn display_with(&self, names: &[String]) -> String {
        self.poly.display_joined(names, "⌢")
    }
}

/// `x⌢y`, refusing products above the top degree `n`.
pub fn cup_product<F: Field>(x: &SymExpr<F>, y: &SymExpr<F>, n: usize) -> Result<SymExpr<F>> {
    if x.nvars() != y.nvars() {
        return Err(Error::VariableCountMismatch { left: x.nvars(), right: y.nvars() });
    }
    let got = x.degree + y.degree;
    if got > n {
        return Err(Error::DegreeOverflow { got, max: n });
    }
    Ok(x.mul(y))
}

impl<F: Field> fmt::Display for SymExpr<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [String],
}

impl ExprParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::BadExpression(format!("{what} at byte {} of {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
    }

    fn take_while(&mut self, ok: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !ok(c)).unwrap_or(rest.len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn sum<F: Field>(&mut self) -> Result<MultiPoly<F>> {
        let f = self.names.len();
        let mut acc = MultiPoly::zero(f);
        let mut sign = match self.peek() {
            Some('-') => {
                self.bump('-');
                -F::one()
            }
            Some('+') => {
                self.bump('+');
                F::one()
            }
            _ => F::one(),
        };
        loop {
            acc = acc.add(&self.product::<F>()?.scale(&sign));
            match self.peek() {
                Some(c @ ('+' | '-')) => {
                    self.bump(c);
                    sign = if c == '+' { F::one() } else { -F::one() };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product<F: Field>(&mut self) -> Result<MultiPoly<F>> {
        let mut acc = self.power::<F>()?;
        while let Some(c @ ('*' | '⌢' | '·')) = self.peek() {
            self.bump(c);
            acc = acc.mul(&self.power::<F>()?);
        }
        Ok(acc)
    }

    fn power<F: Field>(&mut self) -> Result<MultiPoly<F>> {
        let base = self.atom::<F>()?;
        if self.peek() == Some('^') {
            self.bump('^');
            self.skip_ws();
            let k: u32 = self.take_while(|c| c.is_ascii_digit()).parse().map_err(|_| self.error("bad exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom<F: Field>(&mut self) -> Result<MultiPoly<F>> {
        let f = self.names.len();
        match self.peek() {
            Some('(') => {
                self.bump('(');
                let e = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.bump(')');
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let lit = self.take_while(|c| c.is_ascii_digit() || c == '/').to_string();
                let v = F::parse_exact(&lit).ok_or_else(|| self.error("bad number"))?;
                Ok(MultiPoly::constant(f, v))
            }
            Some(c) if is_name_char(c) => {
                let start = self.pos;
                let name = self.take_while(is_name_char).to_string();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(MultiPoly::var(f, i)),
                    None => {
                        self.pos = start;
                        Err(Error::UnknownFacet(name))
                    }
                }
            }
            _ => Err(self.error("expected a facet name, number or '('")),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'')
}
