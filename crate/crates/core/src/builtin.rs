//! Built-in polytope families.
//!
//! Names: `cube(n)`, `simplex(n)`, `cross(n)`, `pyr(X)`, `prism(X)`,
//! `product(A,B)`, `pyr-square`, and `octahedron` for `cross(3)`. Bare
//! `cube`, `simplex` and `cross` mean dimension 3.
//!
//! Fixed realizations:
//!
//! * `cube(n)`: `x_k ≥ 0` named `<c>0` and `1 − x_k ≥ 0` named `<c>1`, with
//!   coordinate letters `x y z w u v`.
//! * `simplex(n)`: `x_k ≥ 0` named `s<k>` and `1 − Σx ≥ 0` named `s<n>`.
//! * `cross(n)`: `1 − Σ σ_k x_k ≥ 0` for every sign vector, named by the
//!   signs as `p`/`m` strings (`ppm` is `1 − x − y + z ≥ 0`).
//! * `pyr-square`: `N: 1−y−z`, `S: 1+y−z`, `E: 1−x−z`, `W: 1+x−z`, `B: 2z`.
//!   The doubled base row makes `N−S`, `E−W` and `N+E−B` translation
//!   thickenings.
//! * `pyr(X)`: apex at height 1 over the vertex centroid `p` of `X`; facet
//!   `α` of `X` becomes `α(x) − α(p)·t ≥ 0`, plus the base `t ≥ 0`
//!   named `B` (primed until unique).
//! * `prism(X)`: `X × [0,1]` with new facets `bot`, `top` (primed until
//!   unique).
//! * `product(A,B)`: facet names are kept when distinct, otherwise
//!   prefixed `a.`/`b.`.

use crate::error::{Error, Result};
use crate::polytope::{Facet, HPolytope};
use crate::scalar::Field;

pub const MAX_BUILTIN_DIM: usize = 6;

const COORDS: [char; 6] = ['x', 'y', 'z', 'w', 'u', 'v'];

pub fn builtin<F: Field>(spec: &str) -> Result<HPolytope<F>> {
    builtin_with_limit(spec, MAX_BUILTIN_DIM)
}

pub fn builtin_with_limit<F: Field>(spec: &str, max_dim: usize) -> Result<HPolytope<F>> {
    let mut parser = Parser { src: spec, pos: 0, max_dim };
    let p = parser.polytope()?;
    parser.skip_ws();
    if parser.pos != spec.len() {
        return Err(Error::UnknownBuiltin(spec.to_string()));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    max_dim: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn unknown(&self) -> Error {
        Error::UnknownBuiltin(self.src.to_string())
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_')).unwrap_or(rest.len());
        self.pos += len;
        rest[..len].to_string()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unknown())
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.ident().parse().map_err(|_| self.unknown())
    }

    fn guard(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            return Err(Error::DimensionTooLarge { dim, max: self.max_dim });
        }
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(())
    }

    fn polytope<F: Field>(&mut self) -> Result<HPolytope<F>> {
        let name = self.ident();
        let p = match name.as_str() {
            "pyr-square" => pyr_square(),
            "octahedron" => cross(3),
            "cube" | "simplex" | "cross" => {
                let n = if self.eat('(') {
                    let n = self.number()?;
                    self.expect(')')?;
                    n
                } else {
                    3
                };
                self.guard(n)?;
                match name.as_str() {
                    "cube" => cube(n),
                    "simplex" => simplex(n),
                    _ => cross(n),
                }
            }
            "pyr" | "prism" => {
                self.expect('(')?;
                let base: HPolytope<F> = self.polytope()?;
                self.expect(')')?;
                self.guard(base.dim() + 1)?;
                if name == "pyr" {
                    pyramid(&base)
                } else {
                    prism(&base)
                }
            }
            "product" => {
                self.expect('(')?;
                let a: HPolytope<F> = self.polytope()?;
                self.expect(',')?;
                let b: HPolytope<F> = self.polytope()?;
                self.expect(')')?;
                self.guard(a.dim() + b.dim())?;
                product(&a, &b)
            }
            _ => return Err(self.unknown()),
        };
        p
    }
}

fn int_row<F: Field>(a: &[i64]) -> Vec<F> {
    a.iter().map(|&x| F::from_i64(x)).collect()
}

pub fn cube<F: Field>(n: usize) -> Result<HPolytope<F>> {
    let mut facets = Vec::new();
    for k in 0..n {
        let mut lo = vec![0; n];
        lo[k] = 1;
        let mut hi = vec![0; n];
        hi[k] = -1;
        let c = COORDS.get(k).map_or_else(|| format!("c{k}_"), |c| c.to_string());
        facets.push(Facet::new(format!("{c}0"), int_row(&lo), F::zero()));
        facets.push(Facet::new(format!("{c}1"), int_row(&hi), F::one()));
    }
    HPolytope::new(n, facets)
}

pub fn simplex<F: Field>(n: usize) -> Result<HPolytope<F>> {
    let mut facets: Vec<Facet<F>> = (0..n)
        .map(|k| {
            let mut a = vec![0; n];
            a[k] = 1;
            Facet::new(format!("s{k}"), int_row(&a), F::zero())
        })
        .collect();
    facets.push(Facet::new(format!("s{n}"), int_row(&vec![-1; n]), F::one()));
    HPolytope::new(n, facets)
}

pub fn cross<F: Field>(n: usize) -> Result<HPolytope<F>> {
    let facets = (0..1usize << n)
        .map(|mask| {
            let signs: Vec<i64> = (0..n).map(|k| if mask >> (n - 1 - k) & 1 == 0 { 1 } else { -1 }).collect();
            let name: String = signs.iter().map(|&s| if s > 0 { 'p' } else { 'm' }).collect();
            let a: Vec<i64> = signs.iter().map(|s| -s).collect();
            Facet::new(name, int_row(&a), F::one())
        })
        .collect();
    HPolytope::new(n, facets)
}

pub fn pyr_square<F: Field>() -> Result<HPolytope<F>> {
    HPolytope::new(
        3,
        vec![
            Facet::new("N", int_row(&[0, -1, -1]), F::one()),
            Facet::new("S", int_row(&[0, 1, -1]), F::one()),
            Facet::new("E", int_row(&[-1, 0, -1]), F::one()),
            Facet::new("W", int_row(&[1, 0, -1]), F::one()),
            Facet::new("B", int_row(&[0, 0, 2]), F::zero()),
        ],
    )
}

fn fresh_name<F>(facets: &[Facet<F>], base: &str) -> String {
    let mut name = base.to_string();
    while facets.iter().any(|f| f.name == name) {
        name.push('\'');
    }
    name
}

pub fn pyramid<F: Field>(base: &HPolytope<F>) -> Result<HPolytope<F>> {
    let p = base.vertex_data().centroid();
    let mut facets: Vec<Facet<F>> = base
        .facets()
        .iter()
        .map(|f| {
            let mut a = f.a.clone();
            a.push(-f.slack(&p));
            Facet::new(f.name.clone(), a, f.b.clone())
        })
        .collect();
    let mut a = vec![F::zero(); base.dim()];
    a.push(F::one());
    let name = fresh_name(&facets, "B");
    facets.push(Facet::new(name, a, F::zero()));
    HPolytope::new(base.dim() + 1, facets)
}

pub fn prism<F: Field>(base: &HPolytope<F>) -> Result<HPolytope<F>> {
    let n = base.dim();
    let mut facets: Vec<Facet<F>> = base
        .facets()
        .iter()
        .map(|f| {
            let mut a = f.a.clone();
            a.push(F::zero());
            Facet::new(f.name.clone(), a, f.b.clone())
        })
        .collect();
    let mut lo = vec![F::zero(); n + 1];
    lo[n] = F::one();
    let mut hi = vec![F::zero(); n + 1];
    hi[n] = -F::one();
    let bot = fresh_name(&facets, "bot");
    facets.push(Facet::new(bot, lo, F::zero()));
    let top = fresh_name(&facets, "top");
    facets.push(Facet::new(top, hi, F::one()));
    HPolytope::new(n + 1, facets)
}

pub fn product<F: Field>(a: &HPolytope<F>, b: &HPolytope<F>) -> Result<HPolytope<F>> {
    let (m, n) = (a.dim(), b.dim());
    let clash = a.facets().iter().any(|f| b.facets().iter().any(|g| g.name == f.name));
    let label = |prefix: &str, name: &str| if clash { format!("{prefix}.{name}") } else { name.to_string() };
    let mut facets = Vec::new();
    for f in a.facets() {
        let mut row = f.a.clone();
        row.extend(std::iter::repeat_n(F::zero(), n));
        facets.push(Facet::new(label("a", &f.name), row, f.b.clone()));
    }
    for g in b.facets() {
        let mut row = vec![F::zero(); m];
        row.extend(g.a.iter().cloned());
        facets.push(Facet::new(label("b", &g.name), row, g.b.clone()));
    }
    HPolytope::new(m + n, facets)
}
