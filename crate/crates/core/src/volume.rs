//! Volume polynomials, top-degree forms and the distinguished thickenings.
//!
//! For a simple polytope the vertices of `Δ(ε)` are affine in `ε` (each
//! solves the `n` equations of its incident facets), so a fixed
//! triangulation of the combinatorial type turns volume into a polynomial
//! of degree `n`. The top-degree part, written in thickenings `τ = −ε`, is
//! the form `B`. Intersection numbers carry the `n!` polarization factor:
//! the monomial `∏ τ_j^{m_j}` with coefficient `c` pairs to `c · ∏ m_j!`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Monomial, MultiPoly};
use crate::polytope::{FaceLattice, HPolytope};
use crate::resolution::Resolution;
use crate::scalar::{factorial, Field};
use crate::sym::SymExpr;

/// Volume of `Δ(ε)` as a polynomial in the displacements of `p` itself,
/// valid while the combinatorial type of `p` persists.
pub fn volume_polynomial<F: Field>(p: &HPolytope<F>) -> Result<MultiPoly<F>> {
    volume_polynomial_shifted(p, &vec![F::zero(); p.facet_count()])
}

/// As [`volume_polynomial`], in variables `x = ε + shift`. For a resolution
/// `Δ(ε_r)` with `shift = ε_r` the variables are the displacements of the
/// base, so the polynomial evaluates to `vol Δ(x)` near `x = ε_r`.
pub fn volume_polynomial_shifted<F: Field>(p: &HPolytope<F>, shift: &[F]) -> Result<MultiPoly<F>> {
    if !p.is_simple() {
        return Err(Error::NotSimple);
    }
    let (n, f) = (p.dim(), p.facet_count());
    if shift.len() != f {
        return Err(Error::DisplacementLength { expected: f, got: shift.len() });
    }
    // a_I v = x_I − shift_I − b_I, so v = A_I⁻¹ (x_I − shift_I − b_I)
    let symbolic: Vec<Vec<MultiPoly<F>>> = p
        .vertices()
        .iter()
        .map(|v| {
            let rows = v.incident.iter().map(|&i| p.facets()[i].a.clone()).collect();
            let inv = Matrix::from_rows(n, rows).inverse().expect("simple vertex has independent normals");
            (0..n)
                .map(|c| {
                    let mut coef = vec![F::zero(); f];
                    let mut constant = F::zero();
                    for (k, &i) in v.incident.iter().enumerate() {
                        let w = inv[(c, k)].clone();
                        constant = constant - w.clone() * (shift[i].clone() + p.facets()[i].b.clone());
                        coef[i] = w;
                    }
                    MultiPoly::affine(constant, &coef)
                })
                .collect()
        })
        .collect();
    let lattice = FaceLattice::new(p);
    let mut total = MultiPoly::zero(f);
    for simplex in lattice.pulling_triangulation() {
        let base = &symbolic[simplex[0]];
        let rows: Vec<Vec<MultiPoly<F>>> =
            simplex[1..].iter().map(|&k| symbolic[k].iter().zip(base).map(|(x, y)| x.sub(y)).collect()).collect();
        let det = poly_determinant(&rows);
        // orientation is constant on the chamber; read it off at the base
        let pts = p.vertices();
        let numeric = Matrix::from_rows(
            n,
            simplex[1..]
                .iter()
                .map(|&k| pts[k].point.iter().zip(&pts[simplex[0]].point).map(|(x, y)| x.clone() - y.clone()).collect())
                .collect(),
        )
        .determinant();
        total = if numeric.is_negative() { total.sub(&det) } else { total.add(&det) };
    }
    Ok(total.scale(&(F::one() / factorial::<F>(n))))
}

/// Determinant by cofactor expansion with minors memoized on column sets.
fn poly_determinant<F: Field>(rows: &[Vec<MultiPoly<F>>]) -> MultiPoly<F> {
    let n = rows.len();
    let nvars = rows.first().and_then(|r| r.first()).map_or(0, MultiPoly::nvars);
    // minors[mask] = det of the last popcount(mask) rows on the columns in mask
    let mut minors: HashMap<u32, MultiPoly<F>> = HashMap::new();
    minors.insert(0, MultiPoly::constant(nvars, F::one()));
    for size in 1..=n {
        let row = &rows[n - size];
        let masks: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == size).collect();
        for mask in masks {
            let mut acc = MultiPoly::zero(nvars);
            for (pos, col) in (0..n).filter(|c| mask >> c & 1 == 1).enumerate() {
                let term = row[col].mul(&minors[&(mask & !(1 << col))]);
                acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            minors.insert(mask, acc);
        }
    }
    minors.remove(&((1u32 << n) - 1)).unwrap_or_else(|| MultiPoly::constant(nvars, F::one()))
}

/// Homogeneous degree-`n` form in thickening variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeForm<F> {
    n: usize,
    top: MultiPoly<F>,
}

/// Degree-`n` part of `v` with `ε ↦ −τ`.
pub fn top_volume_form<F: Field>(v: &MultiPoly<F>, n: usize) -> Result<VolumeForm<F>> {
    if let Some(d) = v.degree() {
        if d as usize > n {
            return Err(Error::DegreeMismatch { expected: n, got: d as usize });
        }
    }
    let sign = if n.is_multiple_of(2) { F::one() } else { -F::one() };
    let top = v.homogeneous_part(n as u32).scale(&sign);
    if top.is_zero() {
        return Err(Error::ZeroTopForm);
    }
    Ok(VolumeForm { n, top })
}

impl<F: Field> VolumeForm<F> {
    pub fn from_polytope(p: &HPolytope<F>) -> Result<Self> {
        top_volume_form(&volume_polynomial(p)?, p.dim())
    }

    /// The form of a resolution. The top part does not depend on where the
    /// chamber sits, so `Δ(ε_r)`'s own polynomial is used.
    pub fn from_resolution(r: &Resolution<F>) -> Result<Self> {
        Self::from_polytope(r.polytope())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.top.nvars()
    }

    pub fn top(&self) -> &MultiPoly<F> {
        &self.top
    }

    /// Intersection number of one degree-`n` monomial.
    pub fn monomial_value(&self, m: &Monomial) -> F {
        let c = self.top.coeff(m);
        if c.is_zero() {
            return c;
        }
        m.exponents().iter().fold(c, |acc, &k| acc * factorial::<F>(k as usize))
    }

    /// `n!·B(x)` for `x` of degree `n`, times the calibration if given.
    pub fn intersection_number(&self, x: &SymExpr<F>, calibration: Option<&F>) -> Result<F> {
        if x.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: x.degree() });
        }
        if x.nvars() != self.nvars() {
            return Err(Error::VariableCountMismatch { left: self.nvars(), right: x.nvars() });
        }
        let raw = x.terms().fold(F::zero(), |acc, (m, c)| acc + c.clone() * self.monomial_value(m));
        Ok(match calibration {
            Some(k) => raw * k.clone(),
            None => raw,
        })
    }

    /// Intersection number of `x⌢y`.
    pub fn pair(&self, x: &SymExpr<F>, y: &SymExpr<F>) -> Result<F> {
        if x.degree() + y.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: x.degree() + y.degree() });
        }
        self.intersection_number(&x.mul(y), None)
    }

    /// The symmetric multilinear form on `n` thickenings.
    pub fn polarized(&self, args: &[Vec<F>]) -> Result<F> {
        if args.len() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: args.len() });
        }
        let prod = args.iter().fold(SymExpr::one(self.nvars()), |acc, t| acc.mul(&SymExpr::linear(t)));
        Ok(self.intersection_number(&prod, None)? / factorial::<F>(self.n))
    }

    /// The calibration making `x` evaluate to one.
    pub fn calibration_for(&self, x: &SymExpr<F>) -> Result<F> {
        let v = self.intersection_number(x, None)?;
        if v.is_zero() {
            return Err(Error::ZeroTopForm);
        }
        Ok(F::one() / v)
    }
}

/// Thickenings induced by rigid translation: `τ_i = −L_i(e_k)` for each
/// coordinate direction `e_k`.
pub fn translation_thickenings<F: Field>(p: &HPolytope<F>) -> Vec<Vec<F>> {
    (0..p.dim()).map(|k| p.facets().iter().map(|f| -f.a[k].clone()).collect()).collect()
}

/// `ω_i = α_i(p)`, the displacement carrying each facet from `p` to its
/// place. `p` defaults to the vertex centroid.
pub fn lefschetz_element<F: Field>(p: &HPolytope<F>, point: Option<&[F]>) -> Result<Vec<F>> {
    let centroid;
    let point = match point {
        Some(x) => x,
        None => {
            centroid = p.vertex_data().centroid();
            &centroid
        }
    };
    p.facets()
        .iter()
        .map(|f| {
            let s = f.slack(point);
            if s.is_positive() {
                Ok(s)
            } else {
                Err(Error::NotInterior(f.name.clone()))
            }
        })
        .collect()
}

/// Thickenings that agree with some translation near every vertex.
pub fn locally_trivial_space<F: Field>(p: &HPolytope<F>) -> Vec<Vec<F>> {
    let (n, f) = (p.dim(), p.facet_count());
    let mut constraints = Vec::new();
    for v in p.vertices() {
        let rows = v.incident.iter().map(|&i| p.facets()[i].a.clone()).collect();
        for y in Matrix::from_rows(n, rows).left_nullspace() {
            let mut row = vec![F::zero(); f];
            for (k, &i) in v.incident.iter().enumerate() {
                row[i] = y[k].clone();
            }
            constraints.push(row);
        }
    }
    Matrix::from_rows(f, constraints).nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::linalg::in_span;
    use crate::resolution::{enumerate_resolutions, Provenance, ResolutionConfig};
    use crate::sym::sym_basis;
    use itertools::Itertools;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    fn expr(p: &HPolytope<Q>, s: &str) -> SymExpr<Q> {
        SymExpr::parse(s, &p.names()).unwrap()
    }

    /// Lawrence's formula: for a simple polytope and a generic `c`,
    /// `n!·vol = Σ_v ⟨c,v⟩^n / (|det A_v| ∏_k γ_k)` where `A_v` has rows the
    /// inward normals at `v` and `γ = −A_v^{-T} c`.
    fn lawrence_volume(p: &HPolytope<Q>) -> Q {
        let n = p.dim();
        let c: Vec<Q> = (0..n).map(|k| Q::frac(3 + 7 * k as i64, 11 + 2 * k as i64)).collect();
        let mut total = q(0);
        for v in p.vertices() {
            let a = Matrix::from_rows(n, v.incident.iter().map(|&i| p.facets()[i].a.clone()).collect());
            let gamma = a.transpose().solve(&c).unwrap();
            let denom = gamma.iter().fold(a.determinant().abs(), |acc, g| acc * g.clone());
            assert!(!denom.is_zero(), "c must be generic");
            let cv = v.point.iter().zip(&c).fold(q(0), |acc, (x, y)| acc + x.clone() * y.clone());
            let sign = if n.is_multiple_of(2) { q(1) } else { q(-1) };
            total += sign * (0..n).fold(q(1), |acc, _| acc * cv.clone()) / denom;
        }
        total / factorial::<Q>(n)
    }

    #[test]
    fn cube_volume_is_a_product_of_sides() {
        let cube = builtin::<Q>("cube(3)").unwrap();
        let v = volume_polynomial(&cube).unwrap();
        let e = |i| MultiPoly::<Q>::var(6, i);
        let one = MultiPoly::constant(6, q(1));
        let expected = one.sub(&e(0)).sub(&e(1)).mul(&one.sub(&e(2)).sub(&e(3))).mul(&one.sub(&e(4)).sub(&e(5)));
        assert_eq!(v, expected);
        let b = top_volume_form(&v, 3).unwrap();
        let t = |i| MultiPoly::<Q>::var(6, i);
        assert_eq!(b.top(), &t(0).add(&t(1)).mul(&t(2).add(&t(3))).mul(&t(4).add(&t(5))));
    }

    #[test]
    fn simplex_volume_is_a_cube_of_the_gap() {
        let s = builtin::<Q>("simplex(3)").unwrap();
        let v = volume_polynomial(&s).unwrap();
        let gap = MultiPoly::affine(q(1), &[q(-1), q(-1), q(-1), q(-1)]);
        assert_eq!(v, gap.pow(3).scale(&Q::frac(1, 6)));
    }

    #[test]
    fn cube_corner_and_opposite_facets() {
        let cube = builtin::<Q>("cube(3)").unwrap();
        let b = VolumeForm::from_polytope(&cube).unwrap();
        assert_eq!(b.intersection_number(&expr(&cube, "x0*y0*z0"), None).unwrap(), q(1));
        assert_eq!(b.intersection_number(&expr(&cube, "x0*x1*z0"), None).unwrap(), q(0));
        assert_eq!(b.intersection_number(&expr(&cube, "x0*y0"), None), Err(Error::DegreeMismatch { expected: 3, got: 2 }));
    }

    fn pyramid_resolutions() -> (HPolytope<Q>, Vec<(String, VolumeForm<Q>)>) {
        let p = builtin::<Q>("pyr-square").unwrap();
        let set = enumerate_resolutions(&p, &ResolutionConfig { sample_count: 16, ..Default::default() }).unwrap();
        let forms = set.resolutions.iter().map(|r| (r.label(&p), VolumeForm::from_resolution(r).unwrap())).collect();
        (p, forms)
    }

    #[test]
    fn pyramid_calibrated_numbers() {
        let (p, forms) = pyramid_resolutions();
        let ns = &forms.iter().find(|(l, _)| l == "Δ_NS").unwrap().1;
        let ew = &forms.iter().find(|(l, _)| l == "Δ_EW").unwrap().1;
        let neb = expr(&p, "N*E*B");
        assert_eq!(ns.intersection_number(&neb, None).unwrap(), Q::frac(1, 2));
        let k = ns.calibration_for(&neb).unwrap();
        assert_eq!(k, q(2));
        assert_eq!(ns.intersection_number(&expr(&p, "N*E*W"), Some(&k)).unwrap(), q(1));
        let nse = expr(&p, "N*S*E");
        assert_eq!(ns.intersection_number(&nse, Some(&k)).unwrap(), q(0));
        assert_eq!(ew.intersection_number(&nse, Some(&k)).unwrap(), q(1));
        // N + E − B is a translation, so it pairs to zero
        let n = expr(&p, "N");
        let nplus = expr(&p, "N + E - B").mul(&n).mul(&n);
        assert_eq!(ns.intersection_number(&nplus, None).unwrap(), q(0));
    }

    #[test]
    fn resolution_polynomial_matches_independent_volumes() {
        let p = builtin::<Q>("pyr-square").unwrap();
        let set = enumerate_resolutions(&p, &ResolutionConfig { sample_count: 16, ..Default::default() }).unwrap();
        for r in &set.resolutions {
            let poly = volume_polynomial_shifted(r.polytope(), r.eps()).unwrap();
            assert_eq!(poly.degree(), Some(3));
            // five points in the chamber: ε_r scaled by 1, 1/2, 1/3, 2/3, 3/4
            for (a, b) in [(1, 1), (1, 2), (1, 3), (2, 3), (3, 4)] {
                let eps: Vec<Q> = r.eps().iter().map(|e| e * Q::frac(a, b)).collect();
                let here = Resolution::realize(&p, eps.clone(), Provenance::Explicit).unwrap();
                assert_eq!(here.fingerprint(), r.fingerprint());
                assert_eq!(poly.eval(&eps).unwrap(), lawrence_volume(here.polytope()));
                assert_eq!(poly.eval(&eps).unwrap(), here.polytope().volume());
            }
        }
    }

    #[test]
    fn lawrence_agrees_on_simple_builtins() {
        for name in ["cube(3)", "simplex(3)", "prism(simplex(2))", "cube(4)", "product(simplex(2), simplex(2))"] {
            let p = builtin::<Q>(name).unwrap();
            let v = volume_polynomial(&p).unwrap();
            assert_eq!(v.eval(&vec![q(0); p.facet_count()]).unwrap(), lawrence_volume(&p), "{name}");
        }
    }

    #[test]
    fn scaling_identity_on_simple_builtins() {
        for name in ["cube(3)", "simplex(3)", "simplex(4)", "prism(simplex(2))"] {
            let p = builtin::<Q>(name).unwrap();
            let n = p.dim();
            let v = volume_polynomial(&p).unwrap();
            let omega = lefschetz_element(&p, None).unwrap();
            let dir: Vec<Q> = omega.iter().map(|w| -w.clone()).collect();
            let along = v.along_line(&vec![q(0); p.facet_count()], &dir);
            let vol = p.volume();
            let binom: Vec<Q> = (0..=n).map(|k| factorial::<Q>(n) / (factorial::<Q>(k) * factorial::<Q>(n - k)) * vol.clone()).collect();
            assert_eq!(along, binom, "{name}");
            let b = top_volume_form(&v, n).unwrap();
            assert_eq!(b.polarized(&vec![omega; n]).unwrap(), vol);
        }
    }

    #[test]
    fn translations() {
        let cube = builtin::<Q>("cube(3)").unwrap();
        let t = translation_thickenings(&cube);
        assert_eq!(t, vec![
            vec![q(-1), q(1), q(0), q(0), q(0), q(0)],
            vec![q(0), q(0), q(-1), q(1), q(0), q(0)],
            vec![q(0), q(0), q(0), q(0), q(-1), q(1)],
        ]);
        let p = builtin::<Q>("pyr-square").unwrap();
        let t = translation_thickenings(&p);
        assert_eq!(Matrix::from_rows(5, t.clone()).rank(), 3);
        // t = (1/2, 1/2, 1/2) gives N + E − B
        let half = Q::frac(1, 2);
        let combo: Vec<Q> = (0..5).map(|i| t.iter().fold(q(0), |acc, row| acc + row[i].clone() * half.clone())).collect();
        assert_eq!(combo, vec![q(1), q(0), q(1), q(0), q(-1)]);
        for target in [vec![q(1), q(-1), q(0), q(0), q(0)], vec![q(0), q(0), q(1), q(-1), q(0)]] {
            assert!(in_span(&t, &target));
        }
    }

    #[test]
    fn lefschetz_elements() {
        let cube = builtin::<Q>("cube(3)").unwrap();
        let h = Q::frac(1, 2);
        assert_eq!(lefschetz_element(&cube, Some(&[h.clone(), h.clone(), h.clone()])).unwrap(), vec![h; 6]);
        let p = builtin::<Q>("pyr-square").unwrap();
        let w = lefschetz_element(&p, Some(&[q(0), q(0), Q::frac(1, 4)])).unwrap();
        let tq = Q::frac(3, 4);
        assert_eq!(w, vec![tq.clone(), tq.clone(), tq.clone(), tq, Q::frac(1, 2)]);
        assert_eq!(lefschetz_element(&p, Some(&[q(0), q(0), q(0)])), Err(Error::NotInterior("B".into())));
        // moving p changes ω by a translation
        let w2 = lefschetz_element(&p, Some(&[Q::frac(1, 5), q(0), Q::frac(1, 3)])).unwrap();
        let diff: Vec<Q> = w.iter().zip(&w2).map(|(a, b)| a - b).collect();
        assert!(in_span(&translation_thickenings(&p), &diff));
    }

    #[test]
    fn locally_trivial_thickenings() {
        let cube = builtin::<Q>("cube(3)").unwrap();
        assert_eq!(locally_trivial_space(&cube).len(), 6);
        let p = builtin::<Q>("pyr-square").unwrap();
        let s1 = locally_trivial_space(&p);
        assert_eq!(s1.len(), 4);
        for tau in &s1 {
            assert_eq!(tau[0].clone() + tau[1].clone(), tau[2].clone() + tau[3].clone());
        }
        for name in ["pyr-square", "octahedron", "pyr(pyr-square)"] {
            let p = builtin::<Q>(name).unwrap();
            let mut rows = locally_trivial_space(&p);
            let r = rows.len();
            rows.push(lefschetz_element(&p, None).unwrap());
            assert_eq!(Matrix::from_rows(p.facet_count(), rows).rank(), r, "{name}");
        }
    }

    #[test]
    fn nullity_on_simple_builtins() {
        for name in ["cube(3)", "simplex(3)", "prism(simplex(2))", "simplex(4)"] {
            let p = builtin::<Q>(name).unwrap();
            let (n, f) = (p.dim(), p.facet_count());
            let b = VolumeForm::from_polytope(&p).unwrap();
            for idx in (0..f).combinations(n) {
                if p.vertex_data().vertices_on(&idx).is_empty() {
                    assert!(b.monomial_value(&Monomial::from_indices(f, &idx)).is_zero(), "{name} {idx:?}");
                }
            }
            for t in translation_thickenings(&p) {
                let lin = SymExpr::linear(&t);
                for m in sym_basis(f, n - 1) {
                    assert!(b.intersection_number(&lin.mul(&SymExpr::monomial(&m)), None).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn top_form_rejects_zero_and_excess_degree() {
        let v = MultiPoly::constant(3, q(1));
        assert_eq!(top_volume_form(&v, 2), Err(Error::ZeroTopForm));
        let x = MultiPoly::<Q>::var(3, 0).pow(3);
        assert!(matches!(top_volume_form(&x, 2), Err(Error::DegreeMismatch { .. })));
        let nonsimple = builtin::<Q>("octahedron").unwrap();
        assert_eq!(volume_polynomial(&nonsimple), Err(Error::NotSimple));
    }

    #[test]
    fn poly_determinant_matches_numeric() {
        let m = [[2, -1, 0], [1, 3, 4], [0, 5, -2]];
        let rows: Vec<Vec<MultiPoly<Q>>> = m.iter().map(|r| r.iter().map(|&x| MultiPoly::constant(1, q(x))).collect()).collect();
        let num = Matrix::<Q>::from_i64_rows(&[&m[0], &m[1], &m[2]]).determinant();
        assert_eq!(poly_determinant(&rows), MultiPoly::constant(1, num));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn polarized_form_is_symmetric_and_linear(
            a in proptest::collection::vec(-4i64..=4, 5),
            b in proptest::collection::vec(-4i64..=4, 5),
            c in proptest::collection::vec(-4i64..=4, 5),
            s in -3i64..=3,
        ) {
            let p = builtin::<Q>("prism(simplex(2))").unwrap();
            let form = VolumeForm::from_polytope(&p).unwrap();
            let v = |x: &Vec<i64>| x.iter().map(|&k| q(k)).collect::<Vec<Q>>();
            let (a, b, c) = (v(&a), v(&b), v(&c));
            let abc = form.polarized(&[a.clone(), b.clone(), c.clone()]).unwrap();
            prop_assert_eq!(&abc, &form.polarized(&[c.clone(), a.clone(), b.clone()]).unwrap());
            prop_assert_eq!(&abc, &form.polarized(&[b.clone(), a.clone(), c.clone()]).unwrap());
            let sa_plus_c: Vec<Q> = a.iter().zip(&c).map(|(x, y)| x * q(s) + y.clone()).collect();
            let lhs = form.polarized(&[sa_plus_c, b.clone(), c.clone()]).unwrap();
            let rhs = abc * q(s) + form.polarized(&[c.clone(), b.clone(), c.clone()]).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
