//! Homology of simple polytopes from the volume pairing.
//!
//! `Sym^i × Sym^{n−i} → Q` is the intersection pairing of the volume form.
//! Its left nullspace is `N^i` and `H^i = Sym^i / N^i`. The same quotient
//! construction, applied to subspaces `U^i`, gives the intersection
//! homology of general polytopes (see [`crate::uniform`]).

use crate::error::{Error, Result};
use crate::linalg::{independent_prefix, EchelonBasis, Matrix};
use crate::polytope::HPolytope;
use crate::sym::{sym_basis, SymExpr};
use crate::volume::{lefschetz_element, translation_thickenings, VolumeForm};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport<F> {
    pub degree: usize,
    /// Dimension of the space being paired (`T^i` or `U^i`).
    pub space_dim: usize,
    pub null_dim: usize,
    pub h_dim: usize,
    /// Elements of the space whose classes form a basis of `H^i`.
    pub representatives: Vec<SymExpr<F>>,
    /// Spanning set of the null space.
    pub null_basis: Vec<SymExpr<F>>,
    /// Pairing of these representatives against those of degree `n − i`;
    /// square and invertible.
    pub pairing: Vec<Vec<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedReport<F> {
    pub n: usize,
    pub degrees: Vec<DegreeReport<F>>,
}

impl<F: Field> GradedReport<F> {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.h_dim).collect()
    }
}

/// Quotients `spaces[i]` by the left kernel of the pairing against
/// `spaces[n − i]`.
pub fn graded_quotient<F: Field>(spaces: &[Vec<SymExpr<F>>], pair: impl Fn(&SymExpr<F>, &SymExpr<F>) -> F) -> GradedReport<F> {
    let n = spaces.len() - 1;
    let matrices: Vec<Matrix<F>> = (0..=n)
        .map(|i| {
            let rows = spaces[i].iter().map(|x| spaces[n - i].iter().map(|y| pair(x, y)).collect()).collect();
            Matrix::from_rows(spaces[n - i].len(), rows)
        })
        .collect();
    let reps: Vec<Vec<usize>> = matrices.iter().map(|m| independent_prefix(m.cols(), &m.row_vecs())).collect();
    let degrees = (0..=n)
        .map(|i| {
            let m = &matrices[i];
            let null_basis = m
                .left_nullspace()
                .into_iter()
                .map(|c| combine(&spaces[i], &c, i))
                .collect();
            let rows = reps[i].iter().map(|&a| reps[n - i].iter().map(|&b| m[(a, b)].clone()).collect()).collect();
            DegreeReport {
                degree: i,
                space_dim: spaces[i].len(),
                null_dim: spaces[i].len() - reps[i].len(),
                h_dim: reps[i].len(),
                representatives: reps[i].iter().map(|&a| spaces[i][a].clone()).collect(),
                null_basis,
                pairing: rows,
            }
        })
        .collect();
    GradedReport { n, degrees }
}

fn combine<F: Field>(basis: &[SymExpr<F>], c: &[F], degree: usize) -> SymExpr<F> {
    let f = basis.first().map_or(0, SymExpr::nvars);
    basis.iter().zip(c).fold(SymExpr::zero(f, degree), |acc, (b, k)| acc.try_add(&b.scale(k)).expect("same degree"))
}

/// Whether `N^i` is spanned by translations times `Sym^{i−1}` together with
/// the monomials on facets that have no common vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationCheck {
    pub degree: usize,
    pub null_dim: usize,
    pub generated_dim: usize,
    /// Every generator lies in `N^i`.
    pub contained: bool,
    pub generates: bool,
}

#[derive(Clone, Debug)]
pub struct SimpleHomology<F> {
    pub form: VolumeForm<F>,
    pub report: GradedReport<F>,
    pub generation: Vec<GenerationCheck>,
}

pub fn monomial_spaces<F: Field>(f: usize, n: usize) -> Vec<Vec<SymExpr<F>>> {
    (0..=n).map(|i| sym_basis(f, i).iter().map(SymExpr::monomial).collect()).collect()
}

pub fn simple_homology<F: Field>(p: &HPolytope<F>) -> Result<SimpleHomology<F>> {
    if !p.is_simple() {
        return Err(Error::NotSimple);
    }
    let form = VolumeForm::from_polytope(p)?;
    let (n, f) = (p.dim(), p.facet_count());
    let spaces = monomial_spaces(f, n);
    let report = graded_quotient(&spaces, |x, y| form.pair(x, y).expect("complementary degrees"));
    let generation = (0..=n).map(|i| generation_check(p, &form, &report.degrees[i])).collect();
    Ok(SimpleHomology { form, report, generation })
}

fn generation_check<F: Field>(p: &HPolytope<F>, form: &VolumeForm<F>, d: &DegreeReport<F>) -> GenerationCheck {
    let (n, f, i) = (p.dim(), p.facet_count(), d.degree);
    let basis = sym_basis(f, i);
    let mut gens: Vec<SymExpr<F>> = Vec::new();
    if i > 0 {
        for t in translation_thickenings(p) {
            let t = SymExpr::linear(&t);
            gens.extend(sym_basis(f, i - 1).iter().map(|m| t.mul(&SymExpr::monomial(m))));
        }
        gens.extend(
            basis
                .iter()
                .filter(|m| p.vertex_data().vertices_on(&m.support()).is_empty())
                .map(SymExpr::monomial),
        );
    }
    let dual = sym_basis(f, n - i);
    let contained = gens.iter().all(|g| dual.iter().all(|m| form.pair(g, &SymExpr::monomial(m)).expect("degrees").is_zero()));
    let mut span = EchelonBasis::new(basis.len());
    for g in &gens {
        span.insert(&g.coords(&basis));
    }
    GenerationCheck {
        degree: i,
        null_dim: d.null_dim,
        generated_dim: span.rank(),
        contained,
        generates: contained && span.rank() == d.null_dim,
    }
}

/// Multiplication by `ω^k: H^i → H^{n−i}`, `k = n − 2i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzMap {
    pub from: usize,
    pub to: usize,
    pub power: usize,
    pub dim_from: usize,
    pub dim_to: usize,
    pub rank: usize,
    pub bijective: bool,
    /// For subspaces: whether `ω^k` carries each representative into the
    /// target space.
    pub lands_in_target: Option<bool>,
}

/// Ranks of `ω^{n−2i}` between the representative bases of a graded
/// report, for `i ≤ n/2`.
pub fn lefschetz_maps<F: Field>(
    report: &GradedReport<F>,
    omega: &[F],
    pair: impl Fn(&SymExpr<F>, &SymExpr<F>) -> F,
) -> Vec<LefschetzMap> {
    let n = report.n;
    let w = SymExpr::linear(omega);
    (0..=n / 2)
        .map(|i| {
            let k = n - 2 * i;
            let wk = w.pow(k);
            let reps = &report.degrees[i].representatives;
            let rows: Vec<Vec<F>> = reps.iter().map(|a| reps.iter().map(|b| pair(&a.mul(&wk), b)).collect()).collect();
            let rank = Matrix::from_rows(reps.len(), rows).rank();
            let (dim_from, dim_to) = (report.degrees[i].h_dim, report.degrees[n - i].h_dim);
            LefschetzMap {
                from: i,
                to: n - i,
                power: k,
                dim_from,
                dim_to,
                rank,
                bijective: dim_from == dim_to && rank == dim_from,
                lands_in_target: None,
            }
        })
        .collect()
}

pub fn strong_lefschetz_check<F: Field>(p: &HPolytope<F>) -> Result<Vec<LefschetzMap>> {
    let h = simple_homology(p)?;
    let omega = lefschetz_element(p, None)?;
    Ok(lefschetz_maps(&h.report, &omega, |x, y| h.form.pair(x, y).expect("complementary degrees")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::oracle::generalized_h_vector;
    use crate::polytope::FaceLattice;
    use crate::sym::cup_product;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    const SIMPLE: [&str; 5] = ["cube(3)", "simplex(3)", "simplex(4)", "prism(simplex(2))", "cube(4)"];

    #[test]
    fn dims_match_the_oracle() {
        for name in SIMPLE {
            let p = builtin::<Q>(name).unwrap();
            let h = simple_homology(&p).unwrap();
            let oracle = generalized_h_vector(&FaceLattice::new(&p)).unwrap();
            let betti: Vec<i64> = h.report.betti().iter().map(|&x| x as i64).collect();
            assert_eq!(betti, oracle.0, "{name}");
            assert_eq!(h.report.betti()[1], p.facet_count() - p.dim());
        }
        let cube = builtin::<Q>("cube(3)").unwrap();
        assert_eq!(simple_homology(&cube).unwrap().report.betti(), [1, 3, 3, 1]);
        let prism = builtin::<Q>("prism(simplex(2))").unwrap();
        assert_eq!(simple_homology(&prism).unwrap().report.betti(), [1, 2, 2, 1]);
    }

    #[test]
    fn representative_pairings_are_perfect() {
        for name in SIMPLE {
            let p = builtin::<Q>(name).unwrap();
            let r = simple_homology(&p).unwrap().report;
            for d in &r.degrees {
                let m = Matrix::from_rows(d.h_dim, d.pairing.clone());
                assert_eq!(m.rows(), d.h_dim);
                assert_eq!(m.rank(), d.h_dim);
                assert_eq!(d.h_dim, r.degrees[r.n - d.degree].h_dim);
                assert_eq!(d.null_basis.len(), d.null_dim);
            }
        }
    }

    #[test]
    fn null_spaces_are_generated_by_translations_and_empty_faces() {
        for name in SIMPLE {
            let p = builtin::<Q>(name).unwrap();
            for g in simple_homology(&p).unwrap().generation {
                assert!(g.contained, "{name} degree {}", g.degree);
                assert!(g.generates, "{name} degree {}: {} of {}", g.degree, g.generated_dim, g.null_dim);
            }
        }
    }

    #[test]
    fn cup_products_on_the_cube() {
        let cube = builtin::<Q>("cube(3)").unwrap();
        let names = cube.names();
        let h = simple_homology(&cube).unwrap();
        let x0 = SymExpr::<Q>::parse("x0", &names).unwrap();
        let x1 = SymExpr::<Q>::parse("x1", &names).unwrap();
        // x0⌢x1 pairs to zero with everything, so it vanishes in H²
        let prod = cup_product(&x0, &x1, 3).unwrap();
        for m in sym_basis(6, 1) {
            assert_eq!(h.form.pair(&prod, &SymExpr::monomial(&m)).unwrap(), q(0));
        }
        let corner = SymExpr::<Q>::parse("x0*y0*z0", &names).unwrap();
        assert_eq!(h.form.pair(&corner, &SymExpr::one(6)).unwrap(), q(1));
    }

    #[test]
    fn null_spaces_are_ideals() {
        let p = builtin::<Q>("prism(simplex(2))").unwrap();
        let h = simple_homology(&p).unwrap();
        let (n, f) = (3, 5);
        for i in 0..=n {
            for j in 0..=n - i {
                for x in &h.report.degrees[i].null_basis {
                    for m in sym_basis(f, j) {
                        let xm = x.mul(&SymExpr::monomial(&m));
                        for z in sym_basis(f, n - i - j) {
                            assert!(h.form.pair(&xm, &SymExpr::monomial(&z)).unwrap().is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn strong_lefschetz_on_simple_builtins() {
        for name in SIMPLE {
            let p = builtin::<Q>(name).unwrap();
            let maps = strong_lefschetz_check(&p).unwrap();
            assert!(maps.iter().all(|m| m.bijective), "{name}: {maps:?}");
        }
        let cube = builtin::<Q>("cube(3)").unwrap();
        let maps = strong_lefschetz_check(&cube).unwrap();
        assert_eq!(maps[1], LefschetzMap { from: 1, to: 2, power: 1, dim_from: 3, dim_to: 3, rank: 3, bijective: true, lands_in_target: None });
        // degree 0 → n is multiplication by n!·vol
        let h = simple_homology(&cube).unwrap();
        let w = SymExpr::linear(&lefschetz_element(&cube, None).unwrap());
        assert_eq!(h.form.pair(&w.pow(3), &SymExpr::one(6)).unwrap(), q(6) * cube.volume());
    }

    #[test]
    fn rejects_non_simple() {
        let p = builtin::<Q>("pyr-square").unwrap();
        assert!(matches!(simple_homology(&p), Err(Error::NotSimple)));
    }
}
