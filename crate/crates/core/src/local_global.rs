//! Compact local-global cycles of order one.
//!
//! For two resolutions `r, s` and a degree `n−1` expression `η`, the map
//! `γ ↦ (B_r − B_s)(η⌢γ)` is a functional on thickenings. It is concentrated
//! over the faces where `r` and `s` differ. Taking only pairs that differ
//! over a single face `G` gives the cycles local to `G`; comparing their
//! span across all faces counts the relations between them.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;

use crate::linalg::EchelonBasis;
use crate::oracle::{fibonacci_expected, FibonacciCounts};
use crate::resolution::diff_locus;
use crate::scalar::Field;
use crate::sym::{sym_basis, SymExpr};
use crate::uniform::FormFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LGFunctional<F> {
    /// Indices into the family.
    pub pair: (usize, usize),
    pub eta: SymExpr<F>,
    /// Values on the facet basis of thickenings.
    pub values: Vec<F>,
}

impl<F: Field> LGFunctional<F> {
    pub fn new(family: &FormFamily<F>, r: usize, s: usize, eta: &SymExpr<F>) -> Self {
        let f = family.facet_count();
        let values = (0..f)
            .map(|k| {
                let x = eta.mul(&SymExpr::var(f, k));
                let a = family.forms[r].intersection_number(&x, None).expect("degree n");
                let b = family.forms[s].intersection_number(&x, None).expect("degree n");
                a - b
            })
            .collect();
        LGFunctional { pair: (r, s), eta: eta.clone(), values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Value on an arbitrary thickening.
    pub fn apply(&self, tau: &[F]) -> F {
        self.values.iter().zip(tau).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

/// Cycles local to one face of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCycles<F> {
    /// Base vertices of the face.
    pub face: Vec<usize>,
    /// Pairs `(r, s)`, `r < s`, differing over this face only.
    pub pairs: Vec<(usize, usize)>,
    /// Echelon basis of the functionals, first-found in `(r, s, η)` order.
    pub generators: Vec<LGFunctional<F>>,
    pub rank: usize,
}

fn single_face_pairs<F: Field>(family: &FormFamily<F>) -> Vec<((usize, usize), Vec<usize>)> {
    (0..family.len())
        .tuple_combinations()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|(r, s)| {
            let d = diff_locus(&family.set.resolutions[r], &family.set.resolutions[s]).expect("same base");
            (d.len() == 1).then(|| ((r, s), d.into_iter().next().expect("one face")))
        })
        .collect()
}

fn face_cycles_from<F: Field>(family: &FormFamily<F>, face: &[usize], pairs: Vec<(usize, usize)>) -> FaceCycles<F> {
    let (n, f) = (family.dim(), family.facet_count());
    let etas: Vec<SymExpr<F>> = sym_basis(f, n - 1).iter().map(SymExpr::monomial).collect();
    let jobs: Vec<(usize, usize, usize)> = pairs.iter().flat_map(|&(r, s)| (0..etas.len()).map(move |k| (r, s, k))).collect();
    let functionals: Vec<LGFunctional<F>> = jobs.par_iter().map(|&(r, s, k)| LGFunctional::new(family, r, s, &etas[k])).collect();
    let mut echelon = EchelonBasis::new(f);
    let generators: Vec<LGFunctional<F>> = functionals.into_iter().filter(|l| echelon.insert(&l.values)).collect();
    FaceCycles { face: face.to_vec(), pairs, rank: generators.len(), generators }
}

/// Cycles local to base vertex `v`. Empty when no pair of resolutions
/// differs over `v` alone, as at every simple vertex.
pub fn vertex_local_cycles<F: Field>(family: &FormFamily<F>, v: usize) -> FaceCycles<F> {
    let face = vec![v];
    let pairs = single_face_pairs(family).into_iter().filter(|(_, g)| *g == face).map(|(p, _)| p).collect();
    face_cycles_from(family, &face, pairs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactLgReport<F> {
    /// One entry per face that separates two resolutions, ascending.
    pub faces: Vec<FaceCycles<F>>,
    /// Faces separating some pair of resolutions but no pair that differs
    /// over that face alone.
    pub faces_without_cycles: Vec<Vec<usize>>,
    /// Sum of the per-face ranks.
    pub cycle_count: usize,
    pub global_rank: usize,
    pub relations: usize,
    pub fibonacci: FibonacciCounts,
}

pub fn compact_lg_report<F: Field>(family: &FormFamily<F>) -> CompactLgReport<F> {
    let f = family.facet_count();
    let singles = single_face_pairs(family);
    let mut all_faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (r, s) in (0..family.len()).tuple_combinations() {
        all_faces.extend(diff_locus(&family.set.resolutions[r], &family.set.resolutions[s]).expect("same base"));
    }
    let with_pairs: BTreeSet<Vec<usize>> = singles.iter().map(|(_, g)| g.clone()).collect();
    let faces: Vec<FaceCycles<F>> = with_pairs
        .iter()
        .map(|g| {
            let pairs = singles.iter().filter(|(_, h)| h == g).map(|(p, _)| *p).collect();
            face_cycles_from(family, g, pairs)
        })
        .collect();
    let mut global = EchelonBasis::new(f);
    for c in &faces {
        for l in &c.generators {
            global.insert(&l.values);
        }
    }
    let cycle_count: usize = faces.iter().map(|c| c.rank).sum();
    CompactLgReport {
        faces_without_cycles: all_faces.difference(&with_pairs).cloned().collect(),
        cycle_count,
        global_rank: global.rank(),
        relations: cycle_count - global.rank(),
        fibonacci: fibonacci_expected(family.dim()),
        faces,
    }
}
