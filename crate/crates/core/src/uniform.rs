//! Uniform expressions and intersection homology of general polytopes.
//!
//! Every resolution `Δ_r` has its own volume form `B_r`. An expression is
//! uniform when its pairings do not depend on `r`. The spaces `U^i` are
//! built bottom-up: `U^0` is the scalars and `U^1` all thickenings; for
//! `2 ≤ i ≤ n/2`, `U^i` holds the `ξ` with `B_r(ξ⌢ω^{n−2i+1}⌢η)` uniform for
//! all `η ∈ U^{i−1}`; above the middle, `U^j` holds the `ξ` with `B_r(ξ⌢η)`
//! uniform for all `η ∈ U^{n−j}`. Pairing `U^i` with `U^{n−i}` and dividing
//! out null spaces gives the intersection homology.
//!
//! Uniformity is relative to the enumerated family. Extra resolutions can
//! only add constraints, so a missing resolution can only make the spaces,
//! and the Betti numbers, too large. Hold-out resolutions from a separate
//! seed check this.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{in_span, EchelonBasis, Matrix};
use crate::polytope::HPolytope;
use crate::resolution::{enumerate_resolutions, sample_resolutions, Resolution, ResolutionConfig, ResolutionSet};
use crate::scalar::Field;
use crate::simple::{graded_quotient, lefschetz_maps, GradedReport, LefschetzMap};
use crate::sym::{sym_basis, SymExpr};
use crate::volume::{lefschetz_element, VolumeForm};

const HOLDOUT_STREAM: u64 = 0x686f_6c64_6f75_7421;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyConfig {
    pub resolutions: ResolutionConfig,
    /// Sampled resolutions kept out of the constraints.
    pub holdout: usize,
    /// Defaults to a stream derived from the main seed.
    pub holdout_seed: Option<u64>,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig { resolutions: ResolutionConfig::default(), holdout: 24, holdout_seed: None }
    }
}

impl FamilyConfig {
    pub fn holdout_seed(&self) -> u64 {
        self.holdout_seed.unwrap_or(self.resolutions.seed ^ HOLDOUT_STREAM)
    }
}

/// A form of the family or of the hold-out set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormRef {
    Family(usize),
    Holdout(usize),
}

impl fmt::Display for FormRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormRef::Family(i) => write!(f, "r{i}"),
            FormRef::Holdout(i) => write!(f, "holdout{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormFamily<F> {
    pub base: HPolytope<F>,
    pub set: ResolutionSet<F>,
    /// `forms[k]` belongs to `set.resolutions[k]`.
    pub forms: Vec<VolumeForm<F>>,
    pub holdout: Vec<(Resolution<F>, VolumeForm<F>)>,
    pub omega: Vec<F>,
}

pub fn resolution_forms<F: Field>(p: &HPolytope<F>, cfg: &FamilyConfig) -> Result<FormFamily<F>> {
    let set = enumerate_resolutions(p, &cfg.resolutions)?;
    if set.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let forms = set.resolutions.par_iter().map(VolumeForm::from_resolution).collect::<Result<Vec<_>>>()?;
    let holdout = if p.is_simple() || cfg.holdout == 0 {
        Vec::new()
    } else {
        sample_resolutions(p, cfg.holdout, cfg.holdout_seed())
            .into_par_iter()
            .map(|r| VolumeForm::from_resolution(&r).map(|b| (r, b)))
            .collect::<Result<Vec<_>>>()?
    };
    let omega = lefschetz_element(p, None)?;
    Ok(FormFamily { base: p.clone(), set, forms, holdout, omega })
}

impl<F: Field> FormFamily<F> {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn facet_count(&self) -> usize {
        self.base.facet_count()
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn form(&self, r: FormRef) -> &VolumeForm<F> {
        match r {
            FormRef::Family(i) => &self.forms[i],
            FormRef::Holdout(i) => &self.holdout[i].1,
        }
    }

    /// Family forms, then hold-out forms.
    pub fn all_refs(&self) -> Vec<FormRef> {
        (0..self.forms.len()).map(FormRef::Family).chain((0..self.holdout.len()).map(FormRef::Holdout)).collect()
    }

    /// Recomputes `ω` from another interior point.
    pub fn with_omega_at(mut self, point: &[F]) -> Result<Self> {
        self.omega = lefschetz_element(&self.base, Some(point))?;
        Ok(self)
    }

    pub fn omega_expr(&self) -> SymExpr<F> {
        SymExpr::linear(&self.omega)
    }

    /// The expressions each element of `U^i` must pair uniformly against.
    fn partners(&self, i: usize, spaces: &[UniformSpace<F>]) -> Vec<SymExpr<F>> {
        let n = self.dim();
        if 2 * i <= n {
            let wk = self.omega_expr().pow(n - 2 * i + 1);
            spaces[i - 1].basis.iter().map(|eta| eta.mul(&wk)).collect()
        } else {
            spaces[n - i].basis.clone()
        }
    }
}

/// A witness that some expression is not uniform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<F> {
    pub first: FormRef,
    pub second: FormRef,
    /// Complementary expression the pairing was taken against, if any.
    pub against: Option<SymExpr<F>>,
    pub values: (F, F),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub form: usize,
    /// Index of the partner element (`η`) in the generating space.
    pub partner: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformSpace<F> {
    pub degree: usize,
    pub basis: Vec<SymExpr<F>>,
    /// Pairs `(r, η)` whose difference rows were independent, in order.
    pub constraints: Vec<Constraint>,
}

impl<F: Field> UniformSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &SymExpr<F>) -> bool {
        let f = x.nvars();
        let monos = sym_basis(f, self.degree);
        let span: Vec<Vec<F>> = self.basis.iter().map(|b| b.coords(&monos)).collect();
        x.degree() == self.degree && in_span(&span, &x.coords(&monos))
    }
}

/// `U^0, …, U^n`.
pub fn uniform_spaces<F: Field>(family: &FormFamily<F>) -> Vec<UniformSpace<F>> {
    spaces_up_to(family, family.dim())
}

fn spaces_up_to<F: Field>(family: &FormFamily<F>, top: usize) -> Vec<UniformSpace<F>> {
    let mut spaces: Vec<UniformSpace<F>> = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let space = uniform_space_from(family, i, &spaces);
        spaces.push(space);
    }
    spaces
}

/// `U^i` alone (the lower spaces are computed and dropped).
pub fn uniform_space<F: Field>(family: &FormFamily<F>, i: usize) -> Result<UniformSpace<F>> {
    let n = family.dim();
    if i > n {
        return Err(Error::DegreeOverflow { got: i, max: n });
    }
    Ok(spaces_up_to(family, i).swap_remove(i))
}

fn uniform_space_from<F: Field>(family: &FormFamily<F>, i: usize, lower: &[UniformSpace<F>]) -> UniformSpace<F> {
    let f = family.facet_count();
    let monos = sym_basis(f, i);
    if i <= 1 {
        let basis = monos.iter().map(SymExpr::monomial).collect();
        return UniformSpace { degree: i, basis, constraints: Vec::new() };
    }
    let partners = family.partners(i, lower);
    // rows indexed by (form, partner) in canonical order
    let jobs: Vec<(usize, usize)> = (1..family.len()).flat_map(|r| (0..partners.len()).map(move |k| (r, k))).collect();
    let rows: Vec<Vec<F>> = jobs
        .par_iter()
        .map(|&(r, k)| {
            monos
                .iter()
                .map(|m| {
                    let x = SymExpr::monomial(m).mul(&partners[k]);
                    let a = family.forms[r].intersection_number(&x, None).expect("degree n");
                    let b = family.forms[0].intersection_number(&x, None).expect("degree n");
                    a - b
                })
                .collect()
        })
        .collect();
    let mut echelon = EchelonBasis::new(monos.len());
    let mut constraints = Vec::new();
    for (&(form, partner), row) in jobs.iter().zip(&rows) {
        if echelon.insert(row) {
            constraints.push(Constraint { form, partner });
        }
    }
    let independent: Vec<Vec<F>> = jobs
        .iter()
        .zip(rows)
        .filter(|((form, partner), _)| constraints.contains(&Constraint { form: *form, partner: *partner }))
        .map(|(_, row)| row)
        .collect();
    let kernel = Matrix::from_rows(monos.len(), independent).nullspace();
    let basis = kernel.iter().map(|c| SymExpr::from_coords(i, &monos, c)).collect();
    UniformSpace { degree: i, basis, constraints }
}

#[derive(Clone, Debug)]
pub enum UniformityMode<F> {
    /// `x` has degree `n`; compare the intersection numbers themselves.
    FullDegree,
    /// Compare the pairings of `x` with each element of a complementary
    /// basis.
    Against(Vec<SymExpr<F>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uniformity<F> {
    pub uniform: bool,
    /// The common value (full-degree mode only).
    pub value: Option<F>,
    pub witness: Option<Witness<F>>,
}

/// Compares `x` across every family and hold-out form.
pub fn uniformity_test<F: Field>(family: &FormFamily<F>, x: &SymExpr<F>, mode: &UniformityMode<F>) -> Result<Uniformity<F>> {
    let n = family.dim();
    let partners: Vec<Option<SymExpr<F>>> = match mode {
        UniformityMode::FullDegree => {
            if x.degree() != n {
                return Err(Error::DegreeMismatch { expected: n, got: x.degree() });
            }
            vec![None]
        }
        UniformityMode::Against(basis) => {
            if let Some(b) = basis.iter().find(|b| b.degree() + x.degree() != n) {
                return Err(Error::DegreeMismatch { expected: n - x.degree(), got: b.degree() });
            }
            basis.iter().cloned().map(Some).collect()
        }
    };
    let refs = family.all_refs();
    let first = refs[0];
    for eta in &partners {
        let prod = match eta {
            Some(e) => x.mul(e),
            None => x.clone(),
        };
        let base = family.form(first).intersection_number(&prod, None)?;
        for &r in &refs[1..] {
            let v = family.form(r).intersection_number(&prod, None)?;
            if v != base {
                let witness = Witness { first, second: r, against: eta.clone(), values: (base, v) };
                return Ok(Uniformity { uniform: false, value: None, witness: Some(witness) });
            }
        }
    }
    let value = match mode {
        UniformityMode::FullDegree => Some(family.forms[0].intersection_number(x, None)?),
        UniformityMode::Against(_) => None,
    };
    Ok(Uniformity { uniform: true, value, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureDegree<F> {
    pub degree: usize,
    pub power: usize,
    pub pass: bool,
    pub witness: Option<Witness<F>>,
}

/// Uniformity of `B_r(ξ⌢ω^{n−2i}⌢η)` for `ξ, η ∈ U^i`, `i ≤ n/2`. Failure
/// would mean the uniform-expression programme breaks down.
pub fn closure_check<F: Field>(family: &FormFamily<F>, spaces: &[UniformSpace<F>]) -> Vec<ClosureDegree<F>> {
    let n = family.dim();
    let w = family.omega_expr();
    (0..=n / 2)
        .map(|i| {
            let k = n - 2 * i;
            let wk = w.pow(k);
            let basis = &spaces[i].basis;
            let mut witness = None;
            'outer: for (a, xi) in basis.iter().enumerate() {
                let partners: Vec<SymExpr<F>> = basis[a..].iter().map(|eta| eta.mul(&wk)).collect();
                let u = uniformity_test(family, xi, &UniformityMode::Against(partners)).expect("degrees match");
                if !u.uniform {
                    witness = u.witness;
                    break 'outer;
                }
            }
            ClosureDegree { degree: i, power: k, pass: witness.is_none(), witness }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoldoutReport<F> {
    pub samples: usize,
    /// Basis elements checked across all degrees.
    pub checked: usize,
    pub failures: Vec<(usize, Witness<F>)>,
}

/// Checks every basis element of every `U^i` against its defining partners
/// and against `U^{n−i}` on all forms, hold-out included.
pub fn holdout_check<F: Field>(family: &FormFamily<F>, spaces: &[UniformSpace<F>]) -> HoldoutReport<F> {
    let n = family.dim();
    let mut failures = Vec::new();
    let mut checked = 0;
    for i in 0..=n {
        let mut partners = if i >= 2 { family.partners(i, spaces) } else { Vec::new() };
        partners.extend(spaces[n - i].basis.iter().cloned());
        for xi in &spaces[i].basis {
            checked += 1;
            let u = uniformity_test(family, xi, &UniformityMode::Against(partners.clone())).expect("degrees match");
            if let Some(w) = u.witness {
                failures.push((i, w));
            }
        }
    }
    HoldoutReport { samples: family.holdout.len(), checked, failures }
}

#[derive(Clone, Debug)]
pub struct IhReport<F> {
    pub spaces: Vec<UniformSpace<F>>,
    pub report: GradedReport<F>,
    /// Degrees where some form pairs `U^i` with `U^{n−i}` differently from
    /// the first form.
    pub pairing_violations: Vec<(usize, Witness<F>)>,
    pub closure: Vec<ClosureDegree<F>>,
    pub holdout: HoldoutReport<F>,
}

impl<F: Field> IhReport<F> {
    pub fn betti(&self) -> Vec<usize> {
        self.report.betti()
    }

    pub fn consistent(&self) -> bool {
        self.pairing_violations.is_empty() && self.closure.iter().all(|c| c.pass) && self.holdout.failures.is_empty()
    }
}

pub fn ih_betti<F: Field>(family: &FormFamily<F>) -> IhReport<F> {
    let n = family.dim();
    let spaces = uniform_spaces(family);
    let bases: Vec<Vec<SymExpr<F>>> = spaces.iter().map(|s| s.basis.clone()).collect();
    let first = &family.forms[0];
    let report = graded_quotient(&bases, |x, y| first.pair(x, y).expect("complementary degrees"));
    let mut pairing_violations = Vec::new();
    for i in 0..=n {
        for xi in &bases[i] {
            let u = uniformity_test(family, xi, &UniformityMode::Against(bases[n - i].clone())).expect("degrees match");
            if let Some(w) = u.witness {
                pairing_violations.push((i, w));
                break;
            }
        }
    }
    let closure = closure_check(family, &spaces);
    let holdout = holdout_check(family, &spaces);
    IhReport { spaces, report, pairing_violations, closure, holdout }
}

/// `ω^{n−2i}` on intersection homology representatives, using the first
/// form, plus whether `ω^{n−2i}` maps each representative into `U^{n−i}`.
pub fn ih_lefschetz<F: Field>(family: &FormFamily<F>, ih: &IhReport<F>) -> Vec<LefschetzMap> {
    let n = family.dim();
    let first = &family.forms[0];
    let mut maps = lefschetz_maps(&ih.report, &family.omega, |x, y| first.pair(x, y).expect("complementary degrees"));
    let w = family.omega_expr();
    for m in &mut maps {
        let wk = w.pow(m.power);
        let target = &ih.spaces[n - m.from];
        let lands = ih.report.degrees[m.from].representatives.iter().all(|a| target.contains(&a.mul(&wk)));
        m.lands_in_target = Some(lands);
    }
    maps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin;
    use crate::simple::simple_homology;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(x: i64) -> Q {
        Q::from_i64(x)
    }

    fn small_cfg() -> FamilyConfig {
        FamilyConfig {
            resolutions: ResolutionConfig { sample_count: 32, ..Default::default() },
            holdout: 20,
            holdout_seed: None,
        }
    }

    fn pyramid() -> FormFamily<Q> {
        resolution_forms(&builtin::<Q>("pyr-square").unwrap(), &small_cfg()).unwrap()
    }

    fn expr(fam: &FormFamily<Q>, s: &str) -> SymExpr<Q> {
        SymExpr::parse(s, &fam.base.names()).unwrap()
    }

    #[test]
    fn cube_family_is_a_single_form() {
        let fam = resolution_forms(&builtin::<Q>("cube(3)").unwrap(), &small_cfg()).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.holdout.is_empty());
        let ih = ih_betti(&fam);
        assert_eq!(ih.betti(), [1, 3, 3, 1]);
        assert!(ih.consistent());
    }

    #[test]
    fn simple_inputs_agree_with_simple_homology() {
        for name in ["cube(3)", "simplex(3)", "prism(simplex(2))", "simplex(4)"] {
            let p = builtin::<Q>(name).unwrap();
            let fam = resolution_forms(&p, &small_cfg()).unwrap();
            let ih = ih_betti(&fam);
            let simple = simple_homology(&p).unwrap();
            assert_eq!(ih.report, simple.report, "{name}");
        }
    }

    #[test]
    fn pyramid_forms_differ_only_away_from_the_base() {
        let fam = pyramid();
        assert_eq!(fam.len(), 2);
        let nse = expr(&fam, "N*S*E");
        assert_ne!(fam.forms[0].intersection_number(&nse, None).unwrap(), fam.forms[1].intersection_number(&nse, None).unwrap());
        for m in sym_basis(5, 2) {
            let x = expr(&fam, "B").mul(&SymExpr::monomial(&m));
            assert_eq!(fam.forms[0].intersection_number(&x, None).unwrap(), fam.forms[1].intersection_number(&x, None).unwrap());
        }
    }

    #[test]
    fn pyramid_uniform_spaces() {
        let fam = pyramid();
        let spaces = uniform_spaces(&fam);
        let u2 = &spaces[2];
        for good in ["W*B", "S*B", "E*W - N*S"] {
            assert!(u2.contains(&expr(&fam, good)), "{good}");
        }
        assert!(!u2.contains(&expr(&fam, "N*S")));
        assert!(spaces[1].contains(&fam.omega_expr()));
        // N⌢S fails against E with values 0 and ±1 after calibration
        let u = uniformity_test(&fam, &expr(&fam, "N*S"), &UniformityMode::Against(vec![expr(&fam, "E")])).unwrap();
        assert!(!u.uniform);
        let w = u.witness.unwrap();
        let k = q(2);
        let mut vals = [w.values.0 * k.clone(), w.values.1 * k];
        vals.sort();
        assert_eq!(vals, [q(0), q(1)]);
    }

    #[test]
    fn pyramid_uniformity_tests() {
        let fam = pyramid();
        let u = uniformity_test(&fam, &expr(&fam, "N*S*E"), &UniformityMode::FullDegree).unwrap();
        assert!(!u.uniform);
        assert!(u.witness.is_some());
        let t1: Vec<SymExpr<Q>> = (0..5).map(|i| SymExpr::var(5, i)).collect();
        let eta = uniformity_test(&fam, &expr(&fam, "E*W - N*S"), &UniformityMode::Against(t1)).unwrap();
        assert!(eta.uniform);
        let w3 = fam.omega_expr().pow(3);
        let u = uniformity_test(&fam, &w3, &UniformityMode::FullDegree).unwrap();
        assert_eq!(u.value, Some(q(6) * fam.base.volume()));
        assert_eq!(
            uniformity_test(&fam, &expr(&fam, "N*S"), &UniformityMode::FullDegree),
            Err(Error::DegreeMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn pyramid_intersection_homology() {
        let fam = pyramid();
        let ih = ih_betti(&fam);
        assert_eq!(ih.betti(), [1, 2, 2, 1]);
        assert!(ih.consistent(), "{:?} {:?}", ih.pairing_violations, ih.closure);
        assert!(ih.holdout.samples >= 20);
        let maps = ih_lefschetz(&fam, &ih);
        assert_eq!(maps[1].rank, 2);
        assert!(maps.iter().all(|m| m.bijective && m.lands_in_target == Some(true)));
    }

    #[test]
    fn spaces_do_not_depend_on_the_interior_point() {
        let fam = pyramid();
        let a = uniform_spaces(&fam);
        let moved = fam.with_omega_at(&[Q::frac(1, 5), Q::frac(-1, 7), Q::frac(1, 3)]).unwrap();
        let b = uniform_spaces(&moved);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.dim(), y.dim());
            assert!(x.basis.iter().all(|e| y.contains(e)));
        }
    }

    #[test]
    fn lone_space_matches_the_recursion() {
        let fam = pyramid();
        let all = uniform_spaces(&fam);
        for (i, s) in all.iter().enumerate() {
            assert_eq!(uniform_space(&fam, i).unwrap().basis, s.basis);
        }
        assert!(uniform_space(&fam, 4).is_err());
    }
}
