//! Simple resolutions by small facet displacement.
//!
//! A resolution is a simple polytope `Δ(ε)`, `α_i(v) ≥ ε_i`, with the same
//! facets as `Δ`, reached by a small displacement. Displacements come from
//! facet orderings (push facet `σ(k)` outward by `scale^(k+1)`) and from
//! seeded random samples; either way a candidate is accepted only once it is
//! stable, meaning the displacement and its half realize the same
//! combinatorial type. Everything checkable about the result (simplicity,
//! no lost facet, every vertex lying over a nonempty face of `Δ`) is checked
//! exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polytope::{Fingerprint, HPolytope};
use crate::scalar::Field;

/// Stabilization halvings attempted before giving up.
pub const RETRY_BUDGET: u32 = 12;
/// Sampled offsets are drawn from `{-K..-1}/D`.
pub const SAMPLE_NUMERATOR_RANGE: i64 = 1000;
const SAMPLE_BASE_DENOMINATOR: i64 = 8 * SAMPLE_NUMERATOR_RANGE;
const ORDERING_STREAM: u64 = 0x6f72_6465_7269_6e67;

/// Displaces every facet: row `i` becomes `α_i(v) ≥ ε_i`.
pub fn displace<F: Field>(p: &HPolytope<F>, eps: &[F]) -> Result<HPolytope<F>> {
    p.with_offsets(eps)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// The base polytope is already simple.
    Identity,
    Ordering(Vec<usize>),
    Sample { seed: u64, index: usize },
    /// Point `step/steps` on the segment between two earlier resolutions.
    Segment { from: usize, to: usize, step: usize, steps: usize },
    Explicit,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Identity => write!(f, "identity"),
            Provenance::Ordering(o) => write!(f, "ordering {}", o.iter().join(",")),
            Provenance::Sample { seed, index } => write!(f, "sample {seed}#{index}"),
            Provenance::Segment { from, to, step, steps } => write!(f, "segment r{from}->r{to} at {step}/{steps}"),
            Provenance::Explicit => write!(f, "explicit"),
        }
    }
}

/// A simple displacement of a base polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution<F> {
    base: Fingerprint,
    eps: Vec<F>,
    polytope: HPolytope<F>,
    fingerprint: Fingerprint,
    /// For each vertex of the resolution, the base vertices of the face of
    /// `Δ` it lies over.
    vertex_map: Vec<Vec<usize>>,
    provenance: Provenance,
}

impl<F: Field> Resolution<F> {
    /// Realizes `Δ(ε)` as a resolution, without any stability check.
    pub fn realize(base: &HPolytope<F>, eps: Vec<F>, provenance: Provenance) -> Result<Self> {
        let polytope = displace(base, &eps)?;
        if !polytope.is_simple() {
            return Err(Error::NotSimple);
        }
        let vertex_map = polytope
            .vertices()
            .iter()
            .map(|v| {
                let over = base.vertex_data().vertices_on(&v.incident);
                if over.is_empty() {
                    let names = v.incident.iter().map(|&i| base.facets()[i].name.clone()).collect();
                    Err(Error::EmptyLocus(names))
                } else {
                    Ok(over)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Resolution { base: base.fingerprint(), fingerprint: polytope.fingerprint(), eps, polytope, vertex_map, provenance })
    }

    /// Realizes the displacements `eps_at(0)`, `eps_at(1)`, … until two
    /// consecutive levels give the same valid type, and returns the first of
    /// the pair.
    pub fn stabilize(base: &HPolytope<F>, provenance: Provenance, eps_at: impl Fn(u32) -> Vec<F>) -> Option<Self> {
        let mut prev = Self::realize(base, eps_at(0), provenance.clone()).ok();
        for level in 1..=RETRY_BUDGET {
            let next = Self::realize(base, eps_at(level), provenance.clone()).ok();
            if let (Some(a), Some(b)) = (&prev, &next) {
                if a.fingerprint == b.fingerprint {
                    return prev;
                }
            }
            prev = next;
        }
        None
    }

    pub fn eps(&self) -> &[F] {
        &self.eps
    }

    /// `Δ(ε)`.
    pub fn polytope(&self) -> &HPolytope<F> {
        &self.polytope
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }

    pub fn vertex_map(&self) -> &[Vec<usize>] {
        &self.vertex_map
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn base_fingerprint(&self) -> &Fingerprint {
        &self.base
    }

    /// Incidence sets of the vertices lying over each face of the base.
    pub fn incidences_by_face(&self) -> BTreeMap<Vec<usize>, Vec<Vec<usize>>> {
        let mut out: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        for (v, face) in self.polytope.vertices().iter().zip(&self.vertex_map) {
            out.entry(face.clone()).or_default().push(v.incident.clone());
        }
        for sets in out.values_mut() {
            sets.sort();
        }
        out
    }

    /// Pairs of facets through a non-simple base vertex that no longer
    /// meet over it, grouped by base vertex. The pyramid's two resolutions
    /// come out as `[NS]` and `[EW]`.
    pub fn separated_pairs(&self, base: &HPolytope<F>) -> Vec<(usize, Vec<(usize, usize)>)> {
        let by_face = self.incidences_by_face();
        base.vertices()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.incident.len() > base.dim())
            .map(|(u, v)| {
                let over = by_face.get(&vec![u]).cloned().unwrap_or_default();
                let pairs = v
                    .incident
                    .iter()
                    .tuple_combinations()
                    .filter(|&(i, j)| !over.iter().any(|s| s.contains(i) && s.contains(j)))
                    .map(|(&i, &j)| (i, j))
                    .collect();
                (u, pairs)
            })
            .collect()
    }

    /// Short human-readable name such as `Δ_NS`.
    pub fn label(&self, base: &HPolytope<F>) -> String {
        let names = base.names();
        let short = names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<String> = self
            .separated_pairs(base)
            .into_iter()
            .map(|(_, pairs)| {
                pairs
                    .iter()
                    .map(|&(i, j)| if short { format!("{}{}", names[i], names[j]) } else { format!("{}|{}", names[i], names[j]) })
                    .join(",")
            })
            .collect();
        if parts.is_empty() {
            "Δ".to_string()
        } else {
            format!("Δ_{}", parts.join(";"))
        }
    }
}

/// Faces of the base (as base-vertex sets) over which the two resolutions
/// have different vertex incidence multisets.
pub fn diff_locus<F: Field>(r: &Resolution<F>, s: &Resolution<F>) -> Result<BTreeSet<Vec<usize>>> {
    if r.base != s.base || r.eps.len() != s.eps.len() {
        return Err(Error::BaseMismatch);
    }
    let (a, b) = (r.incidences_by_face(), s.incidences_by_face());
    Ok(a.keys().chain(b.keys()).filter(|k| a.get(*k) != b.get(*k)).cloned().collect())
}

/// `ε_{σ(k)} = −scale^(k+1)`, stabilized by halving the scale.
pub fn resolve_by_ordering<F: Field>(p: &HPolytope<F>, ordering: &[usize], scale: &F) -> Result<Resolution<F>> {
    assert!(scale.is_positive(), "scale must be positive");
    let f = p.facet_count();
    let mut sorted = ordering.to_vec();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..f).collect::<Vec<_>>(), "ordering must be a permutation of the facets");
    let eps_at = |level: u32| {
        let s = (0..level).fold(scale.clone(), |s, _| s / F::from_i64(2));
        let mut eps = vec![F::zero(); f];
        let mut mag = F::one();
        for &i in ordering {
            mag = mag * s.clone();
            eps[i] = -mag.clone();
        }
        eps
    };
    // Surface a lost facet even when the scale never stabilizes.
    if let Err(e @ Error::FacetLost(_)) = displace(p, &eps_at(RETRY_BUDGET)) {
        return Err(e);
    }
    Resolution::stabilize(p, Provenance::Ordering(ordering.to_vec()), eps_at).ok_or_else(|| Error::NotStabilized(ordering.to_vec()))
}

/// Seeded random displacement `ε_i = −k_i/D` with `k_i ∈ {1..K}`, `D`
/// doubling until stable.
pub fn resolve_by_sample<F: Field>(p: &HPolytope<F>, seed: u64, index: usize) -> Option<Resolution<F>> {
    let mut rng = SplitMix64::seed_from_u64(seed.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
    let ks: Vec<i64> = (0..p.facet_count()).map(|_| rng.random_range(1..=SAMPLE_NUMERATOR_RANGE)).collect();
    let eps_at = |level: u32| {
        let d = F::from_i64(SAMPLE_BASE_DENOMINATOR) * (0..level).fold(F::one(), |x, _| x * F::from_i64(2));
        ks.iter().map(|&k| -F::from_i64(k) / d.clone()).collect()
    };
    Resolution::stabilize(p, Provenance::Sample { seed, index }, eps_at)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionConfig {
    pub max_orderings: usize,
    pub sample_count: usize,
    pub seed: u64,
    /// Ordering displacements start at `1/scale_denominator`.
    pub scale_denominator: i64,
    /// Walk segments between known resolutions until every non-simple face
    /// that separates two of them also separates an adjacent pair.
    pub refine_segments: bool,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        ResolutionConfig { max_orderings: 5040, sample_count: 256, seed: 20240613, scale_denominator: 8, refine_segments: true }
    }
}

#[derive(Clone, Debug)]
pub struct ResolutionSet<F> {
    /// Distinct types in ascending fingerprint order.
    pub resolutions: Vec<Resolution<F>>,
    pub ordering_types: BTreeSet<Fingerprint>,
    pub sample_types: BTreeSet<Fingerprint>,
    /// Types first found by segment refinement.
    pub segment_types: BTreeSet<Fingerprint>,
    pub orderings_tried: usize,
    /// All `f!` orderings were tried.
    pub orderings_exhaustive: bool,
    pub samples_tried: usize,
    /// Candidates that never stabilized.
    pub unstable: usize,
}

impl<F: Field> ResolutionSet<F> {
    pub fn len(&self) -> usize {
        self.resolutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resolutions.is_empty()
    }

    /// Whether the ordering pass and the sampling pass found the same types.
    pub fn passes_agree(&self) -> bool {
        self.sample_types.is_empty() || self.ordering_types.is_empty() || self.ordering_types == self.sample_types
    }

    pub fn index_of(&self, fp: &Fingerprint) -> Option<usize> {
        self.resolutions.binary_search_by(|r| r.fingerprint.cmp(fp)).ok()
    }

    fn insert(&mut self, r: Resolution<F>) -> bool {
        match self.resolutions.binary_search_by(|x| x.fingerprint.cmp(&r.fingerprint)) {
            Ok(_) => false,
            Err(pos) => {
                self.resolutions.insert(pos, r);
                true
            }
        }
    }
}

fn factorial_capped(n: usize, cap: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k).filter(|&v| v <= cap))
}

/// Orderings to try: all of them when `f! ≤ max_orderings`, otherwise
/// `max_orderings` seeded shuffles (only allowed when sampling is on).
pub fn candidate_orderings(f: usize, cfg: &ResolutionConfig) -> Result<(Vec<Vec<usize>>, bool)> {
    if factorial_capped(f, cfg.max_orderings).is_some() {
        return Ok(((0..f).permutations(f).collect(), true));
    }
    if cfg.sample_count == 0 {
        return Err(Error::GuardExceeded(format!(
            "{f}! facet orderings exceed max_orderings = {}; enable sampling",
            cfg.max_orderings
        )));
    }
    let mut rng = SplitMix64::seed_from_u64(cfg.seed ^ ORDERING_STREAM);
    let orderings = (0..cfg.max_orderings)
        .map(|_| {
            let mut o: Vec<usize> = (0..f).collect();
            o.shuffle(&mut rng);
            o
        })
        .collect();
    Ok((orderings, false))
}

pub fn enumerate_resolutions<F: Field>(p: &HPolytope<F>, cfg: &ResolutionConfig) -> Result<ResolutionSet<F>> {
    let f = p.facet_count();
    if p.is_simple() {
        let r = Resolution::realize(p, vec![F::zero(); f], Provenance::Identity)?;
        let types: BTreeSet<Fingerprint> = [r.fingerprint.clone()].into();
        return Ok(ResolutionSet {
            resolutions: vec![r],
            ordering_types: types.clone(),
            sample_types: types,
            segment_types: BTreeSet::new(),
            orderings_tried: 0,
            orderings_exhaustive: true,
            samples_tried: 0,
            unstable: 0,
        });
    }
    let (orderings, exhaustive) = candidate_orderings(f, cfg)?;
    let scale = F::frac(1, cfg.scale_denominator);
    let from_orderings: Vec<Option<Resolution<F>>> =
        orderings.par_iter().map(|o| resolve_by_ordering(p, o, &scale).ok()).collect();
    let from_samples: Vec<Option<Resolution<F>>> =
        (0..cfg.sample_count).into_par_iter().map(|i| resolve_by_sample(p, cfg.seed, i)).collect();

    let mut set = ResolutionSet {
        resolutions: Vec::new(),
        ordering_types: BTreeSet::new(),
        sample_types: BTreeSet::new(),
        segment_types: BTreeSet::new(),
        orderings_tried: orderings.len(),
        orderings_exhaustive: exhaustive,
        samples_tried: cfg.sample_count,
        unstable: 0,
    };
    for r in from_orderings.into_iter().chain(from_samples) {
        let Some(r) = r else {
            set.unstable += 1;
            continue;
        };
        match r.provenance {
            Provenance::Ordering(_) => set.ordering_types.insert(r.fingerprint.clone()),
            _ => set.sample_types.insert(r.fingerprint.clone()),
        };
        set.insert(r);
    }
    if cfg.refine_segments {
        refine_by_segments(p, &mut set, 32);
    }
    Ok(set)
}

/// Independent sampled resolutions (not deduplicated), e.g. for hold-out
/// validation.
pub fn sample_resolutions<F: Field>(p: &HPolytope<F>, count: usize, seed: u64) -> Vec<Resolution<F>> {
    if p.is_simple() {
        return Resolution::realize(p, vec![F::zero(); p.facet_count()], Provenance::Identity).into_iter().collect();
    }
    (0..count).into_par_iter().filter_map(|i| resolve_by_sample(p, seed, i)).collect()
}

/// Realizations at `step/steps` along the segment from `a.eps` to `b.eps`,
/// each stabilized by halving.
pub fn walk_segment<F: Field>(
    p: &HPolytope<F>,
    a: &Resolution<F>,
    b: &Resolution<F>,
    ids: (usize, usize),
    steps: usize,
) -> Vec<Resolution<F>> {
    (1..steps)
        .into_par_iter()
        .filter_map(|step| {
            let t = F::frac(step as i64, steps as i64);
            let u = F::one() - t.clone();
            let eps: Vec<F> = a.eps.iter().zip(&b.eps).map(|(x, y)| u.clone() * x.clone() + t.clone() * y.clone()).collect();
            let prov = Provenance::Segment { from: ids.0, to: ids.1, step, steps };
            Resolution::stabilize(p, prov, |level| {
                let d = (0..level).fold(F::one(), |x, _| x * F::from_i64(2));
                eps.iter().map(|e| e.clone() / d.clone()).collect()
            })
        })
        .collect()
}

/// Faces that separate some pair of known resolutions but no pair that
/// differs over that face alone.
pub fn faces_without_single_flip<F: Field>(set: &ResolutionSet<F>) -> BTreeSet<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut single = BTreeSet::new();
    for (r, s) in set.resolutions.iter().tuple_combinations() {
        let d = diff_locus(r, s).expect("same base");
        if d.len() == 1 {
            single.extend(d.iter().cloned());
        }
        seen.extend(d);
    }
    seen.difference(&single).cloned().collect()
}

/// Walks segments between pairs of resolutions that differ over a face
/// lacking a single-face flip, adding every new type found, until no such
/// face remains or all pairs have been walked.
pub fn refine_by_segments<F: Field>(p: &HPolytope<F>, set: &mut ResolutionSet<F>, steps: usize) {
    let mut walked: BTreeSet<(Fingerprint, Fingerprint)> = BTreeSet::new();
    loop {
        let missing = faces_without_single_flip(set);
        if missing.is_empty() {
            return;
        }
        let next = set.resolutions.iter().enumerate().tuple_combinations().find(|((_, r), (_, s))| {
            !walked.contains(&(r.fingerprint.clone(), s.fingerprint.clone()))
                && diff_locus(r, s).expect("same base").iter().any(|g| missing.contains(g))
        });
        let Some(((i, r), (j, s))) = next else { return };
        walked.insert((r.fingerprint.clone(), s.fingerprint.clone()));
        let found = walk_segment(p, r, s, (i, j), steps);
        for res in found {
            let fp = res.fingerprint.clone();
            if set.insert(res) {
                set.segment_types.insert(fp);
            }
        }
    }
}
