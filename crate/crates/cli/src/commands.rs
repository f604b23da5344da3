use std::collections::BTreeSet;

use polyvol::local_global::compact_lg_report;
use polyvol::oracle::{fibonacci_expected, generalized_h_vector, generalized_h_vector_on, simple_h_vector, Side};
use polyvol::polytope::FaceLattice;
use polyvol::resolution::{diff_locus, enumerate_resolutions, ResolutionConfig};
use polyvol::simple::{simple_homology, strong_lefschetz_check, LefschetzMap};
use polyvol::sym::sym_basis;
use polyvol::uniform::{
    ih_betti, ih_lefschetz, resolution_forms, uniform_space, uniform_spaces, uniformity_test, FamilyConfig, UniformityMode, Witness,
};
use polyvol::volume::{volume_polynomial, volume_polynomial_shifted, VolumeForm};
use polyvol::{Error, Expr, Family, Form, Polytope, Rational};
use serde::Serialize;

use crate::input::{load_builtin, load_file};
use crate::report::{digest, face_name, join, q, qs, vertex_name, Header, PolytopeSummary, Report};
use crate::{CliError, Command, Options};

/// What a subcommand contributes to its report.
struct Body {
    result: serde_json::Value,
    text: Vec<String>,
    findings: Vec<String>,
}

impl Body {
    fn new(result: impl Serialize, text: Vec<String>) -> Self {
        Body { result: serde_json::to_value(result).expect("results serialize"), text, findings: Vec::new() }
    }
}

pub(crate) fn run(command: &Command) -> Result<Report, CliError> {
    let o = command.options();
    let p = match (&o.builtin, &o.path) {
        (Some(name), _) => load_builtin(name)?,
        (None, Some(path)) => load_file(path)?,
        (None, None) => return Err(CliError::Usage("no input: give a FILE or --builtin".into())),
    };
    let body = match command {
        Command::Info(_) => info(&p),
        Command::VolumePoly(_) => volume_poly(&p, o)?,
        Command::Resolutions(_) => resolutions(&p, o)?,
        Command::Betti(_) => betti(&p, o)?,
        Command::IhBetti(_) => ih(&p, o)?,
        Command::Uniform(_) => uniform(&p, o)?,
        Command::LocalGlobal(_) => local_global(&p, o)?,
        Command::Oracle(_) => oracle(&p)?,
    };
    Ok(Report {
        header: Header::new(command.name(), o),
        polytope: PolytopeSummary::new(&p),
        result: body.result,
        findings: body.findings,
        text: body.text,
    })
}

fn family_config(o: &Options) -> FamilyConfig {
    FamilyConfig {
        resolutions: ResolutionConfig { max_orderings: o.max_orderings, sample_count: o.sample_count, seed: o.seed, ..Default::default() },
        holdout: o.holdout,
        holdout_seed: o.holdout_seed,
    }
}

fn family(p: &Polytope, o: &Options) -> Result<Family, CliError> {
    Ok(resolution_forms(p, &family_config(o))?)
}

fn parse_expr(p: &Polytope, o: &Options) -> Result<Option<Expr>, CliError> {
    o.expr.as_deref().map(|s| Expr::parse(s, &p.names()).map_err(CliError::from)).transpose()
}

/// Factor that makes the product of the `--calibrate` facets evaluate to
/// one on `form`.
fn calibration(p: &Polytope, o: &Options, form: &Form) -> Result<Option<Rational>, CliError> {
    let Some(names) = &o.calibrate else { return Ok(None) };
    if names.len() != p.dim() {
        return Err(CliError::Usage(format!("--calibrate needs {} facet names, got {}", p.dim(), names.len())));
    }
    let x = Expr::parse(&names.join("*"), &p.names())?;
    match form.calibration_for(&x) {
        Ok(k) => Ok(Some(k)),
        Err(Error::ZeroTopForm) => Err(CliError::Usage(format!("cannot calibrate: {} has intersection number 0", names.join("⌢")))),
        Err(e) => Err(e.into()),
    }
}

fn scaled(x: &Rational, k: &Option<Rational>) -> String {
    match k {
        Some(k) => q(&(x * k)),
        None => q(x),
    }
}

fn show(p: &Polytope, x: &Expr) -> String {
    x.display_with(&p.names())
}

#[derive(Serialize)]
struct WitnessOut {
    first: String,
    second: String,
    against: Option<String>,
    values: [String; 2],
}

impl WitnessOut {
    fn new(p: &Polytope, w: &Witness<Rational>, k: &Option<Rational>) -> Self {
        WitnessOut {
            first: w.first.to_string(),
            second: w.second.to_string(),
            against: w.against.as_ref().map(|a| show(p, a)),
            values: [scaled(&w.values.0, k), scaled(&w.values.1, k)],
        }
    }

    fn line(&self) -> String {
        let against = self.against.as_deref().map(|a| format!(" against {a}")).unwrap_or_default();
        format!("{} gives {}, {} gives {}{}", self.first, self.values[0], self.second, self.values[1], against)
    }
}

#[derive(Serialize)]
struct LefschetzOut {
    from: usize,
    to: usize,
    power: usize,
    rank: usize,
    dim_from: usize,
    dim_to: usize,
    bijective: bool,
    lands_in_target: Option<bool>,
}

fn lefschetz_out(maps: &[LefschetzMap], text: &mut Vec<String>, findings: &mut Vec<String>) -> Vec<LefschetzOut> {
    maps.iter()
        .map(|m| {
            text.push(format!(
                "  ω^{}: H^{} -> H^{}  rank {} ({}x{}){}",
                m.power,
                m.from,
                m.to,
                m.rank,
                m.dim_to,
                m.dim_from,
                if m.bijective { ", bijective" } else { "" }
            ));
            if !m.bijective {
                findings.push(format!("ω^{} from degree {} to {} has rank {}, not bijective", m.power, m.from, m.to, m.rank));
            }
            if m.lands_in_target == Some(false) {
                findings.push(format!("ω^{} does not map U^{} representatives into U^{}", m.power, m.from, m.to));
            }
            LefschetzOut {
                from: m.from,
                to: m.to,
                power: m.power,
                rank: m.rank,
                dim_from: m.dim_from,
                dim_to: m.dim_to,
                bijective: m.bijective,
                lands_in_target: m.lands_in_target,
            }
        })
        .collect()
}

fn info(p: &Polytope) -> Body {
    #[derive(Serialize)]
    struct VertexOut {
        point: Vec<String>,
        facets: Vec<String>,
    }
    #[derive(Serialize)]
    struct FaceOut {
        dim: isize,
        vertices: Vec<usize>,
        facets: Vec<String>,
    }
    #[derive(Serialize)]
    struct InfoOut {
        volume: String,
        euler_characteristic: i64,
        vertices: Vec<VertexOut>,
        faces: Vec<FaceOut>,
    }
    let names = p.names();
    let lattice = FaceLattice::new(p);
    let mut text = vec![format!("volume {}", q(&p.volume())), "vertices:".into()];
    let vertices: Vec<VertexOut> = p
        .vertices()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let point = qs(&v.point);
            text.push(format!("  v{k} ({}) on {}", point.join(", "), vertex_name(p, k)));
            VertexOut { point, facets: v.incident.iter().map(|&i| names[i].clone()).collect() }
        })
        .collect();
    text.push("faces:".into());
    let faces: Vec<FaceOut> = lattice
        .faces()
        .iter()
        .map(|f| {
            let facets: Vec<String> = f.facets.iter().map(|&i| names[i].clone()).collect();
            text.push(format!("  dim {:>2}: vertices [{}] facets [{}]", f.dim, join(&f.vertices), facets.join(",")));
            FaceOut { dim: f.dim, vertices: f.vertices.clone(), facets }
        })
        .collect();
    text.push(format!("euler characteristic {}", lattice.euler_characteristic()));
    Body::new(InfoOut { volume: q(&p.volume()), euler_characteristic: lattice.euler_characteristic(), vertices, faces }, text)
}

fn volume_poly(p: &Polytope, o: &Options) -> Result<Body, CliError> {
    #[derive(Serialize)]
    struct ChamberOut {
        label: String,
        digest: String,
        eps: Vec<String>,
        polynomial: String,
        top_form: String,
        value: Option<String>,
    }
    let names = p.names();
    let eps_names: Vec<String> = names.iter().map(|n| format!("ε_{n}")).collect();
    let mut chambers = Vec::new();
    if p.is_simple() {
        chambers.push(("Δ".to_string(), p.fingerprint(), vec![Rational::default(); p.facet_count()], volume_polynomial(p)?, Form::from_polytope(p)?));
    } else {
        let set = enumerate_resolutions(p, &family_config(o).resolutions)?;
        for r in &set.resolutions {
            chambers.push((r.label(p), r.fingerprint().clone(), r.eps().to_vec(), volume_polynomial_shifted(r.polytope(), r.eps())?, VolumeForm::from_resolution(r)?));
        }
    }
    let k = calibration(p, o, &chambers[0].4)?;
    let expr = parse_expr(p, o)?;
    let mut text = Vec::new();
    let mut out = Vec::new();
    for (label, fp, eps, poly, form) in chambers {
        let value = expr.as_ref().map(|x| form.intersection_number(x, k.as_ref()).map(|v| q(&v))).transpose()?;
        text.push(format!("{label} [{}]", digest(&fp)));
        text.push(format!("  vol = {}", poly.display_with(&eps_names)));
        text.push(format!("  top form = {}", form.top().display_with(&names)));
        if let (Some(x), Some(v)) = (&expr, &value) {
            text.push(format!("  {} = {v}", show(p, x)));
        }
        out.push(ChamberOut {
            label,
            digest: digest(&fp),
            eps: qs(&eps),
            polynomial: poly.display_with(&eps_names),
            top_form: form.top().display_with(&names),
            value,
        });
    }
    Ok(Body::new(serde_json::json!({ "calibration": k.as_ref().map(q), "chambers": out }), text))
}

fn resolutions(p: &Polytope, o: &Options) -> Result<Body, CliError> {
    #[derive(Serialize)]
    struct ResOut {
        label: String,
        digest: String,
        provenance: String,
        vertices: usize,
        eps: Vec<String>,
    }
    #[derive(Serialize)]
    struct DiffOut {
        pair: (usize, usize),
        locus: Vec<String>,
    }
    #[derive(Serialize)]
    struct ResolutionsOut {
        types: usize,
        ordering_types: usize,
        sample_types: usize,
        segment_types: usize,
        orderings_tried: usize,
        orderings_exhaustive: bool,
        samples_tried: usize,
        unstable: usize,
        passes_agree: bool,
        resolutions: Vec<ResOut>,
        diffs: Vec<DiffOut>,
    }
    let set = enumerate_resolutions(p, &family_config(o).resolutions)?;
    let rs = &set.resolutions;
    let mut diffs = Vec::new();
    let mut loci: BTreeSet<Vec<usize>> = BTreeSet::new();
    for r in 0..rs.len() {
        for s in r + 1..rs.len() {
            let d = diff_locus(&rs[r], &rs[s])?;
            diffs.push(DiffOut { pair: (r, s), locus: d.iter().map(|g| face_name(p, g)).collect() });
            loci.extend(d);
        }
    }
    let labels: Vec<String> = rs.iter().map(|r| r.label(p)).collect();
    let where_ = match loci.len() {
        0 => String::new(),
        1 => format!(" (by diff at {})", face_name(p, loci.first().expect("one locus"))),
        k => format!(" (differing over {k} faces)"),
    };
    let mut text = vec![format!("{} types: {}{}", rs.len(), labels.join(", "), where_)];
    let out: Vec<ResOut> = rs
        .iter()
        .zip(&labels)
        .enumerate()
        .map(|(i, (r, label))| {
            let eps = qs(r.eps());
            text.push(format!("  r{i} {label} [{}] {} vertices, {}, ε = ({})", digest(r.fingerprint()), r.polytope().vertices().len(), r.provenance(), eps.join(", ")));
            ResOut { label: label.clone(), digest: digest(r.fingerprint()), provenance: r.provenance().to_string(), vertices: r.polytope().vertices().len(), eps }
        })
        .collect();
    text.push(format!(
        "orderings: {} tried{}, {} types; samples: {} tried, {} types; segments: {} types; unstable: {}; passes agree: {}",
        set.orderings_tried,
        if set.orderings_exhaustive { " (all)" } else { "" },
        set.ordering_types.len(),
        set.samples_tried,
        set.sample_types.len(),
        set.segment_types.len(),
        set.unstable,
        if set.passes_agree() { "yes" } else { "no" }
    ));
    Ok(Body::new(
        ResolutionsOut {
            types: rs.len(),
            ordering_types: set.ordering_types.len(),
            sample_types: set.sample_types.len(),
            segment_types: set.segment_types.len(),
            orderings_tried: set.orderings_tried,
            orderings_exhaustive: set.orderings_exhaustive,
            samples_tried: set.samples_tried,
            unstable: set.unstable,
            passes_agree: set.passes_agree(),
            resolutions: out,
            diffs,
        },
        text,
    ))
}

#[derive(Serialize)]
struct DegreeOut {
    degree: usize,
    space_dim: usize,
    null_dim: usize,
    h_dim: usize,
    representatives: Vec<String>,
}

fn oracle_line(betti: &[usize], oracle: &[i64], label: &str, findings: &mut Vec<String>) -> String {
    let matches = betti.len() == oracle.len() && betti.iter().zip(oracle).all(|(&b, &h)| b as i64 == h);
    if !matches {
        findings.push(format!("{label} {} differs from the toric h-vector {}", join(betti), join(oracle)));
    }
    format!("toric h-vector {} ({})", join(oracle), if matches { "match" } else { "MISMATCH" })
}

fn betti(p: &Polytope, o: &Options) -> Result<Body, CliError> {
    let sh = simple_homology(p)?;
    let oracle = generalized_h_vector(&FaceLattice::new(p))?;
    let maps = strong_lefschetz_check(p)?;
    let k = calibration(p, o, &sh.form)?;
    let betti = sh.report.betti();
    let mut findings = Vec::new();
    let mut text = vec![format!("betti {}", join(&betti)), oracle_line(&betti, &oracle.0, "betti", &mut findings)];
    let degrees: Vec<DegreeOut> = sh
        .report
        .degrees
        .iter()
        .filter(|d| o.degree.is_none_or(|g| g == d.degree))
        .map(|d| {
            let reps: Vec<String> = d.representatives.iter().map(|x| show(p, x)).collect();
            text.push(format!("  H^{}: dim {} = {} - {}  basis {}", d.degree, d.h_dim, d.space_dim, d.null_dim, reps.join(", ")));
            DegreeOut { degree: d.degree, space_dim: d.space_dim, null_dim: d.null_dim, h_dim: d.h_dim, representatives: reps }
        })
        .collect();
    for g in &sh.generation {
        if !g.generates {
            findings.push(format!("degree {} null space is not generated from degree 1 ({} of {})", g.degree, g.generated_dim, g.null_dim));
        }
    }
    let value = parse_expr(p, o)?.map(|x| sh.form.intersection_number(&x, k.as_ref()).map(|v| q(&v))).transpose()?;
    if let Some(v) = &value {
        text.push(format!("{} = {v}", o.expr.as_deref().unwrap_or_default()));
    }
    text.push("lefschetz:".into());
    let lefschetz = lefschetz_out(&maps, &mut text, &mut findings);
    let mut body = Body::new(
        serde_json::json!({
            "betti": betti,
            "oracle": oracle.0,
            "degrees": degrees,
            "generation": sh.generation.iter().map(|g| serde_json::json!({"degree": g.degree, "null_dim": g.null_dim, "generated_dim": g.generated_dim, "generates": g.generates})).collect::<Vec<_>>(),
            "lefschetz": lefschetz,
            "calibration": k.as_ref().map(q),
            "value": value,
        }),
        text,
    );
    body.findings = findings;
    Ok(body)
}

fn ih(p: &Polytope, o: &Options) -> Result<Body, CliError> {
    let fam = family(p, o)?;
    let k = calibration(p, o, &fam.forms[0])?;
    let report = ih_betti(&fam);
    let oracle = generalized_h_vector(&FaceLattice::new(p))?;
    let maps = ih_lefschetz(&fam, &report);
    let betti = report.betti();
    let mut findings = Vec::new();
    let mut text = vec![
        format!("{} resolutions, {} hold-out forms", fam.len(), report.holdout.samples),
        format!("ih-betti {}", join(&betti)),
        oracle_line(&betti, &oracle.0, "ih-betti", &mut findings),
    ];
    let degrees: Vec<DegreeOut> = report
        .report
        .degrees
        .iter()
        .filter(|d| o.degree.is_none_or(|g| g == d.degree))
        .map(|d| {
            let reps: Vec<String> = d.representatives.iter().map(|x| show(p, x)).collect();
            text.push(format!("  IH^{}: dim {} = {} - {}  basis {}", d.degree, d.h_dim, d.space_dim, d.null_dim, reps.join(", ")));
            DegreeOut { degree: d.degree, space_dim: d.space_dim, null_dim: d.null_dim, h_dim: d.h_dim, representatives: reps }
        })
        .collect();
    let violations: Vec<serde_json::Value> = report
        .pairing_violations
        .iter()
        .map(|(i, w)| {
            let w = WitnessOut::new(p, w, &k);
            findings.push(format!("U^{i} pairs differently: {}", w.line()));
            serde_json::json!({"degree": i, "witness": w})
        })
        .collect();
    let closure: Vec<serde_json::Value> = report
        .closure
        .iter()
        .map(|c| {
            let w = c.witness.as_ref().map(|w| WitnessOut::new(p, w, &k));
            if let Some(w) = &w {
                findings.push(format!("ω^{}⌢U^{} leaves the uniform space: {}", c.power, c.degree, w.line()));
            }
            serde_json::json!({"degree": c.degree, "power": c.power, "pass": c.pass, "witness": w})
        })
        .collect();
    let failures: Vec<serde_json::Value> = report
        .holdout
        .failures
        .iter()
        .map(|(i, w)| {
            let w = WitnessOut::new(p, w, &k);
            findings.push(format!("hold-out form breaks U^{i}: {}", w.line()));
            serde_json::json!({"degree": i, "witness": w})
        })
        .collect();
    text.push(format!("hold-out: {} forms, {} checks, {} failures", report.holdout.samples, report.holdout.checked, failures.len()));
    text.push("lefschetz:".into());
    let lefschetz = lefschetz_out(&maps, &mut text, &mut findings);
    let mut body = Body::new(
        serde_json::json!({
            "resolutions": fam.len(),
            "resolution_digests": fam.set.resolutions.iter().map(|r| digest(r.fingerprint())).collect::<Vec<_>>(),
            "betti": betti,
            "oracle": oracle.0,
            "degrees": degrees,
            "pairing_violations": violations,
            "closure": closure,
            "holdout": {"samples": report.holdout.samples, "checked": report.holdout.checked, "failures": failures},
            "lefschetz": lefschetz,
            "calibration": k.as_ref().map(q),
        }),
        text,
    );
    body.findings = findings;
    Ok(body)
}

fn uniform(p: &Polytope, o: &Options) -> Result<Body, CliError> {
    let fam = family(p, o)?;
    let k = calibration(p, o, &fam.forms[0])?;
    let n = p.dim();
    let spaces = match o.degree {
        Some(d) => vec![uniform_space(&fam, d)?],
        None => uniform_spaces(&fam),
    };
    let mut text = vec![format!("{} resolutions", fam.len())];
    let out: Vec<serde_json::Value> = spaces
        .iter()
        .map(|s| {
            let basis: Vec<String> = s.basis.iter().map(|x| show(p, x)).collect();
            text.push(format!("  U^{}: dim {}  {}", s.degree, s.dim(), basis.join(", ")));
            serde_json::json!({"degree": s.degree, "dim": s.dim(), "constraints": s.constraints.len(), "basis": basis})
        })
        .collect();
    let test = match parse_expr(p, o)? {
        None => serde_json::Value::Null,
        Some(x) => {
            let mode = if x.degree() == n {
                UniformityMode::FullDegree
            } else {
                UniformityMode::Against(sym_basis(p.facet_count(), n.saturating_sub(x.degree())).iter().map(Expr::monomial).collect())
            };
            let u = uniformity_test(&fam, &x, &mode)?;
            let w = u.witness.as_ref().map(|w| WitnessOut::new(p, w, &k));
            let value = u.value.as_ref().map(|v| scaled(v, &k));
            text.push(match (&w, &value) {
                (Some(w), _) => format!("{} is not uniform: {}", show(p, &x), w.line()),
                (None, Some(v)) => format!("{} is uniform with value {v}", show(p, &x)),
                (None, None) => format!("{} is uniform", show(p, &x)),
            });
            serde_json::json!({"expr": show(p, &x), "uniform": u.uniform, "value": value, "witness": w})
        }
    };
    Ok(Body::new(serde_json::json!({"resolutions": fam.len(), "spaces": out, "test": test, "calibration": k.as_ref().map(q)}), text))
}

fn local_global(p: &Polytope, o: &Options) -> Result<Body, CliError> {
    let fam = family(p, o)?;
    let k = calibration(p, o, &fam.forms[0])?;
    let r = compact_lg_report(&fam);
    let mut text = vec![format!("{} resolutions", fam.len())];
    let faces: Vec<serde_json::Value> = r
        .faces
        .iter()
        .map(|c| {
            text.push(format!("  {}: rank {} from {} pairs", face_name(p, &c.face), c.rank, c.pairs.len()));
            let generators: Vec<serde_json::Value> = c
                .generators
                .iter()
                .map(|l| {
                    let values: Vec<String> = l.values.iter().map(|v| scaled(v, &k)).collect();
                    text.push(format!("    (r{} - r{})({}⌢·) = ({})", l.pair.0, l.pair.1, show(p, &l.eta), values.join(", ")));
                    serde_json::json!({"pair": l.pair, "eta": show(p, &l.eta), "values": values})
                })
                .collect();
            serde_json::json!({"face": face_name(p, &c.face), "pairs": c.pairs, "rank": c.rank, "generators": generators})
        })
        .collect();
    let missing: Vec<String> = r.faces_without_cycles.iter().map(|g| face_name(p, g)).collect();
    if !missing.is_empty() {
        text.push(format!("  no single-face pair over: {}", missing.join("; ")));
    }
    let fib = r.fibonacci;
    text.push(format!("cycles {}, global rank {}, relations {}", r.cycle_count, r.global_rank, r.relations));
    text.push(format!("fibonacci prediction for n = {}: {} groups, {} independent, {} strings", p.dim(), fib.groups, fib.independent, fib.strings));
    Ok(Body::new(
        serde_json::json!({
            "resolutions": fam.len(),
            "faces": faces,
            "faces_without_cycles": missing,
            "cycle_count": r.cycle_count,
            "global_rank": r.global_rank,
            "relations": r.relations,
            "fibonacci": {"groups": fib.groups, "independent": fib.independent, "strings": fib.strings},
            "calibration": k.as_ref().map(q),
        }),
        text,
    ))
}

fn oracle(p: &Polytope) -> Result<Body, CliError> {
    let lattice = FaceLattice::new(p);
    let n = p.dim();
    let simple = if p.is_simple() { Some(simple_h_vector(&lattice.f_vector(), n)?.0) } else { None };
    let dual = generalized_h_vector(&lattice)?;
    let primal = generalized_h_vector_on(&lattice, Side::Primal)?;
    let fib = fibonacci_expected(n);
    let mut text = vec![format!("toric h-vector (dual) {}", dual), format!("toric h-vector (primal) {}", primal)];
    if let Some(h) = &simple {
        text.push(format!("simple h-vector {}", join(h)));
    }
    text.push(format!("fibonacci: {} groups, {} independent, {} strings", fib.groups, fib.independent, fib.strings));
    Ok(Body::new(
        serde_json::json!({
            "generalized_h": dual.0,
            "generalized_h_primal": primal.0,
            "simple_h": simple,
            "fibonacci": {"groups": fib.groups, "independent": fib.independent, "strings": fib.strings},
        }),
        text,
    ))
}
