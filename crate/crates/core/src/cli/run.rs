//! Command dispatch.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use super::doc::{build_category, build_diagram, build_transformation, typed, CategorySpec, Document, InputError, InputResult};
use super::fixtures::{
    fibrous_input, model_input, morphism_input, pattern_input, soundness, FixtureSpec, ModelInput,
};
use super::report::{agreement, digest, Recorder, Report, TOOL, VERSION};
use crate::catalog::check_f_class;
use crate::compare::{canonical_key, check_active_slices, check_comparison_hypotheses_with, enumerate_segal_set_objects, transport_demo};
use crate::envelope::monoidal::{check_hk_conditions, check_model_segal, check_monoidal_equifibered_over_f};
use crate::envelope::norms::check_norm_squares;
use crate::envelope::{check_envelope_equifibered, check_equifibered, check_roundtrip, free_fibration, verify_cocartesian_fibration, ArrowRightCat, CocartesianFibration};
use crate::fibrous::bridge::{check_relative_segal_unstraightened, random_glued_map};
use crate::fibrous::{check_fibrous, check_iso_segal, induced_pattern_structure};
use crate::fincat::{poset_cat, FinCat, FinSetDiagram, Functor};
use crate::homotopy::{beat_point_verdict, contractibility_verdict_with, homology_verdict, HomotopyConfig};
use crate::pattern::{check_extendable, check_relative_segal_set, check_segal_set, check_sound, factorization_diagnosis, validate_pattern, DiagramMap};
use crate::verdict::{Status, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Factor,
    Sound,
    Extendable,
    Segal,
    RelativeSegal,
    Fibrous,
    Envelope,
    Equifibered,
    Compare,
    Transport,
    Enumerate,
    Homotopy,
    RandomPosets,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Factor => "factor",
            Command::Sound => "sound",
            Command::Extendable => "extendable",
            Command::Segal => "segal",
            Command::RelativeSegal => "relative-segal",
            Command::Fibrous => "fibrous",
            Command::Envelope => "envelope",
            Command::Equifibered => "equifibered",
            Command::Compare => "compare",
            Command::Transport => "transport",
            Command::Enumerate => "enumerate",
            Command::Homotopy => "homotopy",
            Command::RandomPosets => "random-posets",
        }
    }

    fn arity(self) -> usize {
        match self {
            Command::RandomPosets => 0,
            Command::Transport => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Flags {
    pub seed: u64,
    /// random samples for the sampling drivers
    pub samples: Option<usize>,
    /// candidate budget for enumeration
    pub budget: usize,
    /// cardinality cap for enumeration
    pub cap: usize,
    /// largest simplex dimension for homology
    pub dim_cap: usize,
    /// restricts `factor` to one morphism
    pub morphism: Option<String>,
    /// expected number of classes for `enumerate`
    pub expect: Option<usize>,
    pub timing: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            seed: 0,
            samples: None,
            budget: 1 << 22,
            cap: 2,
            dim_cap: HomotopyConfig::default().dim_cap,
            morphism: None,
            expect: None,
            timing: false,
        }
    }
}

impl Flags {
    /// The flags that change results, for the digest.
    fn canonical(&self) -> String {
        format!(
            "seed={} samples={:?} budget={} cap={} dim_cap={} morphism={:?} expect={:?}",
            self.seed, self.samples, self.budget, self.cap, self.dim_cap, self.morphism, self.expect
        )
    }

    fn homotopy(&self) -> HomotopyConfig {
        HomotopyConfig { dim_cap: self.dim_cap, ..HomotopyConfig::default() }
    }
}

pub fn run(cmd: Command, inputs: &[Document], flags: &Flags) -> InputResult<Report> {
    if inputs.len() != cmd.arity() {
        return Err(InputError::at(cmd.name(), format!("expects {} input(s), got {}", cmd.arity(), inputs.len())));
    }
    let mut parts: Vec<&str> = vec![cmd.name()];
    parts.extend(inputs.iter().map(|d| d.text.as_str()));
    let fl = flags.canonical();
    parts.push(&fl);
    let input_digest = digest(&parts);
    let mut rec = Recorder::new(flags.timing);
    match cmd {
        Command::Validate => validate(&inputs[0], &mut rec)?,
        Command::Factor => factor(&inputs[0], flags, &mut rec)?,
        Command::Sound => sound(&inputs[0], &mut rec)?,
        Command::Extendable => extendable(&inputs[0], &mut rec)?,
        Command::Segal => segal(&inputs[0], flags, &mut rec)?,
        Command::RelativeSegal => relative_segal(&inputs[0], flags, &mut rec)?,
        Command::Fibrous => fibrous(&inputs[0], &mut rec)?,
        Command::Envelope => envelope(&inputs[0], &mut rec)?,
        Command::Equifibered => equifibered(&inputs[0], &mut rec)?,
        Command::Compare => compare(&inputs[0], &mut rec)?,
        Command::Transport => transport(&inputs[0], &inputs[1], &mut rec)?,
        Command::Enumerate => enumerate(&inputs[0], flags, &mut rec)?,
        Command::Homotopy => homotopy(&inputs[0], flags, &mut rec)?,
        Command::RandomPosets => random_posets(flags, &mut rec),
    }
    Ok(Report { tool: TOOL, version: VERSION, command: cmd.name().to_string(), input_digest, checks: rec.checks })
}

fn validate(doc: &Document, rec: &mut Recorder) -> InputResult<()> {
    let p = pattern_input(doc)?;
    rec.run("category", || match p.pattern.base.validate() {
        Ok(()) => Verdict::holds("identity, endpoint and associativity scan"),
        Err(e) => Verdict::fails("identity, endpoint and associativity scan", e.to_string()),
    });
    rec.run("factorization system", || {
        let r = validate_pattern(&p.pattern);
        let b = &p.pattern.base;
        r.verdict.with_note(format!("{} objects, {} morphisms", b.n_obj(), b.n_mor()))
    });
    Ok(())
}

fn factor(doc: &Document, flags: &Flags, rec: &mut Recorder) -> InputResult<()> {
    let p = pattern_input(doc)?.pattern;
    let c = &p.base;
    let list: Vec<usize> = match &flags.morphism {
        Some(l) => vec![c.find_morphism(l).ok_or_else(|| InputError::at("--morphism", format!("no morphism {l:?}")))?],
        None => c.morphisms().collect(),
    };
    for f in list {
        let v = match (p.factor(f), factorization_diagnosis(&p, f)) {
            (Some((i, a)), None) => Verdict::holds("factorization groupoid")
                .with_note(format!("inert {} then active {}", c.mor_label(i), c.mor_label(a)))
                .with_note(format!("{} factorizations", p.factorizations(f).len())),
            (_, Some(d)) => Verdict::fails("factorization groupoid", d),
            (None, None) => Verdict::fails("factorization groupoid", "no inert-active factorization"),
        };
        rec.push(format!("factor {}", c.mor_label(f)), v);
    }
    Ok(())
}

fn sound(doc: &Document, rec: &mut Recorder) -> InputResult<()> {
    let p = pattern_input(doc)?;
    if p.span.is_some() {
        rec.run("sound", || soundness(&p));
        return Ok(());
    }
    rec.run("sound", || {
        let r = check_sound(&p.pattern);
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for row in &r.rows {
            *sizes.entry(row.fiber_objects).or_default() += 1;
        }
        let hist: Vec<String> = sizes.iter().map(|(s, n)| format!("{n} of size {s}")).collect();
        let shapes: BTreeSet<String> = r
            .rows
            .iter()
            .filter(|row| row.fiber_objects > 1)
            .map(|row| format!("{} objects/{} morphisms", row.fiber_objects, row.fiber_morphisms))
            .collect();
        let mut v = r.verdict.with_note(format!("el-fibers: {}", hist.join(", ")));
        if !shapes.is_empty() {
            v = v.with_note(format!("non-singleton fibers: {}", shapes.into_iter().collect::<Vec<_>>().join(", ")));
        }
        v
    });
    Ok(())
}

fn extendable(doc: &Document, rec: &mut Recorder) -> InputResult<()> {
    let p = pattern_input(doc)?.pattern;
    let r = check_extendable(&p);
    let mut v = r.verdict.clone();
    for m in &r.missing {
        let size = m.total_size.map_or("?".to_string(), |s| s.to_string());
        v = v.with_note(format!(
            "unhit at {}: family ({}) of total size {size}{}",
            m.object,
            m.family.join(", "),
            if m.artifact { ", beyond the cap" } else { "" }
        ));
    }
    rec.push("extendable", v);
    rec.push("extendable within truncation", r.within_bound);
    Ok(())
}

fn samples(flags: &Flags, default: usize) -> usize {
    flags.samples.unwrap_or(default)
}

fn sizes_note(d: &FinSetDiagram) -> String {
    format!("sizes {:?}", d.sizes)
}

/// The one-point presheaf.
fn terminal_presheaf(c: &Arc<FinCat>) -> FinSetDiagram {
    FinSetDiagram::constant(c.clone(), 1)
}

fn to_terminal(d: &FinSetDiagram) -> DiagramMap {
    let t = terminal_presheaf(&d.index);
    let comps = d.sizes.iter().map(|&n| vec![0; n]).collect();
    DiagramMap::new(d.clone(), t, comps).expect("maps to the point are natural")
}

fn segal(doc: &Document, flags: &Flags, rec: &mut Recorder) -> InputResult<()> {
    let p = pattern_input(doc)?.pattern;
    if let Some((loc, v)) = explicit(doc, "diagram") {
        let d = build_diagram(&loc, &p.base, v)?;
        rec.run("segal", || check_segal_set(&p, &d).with_note(sizes_note(&d)));
        return Ok(());
    }
    // sampling driver: direct check against the unstraightening of X -> *
    let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
    let mut verdicts = Vec::new();
    for i in 0..samples(flags, 24) {
        let d = random_glued_map(&p.base, 2, &mut rng).target;
        let direct = check_segal_set(&p, &d);
        let via = check_relative_segal_unstraightened(&p, &to_terminal(&d));
        verdicts.push(agreement(&format!("sample {i}, {}", sizes_note(&d)), &direct, &via));
    }
    rec.push("segal routes agree", summary("Segal condition: direct vs unstraightened", verdicts));
    Ok(())
}

fn relative_segal(doc: &Document, flags: &Flags, rec: &mut Recorder) -> InputResult<()> {
    let p = pattern_input(doc)?.pattern;
    if let Some((loc, v)) = explicit(doc, "transformation") {
        let eta = build_transformation(&loc, &p.base, v)?;
        let direct = rec.run("relative segal", || check_relative_segal_set(&p, &eta));
        let via = rec.run("square condition on unstraightenings", || check_relative_segal_unstraightened(&p, &eta));
        rec.push("routes agree", agreement("transformation", &direct, &via));
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
    let mut verdicts = Vec::new();
    for i in 0..samples(flags, 24) {
        let eta = random_glued_map(&p.base, 2, &mut rng);
        let direct = check_relative_segal_set(&p, &eta);
        let via = check_relative_segal_unstraightened(&p, &eta);
        verdicts.push(agreement(&format!("sample {i}, {} -> {}", sizes_note(&eta.source), sizes_note(&eta.target)), &direct, &via));
    }
    rec.push("relative segal routes agree", summary("relative Segal: direct vs square condition", verdicts));
    Ok(())
}

/// Conjunction of per-sample agreements with a tally of the shared outcomes.
fn summary(method: &str, verdicts: Vec<Verdict>) -> Verdict {
    let n = verdicts.len();
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for v in verdicts.iter().filter(|v| v.is_holds()) {
        for note in &v.notes {
            if let Some((_, s)) = note.rsplit_once("both ") {
                *tally.entry(s.to_string()).or_default() += 1;
            }
        }
    }
    let mut v = Verdict::all(method, verdicts.into_iter().map(|mut v| {
        v.notes.clear();
        v
    }));
    v.witness.truncate(8);
    let t: Vec<String> = tally.iter().map(|(s, k)| format!("{k} {s}")).collect();
    v.with_note(format!("{n} samples: {}", if t.is_empty() { "none agreeing".into() } else { t.join(", ") }))
}

/// A section given explicitly in a file; inline fixtures have none.
fn explicit<'a>(doc: &'a Document, key: &str) -> Option<(String, &'a Value)> {
    if doc.inline {
        return None;
    }
    doc.value.get(key).map(|v| (format!("{}: {key}", doc.origin), v))
}

fn fibrous(doc: &Document, rec: &mut Recorder) -> InputResult<()> {
    let cand = fibrous_input(doc)?;
    let r = rec.run("fibrous", || check_fibrous(&cand).verdict);
    let full = check_fibrous(&cand);
    rec.push("cocartesian lifts", full.lifts.clone());
    if let Some(d) = &full.direct {
        rec.push("fibrous, envelope squares", d.clone());
    }
    if let Some(f) = &full.fast {
        rec.push("fibrous, sound base", f.clone());
    }
    if let (Some(d), Some(f)) = (&full.direct, &full.fast) {
        rec.push("routes agree", agreement("fibrous", d, f));
    }
    if r.is_holds() {
        match induced_pattern_structure(&cand) {
            Ok(induced) => {
                rec.run("induced pattern sound", || check_sound(&induced.source).verdict);
                rec.run("elementary slices preserved", || check_iso_segal(&induced));
            }
            Err(e) => rec.push("induced pattern", Verdict::unknown("induced pattern structure", e.to_string())),
        }
    }
    Ok(())
}

fn envelope(doc: &Document, rec: &mut Recorder) -> InputResult<()> {
    let cand = fibrous_input(doc)?;
    let ar = ArrowRightCat::new(cand.base.clone()).map_err(|e| InputError::at(&doc.origin, e.to_string()))?;
    let env = match free_fibration(&cand, &ar) {
        Ok(env) => env,
        Err(e) => {
            rec.push("free fibration", Verdict::unknown("free fibration", e.to_string()));
            return Ok(());
        }
    };
    rec.run("cocartesian fibration", || verify_cocartesian_fibration(&env.fibration));
    rec.run("roundtrip", || check_roundtrip(&cand, &ar));
    let r = check_envelope_equifibered(&env, &ar, cand.base_soundness());
    rec.push("equifibered", r.verdict.clone());
    if let (Some(red), Some(agree)) = (&r.reduced, r.agree) {
        rec.push("elementary reduction agrees", agree_flag(agree, &r.verdict, red));
    }
    Ok(())
}

fn agree_flag(agree: bool, full: &Verdict, reduced: &Verdict) -> Verdict {
    const M: &str = "reduced check matches the full family";
    if agree {
        Verdict::holds(M).with_note(format!("both {}", full.status))
    } else {
        Verdict::fails(M, format!("full {full} vs reduced {reduced}"))
    }
}

fn equifibered(doc: &Document, rec: &mut Recorder) -> InputResult<()> {
    match model_input(doc)? {
        ModelInput::Monoidal(m) => {
            rec.run("segal", || check_model_segal(&m));
            match check_monoidal_equifibered_over_f(&m) {
                Ok(eq) => {
                    rec.push("equifibered over F", eq.verdict.clone());
                    rec.push("full family", eq.full.verdict.clone());
                    let hk = rec.run("decomposition and mapping conditions", || check_hk_conditions(&m).verdict);
                    rec.push("criteria agree", agreement("monoidal", &eq.verdict, &hk));
                }
                Err(e) => rec.push("equifibered over F", Verdict::unknown("fold square", e.to_string())),
            }
        }
        ModelInput::TargetProjection(p) => {
            let ar = ArrowRightCat::new(p.clone()).map_err(|e| InputError::at(&doc.origin, e.to_string()))?;
            let point = CocartesianFibration::new(Functor::identity(p.base.clone()), vec![true; p.base.n_mor()]);
            let sound = check_sound(&p).verdict;
            let r = check_equifibered(&ar.target_fibration(), &point, &ar.ev1, &p, &sound);
            rec.push("equifibered", r.verdict.clone());
            if let (Some(red), Some(agree)) = (&r.reduced, r.agree) {
                rec.push("elementary reduction agrees", agree_flag(agree, &r.verdict, red));
            }
        }
        ModelInput::Norms { fixtures, candidate, class, class_name } => {
            rec.run(format!("forward class {class_name} closed"), || check_f_class(&fixtures.gsets, &class));
            let span = &fixtures.span;
            let sound = candidate.base_soundness().clone();
            let ar = ArrowRightCat::new(candidate.base.clone()).map_err(|e| InputError::at(&doc.origin, e.to_string()))?;
            match free_fibration(&candidate, &ar) {
                Ok(env) => {
                    let r = check_norm_squares(&env.fibration, &ar.target_fibration(), &env.structure, span, &fixtures.gsets, &sound);
                    rec.push("norm squares", r.verdict.clone());
                    rec.push("full family", r.full.verdict.clone());
                    rec.push("reduction agrees", agree_flag(r.agree, &r.full.verdict, &r.verdict));
                }
                Err(e) => rec.push("norm squares", Verdict::unknown("free fibration", e.to_string())),
            }
        }
    }
    Ok(())
}

fn compare(doc: &Document, rec: &mut Recorder) -> InputResult<()> {
    let m = morphism_input(doc)?;
    let target_sound = match &m.target_span {
        Some(sp) => crate::span::check_span_sound(sp),
        None => check_sound(&m.map.target).verdict,
    };
    let r = check_comparison_hypotheses_with(&m.map, target_sound);
    rec.push("strong segal", r.strong_segal);
    rec.push("elementary objects", r.elementary);
    rec.push("active cores", r.active_cores);
    rec.push("target sound", r.target_sound);
    rec.push("target extendable", r.target_extendable);
    rec.push("hypotheses", r.verdict);
    rec.run("active slices", || check_active_slices(&m.map).0);
    Ok(())
}

fn transport(mdoc: &Document, fdoc: &Document, rec: &mut Recorder) -> InputResult<()> {
    let m = morphism_input(mdoc)?;
    let cand = fibrous_input(fdoc)?;
    match transport_demo(&m.map, &cand) {
        Ok(t) => {
            rec.push("pullback fibrous", t.fibrous.verdict);
            rec.push("envelopes", t.envelopes);
            rec.push("transport", t.verdict);
        }
        Err(e) => rec.push("transport", Verdict::fails("transport preconditions", e.to_string())),
    }
    Ok(())
}

fn enumerate(doc: &Document, flags: &Flags, rec: &mut Recorder) -> InputResult<()> {
    const M: &str = "exhaustive enumeration up to isomorphism";
    let expect = |n: usize, v: Verdict| match flags.expect {
        Some(e) if e != n => Verdict::fails(M, format!("{n} classes, expected {e}")),
        _ => v,
    };
    let counted = |n: usize, cand: usize| Verdict::holds(M).with_note(format!("{n} classes among {cand} candidates, cap {}", flags.cap));
    let is_morphism = !doc.inline && doc.value.get("morphism").is_some()
        || doc.inline && doc.value.get("fixture").and_then(|f| f.as_str()).is_some_and(|f| MORPHISM_FAMILIES.contains(&f));
    if !is_morphism {
        let p = pattern_input(doc)?.pattern;
        let v = match enumerate_segal_set_objects(&p, flags.cap, flags.budget) {
            Ok(e) => expect(e.diagrams.len(), counted(e.diagrams.len(), e.candidates)),
            Err(e) => Verdict::unknown(M, e.to_string()),
        };
        rec.push("enumerate", v);
        return Ok(());
    }
    let m = morphism_input(doc)?;
    let f = &m.map;
    let over_target = enumerate_segal_set_objects(&f.target, flags.cap, flags.budget);
    let over_source = enumerate_segal_set_objects(&f.source, flags.cap, flags.budget);
    match (over_target, over_source) {
        (Ok(t), Ok(s)) => {
            rec.push("enumerate target", expect(t.diagrams.len(), counted(t.diagrams.len(), t.candidates)));
            rec.push("enumerate source", expect(s.diagrams.len(), counted(s.diagrams.len(), s.candidates)));
            let pulled: BTreeSet<Vec<u32>> = t.diagrams.iter().map(|d| canonical_key(&f.source, &d.restrict(&f.functor))).collect();
            let direct: BTreeSet<Vec<u32>> = s.diagrams.iter().map(|d| canonical_key(&f.source, d)).collect();
            const B: &str = "restriction is a bijection on isomorphism classes";
            let v = if pulled.len() != t.diagrams.len() {
                Verdict::fails(B, format!("{} classes restrict to {}", t.diagrams.len(), pulled.len()))
            } else if pulled != direct {
                Verdict::fails(B, format!("{} restricted classes, {} direct, {} in common", pulled.len(), direct.len(), pulled.intersection(&direct).count()))
            } else {
                Verdict::holds(B)
            };
            rec.push("restriction", v);
        }
        (t, s) => {
            let e = t.err().or(s.err()).expect("one side failed");
            rec.push("enumerate", Verdict::unknown(M, e.to_string()));
        }
    }
    Ok(())
}

const MORPHISM_FAMILIES: &[&str] = &["pointed_to_spans", "cut", "source_map", "pointed_map", "restricted_map", "operad_projection"];

/// `circle`: two minima below two maxima; `zigzag`: `a < b > c`;
/// `chain:n=..`; or an explicit `[category]`.
fn category_input(doc: &Document) -> InputResult<FinCat> {
    let (loc, v) = doc.section("category").ok_or_else(|| InputError::at(&doc.origin, "no [category] section"))?;
    if let Some(f) = FixtureSpec::read(&loc, v)? {
        return match f.family.as_str() {
            "circle" => Ok(poset_cat(4, |x, y| x == y || (x < 2 && y >= 2), "circle")),
            "zigzag" => Ok(poset_cat(3, |x, y| x == y || y == 1, "zigzag")),
            "chain" => {
                let n = v.get("n").and_then(|n| n.as_u64()).unwrap_or(3) as usize;
                Ok(poset_cat(n, |x, y| x <= y, format!("chain{n}")))
            }
            other => Err(InputError::at(format!("{loc}.fixture"), format!("unknown category family {other:?}"))),
        };
    }
    let spec: CategorySpec = typed(&loc, v)?;
    build_category(&loc, &spec)
}

fn homotopy(doc: &Document, flags: &Flags, rec: &mut Recorder) -> InputResult<()> {
    let c = category_input(doc)?;
    let cfg = flags.homotopy();
    let b = if c.is_poset() { Some(rec.run("beat points", || beat_point_verdict(&c))) } else { None };
    let h = rec.run("homology", || homology_verdict(&c, &cfg));
    if let Some(b) = b {
        rec.push("routes agree", agreement("contractibility", &b, &h));
    }
    rec.run("contractible", || contractibility_verdict_with(&c, &cfg));
    Ok(())
}

/// A random poset on `n ≤ max` points: the transitive closure of random
/// relations `i < j`.
pub fn random_poset(max: usize, rng: &mut impl Rng) -> FinCat {
    let n = rng.gen_range(1..=max);
    let mut leq = vec![vec![false; n]; n];
    let density: f64 = rng.gen_range(0.1..0.7);
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            leq[i][j] = rng.gen_bool(density);
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][m] && leq[m][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    poset_cat(n, |x, y| leq[x][y], format!("random{n}"))
}

fn random_posets(flags: &Flags, rec: &mut Recorder) {
    const M: &str = "beat-point core and homology never disagree";
    let cfg = flags.homotopy();
    let mut rng = ChaCha8Rng::seed_from_u64(flags.seed);
    let n = samples(flags, 500);
    let mut tally: BTreeMap<(Status, Status), usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for i in 0..n {
        let c = random_poset(8, &mut rng);
        let b = beat_point_verdict(&c);
        let h = homology_verdict(&c, &cfg);
        *tally.entry((b.status, h.status)).or_default() += 1;
        if !b.is_unknown() && !h.is_unknown() && b.status != h.status {
            bad.push(format!("sample {i} ({} points): {b} vs {h}", c.n_obj()));
        }
    }
    let mut v = if bad.is_empty() { Verdict::holds(M) } else { Verdict::fails(M, bad[0].clone()) };
    v.witness.extend(bad.into_iter().skip(1).take(7));
    let t: Vec<String> = tally.iter().map(|((b, h), k)| format!("{k} beat {b}/homology {h}")).collect();
    rec.push("random posets", v.with_note(format!("{n} posets, seed {}: {}", flags.seed, t.join(", "))));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::doc::load;

    fn inline(cmd: Command, s: &str) -> Report {
        run(cmd, &[load(s).unwrap()], &Flags::default()).unwrap()
    }

    #[test]
    fn sound_fin_star_three_holds() {
        let r = inline(Command::Sound, "fin_star:k=3");
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    }

    #[test]
    fn extendable_fin_star_two_fails() {
        let r = inline(Command::Extendable, "fin_star:k=2");
        assert_eq!(r.exit_code(), 1, "{}", r.to_text());
        let e = r.find("extendable").unwrap();
        assert!(!e.witness.is_empty());
    }

    #[test]
    fn reports_are_byte_identical() {
        let a = inline(Command::RelativeSegal, "fin_star:k=2").to_json();
        let b = inline(Command::RelativeSegal, "fin_star:k=2").to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn circle_fails_with_rank_one() {
        let r = inline(Command::Homotopy, "circle");
        let h = r.find("homology").unwrap();
        assert_eq!(h.status, Status::Fails);
        assert!(h.witness.iter().any(|w| w.contains("H_1 has rank 1")), "{:?}", h.witness);
        assert_eq!(r.find("routes agree").unwrap().status, Status::Holds);
    }

    #[test]
    fn wrong_arity_is_an_input_error() {
        assert!(run(Command::Transport, &[load("fin_star:k=2").unwrap()], &Flags::default()).is_err());
    }
}
