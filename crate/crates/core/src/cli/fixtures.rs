//! Built-in fixtures by family name and parameters.

use std::sync::Arc;

use serde_json::Value;

use super::doc::{build_category, build_functor, build_pattern, typed, CategorySpec, Document, FunctorSpec, InputError, InputResult};
use crate::catalog::{
    cut_functor, delta_op, fin_star, g_fixtures, operad_of_operators, span_fin, span_fin_injective, span_fin_restricted,
    pointed_to_spans, FiniteGroup, Flavor, ForwardClass, GFixtures, GSetCat, OperadKind,
};
use crate::envelope::monoidal::MonoidalModel;
use crate::fibrous::fixtures::{double_cover_fixture, missing_lift_fixture, operad_fixture, span_iso_fixture};
use crate::fibrous::FibrousCandidate;
use crate::fincat::{CatBuilder, FinCat};
use crate::pattern::{AlgebraicPattern, PatternMorphism};
use crate::span::{check_span_sound, SpanPattern};
use crate::verdict::Verdict;

pub struct PatternInput {
    pub pattern: Arc<AlgebraicPattern>,
    /// present for span patterns, whose soundness has its own criterion
    pub span: Option<Arc<SpanPattern>>,
}

pub struct MorphismInput {
    pub map: PatternMorphism,
    pub target_span: Option<Arc<SpanPattern>>,
}

pub enum ModelInput {
    /// a symmetric monoidal category over `(𝔽, ⊔)`
    Monoidal(MonoidalModel),
    /// the target projection of `Ar_act(𝔽*)` over the identity fibration
    TargetProjection(Arc<AlgebraicPattern>),
    /// envelope of `Span_{all,≃}(𝔽_G) -> Span(𝔽_G)` together with a class
    /// of forward maps to check for closure
    Norms { fixtures: GFixtures, candidate: FibrousCandidate, class: Vec<bool>, class_name: String },
}

/// Family name plus parameters, read from a table with a `fixture` key.
pub struct FixtureSpec<'a> {
    pub loc: String,
    pub family: String,
    table: &'a serde_json::Map<String, Value>,
}

impl<'a> FixtureSpec<'a> {
    pub fn read(loc: &str, v: &'a Value) -> InputResult<Option<Self>> {
        let Some(table) = v.as_object() else {
            return Err(InputError::at(loc, "expected a table"));
        };
        match table.get("fixture") {
            None => Ok(None),
            Some(Value::String(f)) => Ok(Some(FixtureSpec { loc: loc.to_string(), family: f.clone(), table })),
            Some(_) => Err(InputError::at(format!("{loc}.fixture"), "expected a family name")),
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> InputResult<()> {
        for k in self.table.keys() {
            if k != "fixture" && !allowed.contains(&k.as_str()) {
                return Err(InputError::at(
                    format!("{}.{k}", self.loc),
                    format!("unknown parameter for {} (expected one of {:?})", self.family, allowed),
                ));
            }
        }
        Ok(())
    }

    fn usize(&self, key: &str, default: Option<usize>) -> InputResult<usize> {
        match self.table.get(key) {
            None => default.ok_or_else(|| InputError::at(format!("{}.{key}", self.loc), "required parameter missing")),
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| InputError::at(format!("{}.{key}", self.loc), "expected a non-negative integer")),
        }
    }

    fn bounded(&self, key: &str, default: Option<usize>, lo: usize, hi: usize) -> InputResult<usize> {
        let n = self.usize(key, default)?;
        if n < lo || n > hi {
            return Err(InputError::at(format!("{}.{key}", self.loc), format!("must lie in {lo}..={hi}")));
        }
        Ok(n)
    }

    fn string(&self, key: &str, default: &str) -> InputResult<String> {
        match self.table.get(key) {
            None => Ok(default.to_string()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(InputError::at(format!("{}.{key}", self.loc), "expected a string")),
        }
    }

    fn flavor(&self) -> InputResult<Flavor> {
        match self.string("flavor", "flat")?.as_str() {
            "flat" => Ok(Flavor::Flat),
            "natural" => Ok(Flavor::Natural),
            s => Err(InputError::at(format!("{}.flavor", self.loc), format!("{s:?} is not flat or natural"))),
        }
    }

    fn operad(&self) -> InputResult<OperadKind> {
        match self.string("kind", "ass")?.to_ascii_lowercase().as_str() {
            "ass" => Ok(OperadKind::Ass),
            "comm" => Ok(OperadKind::Comm),
            "triv" => Ok(OperadKind::Triv),
            "e0" => Ok(OperadKind::E0),
            s => Err(InputError::at(format!("{}.kind", self.loc), format!("{s:?} is not ass, comm, triv or e0"))),
        }
    }

    fn forward(&self) -> InputResult<ForwardClass> {
        match self.string("forward", "iso")?.as_str() {
            "iso" => Ok(ForwardClass::Isomorphisms),
            "inj" => Ok(ForwardClass::Injective),
            "all" => Ok(ForwardClass::All),
            s => Err(InputError::at(format!("{}.forward", self.loc), format!("{s:?} is not iso, inj or all"))),
        }
    }

    /// `c<n>`, `trivial`, or a table `{ name, mul }`.
    fn group(&self) -> InputResult<FiniteGroup> {
        let loc = format!("{}.group", self.loc);
        match self.table.get("group") {
            None => Ok(FiniteGroup::cyclic(2)),
            Some(Value::String(s)) if s == "trivial" || s == "e" => Ok(FiniteGroup::trivial()),
            Some(Value::String(s)) => {
                let n = s
                    .strip_prefix(['c', 'C'])
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| (1..=12).contains(&n))
                    .ok_or_else(|| InputError::at(&loc, format!("{s:?} is not trivial or c1..c12")))?;
                Ok(FiniteGroup::cyclic(n))
            }
            Some(v) => {
                #[derive(serde::Deserialize)]
                #[serde(deny_unknown_fields)]
                struct Table {
                    name: String,
                    mul: Vec<Vec<usize>>,
                }
                let t: Table = typed(&loc, v)?;
                FiniteGroup::new(t.name, t.mul).map_err(|e| InputError::at(&loc, e.to_string()))
            }
        }
    }

    fn g_fixtures(&self) -> InputResult<GFixtures> {
        let group = self.group()?;
        let orbits = self.bounded("orbits", Some(2), 1, 3)?;
        g_fixtures(group, orbits, self.forward()?).map_err(|e| InputError::at(&self.loc, e.to_string()))
    }
}

const G_KEYS: &[&str] = &["group", "orbits", "forward"];

fn span_input(sp: SpanPattern) -> PatternInput {
    let sp = Arc::new(sp);
    PatternInput { pattern: sp.pattern.clone(), span: Some(sp) }
}

fn plain(p: AlgebraicPattern) -> PatternInput {
    PatternInput { pattern: Arc::new(p), span: None }
}

/// Objects X, Y, E with an inert `X ↣ E` into the elementary E and an active
/// `X ⇝ Y`; the el-fiber over `X ↣ E` is empty.
pub fn non_sound_fixture() -> AlgebraicPattern {
    let mut b = CatBuilder::new("non-sound");
    let (x, _) = b.add_object_with_identity("X");
    let (y, _) = b.add_object_with_identity("Y");
    let (e, _) = b.add_object_with_identity("E");
    b.add_morphism("i", x, e);
    b.add_morphism("w", x, y);
    let base: FinCat = b.build_with(|_, _| None).expect("no composable pairs");
    let inert = vec![true, true, true, true, false];
    let active = vec![true, true, true, false, true];
    AlgebraicPattern::new("non-sound", Arc::new(base), inert, active, vec![false, false, true], None)
}

/// `𝔽*^{≤k}` with every map inert and only identities active.
pub fn identity_actives_fixture(k: usize) -> AlgebraicPattern {
    let p = fin_star(k, Flavor::Flat);
    let mut q = AlgebraicPattern::all_inert(format!("{} (identity actives)", p.name), p.base.clone(), p.elementary.clone());
    q.truncation = p.truncation.clone();
    q
}

pub fn pattern_fixture(f: &FixtureSpec) -> InputResult<PatternInput> {
    let loc = &f.loc;
    Ok(match f.family.as_str() {
        "fin_star" => {
            f.check_keys(&["k", "flavor"])?;
            plain(fin_star(f.bounded("k", None, 0, 5)?, f.flavor()?))
        }
        "delta_op" => {
            f.check_keys(&["n", "m", "flavor"])?;
            let n = f.bounded("n", None, 0, 4)?;
            let m = f.bounded("m", Some(n), n, 4)?;
            plain(delta_op(n, m, f.flavor()?))
        }
        "span_fin" => {
            f.check_keys(&["k", "forward"])?;
            let k = f.bounded("k", None, 0, 4)?;
            span_input(match f.table.get("forward") {
                None => span_fin(k),
                Some(_) => span_fin_restricted(k, f.forward()?),
            })
        }
        "span_fin_injective" => {
            f.check_keys(&["k"])?;
            span_input(span_fin_injective(f.bounded("k", None, 0, 4)?))
        }
        "span_g" | "span_g_restricted" | "pointed_g" | "ul_pointed_g" => {
            f.check_keys(G_KEYS)?;
            let fx = f.g_fixtures()?;
            span_input(match f.family.as_str() {
                "span_g" => fx.span,
                "span_g_restricted" => fx.restricted,
                "pointed_g" => fx.pointed,
                _ => fx.ul_pointed,
            })
        }
        "operad" => {
            f.check_keys(&["kind", "k"])?;
            plain(operad_of_operators(f.operad()?, f.bounded("k", None, 0, 4)?).0)
        }
        "identity_actives" => {
            f.check_keys(&["k"])?;
            plain(identity_actives_fixture(f.bounded("k", Some(2), 0, 4)?))
        }
        "non_sound" => {
            f.check_keys(&[])?;
            plain(non_sound_fixture())
        }
        other => return Err(InputError::at(format!("{loc}.fixture"), format!("unknown pattern family {other:?}"))),
    })
}

/// A pattern from a document section: a fixture or explicit data.
pub fn pattern_at(loc: &str, v: &Value) -> InputResult<PatternInput> {
    match FixtureSpec::read(loc, v)? {
        Some(f) => pattern_fixture(&f),
        None => Ok(plain(build_pattern(loc, v)?)),
    }
}

pub fn pattern_input(doc: &Document) -> InputResult<PatternInput> {
    let (loc, v) = doc.section("pattern").ok_or_else(|| InputError::at(&doc.origin, "no [pattern] section"))?;
    pattern_at(&loc, v)
}

fn named_pattern(doc: &Document, name: &str, loc: &str) -> InputResult<PatternInput> {
    let (l, v) = doc.named(name).ok_or_else(|| InputError::at(loc, format!("no pattern named {name:?} under [patterns]")))?;
    pattern_at(&l, v)
}

pub fn morphism_input(doc: &Document) -> InputResult<MorphismInput> {
    let (loc, v) = doc.section("morphism").ok_or_else(|| InputError::at(&doc.origin, "no [morphism] section"))?;
    if let Some(f) = FixtureSpec::read(&loc, v)? {
        let err = |e: crate::fincat::CatError| InputError::at(&loc, e.to_string());
        return Ok(match f.family.as_str() {
            "pointed_to_spans" => {
                f.check_keys(&["k"])?;
                let k = f.bounded("k", None, 0, 4)?;
                let sp = Arc::new(span_fin(k));
                MorphismInput { map: pointed_to_spans(k, &sp).map_err(err)?, target_span: Some(sp) }
            }
            "cut" => {
                f.check_keys(&["n", "m", "k"])?;
                let n = f.bounded("n", None, 0, 4)?;
                let m = f.bounded("m", Some(n), n, 4)?;
                let k = f.bounded("k", Some(m), 0, 4)?;
                MorphismInput { map: cut_functor(n, m, k).map_err(err)?, target_span: None }
            }
            "source_map" | "pointed_map" | "restricted_map" => {
                f.check_keys(G_KEYS)?;
                let fx = f.g_fixtures()?;
                let map = match f.family.as_str() {
                    "source_map" => fx.source_map,
                    "pointed_map" => fx.pointed_map,
                    _ => fx.restricted_map,
                };
                MorphismInput { map, target_span: Some(Arc::new(fx.span)) }
            }
            "operad_projection" => {
                f.check_keys(&["kind", "k"])?;
                let (_, pi) = operad_of_operators(f.operad()?, f.bounded("k", None, 0, 4)?);
                MorphismInput { map: pi, target_span: None }
            }
            other => return Err(InputError::at(format!("{loc}.fixture"), format!("unknown morphism family {other:?}"))),
        });
    }
    let spec: FunctorSpec = typed(&loc, v)?;
    let s = named_pattern(doc, &spec.source, &format!("{loc}.source"))?;
    let t = named_pattern(doc, &spec.target, &format!("{loc}.target"))?;
    let func = build_functor(&loc, &s.pattern.base, &t.pattern.base, &spec.objects, &spec.morphisms)?;
    let map = PatternMorphism::new(func, s.pattern, t.pattern).map_err(|e| InputError::at(&loc, e.to_string()))?;
    Ok(MorphismInput { map, target_span: t.span })
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitFibrous {
    base: String,
    total: Value,
    objects: std::collections::BTreeMap<String, String>,
    #[serde(default)]
    morphisms: std::collections::BTreeMap<String, String>,
}

pub fn fibrous_input(doc: &Document) -> InputResult<FibrousCandidate> {
    let (loc, v) = doc.section("fibrous").ok_or_else(|| InputError::at(&doc.origin, "no [fibrous] section"))?;
    let err = |e: crate::fincat::CatError| InputError::at(&loc, e.to_string());
    if let Some(f) = FixtureSpec::read(&loc, v)? {
        return match f.family.as_str() {
            "operad" => {
                f.check_keys(&["kind", "k"])?;
                Ok(operad_fixture(f.operad()?, f.bounded("k", None, 0, 4)?))
            }
            "double_cover" => {
                f.check_keys(&["k"])?;
                Ok(double_cover_fixture(f.bounded("k", None, 0, 4)?))
            }
            "missing_lift" => {
                f.check_keys(&["k"])?;
                Ok(missing_lift_fixture(f.bounded("k", None, 1, 4)?))
            }
            "span_iso" => {
                f.check_keys(&["group", "orbits"])?;
                span_iso_fixture(f.group()?, f.bounded("orbits", Some(2), 1, 3)?).map_err(err)
            }
            "identity" => {
                let mut table = f.table.clone();
                let of = match table.remove("of") {
                    Some(Value::String(s)) => s,
                    _ => return Err(InputError::at(format!("{loc}.of"), "expected the base pattern family")),
                };
                table.insert("fixture".into(), Value::String(of));
                let table = Value::Object(table);
                let base = pattern_at(&loc, &table)?;
                Ok(with_span_soundness(FibrousCandidate::identity(base.pattern), base.span.as_deref()))
            }
            other => Err(InputError::at(format!("{loc}.fixture"), format!("unknown fibrous family {other:?}"))),
        };
    }
    let spec: ExplicitFibrous = typed(&loc, v)?;
    let base = named_pattern(doc, &spec.base, &format!("{loc}.base"))?;
    let cat: CategorySpec = typed(&format!("{loc}.total"), &spec.total)?;
    let total = Arc::new(build_category(&format!("{loc}.total"), &cat)?);
    let proj = build_functor(&loc, &total, &base.pattern.base, &spec.objects, &spec.morphisms)?;
    let cand = FibrousCandidate::new(proj, base.pattern).map_err(err)?;
    Ok(with_span_soundness(cand, base.span.as_deref()))
}

fn with_span_soundness(c: FibrousCandidate, span: Option<&SpanPattern>) -> FibrousCandidate {
    match span {
        Some(sp) => c.with_base_soundness(check_span_sound(sp)),
        None => c,
    }
}

/// The forward class named `class`: `iso`, `inj`, `all`, or `broken`
/// (isomorphisms plus one fold, not closed under base change).
fn class_flags(gs: &GSetCat, class: &str, loc: &str) -> InputResult<Vec<bool>> {
    let c = &gs.cat;
    Ok(match class {
        "iso" | "inj" | "all" => {
            let fwd = match class {
                "iso" => ForwardClass::Isomorphisms,
                "inj" => ForwardClass::Injective,
                _ => ForwardClass::All,
            };
            c.morphisms().map(|m| fwd.contains(gs, m)).collect()
        }
        "broken" => {
            let extra = c
                .morphisms()
                .find(|&m| !c.is_iso(m) && !gs.is_injective(m))
                .ok_or_else(|| InputError::at(loc, "no non-injective map at this truncation"))?;
            c.morphisms().map(|m| c.is_iso(m) || m == extra).collect()
        }
        s => return Err(InputError::at(loc, format!("{s:?} is not iso, inj, all or broken"))),
    })
}

pub fn model_input(doc: &Document) -> InputResult<ModelInput> {
    let (loc, v) = doc.section("model").ok_or_else(|| InputError::at(&doc.origin, "no [model] section"))?;
    let f = FixtureSpec::read(&loc, v)?.ok_or_else(|| InputError::at(&loc, "models are given by fixture name"))?;
    let err = |e: crate::fincat::CatError| InputError::at(&loc, e.to_string());
    Ok(match f.family.as_str() {
        "identity" | "terminal" | "doubling" => {
            f.check_keys(&["k"])?;
            let k = f.bounded("k", Some(2), 2, 4)?;
            ModelInput::Monoidal(match f.family.as_str() {
                "identity" => MonoidalModel::identity(k),
                "terminal" => MonoidalModel::terminal(k),
                _ => MonoidalModel::doubling(k),
            }
            .map_err(err)?)
        }
        "envelope" => {
            f.check_keys(&["kind", "k"])?;
            let c = operad_fixture(f.operad()?, f.bounded("k", Some(2), 2, 4)?);
            ModelInput::Monoidal(MonoidalModel::envelope(&c).map_err(err)?)
        }
        "target_projection" => {
            f.check_keys(&["k"])?;
            ModelInput::TargetProjection(Arc::new(fin_star(f.bounded("k", Some(2), 1, 4)?, Flavor::Flat)))
        }
        "norms" => {
            f.check_keys(&["group", "orbits", "class"])?;
            let group = f.group()?;
            let orbits = f.bounded("orbits", Some(2), 1, 3)?;
            let fixtures = g_fixtures(group.clone(), orbits, ForwardClass::Isomorphisms).map_err(err)?;
            let candidate = span_iso_fixture(group, orbits).map_err(err)?;
            let class_name = f.string("class", "iso")?;
            let class = class_flags(&fixtures.gsets, &class_name, &format!("{loc}.class"))?;
            ModelInput::Norms { fixtures, candidate, class, class_name }
        }
        other => return Err(InputError::at(format!("{loc}.fixture"), format!("unknown model family {other:?}"))),
    })
}

/// Soundness of a pattern input: the span criterion for span patterns.
pub fn soundness(p: &PatternInput) -> Verdict {
    match &p.span {
        Some(sp) => check_span_sound(sp),
        None => crate::pattern::check_sound(&p.pattern).verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::doc::parse_inline;

    fn spec(s: &str) -> Value {
        parse_inline(s).unwrap()
    }

    #[test]
    fn unknown_parameters_are_rejected() {
        let v = spec("fin_star:k=2,colour=red");
        let f = FixtureSpec::read("x", &v).unwrap().unwrap();
        let e = pattern_fixture(&f).err().unwrap();
        assert_eq!(e.location, "x.colour");
    }

    #[test]
    fn out_of_range_caps_are_rejected() {
        let v = spec("fin_star:k=9");
        let f = FixtureSpec::read("x", &v).unwrap().unwrap();
        assert!(pattern_fixture(&f).is_err());
    }

    #[test]
    fn non_sound_fixture_has_an_empty_fiber() {
        let r = crate::pattern::check_sound(&non_sound_fixture());
        assert!(r.verdict.is_fails(), "{}", r.verdict);
        assert!(r.rows.iter().any(|row| row.verdict.is_fails() && row.fiber_objects == 0));
    }

    #[test]
    fn broken_class_is_not_closed() {
        let fx = g_fixtures(FiniteGroup::cyclic(2), 2, ForwardClass::Isomorphisms).unwrap();
        let flags = class_flags(&fx.gsets, "broken", "c").unwrap();
        assert!(crate::catalog::check_f_class(&fx.gsets, &flags).is_fails());
    }
}
