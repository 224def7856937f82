//! Input documents: TOML or JSON files, or inline fixture expressions such
//! as `fin_star:k=3,flavor=flat`.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::fincat::{CatBuilder, FinCat, FinSetDiagram, Functor};
use crate::pattern::{AlgebraicPattern, DiagramMap};

/// A malformed input, located by file position or field path.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{location}: {message}")]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { location: location.into(), message: message.into() }
    }
}

pub type InputResult<T> = Result<T, InputError>;

#[derive(Clone, Debug)]
pub struct Document {
    /// file name or the inline expression
    pub origin: String,
    /// bytes that feed the report digest
    pub text: String,
    pub value: Value,
    pub inline: bool,
}

/// Reads a `.toml` or `.json` file, or parses `arg` as an inline fixture.
pub fn load(arg: &str) -> InputResult<Document> {
    let path = Path::new(arg);
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    if ext == "toml" || ext == "json" {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::at(arg, format!("cannot read: {e}")))?;
        let value = parse_text(arg, &text, ext)?;
        return Ok(Document { origin: arg.to_string(), text, value, inline: false });
    }
    let value = parse_inline(arg)?;
    Ok(Document { origin: arg.to_string(), text: arg.to_string(), value, inline: true })
}

pub fn parse_text(origin: &str, text: &str, ext: &str) -> InputResult<Value> {
    let value: Value = if ext == "json" {
        serde_json::from_str(text)
            .map_err(|e| InputError::at(format!("{origin}:{}:{}", e.line(), e.column()), e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start.min(text.len())].lines().count().max(1));
            let loc = line.map_or(origin.to_string(), |l| format!("{origin}:{l}"));
            InputError::at(loc, e.message().to_string())
        })?
    };
    if !value.is_object() {
        return Err(InputError::at(origin, "top level must be a table"));
    }
    Ok(value)
}

/// `name` or `name:key=value,key=value`; values are integers, booleans or
/// bare strings.
pub fn parse_inline(arg: &str) -> InputResult<Value> {
    let (name, rest) = arg.split_once(':').unwrap_or((arg, ""));
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(InputError::at(arg, "not a file with a .toml/.json extension and not a fixture name"));
    }
    let mut m = Map::new();
    m.insert("fixture".into(), Value::String(name.into()));
    for part in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| InputError::at(arg, format!("expected key=value, got {part:?}")))?;
        let v = if let Ok(n) = v.parse::<u64>() {
            Value::from(n)
        } else if let Ok(b) = v.parse::<bool>() {
            Value::Bool(b)
        } else {
            Value::String(v.to_string())
        };
        if m.insert(k.to_string(), v).is_some() {
            return Err(InputError::at(arg, format!("parameter {k} given twice")));
        }
    }
    Ok(Value::Object(m))
}

impl Document {
    /// The table for `key`. An inline fixture stands for whichever section is
    /// asked for.
    pub fn section(&self, key: &str) -> Option<(String, &Value)> {
        if self.inline {
            return Some((self.origin.clone(), &self.value));
        }
        self.value.get(key).map(|v| (format!("{}: {key}", self.origin), v))
    }

    pub fn named(&self, name: &str) -> Option<(String, &Value)> {
        self.value.get("patterns")?.get(name).map(|v| (format!("{}: patterns.{name}", self.origin), v))
    }
}

pub fn typed<T: for<'de> Deserialize<'de>>(loc: &str, v: &Value) -> InputResult<T> {
    T::deserialize(v).map_err(|e| InputError::at(loc, e.to_string()))
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// Explicit category data. For thin categories composites are inferred from
/// endpoints and `compose` may be omitted; otherwise every composable pair of
/// non-identity morphisms needs an entry `[g, f, g∘f]`.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub name: Option<String>,
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub thin: bool,
    /// identity names; the default for object `X` is `id[X]`
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    pub name: Option<String>,
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub thin: bool,
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
    /// non-identity inert morphisms
    #[serde(default)]
    pub inert: Vec<String>,
    /// non-identity active morphisms
    #[serde(default)]
    pub active: Vec<String>,
    #[serde(default)]
    pub elementary: Vec<String>,
}

impl PatternSpec {
    fn category(self) -> (CategorySpec, Vec<String>, Vec<String>, Vec<String>) {
        let cat = CategorySpec {
            name: self.name,
            objects: self.objects,
            morphisms: self.morphisms,
            compose: self.compose,
            thin: self.thin,
            identities: self.identities,
        };
        (cat, self.inert, self.active, self.elementary)
    }
}

fn lookup(names: &HashMap<&str, usize>, loc: &str, what: &str, name: &str) -> InputResult<usize> {
    names.get(name).copied().ok_or_else(|| InputError::at(loc, format!("unknown {what} {name:?}")))
}

pub fn build_category(loc: &str, spec: &CategorySpec) -> InputResult<FinCat> {
    let mut b = CatBuilder::new(spec.name.clone().unwrap_or_else(|| "C".into()));
    let mut obj_names: HashMap<&str, usize> = HashMap::new();
    let mut mor_names: HashMap<String, usize> = HashMap::new();
    let mut ids = Vec::new();
    for (i, o) in spec.objects.iter().enumerate() {
        if obj_names.insert(o, i).is_some() {
            return Err(InputError::at(format!("{loc}.objects[{i}]"), format!("duplicate object {o:?}")));
        }
        b.add_object(o.clone());
    }
    for name in spec.identities.keys() {
        lookup(&obj_names, &format!("{loc}.identities"), "object", name)?;
    }
    for (i, o) in spec.objects.iter().enumerate() {
        let name = spec.identities.get(o).cloned().unwrap_or_else(|| format!("id[{o}]"));
        let m = b.add_morphism(name.clone(), i, i);
        b.set_identity(i, m);
        mor_names.insert(name, m);
        ids.push(m);
    }
    for (i, m) in spec.morphisms.iter().enumerate() {
        let at = format!("{loc}.morphisms[{i}]");
        let s = lookup(&obj_names, &at, "object", &m.src)?;
        let t = lookup(&obj_names, &at, "object", &m.tgt)?;
        let k = b.add_morphism(m.name.clone(), s, t);
        if mor_names.insert(m.name.clone(), k).is_some() {
            return Err(InputError::at(at, format!("duplicate morphism name {:?}", m.name)));
        }
    }
    let n_mor = b.n_mor();
    let ends: Vec<(usize, usize)> = (0..n_mor).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, [g, f, h]) in spec.compose.iter().enumerate() {
        let at = format!("{loc}.compose[{i}]");
        let get = |n: &String| mor_names.get(n).copied().ok_or_else(|| InputError::at(&at, format!("unknown morphism {n:?}")));
        let (g, f, h) = (get(g)?, get(f)?, get(h)?);
        if ends[f].1 != ends[g].0 {
            return Err(InputError::at(at, "entries are not composable"));
        }
        if ends[h] != (ends[f].0, ends[g].1) {
            return Err(InputError::at(at, "composite has the wrong source or target"));
        }
        if table.insert((g, f), h).is_some() {
            return Err(InputError::at(at, "composite given twice"));
        }
    }
    let is_id: Vec<bool> = (0..n_mor).map(|m| ids.contains(&m)).collect();
    let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (m, &e) in ends.iter().enumerate() {
        hom.entry(e).or_default().push(m);
    }
    let label: Vec<String> = {
        let mut v = vec![String::new(); n_mor];
        for (n, &m) in &mor_names {
            v[m] = n.clone();
        }
        v
    };
    if spec.thin {
        if let Some(((s, t), _)) = hom.iter().find(|(_, ms)| ms.len() > 1) {
            return Err(InputError::at(
                format!("{loc}.thin"),
                format!("two morphisms {} -> {} in a thin category", spec.objects[*s], spec.objects[*t]),
            ));
        }
    }
    for g in 0..n_mor {
        for f in 0..n_mor {
            if is_id[g] || is_id[f] || ends[f].1 != ends[g].0 || table.contains_key(&(g, f)) {
                continue;
            }
            let ms = hom.get(&(ends[f].0, ends[g].1)).map_or(&[][..], |v| &v[..]);
            if spec.thin && ms.len() == 1 {
                table.insert((g, f), ms[0]);
            } else {
                return Err(InputError::at(
                    format!("{loc}.compose"),
                    format!("missing composite {} o {}", label[g], label[f]),
                ));
            }
        }
    }
    let cat = b.build_from_map(&table).map_err(|e| InputError::at(format!("{loc}.compose"), e.to_string()))?;
    cat.check_associativity().map_err(|e| InputError::at(format!("{loc}.compose"), e.to_string()))?;
    Ok(cat)
}

pub fn build_pattern(loc: &str, v: &Value) -> InputResult<AlgebraicPattern> {
    let spec: PatternSpec = typed(loc, v)?;
    let (cat, inert, active, elementary) = spec.category();
    let base = Arc::new(build_category(loc, &cat)?);
    let flags = |names: &[String], field: &str| -> InputResult<Vec<bool>> {
        let mut v: Vec<bool> = base.morphisms().map(|m| base.is_identity(m)).collect();
        for (i, n) in names.iter().enumerate() {
            let m = base.find_morphism(n).ok_or_else(|| InputError::at(format!("{loc}.{field}[{i}]"), format!("unknown morphism {n:?}")))?;
            v[m] = true;
        }
        Ok(v)
    };
    let inert = flags(&inert, "inert")?;
    let active = flags(&active, "active")?;
    let mut el = vec![false; base.n_obj()];
    for (i, n) in elementary.iter().enumerate() {
        let o = base.find_object(n).ok_or_else(|| InputError::at(format!("{loc}.elementary[{i}]"), format!("unknown object {n:?}")))?;
        el[o] = true;
    }
    let name = cat.name.unwrap_or_else(|| "pattern".into());
    Ok(AlgebraicPattern::new(name, base, inert, active, el, None))
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    /// images of non-identity morphisms
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

/// Object and morphism assignments by label; identities go to identities.
pub fn build_functor(
    loc: &str,
    source: &Arc<FinCat>,
    target: &Arc<FinCat>,
    objects: &BTreeMap<String, String>,
    morphisms: &BTreeMap<String, String>,
) -> InputResult<Functor> {
    let mut obj = Vec::new();
    for o in source.objects() {
        let l = source.obj_label(o);
        let img = objects.get(l).ok_or_else(|| InputError::at(format!("{loc}.objects"), format!("no image for {l:?}")))?;
        obj.push(target.find_object(img).ok_or_else(|| InputError::at(format!("{loc}.objects.{l}"), format!("unknown object {img:?}")))?);
    }
    for k in objects.keys() {
        if source.find_object(k).is_none() {
            return Err(InputError::at(format!("{loc}.objects.{k}"), "not an object of the source"));
        }
    }
    for k in morphisms.keys() {
        if source.find_morphism(k).is_none() {
            return Err(InputError::at(format!("{loc}.morphisms.{k}"), "not a morphism of the source"));
        }
    }
    let mut mor = Vec::new();
    for m in source.morphisms() {
        let l = source.mor_label(m);
        let img = if source.is_identity(m) {
            target.id(obj[source.src(m)])
        } else {
            let n = morphisms.get(l).ok_or_else(|| InputError::at(format!("{loc}.morphisms"), format!("no image for {l:?}")))?;
            target.find_morphism(n).ok_or_else(|| InputError::at(format!("{loc}.morphisms.{l}"), format!("unknown morphism {n:?}")))?
        };
        mor.push(img);
    }
    Functor::new(source.clone(), target.clone(), obj, mor).map_err(|e| InputError::at(loc, e.to_string()))
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    /// cardinality per object label; missing objects get the empty set
    pub sizes: BTreeMap<String, usize>,
    /// function tables of non-identity morphisms
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<u32>>,
}

pub fn build_diagram(loc: &str, index: &Arc<FinCat>, v: &Value) -> InputResult<FinSetDiagram> {
    let spec: DiagramSpec = typed(loc, v)?;
    let mut sizes = vec![0; index.n_obj()];
    for (l, &n) in &spec.sizes {
        let o = index.find_object(l).ok_or_else(|| InputError::at(format!("{loc}.sizes.{l}"), "unknown object"))?;
        sizes[o] = n;
    }
    for k in spec.maps.keys() {
        if index.find_morphism(k).is_none() {
            return Err(InputError::at(format!("{loc}.maps.{k}"), "unknown morphism"));
        }
    }
    let mut maps = Vec::new();
    for m in index.morphisms() {
        let l = index.mor_label(m);
        if index.is_identity(m) {
            maps.push((0..sizes[index.src(m)] as u32).collect());
        } else if sizes[index.src(m)] == 0 {
            maps.push(spec.maps.get(l).cloned().unwrap_or_default());
        } else {
            let t = spec.maps.get(l).ok_or_else(|| InputError::at(format!("{loc}.maps"), format!("no table for {l:?}")))?;
            maps.push(t.clone());
        }
    }
    let d = FinSetDiagram { index: index.clone(), sizes, maps };
    d.validate().map_err(|e| InputError::at(loc, e.to_string()))?;
    Ok(d)
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct TransformationSpec {
    source: Value,
    target: Value,
    components: BTreeMap<String, Vec<u32>>,
}

pub fn build_transformation(loc: &str, index: &Arc<FinCat>, v: &Value) -> InputResult<DiagramMap> {
    let spec: TransformationSpec = typed(loc, v)?;
    let source = build_diagram(&format!("{loc}.source"), index, &spec.source)?;
    let target = build_diagram(&format!("{loc}.target"), index, &spec.target)?;
    let mut comps = vec![Vec::new(); index.n_obj()];
    for (l, c) in spec.components {
        let o = index.find_object(&l).ok_or_else(|| InputError::at(format!("{loc}.components.{l}"), "unknown object"))?;
        comps[o] = c;
    }
    DiagramMap::new(source, target, comps).map_err(|e| InputError::at(loc, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const WALKING: &str = r#"
[pattern]
name = "walk"
objects = ["X", "E"]
morphisms = [{ name = "i", src = "X", tgt = "E" }]
thin = true
inert = ["i"]
elementary = ["E"]
"#;

    #[test]
    fn thin_pattern_parses() {
        let v = parse_text("t.toml", WALKING, "toml").unwrap();
        let p = build_pattern("pattern", &v["pattern"]).unwrap();
        assert_eq!(p.base.n_mor(), 3);
        assert!(p.is_inert(2) && !p.is_active(2));
    }

    #[test]
    fn toml_errors_carry_a_line() {
        let e = parse_text("t.toml", "[pattern]\nobjects = [\n", "toml").unwrap_err();
        assert!(e.location.starts_with("t.toml:"), "{e}");
    }

    #[test]
    fn missing_composite_is_named() {
        let doc = r#"
objects = ["A", "B", "C"]
morphisms = [{ name = "f", src = "A", tgt = "B" }, { name = "g", src = "B", tgt = "C" }]
"#;
        let v: Value = toml::from_str(doc).unwrap();
        let e = build_pattern("pattern", &v).unwrap_err();
        assert_eq!(e.location, "pattern.compose");
        assert!(e.message.contains("g o f"), "{e}");
    }

    #[test]
    fn wrong_composite_endpoints_are_rejected() {
        let doc = r#"
objects = ["A", "B"]
morphisms = [{ name = "f", src = "A", tgt = "B" }, { name = "e", src = "A", tgt = "A" }]
compose = [["e", "e", "f"]]
"#;
        let v: Value = toml::from_str(doc).unwrap();
        let e = build_pattern("pattern", &v).unwrap_err();
        assert_eq!(e.location, "pattern.compose[0]");
    }

    #[test]
    fn inline_fixture() {
        let v = parse_inline("fin_star:k=3,flavor=flat").unwrap();
        assert_eq!(v["k"], 3);
        assert_eq!(v["flavor"], "flat");
        assert!(parse_inline("no such thing").is_err());
    }
}
