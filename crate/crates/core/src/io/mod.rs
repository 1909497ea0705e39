//! JSON formats for categories, functors, coefficient systems and strict
//! functors `B^op → Cat`.
//!
//! Wherever a category is expected, a JSON string is read as a path to a
//! category file, resolved against the directory of the enclosing file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::coeff::{CoeffSystem, Kind, KindSpec, Representation, Variance};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::fibration::StrictFunctor;
use crate::fincat::{FinCat, FinFunctor, ObjId, RawCategory};
use crate::simplex::Simplex;


fn parse_err(m: impl Into<String>) -> Error {
    Error::Parse(m.into())
}

/// Read and parse a JSON file.
pub fn load_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

/// Directory against which relative paths inside `path` resolve.
pub fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| parse_err(format!("{what}: {e}")))
}

// ---- categories ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitCategory {
    objects: Vec<String>,
    #[serde(default)]
    morphisms: Vec<MorphismEntry>,
    #[serde(default)]
    compose: Vec<(String, String, String)>,
    #[serde(default)]
    identities: Option<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismEntry {
    name: String,
    src: String,
    dst: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetSpec {
    objects: Vec<String>,
    #[serde(default)]
    relations: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidSpec {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
}

/// Parse a category. Accepted forms:
/// - `{"objects", "morphisms": [{"name","src","dst"}], "compose": [["g","f","gf"]], "identities"?}`
/// - `{"poset": {"objects", "relations": [["a","b"]]}}`
/// - `{"interval": n}`, `{"cyclic_group": n}`, `{"terminal": {}}`, `{"empty": {}}`
/// - `{"monoid": {"elements", "table"}}` with `table[g][f] = g·f`
/// - `{"product": [A, B]}`, `{"coproduct": [A, B]}`, `{"opposite": A}`
/// - a string: path to a category file.
pub fn parse_category(v: &Value, dir: &Path) -> Result<FinCat> {
    if let Value::String(p) = v {
        let path = dir.join(p);
        return parse_category(&load_json(&path)?, &base_dir(&path));
    }
    let obj = v.as_object().ok_or_else(|| parse_err("a category must be a JSON object or a path"))?;
    let single = |key: &str| if obj.len() == 1 { obj.get(key) } else { None };
    let pair = |w: &Value| -> Result<(FinCat, FinCat)> {
        let (a, b): (Value, Value) = from_value(w, "expected a pair of categories")?;
        Ok((parse_category(&a, dir)?, parse_category(&b, dir)?))
    };
    if let Some(p) = single("poset") {
        let p: PosetSpec = from_value(p, "poset")?;
        FinCat::poset(&p.objects, &p.relations)
    } else if let Some(n) = single("interval") {
        Ok(FinCat::interval(from_value(n, "interval")?))
    } else if let Some(n) = single("cyclic_group") {
        let n: usize = from_value(n, "cyclic_group")?;
        if n == 0 {
            return Err(parse_err("cyclic_group needs order ≥ 1"));
        }
        Ok(FinCat::cyclic_group(n))
    } else if single("terminal").is_some() {
        Ok(FinCat::terminal())
    } else if single("empty").is_some() {
        Ok(FinCat::empty())
    } else if let Some(m) = single("monoid") {
        let m: MonoidSpec = from_value(m, "monoid")?;
        FinCat::monoid(&m.elements, &m.table)
    } else if let Some(w) = single("product") {
        let (a, b) = pair(w)?;
        Ok(a.product(&b))
    } else if let Some(w) = single("coproduct") {
        let (a, b) = pair(w)?;
        Ok(a.coproduct(&b))
    } else if let Some(w) = single("opposite") {
        Ok(parse_category(w, dir)?.opposite())
    } else {
        let e: ExplicitCategory = from_value(v, "category")?;
        FinCat::from_raw(&RawCategory {
            objects: e.objects,
            morphisms: e.morphisms.into_iter().map(|m| (m.name, m.src, m.dst)).collect(),
            compose: e.compose,
            identities: e.identities.map(|m| m.into_iter().collect()),
        })
    }
}

pub fn read_category(path: &Path) -> Result<FinCat> {
    parse_category(&load_json(path)?, &base_dir(path))
}

/// Explicit form with the full composition table; re-parses to an equal category.
pub fn category_to_json(c: &FinCat) -> Value {
    let raw = c.to_raw();
    json!({
        "objects": raw.objects,
        "morphisms": raw.morphisms.iter().map(|(name, src, dst)| json!({"name": name, "src": src, "dst": dst})).collect::<Vec<_>>(),
        "compose": raw.compose,
        "identities": raw.identities.unwrap_or_default().into_iter().collect::<BTreeMap<_, _>>(),
    })
}

// ---- functors ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    #[serde(default)]
    objects: BTreeMap<String, String>,
    #[serde(default)]
    morphisms: BTreeMap<String, String>,
}

fn functor_from_maps(source: Arc<FinCat>, target: Arc<FinCat>, v: &Value) -> Result<FinFunctor> {
    let m: MapSpec = from_value(v, "functor maps")?;
    let objects: Vec<(String, String)> = m.objects.into_iter().collect();
    let morphisms: Vec<(String, String)> = m.morphisms.into_iter().collect();
    FinFunctor::from_names(source, target, &objects, &morphisms)
}

fn split_fields<'a>(v: &'a Value, keys: &[&str]) -> Result<(Vec<&'a Value>, Value)> {
    let obj = v.as_object().ok_or_else(|| parse_err("expected a JSON object"))?;
    let mut rest = obj.clone();
    let found = keys
        .iter()
        .map(|k| {
            rest.remove(*k);
            obj.get(*k).ok_or_else(|| parse_err(format!("missing field `{k}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((found, Value::Object(rest)))
}

/// `{"source": C, "target": D, "objects": {"x": "y"}, "morphisms": {"f": "g"}}`;
/// identities may be omitted from `morphisms`.
pub fn parse_functor(v: &Value, dir: &Path) -> Result<FinFunctor> {
    let (cats, maps) = split_fields(v, &["source", "target"])?;
    let source = Arc::new(parse_category(cats[0], dir)?);
    let target = Arc::new(parse_category(cats[1], dir)?);
    functor_from_maps(source, target, &maps)
}

pub fn read_functor(path: &Path) -> Result<FinFunctor> {
    parse_functor(&load_json(path)?, &base_dir(path))
}

fn maps_to_json(u: &FinFunctor) -> Value {
    let (s, t) = (u.source(), u.target());
    let objects: BTreeMap<&str, &str> = s.object_ids().map(|x| (s.obj_name(x), t.obj_name(u.obj(x)))).collect();
    let morphisms: BTreeMap<&str, &str> = s.morphism_ids().map(|m| (s.mor_name(m), t.mor_name(u.mor(m)))).collect();
    json!({"objects": objects, "morphisms": morphisms})
}

pub fn functor_to_json(u: &FinFunctor) -> Value {
    let mut v = maps_to_json(u);
    v["source"] = category_to_json(u.source());
    v["target"] = category_to_json(u.target());
    v
}

// ---- matrices ----

pub fn scalar_to_json<S: Scalar>(s: &S) -> Value {
    let q = s.to_rational();
    if q.is_integer() {
        if let Some(i) = q.numer().to_i64() {
            return json!(i);
        }
    }
    Value::String(s.to_string())
}

fn parse_scalar<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(S::from_i64(i)),
            None => Err(parse_err(format!("matrix entry {n} must be an integer or a \"p/q\" string"))),
        },
        Value::String(s) => S::parse(s),
        other => Err(parse_err(format!("matrix entry {other} must be a number or string"))),
    }
}

/// Row-major list of rows; entries are integers or `"p/q"` strings.
pub fn matrix_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(m.to_dense().iter().map(|r| Value::Array(r.iter().map(scalar_to_json).collect())).collect())
}

/// Parse a matrix of known shape. Empty shapes accept `[]`.
pub fn parse_matrix<S: Scalar>(v: &Value, rows: usize, cols: usize, what: &str) -> Result<Matrix<S>> {
    let bad = || parse_err(format!("{what}: expected a {rows}×{cols} matrix"));
    let arr = v.as_array().ok_or_else(bad)?;
    if arr.is_empty() && rows * cols == 0 {
        return Ok(Matrix::zero(rows, cols));
    }
    if arr.len() != rows {
        return Err(bad());
    }
    let dense = arr
        .iter()
        .map(|r| {
            let r = r.as_array().ok_or_else(bad)?;
            if r.len() != cols {
                return Err(bad());
            }
            r.iter().map(parse_scalar).collect::<Result<Vec<S>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_dense(rows, cols, dense)
}

// ---- coefficient systems ----

fn parse_variance(v: Option<&Value>) -> Result<Variance> {
    match v.and_then(Value::as_str) {
        None | Some("covariant") => Ok(Variance::Covariant),
        Some("contravariant") => Ok(Variance::Contravariant),
        Some(other) => Err(parse_err(format!("unknown variance `{other}`"))),
    }
}

fn variance_name(v: Variance) -> &'static str {
    match v {
        Variance::Covariant => "covariant",
        Variance::Contravariant => "contravariant",
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::BauesWirsching => "baues-wirsching",
        Kind::Bimodule => "bimodule",
        Kind::Module => "module",
        Kind::Local => "local",
        Kind::Trivial => "trivial",
    }
}

/// Ranks and maps keyed by names of `cat` (the data category, already
/// opposite for contravariant systems). Identity maps may be omitted.
fn parse_diagram_data<S: Scalar>(obj: &Map<String, Value>, cat: &FinCat) -> Result<(Vec<usize>, Vec<Matrix<S>>)> {
    let ranks: BTreeMap<String, usize> =
        from_value(obj.get("ranks").ok_or_else(|| parse_err("missing field `ranks`"))?, "ranks")?;
    let maps: BTreeMap<String, Value> = match obj.get("maps") {
        Some(m) => from_value(m, "maps")?,
        None => BTreeMap::new(),
    };
    for name in ranks.keys() {
        cat.object_by_name(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
    }
    for name in maps.keys() {
        cat.morphism_by_name(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
    }
    let ranks = cat
        .object_ids()
        .map(|x| {
            ranks
                .get(cat.obj_name(x))
                .copied()
                .ok_or_else(|| parse_err(format!("missing rank for `{}`", cat.obj_name(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    let matrices = cat
        .morphism_ids()
        .map(|m| {
            let (rows, cols) = (ranks[cat.dst(m).0], ranks[cat.src(m).0]);
            match maps.get(cat.mor_name(m)) {
                Some(v) => parse_matrix(v, rows, cols, &format!("map for `{}`", cat.mor_name(m))),
                None if cat.is_identity(m) => Ok(Matrix::identity(rows)),
                None => Err(parse_err(format!("missing map for `{}`", cat.mor_name(m)))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ranks, matrices))
}

fn parse_truncated<S: Scalar>(
    obj: &Map<String, Value>,
    base: &Arc<FinCat>,
    variance: Variance,
) -> Result<CoeffSystem<S>> {
    let max_dim: usize = from_value(obj.get("max_dim").ok_or_else(|| parse_err("missing field `max_dim`"))?, "max_dim")?;
    let tables: BTreeMap<String, BTreeMap<String, Map<String, Value>>> =
        from_value(obj.get("tables").ok_or_else(|| parse_err("missing field `tables`"))?, "tables")?;
    let levels: Vec<Vec<Simplex>> = (0..=max_dim).map(|n| crate::simplex::nerve_level(base, n)).collect();
    let table = |n: usize| tables.get(&format!("dim_{n}"));
    for key in tables.keys() {
        let ok = key.strip_prefix("dim_").and_then(|d| d.parse::<usize>().ok()).is_some_and(|d| d <= max_dim);
        if !ok {
            return Err(parse_err(format!("unexpected table `{key}`")));
        }
    }
    let entry = |n: usize, s: &Simplex| -> Result<&Map<String, Value>> {
        let key = s.key(base);
        table(n)
            .and_then(|t| t.get(&key))
            .ok_or_else(|| Error::IncompleteTables(format!("no entry for simplex `{key}` in dim_{n}")))
    };
    let ranks = levels
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|s| {
                    let e = entry(n, s)?;
                    from_value(e.get("rank").ok_or_else(|| parse_err(format!("missing rank for `{}`", s.key(base))))?, "rank")
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    for (n, level) in levels.iter().enumerate() {
        if let Some(t) = table(n) {
            for key in t.keys() {
                let s = Simplex::from_key(base, key)?;
                if s.dim() != n || !level.contains(&s) {
                    return Err(parse_err(format!("`{key}` is not a {n}-simplex")));
                }
            }
        }
    }
    let index = |n: usize, s: &Simplex| levels[n].iter().position(|t| t == s).expect("faces stay in the nerve");
    let cofaces = levels
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    if n == 0 {
                        return Ok(vec![]);
                    }
                    let e = entry(n, s)?;
                    (0..=n)
                        .map(|i| {
                            let face = s.face(base, i);
                            let (here, there) = (ranks[n][k], ranks[n - 1][index(n - 1, &face)]);
                            let (rows, cols) = match variance {
                                Variance::Covariant => (here, there),
                                Variance::Contravariant => (there, here),
                            };
                            let what = format!("coface_{i} of `{}`", s.key(base));
                            let v = e
                                .get(&format!("coface_{i}"))
                                .ok_or_else(|| Error::IncompleteTables(format!("missing {what}")))?;
                            parse_matrix(v, rows, cols, &what)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    CoeffSystem::truncated(base.clone(), variance, max_dim, ranks, cofaces)
}

/// Parse a coefficient system on `base`. The `"kind"` field selects the form:
/// - `trivial`: `{"rank": r}`
/// - `module`, `bimodule`, `baues-wirsching`: `{"ranks": {...}, "maps": {...}}` keyed by
///   names in `C`, `C^op × C` or `FC` respectively
/// - `local`: additionally `{"group": G, "localization": {"objects", "morphisms"}}`, with data on `G`
/// - `truncated`: `{"max_dim": N, "tables": {"dim_n": {"<simplex key>": {"rank", "coface_i"}}}}`
///
/// `"variance"` is `covariant` (default) or `contravariant`; contravariant maps
/// for `f: x → y` go from the value at `y` to the value at `x`.
pub fn parse_coefficient<S: Scalar>(v: &Value, base: &Arc<FinCat>, dir: &Path) -> Result<CoeffSystem<S>> {
    let obj = v.as_object().ok_or_else(|| parse_err("a coefficient system must be a JSON object"))?;
    let variance = parse_variance(obj.get("variance"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("missing field `kind`"))?;
    let spec = match kind {
        "trivial" => {
            let rank: usize = match obj.get("rank") {
                Some(r) => from_value(r, "rank")?,
                None => 1,
            };
            return Ok(CoeffSystem::constant(base.clone(), rank, variance));
        }
        "truncated" => return parse_truncated(obj, base, variance),
        "module" => KindSpec::Module,
        "bimodule" => KindSpec::Bimodule,
        "baues-wirsching" => KindSpec::BauesWirsching,
        "local" => {
            let group = Arc::new(parse_category(obj.get("group").ok_or_else(|| parse_err("missing field `group`"))?, dir)?);
            let q = obj.get("localization").ok_or_else(|| parse_err("missing field `localization`"))?;
            KindSpec::Local(functor_from_maps(base.clone(), group, q)?)
        }
        other => return Err(parse_err(format!("unknown coefficient kind `{other}`"))),
    };
    let index = CoeffSystem::<S>::index_category(base, spec.clone())?;
    let cat = match variance {
        Variance::Covariant => (*index).clone(),
        Variance::Contravariant => index.opposite(),
    };
    let (ranks, maps) = parse_diagram_data::<S>(obj, &cat)?;
    CoeffSystem::pullback(base.clone(), spec, variance, ranks, maps)
}

pub fn read_coefficient<S: Scalar>(path: &Path, base: &Arc<FinCat>) -> Result<CoeffSystem<S>> {
    parse_coefficient(&load_json(path)?, base, &base_dir(path))
}

/// Emit a coefficient system in the form read by [`parse_coefficient`].
pub fn coefficient_to_json<S: Scalar>(t: &CoeffSystem<S>) -> Value {
    let base = t.base();
    let mut out = Map::new();
    out.insert("variance".into(), json!(variance_name(t.variance())));
    match t.representation() {
        Representation::Truncated(tr) => {
            out.insert("kind".into(), json!("truncated"));
            out.insert("max_dim".into(), json!(tr.max_dim()));
            let mut tables = Map::new();
            for n in 0..=tr.max_dim() {
                let mut level = Map::new();
                for (k, s) in crate::simplex::nerve_level(base, n).iter().enumerate() {
                    let mut e = Map::new();
                    e.insert("rank".into(), json!(tr.ranks()[n][k]));
                    for (i, m) in tr.cofaces()[n][k].iter().enumerate() {
                        e.insert(format!("coface_{i}"), matrix_to_json(m));
                    }
                    level.insert(s.key(base), Value::Object(e));
                }
                tables.insert(format!("dim_{n}"), Value::Object(level));
            }
            out.insert("tables".into(), Value::Object(tables));
        }
        Representation::PulledBack(p) => {
            let d = p.data();
            out.insert("kind".into(), json!(kind_name(p.kind())));
            if p.kind() == Kind::Trivial {
                out.insert("rank".into(), json!(d.rank(ObjId(0))));
            } else {
                let cat = d.category();
                let ranks: BTreeMap<&str, usize> = cat.object_ids().map(|x| (cat.obj_name(x), d.rank(x))).collect();
                let maps: BTreeMap<&str, Value> = cat
                    .morphism_ids()
                    .filter(|&m| !cat.is_identity(m))
                    .map(|m| (cat.mor_name(m), matrix_to_json(d.map(m))))
                    .collect();
                out.insert("ranks".into(), json!(ranks));
                out.insert("maps".into(), json!(maps));
                if let Some(q) = p.localization() {
                    out.insert("group".into(), category_to_json(q.target()));
                    out.insert("localization".into(), maps_to_json(q));
                }
            }
        }
    }
    Value::Object(out)
}

// ---- strict functors B^op → Cat ----

/// `{"fibers": {"b": C_b}, "transports": {"φ": {"objects", "morphisms"}}}` where the
/// transport along `φ: b → b'` maps the fiber over `b'` to the fiber over `b`.
/// Transports along identities may be omitted.
pub fn parse_strict_functor(v: &Value, base: &Arc<FinCat>, dir: &Path) -> Result<StrictFunctor> {
    let (parts, rest) = split_fields(v, &["fibers"])?;
    if rest.as_object().is_some_and(|m| m.keys().any(|k| k != "transports")) {
        return Err(parse_err("a strict functor has only `fibers` and `transports`"));
    }
    let fibers: BTreeMap<String, Value> = from_value(parts[0], "fibers")?;
    let transports: BTreeMap<String, Value> = match v.get("transports") {
        Some(t) => from_value(t, "transports")?,
        None => BTreeMap::new(),
    };
    for name in fibers.keys() {
        base.object_by_name(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
    }
    for name in transports.keys() {
        base.morphism_by_name(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
    }
    let fibers = base
        .object_ids()
        .map(|b| {
            let f = fibers.get(base.obj_name(b)).ok_or_else(|| parse_err(format!("missing fiber over `{}`", base.obj_name(b))))?;
            Ok(Arc::new(parse_category(f, dir)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let maps = base
        .morphism_ids()
        .map(|phi| {
            let (s, t) = (fibers[base.dst(phi).0].clone(), fibers[base.src(phi).0].clone());
            match transports.get(base.mor_name(phi)) {
                Some(m) => functor_from_maps(s, t, m),
                None if base.is_identity(phi) => Ok(FinFunctor::identity(s)),
                None => Err(parse_err(format!("missing transport along `{}`", base.mor_name(phi)))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    StrictFunctor::new(base.clone(), fibers, maps)
}

pub fn strict_functor_to_json(g: &StrictFunctor) -> Value {
    let base = g.base();
    let fibers: BTreeMap<&str, Value> = base.object_ids().map(|b| (base.obj_name(b), category_to_json(g.fiber(b)))).collect();
    let transports: BTreeMap<&str, Value> = base
        .morphism_ids()
        .filter(|&m| !base.is_identity(m))
        .map(|m| (base.mor_name(m), maps_to_json(g.transport(m))))
        .collect();
    json!({"fibers": fibers, "transports": transports})
}
