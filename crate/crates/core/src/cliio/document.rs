//! The interchange format: one JSON envelope
//! `{format_version, ring, kind, [tail], payload}` for every object kind.
//!
//! Integer indices (degrees, weights, levels) are object keys written as
//! decimal strings; matrices are arrays of rows of decimal strings. The
//! canonical form lists keys in ascending numeric order and writes every
//! differential and map component between two non-zero modules, zero or not.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactla::{BaseRing, ChainComplex, ChainMap, HomologyModule, Matrix};
use crate::filtered::{FilteredComplex, Tail};
use crate::graded::GradedComplex;
use crate::rees::ReesModule;

pub const FORMAT_VERSION: &str = "1";

/// A parsed, validated object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Chain(ChainComplex),
    Graded(GradedComplex),
    Filtered(FilteredComplex),
    Rees(ReesModule),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Chain(_) => "chain_complex",
            Object::Graded(_) => "graded_complex",
            Object::Filtered(_) => "filtered_complex",
            Object::Rees(_) => "rees_module",
        }
    }

    pub fn ring(&self) -> BaseRing {
        match self {
            Object::Chain(c) => c.ring(),
            Object::Graded(g) => g.ring(),
            Object::Filtered(x) => x.ring(),
            Object::Rees(m) => m.ring(),
        }
    }

    /// Same object over `ring`, if every entry converts.
    pub fn base_change(&self, ring: BaseRing) -> Option<Object> {
        if ring == self.ring() {
            return Some(self.clone());
        }
        Some(match self {
            Object::Chain(c) => Object::Chain(c.base_change(ring)?),
            Object::Graded(g) => Object::Graded(g.base_change(ring)?),
            Object::Filtered(x) => Object::Filtered(x.base_change(ring)?),
            Object::Rees(m) => {
                let x = crate::rees::from_rees(m).base_change(ring)?;
                Object::Rees(crate::rees::to_rees(&x))
            }
        })
    }

    fn tail(&self) -> Option<Tail> {
        match self {
            Object::Filtered(x) => Some(x.tail()),
            Object::Rees(m) => Some(m.tail()),
            _ => None,
        }
    }

    fn payload(&self) -> Value {
        match self {
            Object::Chain(c) => encode_complex(c),
            Object::Graded(g) => encode_graded(g),
            Object::Filtered(x) => {
                let (levels, maps) = encode_tower(x.window(), |n| x.level(n), |n| x.structure_map(n));
                json!({ "levels": levels, "maps": maps })
            }
            Object::Rees(m) => {
                let (pieces, t) = encode_tower(m.window(), |w| m.piece(w), |w| m.t(w));
                json!({ "pieces": pieces, "t": t })
            }
        }
    }
}

/// Parses and validates a document.
pub fn parse(text: &str) -> Result<Object> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Schema { path: format!("line {}, column {}", e.line(), e.column()), message: e.to_string() })?;
    let top = as_object(&value, "")?;
    let version = as_str(field(top, "format_version", "")?, "format_version")?;
    if version != FORMAT_VERSION {
        return Err(schema("format_version", format!("unsupported version `{version}`, expected `{FORMAT_VERSION}`")));
    }
    let ring = BaseRing::parse(as_str(field(top, "ring", "")?, "ring")?).map_err(|e| e.at("ring"))?;
    let kind = as_str(field(top, "kind", "")?, "kind")?;
    let payload = as_object(field(top, "payload", "")?, "payload")?;
    let tail = match top.get("tail") {
        None => None,
        Some(v) => {
            let s = as_str(v, "tail")?;
            Some(Tail::parse(s).ok_or_else(|| schema("tail", format!("unknown tail `{s}` (expected constant or zero)")))?)
        }
    };
    let needs_tail = |kind: &str| tail.ok_or_else(|| schema("tail", format!("required for {kind}")));
    match kind {
        "chain_complex" => Ok(Object::Chain(decode_complex(ring, payload, "payload")?)),
        "graded_complex" => Ok(Object::Graded(decode_graded(ring, payload, "payload")?)),
        "filtered_complex" => {
            let tail = needs_tail(kind)?;
            let (bottom, levels, maps) = decode_tower(ring, payload, "levels", "maps")?;
            FilteredComplex::new(ring, bottom, levels, maps, tail).map_err(|e| e.at("payload"))
                .map(Object::Filtered)
        }
        "rees_module" => {
            let tail = needs_tail(kind)?;
            let (bottom, pieces, t) = decode_tower(ring, payload, "pieces", "t")?;
            ReesModule::new(ring, bottom, pieces, t, tail).map_err(|e| e.at("payload")).map(Object::Rees)
        }
        other => Err(schema(
            "kind",
            format!("unknown kind `{other}` (expected chain_complex, graded_complex, filtered_complex or rees_module)"),
        )),
    }
}

/// Canonical text of an object.
pub fn serialize(object: &Object) -> String {
    render(&envelope(object.ring(), object.kind(), object.tail(), object.payload()))
}

/// The common envelope, also used for report documents.
pub fn envelope(ring: BaseRing, kind: &str, tail: Option<Tail>, payload: Value) -> Value {
    let mut top = Map::new();
    top.insert("format_version".into(), FORMAT_VERSION.into());
    top.insert("ring".into(), ring.descriptor().into());
    top.insert("kind".into(), kind.into());
    if let Some(t) = tail {
        top.insert("tail".into(), t.name().into());
    }
    top.insert("payload".into(), payload);
    Value::Object(top)
}

/// Pretty-printed JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn encode_matrix(m: &Matrix) -> Value {
    Value::Array(m.to_strings().into_iter().map(|row| row.into_iter().map(Value::from).collect()).collect())
}

pub fn encode_complex(c: &ChainComplex) -> Value {
    let ranks: Map<String, Value> = c.ranks().iter().map(|(n, &r)| (n.to_string(), r.into())).collect();
    let diffs: Map<String, Value> = c
        .ranks()
        .keys()
        .filter(|&&n| c.rank(n - 1) > 0)
        .map(|&n| (n.to_string(), encode_matrix(&c.differential(n))))
        .collect();
    json!({ "ranks": ranks, "differentials": diffs })
}

pub fn encode_graded(g: &GradedComplex) -> Value {
    let pieces: Map<String, Value> = g.pieces().iter().map(|(w, c)| (w.to_string(), encode_complex(c))).collect();
    json!({ "pieces": pieces })
}

pub fn encode_map(f: &ChainMap) -> Value {
    let comps: Map<String, Value> = f
        .source()
        .ranks()
        .keys()
        .filter(|&&n| f.target().rank(n) > 0)
        .map(|&n| (n.to_string(), encode_matrix(&f.component(n))))
        .collect();
    Value::Object(comps)
}

pub fn encode_homology(h: &HomologyModule) -> Value {
    let torsion: Vec<Value> = h.torsion.iter().map(|d| Value::from(d.to_string())).collect();
    json!({ "free_rank": h.free_rank, "torsion": torsion })
}

fn encode_tower(
    window: Option<(i64, i64)>,
    piece: impl Fn(i64) -> ChainComplex,
    map: impl Fn(i64) -> ChainMap,
) -> (Value, Value) {
    let Some((lo, hi)) = window else { return (json!({}), json!({})) };
    let pieces: Map<String, Value> = (lo..=hi).map(|n| (n.to_string(), encode_complex(&piece(n)))).collect();
    let maps: Map<String, Value> = (lo + 1..=hi).map(|n| (n.to_string(), encode_map(&map(n)))).collect();
    (Value::Object(pieces), Value::Object(maps))
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(&join(path, key), "missing field"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

/// An object whose keys are decimal integers, in numeric order.
fn indexed<'a>(v: &'a Value, path: &str) -> Result<BTreeMap<i64, (&'a Value, String)>> {
    let mut out = BTreeMap::new();
    for (k, item) in as_object(v, path)? {
        let n: i64 = k.parse().map_err(|_| schema(&join(path, k), "key is not an integer"))?;
        if out.insert(n, (item, join(path, k))).is_some() {
            return Err(schema(&join(path, k), "duplicate index"));
        }
    }
    Ok(out)
}

fn decode_matrix(ring: BaseRing, v: &Value, shape: (usize, usize), path: &str) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| schema(path, "expected an array of rows"))?;
    let ncols = rows.first().and_then(Value::as_array).map_or(shape.1, Vec::len);
    let got = (rows.len(), if rows.is_empty() { shape.1 } else { ncols });
    if got != shape {
        return Err(schema(path, format!("expected {}x{} matrix, got {}x{}", shape.0, shape.1, got.0, got.1)));
    }
    let mut data = Vec::with_capacity(shape.0 * shape.1);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| schema(&rpath, "expected an array"))?;
        if row.len() != shape.1 {
            return Err(schema(&rpath, format!("expected {} entries, got {}", shape.1, row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            let epath = format!("{rpath}[{j}]");
            let text = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() => n.to_string(),
                _ => return Err(schema(&epath, "expected a decimal string")),
            };
            data.push(ring.parse_scalar(&text).map_err(|e| e.at(&epath))?);
        }
    }
    Matrix::from_scalars(ring, shape.0, shape.1, data).map_err(|e| e.at(path))
}

fn decode_complex(ring: BaseRing, obj: &Map<String, Value>, path: &str) -> Result<ChainComplex> {
    let mut ranks = BTreeMap::new();
    for (n, (v, p)) in indexed(field(obj, "ranks", path)?, &join(path, "ranks"))? {
        let r = v.as_u64().ok_or_else(|| schema(&p, "expected a non-negative integer"))?;
        ranks.insert(n, r as usize);
    }
    let rank = |n: i64| ranks.get(&n).copied().unwrap_or(0);
    let mut diffs = Vec::new();
    if let Some(d) = obj.get("differentials") {
        for (n, (v, p)) in indexed(d, &join(path, "differentials"))? {
            diffs.push((n, decode_matrix(ring, v, (rank(n - 1), rank(n)), &p)?));
        }
    }
    ChainComplex::new(ring, ranks.clone(), diffs).map_err(|e| match e {
        Error::DifferentialSquare { upper } => {
            schema(&join(path, "differentials"), format!("d_{} ∘ d_{upper} ≠ 0 (degrees {upper} → {})", upper - 1, upper - 2))
        }
        other => other.at(path),
    })
}

fn decode_graded(ring: BaseRing, obj: &Map<String, Value>, path: &str) -> Result<GradedComplex> {
    let pieces_path = join(path, "pieces");
    let mut pieces = Vec::new();
    for (w, (v, p)) in indexed(field(obj, "pieces", path)?, &pieces_path)? {
        pieces.push((w, decode_complex(ring, as_object(v, &p)?, &p)?));
    }
    GradedComplex::new(ring, pieces).map_err(|e| e.at(&pieces_path))
}

fn decode_map(ring: BaseRing, v: &Value, source: &ChainComplex, target: &ChainComplex, path: &str) -> Result<ChainMap> {
    let mut comps = Vec::new();
    for (n, (m, p)) in indexed(v, path)? {
        comps.push((n, decode_matrix(ring, m, (target.rank(n), source.rank(n)), &p)?));
    }
    ChainMap::new(source.clone(), target.clone(), comps).map_err(|e| e.at(path))
}

/// Pieces indexed by a contiguous integer range, plus maps from `n` to `n − 1`.
fn decode_tower(
    ring: BaseRing,
    payload: &Map<String, Value>,
    pieces_key: &str,
    maps_key: &str,
) -> Result<(i64, Vec<ChainComplex>, Vec<ChainMap>)> {
    let pieces_path = join("payload", pieces_key);
    let maps_path = join("payload", maps_key);
    let raw = indexed(field(payload, pieces_key, "payload")?, &pieces_path)?;
    let mut pieces = Vec::with_capacity(raw.len());
    let bottom = raw.keys().next().copied().unwrap_or(0);
    for (k, (&n, (v, p))) in raw.iter().enumerate() {
        let expected = bottom + k as i64;
        if n != expected {
            return Err(schema(&pieces_path, format!("indices must be contiguous; {expected} is missing")));
        }
        pieces.push(decode_complex(ring, as_object(v, p)?, p)?);
    }
    let top = bottom + pieces.len() as i64 - 1;
    let maps_raw = match payload.get(maps_key) {
        Some(v) => indexed(v, &maps_path)?,
        None => BTreeMap::new(),
    };
    if let Some(&n) = maps_raw.keys().find(|&&n| n <= bottom || n > top) {
        return Err(schema(&join(&maps_path, &n.to_string()), format!("no map from {n} to {} inside the window", n - 1)));
    }
    let mut maps = Vec::new();
    for n in bottom + 1..=top {
        let (source, target) = (&pieces[(n - bottom) as usize], &pieces[(n - bottom - 1) as usize]);
        let p = join(&maps_path, &n.to_string());
        let f = match maps_raw.get(&n) {
            Some((v, _)) => decode_map(ring, v, source, target, &p)?,
            None if source.is_zero() || target.is_zero() => ChainMap::zero(source, target),
            None => return Err(schema(&p, "missing map")),
        };
        maps.push(f);
    }
    Ok((bottom, pieces, maps))
}
