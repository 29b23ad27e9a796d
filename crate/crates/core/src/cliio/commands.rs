use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::document::{encode_complex, encode_homology, encode_matrix, envelope, parse, render, serialize, Object};
use crate::error::{Error, Result};
use crate::exactla::{BaseRing, ChainComplex, ChainMap, HomologyModule, Matrix};
use crate::filtered::FilteredComplex;
use crate::graded::{from_comodule, GradedComplex};
use crate::rees::{
    closed_point_pullback, from_rees, generic_point_pullback, monoidal_comparison, rees_resolution, rees_tensor,
    rees_unit, tail_is_stable, to_rees, ReesModule,
};
use crate::specseq::{compare_with_abutment, Convention, SSPage, SpectralSequence};
use crate::tstruct;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReesDirection {
    To,
    From,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    Graded,
    Filtered,
    Rees,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TStructure {
    Standard,
    Beilinson,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Gr { input: PathBuf },
    Underlying { input: PathBuf },
    Rees { direction: ReesDirection, input: PathBuf },
    Tensor { kind: TensorKind, left: PathBuf, right: PathBuf },
    Truncate { kind: TStructure, degree: i64, input: PathBuf },
    Ss { input: PathBuf, pages: usize, convention: Convention },
    Check { input: PathBuf },
    Homology { input: PathBuf },
    Demo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Base change every input to this ring (and build `demo` over it).
    pub ring: Option<BaseRing>,
    /// Weights of a constant tail materialized in reports.
    pub tail_depth: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options { ring: None, tail_depth: 4 }
    }
}

/// Output text and whether the command counts as a success (`check` can fail).
/// Warnings go to stderr and never change the text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, success: true, warnings: Vec::new() }
    }
}

const NOT_CELLULAR: &str =
    "filtered tensor of non-cellular inputs: the strict levelwise colimit need not compute the derived Day tensor";

pub fn run(command: &Command, opts: &Options) -> Result<Outcome> {
    match command {
        Command::Gr { input } => {
            let g = match load(input, opts)? {
                Object::Filtered(x) => x.gr(),
                Object::Rees(m) => closed_point_pullback(&m),
                other => return Err(wrong_kind("gr", &other, "filtered_complex or rees_module")),
            };
            Ok(Outcome::ok(serialize(&Object::Graded(g))))
        }
        Command::Underlying { input } => {
            let c = match load(input, opts)? {
                Object::Filtered(x) => x.underlying(),
                Object::Rees(m) => generic_point_pullback(&m),
                other => return Err(wrong_kind("underlying", &other, "filtered_complex or rees_module")),
            };
            Ok(Outcome::ok(serialize(&Object::Chain(c))))
        }
        Command::Rees { direction, input } => {
            let out = match (direction, load(input, opts)?) {
                (ReesDirection::To, Object::Filtered(x)) => Object::Rees(to_rees(&x)),
                (ReesDirection::From, Object::Rees(m)) => Object::Filtered(from_rees(&m)),
                (ReesDirection::To, other) => return Err(wrong_kind("rees to", &other, "filtered_complex")),
                (ReesDirection::From, other) => return Err(wrong_kind("rees from", &other, "rees_module")),
            };
            Ok(Outcome::ok(serialize(&out)))
        }
        Command::Tensor { kind, left, right } => {
            let (a, b) = (load(left, opts)?, load(right, opts)?);
            let mut warnings = Vec::new();
            let out = match (kind, a, b) {
                (TensorKind::Graded, Object::Graded(x), Object::Graded(y)) => Object::Graded(x.day_tensor(&y)?),
                (TensorKind::Filtered, Object::Filtered(x), Object::Filtered(y)) => {
                    if !(x.is_cellular() && y.is_cellular()) {
                        warnings.push(NOT_CELLULAR.to_string());
                    }
                    Object::Filtered(x.day_tensor(&y)?)
                }
                (TensorKind::Rees, Object::Rees(x), Object::Rees(y)) => Object::Rees(rees_tensor(&x, &y)?),
                (kind, a, b) => {
                    let want = match kind {
                        TensorKind::Graded => "graded_complex",
                        TensorKind::Filtered => "filtered_complex",
                        TensorKind::Rees => "rees_module",
                    };
                    let bad = if a.kind() == want { b } else { a };
                    return Err(wrong_kind("tensor", &bad, want));
                }
            };
            Ok(Outcome { warnings, ..Outcome::ok(serialize(&out)) })
        }
        Command::Truncate { kind, degree, input } => {
            let out = match (kind, load(input, opts)?) {
                (TStructure::Standard, Object::Chain(c)) => Object::Chain(tstruct::truncate(&c, *degree)),
                (TStructure::Standard, Object::Graded(g)) => Object::Graded(tstruct::truncate_graded(&g, *degree)),
                (TStructure::Standard, Object::Filtered(x)) => {
                    Object::Filtered(tstruct::truncate_filtered(&x, *degree))
                }
                (TStructure::Beilinson, Object::Graded(g)) => {
                    Object::Graded(tstruct::truncate_beilinson_at(&g, *degree))
                }
                (TStructure::Standard, other) => {
                    return Err(wrong_kind("truncate standard", &other, "chain_complex, graded_complex or filtered_complex"))
                }
                (TStructure::Beilinson, other) => return Err(wrong_kind("truncate beilinson", &other, "graded_complex")),
            };
            Ok(Outcome::ok(serialize(&out)))
        }
        Command::Ss { input, pages, convention } => {
            if *pages == 0 {
                return Err(Error::Schema { path: "--pages".into(), message: "pages start at 1".into() });
            }
            let x = filtered_input("ss", load(input, opts)?)?;
            let ss = SpectralSequence::new(&x);
            let (r_stab, _) = ss.stabilization();
            let page = ss.page(*pages);
            let mut payload = encode_page(&page, *convention);
            payload.insert("r_stab".into(), r_stab.into());
            Ok(Outcome::ok(render(&envelope(x.ring(), "spectral_sequence_page", None, Value::Object(payload)))))
        }
        Command::Check { input } => {
            let object = load(input, opts)?;
            let checks = check_suite(&object, opts.tail_depth)?;
            let passed = checks.iter().all(|(_, ok)| *ok);
            let list: Vec<Value> = checks.iter().map(|(name, ok)| json!({ "name": name, "passed": ok })).collect();
            let payload = json!({ "object": object.kind(), "checks": list, "passed": passed });
            Ok(Outcome { text: render(&envelope(object.ring(), "check_report", None, payload)), success: passed, warnings: Vec::new() })
        }
        Command::Homology { input } => {
            let object = load(input, opts)?;
            let payload = homology_payload(&object, opts.tail_depth);
            let tail = match &object {
                Object::Filtered(x) => Some(x.tail()),
                Object::Rees(m) => Some(m.tail()),
                _ => None,
            };
            Ok(Outcome::ok(render(&envelope(object.ring(), "homology", tail, payload))))
        }
        Command::Demo => Ok(Outcome::ok(render(&demo(opts.ring.unwrap_or(BaseRing::Integers), opts.tail_depth)))),
    }
}

/// Machine-readable error document.
pub fn error_document(e: &Error) -> String {
    let (path, message) = match e {
        Error::Schema { path, message } => (Some(path.clone()), message.clone()),
        other => (None, other.to_string()),
    };
    let mut payload = Map::new();
    payload.insert("error".into(), error_kind(e).into());
    if let Some(p) = path {
        payload.insert("path".into(), p.into());
    }
    payload.insert("message".into(), message.into());
    let mut top = Map::new();
    top.insert("format_version".into(), super::document::FORMAT_VERSION.into());
    top.insert("kind".into(), "error".into());
    top.insert("payload".into(), Value::Object(payload));
    render(&Value::Object(top))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Schema { .. } => "schema",
        Error::Io(_) => "io",
        Error::Dimension { .. } => "dimension",
        Error::DifferentialSquare { .. } => "differential_square",
        Error::NotChainMap { .. } => "not_chain_map",
        Error::RingMismatch { .. } | Error::RequiresField { .. } | Error::RequiresIntegers { .. } => "ring",
        Error::NotPrime(_) | Error::BadRing(_) | Error::BadScalar { .. } => "ring",
        Error::InvalidFiltered(_) | Error::InvalidRees(_) | Error::InvalidComodule(_) | Error::Diagram(_) => "invariant",
        Error::Unsupported(_) => "unsupported",
    }
}

fn load(path: &Path, opts: &Options) -> Result<Object> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let object = parse(&text)?;
    match opts.ring {
        Some(ring) => object
            .base_change(ring)
            .ok_or_else(|| Error::Unsupported(format!("{} cannot be base changed to {ring}", object.ring()))),
        None => Ok(object),
    }
}

fn wrong_kind(op: &str, got: &Object, want: &str) -> Error {
    Error::Schema { path: "kind".into(), message: format!("`{op}` expects {want}, got {}", got.kind()) }
}

fn filtered_input(op: &str, object: Object) -> Result<FilteredComplex> {
    match object {
        Object::Filtered(x) => Ok(x),
        Object::Rees(m) => Ok(from_rees(&m)),
        other => Err(wrong_kind(op, &other, "filtered_complex or rees_module")),
    }
}

fn encode_degrees(h: &BTreeMap<i64, HomologyModule>) -> Value {
    Value::Object(h.iter().filter(|(_, m)| !m.is_zero()).map(|(n, m)| (n.to_string(), encode_homology(m))).collect())
}

fn encode_weighted(h: BTreeMap<(i64, i64), HomologyModule>) -> Value {
    let mut by_weight: BTreeMap<i64, BTreeMap<i64, HomologyModule>> = BTreeMap::new();
    for ((w, n), m) in h {
        by_weight.entry(w).or_default().insert(n, m);
    }
    Value::Object(by_weight.iter().map(|(w, h)| (w.to_string(), encode_degrees(h))).collect())
}

fn homology_payload(object: &Object, depth: u32) -> Value {
    match object {
        Object::Chain(c) => json!({ "degrees": encode_degrees(&c.homology_all()) }),
        Object::Graded(g) => json!({ "weights": encode_weighted(g.homology()) }),
        Object::Filtered(x) => json!({ "levels": encode_weighted(to_rees(x).windowed(depth).homology()) }),
        Object::Rees(m) => json!({ "weights": encode_weighted(m.windowed(depth).homology()) }),
    }
}

fn encode_page(page: &SSPage, convention: Convention) -> Map<String, Value> {
    let (a, b) = match convention {
        Convention::Homological => ("s", "t"),
        Convention::Serre => ("p", "q"),
    };
    let position = |s: i64, t: i64| {
        let (i, j) = convention.index(s, t);
        json!({ a: i, b: j })
    };
    let mut entries: Vec<(i64, i64, Value)> = page
        .entries
        .iter()
        .map(|(&(s, t), h)| {
            let (i, j) = convention.index(s, t);
            (i, j, json!({ a: i, b: j, "total_degree": s + t, "module": encode_homology(h) }))
        })
        .collect();
    entries.sort_by_key(|(i, j, _)| (*i, *j));
    let mut diffs: Vec<((i64, i64), Value)> = page
        .differentials
        .iter()
        .map(|(&(s, t), d)| {
            let (ts, tt) = page.target(s, t);
            (convention.index(s, t), json!({ "source": position(s, t), "target": position(ts, tt), "matrix": encode_matrix(d) }))
        })
        .collect();
    diffs.sort_by_key(|(k, _)| *k);
    let mut out = Map::new();
    out.insert("page".into(), page.r.into());
    out.insert("convention".into(), convention.name().into());
    out.insert("entries".into(), entries.into_iter().map(|(_, _, v)| v).collect());
    out.insert("differentials".into(), diffs.into_iter().map(|(_, v)| v).collect());
    out
}

type Checks = Vec<(&'static str, bool)>;

fn check_suite(object: &Object, depth: u32) -> Result<Checks> {
    Ok(match object {
        Object::Chain(c) => vec![
            ("differentials_square_to_zero", c.is_valid()),
            ("identity_cone_acyclic", ChainMap::identity(c).cone().is_acyclic()),
            ("truncation_keeps_nonnegative_homology", {
                let kept: BTreeMap<i64, HomologyModule> = c.homology_all().into_iter().filter(|(n, _)| *n >= 0).collect();
                tstruct::truncate(c, 0).homology_all() == kept
            }),
        ],
        Object::Graded(g) => graded_checks(g)?,
        Object::Filtered(x) => filtered_checks(x, depth)?,
        Object::Rees(m) => {
            let mut checks = vec![("filtered_round_trip", &to_rees(&from_rees(m)) == m)];
            checks.extend(rees_checks(m, depth));
            checks
        }
    })
}

fn graded_checks(g: &GradedComplex) -> Result<Checks> {
    let back = from_comodule(&g.to_comodule())?;
    Ok(vec![
        ("comodule_round_trip", back.graded == *g && back.iso.then(&back.inverse).is_identity()),
        ("unit_tensor_is_identity", &g.day_tensor(&GradedComplex::unit(g.ring()))? == g),
        ("beilinson_truncation_is_connective", tstruct::is_connective_beilinson(&tstruct::truncate_beilinson(g)).holds()),
    ])
}

fn rees_checks(m: &ReesModule, depth: u32) -> Checks {
    let resolution = rees_resolution(m);
    vec![
        ("rees_resolution_is_exact", resolution.is_resolution()),
        ("tail_is_stable", tail_is_stable(m, depth)),
        ("windowed_comodule_round_trip", {
            let w = m.windowed(depth);
            from_comodule(&m.to_comodule(depth)).is_ok_and(|b| b.graded == w)
        }),
    ]
}

fn filtered_checks(x: &FilteredComplex, depth: u32) -> Result<Checks> {
    let m = to_rees(x);
    let ss = SpectralSequence::new(x);
    let mut checks = vec![
        ("rees_round_trip", from_rees(&m) == *x),
        ("closed_point_is_gr", closed_point_pullback(&m) == x.gr()),
        ("generic_point_is_underlying", generic_point_pullback(&m) == x.underlying()),
        ("spectral_sequence_converges", compare_with_abutment(x).holds()),
        ("pages_are_homology_of_previous", (1..=3).all(|r| ss.page(r).next_page_matches(&ss.page(r + 1)))),
    ];
    checks.extend(rees_checks(&m, depth));
    if x.is_cellular() {
        checks.push(("monoidal_comparison_with_self", monoidal_comparison(x, x)?.is_quasi_isomorphism()));
    }
    Ok(checks)
}

/// `X_1 = R` (degree 0) `--×2-->` `X_0 = R` (degree 0), constant tail.
pub fn times_two(ring: BaseRing) -> FilteredComplex {
    let f = ChainMap::new(ChainComplex::unit(ring), ChainComplex::unit(ring), [(0, Matrix::from_rows(ring, &[[2]]))])
        .expect("1x1 maps in degree 0");
    FilteredComplex::two_step(1, f)
}

/// `X_1 = R` (degree 0) included as the degree-0 summand of `X_0 = (R --×2--> R)`.
pub fn two_step(ring: BaseRing) -> FilteredComplex {
    let target = ChainComplex::two_term(1, Matrix::from_rows(ring, &[[2]]));
    let f = ChainMap::new(ChainComplex::unit(ring), target, [(0, Matrix::from_rows(ring, &[[1]]))])
        .expect("degree-0 inclusion");
    FilteredComplex::two_step(1, f)
}

fn demo(ring: BaseRing, depth: u32) -> Value {
    let doc = |o: Object| -> Value { serde_json::from_str(&serialize(&o)).expect("own output parses") };
    let homology = |o: &Object| homology_payload(o, depth);

    let x = times_two(ring);
    let y = two_step(ring);
    let ss = SpectralSequence::new(&y);
    let (r_stab, _) = ss.stabilization();
    let pages: Vec<Value> = (1..=r_stab.max(2)).map(|r| Value::Object(encode_page(&ss.page(r), Convention::Homological))).collect();
    let a = to_rees(&FilteredComplex::algebra_a(ring));
    let aa = rees_tensor(&a, &a).expect("same ring");
    let cone2 = GradedComplex::concentrated(0, ChainComplex::two_term(1, Matrix::from_rows(ring, &[[2]])));
    let coaction: Vec<Value> = (1..=depth.max(1))
        .map(|d| {
            let c = rees_unit(ring).to_comodule(d);
            let indices: Vec<Value> = (0..c.carrier().rank(0))
                .map(|k| c.coaction_index(0, k).map_or(Value::Null, Value::from))
                .collect();
            json!({ "depth": d, "coaction_index": indices })
        })
        .collect();
    let mixed = GradedComplex::new(
        ring,
        [
            (0, ChainComplex::new(ring, [(0, 1), (-2, 1)], []).expect("no differentials")),
            (2, ChainComplex::concentrated(ring, -3, 1)),
        ],
    )
    .expect("same ring");

    let examples = vec![
        json!({
            "name": "times_two",
            "input": doc(Object::Filtered(x.clone())),
            "gr": doc(Object::Graded(x.gr())),
            "gr_homology": homology(&Object::Graded(x.gr())),
            "underlying": doc(Object::Chain(x.underlying())),
            "rees": doc(Object::Rees(to_rees(&x))),
        }),
        json!({
            "name": "two_step_spectral_sequence",
            "input": doc(Object::Filtered(y.clone())),
            "pages": pages,
            "r_stab": r_stab,
            "converges": compare_with_abutment(&y).holds(),
        }),
        json!({
            "name": "unit",
            "gr_homology": homology(&Object::Graded(FilteredComplex::unit(ring).gr())),
            "underlying": encode_complex(&FilteredComplex::unit(ring).underlying()),
        }),
        json!({
            "name": "algebra_a_rees_square",
            "homology": homology(&Object::Rees(aa)),
        }),
        json!({
            "name": "graded_cone_square",
            "homology": homology(&Object::Graded(cone2.day_tensor(&cone2).expect("same ring"))),
        }),
        json!({ "name": "rees_unit_coaction", "windows": coaction }),
        json!({
            "name": "beilinson_truncation",
            "input_homology": homology(&Object::Graded(mixed.clone())),
            "truncated_homology": homology(&Object::Graded(tstruct::truncate_beilinson(&mixed))),
            "standard_connective": tstruct::is_connective_standard(&mixed).holds(),
        }),
    ];
    envelope(ring, "demo", None, json!({ "examples": examples }))
}
