//! JSON files: graphs, geometry contexts, witnesses and eta values.
//!
//! Every file may carry `"schema": "logcone/1"`. Errors name the offending
//! location as a JSON pointer.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{escape_pointer, DecoratedDualGraph, GeometryContext, GraphBuilder, Pairing};
use crate::lattice::target_basis;
use crate::toric::ObstructionInput;
use crate::tropical::{InfeasibilityCertificate, TropicalWitness};
use crate::SCHEMA;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    divisors: Vec<String>,
    vertices: Vec<VertexJson>,
    #[serde(default)]
    edges: Vec<EdgeJson>,
    #[serde(default)]
    legs: Vec<LegJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    context: Option<ContextFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: String,
    genus: u32,
    degree: String,
    #[serde(default)]
    depth: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    id: String,
    from: String,
    to: String,
    #[serde(default)]
    depth: Vec<String>,
    #[serde(default)]
    contact: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reverse_contact: Option<BTreeMap<String, i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LegJson {
    id: String,
    at: String,
    index: usize,
    #[serde(default)]
    contact: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    dim_x: u32,
    divisors: Vec<String>,
    degrees: BTreeMap<String, PairingJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairingJson {
    c1: i64,
    #[serde(default)]
    divisor: BTreeMap<String, i64>,
}

fn decode<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let pointer = pointer_of(e.path());
        Error::schema(pointer, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| Error::schema("", e.to_string()))?;
    Ok(value)
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        match segment {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape_pointer(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape_pointer(variant))),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

fn check_schema(schema: &Option<String>, pointer: &str) -> Result<()> {
    match schema {
        Some(s) if s != SCHEMA => Err(Error::schema(pointer, format!("unsupported schema `{s}`, expected `{SCHEMA}`"))),
        _ => Ok(()),
    }
}

fn pairs(map: &BTreeMap<String, i64>) -> Vec<(&str, i64)> {
    map.iter().map(|(k, v)| (k.as_str(), *v)).collect()
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// Parses a graph file, returning the embedded context if there is one.
pub fn parse_graph(bytes: &[u8]) -> Result<(DecoratedDualGraph, Option<GeometryContext>)> {
    let file: GraphFile = decode(bytes)?;
    check_schema(&file.schema, "/schema")?;
    let mut b = GraphBuilder::new(file.divisors.clone());
    for v in &file.vertices {
        b = b.vertex(&v.id, v.genus, &v.degree, &strs(&v.depth));
    }
    for e in &file.edges {
        b = b.edge(&e.id, &e.from, &e.to, &strs(&e.depth), &pairs(&e.contact));
        if let Some(r) = &e.reverse_contact {
            b = b.declared_reverse(&pairs(r));
        }
    }
    for l in &file.legs {
        b = b.leg(&l.id, &l.at, l.index, &pairs(&l.contact));
    }
    let graph = b.build()?;
    let context = match file.context {
        Some(c) => Some(context_from_file(c, "/context")?),
        None => None,
    };
    Ok((graph, context))
}

fn context_from_file(c: ContextFile, base: &str) -> Result<GeometryContext> {
    check_schema(&c.schema, &format!("{base}/schema"))?;
    if c.dim_x == 0 {
        return Err(Error::schema(format!("{base}/dim_x"), "dimension must be positive"));
    }
    for (tag, p) in &c.degrees {
        for label in p.divisor.keys() {
            if !c.divisors.contains(label) {
                return Err(Error::schema(
                    format!("{base}/degrees/{}/divisor/{}", escape_pointer(tag), escape_pointer(label)),
                    format!("unknown divisor label `{label}`"),
                ));
            }
        }
    }
    Ok(GeometryContext {
        dim_x: c.dim_x,
        divisors: c.divisors,
        degrees: c
            .degrees
            .into_iter()
            .map(|(tag, p)| (tag, Pairing { c1: p.c1, divisor: p.divisor }))
            .collect(),
    })
}

pub fn parse_context(bytes: &[u8]) -> Result<GeometryContext> {
    context_from_file(decode(bytes)?, "")
}

fn contact_map(g: &DecoratedDualGraph, c: &[i64]) -> BTreeMap<String, i64> {
    g.divisors()
        .iter()
        .zip(c)
        .filter(|(_, &v)| v != 0)
        .map(|(l, &v)| (l.clone(), v))
        .collect()
}

fn context_file(ctx: &GeometryContext, with_schema: bool) -> ContextFile {
    ContextFile {
        schema: with_schema.then(|| SCHEMA.to_string()),
        dim_x: ctx.dim_x,
        divisors: ctx.divisors.clone(),
        degrees: ctx
            .degrees
            .iter()
            .map(|(t, p)| {
                (
                    t.clone(),
                    PairingJson {
                        c1: p.c1,
                        divisor: p.divisor.clone(),
                    },
                )
            })
            .collect(),
    }
}

/// Graph file contents; contact maps omit zero entries.
pub fn graph_to_json(g: &DecoratedDualGraph, ctx: Option<&GeometryContext>) -> Value {
    let labels = |d: &crate::graph::Depth| -> Vec<String> { d.iter().map(|&i| g.divisors()[i].clone()).collect() };
    let file = GraphFile {
        schema: Some(SCHEMA.to_string()),
        divisors: g.divisors().to_vec(),
        vertices: g
            .vertices()
            .iter()
            .map(|v| VertexJson {
                id: v.id.clone(),
                genus: v.genus,
                degree: v.degree.clone(),
                depth: labels(&v.depth),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeJson {
                id: e.id.clone(),
                from: g.vertices()[e.from].id.clone(),
                to: g.vertices()[e.to].id.clone(),
                depth: labels(&e.depth),
                contact: contact_map(g, &e.contact),
                reverse_contact: e.declared_reverse.as_ref().map(|r| contact_map(g, r)),
            })
            .collect(),
        legs: g
            .legs()
            .iter()
            .map(|l| LegJson {
                id: l.id.clone(),
                at: g.vertices()[l.at].id.clone(),
                index: l.index,
                contact: contact_map(g, &l.contact),
            })
            .collect(),
        context: ctx.map(|c| context_file(c, false)),
    };
    serde_json::to_value(file).expect("graph serializes")
}

pub fn context_to_json(ctx: &GeometryContext) -> Value {
    serde_json::to_value(context_file(ctx, true)).expect("context serializes")
}

/// Renders an integer as a JSON number when it fits in 64 bits, else as a string.
pub fn bigint_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn bigint_vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(bigint_json).collect())
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFile {
    #[serde(default)]
    schema: Option<String>,
    s: BTreeMap<String, BTreeMap<String, RationalJson>>,
    lambda: BTreeMap<String, RationalJson>,
}

fn rational_of(r: &RationalJson, pointer: String) -> Result<BigRational> {
    match r {
        RationalJson::Int(v) => Ok(BigRational::from_integer((*v).into())),
        RationalJson::Text(t) => parse_rational(t).ok_or_else(|| Error::schema(pointer, format!("`{t}` is not a rational \"p/q\""))),
    }
}

/// Parses a witness file against a graph. Missing positions are zero; every
/// edge needs a length.
pub fn parse_witness(bytes: &[u8], g: &DecoratedDualGraph) -> Result<TropicalWitness> {
    let file: WitnessFile = decode(bytes)?;
    check_schema(&file.schema, "/schema")?;
    let mut w = TropicalWitness {
        s: vec![vec![BigRational::zero(); g.divisors().len()]; g.vertices().len()],
        lambda: vec![BigRational::zero(); g.edges().len()],
    };
    for (vid, entries) in &file.s {
        let base = format!("/s/{}", escape_pointer(vid));
        let v = g.vertex_index(vid).ok_or_else(|| Error::schema(&base, format!("`{vid}` is not a vertex id")))?;
        for (label, value) in entries {
            let pointer = format!("{base}/{}", escape_pointer(label));
            let i = g
                .divisor_index(label)
                .ok_or_else(|| Error::schema(&pointer, format!("unknown divisor label `{label}`")))?;
            w.s[v][i] = rational_of(value, pointer)?;
        }
    }
    for (eid, value) in &file.lambda {
        let pointer = format!("/lambda/{}", escape_pointer(eid));
        let e = g.edge_index(eid).ok_or_else(|| Error::schema(&pointer, format!("`{eid}` is not an edge id")))?;
        w.lambda[e] = rational_of(value, pointer)?;
    }
    if let Some(e) = g.edges().iter().find(|e| !file.lambda.contains_key(&e.id)) {
        return Err(Error::schema("/lambda", format!("missing length for edge `{}`", e.id)));
    }
    Ok(w)
}

pub fn witness_to_json(g: &DecoratedDualGraph, w: &TropicalWitness) -> Value {
    let mut s = serde_json::Map::new();
    for (v, vertex) in g.vertices().iter().enumerate() {
        let mut entries = serde_json::Map::new();
        for (i, label) in g.divisors().iter().enumerate() {
            if vertex.depth.contains(&i) || !w.s[v][i].is_zero() {
                entries.insert(label.clone(), json!(rational_string(&w.s[v][i])));
            }
        }
        s.insert(vertex.id.clone(), Value::Object(entries));
    }
    let lambda: serde_json::Map<String, Value> = g
        .edges()
        .iter()
        .zip(&w.lambda)
        .map(|(e, l)| (e.id.clone(), json!(rational_string(l))))
        .collect();
    json!({"schema": SCHEMA, "s": s, "lambda": lambda})
}

pub fn certificate_to_json(g: &DecoratedDualGraph, c: &InfeasibilityCertificate) -> Value {
    let mut out = serde_json::Map::new();
    for (edge, row) in g.edges().iter().zip(&c.multipliers) {
        let entries: serde_json::Map<String, Value> = g
            .divisors()
            .iter()
            .zip(row)
            .filter(|(_, u)| !u.is_zero())
            .map(|(l, u)| (l.clone(), json!(rational_string(u))))
            .collect();
        if !entries.is_empty() {
            out.insert(edge.id.clone(), Value::Object(entries));
        }
    }
    json!({"multipliers": out})
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexJson {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EtaFile {
    #[serde(default)]
    schema: Option<String>,
    eta: BTreeMap<String, BTreeMap<String, ComplexJson>>,
}

/// Parses `{"eta": {edge: {label: [re, im] | re}}}`; every `(e, i)` with `i`
/// in `I_e` must be present.
pub fn parse_eta(bytes: &[u8], g: &DecoratedDualGraph) -> Result<ObstructionInput> {
    let file: EtaFile = decode(bytes)?;
    check_schema(&file.schema, "/schema")?;
    let target = target_basis(g);
    let mut eta: Vec<Option<Complex64>> = vec![None; target.len()];
    for (eid, entries) in &file.eta {
        let base = format!("/eta/{}", escape_pointer(eid));
        let e = g.edge_index(eid).ok_or_else(|| Error::schema(&base, format!("`{eid}` is not an edge id")))?;
        for (label, z) in entries {
            let pointer = format!("{base}/{}", escape_pointer(label));
            let i = g.divisor_index(label);
            let p = i
                .and_then(|i| target.position(&crate::lattice::TargetCoord { edge: e, divisor: i }))
                .ok_or_else(|| Error::schema(&pointer, format!("`{label}` is not in the depth of edge `{eid}`")))?;
            eta[p] = Some(match z {
                ComplexJson::Real(re) => Complex64::new(*re, 0.0),
                ComplexJson::Pair([re, im]) => Complex64::new(*re, *im),
            });
        }
    }
    let eta = eta
        .into_iter()
        .enumerate()
        .map(|(p, z)| z.ok_or_else(|| Error::schema("/eta", format!("missing value for {}", target.labels[p]))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObstructionInput { eta })
}

pub fn eta_to_json(g: &DecoratedDualGraph, input: &ObstructionInput) -> Value {
    let target = target_basis(g);
    let mut out: BTreeMap<String, serde_json::Map<String, Value>> = BTreeMap::new();
    for (t, z) in target.coords.iter().zip(&input.eta) {
        out.entry(g.edges()[t.edge].id.clone())
            .or_default()
            .insert(g.divisors()[t.divisor].clone(), json!([z.re, z.im]));
    }
    json!({"schema": SCHEMA, "eta": out})
}
