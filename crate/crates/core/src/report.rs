//! JSON views of every analysis and the combined report.
//!
//! All maps are emitted with sorted keys and all lists in graph order, so a
//! report depends only on the input bytes and the options.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::cone::{sigma_cone, ConeDescription};
use crate::dims::{expected_dim_stratum, DimensionReport};
use crate::error::Result;
use crate::graph::{arithmetic_genus, validate_axioms, DecoratedDualGraph, GeometryContext, ValidationReport};
use crate::io::{bigint_json, bigint_vec_json, certificate_to_json, parse_graph, witness_to_json};
use crate::lattice::{lattice_summary, LatticeSummary};
use crate::toric::{
    gluing_equations, obstruction_test_with, reduced_toric_ideal, toric_ideal_from_summary, BinomialSystem,
    ObstructionInput, ObstructionResult, ReducedSystem, SystemKind,
};
use crate::tropical::{integralize_witness, tropical_feasibility, TropicalVerdict};
use crate::SCHEMA;

pub fn validation_json(r: &ValidationReport) -> Value {
    json!({
        "valid": r.is_valid(),
        "violations": r.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "warnings": r.warnings.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

pub fn lattice_json(s: &LatticeSummary) -> Value {
    let rows: Vec<Value> = s.rho.matrix.row_vecs().iter().map(|r| bigint_vec_json(r)).collect();
    let kernel: Vec<Value> = s.kernel_basis.row_vecs().iter().map(|r| bigint_vec_json(r)).collect();
    json!({
        "domain": s.rho.domain.labels,
        "target": s.rho.target.labels,
        "rho": rows,
        "kernel_basis": kernel,
        "kernel_dim": s.kernel_dim(),
        "image_rank": s.image_rank,
        "cokernel_free_rank": s.cokernel_free_rank,
        "cokernel_torsion": bigint_vec_json(&s.cokernel_torsion),
        "obstruction_dim": s.obstruction_dim,
        "component_count": bigint_json(&s.component_count()),
    })
}

pub fn tropical_json(g: &DecoratedDualGraph, v: &TropicalVerdict) -> Value {
    match v {
        TropicalVerdict::Feasible(w) => json!({
            "feasible": true,
            "witness": witness_to_json(g, w),
            "integral_witness": witness_to_json(g, &integralize_witness(w)),
        }),
        TropicalVerdict::Infeasible(c) => json!({
            "feasible": false,
            "certificate": certificate_to_json(g, c),
        }),
    }
}

pub fn cone_json(c: &ConeDescription) -> Value {
    json!({
        "ambient_dim": c.ambient_dim,
        "kernel_dim": c.kernel_dim,
        "extreme_rays": c.extreme_rays.iter().map(|r| bigint_vec_json(r)).collect::<Vec<_>>(),
        "strictly_convex": c.is_strictly_convex,
        "top_dimensional_in_kernel": c.is_top_dimensional_in_k,
        "meets_positive_orthant": c.meets_positive_orthant,
    })
}

pub fn system_json(s: &BinomialSystem) -> Value {
    let kind = match s.kind {
        SystemKind::Gluing => "gluing",
        SystemKind::LatticeBasis => "lattice-basis",
        SystemKind::Reduced => "reduced",
    };
    json!({
        "presentation": kind,
        "variables": s.variables,
        "exponents": s.binomials.iter().map(|m| bigint_vec_json(m)).collect::<Vec<_>>(),
        "equations": s.equations(),
    })
}

pub fn reduced_json(r: &ReducedSystem) -> Value {
    json!({
        "system": system_json(&r.system),
        "substitutions": r.substitutions.iter().map(|s| json!({
            "variable": s.variable,
            "monomial": bigint_vec_json(&s.monomial),
        })).collect::<Vec<_>>(),
        "not_eliminated": r.remaining,
    })
}

pub fn dims_json(d: &DimensionReport) -> Value {
    json!({
        "units": "complex dimension",
        "dim_x": d.dim_x,
        "genus": d.genus,
        "marked_points": d.marked_points,
        "c1": d.c1,
        "degree_dot_divisor": d.degree_dot_divisor,
        "kernel_dim": d.kernel_dim,
        "obstruction_dim": d.obstruction_dim,
        "main_dim": d.main_dim,
        "stratum_dim": d.stratum_dim,
        "codim": d.codim,
        "smooth_depth_dim": d.smooth_depth_dim,
        "prelog_dim": d.prelog_dim,
    })
}

pub fn obstruction_json(r: &ObstructionResult, tol: f64) -> Value {
    let entry = |v: &crate::toric::CharacterValue| json!({"character": bigint_vec_json(&v.character), "deviation": v.deviation});
    json!({
        "tolerance": tol,
        "is_identity": r.is_identity,
        "characters": r.values.iter().map(entry).collect::<Vec<_>>(),
        "violations": r.violations.iter().map(entry).collect::<Vec<_>>(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    /// Replaces the context embedded in the graph file.
    pub context: Option<GeometryContext>,
    pub eta: Option<ObstructionInput>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub json: Value,
    pub valid: bool,
    pub feasible: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Every analysis of one graph file.
pub fn analyze(bytes: &[u8], opts: &ReportOptions) -> Result<AnalysisReport> {
    let (g, embedded) = parse_graph(bytes)?;
    let ctx = opts.context.clone().or(embedded);
    let validation = validate_axioms(&g, ctx.as_ref());
    let summary = lattice_summary(&g);
    let verdict = tropical_feasibility(&g);
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert(
        "provenance".into(),
        json!({"sha256": sha256_hex(bytes), "library_version": env!("CARGO_PKG_VERSION")}),
    );
    out.insert("validation".into(), validation_json(&validation));
    out.insert(
        "genus".into(),
        arithmetic_genus(&g).map_or(Value::Null, |x| json!(x)),
    );
    out.insert("lattice".into(), lattice_json(&summary));
    out.insert("tropical".into(), tropical_json(&g, &verdict));
    out.insert("cone".into(), cone_json(&sigma_cone(&g)));
    out.insert("gluing".into(), system_json(&gluing_equations(&g)));
    out.insert("toric_ideal".into(), system_json(&toric_ideal_from_summary(&g, &summary)));
    out.insert("toric_ideal_reduced".into(), reduced_json(&reduced_toric_ideal(&g)));
    let dims = match &ctx {
        Some(c) if g.is_connected() => expected_dim_stratum(&g, c).map_or_else(|e| json!({"error": e.to_string()}), |d| dims_json(&d)),
        _ => Value::Null,
    };
    out.insert("dimensions".into(), dims);
    if let Some(eta) = &opts.eta {
        let tol = opts.tolerance.unwrap_or(crate::toric::DEFAULT_TOLERANCE);
        let r = obstruction_test_with(&summary.rho, eta, tol)?;
        out.insert("obstruction".into(), obstruction_json(&r, tol));
    }
    Ok(AnalysisReport {
        json: Value::Object(out),
        valid: validation.is_valid(),
        feasible: verdict.is_feasible(),
    })
}

/// Indented `key: value` lines with aligned values.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_into(value, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_into(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        render_into(v, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
