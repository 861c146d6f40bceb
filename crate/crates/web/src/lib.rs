//! Browser bindings: each export takes and returns JSON text.

use coupled_core::fixtures::{make_fixture, Fixture, FixtureKind, FixtureParams, FixtureSpec};
use coupled_core::graphs::{digraph, linked_graph, pair_dot, strongly_connected_components};
use coupled_core::io::{family_value, parse_family, AnyFamily};
use coupled_core::reducibility::chain_classify;
use coupled_core::scalar::parse_rational;
use coupled_core::sylvester::{dichotomy_report, AuditOptions};
use coupled_core::{CoupledFamily, Scalar, TolerancePolicy};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn graphs<T: Scalar>(a: &CoupledFamily<T>, b: Option<&CoupledFamily<T>>) -> Result<Value, String> {
    let pol = TolerancePolicy::default();
    let da = digraph(a, &pol);
    let mut out = json!({"D(A)": da, "scc(A)": strongly_connected_components(&da), "dot": da.to_dot("D(A)")});
    if let Some(b) = b {
        if b.k() != a.k() {
            return Err(format!("A has {} indices, B has {}", a.k(), b.k()));
        }
        let db = digraph(b, &pol);
        let g = linked_graph(&da, &db).map_err(|e| e.to_string())?;
        out["scc(B)"] = json!(strongly_connected_components(&db));
        out["dot"] = json!(pair_dot(&da, &db, &g));
        out["D(B)"] = json!(db);
        out["G(A,B)"] = json!(g);
    }
    Ok(out)
}

/// Digraphs, strong components and linked graph of family files; `b` may be empty.
pub fn graph_report(a: &str, b: &str) -> Result<String, String> {
    let fa = parse_family(a).map_err(|e| format!("A: {e}"))?;
    let fb = if b.trim().is_empty() { None } else { Some(parse_family(b).map_err(|e| format!("B: {e}"))?) };
    let exact = matches!(fa, AnyFamily::Rational(_)) && fb.as_ref().is_none_or(|f| matches!(f, AnyFamily::Rational(_)));
    let v = if exact {
        graphs(&fa.to_exact(), fb.as_ref().map(AnyFamily::to_exact).as_ref())?
    } else {
        graphs(&fa.to_c64(), fb.as_ref().map(AnyFamily::to_c64).as_ref())?
    };
    Ok(v.to_string())
}

fn spec(kind: &str, dims: &str) -> Result<FixtureSpec, String> {
    let kind: FixtureKind = kind.parse().map_err(|e: coupled_core::Error| e.to_string())?;
    let dims = if dims.trim().is_empty() {
        None
    } else {
        Some(
            dims.split(',')
                .map(|d| d.trim().parse::<usize>().map_err(|_| format!("bad dimension `{}`", d.trim())))
                .collect::<Result<Vec<_>, _>>()?,
        )
    };
    Ok(FixtureSpec { kind, params: FixtureParams { dims, ..Default::default() }, overrides: Vec::new() })
}

/// Builds a fixture and returns its family files.
pub fn fixture_files(kind: &str, dims: &str) -> Result<String, String> {
    let fx = make_fixture(&spec(kind, dims)?).map_err(|e| e.to_string())?;
    Ok(match fx {
        Fixture::Family(f) => json!({"A": family_value(&f)}),
        Fixture::Pair { a, b, .. } => json!({"A": family_value(&a), "B": family_value(&b)}),
    }
    .to_string())
}

/// Exhaustive chain classification of a fixture's first family.
pub fn chain_report(kind: &str, dims: &str) -> Result<String, String> {
    let fx = make_fixture(&spec(kind, dims)?).map_err(|e| e.to_string())?;
    let v = chain_classify(fx.family()).map_err(|e| e.to_string())?;
    Ok(json!({"family": family_value(fx.family()), "verdict": v}).to_string())
}

/// Solves the nilpotent pair with parameter block `[[a, b], [c, d]]`.
pub fn nilpotent_pair_report(a: &str, b: &str, c: &str, d: &str) -> Result<String, String> {
    let r = |name: &str, s: &str| parse_rational(s.trim()).ok_or_else(|| format!("{name}: `{s}` is not a rational number"));
    let fx = coupled_core::fixtures::example_51(r("a", a)?, r("b", b)?, r("c", c)?, r("d", d)?).map_err(|e| e.to_string())?;
    let Fixture::Pair { a, b, .. } = fx else { unreachable!() };
    let rep = dichotomy_report(&a, &b, &TolerancePolicy::default(), &AuditOptions::default()).map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for f in &rep.findings {
        let s = json!(f.classification.statuses);
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    Ok(json!({
        "dimension": rep.solutions.dimension,
        "basis": rep.solutions.basis,
        "status_patterns": seen,
        "violations": rep.violations,
        "audit": rep.audit,
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = graphReport)]
pub fn graph_report_js(a: &str, b: &str) -> Result<String, JsError> {
    js(graph_report(a, b))
}

#[wasm_bindgen(js_name = fixtureFiles)]
pub fn fixture_files_js(kind: &str, dims: &str) -> Result<String, JsError> {
    js(fixture_files(kind, dims))
}

#[wasm_bindgen(js_name = chainReport)]
pub fn chain_report_js(kind: &str, dims: &str) -> Result<String, JsError> {
    js(chain_report(kind, dims))
}

#[wasm_bindgen(js_name = nilpotentPairReport)]
pub fn nilpotent_pair_report_js(a: &str, b: &str, c: &str, d: &str) -> Result<String, JsError> {
    js(nilpotent_pair_report(a, b, c, d))
}
