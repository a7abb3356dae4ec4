//! Deterministic report rendering.
//!
//! The JSON document is the canonical machine-readable output: every
//! rational is serialized as an exact `p/q` string, every float as a
//! 15-significant-digit string, and keys are emitted in sorted order, so
//! reruns on identical input produce byte-identical bytes.  The CSV
//! rendering is a lossy convenience view of the curvature table only.

use crate::comparisons::{FullReport, Value as TheoremValue, VerdictStatus};
use crate::curvature::Scope;
use crate::digraph::WeightedDigraph;
use crate::exactnum::Rational;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Schema identifier for the JSON document.
pub const SCHEMA: u64 = 1;

/// 15 significant digits, scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.14e}")
}

fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn rationals(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rational).collect())
}

fn floats(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|v| Value::String(format_float(*v))).collect())
}

fn theorem_value(v: &TheoremValue) -> Value {
    match v {
        TheoremValue::Exact(r) => rational(r),
        TheoremValue::Approx(f) => Value::String(format_float(*f)),
    }
}

/// `sha256:<hex>` digest of the raw input bytes.
pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (key, value) in entries {
        map.insert(key.to_string(), value);
    }
    Value::Object(map)
}

/// Assembles the full JSON document.  `scope` selects which curvature
/// pairs are listed; the verdict sections always rest on the all-pairs
/// analysis that produced `report`.
pub fn document(
    g: &WeightedDigraph,
    report: &FullReport,
    digest: &str,
    scope: Scope,
) -> Value {
    let d = g.distances();
    let n = g.n();
    let pairs: Vec<Value> = report
        .curvature
        .pairs
        .iter()
        .filter(|p| matches!(scope, Scope::All) || d.get(p.x, p.y) == 1)
        .map(|p| {
            object(vec![
                ("x", Value::String(g.label(p.x).to_string())),
                ("y", Value::String(g.label(p.y).to_string())),
                ("d", Value::from(d.get(p.x, p.y) as u64)),
                ("kappa", rational(&p.kappa)),
            ])
        })
        .collect();

    let classification = &report.classification;
    let cd = &report.cd;
    let verdicts: Vec<Value> = report
        .verdicts
        .iter()
        .map(|v| {
            let mut hypotheses = Map::new();
            for (name, value) in &v.hypotheses {
                hypotheses.insert(name.clone(), theorem_value(value));
            }
            let mut entries = vec![
                ("theorem", Value::String(v.theorem.clone())),
                (
                    "status",
                    Value::String(
                        match v.status {
                            VerdictStatus::Holds => "holds",
                            VerdictStatus::Fails => "fails",
                            VerdictStatus::Vacuous => "vacuous",
                            VerdictStatus::HypothesisNotMet => "hypothesis_not_met",
                        }
                        .to_string(),
                    ),
                ),
                ("hypotheses", Value::Object(hypotheses)),
                ("slack", Value::String(format_float(v.slack))),
            ];
            if let Some(lhs) = &v.lhs {
                entries.push(("lhs", theorem_value(lhs)));
            }
            if let Some(rhs) = &v.rhs {
                entries.push(("rhs", theorem_value(rhs)));
            }
            if let Some(note) = &v.note {
                entries.push(("note", Value::String(note.clone())));
            }
            object(entries)
        })
        .collect();

    object(vec![
        ("schema", Value::from(SCHEMA)),
        (
            "tool",
            object(vec![
                ("name", Value::String(env!("CARGO_PKG_NAME").to_string())),
                ("version", Value::String(env!("CARGO_PKG_VERSION").to_string())),
            ]),
        ),
        (
            "input",
            object(vec![
                ("digest", Value::String(digest.to_string())),
                ("vertices", Value::from(n as u64)),
                ("edges", Value::from(g.edges().len() as u64)),
            ]),
        ),
        (
            "labels",
            Value::Array(
                report
                    .labels
                    .iter()
                    .map(|l| Value::String(l.clone()))
                    .collect(),
            ),
        ),
        (
            "classify",
            object(vec![
                ("unweighted", Value::Bool(classification.unweighted)),
                ("undirected", Value::Bool(classification.undirected)),
                ("eulerian", Value::Bool(classification.eulerian)),
                (
                    "regular",
                    classification
                        .regular
                        .map_or(Value::Null, |r| Value::from(r as u64)),
                ),
            ]),
        ),
        ("perron", rationals(&report.perron)),
        (
            "mean_curvature",
            object(vec![
                (
                    "h",
                    rationals(&(0..n).map(|x| report.mean.h(x).clone()).collect::<Vec<_>>()),
                ),
                (
                    "h_reverse",
                    rationals(
                        &(0..n)
                            .map(|x| report.mean.h_rev(x).clone())
                            .collect::<Vec<_>>(),
                    ),
                ),
            ]),
        ),
        (
            "curvature",
            object(vec![
                (
                    "scope",
                    Value::String(
                        match scope {
                            Scope::Edges => "edges",
                            Scope::All => "all",
                        }
                        .to_string(),
                    ),
                ),
                ("edge_min", rational(&report.curvature.edge_min)),
                (
                    "global_min",
                    report
                        .curvature
                        .global_min
                        .as_ref()
                        .map_or(Value::Null, rational),
                ),
                ("pairs", Value::Array(pairs)),
            ]),
        ),
        (
            "cd",
            object(vec![
                ("k", rationals(&cd.constants.k)),
                ("k_tilde", rationals(&cd.constants.k_tilde)),
                (
                    "khat",
                    cd.khat
                        .as_ref()
                        .map_or(Value::Null, |kh| rationals(&kh.khat)),
                ),
                (
                    "coarse",
                    cd.khat.as_ref().map_or(Value::Null, |kh| rational(&kh.coarse)),
                ),
                (
                    "triangle",
                    Value::Array(cd.triangle.iter().map(|&t| Value::from(t as u64)).collect()),
                ),
                ("samples", Value::from(cd.sample_count as u64)),
                ("min_residual_k", rational(&cd.min_residual_k)),
                ("min_residual_k_tilde", rational(&cd.min_residual_k_tilde)),
                (
                    "min_residual_khat",
                    cd.min_residual_khat.as_ref().map_or(Value::Null, rational),
                ),
            ]),
        ),
        (
            "spectrum",
            object(vec![
                ("eigenvalues", floats(&report.spectrum.eigenvalues)),
                ("residuals", floats(&report.spectrum.residuals)),
            ]),
        ),
        ("verdicts", Value::Array(verdicts)),
        (
            "notes",
            Value::Array(
                report
                    .notes
                    .iter()
                    .map(|n| Value::String(n.clone()))
                    .collect(),
            ),
        ),
    ])
}

/// Pretty JSON with a trailing newline; `serde_json` maps are sorted, so
/// the bytes are a pure function of the document.
pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents are serializable");
    text.push('\n');
    text
}

/// The curvature table as CSV: one `x,y,d,kappa` row per listed pair.
pub fn render_csv(g: &WeightedDigraph, report: &FullReport, scope: Scope) -> String {
    let d = g.distances();
    let mut out = String::from("x,y,d,kappa\n");
    for p in &report.curvature.pairs {
        if matches!(scope, Scope::Edges) && d.get(p.x, p.y) != 1 {
            continue;
        }
        out.push_str(&format!(
            "{},{},{},{}\n",
            g.label(p.x),
            g.label(p.y),
            d.get(p.x, p.y),
            p.kappa
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparisons::full_report;
    use crate::digraph::gen_complete;

    #[test]
    fn float_formatting_is_fifteen_significant_digits() {
        assert_eq!(format_float(1.5), "1.50000000000000e0");
        assert_eq!(format_float(0.0), "0.00000000000000e0");
        assert_eq!(format_float(1e-9), "1.00000000000000e-9");
        assert_eq!(format_float(-0.125), "-1.25000000000000e-1");
    }

    #[test]
    fn digest_is_prefixed_hex() {
        let digest = input_digest(b"a\tb\t1\n");
        assert!(digest.starts_with("sha256:"));
        assert_eq!(digest.len(), "sha256:".len() + 64);
    }

    #[test]
    fn documents_are_stable_and_scope_filters_pairs() {
        let g = gen_complete(3).unwrap();
        let report = full_report(&g, 1).unwrap();
        let doc_edges = document(&g, &report, "sha256:0", Scope::Edges);
        let doc_all = document(&g, &report, "sha256:0", Scope::All);
        let edges = doc_edges["curvature"]["pairs"].as_array().unwrap();
        let all = doc_all["curvature"]["pairs"].as_array().unwrap();
        assert_eq!(edges.len(), 3);
        assert_eq!(all.len(), 6);
        assert_eq!(edges[0]["kappa"], "3/2");
        assert_eq!(doc_edges["schema"], 1);
        assert_eq!(
            render_json(&doc_edges),
            render_json(&document(&g, &report, "sha256:0", Scope::Edges))
        );
    }

    #[test]
    fn csv_lists_edge_rows() {
        let g = gen_complete(3).unwrap();
        let report = full_report(&g, 1).unwrap();
        let csv = render_csv(&g, &report, Scope::Edges);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,d,kappa");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].ends_with(",1,3/2"));
    }
}
