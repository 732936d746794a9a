//! Native JSON documents: one schema for models and all three instance
//! families, tagged by `family` and versioned with `schema_version`.
//!
//! Layout (all coefficient lists sorted, so write∘read is the identity):
//!
//! * `family: "qubo"` — `n`, `constant`, `linear: [[j, v], …]`,
//!   `quad: [[i, j, v], …]` with `i < j`;
//! * `family: "qap"` — `flow`, `dist` as n×n row-major arrays;
//! * `family: "qcpp"` — `n_vertices`, `arcs: [[tail, head], …]` (arc order
//!   is the variable order), `costs: [[[a1, a2], v], …]` keyed by arc
//!   indices of consecutive pairs;
//! * `family: "selcol"` — `n_vertices`, `edges`, `clusters` as a list of
//!   vertex lists, `color_budget`.
//!
//! Schema violations are reported with a JSON-pointer-style path into the
//! offending element.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use qubokit_core::problems::{ProblemInstance, QapInstance, QcppInstance, SelColInstance};
use qubokit_core::QuboModel;

use super::FormatError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct QuboDoc {
    schema_version: u32,
    n: usize,
    constant: f64,
    linear: Vec<(usize, f64)>,
    quad: Vec<(usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct QapDoc {
    schema_version: u32,
    flow: Vec<Vec<f64>>,
    dist: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct QcppDoc {
    schema_version: u32,
    n_vertices: usize,
    arcs: Vec<(usize, usize)>,
    costs: Vec<((usize, usize), f64)>,
}

#[derive(Serialize, Deserialize)]
struct SelcolDoc {
    schema_version: u32,
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    clusters: Vec<Vec<usize>>,
    color_budget: usize,
}

/// Write-side wrapper that puts the `family` tag first.
#[derive(Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum Doc {
    Qubo(QuboDoc),
    Qap(QapDoc),
    Qcpp(QcppDoc),
    Selcol(SelcolDoc),
}

/// Anything a native document can hold.
#[derive(Clone, Debug, PartialEq)]
pub enum NativeDoc {
    Model(QuboModel),
    Instance(ProblemInstance),
}

fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, FormatError> {
    serde_path_to_error::deserialize(value)
        .map_err(|e| FormatError::Schema(format!("at {}: {}", e.path(), e.inner())))
}

fn check_version(version: u32) -> Result<(), FormatError> {
    if version != SCHEMA_VERSION {
        return Err(FormatError::Schema(format!(
            "schema_version {version} is not supported (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

pub fn read_native(text: &str) -> Result<NativeDoc, FormatError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| FormatError::Schema(e.to_string()))?;
    let family = value
        .get("family")
        .and_then(|v| v.as_str())
        .ok_or_else(|| FormatError::Schema("missing 'family' tag".into()))?
        .to_owned();
    match family.as_str() {
        "qubo" => {
            let doc: QuboDoc = from_value(value)?;
            check_version(doc.schema_version)?;
            if !doc.constant.is_finite() {
                return Err(FormatError::Invalid("constant must be finite".into()));
            }
            let mut m = QuboModel::new(doc.n);
            m.add_constant(doc.constant);
            for (j, v) in doc.linear {
                if j >= doc.n {
                    return Err(FormatError::Invalid(format!(
                        "linear index {j} out of range for n = {}",
                        doc.n
                    )));
                }
                if !v.is_finite() {
                    return Err(FormatError::Invalid(format!("linear[{j}] must be finite")));
                }
                m.add_linear(j, v);
            }
            for (i, j, v) in doc.quad {
                if i >= doc.n || j >= doc.n || i == j {
                    return Err(FormatError::Invalid(format!(
                        "quadratic pair ({i}, {j}) invalid for n = {}",
                        doc.n
                    )));
                }
                if !v.is_finite() {
                    return Err(FormatError::Invalid(format!(
                        "quad[({i}, {j})] must be finite"
                    )));
                }
                m.add_quad(i, j, v);
            }
            Ok(NativeDoc::Model(m))
        }
        "qap" => {
            let doc: QapDoc = from_value(value)?;
            check_version(doc.schema_version)?;
            QapInstance::new(doc.flow, doc.dist)
                .map(|i| NativeDoc::Instance(ProblemInstance::Qap(i)))
                .map_err(|e| FormatError::Invalid(e.to_string()))
        }
        "qcpp" => {
            let doc: QcppDoc = from_value(value)?;
            check_version(doc.schema_version)?;
            let mut map = BTreeMap::new();
            for (key, v) in doc.costs {
                if map.insert(key, v).is_some() {
                    return Err(FormatError::Invalid(format!(
                        "duplicate cost key ({}, {})",
                        key.0, key.1
                    )));
                }
            }
            QcppInstance::new(doc.n_vertices, doc.arcs, map)
                .map(|i| NativeDoc::Instance(ProblemInstance::Qcpp(i)))
                .map_err(|e| FormatError::Invalid(e.to_string()))
        }
        "selcol" => {
            let doc: SelcolDoc = from_value(value)?;
            check_version(doc.schema_version)?;
            SelColInstance::new(doc.n_vertices, doc.edges, doc.clusters, doc.color_budget)
                .map(|i| NativeDoc::Instance(ProblemInstance::SelCol(i)))
                .map_err(|e| FormatError::Invalid(e.to_string()))
        }
        other => Err(FormatError::Schema(format!("unknown family '{other}'"))),
    }
}

pub fn write_model(model: &QuboModel) -> String {
    render(&Doc::Qubo(QuboDoc {
        schema_version: SCHEMA_VERSION,
        n: model.n(),
        constant: model.constant(),
        linear: model.linear_terms().collect(),
        quad: model.quad_terms().collect(),
    }))
}

pub fn write_instance(inst: &ProblemInstance) -> String {
    let doc = match inst {
        ProblemInstance::Qap(i) => Doc::Qap(QapDoc {
            schema_version: SCHEMA_VERSION,
            flow: i.flow().to_vec(),
            dist: i.dist().to_vec(),
        }),
        ProblemInstance::Qcpp(i) => Doc::Qcpp(QcppDoc {
            schema_version: SCHEMA_VERSION,
            n_vertices: i.n_vertices(),
            arcs: i.arcs().to_vec(),
            costs: i.cost().iter().map(|(&k, &v)| (k, v)).collect(),
        }),
        ProblemInstance::SelCol(i) => Doc::Selcol(SelcolDoc {
            schema_version: SCHEMA_VERSION,
            n_vertices: i.n_vertices(),
            edges: i.edges().iter().copied().collect(),
            clusters: i.clusters().to_vec(),
            color_budget: i.color_budget(),
        }),
    };
    render(&doc)
}

fn render(doc: &Doc) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use qubokit_core::gen::{gen_qcpp, gen_selcol, QcppSpec, SelColSpec};

    #[test]
    fn model_round_trip() {
        let mut m = QuboModel::new(3);
        m.add_constant(1.5);
        m.add_linear(0, -1.0);
        m.add_quad(0, 2, 4.0);
        let text = write_model(&m);
        assert_eq!(read_native(&text).unwrap(), NativeDoc::Model(m));
    }

    #[test]
    fn qcpp_round_trip() {
        let inst = gen_qcpp(&QcppSpec {
            n_vertices: 6,
            density: 0.4,
            seed: 3,
        })
        .unwrap();
        let doc = ProblemInstance::Qcpp(inst);
        let text = write_instance(&doc);
        assert_eq!(read_native(&text).unwrap(), NativeDoc::Instance(doc));
    }

    #[test]
    fn selcol_round_trip() {
        let inst = gen_selcol(&SelColSpec {
            n_vertices: 9,
            density: 0.5,
            cluster_size_low: 2,
            cluster_size_high: 3,
            seed: 8,
        })
        .unwrap();
        let doc = ProblemInstance::SelCol(inst);
        let text = write_instance(&doc);
        assert_eq!(read_native(&text).unwrap(), NativeDoc::Instance(doc));
    }

    #[test]
    fn unknown_family_is_rejected() {
        let err = read_native(r#"{"family": "tsp", "schema_version": 1}"#).unwrap_err();
        assert!(err.to_string().contains("tsp"), "{err}");
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let err = read_native(
            r#"{"family": "qubo", "schema_version": 2, "n": 1, "constant": 0.0, "linear": [], "quad": []}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("schema_version 2"), "{err}");
    }

    #[test]
    fn schema_violations_carry_a_path() {
        let err = read_native(
            r#"{"family": "selcol", "schema_version": 1, "n_vertices": 2,
                "edges": [], "clusters": [[0], ["x"]], "color_budget": 1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("clusters[1]"), "{err}");
    }

    #[test]
    fn out_of_range_model_entries_are_rejected() {
        let err = read_native(
            r#"{"family": "qubo", "schema_version": 1, "n": 2, "constant": 0.0,
                "linear": [[5, 1.0]], "quad": []}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }
}
