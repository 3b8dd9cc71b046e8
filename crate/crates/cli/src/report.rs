//! JSON report shape shared by every command.
//!
//! One object per run, fields in fixed order so golden files diff cleanly:
//! `{"ring": ..., "cardinality": ..., "command": ..., "result": ...,
//! "witness": ..., "elapsed_ms": ..., "version": ...}`.

use ringlab_core::analysis::{BleachDirection, Verdict, Witness};
use ringlab_core::ring::Ring;
use serde::Serialize;
use serde_json::{json, Value};

use crate::parse::render_element;

#[derive(Serialize)]
pub struct RunReport {
    pub ring: String,
    pub cardinality: u64,
    pub command: String,
    pub result: Value,
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
    pub version: String,
}

pub fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

pub fn verdict_json(ring: &Ring, verdict: &Verdict) -> Value {
    json!({
        "holds": verdict.holds(),
        "witness": verdict.witness().map(|w| witness_json(ring, w)),
    })
}

pub fn witness_json(ring: &Ring, witness: &Witness) -> Value {
    let lit = |e| render_element(ring, e);
    match witness {
        Witness::MissingExpression { element } => json!({
            "kind": "missing_expression",
            "element": lit(*element),
        }),
        Witness::ExtraExpression {
            element,
            first,
            second,
        } => json!({
            "kind": "non_unique_expression",
            "element": lit(*element),
            "first": {"idempotent": lit(first.0), "unit": lit(first.1)},
            "second": {"idempotent": lit(second.0), "unit": lit(second.1)},
        }),
        Witness::NonCentralIdempotent { idempotent, other } => json!({
            "kind": "non_central_idempotent",
            "idempotent": lit(*idempotent),
            "other": lit(*other),
        }),
        Witness::NotIdempotent { element } => json!({
            "kind": "not_idempotent",
            "element": lit(*element),
        }),
        Witness::NotLocal { element } => json!({
            "kind": "not_local",
            "element": lit(*element),
        }),
        Witness::BleachFailure {
            radical,
            unit,
            direction,
            collision,
        } => json!({
            "kind": "bleach_failure",
            "radical": lit(*radical),
            "unit": lit(*unit),
            "direction": match direction {
                BleachDirection::RadicalLeft => "l_radical_r_unit",
                BleachDirection::UnitLeft => "l_unit_r_radical",
            },
            "collision": [lit(collision.0), lit(collision.1)],
        }),
        Witness::ResidueCardinality { cardinality } => json!({
            "kind": "residue_cardinality",
            "cardinality": cardinality,
        }),
    }
}

pub fn witness_text(ring: &Ring, witness: &Witness) -> String {
    let lit = |e| render_element(ring, e);
    match witness {
        Witness::MissingExpression { element } => {
            format!("element {} has no expression of the required kind", lit(*element))
        }
        Witness::ExtraExpression {
            element,
            first,
            second,
        } => format!(
            "element {} has expressions (e={}, u={}) and (e={}, u={})",
            lit(*element),
            lit(first.0),
            lit(first.1),
            lit(second.0),
            lit(second.1)
        ),
        Witness::NonCentralIdempotent { idempotent, other } => format!(
            "idempotent {} does not commute with {}",
            lit(*idempotent),
            lit(*other)
        ),
        Witness::NotIdempotent { element } => {
            format!("element {} is not idempotent", lit(*element))
        }
        Witness::NotLocal { element } => format!(
            "neither {} nor 1 - {} is a unit",
            lit(*element),
            lit(*element)
        ),
        Witness::BleachFailure {
            radical,
            unit,
            direction,
            collision,
        } => format!(
            "pair (radical {}, unit {}): the map {} is not injective, images of {} and {} agree",
            lit(*radical),
            lit(*unit),
            match direction {
                BleachDirection::RadicalLeft => "x -> a*x - x*b",
                BleachDirection::UnitLeft => "x -> b*x - x*a",
            },
            lit(collision.0),
            lit(collision.1)
        ),
        Witness::ResidueCardinality { cardinality } => {
            format!("|R/J(R)| = {cardinality}")
        }
    }
}
