//! Machine-readable output: JSON documents with sorted keys (serde_json's
//! default map is ordered), and the text mode as a deterministic flattening
//! of the same document, so both modes carry identical data.

use serde_json::{json, Value};

use frobdiff_core::diffop::DiffOperator;
use frobdiff_core::ec::{ScanForm, ScanSummary, WeierstrassCoefficients};
use frobdiff_core::froots::RootIdeal;
use frobdiff_core::level::LevelResult;
use frobdiff_core::poly::MultiPoly;

/// `key = value` per top-level key (sorted), values as compact JSON.
pub fn flatten_top(doc: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = doc {
        for (k, v) in map {
            out.push_str(k);
            out.push_str(" = ");
            match v {
                Value::String(s) => out.push_str(s),
                other => out.push_str(&other.to_string()),
            }
            out.push('\n');
        }
    } else {
        out.push_str(&doc.to_string());
        out.push('\n');
    }
    out
}

pub fn ideal_strings(root: &RootIdeal) -> Vec<String> {
    root.generators().iter().map(|g| g.to_string()).collect()
}

pub fn level_doc(result: &LevelResult) -> Value {
    json!({
        "level": result.level(),
        "ideal": ideal_strings(result.stabilized_ideal()),
    })
}

pub fn roots_doc(root: &RootIdeal) -> Value {
    json!({
        "e": root.e(),
        "gens": ideal_strings(root),
    })
}

pub fn operator_doc(op: &DiffOperator, verified: bool, level: u32) -> Value {
    let terms: Vec<Value> = op
        .terms()
        .iter()
        .map(|t| {
            json!({
                "left": t.left().to_string(),
                "orders": t.orders(),
                "right": t.right().to_string(),
            })
        })
        .collect();
    json!({
        "e": op.e(),
        "level": level,
        "terms": terms,
        "text": op.canonical_text(),
        "verified": verified,
    })
}

pub fn apply_doc(result: &MultiPoly) -> Value {
    json!({ "result": result.to_string() })
}

pub fn coefficients_doc(w: &WeierstrassCoefficients) -> Value {
    match w {
        WeierstrassCoefficients::Short { a, b, .. } => json!({
            "form": "short",
            "a": a.value(),
            "b": b.value(),
        }),
        WeierstrassCoefficients::General {
            a1, a3, a2, a4, a6, ..
        } => json!({
            "form": "general",
            "a1": a1.value(),
            "a3": a3.value(),
            "a2": a2.value(),
            "a4": a4.value(),
            "a6": a6.value(),
        }),
    }
}

pub fn classification_doc(
    w: &WeierstrassCoefficients,
    class: &frobdiff_core::ec::CurveClassification,
) -> Value {
    json!({
        "p": w.prime().get(),
        "coefficients": coefficients_doc(w),
        "kind": class.kind.to_string(),
        "level": class.level,
        "hasse_coefficient": class.hasse_coefficient.value(),
        "trace": class.trace,
        "count": class.count,
    })
}

pub fn scan_doc(summary: &ScanSummary) -> Value {
    let rows: Vec<Value> = summary
        .rows
        .iter()
        .map(|row| classification_doc(&row.coefficients, &row.class))
        .collect();
    json!({
        "p": summary.p.get(),
        "form": match summary.form {
            ScanForm::Short => "short",
            ScanForm::General => "general",
        },
        "rows": rows,
        "ordinary": summary.ordinary,
        "supersingular": summary.supersingular,
        "singular_skipped": summary.singular_skipped,
    })
}
