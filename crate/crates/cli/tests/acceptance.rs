//! Acceptance criterion 10: the published computer-algebra session
//! interactions reproduce through the CLI — levels exactly, ideals as
//! ideals, operators verified by their action (term lists are advisory
//! because bracket-power representations are not unique).
//!
//! Run with `cargo test --release --test acceptance -- --nocapture`.

use frobdiff::run;
use frobdiff_core::diffop::DiffOperator;
use frobdiff_core::ff::Prime;
use frobdiff_core::ideal::{ideal_equal, IdealBasis};
use frobdiff_core::poly::{MultiPoly, PolyRing};
use serde_json::Value;

fn ring(p: u64, vars: &[&str]) -> PolyRing {
    PolyRing::new(Prime::new(p).unwrap(), vars)
}

fn run_ok(args: &[&str]) -> Value {
    let result = run(args.iter().map(|s| s.to_string()));
    assert_eq!(
        result.exit_code, 0,
        "command {args:?} failed: {:?}",
        result.error
    );
    result.document.expect("successful commands carry a document")
}

fn parse_ideal(doc: &Value, key: &str, r: &PolyRing) -> IdealBasis {
    let gens: Vec<MultiPoly> = doc[key]
        .as_array()
        .expect("ideal array")
        .iter()
        .map(|v| frobdiff::expr::parse_polynomial(v.as_str().unwrap(), r).unwrap())
        .collect();
    IdealBasis::new(r.clone(), gens)
}

fn parse_operator(doc: &Value, r: &PolyRing) -> DiffOperator {
    frobdiff::opfile::parse_operator_json(&doc.to_string(), r).unwrap()
}

/// The operator's defining action: δ(f^{p^e-1}) = f^{p^e-p}.
fn assert_operator_action(doc: &Value, f: &MultiPoly) {
    assert_eq!(doc["verified"], Value::Bool(true));
    let op = parse_operator(doc, f.ring());
    let e = doc["e"].as_u64().unwrap() as u32;
    let source = f.power_q_minus_one(e).unwrap();
    let target = f
        .power_q_minus_one(e - 1)
        .unwrap()
        .frobenius_pow(1)
        .unwrap();
    assert_eq!(op.apply(&source), target);
}

const VARS4: &str = "x,y,z,w";

#[test]
fn criterion_10_session_transcripts() {
    let r = ring(2, &["x", "y", "z", "w"]);

    // 1. the monomial: level (4, ideal(x^2 y^4 z^6 w^3)) and its operator
    let src = "x^3*y^5*z^7*w^4";
    let doc = run_ok(&["frobdiff", "level", src, "-p", "2", "--vars", VARS4, "--json"]);
    assert_eq!(doc["level"], 4);
    let expected = IdealBasis::new(
        r.clone(),
        vec![frobdiff::expr::parse_polynomial("x^2*y^4*z^6*w^3", &r).unwrap()],
    );
    assert!(ideal_equal(&parse_ideal(&doc, "ideal", &r), &expected));

    let op_doc = run_ok(&["frobdiff", "diffop", src, "-p", "2", "--vars", VARS4, "--json"]);
    let f = frobdiff::expr::parse_polynomial(src, &r).unwrap();
    assert_operator_action(&op_doc, &f);
    // for the monomial the construction lands on the published term list
    assert_eq!(
        op_doc["text"].as_str().unwrap(),
        "x^10*y^6*z^2*w^8 * D[15,15,15,15] * x^2*y^4*z^6*w^3"
    );

    // 2. the product of powers of linear forms: level 4
    let src = "x^3*(x+y)^5*(x+y+z)^7*(x+y+z+w)^4";
    let doc = run_ok(&["frobdiff", "level", src, "-p", "2", "--vars", VARS4, "--json"]);
    assert_eq!(doc["level"], 4);

    // 3. squarefree private variable: level (1, ideal 1), operator
    //    D_{x,1} D_{y,1} D_{z,1} D_{w,1}
    let src = "x^2+y^2+z^3+x*y*z*w";
    let doc = run_ok(&["frobdiff", "level", src, "-p", "2", "--vars", VARS4, "--json"]);
    assert_eq!(doc["level"], 1);
    let unit = IdealBasis::new(r.clone(), vec![r.one()]);
    assert!(ideal_equal(&parse_ideal(&doc, "ideal", &r), &unit));
    let op_doc = run_ok(&["frobdiff", "diffop", src, "-p", "2", "--vars", VARS4, "--json"]);
    let f = frobdiff::expr::parse_polynomial(src, &r).unwrap();
    assert_operator_action(&op_doc, &f);
    assert_eq!(op_doc["text"].as_str().unwrap(), "1 * D[1,1,1,1] * 1");

    // 4. the 2x2 determinant: the published row is | 1 d0 d1 d2 d3 yz |;
    //    term lists are advisory, the action is the contract
    let src = "x*w-y*z";
    let op_doc = run_ok(&["frobdiff", "diffop", src, "-p", "2", "--vars", VARS4, "--json"]);
    let f = frobdiff::expr::parse_polynomial(src, &r).unwrap();
    assert_operator_action(&op_doc, &f);
    let doc = run_ok(&["frobdiff", "level", src, "-p", "2", "--vars", VARS4, "--json"]);
    assert_eq!(doc["level"], 1);

    // 5. the quadric x^2+y^2+xy+z^2+w^2: level 1 with a verified operator
    let src = "x^2+y^2+x*y+z^2+w^2";
    let op_doc = run_ok(&["frobdiff", "diffop", src, "-p", "2", "--vars", VARS4, "--json"]);
    let f = frobdiff::expr::parse_polynomial(src, &r).unwrap();
    assert_operator_action(&op_doc, &f);

    // 6. the diagonal cubic: level (2, ideal (w, z, y, x)) and the
    //    four-row operator, compared by action on f^3
    let src = "x^3+y^3+z^3+w^3";
    let doc = run_ok(&["frobdiff", "level", src, "-p", "2", "--vars", VARS4, "--json"]);
    assert_eq!(doc["level"], 2);
    let vars_ideal = IdealBasis::new(
        r.clone(),
        vec![r.var(0), r.var(1), r.var(2), r.var(3)],
    );
    assert!(ideal_equal(&parse_ideal(&doc, "ideal", &r), &vars_ideal));
    let op_doc = run_ok(&["frobdiff", "diffop", src, "-p", "2", "--vars", VARS4, "--json"]);
    let f = frobdiff::expr::parse_polynomial(src, &r).unwrap();
    assert_operator_action(&op_doc, &f);

    println!("criterion 10 PASS: the session transcripts reproduce semantically through the CLI");
}
