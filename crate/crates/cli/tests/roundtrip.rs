//! Round-trip invariants between the canonical renderings and the parsers.

use frobdiff::expr::parse_polynomial;
use frobdiff::opfile::parse_operator;
use frobdiff_core::diffop::{DiffOperator, OpTerm};
use frobdiff_core::ff::Prime;
use frobdiff_core::poly::{Monomial, MultiPoly, PolyRing};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn ring(p: u64, vars: &[&str]) -> PolyRing {
    PolyRing::new(Prime::new(p).unwrap(), vars)
}

fn random_poly(rng: &mut StdRng, r: &PolyRing, max_exp: u32, terms: usize) -> MultiPoly {
    let p = r.prime().get();
    r.from_terms((0..terms).map(|_| {
        let exps: Vec<u32> = (0..r.dim()).map(|_| rng.random_range(0..=max_exp)).collect();
        (Monomial::new(exps), r.prime().element(rng.random_range(0..p)))
    }))
}

#[test]
fn polynomials_round_trip_through_the_parser() {
    let mut rng = StdRng::seed_from_u64(404);
    for &p in &[2u64, 3, 5, 7, 13] {
        for d in 1..=4usize {
            let names = ["x", "y", "z", "w"];
            let r = ring(p, &names[..d]);
            for _ in 0..25 {
                let f = random_poly(&mut rng, &r, 9, 5);
                let rendered = f.to_string();
                let back = parse_polynomial(&rendered, &r).unwrap();
                assert_eq!(back, f, "p={p} d={d} rendered={rendered}");
            }
        }
    }
}

#[test]
fn operators_round_trip_and_act_identically() {
    let mut rng = StdRng::seed_from_u64(405);
    for &p in &[2u64, 3] {
        let r = ring(p, &["x", "y"]);
        let q = p as u32;
        for _ in 0..20 {
            let n_terms = rng.random_range(1..=3);
            let terms: Vec<OpTerm> = (0..n_terms)
                .map(|_| {
                    let mut left = random_poly(&mut rng, &r, 3, 2);
                    if left.is_zero() {
                        left = r.one();
                    }
                    let mut right = random_poly(&mut rng, &r, 3, 2);
                    if right.is_zero() {
                        right = r.one();
                    }
                    OpTerm::new(
                        left,
                        vec![rng.random_range(0..q), rng.random_range(0..q)],
                        right,
                    )
                })
                .collect();
            let op = DiffOperator::new(r.clone(), 1, terms).unwrap();
            let text = op.canonical_text();
            let parsed = parse_operator(&text, &r).unwrap();
            // same action on a small basis of probes
            for _ in 0..6 {
                let g = random_poly(&mut rng, &r, 5, 4);
                assert_eq!(parsed.apply(&g), op.apply(&g), "text={text}");
            }
            // canonical text is a fixed point
            assert_eq!(parsed.canonical_text(), text);
        }
    }
}
