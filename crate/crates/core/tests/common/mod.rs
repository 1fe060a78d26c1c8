//! Shared test support: random polynomial generation and the Macaulay-matrix
//! linear-algebra membership oracle, independent of the Gröbner machinery.

// not every integration test uses every helper
#![allow(dead_code)]

use std::collections::BTreeMap;

use frobdiff_core::ff::Prime;
use frobdiff_core::ideal::IdealBasis;
use frobdiff_core::poly::{Monomial, MultiPoly, PolyRing};
use rand::rngs::StdRng;
use rand::Rng;

pub fn ring(p: u64, vars: &[&str]) -> PolyRing {
    PolyRing::new(Prime::new(p).unwrap(), vars)
}

pub fn poly(r: &PolyRing, terms: &[(i64, &[u32])]) -> MultiPoly {
    r.from_terms(terms.iter().map(|(c, exps)| {
        (
            Monomial::new(exps.to_vec()),
            r.prime().element_from_i64(*c),
        )
    }))
}

const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub fn ring_with_dim(p: u64, d: usize) -> PolyRing {
    ring(p, &VAR_NAMES[..d])
}

/// Random polynomial with at most `max_terms` monomials of total degree at
/// most `max_deg`; may be zero when coefficients cancel.
pub fn random_poly(rng: &mut StdRng, r: &PolyRing, max_deg: u32, max_terms: usize) -> MultiPoly {
    let p = r.prime().get();
    let d = r.dim();
    let n = rng.random_range(1..=max_terms);
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        let mut remaining = max_deg;
        let mut exps = vec![0u32; d];
        for e in exps.iter_mut() {
            let take = rng.random_range(0..=remaining);
            *e = take;
            remaining -= take;
        }
        let coeff = rng.random_range(0..p);
        terms.push((Monomial::new(exps), r.prime().element(coeff)));
    }
    r.from_terms(terms)
}

pub fn random_nonzero_poly(
    rng: &mut StdRng,
    r: &PolyRing,
    max_deg: u32,
    max_terms: usize,
) -> MultiPoly {
    loop {
        let f = random_poly(rng, r, max_deg, max_terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn monomials_up_to(d: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; d];
    fill(d, max_deg, 0, &mut exps, &mut out);
    return out;

    fn fill(d: usize, remaining: u32, var: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == d {
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in 0..=remaining {
            exps[var] = e;
            fill(d, remaining - e, var + 1, exps, out);
        }
        exps[var] = 0;
    }
}

/// Membership of `g` in the ideal by degree-bounded linear algebra: solve
/// `g = Σ h_i·g_i` with `deg h_i <= deg g + 3` as a linear system over the
/// monomial coefficient space, by Gaussian elimination over `F_p`.
pub fn macaulay_membership(basis: &IdealBasis, g: &MultiPoly) -> bool {
    if g.is_zero() {
        return true;
    }
    if basis.generators().is_empty() {
        return false;
    }
    let r = g.ring();
    let p = r.prime().get();
    let d = r.dim();
    let bound = g.degree().unwrap() as u32 + 3;
    let gen_max = basis
        .generators()
        .iter()
        .map(|gi| gi.degree().unwrap() as u32)
        .max()
        .unwrap();
    let max_deg = bound + gen_max;

    let row_monomials = monomials_up_to(d, max_deg);
    let row_index: BTreeMap<&Monomial, usize> = row_monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let multipliers = monomials_up_to(d, bound);

    // columns: the products m·g_i expanded over the row space
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for gi in basis.generators() {
        for m in &multipliers {
            let product = gi.mul_term(m, r.prime().one());
            let mut col = vec![0u64; row_monomials.len()];
            for (mon, c) in product.terms() {
                col[row_index[mon]] = c.value();
            }
            columns.push(col);
        }
    }
    let mut target = vec![0u64; row_monomials.len()];
    for (mon, c) in g.terms() {
        target[row_index[mon]] = c.value();
    }

    // row-reduce the transposed system: treat columns as vectors and
    // eliminate the target against their span
    let rows_n = row_monomials.len();
    let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot row, column)
    let inv = |a: u64| -> u64 {
        Prime::new(p).unwrap().element(a).inv().value()
    };
    for mut col in columns {
        for (pr, pv) in &pivots {
            if col[*pr] != 0 {
                let factor = col[*pr] % p;
                for k in 0..rows_n {
                    col[k] = (col[k] + (p - factor) * pv[k]) % p;
                }
            }
        }
        if let Some(lead) = (0..rows_n).find(|&k| col[k] % p != 0) {
            let scale = inv(col[lead]);
            for v in col.iter_mut() {
                *v = *v % p * scale % p;
            }
            pivots.push((lead, col));
        }
    }
    let mut t = target;
    for (pr, pv) in &pivots {
        if !t[*pr].is_multiple_of(p) {
            let factor = t[*pr] % p;
            for k in 0..rows_n {
                t[k] = (t[k] + (p - factor) * pv[k]) % p;
            }
        }
    }
    t.iter().all(|&v| v % p == 0)
}
