//! The ideal of `p^e`-th roots `I_e(g)`, bracket-power membership through
//! minimality, cofactor extraction of bracket-power representations, and the
//! non-F-pure ideal.

use alloc::vec::Vec;
use core::fmt;

use crate::ideal::{groebner, normal_form, GroebnerBasis, IdealBasis, MonomialOrder};
use crate::level::{self, LevelError};
use crate::poly::{MultiPoly, PolyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrootsError {
    /// `express_in_bracket_power` was called on a non-member.
    NotInBracketPower,
    Poly(PolyError),
}

impl From<PolyError> for FrootsError {
    fn from(e: PolyError) -> Self {
        FrootsError::Poly(e)
    }
}

impl fmt::Display for FrootsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrootsError::NotInBracketPower => {
                write!(f, "polynomial is not in the requested bracket power")
            }
            FrootsError::Poly(e) => write!(f, "{e}"),
        }
    }
}

/// `I_e(g)`: the smallest ideal `J` with `g ∈ J^{[p^e]}`, held as its reduced
/// Gröbner basis generators together with the decomposed source polynomial.
#[derive(Debug, Clone)]
pub struct RootIdeal {
    pub(crate) e: u32,
    pub(crate) source: MultiPoly,
    pub(crate) ideal: IdealBasis,
}

impl RootIdeal {
    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn source(&self) -> &MultiPoly {
        &self.source
    }

    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    pub fn generators(&self) -> &[MultiPoly] {
        self.ideal.generators()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators().len() == 1 && self.generators()[0].is_unit()
    }
}

/// Deduplicated monic copies of the decomposition parts of `g` at `e`.
fn monic_parts(g: &MultiPoly, e: u32) -> Result<Vec<MultiPoly>, PolyError> {
    let dec = g.frobenius_decompose(e)?;
    let mut parts: Vec<MultiPoly> = dec.parts().values().map(|p| p.monic()).collect();
    parts.sort_by(|a, b| a.cmp_structure(b));
    parts.dedup();
    Ok(parts)
}

/// `I_e(g)` generated by the free-module decomposition parts of `g`, returned
/// with reduced Gröbner basis generators. `g = 0` gives the zero ideal.
pub fn ideal_of_roots(g: &MultiPoly, e: u32) -> Result<RootIdeal, PolyError> {
    let ring = g.ring().clone();
    if g.is_zero() {
        return Ok(RootIdeal {
            e,
            source: g.clone(),
            ideal: IdealBasis::new(ring, Vec::new()),
        });
    }
    let parts = monic_parts(g, e)?;
    let raw = IdealBasis::new(ring.clone(), parts);
    let gb = groebner(&raw, MonomialOrder::grevlex(ring.dim()), false);
    Ok(RootIdeal {
        e,
        source: g.clone(),
        ideal: IdealBasis::new(ring, gb.elements().to_vec()),
    })
}

/// `g ∈ J^{[p^e]}`, decided through the minimality of the root ideal:
/// `g ∈ J^{[p^e]}` iff `I_e(g) ⊆ J`, checked generator-wise. This keeps all
/// Gröbner work at the degree of `J` instead of `p^e` times it.
pub fn bracket_member(g: &MultiPoly, j: &IdealBasis, e: u32) -> Result<bool, PolyError> {
    let gb = groebner(j, MonomialOrder::grevlex(j.ring().dim()), false);
    bracket_member_gb(g, &gb, e)
}

pub(crate) fn bracket_member_gb(
    g: &MultiPoly,
    gb: &GroebnerBasis,
    e: u32,
) -> Result<bool, PolyError> {
    if g.is_zero() {
        return Ok(true);
    }
    for part in monic_parts(g, e)? {
        if !gb.contains(&part) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Writes `g = Σ α_i · c_i^{p^e}` over the generators `c_i` of `J`.
///
/// Each decomposition coefficient `b_β` of `g` is reduced to zero against the
/// cofactor-tracked Gröbner basis of `J`; additivity of Frobenius then lifts
/// the cofactors: `α_i = Σ_β (u_{βi})^{p^e}·x^β`. Fails when `g` is not in
/// `J^{[p^e]}`.
pub fn express_in_bracket_power(
    g: &MultiPoly,
    j: &IdealBasis,
    e: u32,
) -> Result<Vec<MultiPoly>, FrootsError> {
    let gb = groebner(j, MonomialOrder::grevlex(j.ring().dim()), true);
    express_in_bracket_power_gb(g, &gb, e)
}

pub(crate) fn express_in_bracket_power_gb(
    g: &MultiPoly,
    gb: &GroebnerBasis,
    e: u32,
) -> Result<Vec<MultiPoly>, FrootsError> {
    let ring = g.ring().clone();
    let cof = gb
        .cofactors()
        .expect("express_in_bracket_power needs a cofactor-tracked basis");
    let n = gb.generators().len();
    let mut alphas = alloc::vec![ring.zero(); n];
    let dec = g.frobenius_decompose(e)?;
    for (beta, b) in dec.parts() {
        let (rem, quots) = normal_form(b, gb, true);
        if !rem.is_zero() {
            return Err(FrootsError::NotInBracketPower);
        }
        let quots = quots.unwrap();
        // v_j = Σ_i quots_i·cof[i][j], then α_j += v_j^{p^e}·x^β
        for jdx in 0..n {
            let mut v = ring.zero();
            for (i, q) in quots.iter().enumerate() {
                if q.is_zero() || cof[i][jdx].is_zero() {
                    continue;
                }
                v = &v + &(q * &cof[i][jdx]);
            }
            if v.is_zero() {
                continue;
            }
            let lifted = v.frobenius_pow(e)?.mul_term(beta, ring.prime().one());
            alphas[jdx] = &alphas[jdx] + &lifted;
        }
    }
    debug_assert!(
        {
            let mut acc = ring.zero();
            for (a, c) in alphas.iter().zip(gb.generators()) {
                acc = &acc + &(a * &c.frobenius_pow(e)?);
            }
            acc == *g
        },
        "bracket-power representation must reassemble exactly"
    );
    Ok(alphas)
}

/// The non-F-pure ideal of `f`: the stabilized root ideal `I_e(f^{p^e-1})`
/// at `e = level(f)`.
pub fn non_f_pure_ideal(f: &MultiPoly) -> Result<RootIdeal, LevelError> {
    Ok(level::level_of(f)?.into_stabilized_ideal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Prime;
    use crate::ideal::{contains, ideal_equal};
    use crate::poly::{Monomial, PolyRing};

    fn ring(p: u64, vars: &[&str]) -> PolyRing {
        PolyRing::new(Prime::new(p).unwrap(), vars)
    }

    fn poly(r: &PolyRing, terms: &[(i64, &[u32])]) -> MultiPoly {
        r.from_terms(terms.iter().map(|(c, exps)| {
            (
                Monomial::new(exps.to_vec()),
                r.prime().element_from_i64(*c),
            )
        }))
    }

    #[test]
    fn roots_of_monomial_power() {
        // I_4((x^3 y^5 z^7 w^4)^{2^4-1}) = (x^2 y^4 z^6 w^3)
        let r = ring(2, &["x", "y", "z", "w"]);
        let f = poly(&r, &[(1, &[3, 5, 7, 4])]);
        let g = f.power_q_minus_one(4).unwrap();
        let root = ideal_of_roots(&g, 4).unwrap();
        assert_eq!(root.generators(), &[poly(&r, &[(1, &[2, 4, 6, 3])])]);
    }

    #[test]
    fn roots_general_monomials() {
        // I_e((x^a)^{p^e-1}) = (prod x^{a_i - 1}) at e = ceil(log_p max a) + 1
        for &(p, exps, e) in &[
            (2u64, [3u32, 1, 2], 3u32),
            (3, [2, 2, 1], 2),
            (5, [5, 1, 1], 2),
            (2, [1, 1, 1], 1),
        ] {
            let r = ring(p, &["x", "y", "z"]);
            let f = poly(&r, &[(1, &exps)]);
            let g = f.power_q_minus_one(e).unwrap();
            let root = ideal_of_roots(&g, e).unwrap();
            let expected = poly(&r, &[(1, &[exps[0] - 1, exps[1] - 1, exps[2] - 1])]);
            let expected = if expected.is_unit() { r.one() } else { expected };
            assert_eq!(root.generators(), &[expected], "p={p} exps={exps:?}");
        }
    }

    #[test]
    fn roots_of_two_by_two_determinant() {
        // I_1(xw - yz) over F_2 is the unit ideal
        let r = ring(2, &["x", "y", "z", "w"]);
        let f = poly(&r, &[(1, &[1, 0, 0, 1]), (-1, &[0, 1, 1, 0])]);
        let root = ideal_of_roots(&f, 1).unwrap();
        assert!(root.is_unit_ideal());
    }

    #[test]
    fn roots_of_zero() {
        let r = ring(3, &["x"]);
        let root = ideal_of_roots(&r.zero(), 2).unwrap();
        assert!(root.ideal().is_zero_ideal());
    }

    #[test]
    fn bracket_member_examples() {
        let r = ring(5, &["x", "y", "z"]);
        let unit = IdealBasis::new(r.clone(), alloc::vec![r.one()]);
        assert!(bracket_member(&r.one(), &unit, 1).unwrap());

        // cusp at s = 2: (y^2 z - x^3)^{p^2 - p} ∈ (x, y)^{[p^2]} for p = 5
        let f = poly(&r, &[(1, &[0, 2, 1]), (-1, &[3, 0, 0])]);
        let xy = IdealBasis::new(r.clone(), alloc::vec![r.var(0), r.var(1)]);
        let g = f.power_q_minus_one(1).unwrap().frobenius_pow(1).unwrap(); // f^{p^2-p}
        assert!(bracket_member(&g, &xy, 2).unwrap());

        // but 1 = f^{p-p} is not in (x^p, y^p)
        assert!(!bracket_member(&r.one(), &xy, 1).unwrap());
    }

    #[test]
    fn express_identity_case() {
        let r = ring(3, &["x"]);
        let unit = IdealBasis::new(r.clone(), alloc::vec![r.one()]);
        let alphas = express_in_bracket_power(&r.one(), &unit, 1).unwrap();
        assert_eq!(alphas, alloc::vec![r.one()]);
    }

    #[test]
    fn express_reassembles() {
        let r = ring(2, &["x", "y", "z", "w"]);
        // f = x^3+y^3+z^3+w^3: f^2 in (x,y,z,w)^{[4]}
        let f = poly(
            &r,
            &[
                (1, &[3, 0, 0, 0]),
                (1, &[0, 3, 0, 0]),
                (1, &[0, 0, 3, 0]),
                (1, &[0, 0, 0, 3]),
            ],
        );
        let j = IdealBasis::new(
            r.clone(),
            alloc::vec![r.var(0), r.var(1), r.var(2), r.var(3)],
        );
        let g = &f * &f;
        let alphas = express_in_bracket_power(&g, &j, 2).unwrap();
        let mut acc = r.zero();
        for (a, c) in alphas.iter().zip(j.generators()) {
            acc = &acc + &(a * &c.frobenius_pow(2).unwrap());
        }
        assert_eq!(acc, g);
        // the coefficient column is x_i^2 against the generator x_i
        for (a, c) in alphas.iter().zip(j.generators()) {
            assert_eq!(a, &(c * c));
        }
    }

    #[test]
    fn express_rejects_non_member() {
        let r = ring(2, &["x", "y"]);
        let j = IdealBasis::new(r.clone(), alloc::vec![r.var(0)]);
        let err = express_in_bracket_power(&r.var(1), &j, 1);
        assert_eq!(err.unwrap_err(), FrootsError::NotInBracketPower);
    }

    #[test]
    fn non_f_pure_ideal_goldens() {
        let r = ring(2, &["x", "y", "z", "w"]);
        let f = poly(&r, &[(1, &[3, 5, 7, 4])]);
        let nfp = non_f_pure_ideal(&f).unwrap();
        assert_eq!(nfp.generators(), &[poly(&r, &[(1, &[2, 4, 6, 3])])]);

        let cubes = poly(
            &r,
            &[
                (1, &[3, 0, 0, 0]),
                (1, &[0, 3, 0, 0]),
                (1, &[0, 0, 3, 0]),
                (1, &[0, 0, 0, 3]),
            ],
        );
        let nfp = non_f_pure_ideal(&cubes).unwrap();
        let vars = IdealBasis::new(
            r.clone(),
            alloc::vec![r.var(0), r.var(1), r.var(2), r.var(3)],
        );
        assert!(ideal_equal(nfp.ideal(), &vars));

        let det = poly(&r, &[(1, &[1, 0, 0, 1]), (-1, &[0, 1, 1, 0])]);
        let nfp = non_f_pure_ideal(&det).unwrap();
        assert!(nfp.is_unit_ideal());
    }

    #[test]
    fn minimality_on_constructed_members() {
        // g = sum h_i * gen_i^{p^e} is in J^{[p^e]}, so I_e(g) ⊆ J
        let r = ring(3, &["x", "y"]);
        let g1 = poly(&r, &[(1, &[1, 0]), (2, &[0, 1])]);
        let g2 = poly(&r, &[(1, &[0, 2]), (1, &[0, 0])]);
        let j = IdealBasis::new(r.clone(), alloc::vec![g1.clone(), g2.clone()]);
        let h1 = poly(&r, &[(2, &[2, 1])]);
        let h2 = poly(&r, &[(1, &[1, 1]), (2, &[0, 0])]);
        for e in 1..=2u32 {
            let g = &(&h1 * &g1.frobenius_pow(e).unwrap())
                + &(&h2 * &g2.frobenius_pow(e).unwrap());
            assert!(bracket_member(&g, &j, e).unwrap());
            let root = ideal_of_roots(&g, e).unwrap();
            for c in root.generators() {
                assert!(contains(&j, c));
            }
        }
    }
}
