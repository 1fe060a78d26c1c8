//! Plane elliptic curves over `F_p`: the Hasse-coefficient test, the level-
//! based ordinary/supersingular classification, Jacobian smoothness, and an
//! independent brute-force point-counting oracle.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ff::{FpElement, Prime};
use crate::ideal::{groebner, IdealBasis, MonomialOrder};
use crate::level::{self, LevelError};
use crate::poly::{Monomial, MultiPoly, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EcError {
    /// The short Weierstrass form is unavailable in characteristic 2 and 3.
    ShortFormSmallPrime(u64),
    /// Not a homogeneous cubic in three variables.
    WrongShape,
    /// The cubic defines a singular curve.
    Singular,
    /// The level, Hasse coefficient and trace signals disagree, or the level
    /// left {1, 2}; would falsify the classification theorem.
    ConsistencyAlarm(String),
    Level(LevelError),
}

impl From<LevelError> for EcError {
    fn from(e: LevelError) -> Self {
        EcError::Level(e)
    }
}

impl fmt::Display for EcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EcError::ShortFormSmallPrime(p) => {
                write!(f, "short Weierstrass form is invalid over F_{p}")
            }
            EcError::WrongShape => write!(f, "expected a homogeneous cubic in x, y, z"),
            EcError::Singular => write!(f, "the cubic defines a singular curve"),
            EcError::ConsistencyAlarm(msg) => write!(f, "consistency alarm: {msg}"),
            EcError::Level(e) => write!(f, "{e}"),
        }
    }
}

/// Weierstrass data for a plane cubic over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeierstrassCoefficients {
    /// `y^2 z - x^3 + a x z^2 + b z^3`, valid for `p ∉ {2, 3}`.
    Short { p: Prime, a: FpElement, b: FpElement },
    /// `y^2 z + a1 xyz + a3 y z^2 - x^3 - a2 x^2 z - a4 x z^2 - a6 z^3`.
    General {
        p: Prime,
        a1: FpElement,
        a3: FpElement,
        a2: FpElement,
        a4: FpElement,
        a6: FpElement,
    },
}

impl WeierstrassCoefficients {
    pub fn short(p: Prime, a: u64, b: u64) -> Result<Self, EcError> {
        if p.get() == 2 || p.get() == 3 {
            return Err(EcError::ShortFormSmallPrime(p.get()));
        }
        Ok(WeierstrassCoefficients::Short {
            p,
            a: p.element(a),
            b: p.element(b),
        })
    }

    pub fn general(p: Prime, a1: u64, a3: u64, a2: u64, a4: u64, a6: u64) -> Self {
        WeierstrassCoefficients::General {
            p,
            a1: p.element(a1),
            a3: p.element(a3),
            a2: p.element(a2),
            a4: p.element(a4),
            a6: p.element(a6),
        }
    }

    pub fn prime(&self) -> Prime {
        match self {
            WeierstrassCoefficients::Short { p, .. } => *p,
            WeierstrassCoefficients::General { p, .. } => *p,
        }
    }

    pub fn coefficient_values(&self) -> Vec<u64> {
        match self {
            WeierstrassCoefficients::Short { a, b, .. } => alloc::vec![a.value(), b.value()],
            WeierstrassCoefficients::General {
                a1, a3, a2, a4, a6, ..
            } => alloc::vec![a1.value(), a3.value(), a2.value(), a4.value(), a6.value()],
        }
    }
}

/// The ring `F_p[x, y, z]` the curves live in.
pub fn curve_ring(p: Prime) -> PolyRing {
    PolyRing::new(p, &["x", "y", "z"])
}

/// The homogeneous cubic attached to the Weierstrass data.
pub fn cubic_of(w: &WeierstrassCoefficients) -> MultiPoly {
    let p = w.prime();
    let ring = curve_ring(p);
    let m = |x: u32, y: u32, z: u32| Monomial::new(alloc::vec![x, y, z]);
    match w {
        WeierstrassCoefficients::Short { a, b, .. } => ring.from_terms([
            (m(0, 2, 1), p.one()),
            (m(3, 0, 0), -p.one()),
            (m(1, 0, 2), *a),
            (m(0, 0, 3), *b),
        ]),
        WeierstrassCoefficients::General {
            a1, a3, a2, a4, a6, ..
        } => ring.from_terms([
            (m(0, 2, 1), p.one()),
            (m(1, 1, 1), *a1),
            (m(0, 1, 2), *a3),
            (m(3, 0, 0), -p.one()),
            (m(2, 0, 1), -*a2),
            (m(1, 0, 2), -*a4),
            (m(0, 0, 3), -*a6),
        ]),
    }
}

fn check_cubic_shape(f: &MultiPoly) -> Result<(), EcError> {
    if f.ring().dim() != 3 || f.is_zero() || f.degree() != Some(3) || !f.is_homogeneous() {
        return Err(EcError::WrongShape);
    }
    Ok(())
}

/// Smoothness via the Jacobian ideal: the curve is smooth iff `x^7`, `y^7`
/// and `z^7` all reduce to zero against a Gröbner basis of
/// `(f, ∂f/∂x, ∂f/∂y, ∂f/∂z)`, i.e. the singular locus in `P^2` is empty.
pub fn is_smooth(f: &MultiPoly) -> Result<bool, EcError> {
    check_cubic_shape(f)?;
    let ring = f.ring().clone();
    let gens = alloc::vec![
        f.clone(),
        f.partial_derivative(0),
        f.partial_derivative(1),
        f.partial_derivative(2),
    ];
    let jac = IdealBasis::new(ring.clone(), gens);
    let gb = groebner(&jac, MonomialOrder::grevlex(3), false);
    for var in 0..3 {
        let mut exps = alloc::vec![0u32; 3];
        exps[var] = 7;
        let power = ring.monomial(Monomial::new(exps), ring.prime().one());
        if !gb.contains(&power) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reads the coefficient of `(xyz)^{p-1}` in `f^{p-1}`; the curve is
/// ordinary exactly when it is nonzero.
pub fn hasse_ordinary(f: &MultiPoly) -> Result<(bool, FpElement), EcError> {
    check_cubic_shape(f)?;
    let p = f.ring().prime();
    let fp1 = f
        .power_q_minus_one(1)
        .expect("nonzero cubic was checked above");
    let e = (p.get() - 1) as u32;
    let coeff = fp1.coeff(&Monomial::new(alloc::vec![e, e, e]));
    Ok((!coeff.is_zero(), coeff))
}

/// Exhaustive enumeration of the projective points of the cubic over `F_p`:
/// returns `(#C(F_p), a_p = p + 1 - #C(F_p))`. Rejects singular input.
pub fn point_count_trace(w: &WeierstrassCoefficients) -> Result<(u64, i64), EcError> {
    let f = cubic_of(w);
    if !is_smooth(&f)? {
        return Err(EcError::Singular);
    }
    let p = w.prime();
    let one = p.one();
    let zero = p.zero();
    let mut count = 0u64;
    // affine chart (x : y : 1)
    for x in 0..p.get() {
        for y in 0..p.get() {
            if f.eval(&[p.element(x), p.element(y), one]).is_zero() {
                count += 1;
            }
        }
    }
    // line at infinity (x : 1 : 0), then (1 : 0 : 0)
    for x in 0..p.get() {
        if f.eval(&[p.element(x), one, zero]).is_zero() {
            count += 1;
        }
    }
    if f.eval(&[one, zero, zero]).is_zero() {
        count += 1;
    }
    let trace = p.get() as i64 + 1 - count as i64;
    Ok((count, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Ordinary,
    Supersingular,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Ordinary => write!(f, "ordinary"),
            CurveKind::Supersingular => write!(f, "supersingular"),
        }
    }
}

/// Classification evidence: kind, level, Hasse coefficient, and (when
/// requested) the point count and trace from the independent oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClassification {
    pub kind: CurveKind,
    pub level: u32,
    pub hasse_coefficient: FpElement,
    pub trace: Option<i64>,
    pub count: Option<u64>,
}

/// Classifies a smooth curve by its level, cross-checking the Hasse
/// coefficient and, on request, the point-counting trace. Any disagreement
/// raises a consistency alarm instead of returning a guess.
pub fn classify(
    w: &WeierstrassCoefficients,
    with_trace: bool,
) -> Result<CurveClassification, EcError> {
    let f = cubic_of(w);
    if !is_smooth(&f)? {
        return Err(EcError::Singular);
    }
    let (ordinary_h, coeff) = hasse_ordinary(&f)?;
    let level = level::level_of(&f)?.level();
    if level != 1 && level != 2 {
        return Err(EcError::ConsistencyAlarm(alloc::format!(
            "level {level} outside {{1, 2}} for a smooth cubic"
        )));
    }
    if (level == 1) != ordinary_h {
        return Err(EcError::ConsistencyAlarm(alloc::format!(
            "level {level} disagrees with Hasse coefficient {}",
            coeff.value()
        )));
    }
    let (count, trace) = if with_trace {
        let (c, t) = point_count_trace(w)?;
        let supersingular_t = t.rem_euclid(w.prime().get() as i64) == 0;
        if supersingular_t != (level == 2) {
            return Err(EcError::ConsistencyAlarm(alloc::format!(
                "level {level} disagrees with trace {t}"
            )));
        }
        (Some(c), Some(t))
    } else {
        (None, None)
    };
    Ok(CurveClassification {
        kind: if level == 1 {
            CurveKind::Ordinary
        } else {
            CurveKind::Supersingular
        },
        level,
        hasse_coefficient: coeff,
        trace,
        count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanForm {
    Short,
    General,
}

/// All coefficient tuples for the requested form, in lexicographic order.
pub fn coefficient_grid(
    p: Prime,
    form: ScanForm,
) -> Result<Vec<WeierstrassCoefficients>, EcError> {
    let n = p.get();
    match form {
        ScanForm::Short => {
            if n == 2 || n == 3 {
                return Err(EcError::ShortFormSmallPrime(n));
            }
            let mut grid = Vec::with_capacity((n * n) as usize);
            for a in 0..n {
                for b in 0..n {
                    grid.push(WeierstrassCoefficients::short(p, a, b)?);
                }
            }
            Ok(grid)
        }
        ScanForm::General => {
            let mut grid = Vec::new();
            for a1 in 0..n {
                for a3 in 0..n {
                    for a2 in 0..n {
                        for a4 in 0..n {
                            for a6 in 0..n {
                                grid.push(WeierstrassCoefficients::general(
                                    p, a1, a3, a2, a4, a6,
                                ));
                            }
                        }
                    }
                }
            }
            Ok(grid)
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub coefficients: WeierstrassCoefficients,
    pub class: CurveClassification,
}

#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub p: Prime,
    pub form: ScanForm,
    pub rows: Vec<ScanRow>,
    pub ordinary: usize,
    pub supersingular: usize,
    pub singular_skipped: usize,
}

/// Folds per-tuple classification results into a summary; singular tuples
/// are skipped and counted, any other failure propagates.
pub fn summarize_rows(
    p: Prime,
    form: ScanForm,
    results: Vec<(WeierstrassCoefficients, Result<CurveClassification, EcError>)>,
) -> Result<ScanSummary, EcError> {
    let mut rows = Vec::new();
    let mut ordinary = 0;
    let mut supersingular = 0;
    let mut singular_skipped = 0;
    for (w, r) in results {
        match r {
            Ok(class) => {
                match class.kind {
                    CurveKind::Ordinary => ordinary += 1,
                    CurveKind::Supersingular => supersingular += 1,
                }
                rows.push(ScanRow {
                    coefficients: w,
                    class,
                });
            }
            Err(EcError::Singular) => singular_skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(ScanSummary {
        p,
        form,
        rows,
        ordinary,
        supersingular,
        singular_skipped,
    })
}

/// Classifies every coefficient tuple of the form over `F_p`, with traces;
/// row order follows the coefficient enumeration.
pub fn scan_field(p: Prime, form: ScanForm) -> Result<ScanSummary, EcError> {
    let grid = coefficient_grid(p, form)?;
    let results = grid
        .into_iter()
        .map(|w| {
            let r = classify(&w, true);
            (w, r)
        })
        .collect();
    summarize_rows(p, form, results)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn cubic_of_examples() {
        // short (0,0): y^2 z - x^3
        let w = WeierstrassCoefficients::short(p(5), 0, 0).unwrap();
        let f = cubic_of(&w);
        let r = f.ring().clone();
        let expected = r.from_terms([
            (Monomial::new(alloc::vec![0, 2, 1]), p(5).one()),
            (Monomial::new(alloc::vec![3, 0, 0]), -p(5).one()),
        ]);
        assert_eq!(f, expected);

        // general (0,1,0,0,0) over F_2: x^3 + y^2 z + y z^2
        let w = WeierstrassCoefficients::general(p(2), 0, 1, 0, 0, 0);
        let f = cubic_of(&w);
        let r = f.ring().clone();
        let expected = r.from_terms([
            (Monomial::new(alloc::vec![3, 0, 0]), p(2).one()),
            (Monomial::new(alloc::vec![0, 2, 1]), p(2).one()),
            (Monomial::new(alloc::vec![0, 1, 2]), p(2).one()),
        ]);
        assert_eq!(f, expected);

        // short (-1, 0) over F_5: y^2 z - x^3 - x z^2
        let w = WeierstrassCoefficients::short(p(5), 4, 0).unwrap();
        let f = cubic_of(&w);
        let r = f.ring().clone();
        let expected = r.from_terms([
            (Monomial::new(alloc::vec![0, 2, 1]), p(5).one()),
            (Monomial::new(alloc::vec![3, 0, 0]), -p(5).one()),
            (Monomial::new(alloc::vec![1, 0, 2]), -p(5).one()),
        ]);
        assert_eq!(f, expected);

        assert!(WeierstrassCoefficients::short(p(2), 0, 0).is_err());
        assert!(WeierstrassCoefficients::short(p(3), 1, 1).is_err());
    }

    #[test]
    fn smoothness_examples() {
        // the cusp y^2 z - x^3 is singular for any p
        for &q in &[2u64, 5, 7] {
            let ring = curve_ring(p(q));
            let f = ring.from_terms([
                (Monomial::new(alloc::vec![0, 2, 1]), p(q).one()),
                (Monomial::new(alloc::vec![3, 0, 0]), -p(q).one()),
            ]);
            assert!(!is_smooth(&f).unwrap(), "p={q}");
        }
        // the table curve over F_2 is smooth
        let f = cubic_of(&WeierstrassCoefficients::general(p(2), 0, 1, 0, 0, 0));
        assert!(is_smooth(&f).unwrap());
        // y^2 z - x^3 - x z^2 over F_5 is smooth
        let f = cubic_of(&WeierstrassCoefficients::short(p(5), 4, 0).unwrap());
        assert!(is_smooth(&f).unwrap());
        // wrong shape errors
        let r = curve_ring(p(5));
        assert_eq!(is_smooth(&r.var(0)).unwrap_err(), EcError::WrongShape);
    }

    #[test]
    fn hasse_examples() {
        // both table curves are supersingular: zero Hasse coefficient
        let f2 = cubic_of(&WeierstrassCoefficients::general(p(2), 0, 1, 0, 0, 0));
        let (ord, c) = hasse_ordinary(&f2).unwrap();
        assert!(!ord);
        assert!(c.is_zero());

        let f3 = cubic_of(&WeierstrassCoefficients::general(p(3), 0, 0, 0, 2, 0));
        let (ord, c) = hasse_ordinary(&f3).unwrap();
        assert!(!ord);
        assert!(c.is_zero());

        // p = 2 with an xyz term: f^{p-1} = f contains xyz
        let f = cubic_of(&WeierstrassCoefficients::general(p(2), 1, 0, 0, 0, 1));
        let (ord, c) = hasse_ordinary(&f).unwrap();
        assert!(ord);
        assert_eq!(c.value(), 1);
    }

    #[test]
    fn point_count_examples() {
        // y^2 z - x^3 - x z^2 (a = -1), i.e. y^2 = x^3 + x over F_5:
        // 4 points, trace 2, ordinary
        let w = WeierstrassCoefficients::short(p(5), 4, 0).unwrap();
        let (count, trace) = point_count_trace(&w).unwrap();
        assert_eq!(count, 4);
        assert_eq!(trace, 2);
        assert_ne!(trace.rem_euclid(5), 0);

        // table curves: a_p ≡ 0 mod p
        let w2 = WeierstrassCoefficients::general(p(2), 0, 1, 0, 0, 0);
        let (_, t2) = point_count_trace(&w2).unwrap();
        assert_eq!(t2.rem_euclid(2), 0);
        let w3 = WeierstrassCoefficients::general(p(3), 0, 0, 0, 2, 0);
        let (_, t3) = point_count_trace(&w3).unwrap();
        assert_eq!(t3.rem_euclid(3), 0);

        // singular input is rejected
        let cusp = WeierstrassCoefficients::short(p(5), 0, 0).unwrap();
        assert_eq!(point_count_trace(&cusp).unwrap_err(), EcError::Singular);
    }

    #[test]
    fn classify_examples() {
        let w2 = WeierstrassCoefficients::general(p(2), 0, 1, 0, 0, 0);
        let c = classify(&w2, true).unwrap();
        assert_eq!(c.kind, CurveKind::Supersingular);
        assert_eq!(c.level, 2);

        let w3 = WeierstrassCoefficients::general(p(3), 0, 0, 0, 2, 0);
        let c = classify(&w3, true).unwrap();
        assert_eq!(c.kind, CurveKind::Supersingular);
        assert_eq!(c.level, 2);

        let w5 = WeierstrassCoefficients::short(p(5), 4, 0).unwrap();
        let c = classify(&w5, true).unwrap();
        assert_eq!(c.kind, CurveKind::Ordinary);
        assert_eq!(c.level, 1);
        assert!(!c.hasse_coefficient.is_zero());
        assert_ne!(c.trace.unwrap().rem_euclid(5), 0);
    }

    #[test]
    fn scan_small_fields() {
        // every smooth short-form curve over F_5 has level 1 or 2 with all
        // three signals agreeing (classify alarms otherwise), and at least
        // one supersingular curve exists
        let s = scan_field(p(5), ScanForm::Short).unwrap();
        assert_eq!(s.rows.len() + s.singular_skipped, 25);
        assert!(s.supersingular >= 1);
        for row in &s.rows {
            assert!(row.class.level == 1 || row.class.level == 2);
        }
        // general scans over F_2: 32 tuples
        let g = scan_field(p(2), ScanForm::General).unwrap();
        assert_eq!(g.rows.len() + g.singular_skipped, 32);
        assert!(g.supersingular >= 1);
    }

    #[test]
    fn unit_scaling_invariance() {
        // level(u·f) = level(f) for units u
        let f = cubic_of(&WeierstrassCoefficients::short(p(5), 4, 0).unwrap());
        let base = level::level_of(&f).unwrap().level();
        for u in 2..5 {
            let scaled = f.scale(p(5).element(u));
            assert_eq!(level::level_of(&scaled).unwrap().level(), base);
        }
    }
}
