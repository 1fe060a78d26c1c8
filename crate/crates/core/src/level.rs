//! The level of a polynomial: the generic chain algorithm, the closed form
//! for monomials, the level-one certificate families, and the regularity
//! (Tjurina) test.

use alloc::vec::Vec;
use core::fmt;

use crate::ff::Prime;
use crate::froots::{bracket_member_gb, ideal_of_roots, RootIdeal};
use crate::ideal::{groebner, IdealBasis, MonomialOrder};
use crate::poly::{Monomial, MultiPoly, PolyError, PolyRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelError {
    ZeroPolynomial,
    ExponentOverflow,
    /// The chain did not stabilize within the proven bound; indicates a bug,
    /// never expected on valid inputs.
    IterationGuard,
}

impl From<PolyError> for LevelError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ZeroPolynomial => LevelError::ZeroPolynomial,
            PolyError::ExponentOverflow => LevelError::ExponentOverflow,
        }
    }
}

impl fmt::Display for LevelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelError::ZeroPolynomial => write!(f, "the zero polynomial has no level"),
            LevelError::ExponentOverflow => write!(f, "monomial exponent overflow"),
            LevelError::IterationGuard => {
                write!(f, "internal error: level loop exceeded its proven bound")
            }
        }
    }
}

/// How a level value was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelCertificate {
    /// The generic stabilization loop.
    GenericLoop,
    /// The closed form for monomials.
    MonomialClosedForm,
    /// One of the level-one families fired.
    LevelOne(LevelOneCertificate),
}

/// A sufficient condition for level one, together with its witness. Every
/// certificate is sound; absence of a certificate decides nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelOneCertificate {
    /// A squarefree term involves a variable private to it.
    SquarefreePrivateVariable { term: Monomial, var: usize },
    /// Every monomial of the support is squarefree.
    AllSquarefree { witness: Monomial },
    /// A homogeneous quadric that is not a unit multiple of the square of a
    /// linear form.
    Quadric,
    /// `f = Σ λ_i x_i^t` on distinct variables with `t <= min(n, p)` and
    /// `p ≡ 1 (mod t)`.
    Diagonal { t: u32 },
    /// Characteristic 2 and `f` is regular (`Tj(f) = R`).
    RegularChar2,
    /// `f` homogeneous and a basis monomial (all exponents `<= p-1`) appears
    /// in the support of `f^{p-1}`.
    BasisMonomialSupport { basis_monomial: Monomial },
    /// Some coefficient of the free-module decomposition of `f^{p-1}` is a
    /// unit.
    UnitCoefficient { basis_monomial: Monomial },
}

impl LevelOneCertificate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            LevelOneCertificate::SquarefreePrivateVariable { .. } => "squarefree-private-variable",
            LevelOneCertificate::AllSquarefree { .. } => "all-squarefree",
            LevelOneCertificate::Quadric => "quadric",
            LevelOneCertificate::Diagonal { .. } => "diagonal",
            LevelOneCertificate::RegularChar2 => "regular-char-2",
            LevelOneCertificate::BasisMonomialSupport { .. } => "basis-monomial-support",
            LevelOneCertificate::UnitCoefficient { .. } => "unit-coefficient",
        }
    }
}

/// The level of `f` together with the stabilized root ideal.
#[derive(Debug, Clone)]
pub struct LevelResult {
    level: u32,
    stabilized_ideal: RootIdeal,
    certificate: LevelCertificate,
}

impl LevelResult {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn stabilized_ideal(&self) -> &RootIdeal {
        &self.stabilized_ideal
    }

    pub fn into_stabilized_ideal(self) -> RootIdeal {
        self.stabilized_ideal
    }

    pub fn certificate(&self) -> &LevelCertificate {
        &self.certificate
    }
}

/// `⌈log_p(a)⌉` for `a >= 1`, by base-p digit length; no floating point, so
/// boundary powers `a = p^k` are exact.
pub fn ceil_log_prime(a: u32, p: Prime) -> u32 {
    if a <= 1 {
        return 0;
    }
    crate::ff::base_p_digits(a as u64 - 1, p).len() as u32
}

/// The level of `f`: the least `e >= 1` with
/// `f^{p^e-p} ∈ I_e(f^{p^e-1})^{[p^e]}`, found by the stabilization loop.
/// Halts within `max(deg f, 1)` iterations; the extra guard step turns a
/// latent bug into a loud error instead of divergence.
pub fn level_of(f: &MultiPoly) -> Result<LevelResult, LevelError> {
    if f.is_zero() {
        return Err(LevelError::ZeroPolynomial);
    }
    let ring = f.ring().clone();
    let p = ring.prime();
    let cap = f.degree().unwrap_or(0).max(1) as u32 + 1;
    let fp1 = f.pow(p.get() - 1);
    // prev = f^{p^{e-1} - 1}, starting at e = 1 with f^0 = 1
    let mut prev = ring.one();
    for e in 1..=cap {
        let fq1 = &prev.frobenius_pow(1)? * &fp1; // f^{p^e - 1}
        let root = ideal_of_roots(&fq1, e)?;
        let gb = groebner(root.ideal(), MonomialOrder::grevlex(ring.dim()), false);
        let target = prev.frobenius_pow(1)?; // f^{p^e - p}
        if bracket_member_gb(&target, &gb, e)? {
            return Ok(LevelResult {
                level: e,
                stabilized_ideal: root,
                certificate: LevelCertificate::GenericLoop,
            });
        }
        prev = fq1;
    }
    Err(LevelError::IterationGuard)
}

/// Closed form for a monomial `x^a` with the given exponent vector: level
/// `⌈log_p(max a_i)⌉ + 1` and root ideal `(Π x_i^{a_i-1})`. Zero exponents
/// drop the variable; the all-zero vector is the constant 1 with level one.
pub fn monomial_level(ring: &PolyRing, exponents: &[u32]) -> Result<LevelResult, LevelError> {
    assert_eq!(exponents.len(), ring.dim(), "exponent vector dimension");
    let p = ring.prime();
    let a = exponents.iter().copied().max().unwrap_or(0);
    let e = if a <= 1 { 1 } else { ceil_log_prime(a, p) + 1 };
    let q = p.pow_checked(e).ok_or(LevelError::ExponentOverflow)?;

    let source_mono = Monomial::new(exponents.to_vec())
        .checked_scale(q - 1)
        .ok_or(LevelError::ExponentOverflow)?;
    let source = ring.monomial(source_mono, p.one());

    let gen_exponents: Vec<u32> = exponents.iter().map(|&ai| ai.saturating_sub(1)).collect();
    let generator = ring.monomial(Monomial::new(gen_exponents), p.one());
    let ideal = IdealBasis::new(ring.clone(), alloc::vec![generator]);

    Ok(LevelResult {
        level: e,
        stabilized_ideal: RootIdeal {
            e,
            source,
            ideal,
        },
        certificate: LevelCertificate::MonomialClosedForm,
    })
}

/// Tjurina regularity: `Tj(f) = (f, ∂f/∂x_1, ..., ∂f/∂x_d) = R`.
pub fn is_regular(f: &MultiPoly) -> Result<bool, LevelError> {
    if f.is_zero() {
        return Err(LevelError::ZeroPolynomial);
    }
    let ring = f.ring().clone();
    let mut gens = alloc::vec![f.clone()];
    for v in 0..ring.dim() {
        gens.push(f.partial_derivative(v));
    }
    let tj = IdealBasis::new(ring.clone(), gens);
    let gb = groebner(&tj, MonomialOrder::grevlex(ring.dim()), false);
    Ok(gb.is_unit_ideal())
}

/// Tries the level-one families in order of increasing cost: the four pure
/// support scans, then the Tjurina test (characteristic 2), then the two
/// checks that expand `f^{p-1}`. Returns the first applicable certificate
/// with its witness, or `None`; a returned certificate implies level one,
/// absence decides nothing.
pub fn level_one_certificate(f: &MultiPoly) -> Result<Option<LevelOneCertificate>, LevelError> {
    if f.is_zero() {
        return Err(LevelError::ZeroPolynomial);
    }
    if let Some(c) = squarefree_private_variable(f) {
        return Ok(Some(c));
    }
    if let Some(c) = all_squarefree(f) {
        return Ok(Some(c));
    }
    if let Some(c) = quadric(f) {
        return Ok(Some(c));
    }
    if let Some(c) = diagonal(f) {
        return Ok(Some(c));
    }
    if f.ring().prime().get() == 2 && is_regular(f)? {
        return Ok(Some(LevelOneCertificate::RegularChar2));
    }
    let p = f.ring().prime();
    let fp1 = f.pow(p.get() - 1);
    if f.is_homogeneous() {
        let bound = (p.get() - 1) as u32;
        // descending scan: deterministic largest witness
        if let Some(mu) = fp1
            .support()
            .into_iter()
            .find(|m| m.max_exponent() <= bound)
        {
            return Ok(Some(LevelOneCertificate::BasisMonomialSupport {
                basis_monomial: mu,
            }));
        }
    }
    let dec = fp1.frobenius_decompose(1)?;
    for (mu, part) in dec.parts().iter().rev() {
        if part.is_unit() {
            return Ok(Some(LevelOneCertificate::UnitCoefficient {
                basis_monomial: mu.clone(),
            }));
        }
    }
    Ok(None)
}

fn squarefree_private_variable(f: &MultiPoly) -> Option<LevelOneCertificate> {
    let support = f.support();
    for term in &support {
        if !term.is_squarefree() {
            continue;
        }
        'vars: for (var, &e) in term.exponents().iter().enumerate() {
            if e != 1 {
                continue;
            }
            for other in &support {
                if other != term && other.exponents()[var] > 0 {
                    continue 'vars;
                }
            }
            return Some(LevelOneCertificate::SquarefreePrivateVariable {
                term: term.clone(),
                var,
            });
        }
    }
    None
}

fn all_squarefree(f: &MultiPoly) -> Option<LevelOneCertificate> {
    let support = f.support();
    if support.iter().all(|m| m.is_squarefree()) {
        // witness: a squarefree term of maximal total degree
        let witness = support
            .iter()
            .max_by_key(|m| m.total_degree())
            .cloned()
            .unwrap();
        Some(LevelOneCertificate::AllSquarefree { witness })
    } else {
        None
    }
}

/// Level one for every homogeneous quadric except unit multiples of squares
/// of linear forms (which have level two). Squareness is decided without
/// square roots by extracting a candidate `c·ℓ^2` from the coefficients.
fn quadric(f: &MultiPoly) -> Option<LevelOneCertificate> {
    if f.is_zero() || f.degree() != Some(2) || !f.is_homogeneous() {
        return None;
    }
    if is_unit_times_square_of_linear(f) {
        return None;
    }
    Some(LevelOneCertificate::Quadric)
}

fn is_unit_times_square_of_linear(f: &MultiPoly) -> bool {
    let ring = f.ring();
    let p = ring.prime();
    let d = ring.dim();
    let diag = |i: usize| {
        let mut e = alloc::vec![0u32; d];
        e[i] = 2;
        f.coeff(&Monomial::new(e))
    };
    let cross = |i: usize, j: usize| {
        let mut e = alloc::vec![0u32; d];
        e[i] = 1;
        e[j] = 1;
        f.coeff(&Monomial::new(e))
    };
    if p.get() == 2 {
        // c·ℓ^2 has no cross terms in characteristic 2; conversely any purely
        // diagonal quadric is (Σ x_i)^2 over F_2
        return f.support().iter().all(|m| m.max_exponent() == 2);
    }
    // f = c·(x_{i0} + Σ λ_j x_j)^2 forces c = diag(i0) and
    // λ_j = cross(i0, j) / (2c); verify the candidate exactly
    let i0 = match (0..d).find(|&i| !diag(i).is_zero()) {
        Some(i) => i,
        None => return false, // no diagonal entry: rank >= 2 or zero
    };
    let c = diag(i0);
    let two_c_inv = (p.element(2) * c).inv();
    let mut ell = ring.var(i0);
    for j in 0..d {
        if j == i0 {
            continue;
        }
        let lambda = cross(i0, j) * two_c_inv;
        if !lambda.is_zero() {
            ell = &ell + &ring.var(j).scale(lambda);
        }
    }
    (&ell * &ell).scale(c) == *f
}

fn diagonal(f: &MultiPoly) -> Option<LevelOneCertificate> {
    let support = f.support();
    let p = f.ring().prime().get();
    let mut t: Option<u32> = None;
    let mut vars_seen = alloc::vec![false; f.ring().dim()];
    for m in &support {
        let mut var = None;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                if var.is_some() {
                    return None; // mixed monomial
                }
                var = Some((i, e));
            }
        }
        let (i, e) = var?; // constant term: not a diagonal form
        if vars_seen[i] {
            return None;
        }
        vars_seen[i] = true;
        match t {
            None => t = Some(e),
            Some(t0) if t0 == e => {}
            Some(_) => return None,
        }
    }
    let t = t?;
    let n = support.len() as u64;
    if (t as u64) <= n.min(p) && (p - 1).is_multiple_of(t as u64) {
        Some(LevelOneCertificate::Diagonal { t })
    } else {
        None
    }
}
