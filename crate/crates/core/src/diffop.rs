//! Differential operators in the filtration layer `D_R^{(e)}`: sums of
//! sandwich terms `left · D^{(t)}( right · _ )` built from divided powers,
//! the dual-basis operators, and the constructions that produce an operator
//! associated with a polynomial (`δ(f^{p^e-1}) = f^{p^e-p}`).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ff::{binom_mod_p, FpElement};
use crate::froots::{express_in_bracket_power_gb, FrootsError};
use crate::ideal::{groebner, GroebnerBasis, IdealBasis, MonomialOrder};
use crate::level::{self, LevelError};
use crate::poly::{Monomial, MultiPoly, PolyError, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffopError {
    ZeroPolynomial,
    /// A divided-power order exceeds `p^e - 1` for the declared filtration
    /// index.
    OrderOutOfRange,
    /// `fraction_operator` requires level one; carries the actual level.
    LevelNotOne(u32),
    /// Linear forms passed to `linear_forms_operator` must be independent,
    /// at most one per variable.
    DependentForms,
    /// The mandatory re-application check failed; signals a bug.
    VerificationFailed,
    Level(LevelError),
    Froots(FrootsError),
    Poly(PolyError),
}

impl From<LevelError> for DiffopError {
    fn from(e: LevelError) -> Self {
        DiffopError::Level(e)
    }
}

impl From<FrootsError> for DiffopError {
    fn from(e: FrootsError) -> Self {
        DiffopError::Froots(e)
    }
}

impl From<PolyError> for DiffopError {
    fn from(e: PolyError) -> Self {
        DiffopError::Poly(e)
    }
}

impl fmt::Display for DiffopError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffopError::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            DiffopError::OrderOutOfRange => {
                write!(f, "divided-power order exceeds p^e - 1")
            }
            DiffopError::LevelNotOne(e) => {
                write!(f, "fraction operator needs level one, level is {e}")
            }
            DiffopError::DependentForms => write!(f, "linear forms must be independent"),
            DiffopError::VerificationFailed => {
                write!(f, "internal error: operator failed its action check")
            }
            DiffopError::Level(e) => write!(f, "{e}"),
            DiffopError::Froots(e) => write!(f, "{e}"),
            DiffopError::Poly(e) => write!(f, "{e}"),
        }
    }
}

/// One sandwich `left · D^{(orders)}( right · _ )`, where `D^{(t)}` is the
/// product of divided powers `D_{x_i, t_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTerm {
    left: MultiPoly,
    orders: Vec<u32>,
    right: MultiPoly,
}

impl OpTerm {
    pub fn new(left: MultiPoly, orders: Vec<u32>, right: MultiPoly) -> Self {
        assert_eq!(orders.len(), left.ring().dim(), "orders dimension");
        assert!(left.ring() == right.ring(), "ring mismatch");
        OpTerm {
            left,
            orders,
            right,
        }
    }

    pub fn left(&self) -> &MultiPoly {
        &self.left
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn right(&self) -> &MultiPoly {
        &self.right
    }
}

/// A finite sum of sandwich terms lying in `D_R^{(e)}`: every order is at
/// most `p^e - 1`, which is exactly `R^{p^e}`-linearity of the action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator {
    ring: PolyRing,
    e: u32,
    terms: Vec<OpTerm>,
}

impl DiffOperator {
    pub fn new(ring: PolyRing, e: u32, terms: Vec<OpTerm>) -> Result<Self, DiffopError> {
        let q = ring
            .prime()
            .pow_checked(e)
            .ok_or(DiffopError::OrderOutOfRange)?;
        for t in &terms {
            assert!(t.left.ring() == &ring, "term from a different ring");
            if t.orders.iter().any(|&o| o as u64 > q - 1) {
                return Err(DiffopError::OrderOutOfRange);
            }
        }
        Ok(DiffOperator {
            ring: ring.clone(),
            e,
            terms: canonicalize(terms),
        })
    }

    /// The identity operator (filtration index 0).
    pub fn identity(ring: PolyRing) -> Self {
        let d = ring.dim();
        let term = OpTerm::new(ring.one(), alloc::vec![0; d], ring.one());
        DiffOperator {
            ring,
            e: 0,
            terms: alloc::vec![term],
        }
    }

    /// Multiplication by `g` as an operator.
    pub fn multiplication(g: &MultiPoly) -> Self {
        let ring = g.ring().clone();
        let d = ring.dim();
        let term = OpTerm::new(ring.one(), alloc::vec![0; d], g.clone());
        DiffOperator {
            ring,
            e: 0,
            terms: alloc::vec![term],
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn terms(&self) -> &[OpTerm] {
        &self.terms
    }

    pub fn scale(&self, c: FpElement) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| OpTerm::new(t.left.scale(c), t.orders.clone(), t.right.clone()))
            .collect();
        DiffOperator {
            ring: self.ring.clone(),
            e: self.e,
            terms: canonicalize(terms),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "ring mismatch");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        DiffOperator {
            ring: self.ring.clone(),
            e: self.e.max(other.e),
            terms: canonicalize(terms),
        }
    }

    /// Action on `g`: `Σ left · D^{(orders)}( right · g )`.
    pub fn apply(&self, g: &MultiPoly) -> MultiPoly {
        assert!(g.ring() == &self.ring, "ring mismatch");
        let mut acc = self.ring.zero();
        for t in &self.terms {
            let mut h = &t.right * g;
            for (var, &ord) in t.orders.iter().enumerate() {
                if ord > 0 && !h.is_zero() {
                    h = h.divided_derivative(var, ord);
                }
            }
            if !h.is_zero() {
                acc = &acc + &(&t.left * &h);
            }
        }
        acc
    }

    /// Operator product: `(self ∘ other)(g) = self(other(g))`, normalized
    /// back into sandwich form with the divided-power Leibniz rule. Same-
    /// variable order merges `D_{x,s}D_{x,t} = C(s+t,t)·D_{x,s+t}` either
    /// vanish or stay below `p^e` (no base-p carries when the binomial is
    /// nonzero), so the filtration index is `max(self.e, other.e)`.
    pub fn compose(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "ring mismatch");
        let ring = &self.ring;
        let p = ring.prime();
        let mut out: Vec<OpTerm> = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let u = &a.right * &b.left;
                if u.is_zero() {
                    continue;
                }
                if b.orders.iter().all(|&o| o == 0) {
                    out.push(OpTerm::new(
                        a.left.clone(),
                        a.orders.clone(),
                        &u * &b.right,
                    ));
                    continue;
                }
                // Leibniz: D^{(t_a)}(u·v) = Σ_{r+s=t_a} D^{(r)}(u)·D^{(s)}(v)
                for (r, du) in nonzero_divided_derivatives(&u, &a.orders) {
                    let mut coeff = p.one();
                    let mut orders = Vec::with_capacity(a.orders.len());
                    for ((&ta, &ri), &t) in a.orders.iter().zip(&r).zip(&b.orders) {
                        let s = ta - ri;
                        coeff = coeff * binom_mod_p(s as u64 + t as u64, s as u64, p);
                        if coeff.is_zero() {
                            break;
                        }
                        orders.push(s + t);
                    }
                    if coeff.is_zero() {
                        continue;
                    }
                    out.push(OpTerm::new(
                        &a.left * &du.scale(coeff),
                        orders,
                        b.right.clone(),
                    ));
                }
            }
        }
        DiffOperator {
            ring: ring.clone(),
            e: self.e.max(other.e),
            terms: canonicalize(out),
        }
    }

    /// Deterministic text form: one clause `left * D[t_1,...,t_d] * right`
    /// per term, joined by ` + `; multipliers with several terms are
    /// parenthesized so the rendering parses back unambiguously.
    pub fn canonical_text(&self) -> String {
        if self.terms.is_empty() {
            let zeros: Vec<String> = (0..self.ring.dim()).map(|_| "0".into()).collect();
            return alloc::format!("0 * D[{}] * 1", zeros.join(","));
        }
        let clauses: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let orders: Vec<String> =
                    t.orders.iter().map(|o| alloc::format!("{o}")).collect();
                alloc::format!(
                    "{} * D[{}] * {}",
                    render_multiplier(&t.left),
                    orders.join(","),
                    render_multiplier(&t.right)
                )
            })
            .collect();
        clauses.join(" + ")
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

fn render_multiplier(p: &MultiPoly) -> String {
    if p.num_terms() > 1 {
        alloc::format!("({p})")
    } else {
        alloc::format!("{p}")
    }
}

/// Merge terms with equal `(orders, right)`, drop zero multipliers, and sort
/// by `(orders, right, left)` for a deterministic term list.
fn canonicalize(terms: Vec<OpTerm>) -> Vec<OpTerm> {
    let mut merged: Vec<OpTerm> = Vec::new();
    'next: for t in terms {
        if t.left.is_zero() || t.right.is_zero() {
            continue;
        }
        for m in merged.iter_mut() {
            if m.orders == t.orders && m.right == t.right {
                m.left = &m.left + &t.left;
                continue 'next;
            }
        }
        merged.push(t);
    }
    merged.retain(|t| !t.left.is_zero());
    merged.sort_by(|a, b| {
        a.orders
            .cmp(&b.orders)
            .then_with(|| a.right.cmp_structure(&b.right))
            .then_with(|| a.left.cmp_structure(&b.left))
    });
    merged
}

/// All multi-orders `r <= cap` with `D^{(r)}(u) != 0`, paired with the
/// derivative, by zero-pruned coordinate recursion.
fn nonzero_divided_derivatives(u: &MultiPoly, cap: &[u32]) -> Vec<(Vec<u32>, MultiPoly)> {
    let mut out = Vec::new();
    let mut r = alloc::vec![0u32; cap.len()];
    recurse(u, cap, 0, &mut r, &mut out);
    return out;

    fn recurse(
        current: &MultiPoly,
        cap: &[u32],
        var: usize,
        r: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, MultiPoly)>,
    ) {
        if var == cap.len() {
            out.push((r.clone(), current.clone()));
            return;
        }
        let max_here = current
            .support()
            .iter()
            .map(|m| m.exponents()[var])
            .max()
            .unwrap_or(0)
            .min(cap[var]);
        for t in 0..=max_here {
            let d = current.divided_derivative(var, t);
            if d.is_zero() {
                continue;
            }
            r[var] = t;
            recurse(&d, cap, var + 1, r, out);
        }
        r[var] = 0;
    }
}

/// An operator verified against its defining contract
/// `apply(op, f^{p^e-1}) = f^{p^e-p}`.
#[derive(Debug, Clone)]
pub struct AssociatedOperator {
    op: DiffOperator,
    f: MultiPoly,
    e: u32,
    verified: bool,
}

impl AssociatedOperator {
    pub fn op(&self) -> &DiffOperator {
        &self.op
    }

    pub fn into_op(self) -> DiffOperator {
        self.op
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn verified(&self) -> bool {
        self.verified
    }
}

/// The operator `δ_μ = (Π_k D_{x_k, p^e-1}) ∘ ν_μ` with
/// `ν_μ = Π_k x_k^{p^e-1-μ_k}`: the dual of the basis monomial `μ`, acting as
/// Kronecker delta on the `R^{p^e}`-module basis.
pub fn dual_basis_operator(
    ring: &PolyRing,
    mu: &Monomial,
    e: u32,
) -> Result<DiffOperator, DiffopError> {
    assert_eq!(mu.dim(), ring.dim(), "basis monomial dimension");
    let q = ring
        .prime()
        .pow_checked(e)
        .ok_or(DiffopError::OrderOutOfRange)?;
    if mu.exponents().iter().any(|&a| a as u64 > q - 1) {
        return Err(DiffopError::OrderOutOfRange);
    }
    let nu: Vec<u32> = mu
        .exponents()
        .iter()
        .map(|&a| (q - 1 - a as u64) as u32)
        .collect();
    let orders = alloc::vec![(q - 1) as u32; ring.dim()];
    let term = OpTerm::new(
        ring.one(),
        orders,
        ring.monomial(Monomial::new(nu), ring.prime().one()),
    );
    Ok(DiffOperator {
        ring: ring.clone(),
        e,
        terms: alloc::vec![term],
    })
}

/// A small sub-list of decomposition parts that still generates the
/// stabilized ideal, scanned from the largest basis monomial down. Keeps the
/// cofactor-tracked Gröbner run tractable and the extracted operator small.
fn select_generating_parts(
    source: &MultiPoly,
    e: u32,
    stabilized: &IdealBasis,
) -> Result<Vec<(Monomial, FpElement, MultiPoly)>, DiffopError> {
    let ring = source.ring().clone();
    let order = || MonomialOrder::grevlex(ring.dim());
    let dec = source.frobenius_decompose(e)?;
    let mut selected: Vec<(Monomial, FpElement, MultiPoly)> = Vec::new();
    let mut selected_basis = IdealBasis::new(ring.clone(), Vec::new());
    let mut gb = groebner(&selected_basis, order(), false);
    let covered = |gb: &GroebnerBasis| stabilized.generators().iter().all(|h| gb.contains(h));

    for (mu, part) in dec.parts().iter().rev() {
        if covered(&gb) {
            break;
        }
        let monic = part.monic();
        // scalar duplicates of selected parts reduce to zero here
        if gb.contains(&monic) {
            continue;
        }
        let lc = part.leading_term().map(|(_, c)| c).unwrap();
        selected.push((mu.clone(), lc, monic.clone()));
        let mut gens = selected_basis.generators().to_vec();
        gens.push(monic);
        selected_basis = IdealBasis::new(ring.clone(), gens);
        gb = groebner(&selected_basis, order(), false);
    }
    debug_assert!(covered(&gb), "parts must generate the stabilized ideal");
    Ok(selected)
}

/// The three-step construction: find the level `e`, decompose
/// `f^{p^e-1} = Σ c_i^{p^e} μ_i`, express `f^{p^e-p} = Σ α_i c_i^{p^e}`, and
/// assemble `δ = Σ α_i δ_{μ_i}`. The returned operator is re-applied to
/// `f^{p^e-1}` as a mandatory check.
pub fn construct_operator(f: &MultiPoly) -> Result<AssociatedOperator, DiffopError> {
    if f.is_zero() {
        return Err(DiffopError::ZeroPolynomial);
    }
    let ring = f.ring().clone();
    let lr = level::level_of(f)?;
    let e = lr.level();
    let root = lr.stabilized_ideal();
    let source = root.source().clone(); // f^{p^e - 1}

    let parts = select_generating_parts(&source, e, root.ideal())?;
    let gens: Vec<MultiPoly> = parts.iter().map(|(_, _, m)| m.clone()).collect();
    let j = IdealBasis::new(ring.clone(), gens);
    let gb = groebner(&j, MonomialOrder::grevlex(ring.dim()), true);

    // f^{p^e - p} = (f^{p^{e-1} - 1})^p
    let target = f.power_q_minus_one(e - 1)?.frobenius_pow(1)?;
    let alphas = express_in_bracket_power_gb(&target, &gb, e)?;

    let mut terms = Vec::new();
    for (alpha, (mu, lc, _)) in alphas.iter().zip(&parts) {
        if alpha.is_zero() {
            continue;
        }
        let dual = dual_basis_operator(&ring, mu, e)?;
        // the monic generator absorbs 1/lc: α·m^{p^e} = (α/lc)·c^{p^e}
        let left = alpha.scale(lc.inv());
        for t in dual.terms {
            terms.push(OpTerm::new(&left * &t.left, t.orders, t.right));
        }
    }
    let op = DiffOperator {
        ring: ring.clone(),
        e,
        terms: canonicalize(terms),
    };

    let verified = op.apply(&source) == target;
    if !verified {
        return Err(DiffopError::VerificationFailed);
    }
    Ok(AssociatedOperator {
        op,
        f: f.clone(),
        e,
        verified,
    })
}

/// Closed form for a monomial `x^a`:
/// `δ = Π_i x_i^{p^e - p·a_i} · D_{x_i, p^e-1} · x_i^{a_i-1}` as a single
/// sandwich term. Variables with zero exponent are left untouched.
pub fn monomial_operator(
    ring: &PolyRing,
    exponents: &[u32],
) -> Result<AssociatedOperator, DiffopError> {
    assert_eq!(exponents.len(), ring.dim(), "exponent vector dimension");
    let p = ring.prime();
    let lr = level::monomial_level(ring, exponents)?;
    let e = lr.level();
    let q = p.pow_checked(e).ok_or(DiffopError::OrderOutOfRange)?;

    let mut left = Vec::with_capacity(ring.dim());
    let mut orders = Vec::with_capacity(ring.dim());
    let mut right = Vec::with_capacity(ring.dim());
    for &a in exponents {
        if a == 0 {
            left.push(0);
            orders.push(0);
            right.push(0);
        } else {
            // p^e >= p·a_i because p^{e-1} >= max a_i
            left.push((q - p.get() * a as u64) as u32);
            orders.push((q - 1) as u32);
            right.push(a - 1);
        }
    }
    let one = p.one();
    let term = OpTerm::new(
        ring.monomial(Monomial::new(left), one),
        orders,
        ring.monomial(Monomial::new(right), one),
    );
    let op = DiffOperator {
        ring: ring.clone(),
        e,
        terms: alloc::vec![term],
    };

    let f = ring.monomial(Monomial::new(exponents.to_vec()), one);
    let source = f.power_q_minus_one(e)?;
    let target = f.power_q_minus_one(e - 1)?.frobenius_pow(1)?;
    if op.apply(&source) != target {
        return Err(DiffopError::VerificationFailed);
    }
    Ok(AssociatedOperator {
        op,
        f,
        e,
        verified: true,
    })
}

/// Closed form for a product of powers of independent linear forms
/// `f = Π ℓ_i^{a_i}`: the monomial operator conjugated by the linear change
/// of coordinates `u_i = ℓ_i`. Each divided power along `ℓ_i` expands as
/// `Σ_{|r| = t} (Π_j N_{ji}^{r_j}) D_x^{(r)}` with `N` the inverse of the
/// completed coefficient matrix (divided powers carry no multinomial
/// factors), and the composite collapses to sandwiches sharing the
/// multipliers `Π ℓ_i^{p^e - p·a_i}` and `Π ℓ_i^{a_i - 1}`. With unit-vector
/// forms this is exactly the monomial operator.
pub fn linear_forms_operator(
    ring: &PolyRing,
    forms: &[(MultiPoly, u32)],
) -> Result<AssociatedOperator, DiffopError> {
    let d = ring.dim();
    if forms.is_empty() || forms.len() > d {
        return Err(DiffopError::DependentForms);
    }
    let p = ring.prime();
    // coefficient rows of the forms
    let mut rows: Vec<Vec<FpElement>> = Vec::new();
    for (ell, a) in forms {
        assert!(ell.ring() == ring, "ring mismatch");
        if *a == 0 || ell.is_zero() || ell.degree() != Some(1) || !ell.is_homogeneous() {
            return Err(DiffopError::DependentForms);
        }
        let mut row = alloc::vec![p.zero(); d];
        for (m, c) in ell.terms() {
            let var = m
                .exponents()
                .iter()
                .position(|&x| x == 1)
                .expect("degree-one monomial");
            row[var] = c;
        }
        rows.push(row);
    }
    let matrix = complete_to_basis(rows, d).ok_or(DiffopError::DependentForms)?;
    let inverse = invert_matrix(&matrix).expect("completed matrix is invertible");

    let a_max = forms.iter().map(|(_, a)| *a).max().unwrap();
    let e = if a_max <= 1 {
        1
    } else {
        level::ceil_log_prime(a_max, p) + 1
    };
    let q = p.pow_checked(e).ok_or(DiffopError::OrderOutOfRange)?;
    let t = (q - 1) as u32;

    // product of the conjugated divided powers, as multi-order -> coefficient
    let mut composite: BTreeMap<Vec<u32>, FpElement> = BTreeMap::new();
    composite.insert(alloc::vec![0u32; d], p.one());
    for i in 0..forms.len() {
        let column: Vec<FpElement> = inverse.iter().map(|row| row[i]).collect();
        let directional = directional_divided_power(&column, t, p);
        let mut next: BTreeMap<Vec<u32>, FpElement> = BTreeMap::new();
        for (big_r, c_acc) in &composite {
            for (r, c_dir) in &directional {
                let mut coeff = *c_acc * *c_dir;
                let mut orders = Vec::with_capacity(d);
                for (&acc_o, &dir_o) in big_r.iter().zip(r) {
                    coeff = coeff * binom_mod_p(acc_o as u64 + dir_o as u64, dir_o as u64, p);
                    if coeff.is_zero() {
                        break;
                    }
                    orders.push(acc_o + dir_o);
                }
                if coeff.is_zero() {
                    continue;
                }
                let slot = next.entry(orders).or_insert_with(|| p.zero());
                *slot = *slot + coeff;
            }
        }
        next.retain(|_, c| !c.is_zero());
        composite = next;
    }

    let mut left = ring.one();
    let mut right = ring.one();
    let mut f = ring.one();
    for (ell, a) in forms {
        left = &left * &ell.pow(q - p.get() * *a as u64);
        right = &right * &ell.pow(*a as u64 - 1);
        f = &f * &ell.pow(*a as u64);
    }
    let terms: Vec<OpTerm> = composite
        .into_iter()
        .map(|(orders, c)| OpTerm::new(left.scale(c), orders, right.clone()))
        .collect();
    let op = DiffOperator {
        ring: ring.clone(),
        e,
        terms: canonicalize(terms),
    };

    let source = f.power_q_minus_one(e)?;
    let target = f.power_q_minus_one(e - 1)?.frobenius_pow(1)?;
    if op.apply(&source) != target {
        return Err(DiffopError::VerificationFailed);
    }
    Ok(AssociatedOperator {
        op,
        f,
        e,
        verified: true,
    })
}

/// `Σ_{|r| = t} (Π_j coeffs_j^{r_j}) D^{(r)}`: the divided power of order `t`
/// along the direction with the given coordinates, as multi-order terms.
fn directional_divided_power(
    coeffs: &[FpElement],
    t: u32,
    p: crate::ff::Prime,
) -> Vec<(Vec<u32>, FpElement)> {
    let mut out = Vec::new();
    let mut r = alloc::vec![0u32; coeffs.len()];
    distribute(coeffs, t, 0, p.one(), &mut r, &mut out);
    return out;

    fn distribute(
        coeffs: &[FpElement],
        remaining: u32,
        j: usize,
        coeff: FpElement,
        r: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, FpElement)>,
    ) {
        if j == coeffs.len() {
            if remaining == 0 {
                out.push((r.clone(), coeff));
            }
            return;
        }
        if coeffs[j].is_zero() {
            r[j] = 0;
            distribute(coeffs, remaining, j + 1, coeff, r, out);
            return;
        }
        let mut power = coeff;
        for share in 0..=remaining {
            if share > 0 {
                power = power * coeffs[j];
            }
            r[j] = share;
            distribute(coeffs, remaining - share, j + 1, power, r, out);
        }
        r[j] = 0;
    }
}

/// Extends independent rows to a full basis with standard unit vectors;
/// `None` when the rows are dependent.
fn complete_to_basis(rows: Vec<Vec<FpElement>>, d: usize) -> Option<Vec<Vec<FpElement>>> {
    let mut basis = rows;
    for j in 0..d {
        if basis.len() == d {
            break;
        }
        let p = basis[0][0].modulus();
        let unit: Vec<FpElement> = (0..d)
            .map(|k| {
                let pr = crate::ff::Prime::new(p).expect("modulus is prime");
                if k == j {
                    pr.one()
                } else {
                    pr.zero()
                }
            })
            .collect();
        let mut trial = basis.clone();
        trial.push(unit.clone());
        if rank(trial) == basis.len() + 1 {
            basis.push(unit);
        }
    }
    (basis.len() == d && rank(basis.clone()) == d).then_some(basis)
}

fn rank(mut matrix: Vec<Vec<FpElement>>) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = match (r..rows).find(|&i| !matrix[i][c].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        matrix.swap(r, pivot);
        let inv = matrix[r][c].inv();
        let pivot_row = matrix[r].clone();
        for (i, row) in matrix.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c] * inv;
                for (entry, &pv) in row.iter_mut().zip(&pivot_row) {
                    *entry = *entry - pv * factor;
                }
            }
        }
        r += 1;
    }
    r
}

/// Gauss-Jordan inverse of a square matrix over `F_p`.
fn invert_matrix(matrix: &[Vec<FpElement>]) -> Option<Vec<Vec<FpElement>>> {
    let d = matrix.len();
    let p = crate::ff::Prime::new(matrix[0][0].modulus()).expect("modulus is prime");
    let mut a: Vec<Vec<FpElement>> = matrix.to_vec();
    let mut inv: Vec<Vec<FpElement>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { p.one() } else { p.zero() })
                .collect()
        })
        .collect();
    for c in 0..d {
        let pivot = (c..d).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, pivot);
        inv.swap(c, pivot);
        let scale = a[c][c].inv();
        for k in 0..d {
            a[c][k] = a[c][k] * scale;
            inv[c][k] = inv[c][k] * scale;
        }
        for i in 0..d {
            if i != c && !a[i][c].is_zero() {
                let factor = a[i][c];
                for k in 0..d {
                    let s1 = a[c][k] * factor;
                    a[i][k] = a[i][k] - s1;
                    let s2 = inv[c][k] * factor;
                    inv[i][k] = inv[i][k] - s2;
                }
            }
        }
    }
    Some(inv)
}

/// For `f` of level one: `δ' = δ ∘ (g^{p-1} · _)` satisfies the polynomial
/// identity `δ'(g·f^{p-1}) = g^p`, the polynomial form of
/// `δ'(g/f) = (g/f)^p`.
pub fn fraction_operator(g: &MultiPoly, f: &MultiPoly) -> Result<DiffOperator, DiffopError> {
    let lr = level::level_of(f)?;
    if lr.level() != 1 {
        return Err(DiffopError::LevelNotOne(lr.level()));
    }
    let assoc = construct_operator(f)?;
    let p = f.ring().prime();
    let gp1 = g.pow(p.get() - 1);
    Ok(assoc.op().compose(&DiffOperator::multiplication(&gp1)))
}
