//! Sparse multivariate polynomials over `F_p`, with term-wise Frobenius
//! powers, decomposition over the `R^{p^e}` monomial basis, and divided-power
//! partial derivatives.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::ff::{binom_mod_p, FpElement, Prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyError {
    ZeroPolynomial,
    ExponentOverflow,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            PolyError::ExponentOverflow => write!(f, "monomial exponent overflow"),
        }
    }
}

/// Exponent vector of a power product. `Ord` is graded reverse lexicographic,
/// which is also the storage order of every polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(alloc::vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// `other / self`, when it divides.
    pub fn quotient_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    /// Product; panics on `u32` exponent overflow.
    pub fn product(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    pub fn checked_scale(&self, factor: u64) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for &e in &self.0 {
            let v = (e as u64).checked_mul(factor)?;
            out.push(u32::try_from(v).ok()?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // same degree: greater when the rightmost differing exponent is smaller
        for i in (0..self.0.len()).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug)]
struct RingInner {
    prime: Prime,
    vars: Vec<String>,
}

/// A polynomial ring `F_p[x_1, ..., x_d]`: the prime plus the ordered list of
/// variable names. Cheap to clone.
#[derive(Debug, Clone)]
pub struct PolyRing {
    inner: Arc<RingInner>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.prime == other.inner.prime && self.inner.vars == other.inner.vars)
    }
}

impl Eq for PolyRing {}

impl PolyRing {
    /// Panics on an empty or duplicated variable list.
    pub fn new(prime: Prime, vars: &[&str]) -> Self {
        assert!(!vars.is_empty(), "a polynomial ring needs variables");
        for (i, v) in vars.iter().enumerate() {
            assert!(
                !vars[..i].contains(v),
                "duplicate variable name {v:?} in ring"
            );
        }
        PolyRing {
            inner: Arc::new(RingInner {
                prime,
                vars: vars.iter().map(|v| v.to_string()).collect(),
            }),
        }
    }

    pub fn prime(&self) -> Prime {
        self.inner.prime
    }

    pub fn dim(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> MultiPoly {
        self.constant(self.prime().one())
    }

    pub fn constant(&self, c: FpElement) -> MultiPoly {
        assert_eq!(c.modulus(), self.prime().get(), "mixed moduli");
        let mut p = self.zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(self.dim()), c);
        }
        p
    }

    pub fn constant_u64(&self, c: u64) -> MultiPoly {
        self.constant(self.prime().element(c))
    }

    pub fn constant_i64(&self, c: i64) -> MultiPoly {
        self.constant(self.prime().element_from_i64(c))
    }

    pub fn var(&self, index: usize) -> MultiPoly {
        assert!(index < self.dim(), "variable index out of range");
        let mut exps = alloc::vec![0u32; self.dim()];
        exps[index] = 1;
        self.monomial(Monomial::new(exps), self.prime().one())
    }

    pub fn monomial(&self, m: Monomial, c: FpElement) -> MultiPoly {
        assert_eq!(m.dim(), self.dim(), "monomial dimension mismatch");
        assert_eq!(c.modulus(), self.prime().get(), "mixed moduli");
        let mut p = self.zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(&self, terms: I) -> MultiPoly
    where
        I: IntoIterator<Item = (Monomial, FpElement)>,
    {
        let mut p = self.zero();
        for (m, c) in terms {
            p.insert_add(m, c);
        }
        p
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (name, &e) in self.var_names().iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(alloc::format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

/// Aggregate of [`MultiPoly::support`], [`MultiPoly::norm`] and
/// [`MultiPoly::degree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMetrics {
    pub support: Vec<Monomial>,
    pub norm: u32,
    pub degree: Option<u64>,
}

/// Sparse multivariate polynomial over `F_p`. Canonical: no zero coefficient
/// is ever stored, equality is structural, and terms are kept in grevlex
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, FpElement>,
}

impl MultiPoly {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FpElement)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> FpElement {
        self.terms
            .get(m)
            .copied()
            .unwrap_or_else(|| self.ring.prime().zero())
    }

    /// Leading term under the storage (grevlex) order.
    pub fn leading_term(&self) -> Option<(&Monomial, FpElement)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Nonzero constant polynomial, i.e. a unit of the ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one()
    }

    pub(crate) fn insert_add(&mut self, m: Monomial, c: FpElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn scale(&self, c: FpElement) -> MultiPoly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let mut out = self.ring.zero();
        for (m, a) in self.terms() {
            out.terms.insert(m.clone(), a * c);
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: FpElement) -> MultiPoly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let mut out = self.ring.zero();
        for (t, a) in self.terms() {
            out.terms.insert(t.product(m), a * c);
        }
        out
    }

    /// `self^n` by binary powering; `n = 0` gives 1.
    pub fn pow(&self, n: u64) -> MultiPoly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^{p^e}`: term-wise exponent scaling, coefficients fixed by
    /// Frobenius over `F_p`.
    pub fn frobenius_pow(&self, e: u32) -> Result<MultiPoly, PolyError> {
        let q = self
            .ring
            .prime()
            .pow_checked(e)
            .ok_or(PolyError::ExponentOverflow)?;
        let mut out = self.ring.zero();
        for (m, c) in self.terms() {
            let scaled = m.checked_scale(q).ok_or(PolyError::ExponentOverflow)?;
            out.terms.insert(scaled, c);
        }
        Ok(out)
    }

    /// `f^{p^e - 1}` through the recursion
    /// `f^{p^e - 1} = (f^{p^{e-1} - 1})^p * f^{p-1}`.
    pub fn power_q_minus_one(&self, e: u32) -> Result<MultiPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let fp1 = self.pow(self.ring.prime().get() - 1);
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = &acc.frobenius_pow(1)? * &fp1;
        }
        Ok(acc)
    }

    /// Splits every term `c·x^β` as `β = p^e·γ + α` with `0 <= α_i <= p^e-1`
    /// and accumulates `c·x^γ` into the part keyed by `α`. Over `F_p` the
    /// coefficient is its own `p^e`-th root.
    pub fn frobenius_decompose(&self, e: u32) -> Result<FrobeniusDecomposition, PolyError> {
        let q = self
            .ring
            .prime()
            .pow_checked(e)
            .ok_or(PolyError::ExponentOverflow)?;
        if q > u32::MAX as u64 + 1 {
            return Err(PolyError::ExponentOverflow);
        }
        let mut parts: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (m, c) in self.terms() {
            let mut gamma = Vec::with_capacity(m.dim());
            let mut alpha = Vec::with_capacity(m.dim());
            for &b in m.exponents() {
                gamma.push((b as u64 / q) as u32);
                alpha.push((b as u64 % q) as u32);
            }
            parts
                .entry(Monomial::new(alpha))
                .or_insert_with(|| self.ring.zero())
                .insert_add(Monomial::new(gamma), c);
        }
        parts.retain(|_, g| !g.is_zero());
        Ok(FrobeniusDecomposition {
            ring: self.ring.clone(),
            e,
            q,
            parts,
        })
    }

    /// Divided-power derivative of order `t` in one variable: each term
    /// `c·x^n` maps to `c·C(n,t)·x^{n-t}`, the binomial taken mod p.
    pub fn divided_derivative(&self, var: usize, t: u32) -> MultiPoly {
        assert!(var < self.ring.dim(), "variable index out of range");
        if t == 0 {
            return self.clone();
        }
        let p = self.ring.prime();
        let mut out = self.ring.zero();
        for (m, c) in self.terms() {
            let n = m.exponents()[var];
            if n < t {
                continue;
            }
            let b = binom_mod_p(n as u64, t as u64, p);
            if b.is_zero() {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] = n - t;
            out.insert_add(Monomial::new(exps), c * b);
        }
        out
    }

    /// Ordinary partial derivative (divided power of order one).
    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        self.divided_derivative(var, 1)
    }

    /// Support in descending grevlex order (leading monomial first).
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().rev().cloned().collect()
    }

    /// `‖g‖`: largest single exponent over the support; 0 for the zero
    /// polynomial.
    pub fn norm(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.max_exponent())
            .max()
            .unwrap_or(0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn metrics(&self) -> PolyMetrics {
        PolyMetrics {
            support: self.support(),
            norm: self.norm(),
            degree: self.degree(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.total_degree());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    pub fn eval(&self, point: &[FpElement]) -> FpElement {
        assert_eq!(point.len(), self.ring.dim(), "evaluation point dimension");
        let p = self.ring.prime();
        let mut acc = p.zero();
        for (m, c) in self.terms() {
            let mut t = c;
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t * x.pow(e as u64);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Total order on polynomials of one ring: descending term sequences
    /// compared lexicographically. Used to canonicalize generator lists.
    pub fn cmp_structure(&self, other: &MultiPoly) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    match ma.cmp(mb).then(ca.value().cmp(&cb.value())) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
            }
        }
    }

    /// Monic multiple (leading coefficient scaled to 1); zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(c.inv()),
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.insert_add(m.clone(), c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.insert_add(m.clone(), -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = self.ring.zero();
        for (m, c) in self.terms() {
            out.terms.insert(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        let mut out = self.ring.zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.insert_add(ma.product(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical rendering: terms in descending grevlex order, `^` for
    /// powers, explicit `*` between coefficient and variables. Coefficients
    /// are canonical representatives in `[0, p)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", c.value())?;
            } else if c.is_one() {
                write!(f, "{}", self.ring.render_monomial(m))?;
            } else {
                write!(f, "{}*{}", c.value(), self.ring.render_monomial(m))?;
            }
        }
        Ok(())
    }
}

/// The expression of a polynomial over the free `R^{p^e}`-module basis
/// `{x^α : all α_i <= p^e - 1}`: `g = Σ_α parts[α]^{p^e} · x^α`.
#[derive(Debug, Clone)]
pub struct FrobeniusDecomposition {
    ring: PolyRing,
    e: u32,
    q: u64,
    parts: BTreeMap<Monomial, MultiPoly>,
}

impl FrobeniusDecomposition {
    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn parts(&self) -> &BTreeMap<Monomial, MultiPoly> {
        &self.parts
    }

    pub fn part(&self, mu: &Monomial) -> Option<&MultiPoly> {
        self.parts.get(mu)
    }

    pub fn into_parts(self) -> BTreeMap<Monomial, MultiPoly> {
        self.parts
    }

    /// `Σ_α parts[α]^{p^e} · x^α`; equals the decomposed polynomial exactly.
    pub fn reassemble(&self) -> MultiPoly {
        let mut acc = self.ring.zero();
        for (mu, g) in &self.parts {
            let lifted = g
                .frobenius_pow(self.e)
                .expect("reassembly cannot overflow: exponents come from the source");
            acc = &acc + &lifted.mul_term(mu, self.ring.prime().one());
        }
        acc
    }
}
