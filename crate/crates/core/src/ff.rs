//! Prime-field arithmetic and base-p combinatorics (Lucas binomials,
//! Legendre factorial valuations).

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Errors from [`Prime::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeError {
    /// Outside the supported range `2 <= p < 2^31`.
    OutOfRange(u64),
    /// Composite input.
    NotPrime(u64),
}

impl fmt::Display for PrimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeError::OutOfRange(p) => write!(f, "{p} is not in the supported range 2..2^31"),
            PrimeError::NotPrime(p) => write!(f, "{p} is not prime"),
        }
    }
}

/// A verified prime modulus `p` with `2 <= p < 2^31`.
///
/// The bound keeps every product of two canonical representatives inside
/// 64-bit intermediate arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub const MAX: u64 = (1 << 31) - 1;

    pub fn new(p: u64) -> Result<Self, PrimeError> {
        if !(2..=Self::MAX).contains(&p) {
            return Err(PrimeError::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(PrimeError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Canonical element with value `v mod p`.
    pub fn element(self, v: u64) -> FpElement {
        FpElement {
            value: v % self.0,
            modulus: self.0,
        }
    }

    pub fn element_from_i64(self, v: i64) -> FpElement {
        let p = self.0 as i64;
        let mut r = v % p;
        if r < 0 {
            r += p;
        }
        self.element(r as u64)
    }

    pub fn zero(self) -> FpElement {
        self.element(0)
    }

    pub fn one(self) -> FpElement {
        self.element(1)
    }

    /// `p^e`, or `None` on 64-bit overflow.
    pub fn pow_checked(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of `F_p` in canonical form: `0 <= value < p`.
///
/// Arithmetic between elements of different moduli panics; every operation
/// returns the canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpElement {
    value: u64,
    modulus: u64,
}

impl FpElement {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn pow(self, mut e: u64) -> FpElement {
        let mut base = self.value % self.modulus;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            e >>= 1;
        }
        FpElement {
            value: acc,
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse by Fermat exponentiation `a^(p-2)`.
    ///
    /// Panics on zero.
    pub fn inv(self) -> FpElement {
        assert!(!self.is_zero(), "inverse of zero in F_{}", self.modulus);
        self.pow(self.modulus - 2)
    }
}

impl Add for FpElement {
    type Output = FpElement;
    fn add(self, rhs: FpElement) -> FpElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpElement {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for FpElement {
    type Output = FpElement;
    fn sub(self, rhs: FpElement) -> FpElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpElement {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for FpElement {
    type Output = FpElement;
    fn mul(self, rhs: FpElement) -> FpElement {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpElement {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        FpElement {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `C(n, k) mod p` by Lucas' theorem: the product over base-p digit pairs of
/// the small binomials `C(n_i, k_i)`, zero as soon as some `k_i > n_i`.
///
/// Factorials are never materialized, so `n` may be as large as `u64` allows.
pub fn binom_mod_p(n: u64, k: u64, p: Prime) -> FpElement {
    if k > n {
        return p.zero();
    }
    let m = p.get();
    let mut n = n;
    let mut k = k;
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let nd = n % m;
        let kd = k % m;
        if kd > nd {
            return p.zero();
        }
        acc = acc * small_binom(nd, kd, m) % m;
        n /= m;
        k /= m;
    }
    p.element(acc)
}

/// `C(a, b) mod p` for digits `b <= a < p`, via the multiplicative formula.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // den is nonzero mod p because every factor is < p
    let inv = FpElement {
        value: den,
        modulus: p,
    }
    .inv();
    num * inv.value() % p
}

/// `v_p(n!) = (n - σ_p(n)) / (p - 1)` where `σ_p` is the base-p digit sum.
pub fn factorial_p_valuation(n: u64, p: Prime) -> u64 {
    let sigma: u64 = base_p_digits(n, p).iter().sum();
    (n - sigma) / (p.get() - 1)
}

/// Base-p digits of `n`, least significant first; `[0]` for `n = 0`.
pub fn base_p_digits(n: u64, p: Prime) -> Vec<u64> {
    let m = p.get();
    if n == 0 {
        return alloc::vec![0];
    }
    let mut digits = Vec::new();
    let mut n = n;
    while n > 0 {
        digits.push(n % m);
        n /= m;
    }
    digits
}
