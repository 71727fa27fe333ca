//! The field tower `F_p ⊂ F_q ⊂ F_{q^k}`.
//!
//! [`BaseField`] handles `F_q` with integer-coded elements; [`ExtElem`] is an
//! element of `F_{q^k}` stored as a fully reduced coefficient vector over
//! `F_q` together with its [`FieldDescriptor`].

pub mod base;
pub mod factor;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use base::BaseField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("inversion of zero")]
    ZeroInversion,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("reducible modulus {0}")]
    Reducible(String),
    #[error("field of order {0} is too large for this implementation")]
    TooLarge(u64),
    #[error("could not factor {0} within the configured budget")]
    FactorizationBudgetExceeded(u64),
    #[error("no monic primitive polynomial of degree {0} found")]
    NoPrimitivePolynomial(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Parameters of the tower: `q = p^r`, top field `F_{q^k}`.
#[derive(Clone)]
pub struct FieldDescriptor {
    p: u32,
    r: u32,
    k: u32,
    base_modulus: Vec<u32>,
    top_modulus: Vec<u32>,
    base: Arc<BaseField>,
    // distinct primes dividing q^k - 1
    order_primes: Vec<u64>,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.r == other.r
            && self.k == other.k
            && self.base_modulus == other.base_modulus
            && self.top_modulus == other.top_modulus
    }
}

impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldDescriptor({})", self.canonical_string())
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

fn top_order(q: u32, k: u32) -> Result<u64, FieldError> {
    (q as u64)
        .checked_pow(k)
        .filter(|&n| n < 1 << 62)
        .ok_or(FieldError::TooLarge(u64::MAX))
}

impl FieldDescriptor {
    /// Deterministic tower: smallest monic irreducible base modulus and
    /// smallest monic primitive top modulus in index order (see
    /// [`poly::monic_from_index`]).
    pub fn canonical(p: u32, r: u32, k: u32) -> Result<Arc<Self>, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        let prime = BaseField::prime(p)?;
        if r == 0 || k == 0 {
            return Err(FieldError::BadModulus("extension degrees must be >= 1".into()));
        }
        let base_modulus = (0..(p as u64).pow(r))
            .map(|i| poly::monic_from_index(&prime, r as usize, i))
            .find(|m| poly::is_irreducible(&prime, m))
            .expect("irreducible polynomials exist in every degree");
        let base = BaseField::extension(p, base_modulus.clone())?;
        let order = top_order(base.q(), k)?;
        let primes = factor::prime_divisors(order - 1)?;
        let top_modulus = (0..order)
            .map(|i| poly::monic_from_index(&base, k as usize, i))
            .find(|m| {
                poly::is_irreducible(&base, m)
                    && primes.iter().all(|&l| {
                        poly::pow_mod(&base, &[0, 1], ((order - 1) / l) as u128, m) != vec![1]
                    })
            })
            .ok_or(FieldError::NoPrimitivePolynomial(k as usize))?;
        Ok(Arc::new(Self {
            p,
            r,
            k,
            base_modulus,
            top_modulus,
            base: Arc::new(base),
            order_primes: primes,
        }))
    }

    /// Tower from explicit moduli; both must be monic irreducible.
    pub fn with_moduli(p: u32, base_modulus: Vec<u32>, top_modulus: Vec<u32>) -> Result<Arc<Self>, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        let base = BaseField::extension(p, base_modulus)?;
        let top_modulus = poly::trim(top_modulus);
        let k = poly::degree(&top_modulus).ok_or(FieldError::BadModulus("zero top modulus".into()))? as u32;
        if k == 0 || *top_modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus(format!("{top_modulus:?} is not monic of positive degree")));
        }
        if top_modulus.iter().any(|&c| c >= base.q()) {
            return Err(FieldError::BadModulus(format!("{top_modulus:?} has entries outside F_q")));
        }
        if !poly::is_irreducible(&base, &top_modulus) {
            return Err(FieldError::Reducible(format!("{top_modulus:?} over F_{}", base.q())));
        }
        let order = top_order(base.q(), k)?;
        let primes = factor::prime_divisors(order - 1)?;
        Ok(Arc::new(Self {
            p,
            r: base.r(),
            k,
            base_modulus: base.modulus().to_vec(),
            top_modulus,
            base: Arc::new(base),
            order_primes: primes,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.base.q()
    }
    /// `q^k`.
    pub fn order(&self) -> u64 {
        (self.q() as u64).pow(self.k)
    }
    pub fn base_field(&self) -> &Arc<BaseField> {
        &self.base
    }
    pub fn base_modulus(&self) -> &[u32] {
        &self.base_modulus
    }
    pub fn top_modulus(&self) -> &[u32] {
        &self.top_modulus
    }
    /// Distinct prime divisors of `q^k - 1`.
    pub fn order_primes(&self) -> &[u64] {
        &self.order_primes
    }

    /// `p^r^k:base:top`, coefficients low-to-high. Top coefficients are
    /// written as `F_q` element codes.
    pub fn canonical_string(&self) -> String {
        let join = |v: &[u32]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{}^{}^{}:{}:{}",
            self.p,
            self.r,
            self.k,
            join(&self.base_modulus),
            join(&self.top_modulus)
        )
    }

    pub fn parse(s: &str) -> Result<Arc<Self>, FieldError> {
        let bad = || FieldError::Parse(format!("malformed descriptor {s:?}"));
        let mut parts = s.trim().split(':');
        let head = parts.next().ok_or_else(bad)?;
        let base = parts.next().ok_or_else(bad)?;
        let top = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let nums: Vec<u32> = head
            .split('^')
            .map(|x| x.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if nums.len() != 3 {
            return Err(bad());
        }
        let list = |t: &str| -> Result<Vec<u32>, FieldError> {
            t.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
        };
        let desc = Self::with_moduli(nums[0], list(base)?, list(top)?)?;
        if desc.r != nums[1] || desc.k != nums[2] {
            return Err(FieldError::Parse(format!("degrees in {s:?} disagree with the moduli")));
        }
        Ok(desc)
    }

    pub fn zero(self: &Arc<Self>) -> ExtElem {
        ExtElem {
            coeffs: vec![0; self.k as usize],
            desc: self.clone(),
        }
    }

    pub fn one(self: &Arc<Self>) -> ExtElem {
        self.from_base(1)
    }

    /// Embedding of `F_q` into `F_{q^k}`.
    pub fn from_base(self: &Arc<Self>, c: u32) -> ExtElem {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// Element from coefficients over `F_q` (low-to-high), reduced by the top
    /// modulus.
    pub fn elem(self: &Arc<Self>, coeffs: &[u32]) -> ExtElem {
        let f = &*self.base;
        let reduced = poly::rem(f, &coeffs.iter().map(|&c| c % f.q()).collect::<Vec<_>>(), &self.top_modulus);
        let mut out = vec![0u32; self.k as usize];
        out[..reduced.len()].copy_from_slice(&reduced);
        ExtElem {
            coeffs: out,
            desc: self.clone(),
        }
    }

    /// Generator `t` of the top field over `F_q`.
    pub fn t(self: &Arc<Self>) -> ExtElem {
        self.elem(&[0, 1])
    }

    /// The `idx`-th element of `F_{q^k}`: coefficients are the base-`q`
    /// digits of `idx`.
    pub fn elem_from_index(self: &Arc<Self>, mut idx: u64) -> ExtElem {
        let q = self.q() as u64;
        let mut coeffs = vec![0u32; self.k as usize];
        for c in coeffs.iter_mut() {
            *c = (idx % q) as u32;
            idx /= q;
        }
        ExtElem {
            coeffs,
            desc: self.clone(),
        }
    }

    /// Smallest-index element of multiplicative order `q^k - 1`.
    pub fn find_primitive(self: &Arc<Self>) -> Result<ExtElem, FieldError> {
        (1..self.order())
            .map(|i| self.elem_from_index(i))
            .find(|x| x.is_primitive())
            .ok_or(FieldError::NoPrimitivePolynomial(self.k as usize))
    }
}

/// Element of `F_{q^k}`.
#[derive(Clone)]
pub struct ExtElem {
    coeffs: Vec<u32>,
    desc: Arc<FieldDescriptor>,
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.desc, &other.desc) || self.desc == other.desc)
    }
}

impl Eq for ExtElem {}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem{:?}", self.coeffs)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Binary operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

/// Checked field operation on two elements of the same field.
pub fn arith(a: &ExtElem, b: &ExtElem, op: ArithOp) -> Result<ExtElem, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

impl ExtElem {
    pub fn desc(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }

    /// Coefficients over `F_q`, low-to-high, length `k`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Position in the canonical enumeration of [`FieldDescriptor::elem_from_index`].
    pub fn index(&self) -> u64 {
        let q = self.desc.q() as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    /// `Some(c)` when the element lies in the base field.
    pub fn as_base(&self) -> Option<u32> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.desc, &other.desc) || self.desc == other.desc {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let f = self.desc.base_field();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self {
            coeffs,
            desc: self.desc.clone(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let f = self.desc.base_field();
        let prod = poly::mul_mod(f, &self.coeffs, &other.coeffs, &self.desc.top_modulus);
        let mut coeffs = vec![0u32; self.coeffs.len()];
        coeffs[..prod.len()].copy_from_slice(&prod);
        Ok(Self {
            coeffs,
            desc: self.desc.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        let f = self.desc.base_field();
        Self {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            desc: self.desc.clone(),
        }
    }

    /// Multiplication by an `F_q` scalar.
    pub fn scale(&self, c: u32) -> Self {
        let f = self.desc.base_field();
        Self {
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
            desc: self.desc.clone(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.desc.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInversion);
        }
        Ok(self.pow(self.desc.order() - 2))
    }

    /// `x -> x^q`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.desc.q() as u64)
    }

    /// `Tr(x) = x + x^q + ... + x^{q^{k-1}}`, an element of `F_q`.
    pub fn trace(&self) -> u32 {
        let mut acc = self.clone();
        let mut conj = self.clone();
        for _ in 1..self.desc.k {
            conj = conj.frobenius();
            acc = &acc + &conj;
        }
        acc.as_base().expect("trace lies in the base field")
    }

    /// Multiplicative order; `None` for zero.
    pub fn order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut n = self.desc.order() - 1;
        for &l in self.desc.order_primes() {
            while n % l == 0 && self.pow(n / l).is_one() {
                n /= l;
            }
        }
        Some(n)
    }

    /// Order exactly `q^k - 1`, certified by `x^{(q^k-1)/l} != 1` for every
    /// prime `l | q^k - 1`.
    pub fn is_primitive(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let n = self.desc.order() - 1;
        self.desc.order_primes().iter().all(|&l| !self.pow(n / l).is_one())
    }
}

impl<'a> std::ops::Add for &'a ExtElem {
    type Output = ExtElem;
    fn add(self, rhs: Self) -> ExtElem {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl<'a> std::ops::Sub for &'a ExtElem {
    type Output = ExtElem;
    fn sub(self, rhs: Self) -> ExtElem {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl<'a> std::ops::Mul for &'a ExtElem {
    type Output = ExtElem;
    fn mul(self, rhs: Self) -> ExtElem {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f9_plus() -> Arc<FieldDescriptor> {
        // F_9 = F_3[t]/(t^2 + 1)
        FieldDescriptor::with_moduli(3, vec![0, 1], vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn t_squared_in_f9() {
        let d = f9_plus();
        let t = d.t();
        assert_eq!(&t * &t, d.from_base(2));
    }

    #[test]
    fn inverse_of_one_and_zero() {
        let d = f9_plus();
        assert_eq!(d.one().inv().unwrap(), d.one());
        assert_eq!(d.zero().inv(), Err(FieldError::ZeroInversion));
    }

    #[test]
    fn group_order_kills_everything() {
        let d = FieldDescriptor::canonical(5, 1, 3).unwrap();
        for i in 1..d.order() {
            assert!(d.elem_from_index(i).pow(d.order() - 1).is_one());
        }
    }

    #[test]
    fn frobenius_examples() {
        let d = f9_plus();
        assert!(d.zero().frobenius().is_zero());
        for c in 0..3 {
            assert_eq!(d.from_base(c).frobenius(), d.from_base(c));
        }
        assert_eq!(d.t().frobenius(), d.t().scale(2));
    }

    #[test]
    fn trace_examples() {
        let d = f9_plus();
        assert_eq!(d.zero().trace(), 0);
        assert_eq!(d.one().trace(), 2);
        assert_eq!(d.t().trace(), 0);
        let d7 = FieldDescriptor::canonical(5, 1, 7).unwrap();
        assert_eq!(d7.one().trace(), 7 % 5);
    }

    #[test]
    fn primitive_examples() {
        let f5 = FieldDescriptor::canonical(5, 1, 1).unwrap();
        assert_eq!(f5.from_base(2).order(), Some(4));
        assert_eq!(f5.from_base(4).order(), Some(2));
        assert!(f5.from_base(2).is_primitive());
        assert!(!f5.from_base(4).is_primitive());
        assert_eq!(f5.find_primitive().unwrap(), f5.from_base(2));

        let f9 = FieldDescriptor::with_moduli(3, vec![0, 1], vec![2, 1, 1]).unwrap();
        assert_eq!(f9.t().order(), Some(8));
    }

    #[test]
    fn canonical_f9_top_modulus() {
        let d = FieldDescriptor::canonical(3, 1, 2).unwrap();
        assert_eq!(d.top_modulus(), &[2, 1, 1]);
        assert_eq!(d.canonical_string(), "3^1^2:0,1:2,1,1");
        assert_eq!(*FieldDescriptor::parse(&d.canonical_string()).unwrap(), *d);
    }

    #[test]
    fn characteristic_two_rejected() {
        assert_eq!(FieldDescriptor::canonical(2, 1, 3).unwrap_err(), FieldError::CharacteristicTwo);
    }

    #[test]
    fn mismatched_fields() {
        let a = FieldDescriptor::canonical(5, 1, 3).unwrap();
        let b = FieldDescriptor::canonical(7, 1, 3).unwrap();
        assert_eq!(arith(&a.one(), &b.one(), ArithOp::Add), Err(FieldError::FieldMismatch));
    }

    fn brute_order(x: &ExtElem) -> u64 {
        let mut y = x.clone();
        let mut n = 1;
        while !y.is_one() {
            y = &y * x;
            n += 1;
        }
        n
    }

    #[test]
    fn inverses_and_orders_exhaustive_small() {
        for (p, r, k) in [(3, 1, 2), (5, 1, 3), (3, 2, 2), (7, 1, 2), (5, 2, 2)] {
            let d = FieldDescriptor::canonical(p, r, k).unwrap();
            let g = d.find_primitive().unwrap();
            assert_eq!(brute_order(&g), d.order() - 1);
            for i in 1..d.order() {
                let x = d.elem_from_index(i);
                assert!((&x * &x.inv().unwrap()).is_one());
                assert_eq!(x.order().unwrap(), brute_order(&x));
                assert_eq!(x.is_primitive(), brute_order(&x) == d.order() - 1);
            }
        }
    }

    proptest! {
        #[test]
        fn trace_is_linear(a in 0u64..78125, b in 0u64..78125, c in 0u32..5) {
            let d = FieldDescriptor::canonical(5, 1, 7).unwrap();
            let (x, y) = (d.elem_from_index(a), d.elem_from_index(b));
            let f = d.base_field();
            prop_assert_eq!((&x.scale(c) + &y).trace(), f.add(f.mul(c, x.trace()), y.trace()));
        }

        #[test]
        fn frobenius_is_automorphism(a in 0u64..15625, b in 0u64..15625) {
            let d = FieldDescriptor::canonical(5, 2, 3).unwrap();
            let (x, y) = (d.elem_from_index(a), d.elem_from_index(b));
            prop_assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
            let mut z = x.clone();
            for _ in 0..3 { z = z.frobenius(); }
            prop_assert_eq!(z, x);
        }

        #[test]
        fn inverse_random(a in 1u64..161051) {
            let d = FieldDescriptor::canonical(11, 1, 5).unwrap();
            let x = d.elem_from_index(a);
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }
}
