//! Exact arithmetic in `F_{l^r}`.
//!
//! Elements are stored as their power-basis coordinates packed into a single
//! integer `a_0 + a_1 l + ... + a_{r-1} l^{r-1}` (the *raw encoding*). All
//! deterministic choices (default modulus, primitive element, embeddings) pick
//! the smallest candidate in this encoding, so every matrix built on top of a
//! field is reproducible bit for bit.
//!
//! Fields up to `2^20` elements carry discrete log/exp tables; larger fields
//! fall back to polynomial multiplication modulo the defining polynomial.

pub mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, mul_mod};

/// Largest field carrying log/exp tables.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0:?} is reducible over F_{1}")]
    ReducibleModulus(Vec<u64>, u64),
    #[error("modulus must be monic of degree {degree} with entries in [0, {characteristic}); got {modulus:?}")]
    BadModulus { characteristic: u64, degree: u32, modulus: Vec<u64> },
    #[error("field of order {0}^{1} exceeds the 2^63 limit")]
    FieldTooLarge(u64, u32),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("no element of order {n}: {n} does not divide {group_order}")]
    NoSuchRoot { n: u64, group_order: u64 },
    #[error("cannot embed F_{{{from_char}^{from_deg}}} into F_{{{to_char}^{to_deg}}}")]
    IncompatibleFields { from_char: u64, from_deg: u32, to_char: u64, to_deg: u32 },
    #[error("coordinate vector {0:?} does not match the field")]
    BadCoordinates(Vec<u64>),
}

/// Defining data of `F_{l^r}`: characteristic, degree and a monic
/// irreducible modulus (coefficients low-to-high, length `r + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(rename = "char")]
    pub characteristic: u64,
    #[serde(rename = "deg")]
    pub degree: u32,
    pub modulus: Vec<u64>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    spec: FieldSpec,
    order: u64,
    powers: Vec<u64>,
    generator: u64,
    group_factors: Vec<u64>,
    tables: Option<Tables>,
}

/// A validated finite field. Cheap to clone; equality compares the spec.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.characteristic(), self.degree(), self.0.spec.modulus)
    }
}

/// Builds `F_{l^r}`. Without a modulus, the first monic irreducible
/// polynomial in lexicographic coefficient order is used (for `r = 1` that is
/// `x`).
pub fn make_field(l: u64, r: u32, modulus: Option<Vec<u64>>) -> Result<Field, FfError> {
    if !arith::is_prime_trial(l) {
        return Err(FfError::NotPrime(l));
    }
    if r == 0 {
        return Err(FfError::ZeroDegree);
    }
    let order = checked_order(l, r).ok_or(FfError::FieldTooLarge(l, r))?;
    let modulus = match modulus {
        Some(m) => {
            if m.len() != r as usize + 1 || m[r as usize] != 1 || m.iter().any(|&c| c >= l) {
                return Err(FfError::BadModulus { characteristic: l, degree: r, modulus: m });
            }
            if !poly::is_irreducible(&m, l) {
                return Err(FfError::ReducibleModulus(m, l));
            }
            m
        }
        None => first_irreducible(l, r),
    };
    Ok(Field::from_parts(FieldSpec { characteristic: l, degree: r, modulus }, order))
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field, FfError> {
        make_field(self.characteristic, self.degree, Some(self.modulus.clone()))
    }
}

fn checked_order(l: u64, r: u32) -> Option<u64> {
    let q = l.checked_pow(r)?;
    (q < 1 << 63).then_some(q)
}

fn first_irreducible(l: u64, r: u32) -> Vec<u64> {
    let r = r as usize;
    if r == 1 {
        return vec![0, 1];
    }
    // Lexicographic over (c_{r-1}, ..., c_0) with the leading 1 fixed.
    let mut lower = vec![0u64; r];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if lower[0] != 0 && poly::is_irreducible(&f, l) {
            return f;
        }
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < l {
                break;
            }
            lower[i] = 0;
            i += 1;
        }
    }
}

impl Field {
    fn from_parts(spec: FieldSpec, order: u64) -> Field {
        let l = spec.characteristic;
        let powers: Vec<u64> = (0..spec.degree).map(|i| l.pow(i)).collect();
        let group_factors = arith::prime_divisors(order - 1);
        let mut inner = Inner { spec, order, powers, generator: 1, group_factors, tables: None };
        let probe = Field(Arc::new(Inner {
            spec: inner.spec.clone(),
            order,
            powers: inner.powers.clone(),
            generator: 1,
            group_factors: inner.group_factors.clone(),
            tables: None,
        }));
        let generator =
            (1..order).find(|&x| probe.is_primitive(x)).expect("the multiplicative group of a finite field is cyclic");
        inner.generator = generator;
        if order <= TABLE_LIMIT {
            let n = (order - 1) as usize;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; order as usize];
            let mut x = 1u64;
            for i in 0..n {
                exp[i] = x as u32;
                log[x as usize] = i as u32;
                x = probe.mul_slow(x, generator);
            }
            for i in n..2 * n {
                exp[i] = exp[i - n];
            }
            inner.tables = Some(Tables { exp, log });
        }
        Field(Arc::new(inner))
    }

    fn is_primitive(&self, x: u64) -> bool {
        if x == 0 {
            return false;
        }
        let n = self.0.order - 1;
        self.0.group_factors.iter().all(|&p| self.pow(x, n / p) != 1)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.0.spec.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.degree
    }

    /// Number of elements `l^r`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// The smallest primitive element in raw encoding.
    pub fn generator(&self) -> u64 {
        self.0.generator
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i128) -> u64 {
        arith::rem_euclid(n, self.characteristic())
    }

    pub fn coeffs(&self, mut x: u64) -> Vec<u64> {
        let l = self.characteristic();
        (0..self.degree())
            .map(|_| {
                let c = x % l;
                x /= l;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<u64, FfError> {
        let l = self.characteristic();
        if coeffs.len() != self.degree() as usize || coeffs.iter().any(|&c| c >= l) {
            return Err(FfError::BadCoordinates(coeffs.to_vec()));
        }
        Ok(coeffs.iter().zip(&self.0.powers).map(|(&c, &p)| c * p).sum())
    }

    /// Whether `x` lies in the prime subfield.
    pub fn is_prime_subfield(&self, x: u64) -> bool {
        x < self.characteristic()
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let l = self.characteristic();
        if self.degree() == 1 {
            let s = a + b;
            return if s >= l { s - l } else { s };
        }
        if l == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &p in &self.0.powers {
            let s = a % l + b % l;
            out += if s >= l { s - l } else { s } * p;
            a /= l;
            b /= l;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let l = self.characteristic();
        if l == 2 {
            return a;
        }
        if self.degree() == 1 {
            return if a == 0 { 0 } else { l - a };
        }
        let mut a = a;
        let mut out = 0;
        for &p in &self.0.powers {
            let c = a % l;
            out += if c == 0 { 0 } else { l - c } * p;
            a /= l;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64,
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let l = self.characteristic();
        if self.degree() == 1 {
            return mul_mod(a, b, l);
        }
        let fa = self.coeffs(a);
        let fb = self.coeffs(b);
        let prod = poly::mul(&fa, &fb, l);
        let red = poly::rem(&prod, &self.0.spec.modulus, l);
        let mut c = red;
        c.resize(self.degree() as usize, 0);
        self.from_coeffs(&c).expect("reduced product has the field's shape")
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if let (Some(t), true) = (&self.0.tables, a != 0) {
            let n = self.0.order - 1;
            let k = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return t.exp[k] as u64;
        }
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.0.tables {
            Some(t) => {
                let n = (self.0.order - 1) as u32;
                let k = (n - t.log[a as usize]) % n;
                Some(t.exp[k as usize] as u64)
            }
            None => Some(self.pow(a, self.0.order - 2)),
        }
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Exact multiplicative order, descending from `q - 1` through its prime
    /// divisors.
    pub fn element_order(&self, a: u64) -> Result<u64, FfError> {
        if a == 0 {
            return Err(FfError::ZeroElement);
        }
        let mut ord = self.0.order - 1;
        for &p in &self.0.group_factors {
            while ord % p == 0 && self.pow(a, ord / p) == 1 {
                ord /= p;
            }
        }
        Ok(ord)
    }

    /// `generator^((q-1)/n)`, an element of exact order `n`.
    pub fn nth_root_of_unity(&self, n: u64) -> Result<u64, FfError> {
        let m = self.0.order - 1;
        if n == 0 || m % n != 0 {
            return Err(FfError::NoSuchRoot { n, group_order: m });
        }
        Ok(self.pow(self.generator(), m / n))
    }

    /// All `x` with `x^2 = a`, ascending in raw encoding.
    pub fn sqrt_all(&self, a: u64) -> Vec<u64> {
        if a == 0 {
            return vec![0];
        }
        if self.characteristic() == 2 {
            return vec![self.pow(a, self.0.order / 2)];
        }
        let m = self.0.order - 1;
        if self.pow(a, m / 2) != 1 {
            return Vec::new();
        }
        if let Some(t) = &self.0.tables {
            let k = t.log[a as usize] / 2;
            let r = t.exp[k as usize] as u64;
            let mut v = vec![r, self.neg(r)];
            v.sort_unstable();
            return v;
        }
        let mut v: Vec<u64> = (1..self.0.order).filter(|&x| self.mul(x, x) == a).take(2).collect();
        v.sort_unstable();
        v
    }

    /// Fixed ring embedding into `target`: the source modulus root chosen is
    /// the smallest root in `target`'s raw encoding.
    pub fn embedding_into(&self, target: &Field) -> Result<Embedding, FfError> {
        let incompatible = FfError::IncompatibleFields {
            from_char: self.characteristic(),
            from_deg: self.degree(),
            to_char: target.characteristic(),
            to_deg: target.degree(),
        };
        if self.characteristic() != target.characteristic() || target.degree() % self.degree() != 0 {
            return Err(incompatible);
        }
        let modulus = &self.0.spec.modulus;
        let eval = |x: u64| modulus.iter().rev().fold(0u64, |acc, &c| target.add(target.mul(acc, x), c));
        let root = (0..target.order()).find(|&x| eval(x) == 0).ok_or(incompatible)?;
        let mut basis = Vec::with_capacity(self.degree() as usize);
        let mut p = 1u64;
        for _ in 0..self.degree() {
            basis.push(p);
            p = target.mul(p, root);
        }
        Ok(Embedding { source: self.clone(), target: target.clone(), basis })
    }

    pub fn element(&self, raw: u64) -> FieldElement {
        assert!(raw < self.order(), "raw encoding out of range");
        FieldElement { field: self.clone(), raw }
    }

    /// Elements in raw-encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }
}

/// A field homomorphism `F_{l^r} -> F_{l^s}`, `r | s`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    basis: Vec<u64>,
}

impl Embedding {
    pub fn apply(&self, x: u64) -> u64 {
        self.source
            .coeffs(x)
            .iter()
            .zip(&self.basis)
            .fold(0, |acc, (&c, &b)| self.target.add(acc, self.target.mul(c, b)))
    }

    pub fn target(&self) -> &Field {
        &self.target
    }
}

/// A field element together with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    raw: u64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw(&self) -> u64 {
        self.raw
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.raw)
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow(self.raw, e))
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field.inv(self.raw).map(|r| self.field.element(r))
    }

    pub fn order(&self) -> Result<u64, FfError> {
        self.field.element_order(self.raw)
    }

    pub fn embed(&self, target: &Field) -> Result<FieldElement, FfError> {
        let e = self.field.embedding_into(target)?;
        Ok(target.element(e.apply(self.raw)))
    }

    pub fn to_json(&self) -> FieldElementJson {
        let spec = self.field.spec();
        FieldElementJson {
            characteristic: spec.characteristic,
            degree: spec.degree,
            modulus: spec.modulus.clone(),
            coeffs: self.coeffs(),
        }
    }

    pub fn from_json(j: &FieldElementJson) -> Result<FieldElement, FfError> {
        let field = make_field(j.characteristic, j.degree, Some(j.modulus.clone()))?;
        let raw = field.from_coeffs(&j.coeffs)?;
        Ok(field.element(raw))
    }
}

/// Wire form of a field element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldElementJson {
    #[serde(rename = "char")]
    pub characteristic: u64,
    #[serde(rename = "deg")]
    pub degree: u32,
    pub modulus: Vec<u64>,
    pub coeffs: Vec<u64>,
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                assert!(self.field == rhs.field, "mixed-field arithmetic");
                let raw = self.field.$f(self.raw, rhs.raw);
                FieldElement { field: self.field, raw }
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let raw = self.field.neg(self.raw);
        FieldElement { field: self.field, raw }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_default_modulus() {
        let f = make_field(3, 1, None).unwrap();
        assert_eq!(f.spec().modulus, vec![0, 1]);
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn f27_group_order_by_enumeration() {
        let f = make_field(3, 3, None).unwrap();
        let g = f.generator();
        let mut x = g;
        let mut n = 1;
        while x != 1 {
            x = f.mul(x, g);
            n += 1;
        }
        assert_eq!(n, 26);
        assert_eq!(f.element_order(g).unwrap(), 26);
    }

    #[test]
    fn f4_from_explicit_modulus() {
        let f = make_field(2, 2, Some(vec![1, 1, 1])).unwrap();
        assert_eq!(f.order(), 4);
        let w = 2; // the class of x
        assert_eq!(f.mul(w, w), f.add(w, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(6, 1, None).unwrap_err(), FfError::NotPrime(6));
        assert!(matches!(make_field(2, 2, Some(vec![1, 0, 1])), Err(FfError::ReducibleModulus(..))));
        assert!(matches!(make_field(3, 2, Some(vec![1, 1, 2])), Err(FfError::BadModulus { .. })));
        assert!(matches!(make_field(2, 64, None), Err(FfError::FieldTooLarge(..))));
    }

    #[test]
    fn element_orders() {
        let f281 = make_field(281, 1, None).unwrap();
        assert_eq!(f281.element_order(2).unwrap(), 70);
        let f13 = make_field(13, 1, None).unwrap();
        assert_eq!(f13.element_order(5).unwrap(), 4);
        assert_eq!(f13.element_order(1).unwrap(), 1);
        assert_eq!(f13.element_order(0), Err(FfError::ZeroElement));
    }

    #[test]
    fn roots_of_unity() {
        let f13 = make_field(13, 1, None).unwrap();
        let i = f13.nth_root_of_unity(4).unwrap();
        // Enumerate F_13^x for the elements of order 4.
        let order4: Vec<u64> = (1..13).filter(|&x| f13.element_order(x).unwrap() == 4).collect();
        assert_eq!(order4, vec![5, 8]);
        assert!(order4.contains(&i));
        let f27 = make_field(3, 3, None).unwrap();
        let z = f27.nth_root_of_unity(13).unwrap();
        assert_eq!(f27.element_order(z).unwrap(), 13);
        assert_eq!(f27.nth_root_of_unity(1).unwrap(), 1);
        assert!(matches!(f27.nth_root_of_unity(5), Err(FfError::NoSuchRoot { .. })));
    }

    #[test]
    fn embeddings() {
        let f3 = make_field(3, 1, None).unwrap();
        let f27 = make_field(3, 3, None).unwrap();
        assert_eq!(f3.element(1).embed(&f27).unwrap().raw(), 1);
        let f4 = make_field(2, 2, None).unwrap();
        let f16 = make_field(2, 4, None).unwrap();
        let g = f4.element(f4.generator());
        assert_eq!(g.embed(&f16).unwrap().order().unwrap(), 3);
        let f9 = make_field(3, 2, None).unwrap();
        assert!(f9.embedding_into(&f27).is_err());
    }

    #[test]
    fn large_field_without_tables() {
        let f = make_field(3, 13, None).unwrap();
        assert!(f.order() > TABLE_LIMIT);
        let g = f.generator();
        let gi = f.inv(g).unwrap();
        assert_eq!(f.mul(g, gi), 1);
        assert_eq!(f.pow(g, f.order() - 1), 1);
    }

    #[test]
    fn json_round_trip() {
        let f = make_field(3, 3, None).unwrap();
        let x = f.element(17);
        let j = serde_json::to_value(x.to_json()).unwrap();
        assert_eq!(j["char"], 3);
        assert_eq!(j["deg"], 3);
        let back: FieldElementJson = serde_json::from_value(j).unwrap();
        assert_eq!(FieldElement::from_json(&back).unwrap(), x);
    }
}
