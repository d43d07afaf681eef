//! Arithmetic in finite fields `F_{p^e}`.
//!
//! An element is a coefficient vector `(a_0, ..., a_{e-1})` in the basis
//! `1, t, ..., t^{e-1}` modulo a fixed monic irreducible polynomial. The vector
//! is packed into a `u32` as `sum a_k p^k` ("raw" form); polynomial code stores
//! raw coefficients and keeps the [`FieldSpec`] once per polynomial.
//!
//! Multiplication goes through discrete log/antilog tables built once per
//! field. The tables are a lookup accelerator only: the element representation
//! and every observable (text form, enumeration order) is the coefficient
//! vector.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

/// Largest field order accepted by [`make_field`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

/// Hard ceiling for [`make_field_with_cap`]; raw values and tables must fit in memory.
const ABSOLUTE_FIELD_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree {0} is out of range")]
    DegreeOutOfRange(u32),
    #[error("field order {p}^{e} exceeds the cap {cap}")]
    CapExceeded { p: u64, e: u32, cap: u64 },
    #[error("operands live in different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

struct FieldData {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    /// `place[k] = p^k`.
    place: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`, `g` a fixed primitive element.
    exp: Vec<u32>,
    /// Inverse of `exp` on nonzero elements; `log[0]` is unused.
    log: Vec<u32>,
}

/// A finite field `F_{p^e}` with a fixed polynomial basis.
///
/// Cloning is cheap (shared immutable data).
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.e == other.0.e)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.e.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.e)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.e)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_{p^e}` with the default cap. Results are cached per `(p, e)`.
pub fn make_field(p: u64, e: u32) -> Result<FieldSpec, FieldError> {
    make_field_with_cap(p, e, DEFAULT_FIELD_CAP)
}

pub fn make_field_with_cap(p: u64, e: u32, cap: u64) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 || e > 32 {
        return Err(FieldError::DegreeOutOfRange(e));
    }
    let cap = cap.min(ABSOLUTE_FIELD_CAP);
    let order = p.checked_pow(e).filter(|&q| q <= cap);
    if order.is_none() {
        return Err(FieldError::CapExceeded { p, e, cap });
    }

    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FieldSpec>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(spec) = cache.lock().unwrap().get(&(p, e)) {
        return Ok(spec.clone());
    }
    let spec = FieldSpec(Arc::new(FieldData::build(p as u32, e)));
    cache.lock().unwrap().entry((p, e)).or_insert(spec.clone());
    Ok(spec)
}

// ---- dense polynomials over F_p used only while building a field ----

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    // b monic
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let p64 = p as u64;
    while r.len() > db {
        let lead = r.pop().unwrap() % p64;
        if lead == 0 {
            continue;
        }
        let shift = r.len() - db;
        for k in 0..db {
            let sub = lead * b[k] as u64 % p64;
            r[shift + k] = (r[shift + k] + p64 - sub) % p64;
        }
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e`, comparing the
/// coefficient vectors `(a_0, ..., a_{e-1})` with `a_0` most significant.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let total = (p as u64).pow(e as u32);
    for idx in 0..total {
        let mut f = vec![0u32; e + 1];
        for k in 0..e {
            f[k] = ((idx / (p as u64).pow((e - 1 - k) as u32)) % p as u64) as u32;
        }
        f[e] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldData {
    fn build(p: u32, e: u32) -> Self {
        let modulus = smallest_irreducible(p, e);
        let q = p.pow(e);
        let place: Vec<u32> = (0..e).map(|k| p.pow(k)).collect();
        let mut data = FieldData { p, e, q, modulus, place, exp: Vec::new(), log: Vec::new() };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let g = (1..q)
            .find(|&g| factors.iter().all(|&r| data.slow_pow(g, order / r) != 1))
            .expect("multiplicative group is cyclic");

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = data.slow_mul(cur, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        data.exp = exp;
        data.log = log;
        data
    }

    fn digits(&self, raw: u32) -> Vec<u32> {
        let mut v = raw;
        (0..self.e)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn pack(&self, digits: &[u32]) -> u32 {
        digits.iter().zip(&self.place).map(|(d, pl)| d * pl).sum()
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let e = self.e as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * e - 1];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let r = poly_rem(&prod, &self.modulus, self.p);
        let mut out = vec![0u32; e];
        out[..r.len().min(e)].copy_from_slice(&r[..r.len().min(e)]);
        self.pack(&out)
    }

    fn slow_pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            k >>= 1;
        }
        acc
    }
}

fn mod_pow(mut b: u64, mut k: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        k >>= 1;
    }
    acc
}

/// Which Frobenius a [`FieldElement::frobenius_power`] call iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobeniusBase {
    /// `a -> a^p`.
    Prime,
    /// `a -> a^q` with `q` the field order (the identity map).
    Order,
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Order of the subfield fixed by [`FieldSpec::conj`], i.e. `sqrt(q)`.
    pub fn half_order(&self) -> Option<u32> {
        (self.0.e % 2 == 0).then(|| self.0.p.pow(self.0.e / 2))
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let d = &*self.0;
        if d.p == 2 {
            a ^ b
        } else if d.e == 1 {
            (a + b) % d.p
        } else {
            let (mut a, mut b, mut out) = (a, b, 0);
            for pl in &d.place {
                let s = (a % d.p + b % d.p) % d.p;
                out += s * pl;
                a /= d.p;
                b /= d.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let d = &*self.0;
        if d.p == 2 {
            a
        } else if d.e == 1 {
            (d.p - a) % d.p
        } else {
            let (mut a, mut out) = (a, 0);
            for pl in &d.place {
                out += ((d.p - a % d.p) % d.p) * pl;
                a /= d.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let d = &*self.0;
        if d.e == 1 {
            return ((a as u64 * b as u64) % d.p as u64) as u32;
        }
        d.exp[(d.log[a as usize] + d.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let d = &*self.0;
        let n = d.q - 1;
        Some(d.exp[((n - d.log[a as usize]) % n.max(1)) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let d = &*self.0;
        let n = (d.q - 1) as u64;
        let l = d.log[a as usize] as u64;
        d.exp[(l as u128 * (k % n.max(1)) as u128 % n.max(1) as u128) as usize]
    }

    /// `a^{p^k}`.
    pub fn frob_p(&self, a: u32, k: u64) -> u32 {
        if a == 0 || self.0.e == 1 {
            return a;
        }
        let n = (self.0.q - 1) as u64;
        self.pow(a, mod_pow(self.0.p as u64, k, n))
    }

    /// The involution `a -> a^{sqrt(q)}` of `F_{q}` over its half-degree subfield.
    /// Panics when `e` is odd.
    pub fn conj(&self, a: u32) -> u32 {
        assert!(self.0.e % 2 == 0, "conjugation needs an even extension degree");
        self.frob_p(a, (self.0.e / 2) as u64)
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }

    pub fn in_prime_subfield(&self, a: u32) -> bool {
        a < self.0.p
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32, FieldError> {
        if coeffs.len() > self.0.e as usize {
            return Err(FieldError::Parse(format!("{coeffs:?}")));
        }
        let mut digits = vec![0u32; self.0.e as usize];
        for (d, &c) in digits.iter_mut().zip(coeffs) {
            *d = c % self.0.p;
        }
        Ok(self.0.pack(&digits))
    }

    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        self.0.digits(a)
    }

    /// Raw values in coefficient-vector lexicographic order (`a_0` most significant).
    pub fn enumerate_raw(&self) -> Vec<u32> {
        let d = &*self.0;
        let e = d.e as usize;
        (0..d.q)
            .map(|idx| {
                let digits: Vec<u32> =
                    (0..e).map(|k| (idx / d.p.pow((e - 1 - k) as u32)) % d.p).collect();
                d.pack(&digits)
            })
            .collect()
    }

    pub fn enumerate_elements(&self) -> Vec<FieldElement> {
        self.enumerate_raw().into_iter().map(|r| self.element(r)).collect()
    }

    pub fn element(&self, raw: u32) -> FieldElement {
        assert!(raw < self.0.q, "raw value {raw} outside {self}");
        FieldElement { spec: self.clone(), raw }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Text form: an integer for prime fields, otherwise `a0+a1*t+...` with zero
    /// terms omitted and unit coefficients on powers of `t` elided.
    pub fn format_raw(&self, a: u32) -> String {
        if self.0.e == 1 || a == 0 {
            return a.to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.0.digits(a).into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let tpow = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            parts.push(match (k, c) {
                (0, c) => c.to_string(),
                (_, 1) => tpow,
                (_, c) => format!("{c}*{tpow}"),
            });
        }
        parts.join("+")
    }

    pub fn parse_raw(&self, s: &str) -> Result<u32, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
        if s.is_empty() {
            return Err(err());
        }
        let mut digits = vec![0u32; self.0.e as usize];
        for term in s.split('+') {
            let term = term.trim();
            let (coef, power) = match term.split_once('*') {
                Some((c, t)) => (c.trim().parse::<u64>().map_err(|_| err())?, parse_tpow(t.trim()).ok_or_else(err)?),
                None => match parse_tpow(term) {
                    Some(k) => (1, k),
                    None => (term.parse::<u64>().map_err(|_| err())?, 0),
                },
            };
            if power >= self.0.e as usize {
                return Err(err());
            }
            if self.0.e == 1 && coef >= self.0.p as u64 {
                return Err(err());
            }
            digits[power] = ((digits[power] as u64 + coef) % self.0.p as u64) as u32;
        }
        Ok(self.0.pack(&digits))
    }
}

fn parse_tpow(s: &str) -> Option<usize> {
    if s == "t" {
        return Some(1);
    }
    s.strip_prefix("t^")?.parse().ok()
}

/// An element of a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    raw: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.spec)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec.format_raw(self.raw))
    }
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn raw(&self) -> u32 {
        self.raw
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.spec.coeffs(self.raw)
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    pub fn parse(spec: &FieldSpec, s: &str) -> Result<Self, FieldError> {
        Ok(spec.element(spec.parse_raw(s)?))
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.spec.element(self.spec.add(self.raw, other.raw)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.spec.element(self.spec.sub(self.raw, other.raw)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.spec.element(self.spec.mul(self.raw, other.raw)))
    }

    pub fn neg(&self) -> Self {
        self.spec.element(self.spec.neg(self.raw))
    }

    pub fn invert(&self) -> Result<Self, FieldError> {
        let inv = self.spec.inv(self.raw).ok_or(FieldError::DivisionByZero)?;
        Ok(self.spec.element(inv))
    }

    pub fn pow(&self, k: u64) -> Self {
        self.spec.element(self.spec.pow(self.raw, k))
    }

    /// `a^{p^k}` or `a^{q^k}` depending on `base`.
    pub fn frobenius_power(&self, k: u64, base: FrobeniusBase) -> Self {
        match base {
            FrobeniusBase::Prime => self.spec.element(self.spec.frob_p(self.raw, k)),
            FrobeniusBase::Order => self.clone(),
        }
    }

    /// `a -> a^{sqrt(q)}`; `None` when the extension degree is odd.
    pub fn conjugate(&self) -> Option<Self> {
        (self.spec.e() % 2 == 0).then(|| self.spec.element(self.spec.conj(self.raw)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, e: u32) -> FieldSpec {
        make_field(p, e).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(2, 0).unwrap_err(), FieldError::DegreeOutOfRange(0));
        assert!(matches!(make_field(2, 17), Err(FieldError::CapExceeded { .. })));
        assert!(matches!(make_field_with_cap(3, 3, 20), Err(FieldError::CapExceeded { .. })));
    }

    #[test]
    fn prime_fields() {
        let f2 = f(2, 1);
        assert_eq!((f2.p(), f2.e(), f2.q()), (2, 1, 2));
        let f3 = f(3, 1);
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f3.inv(2), Some(2));
        assert_eq!(f2.inv(1), Some(1));
    }

    /// Independent oracle: every monic quadratic over F_2 with a root in F_2 is reducible.
    #[test]
    fn f4_modulus_is_only_irreducible_quadratic() {
        let mut irreducible = Vec::new();
        for a0 in 0..2u32 {
            for a1 in 0..2u32 {
                let has_root = (0..2u32).any(|x| (x * x + a1 * x + a0) % 2 == 0);
                if !has_root {
                    irreducible.push(vec![a0, a1, 1]);
                }
            }
        }
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f9_modulus_is_lexicographically_smallest() {
        // t^2+1 is irreducible over F_3 because -1 is not a square mod 3.
        assert_eq!(f(3, 2).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn f4_arithmetic() {
        let f4 = f(2, 2);
        let t = f4.parse_raw("t").unwrap();
        let t1 = f4.parse_raw("1+t").unwrap();
        assert_eq!(f4.mul(t, t), t1);
        assert_eq!(f4.inv(t), Some(t1));
        assert_eq!(f4.frob_p(t, 1), t1);
        assert_eq!(f4.format_raw(t1), "1+t");
    }

    #[test]
    fn frobenius_order_base_is_identity_and_conjugation_is_involution() {
        let f9 = f(3, 2);
        for a in f9.enumerate_elements() {
            assert_eq!(a.frobenius_power(1, FrobeniusBase::Order), a);
            let c = a.conjugate().unwrap();
            assert_eq!(c, a.pow(3));
            assert_eq!(c.conjugate().unwrap(), a);
        }
        assert!(f(2, 1).one().conjugate().is_none());
    }

    #[test]
    fn enumeration_order_and_size() {
        let f2: Vec<String> = f(2, 1).enumerate_elements().iter().map(|a| a.to_string()).collect();
        assert_eq!(f2, ["0", "1"]);
        let f3: Vec<String> = f(3, 1).enumerate_elements().iter().map(|a| a.to_string()).collect();
        assert_eq!(f3, ["0", "1", "2"]);
        let f4 = f(2, 2).enumerate_elements();
        assert_eq!(f4.len(), 4);
        let mut raws: Vec<u32> = f4.iter().map(|a| a.raw()).collect();
        raws.sort();
        raws.dedup();
        assert_eq!(raws.len(), 4);
        let coeffs: Vec<Vec<u32>> = f4.iter().map(|a| a.coeffs()).collect();
        assert_eq!(coeffs, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn field_axioms_by_enumeration() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 1), (7, 1), (13, 1)] {
            let k = f(p, e);
            let els = k.enumerate_raw();
            for &a in &els {
                assert_eq!(k.pow(a, k.q() as u64), a, "a^q = a in {k}");
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                    assert_eq!(k.inv(k.inv(a).unwrap()), Some(a));
                }
                for &b in &els {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    assert_eq!(k.sub(k.add(a, b), b), a);
                    let pp = k.p() as u64;
                    assert_eq!(k.pow(k.add(a, b), pp), k.add(k.pow(a, pp), k.pow(b, pp)));
                    for &c in &els {
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                        assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
                        assert_eq!(k.add(a, k.add(b, c)), k.add(k.add(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn tables_agree_with_schoolbook_multiplication() {
        let k = f(3, 4);
        for a in (0..k.q()).step_by(7) {
            for b in (0..k.q()).step_by(5) {
                assert_eq!(k.mul(a, b), k.0.slow_mul(a, b));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for (p, e) in [(2, 1), (3, 1), (2, 4), (3, 3), (5, 2)] {
            let k = f(p, e);
            for a in k.enumerate_raw() {
                let s = k.format_raw(a);
                assert_eq!(k.parse_raw(&s).unwrap(), a, "{s}");
            }
        }
        let f9 = f(3, 2);
        assert_eq!(f9.format_raw(f9.parse_raw("2*t+1").unwrap()), "1+2*t");
        assert!(f9.parse_raw("t^2").is_err());
        assert!(f(3, 1).parse_raw("5").is_err());
    }

    #[test]
    fn mismatched_specs() {
        let a = f(2, 1).one();
        let b = f(3, 1).one();
        assert_eq!(a.add(&b), Err(FieldError::SpecMismatch));
        assert_eq!(f(3, 1).zero().invert(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn large_field_builds() {
        let k = f(2, 16);
        assert_eq!(k.q(), 65536);
        let a = 12345;
        assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
    }
}
