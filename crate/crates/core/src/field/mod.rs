//! Exact arithmetic in the tower GF(p) ⊂ GF(q) ⊂ GF(q²), q = p^m.
//!
//! Nonzero elements of GF(q²) are stored as discrete logarithms with respect
//! to a fixed primitive element θ. Multiplication is exponent addition and
//! addition goes through a Zech-logarithm table, so a [`FieldTower`] is built
//! once and then shared read-only.

mod additive;
pub mod conway;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use additive::AdditiveMap;

const NONE: u32 = u32::MAX;

/// Default cap on the size of GF(q²) for which log tables are built.
pub const DEFAULT_MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of size {size} exceeds the table cap {cap}")]
    FieldTooLarge { size: u64, cap: u64 },
    #[error("no Conway polynomial for GF({p}^{degree}) in the built-in table")]
    NoConwayEntry { p: u32, degree: u32 },
    #[error("modulus is not primitive")]
    NotPrimitive,
    #[error("element {0} does not lie in GF(q)")]
    NotInBaseField(Element),
    #[error("zero has no norm preimage")]
    ZeroInput,
    #[error("map y -> y^2 + y is only additive in characteristic 2")]
    NotAdditive,
    #[error("cannot parse field element `{token}`: {reason}")]
    Parse { token: String, reason: String },
}

/// Options for [`FieldTower::with_config`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    /// Largest admissible q².
    pub max_field_size: u64,
    /// Fail instead of falling back to a searched primitive polynomial.
    pub strict_conway: bool,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            max_field_size: DEFAULT_MAX_FIELD_SIZE,
            strict_conway: false,
        }
    }
}

/// An element of GF(q²): zero, or θ^e with 0 ≤ e < q²−1.
///
/// The derived ordering puts nonzero elements by ascending discrete log and
/// zero last, which is the canonical point order used throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(NONE);
    pub const ONE: Element = Element(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == NONE
    }

    /// Discrete log with respect to θ, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }

    #[inline]
    fn raw(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(e) => write!(f, "t^{e}"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let token = String::deserialize(deserializer)?;
        token.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses the tower-independent token forms `0`, `1`, `t` and `t^e`.
///
/// Exponents are not reduced here; use [`FieldTower::parse_element`] when the
/// token may carry an unreduced exponent or a prime-field integer.
impl FromStr for Element {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let token = s.trim();
        let err = |reason: &str| FieldError::Parse {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        match token {
            "0" => Ok(Element::ZERO),
            "1" => Ok(Element::ONE),
            "t" => Ok(Element(1)),
            _ => {
                let exp = token
                    .strip_prefix("t^")
                    .ok_or_else(|| err("expected 0, 1, t or t^e"))?;
                let e: u32 = exp.parse().map_err(|_| err("bad exponent"))?;
                if e == NONE {
                    return Err(err("exponent out of range"));
                }
                Ok(Element(e))
            }
        }
    }
}

/// The chain GF(p) ⊂ GF(q) ⊂ GF(q²) with log, antilog and Zech tables.
pub struct FieldTower {
    p: u32,
    m: u32,
    q: u32,
    order: u32,
    modulus: Vec<u32>,
    conway: bool,
    /// `exp[e]` is the base-p encoding of θ^e in the polynomial basis.
    exp: Vec<u32>,
    /// Inverse of `exp`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[i] = log(1 + θ^i)`, or `NONE` when 1 + θ^i = 0.
    zech: Vec<u32>,
    neg_one: u32,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("conway", &self.conway)
            .finish()
    }
}

impl FieldTower {
    /// Builds GF(p^(2m)) with the default configuration.
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        Self::with_config(p, m, FieldConfig::default())
    }

    pub fn with_config(p: u32, m: u32, config: FieldConfig) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let degree = 2 * m;
        let size = (p as u64)
            .checked_pow(degree)
            .filter(|s| *s <= config.max_field_size)
            .ok_or(FieldError::FieldTooLarge {
                size: (p as f64).powi(degree as i32) as u64,
                cap: config.max_field_size,
            })?;
        let q = p.pow(m);
        let (modulus, tables, conway) = match conway::lookup(p, degree) {
            Some(coeffs) => {
                let tables = LogTables::build(p, degree, coeffs)?;
                (coeffs.to_vec(), tables, true)
            }
            None if config.strict_conway => {
                return Err(FieldError::NoConwayEntry { p, degree });
            }
            None => {
                let (modulus, tables) = least_primitive(p, degree);
                (modulus, tables, false)
            }
        };
        debug_assert_eq!(tables.exp.len() as u64, size - 1);
        let order = tables.exp.len() as u32;
        let neg_one = if p == 2 { 0 } else { order / 2 };
        Ok(Self {
            p,
            m,
            q,
            order,
            modulus,
            conway,
            exp: tables.exp,
            log: tables.log,
            zech: tables.zech,
            neg_one,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree of GF(q) over GF(p).
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// q², the size of the big field.
    pub fn size(&self) -> u32 {
        self.order + 1
    }

    /// q² − 1, the order of θ.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_conway(&self) -> bool {
        self.conway
    }

    /// Header label `p^(2m)` used in matrix files.
    pub fn label(&self) -> String {
        format!("{}^{}", self.p, 2 * self.m)
    }

    #[inline]
    pub fn theta_pow(&self, e: i64) -> Element {
        Element(e.rem_euclid(self.order as i64) as u32)
    }

    pub fn theta(&self) -> Element {
        self.theta_pow(1)
    }

    /// Every element of GF(q²): θ^0, …, θ^(q²−2), then 0.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element).chain(std::iter::once(Element::ZERO))
    }

    /// Embeds an integer through GF(p) → GF(q²).
    pub fn from_int(&self, value: i64) -> Element {
        let c = value.rem_euclid(self.p as i64) as usize;
        if c == 0 {
            Element::ZERO
        } else {
            Element(self.log[c])
        }
    }

    /// Inverse of [`FieldTower::from_int`] on the prime field.
    pub fn to_int(&self, x: Element) -> Option<u32> {
        match x.log() {
            None => Some(0),
            Some(e) => {
                let enc = self.exp[e as usize];
                (enc < self.p).then_some(enc)
            }
        }
    }

    /// Coordinates of `x` in the basis 1, θ, …, θ^(2m−1).
    pub fn coordinates(&self, x: Element) -> Vec<u32> {
        let mut enc = x.log().map_or(0, |e| self.exp[e as usize]);
        let mut out = Vec::with_capacity(2 * self.m as usize);
        for _ in 0..2 * self.m {
            out.push(enc % self.p);
            enc /= self.p;
        }
        out
    }

    pub fn from_coordinates(&self, coords: &[u32]) -> Element {
        let enc = coords
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p);
        if enc == 0 {
            Element::ZERO
        } else {
            Element(self.log[enc as usize])
        }
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (a, b) = (a.raw(), b.raw());
        let z = self.zech[self.wrap(b.wrapping_sub(a)) as usize];
        if z == NONE {
            Element::ZERO
        } else {
            Element(self.reduce(a + z))
        }
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        if a.is_zero() {
            a
        } else {
            Element(self.reduce(a.raw() + self.neg_one))
        }
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a.is_zero() || b.is_zero() {
            Element::ZERO
        } else {
            Element(self.reduce(a.raw() + b.raw()))
        }
    }

    /// Panics on a zero divisor.
    #[inline]
    pub fn div(&self, a: Element, b: Element) -> Element {
        assert!(!b.is_zero(), "division by zero in GF({}^{})", self.p, 2 * self.m);
        if a.is_zero() {
            a
        } else {
            Element(self.reduce(a.raw() + self.order - b.raw()))
        }
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.div(Element::ONE, a)
    }

    /// `a^e`; 0^0 = 1 and negative powers of zero panic.
    pub fn pow(&self, a: Element, e: i64) -> Element {
        match a.log() {
            None if e == 0 => Element::ONE,
            None => {
                assert!(e > 0, "negative power of zero");
                Element::ZERO
            }
            Some(l) => {
                let r = ((l as i128 * e as i128).rem_euclid(self.order as i128)) as u32;
                Element(r)
            }
        }
    }

    /// x ↦ x^q, the generator of Gal(GF(q²)/GF(q)).
    #[inline]
    pub fn frobenius(&self, a: Element) -> Element {
        match a.log() {
            None => a,
            Some(l) => Element(((l as u64 * self.q as u64) % self.order as u64) as u32),
        }
    }

    /// x^(q+1), always in GF(q).
    pub fn relative_norm(&self, a: Element) -> Element {
        self.pow(a, self.q as i64 + 1)
    }

    /// x + x^q, always in GF(q).
    pub fn relative_trace(&self, a: Element) -> Element {
        self.add(a, self.frobenius(a))
    }

    /// Trace from GF(q²) down to GF(p).
    pub fn absolute_trace(&self, a: Element) -> Element {
        let mut acc = Element::ZERO;
        let mut x = a;
        for _ in 0..2 * self.m {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as i64);
        }
        acc
    }

    /// Membership in GF(q): zero, or (q+1) divides the log.
    pub fn in_base_field(&self, a: Element) -> bool {
        a.log().is_none_or(|e| e % (self.q + 1) == 0)
    }

    /// The deterministic v with v^(q+1) = c: v = θ^(log c / (q+1)).
    pub fn norm_preimage(&self, c: Element) -> Result<Element, FieldError> {
        let e = c.log().ok_or(FieldError::ZeroInput)?;
        if e % (self.q + 1) != 0 {
            return Err(FieldError::NotInBaseField(c));
        }
        Ok(Element(e / (self.q + 1)))
    }

    /// Enumerates GF(q) as 0 followed by θ^(j(q+1)) for j = 0, …, q−2.
    pub fn base_field_elements(&self) -> Vec<Element> {
        std::iter::once(Element::ZERO)
            .chain((0..self.q - 1).map(|j| Element(j * (self.q + 1))))
            .collect()
    }

    pub fn sum<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items
            .into_iter()
            .fold(Element::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(Element::ONE, |acc, x| self.mul(acc, x))
    }

    /// Parses `0`, `1`, `t`, `t^e` (any e ≥ 0, reduced) and prime-field
    /// integers `0..p`.
    pub fn parse_element(&self, token: &str) -> Result<Element, FieldError> {
        let token = token.trim();
        let err = |reason: String| FieldError::Parse {
            token: token.to_string(),
            reason,
        };
        if let Some(exp) = token.strip_prefix("t^") {
            let e: u64 = exp.parse().map_err(|_| err("bad exponent".into()))?;
            return Ok(Element((e % self.order as u64) as u32));
        }
        if token == "t" {
            return Ok(self.theta());
        }
        if !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit()) {
            let v: u64 = token.parse().map_err(|_| err("bad integer".into()))?;
            if v >= self.p as u64 {
                return Err(err(format!("integer outside GF({})", self.p)));
            }
            return Ok(self.from_int(v as i64));
        }
        Err(err("expected 0, t^e or an integer below p".into()))
    }

    #[inline]
    fn reduce(&self, x: u32) -> u32 {
        self.wrap(x.wrapping_sub(self.order))
    }

    /// Adds the order back to a difference that went below zero.
    #[inline]
    fn wrap(&self, d: u32) -> u32 {
        d.wrapping_add(self.order & ((d as i32 >> 31) as u32))
    }
}

pub(crate) struct LogTables {
    pub(crate) exp: Vec<u32>,
    pub(crate) log: Vec<u32>,
    pub(crate) zech: Vec<u32>,
}

impl LogTables {
    /// Builds tables for GF(p^degree) = GF(p)[x]/(modulus), failing when the
    /// residue class of x is not primitive.
    pub(crate) fn build(p: u32, degree: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        debug_assert_eq!(modulus.len() as u32, degree + 1);
        let size = p.pow(degree);
        let order = size - 1;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NONE; size as usize];
        let mut digits = vec![0u32; degree as usize];
        digits[0] = 1;
        for e in 0..order {
            let enc = encode(&digits, p);
            if log[enc as usize] != NONE {
                return Err(FieldError::NotPrimitive);
            }
            log[enc as usize] = e;
            exp.push(enc);
            times_x(&mut digits, modulus, p);
        }
        if encode(&digits, p) != 1 {
            return Err(FieldError::NotPrimitive);
        }
        let zech = exp
            .iter()
            .map(|&enc| {
                let d0 = enc % p;
                let plus_one = enc - d0 + (d0 + 1) % p;
                if plus_one == 0 {
                    NONE
                } else {
                    log[plus_one as usize]
                }
            })
            .collect();
        Ok(Self { exp, log, zech })
    }
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn times_x(digits: &mut [u32], modulus: &[u32], p: u32) {
    let top = *digits.last().unwrap();
    for i in (1..digits.len()).rev() {
        digits[i] = digits[i - 1];
    }
    digits[0] = 0;
    if top != 0 {
        for (i, d) in digits.iter_mut().enumerate() {
            *d = (*d + p - (top * modulus[i]) % p) % p;
        }
    }
}

/// Least primitive monic polynomial, comparing the non-leading coefficients
/// as a base-p number with the x^(degree−1) coefficient most significant.
fn least_primitive(p: u32, degree: u32) -> (Vec<u32>, LogTables) {
    let count = p.pow(degree);
    for code in 1..count {
        let mut modulus: Vec<u32> = (0..degree).map(|i| (code / p.pow(i)) % p).collect();
        if modulus[0] == 0 {
            continue;
        }
        modulus.push(1);
        if let Ok(tables) = LogTables::build(p, degree, &modulus) {
            return (modulus, tables);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
