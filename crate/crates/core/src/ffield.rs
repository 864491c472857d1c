//! Finite fields `F_q` with `q = p^ell`.
//!
//! Elements are stored by their canonical integer code `sum coeffs[i] * p^i`,
//! where `coeffs` are the coefficients of the reduced polynomial representative
//! in `F_p[X]/(modulus)`, lowest degree first. Code order is the total order on
//! elements used everywhere else in the crate: enumeration, matrix columns and
//! the mixed-radix encoding of points.
//!
//! The modulus is the monic irreducible polynomial of degree `ell` with the
//! least code (leading coefficient included), so a given `(p, ell)` always
//! yields the same model of the field.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extension fields keep exp/log tables of this many entries at most.
const MAX_EXTENSION_ORDER: u64 = 1 << 20;

/// An element of some [`FieldSpec`], identified by its canonical code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct FieldData {
    p: u32,
    ell: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp[i] = g^i for a fixed generator g; only populated when ell > 1.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field `F_{p^ell}`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    data: Arc<FieldData>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p())
            .field("ell", &self.ell())
            .field("modulus", &self.data.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.p == other.data.p && self.data.ell == other.data.ell)
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds `F_{p^ell}` with the canonical (least-code) irreducible modulus.
pub fn make_field(p: u64, ell: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if ell == 0 {
        return Err(Error::ZeroExtensionDegree);
    }
    if p > u32::MAX as u64 / 2 {
        return Err(Error::FieldTooLarge { p, ell });
    }
    let q = p
        .checked_pow(ell)
        .filter(|&q| ell == 1 || q <= MAX_EXTENSION_ORDER)
        .ok_or(Error::FieldTooLarge { p, ell })?;
    let p = p as u32;
    let q = q as u32;

    let modulus = least_irreducible(p, ell as usize);
    let (exp, log) = if ell > 1 {
        build_log_tables(p, q, &modulus)
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(FieldSpec {
        data: Arc::new(FieldData {
            p,
            ell,
            q,
            modulus,
            exp,
            log,
        }),
    })
}

/// Monic irreducible of degree `deg` over `F_p` with least code, by exhaustive
/// trial division against every monic polynomial of degree `1..=deg/2`.
fn least_irreducible(p: u32, deg: usize) -> Vec<u32> {
    let lower_count = (p as u64).pow(deg as u32);
    for low in 0..lower_count {
        let mut poly = digits(low, p, deg);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial exists in every degree")
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for low in 0..(p as u64).pow(d as u32) {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`, coefficients low to high.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p;
        if lead != 0 {
            let base = r.len() - dm;
            for (i, &mc) in m[..dm].iter().enumerate() {
                r[base + i] = (r[base + i] + (p - lead) * mc as u64) % p;
            }
        }
    }
    r.iter().map(|&c| (c % p) as u32).collect()
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn code_of(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn build_log_tables(p: u32, q: u32, modulus: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let ell = modulus.len() - 1;
    let order = q - 1;
    for g in 2..q {
        let gc = digits(g as u64, p, ell);
        let mut exp = Vec::with_capacity(order as usize);
        let mut cur = digits(1, p, ell);
        let mut generator = true;
        for i in 0..order {
            let c = code_of(&cur, p);
            if i > 0 && c == 1 {
                generator = false;
                break;
            }
            exp.push(c);
            cur = poly_mulmod(&cur, &gc, modulus, p);
        }
        if generator {
            let mut log = vec![0u32; q as usize];
            for (i, &c) in exp.iter().enumerate() {
                log[c as usize] = i as u32;
            }
            return (exp, log);
        }
    }
    // F_4 and up always have a generator among codes >= 2; q = 2, 3 never reach here.
    unreachable!("multiplicative group is cyclic")
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.data.p
    }

    pub fn ell(&self) -> u32 {
        self.data.ell
    }

    pub fn q(&self) -> u32 {
        self.data.q
    }

    /// Modulus coefficients, lowest degree first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.data.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.data.ell == 1
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// Element with the given code, checked against `q`.
    pub fn elem(&self, code: u64) -> Result<FieldElem> {
        if code < self.q() as u64 {
            Ok(FieldElem(code as u32))
        } else {
            Err(Error::InvalidElement { code, q: self.q() })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElem {
        FieldElem(k.rem_euclid(self.p() as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.ell() as usize {
            return Err(Error::DimensionMismatch {
                expected: self.ell() as usize,
                found: coeffs.len(),
            });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.p()) {
            return Err(Error::InvalidElement {
                code: bad as u64,
                q: self.p(),
            });
        }
        Ok(FieldElem(code_of(coeffs, self.p())))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        digits(x.0 as u64, self.p(), self.ell() as usize)
    }

    /// All `q` elements in code order; index 0 is zero.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q()).map(FieldElem)
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        let p = self.p();
        if self.is_prime_field() {
            let s = x.0 + y.0;
            return FieldElem(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return FieldElem(x.0 ^ y.0);
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.ell() {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale = scale.wrapping_mul(p);
        }
        FieldElem(out)
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        let p = self.p();
        if self.is_prime_field() {
            return FieldElem(if x.0 == 0 { 0 } else { p - x.0 });
        }
        let mut a = x.0;
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.ell() {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale = scale.wrapping_mul(p);
        }
        FieldElem(out)
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if self.is_prime_field() {
            return FieldElem(((x.0 as u64 * y.0 as u64) % self.p() as u64) as u32);
        }
        if x.0 == 0 || y.0 == 0 {
            return FieldElem::ZERO;
        }
        let d = &self.data;
        let order = d.q - 1;
        let e = (d.log[x.0 as usize] + d.log[y.0 as usize]) % order;
        FieldElem(d.exp[e as usize])
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if self.is_prime_field() {
            return Ok(self.pow(x, self.q() as u64 - 2));
        }
        let d = &self.data;
        let order = d.q - 1;
        let e = (order - d.log[x.0 as usize]) % order;
        Ok(FieldElem(d.exp[e as usize]))
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^k` with `0^0 = 1`.
    pub fn pow(&self, x: FieldElem, mut k: u64) -> FieldElem {
        let mut base = x;
        let mut acc = FieldElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Componentwise sum of two vectors over this field.
    pub fn add_vec(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        x.iter().zip(y).map(|(&a, &b)| self.add(a, b)).collect()
    }

    pub fn sub_vec(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        x.iter().zip(y).map(|(&a, &b)| self.sub(a, b)).collect()
    }
}

/// Packs a vector of `F_p^n` into `F_{p^ell}^{n/ell}`.
///
/// Block `i` holds coordinates `i*ell .. (i+1)*ell`, read as polynomial
/// coefficients with the lowest index as the constant term. The map is an
/// additive bijection and does not depend on the modulus of `F_{p^ell}`.
pub fn phi_pack(p: u32, ell: usize, x: &[FieldElem]) -> Result<Vec<FieldElem>> {
    if ell == 0 || !x.len().is_multiple_of(ell) {
        return Err(Error::NotDivisible { ell, n: x.len() });
    }
    if let Some(bad) = x.iter().find(|e| e.0 >= p) {
        return Err(Error::InvalidElement {
            code: bad.0 as u64,
            q: p,
        });
    }
    Ok(x.chunks(ell)
        .map(|block| {
            let coeffs: Vec<u32> = block.iter().map(|e| e.0).collect();
            FieldElem(code_of(&coeffs, p))
        })
        .collect())
}

/// Inverse of [`phi_pack`].
pub fn phi_unpack(p: u32, ell: usize, y: &[FieldElem]) -> Result<Vec<FieldElem>> {
    if ell == 0 {
        return Err(Error::NotDivisible { ell, n: y.len() });
    }
    let q = (p as u64).pow(ell as u32);
    let mut out = Vec::with_capacity(y.len() * ell);
    for e in y {
        if e.0 as u64 >= q {
            return Err(Error::InvalidElement {
                code: e.0 as u64,
                q: q as u32,
            });
        }
        out.extend(digits(e.0 as u64, p, ell).into_iter().map(FieldElem));
    }
    Ok(out)
}
