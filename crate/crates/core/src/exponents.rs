//! Exponent tuples and the integer combinatorics around them.
//!
//! Monomials are ordered graded-then-lex: by weight, then lexicographically
//! ascending on `(a_1, ..., a_n)`. That order fixes the column order of every
//! evaluation and expansion matrix downstream.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector `(a_1, ..., a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpTuple(pub Vec<u32>);

impl ExpTuple {
    pub fn zero(n: usize) -> Self {
        ExpTuple(vec![0; n])
    }

    /// The tuple `(k, ..., k)`.
    pub fn constant(n: usize, k: u32) -> Self {
        ExpTuple(vec![k; n])
    }

    /// The unit tuple `e_i` (zero-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExpTuple(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &ExpTuple) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &ExpTuple) -> Result<ExpTuple> {
        check_dims(self.dim(), other.dim())?;
        Ok(ExpTuple(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// Graded-then-lex comparison.
    pub fn graded_cmp(&self, other: &ExpTuple) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for ExpTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for ExpTuple {
    fn from(v: Vec<u32>) -> Self {
        ExpTuple(v)
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// All `a` in `N^n` with `|a| <= max_degree` and every part `<= cap`, in
/// graded-then-lex order.
pub fn enumerate_monomials(n: usize, max_degree: u64, cap: u32) -> Vec<ExpTuple> {
    let mut out = Vec::new();
    let top = max_degree.min(cap as u64 * n as u64);
    let mut buf = vec![0u32; n];
    for w in 0..=top {
        fill_weight(&mut buf, 0, w, cap, &mut out);
    }
    out
}

/// Tuples of exact weight `w`, lex ascending.
pub fn monomials_of_weight(n: usize, w: u64, cap: u32) -> Vec<ExpTuple> {
    let mut out = Vec::new();
    let mut buf = vec![0u32; n];
    fill_weight(&mut buf, 0, w, cap, &mut out);
    out
}

fn fill_weight(buf: &mut [u32], pos: usize, remaining: u64, cap: u32, out: &mut Vec<ExpTuple>) {
    let n = buf.len();
    if pos + 1 == n {
        if remaining <= cap as u64 {
            buf[pos] = remaining as u32;
            out.push(ExpTuple(buf.to_vec()));
        }
        return;
    }
    if n == 0 {
        if remaining == 0 {
            out.push(ExpTuple(Vec::new()));
        }
        return;
    }
    let rest_cap = cap as u64 * (n - pos - 1) as u64;
    let lo = remaining.saturating_sub(rest_cap);
    let hi = remaining.min(cap as u64);
    for a in lo..=hi {
        buf[pos] = a as u32;
        fill_weight(buf, pos + 1, remaining - a, cap, out);
    }
}

/// `N(q, n, D)`: the number of `n`-variable monomials of degree at most `D`
/// with every individual degree at most `q - 1`.
pub fn count_n(q: u64, n: usize, max_degree: u64) -> u128 {
    let cap = q.saturating_sub(1);
    let top = max_degree.min(cap * n as u64) as usize;
    // ways[w] = number of tuples over the coordinates seen so far with weight w
    let mut ways = vec![0u128; top + 1];
    ways[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; top + 1];
        for (w, &c) in ways.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in 0..=(cap as usize).min(top - w) {
                next[w + a] += c;
            }
        }
        ways = next;
    }
    ways.iter().sum()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Sum of the base-`p` digits of `k`.
pub fn digit_sum(p: u64, mut k: u64) -> u64 {
    let mut s = 0;
    while k > 0 {
        s += k % p;
        k /= p;
    }
    s
}

/// `sum_{i >= 1} floor(k / p^i)`.
pub fn vp_factorial_floor_sum(p: u64, k: u64) -> u64 {
    let mut total = 0;
    let mut pk = p;
    while pk <= k {
        total += k / pk;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    total
}

/// `(k - s_p(k)) / (p - 1)`.
pub fn vp_factorial_digit_form(p: u64, k: u64) -> u64 {
    (k - digit_sum(p, k)) / (p - 1)
}

/// The exponent of `p` in `k!`. Both Legendre forms are computed and must agree.
pub fn vp_factorial(p: u64, k: u64) -> u64 {
    let by_floors = vp_factorial_floor_sum(p, k);
    let by_digits = vp_factorial_digit_form(p, k);
    assert_eq!(by_floors, by_digits, "Legendre forms disagree for p={p}, k={k}");
    by_floors
}

/// Binomial coefficient reduced mod the prime `p`, by Lucas' theorem.
pub fn binomial_mod_p(p: u64, mut n: u64, mut k: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = acc * (binomial(nd, kd) % p as u128) as u64 % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Whether `z! / prod_i alpha_i!` is nonzero mod `p`.
///
/// Decided per coordinate by Kummer: the base-`p` digits of the parts must add
/// without carries. The valuation count `v_p(z_j!) = sum_i v_p(alpha_ij!)` is
/// evaluated alongside and must give the same answer.
pub fn multinomial_nonzero_mod_p(p: u64, z: &ExpTuple, alphas: &[ExpTuple]) -> Result<bool> {
    for a in alphas {
        check_dims(z.dim(), a.dim())?;
    }
    for j in 0..z.dim() {
        let total: u64 = alphas.iter().map(|a| a.0[j] as u64).sum();
        if total != z.0[j] as u64 {
            return Err(Error::BadDecomposition);
        }
    }
    let mut carry_free = true;
    let mut valuation_zero = true;
    for j in 0..z.dim() {
        let mut parts: Vec<u64> = alphas.iter().map(|a| a.0[j] as u64).collect();
        while parts.iter().any(|&x| x > 0) {
            let digit_total: u64 = parts.iter().map(|x| x % p).sum();
            if digit_total >= p {
                carry_free = false;
            }
            parts.iter_mut().for_each(|x| *x /= p);
        }
        let lhs = vp_factorial(p, z.0[j] as u64);
        let rhs: u64 = alphas.iter().map(|a| vp_factorial(p, a.0[j] as u64)).sum();
        if lhs != rhs {
            valuation_zero = false;
        }
    }
    assert_eq!(
        carry_free, valuation_zero,
        "Kummer and Legendre criteria disagree on {z} = {alphas:?}"
    );
    Ok(carry_free)
}

/// Multinomial `z! / prod_i alpha_i!` reduced mod `p`, as a product of
/// binomials `binom(a_1 + ... + a_i, a_i)` each reduced by Lucas.
pub fn multinomial_mod_p(p: u64, alphas: &[ExpTuple]) -> u64 {
    let n = alphas.first().map_or(0, ExpTuple::dim);
    let mut acc = 1u64;
    for j in 0..n {
        let mut running = 0u64;
        for a in alphas {
            let part = a.0[j] as u64;
            running += part;
            acc = acc * binomial_mod_p(p, running, part) % p;
        }
    }
    acc
}

/// Parts `alpha^(1..m)` summing to `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub alphas: Vec<ExpTuple>,
    pub target: ExpTuple,
}

/// Searches for `alpha^(1), ..., alpha^(m)` with `|alpha^(i)| <= budgets[i]`
/// summing to `(q-1, ..., q-1)` with multinomial nonzero mod `p`.
///
/// Every base-`p` digit of `q - 1` is `p - 1`, so a valid split is exactly a
/// carry-free one: in each (digit position, coordinate) slot the digits of the
/// parts add up to `p - 1`. Slots are visited from the most significant digit
/// down, coordinates ascending. Within a slot, splits are tried by increasing
/// largest share, then lexicographically; the first complete assignment found
/// is returned.
pub fn find_decomposition(p: u64, ell: u32, n: usize, budgets: &[u64]) -> Option<Decomposition> {
    let q = p.checked_pow(ell)?;
    let m = budgets.len();
    if m == 0 || n == 0 {
        return None;
    }
    let need = (q - 1) * n as u64;
    if budgets.iter().sum::<u64>() < need {
        return None;
    }
    let mut slots = Vec::with_capacity(n * ell as usize);
    for t in (0..ell).rev() {
        for j in 0..n {
            slots.push((j, p.pow(t)));
        }
    }
    let mut search = DecompositionSearch {
        p,
        budgets,
        slots,
        weights: vec![0; m],
        alphas: vec![vec![0u64; n]; m],
    };
    if !search.slot(0, need) {
        return None;
    }
    let alphas: Vec<ExpTuple> = search
        .alphas
        .iter()
        .map(|a| ExpTuple(a.iter().map(|&x| x as u32).collect()))
        .collect();
    let decomposition = Decomposition {
        alphas,
        target: ExpTuple::constant(n, (q - 1) as u32),
    };
    debug_assert!(multinomial_nonzero_mod_p(p, &decomposition.target, &decomposition.alphas).unwrap());
    Some(decomposition)
}

struct DecompositionSearch<'a> {
    p: u64,
    budgets: &'a [u64],
    slots: Vec<(usize, u64)>,
    weights: Vec<u64>,
    alphas: Vec<Vec<u64>>,
}

impl DecompositionSearch<'_> {
    /// `remaining` is the weight still to be distributed over slots `idx..`.
    fn slot(&mut self, idx: usize, remaining: u64) -> bool {
        if idx == self.slots.len() {
            return true;
        }
        let slack: u64 = self
            .budgets
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| b - w)
            .sum();
        if slack < remaining {
            return false;
        }
        let m = self.budgets.len() as u64;
        let digit = self.p - 1;
        let lo = digit.div_ceil(m);
        for largest in lo..=digit {
            if self.part(idx, remaining, 0, digit, largest, false) {
                return true;
            }
        }
        false
    }

    /// Assigns the share of part `i` in slot `idx`; shares never exceed
    /// `largest` and at least one equals it.
    fn part(&mut self, idx: usize, remaining: u64, i: usize, left: u64, largest: u64, hit: bool) -> bool {
        let m = self.budgets.len();
        let (coord, scale) = self.slots[idx];
        if i + 1 == m {
            if left > largest || !(hit || left == largest) {
                return false;
            }
            return self.place(i, left * scale, coord, |s| {
                s.slot(idx + 1, remaining - (s.p - 1) * scale)
            });
        }
        let others = (m - i - 1) as u64;
        let lo = left.saturating_sub(others * largest);
        for share in lo..=left.min(largest) {
            let hit_now = hit || share == largest;
            if self.place(i, share * scale, coord, |s| {
                s.part(idx, remaining, i + 1, left - share, largest, hit_now)
            }) {
                return true;
            }
        }
        false
    }

    fn place(&mut self, i: usize, added: u64, coord: usize, next: impl FnOnce(&mut Self) -> bool) -> bool {
        if self.weights[i] + added > self.budgets[i] {
            return false;
        }
        self.weights[i] += added;
        self.alphas[i][coord] += added;
        let found = next(self);
        if !found {
            self.weights[i] -= added;
            self.alphas[i][coord] -= added;
        }
        found
    }
}
