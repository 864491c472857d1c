//! Dense subsets of `F_q^n` and exact sumsets.
//!
//! A point `x` is stored at bit `sum_i code(x_i) q^(i-1)`, coordinate 1 least
//! significant. A sumset `S + T` is the union of the translates `s + T` over
//! the smaller operand; translates of whole rows (fixed coordinates `2..n`)
//! are done with word rotations when the field is prime and a row fits in 128
//! bits.

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};
use crate::shiftops::{PointList, DEFAULT_MAX_CELLS};

#[derive(Clone, PartialEq, Eq)]
pub struct DensePointSet {
    field: FieldSpec,
    n: usize,
    cells: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for DensePointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DensePointSet")
            .field("q", &self.field.q())
            .field("n", &self.n)
            .field("points", &self.codes())
            .finish()
    }
}

impl DensePointSet {
    pub fn empty(field: &FieldSpec, n: usize) -> Result<Self> {
        Self::empty_with_limit(field, n, DEFAULT_MAX_CELLS)
    }

    pub fn empty_with_limit(field: &FieldSpec, n: usize, max_cells: u64) -> Result<Self> {
        let cells = (field.q() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if cells > max_cells {
            return Err(Error::GuardExceeded {
                guard: "max-cells",
                required: cells,
                limit: max_cells,
            });
        }
        let cells = cells as usize;
        Ok(DensePointSet {
            field: field.clone(),
            n,
            cells,
            bits: vec![0; cells.div_ceil(64)],
        })
    }

    /// The whole space `F^n`.
    pub fn full(field: &FieldSpec, n: usize) -> Result<Self> {
        let mut s = Self::empty(field, n)?;
        for i in 0..s.cells {
            s.set(i);
        }
        Ok(s)
    }

    pub fn from_point_list(points: &PointList) -> Result<Self> {
        Self::from_point_list_with_limit(points, DEFAULT_MAX_CELLS)
    }

    pub fn from_point_list_with_limit(points: &PointList, max_cells: u64) -> Result<Self> {
        let mut s = Self::empty_with_limit(points.field(), points.dim(), max_cells)?;
        for pt in points.points() {
            s.insert(pt)?;
        }
        Ok(s)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `q^n`
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn index_of(&self, point: &[FieldElem]) -> Result<usize> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        let q = self.field.q() as usize;
        let mut idx = 0usize;
        for e in point.iter().rev() {
            self.field.elem(e.code() as u64)?;
            idx = idx * q + e.code() as usize;
        }
        Ok(idx)
    }

    pub fn point_at(&self, mut index: usize) -> Vec<FieldElem> {
        let q = self.field.q() as usize;
        (0..self.n)
            .map(|_| {
                let e = self.field.elem((index % q) as u64).expect("digit below q");
                index /= q;
                e
            })
            .collect()
    }

    pub fn insert(&mut self, point: &[FieldElem]) -> Result<()> {
        let i = self.index_of(point)?;
        self.set(i);
        Ok(())
    }

    pub fn contains(&self, point: &[FieldElem]) -> bool {
        self.index_of(point).is_ok_and(|i| self.test(i))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Indices of members, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn points(&self) -> Vec<Vec<FieldElem>> {
        self.indices().map(|i| self.point_at(i)).collect()
    }

    pub fn codes(&self) -> Vec<Vec<u32>> {
        self.indices()
            .map(|i| self.point_at(i).iter().map(|e| e.code()).collect())
            .collect()
    }

    pub fn to_point_list(&self) -> PointList {
        PointList::new(&self.field, self.n, self.points()).expect("members are distinct")
    }

    fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    fn test(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn same_space(&self, other: &DensePointSet) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn union_with(&mut self, other: &DensePointSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    /// Reads `len <= 128` bits starting at `start`.
    fn read_bits(&self, start: usize, len: usize) -> u128 {
        let mut out = 0u128;
        let mut got = 0;
        while got < len {
            let pos = start + got;
            let off = pos % 64;
            let take = (64 - off).min(len - got);
            let word = self.bits[pos / 64] >> off;
            let chunk = if take == 64 { word } else { word & ((1u64 << take) - 1) };
            out |= (chunk as u128) << got;
            got += take;
        }
        out
    }

    /// ORs `len <= 128` bits of `val` in at `start`.
    fn or_bits(&mut self, start: usize, len: usize, val: u128) {
        let mut done = 0;
        while done < len {
            let pos = start + done;
            let off = pos % 64;
            let take = (64 - off).min(len - done);
            let chunk = (val >> done) as u64;
            let chunk = if take == 64 { chunk } else { chunk & ((1u64 << take) - 1) };
            self.bits[pos / 64] |= chunk << off;
            done += take;
        }
    }

    /// ORs `src + t` into `self`, where `t` is the point at `shift`.
    fn or_translate(&mut self, src: &DensePointSet, shift: usize) {
        let q = self.field.q() as usize;
        let t = src.point_at(shift);
        if self.field.is_prime_field() && q <= 128 {
            let rows = self.cells / q;
            let r1 = t[0].code() as usize;
            let mask: u128 = if q == 128 { u128::MAX } else { (1u128 << q) - 1 };
            for row in 0..rows {
                let v = src.read_bits(row * q, q);
                if v == 0 {
                    continue;
                }
                let rotated = if r1 == 0 { v } else { ((v << r1) | (v >> (q - r1))) & mask };
                let dest = shift_row(row, &t[1..], q);
                self.or_bits(dest * q, q, rotated);
            }
        } else {
            for i in src.indices() {
                let x = src.point_at(i);
                let y = self.field.add_vec(&x, &t);
                let j = self.index_of(&y).expect("sum stays in the space");
                self.set(j);
            }
        }
    }
}

/// Row index of `(x_2 + t_2, ..., x_n + t_n)` for a prime field of order `q`.
fn shift_row(mut row: usize, t_rest: &[FieldElem], q: usize) -> usize {
    let mut out = 0usize;
    let mut scale = 1usize;
    for e in t_rest {
        let digit = (row % q + e.code() as usize) % q;
        out += digit * scale;
        scale *= q;
        row /= q;
    }
    out
}

/// `S + T`; empty if either operand is empty.
pub fn sumset(s: &DensePointSet, t: &DensePointSet) -> Result<DensePointSet> {
    s.same_space(t)?;
    let mut out = DensePointSet {
        field: s.field.clone(),
        n: s.n,
        cells: s.cells,
        bits: vec![0; s.bits.len()],
    };
    if s.is_empty() || t.is_empty() {
        return Ok(out);
    }
    let (small, large) = if s.len() <= t.len() { (s, t) } else { (t, s) };
    if is_full(large) {
        out.union_with(large);
        return Ok(out);
    }
    for shift in small.indices() {
        out.or_translate(large, shift);
        if is_full(&out) {
            break;
        }
    }
    Ok(out)
}

/// The `k`-fold sumset by binary doubling.
pub fn iterate_sumset(s: &DensePointSet, k: u64) -> Result<DensePointSet> {
    if k == 0 {
        return Err(Error::InvalidArgument("sumset multiplicity must be at least 1".into()));
    }
    let mut acc: Option<DensePointSet> = None;
    let mut power = s.clone();
    let mut rest = k;
    loop {
        if rest & 1 == 1 {
            acc = Some(match acc {
                None => power.clone(),
                Some(a) => sumset(&a, &power)?,
            });
        }
        rest >>= 1;
        if rest == 0 {
            break;
        }
        power = sumset(&power, &power)?;
    }
    Ok(acc.expect("k >= 1"))
}

/// `A_1 + ... + A_m`, folded left.
pub fn sum_of_family(sets: &[DensePointSet]) -> Result<DensePointSet> {
    let (first, rest) = sets
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("sum of an empty family".into()))?;
    rest.iter().try_fold(first.clone(), |acc, s| sumset(&acc, s))
}

pub fn is_full(s: &DensePointSet) -> bool {
    s.len() == s.cells
}
