//! Shift operators, Hasse expansions and graded leading-term spaces.
//!
//! A combination `l = sum_a c_a T^a` of shift operators expands as
//! `sum_alpha (sum_a c_a a^alpha) H^(alpha)`. All work here is at the level of
//! these coefficient vectors. Since `a^k` only depends on the reduced exponent
//! (`0` for `k = 0`, else `((k-1) mod (q-1)) + 1`) and reduction never
//! increases weight, the finite window `[0, q-1]^n` already determines degrees
//! and leading components; every expansion lives on that window, in
//! graded-then-lex order.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{binomial_mod_p, enumerate_monomials, ExpTuple};
use crate::ffield::{FieldElem, FieldSpec};
use crate::linalg::FMatrix;

/// Default limit on `q^n` for anything that materializes the full window.
pub const DEFAULT_MAX_CELLS: u64 = 1 << 20;

/// A nonempty list of distinct points of `F^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointList {
    field: FieldSpec,
    n: usize,
    points: Vec<Vec<FieldElem>>,
}

impl PointList {
    pub fn new(field: &FieldSpec, n: usize, points: Vec<Vec<FieldElem>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for pt in &points {
            if pt.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: pt.len(),
                });
            }
            for e in pt {
                field.elem(e.code() as u64)?;
            }
            if !seen.insert(pt.clone()) {
                return Err(Error::DuplicatePoint(pt.iter().map(|e| e.code()).collect()));
            }
        }
        Ok(PointList {
            field: field.clone(),
            n,
            points,
        })
    }

    /// Points given by element codes.
    pub fn from_codes(field: &FieldSpec, n: usize, points: &[Vec<u32>]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|pt| pt.iter().map(|&c| field.elem(c as u64)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, n, pts)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<FieldElem>] {
        &self.points
    }

    pub fn codes(&self) -> Vec<Vec<u32>> {
        self.points
            .iter()
            .map(|pt| pt.iter().map(|e| e.code()).collect())
            .collect()
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }
}

/// `a^alpha` with `0^0 = 1`.
pub fn monomial_value(field: &FieldSpec, point: &[FieldElem], alpha: &ExpTuple) -> FieldElem {
    point
        .iter()
        .zip(alpha.parts())
        .fold(FieldElem::ONE, |acc, (&x, &k)| field.mul(acc, field.pow(x, k as u64)))
}

/// A polynomial as a sparse list of `(exponent, coefficient)` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<(ExpTuple, FieldElem)>,
}

impl Polynomial {
    pub fn eval(&self, field: &FieldSpec, point: &[FieldElem]) -> FieldElem {
        self.terms.iter().fold(FieldElem::ZERO, |acc, (alpha, c)| {
            field.add(acc, field.mul(*c, monomial_value(field, point, alpha)))
        })
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(a, _)| a.weight()).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `Eval(A, [0, d])`: rows are points, columns are all monomials of degree at
/// most `d` in graded-lex order, entries `a^alpha` with literal exponents.
pub fn eval_matrix(a: &PointList, d: u64) -> Result<FMatrix> {
    a.require_nonempty()?;
    let cols = enumerate_monomials(a.dim(), d, d as u32);
    eval_matrix_on(a, &cols)
}

fn eval_matrix_on(a: &PointList, cols: &[ExpTuple]) -> Result<FMatrix> {
    let f = a.field();
    let rows = a
        .points()
        .iter()
        .map(|pt| cols.iter().map(|alpha| monomial_value(f, pt, alpha)).collect())
        .collect();
    FMatrix::from_rows(f, cols.len(), rows)
}

/// Result of [`nondeg_degree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nondegeneracy {
    /// Largest `d` such that no nonzero polynomial of degree `<= d` vanishes on the set.
    pub degree: u64,
    /// A nonzero polynomial of degree `<= degree + 1` vanishing on the set.
    pub witness: Polynomial,
}

/// Largest `d` with `Eval(A, [0, d])` of full column rank, plus a vanishing
/// polynomial of degree `d + 1` taken from the kernel one step up.
pub fn nondeg_degree(a: &PointList) -> Result<Nondegeneracy> {
    a.require_nonempty()?;
    let n = a.dim() as u64;
    let q = a.field().q() as u64;
    let full_rank = |d: u64| -> Result<bool> {
        let m = eval_matrix(a, d)?;
        Ok(m.cols() <= m.rows() && m.rank() == m.cols())
    };
    // Full column rank is monotone in d and fails by d = q (X^q and X agree on F).
    let (mut lo, mut hi) = (0u64, q);
    while crate::exponents::binomial(n + hi - 1, n) > a.len() as u128 && hi - 1 > lo {
        hi -= 1;
    }
    // invariant: full_rank(lo) holds, full_rank(hi) fails
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if full_rank(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cols = enumerate_monomials(a.dim(), hi, hi as u32);
    let m = eval_matrix_on(a, &cols)?;
    let kernel = m.column_kernel();
    let v = kernel.first().expect("rank deficiency yields a kernel vector");
    let witness = Polynomial {
        terms: cols
            .into_iter()
            .zip(v.iter().copied())
            .filter(|(_, c)| !c.is_zero())
            .collect(),
    };
    Ok(Nondegeneracy { degree: lo, witness })
}

/// The reduced exponent window `[0, q-1]^n` in graded-lex order.
#[derive(Debug, PartialEq, Eq)]
pub struct Window {
    q: u32,
    n: usize,
    exps: Vec<ExpTuple>,
    // mixed-radix code of alpha (base q, coordinate 1 least significant) -> position
    position: Vec<usize>,
}

impl Window {
    pub fn new(q: u32, n: usize) -> Arc<Window> {
        let exps = enumerate_monomials(n, (q as u64 - 1) * n as u64, q - 1);
        let mut position = vec![0; exps.len()];
        for (i, alpha) in exps.iter().enumerate() {
            position[radix_code(q, alpha)] = i;
        }
        Arc::new(Window { q, n, exps, position })
    }

    pub fn exps(&self) -> &[ExpTuple] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn index_of(&self, alpha: &ExpTuple) -> Option<usize> {
        if alpha.dim() != self.n || alpha.parts().iter().any(|&k| k >= self.q) {
            return None;
        }
        Some(self.position[radix_code(self.q, alpha)])
    }

    /// Number of leading columns with weight at most `w`.
    pub fn prefix_len(&self, w: u64) -> usize {
        self.exps.partition_point(|a| a.weight() <= w)
    }
}

fn radix_code(q: u32, alpha: &ExpTuple) -> usize {
    alpha
        .parts()
        .iter()
        .rev()
        .fold(0usize, |acc, &k| acc * q as usize + k as usize)
}

/// Maps a literal exponent onto the window.
pub fn reduce_exponent(k: u64, q: u64) -> u64 {
    if k == 0 {
        0
    } else {
        (k - 1) % (q - 1) + 1
    }
}

/// `l = sum_a c_a T^a` over a fixed base set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorVec {
    pub base: PointList,
    pub coeffs: Vec<FieldElem>,
}

impl OperatorVec {
    pub fn new(base: &PointList, coeffs: Vec<FieldElem>) -> Result<Self> {
        if coeffs.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: coeffs.len(),
            });
        }
        Ok(OperatorVec {
            base: base.clone(),
            coeffs,
        })
    }

    /// The single shift `T^a` for the point at `index`.
    pub fn shift(base: &PointList, index: usize) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; base.len()];
        coeffs[index] = FieldElem::ONE;
        OperatorVec {
            base: base.clone(),
            coeffs,
        }
    }

    /// Coefficients `c_a * a_i`, the operator whose expansion is the
    /// `e_i`-downshift of this one.
    pub fn times_coordinate(&self, i: usize) -> Self {
        let f = self.base.field();
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.base.points())
            .map(|(&c, pt)| f.mul(c, pt[i]))
            .collect();
        OperatorVec {
            base: self.base.clone(),
            coeffs,
        }
    }
}

/// Coefficients of a shift combination on the reduced window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseExpansion {
    pub window: Arc<Window>,
    pub coeffs: Vec<FieldElem>,
}

impl HasseExpansion {
    pub fn coeff(&self, alpha: &ExpTuple) -> Option<FieldElem> {
        self.window.index_of(alpha).map(|i| self.coeffs[i])
    }

    /// Minimal weight with a nonzero coefficient; `None` for the zero operator.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.window.exps()[i].weight())
    }

    /// The weight-`d` component `l_(d)`.
    pub fn component(&self, d: u64) -> HomogeneousOp {
        let terms = self
            .window
            .exps()
            .iter()
            .zip(&self.coeffs)
            .filter(|(a, c)| a.weight() == d && !c.is_zero())
            .map(|(a, &c)| (a.clone(), c))
            .collect();
        HomogeneousOp {
            n: self.window.dim(),
            degree: d,
            terms,
        }
    }

    /// The leading component; `None` for the zero operator.
    pub fn leading(&self) -> Option<HomogeneousOp> {
        self.degree().map(|d| self.component(d))
    }
}

pub fn hasse_expansion(v: &OperatorVec) -> HasseExpansion {
    let f = v.base.field();
    let window = Window::new(f.q(), v.base.dim());
    let powers = PowerTable::new(f);
    let mut coeffs = vec![FieldElem::ZERO; window.len()];
    for (pt, &c) in v.base.points().iter().zip(&v.coeffs) {
        if c.is_zero() {
            continue;
        }
        for (slot, alpha) in coeffs.iter_mut().zip(window.exps()) {
            *slot = f.add(*slot, f.mul(c, powers.monomial(pt, alpha)));
        }
    }
    HasseExpansion { window, coeffs }
}

/// `x^k` for every element and `k in [0, q-1]`.
struct PowerTable {
    field: FieldSpec,
    q: usize,
    table: Vec<FieldElem>,
}

impl PowerTable {
    fn new(field: &FieldSpec) -> Self {
        let q = field.q() as usize;
        let mut table = Vec::with_capacity(q * q);
        for x in field.elements() {
            let mut acc = FieldElem::ONE;
            for _ in 0..q {
                table.push(acc);
                acc = field.mul(acc, x);
            }
        }
        PowerTable {
            field: field.clone(),
            q,
            table,
        }
    }

    fn monomial(&self, pt: &[FieldElem], alpha: &ExpTuple) -> FieldElem {
        pt.iter().zip(alpha.parts()).fold(FieldElem::ONE, |acc, (&x, &k)| {
            self.field.mul(acc, self.table[x.code() as usize * self.q + k as usize])
        })
    }
}

/// Rows `a`, columns the first `cols` window exponents, entries `a^alpha`.
fn expansion_matrix(a: &PointList, window: &Window, cols: usize) -> FMatrix {
    let f = a.field();
    let powers = PowerTable::new(f);
    let rows = a
        .points()
        .iter()
        .map(|pt| window.exps()[..cols].iter().map(|alpha| powers.monomial(pt, alpha)).collect())
        .collect();
    FMatrix::from_rows(f, cols, rows).expect("rows built to width")
}

/// A homogeneous combination `sum_{|alpha| = d} c_alpha H^(alpha)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousOp {
    pub n: usize,
    pub degree: u64,
    /// Nonzero terms, keyed by exponent.
    #[serde(with = "term_list")]
    pub terms: BTreeMap<ExpTuple, FieldElem>,
}

/// Serializes a term map as a list of `[exponent, coefficient]` pairs.
mod term_list {
    use super::{ExpTuple, FieldElem};
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(terms: &BTreeMap<ExpTuple, FieldElem>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(terms.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<ExpTuple, FieldElem>, D::Error> {
        Ok(Vec::<(ExpTuple, FieldElem)>::deserialize(d)?.into_iter().collect())
    }
}

impl HomogeneousOp {
    /// The single derivative `H^(alpha)`.
    pub fn hasse(alpha: &ExpTuple) -> Self {
        HomogeneousOp {
            n: alpha.dim(),
            degree: alpha.weight(),
            terms: BTreeMap::from([(alpha.clone(), FieldElem::ONE)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &ExpTuple) -> FieldElem {
        self.terms.get(alpha).copied().unwrap_or(FieldElem::ZERO)
    }
}

/// Product of homogeneous combinations under
/// `H^(alpha) H^(beta) = binom(alpha + beta, alpha) H^(alpha + beta)`.
pub fn op_product(field: &FieldSpec, u: &HomogeneousOp, v: &HomogeneousOp) -> Result<HomogeneousOp> {
    if u.n != v.n {
        return Err(Error::DimensionMismatch {
            expected: u.n,
            found: v.n,
        });
    }
    let p = field.p() as u64;
    let mut terms: BTreeMap<ExpTuple, FieldElem> = BTreeMap::new();
    for (alpha, &cu) in &u.terms {
        for (beta, &cv) in &v.terms {
            let binom = alpha
                .parts()
                .iter()
                .zip(beta.parts())
                .fold(1u64, |acc, (&a, &b)| acc * binomial_mod_p(p, (a + b) as u64, a as u64) % p);
            if binom == 0 {
                continue;
            }
            let sum = alpha.checked_add(beta)?;
            let c = field.mul(field.mul(cu, cv), field.from_int(binom as i64));
            let slot = terms.entry(sum).or_insert(FieldElem::ZERO);
            *slot = field.add(*slot, c);
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(HomogeneousOp {
        n: u.n,
        degree: u.degree + v.degree,
        terms,
    })
}

/// `u^k` under [`op_product`]; `u^0` is `H^(0)`.
pub fn op_power(field: &FieldSpec, u: &HomogeneousOp, k: u32) -> Result<HomogeneousOp> {
    let mut acc = HomogeneousOp::hasse(&ExpTuple::zero(u.n));
    for _ in 0..k {
        acc = op_product(field, &acc, u)?;
    }
    Ok(acc)
}

/// One basis vector of some `Delta_A^d` together with the operator in
/// `Lambda_A` it leads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaElement {
    pub component: HomogeneousOp,
    pub operator: OperatorVec,
}

/// Graded bases of the leading-term spaces `Delta_A^d`.
#[derive(Clone, Debug)]
pub struct GradedDelta {
    pub per_degree: BTreeMap<u64, Vec<DeltaElement>>,
}

impl GradedDelta {
    pub fn dims(&self) -> BTreeMap<u64, usize> {
        self.per_degree.iter().map(|(&d, b)| (d, b.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.per_degree.values().map(Vec::len).sum()
    }

    /// Largest `d` with `Delta_A^d != {0}`.
    pub fn max_degree(&self) -> u64 {
        *self.per_degree.keys().next_back().expect("nonempty set has Delta^0")
    }
}

fn check_cells(field: &FieldSpec, n: usize, max_cells: u64) -> Result<()> {
    let cells = (field.q() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if cells > max_cells {
        return Err(Error::GuardExceeded {
            guard: "max-cells",
            required: cells,
            limit: max_cells,
        });
    }
    Ok(())
}

pub fn delta_spaces(a: &PointList) -> Result<GradedDelta> {
    delta_spaces_with_limit(a, DEFAULT_MAX_CELLS)
}

/// Graded elimination on the `|A| x q^n` reduced expansion matrix, augmented
/// with an identity block so every echelon row carries its operator.
pub fn delta_spaces_with_limit(a: &PointList, max_cells: u64) -> Result<GradedDelta> {
    a.require_nonempty()?;
    check_cells(a.field(), a.dim(), max_cells)?;
    let f = a.field();
    let window = Window::new(f.q(), a.dim());
    let width = window.len();
    let k = a.len();
    let base = expansion_matrix(a, &window, width);
    let mut aug = FMatrix::zeros(f, k, width + k);
    for r in 0..k {
        for c in 0..width {
            aug.set(r, c, base.get(r, c));
        }
        aug.set(r, width + r, FieldElem::ONE);
    }
    let rr = aug.rref();
    let mut per_degree: BTreeMap<u64, Vec<DeltaElement>> = BTreeMap::new();
    for (r, &pc) in rr.pivots.iter().enumerate() {
        // distinct shifts are independent, so no pivot may land in the identity block
        assert!(pc < width, "shift operators must be linearly independent");
        let d = window.exps()[pc].weight();
        let row = rr.reduced.row(r);
        let terms = window
            .exps()
            .iter()
            .zip(&row[..width])
            .filter(|(e, c)| e.weight() == d && !c.is_zero())
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        let operator = OperatorVec::new(a, row[width..].to_vec())?;
        per_degree.entry(d).or_default().push(DeltaElement {
            component: HomogeneousOp {
                n: a.dim(),
                degree: d,
                terms,
            },
            operator,
        });
    }
    Ok(GradedDelta { per_degree })
}

/// `deg(A)`: the largest `d` with `Delta_A^d != {0}`.
pub fn deg_of_set(a: &PointList) -> Result<u64> {
    Ok(delta_spaces(a)?.max_degree())
}

/// Finds `l` in `Lambda_A` whose expansion vanishes below weight `w.degree`
/// and equals `w` in weight `w.degree`, i.e. a witness that `w` lies in
/// `Delta_A^{w.degree}`. The returned operator has been re-expanded and checked.
pub fn delta_membership(a: &PointList, w: &HomogeneousOp) -> Result<Option<OperatorVec>> {
    a.require_nonempty()?;
    if w.n != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: w.n,
        });
    }
    let f = a.field();
    let window = Window::new(f.q(), a.dim());
    let mut target_terms = Vec::with_capacity(w.terms.len());
    for (alpha, &c) in &w.terms {
        if alpha.weight() != w.degree {
            return Err(Error::InvalidArgument(format!(
                "term {alpha} has weight {} in a degree-{} combination",
                alpha.weight(),
                w.degree
            )));
        }
        let idx = window
            .index_of(alpha)
            .ok_or_else(|| Error::InvalidArgument(format!("exponent {alpha} lies outside [0, q-1]^n")))?;
        target_terms.push((idx, c));
    }
    let cols = window.prefix_len(w.degree);
    let m = expansion_matrix(a, &window, cols);
    let mut target = vec![FieldElem::ZERO; cols];
    for (idx, c) in target_terms {
        target[idx] = c;
    }
    let Some(x) = m.express_in_rowspace(&target) else {
        return Ok(None);
    };
    let cert = OperatorVec::new(a, x)?;
    assert!(
        certifies(&cert, w),
        "membership certificate failed re-expansion"
    );
    Ok(Some(cert))
}

/// Independent check: expand `cert` from scratch and compare against `w` on
/// every window exponent of weight at most `w.degree`.
pub fn certifies(cert: &OperatorVec, w: &HomogeneousOp) -> bool {
    let exp = hasse_expansion(cert);
    exp.window.exps().iter().zip(&exp.coeffs).all(|(alpha, &c)| {
        let wt = alpha.weight();
        if wt < w.degree {
            c.is_zero()
        } else if wt == w.degree {
            c == w.coeff(alpha)
        } else {
            true
        }
    })
}

/// Result of [`hasse_in_delta`].
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    pub certificate: Option<OperatorVec>,
}

/// Whether `H^(alpha)` lies in `Delta_A^{|alpha|}`, with a certificate.
pub fn hasse_in_delta(a: &PointList, alpha: &ExpTuple) -> Result<Membership> {
    let certificate = delta_membership(a, &HomogeneousOp::hasse(alpha))?;
    Ok(Membership {
        member: certificate.is_some(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use crate::exponents::monomials_of_weight;
    use rand::{seq::SliceRandom, Rng, SeedableRng};

    fn pts(f: &FieldSpec, n: usize, raw: &[&[i64]]) -> PointList {
        PointList::new(f, n, raw.iter().map(|p| p.iter().map(|&x| f.from_int(x)).collect()).collect()).unwrap()
    }

    fn t(v: &[u32]) -> ExpTuple {
        ExpTuple(v.to_vec())
    }

    fn all_points(f: &FieldSpec, n: usize) -> Vec<Vec<FieldElem>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    f.elements().map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn random_set(f: &FieldSpec, n: usize, rng: &mut impl Rng) -> PointList {
        let mut all = all_points(f, n);
        all.shuffle(rng);
        let k = rng.gen_range(1..=all.len());
        all.truncate(k);
        PointList::new(f, n, all).unwrap()
    }

    #[test]
    fn point_list_validation() {
        let f = make_field(3, 1).unwrap();
        let dup = PointList::from_codes(&f, 1, &[vec![1], vec![1]]);
        assert_eq!(dup.unwrap_err(), Error::DuplicatePoint(vec![1]));
        assert!(PointList::from_codes(&f, 1, &[vec![3]]).is_err());
        assert!(PointList::from_codes(&f, 2, &[vec![1]]).is_err());
        let empty = PointList::new(&f, 1, vec![]).unwrap();
        assert_eq!(eval_matrix(&empty, 1).unwrap_err(), Error::EmptySet);
        assert_eq!(nondeg_degree(&empty).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn eval_matrix_examples() {
        let f = make_field(3, 1).unwrap();
        let a = pts(&f, 2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let m = eval_matrix(&a, 1).unwrap();
        let rows: Vec<Vec<u32>> = (0..3).map(|r| m.row(r).iter().map(|e| e.code()).collect()).collect();
        assert_eq!(rows, vec![vec![1, 0, 0], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(m.rank(), 3);

        let m0 = eval_matrix(&a, 0).unwrap();
        assert_eq!(m0.cols(), 1);
        assert!((0..3).all(|r| m0.get(r, 0) == f.one()));

        let line = pts(&f, 1, &[&[0], &[1], &[2]]);
        assert_eq!(eval_matrix(&line, 2).unwrap().rank(), 3);
    }

    #[test]
    fn nondeg_examples() {
        let f5 = make_field(5, 1).unwrap();
        let single = pts(&f5, 2, &[&[2, 3]]);
        let nd = nondeg_degree(&single).unwrap();
        assert_eq!(nd.degree, 0);
        assert_eq!(nd.witness.degree(), Some(1));
        assert!(nd.witness.eval(&f5, single.points()[0].as_slice()).is_zero());

        let f3 = make_field(3, 1).unwrap();
        let whole = pts(&f3, 1, &[&[0], &[1], &[2]]);
        let nd = nondeg_degree(&whole).unwrap();
        assert_eq!(nd.degree, 2);
        // X^3 - X up to scalar
        let lead = nd.witness.terms.iter().find(|(a, _)| a == &t(&[3])).unwrap().1;
        let x_coeff = nd.witness.terms.iter().find(|(a, _)| a == &t(&[1])).unwrap().1;
        assert_eq!(f3.add(lead, x_coeff), f3.zero());
        assert_eq!(nd.witness.terms.len(), 2);

        let square = pts(&f5, 2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let nd = nondeg_degree(&square).unwrap();
        assert_eq!(nd.degree, 1);
        assert_eq!(nd.witness.degree(), Some(2));
        for pt in square.points() {
            assert!(nd.witness.eval(&f5, pt).is_zero());
        }
        // x(x-1) = x^2 - x vanishes on the square: it is in the kernel span
        let m = eval_matrix(&square, 2).unwrap();
        let mut v = vec![f5.zero(); 6];
        v[5] = f5.one(); // (2,0)
        v[2] = f5.from_int(-1); // (1,0)
        assert!(m.mul_vec(&v).iter().all(|e| e.is_zero()));
        assert_eq!(m.column_kernel().len(), 2);
    }

    #[test]
    fn nondeg_matches_linear_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (p, ell, n) in [(3u64, 1u32, 2usize), (5, 1, 1), (5, 1, 2), (2, 2, 2), (7, 1, 1), (2, 1, 3)] {
            let f = make_field(p, ell).unwrap();
            for _ in 0..25 {
                let a = random_set(&f, n, &mut rng);
                let mut scan = 0;
                for d in 1..=f.q() as u64 {
                    let m = eval_matrix(&a, d).unwrap();
                    if m.rank() == m.cols() {
                        scan = d;
                    } else {
                        break;
                    }
                }
                let nd = nondeg_degree(&a).unwrap();
                assert_eq!(nd.degree, scan);
                assert!(nd.degree < f.q() as u64);
                assert!(!nd.witness.is_zero());
                assert!(nd.witness.degree().unwrap() <= nd.degree + 1);
                for pt in a.points() {
                    assert!(nd.witness.eval(&f, pt).is_zero());
                }
            }
        }
    }

    #[test]
    fn expansion_examples() {
        let f3 = make_field(3, 1).unwrap();
        let line = pts(&f3, 1, &[&[0], &[1]]);
        let id = hasse_expansion(&OperatorVec::shift(&line, 0));
        assert_eq!(id.degree(), Some(0));
        assert_eq!(id.coeffs, vec![f3.one(), f3.zero(), f3.zero()]);

        let diff = OperatorVec::new(&line, vec![f3.from_int(-1), f3.one()]).unwrap();
        let e = hasse_expansion(&diff);
        assert_eq!(e.coeffs, vec![f3.zero(), f3.one(), f3.one()]);
        assert_eq!(e.degree(), Some(1));
    }

    #[test]
    fn quadratic_leading_component_of_normalized_quad() {
        for p in [3i64, 5, 7] {
            let f = make_field(p as u64, 1).unwrap();
            for a in 0..p {
                for b in 0..p {
                    if [(0, 0), (1, 0), (0, 1)].contains(&(a, b)) {
                        continue;
                    }
                    let quad = pts(&f, 2, &[&[0, 0], &[1, 0], &[0, 1], &[a, b]]);
                    let l = OperatorVec::new(
                        &quad,
                        vec![f.from_int(a + b - 1), f.from_int(-a), f.from_int(-b), f.one()],
                    )
                    .unwrap();
                    let e = hasse_expansion(&l);
                    for low in [t(&[0, 0]), t(&[1, 0]), t(&[0, 1])] {
                        assert!(e.coeff(&low).unwrap().is_zero());
                    }
                    assert_eq!(e.coeff(&t(&[2, 0])).unwrap(), f.from_int(a * a - a));
                    assert_eq!(e.coeff(&t(&[1, 1])).unwrap(), f.from_int(a * b));
                    assert_eq!(e.coeff(&t(&[0, 2])).unwrap(), f.from_int(b * b - b));
                }
            }
        }
    }

    #[test]
    fn window_degree_matches_literal_expansion() {
        // Oracle: literal exponents up to weight 2(q-1)n, no reduction.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (p, ell, n) in [(2u64, 1u32, 2usize), (3, 1, 1), (3, 1, 2), (2, 2, 1), (5, 1, 1), (2, 2, 2)] {
            let f = make_field(p, ell).unwrap();
            let q = f.q() as u64;
            let literal = enumerate_monomials(n, 2 * (q - 1) * n as u64, (2 * (q - 1) * n as u64) as u32);
            for _ in 0..40 {
                let a = random_set(&f, n, &mut rng);
                let coeffs: Vec<FieldElem> = (0..a.len()).map(|_| f.elem(rng.gen_range(0..q)).unwrap()).collect();
                let v = OperatorVec::new(&a, coeffs).unwrap();
                let lit = |alpha: &ExpTuple| {
                    a.points().iter().zip(&v.coeffs).fold(f.zero(), |acc, (pt, &c)| {
                        f.add(acc, f.mul(c, monomial_value(&f, pt, alpha)))
                    })
                };
                let lit_deg = literal.iter().find(|al| !lit(al).is_zero()).map(|al| al.weight());
                let e = hasse_expansion(&v);
                assert_eq!(e.degree(), lit_deg);
                if let Some(d) = lit_deg {
                    for alpha in monomials_of_weight(n, d, d as u32) {
                        let want = lit(&alpha);
                        match e.coeff(&alpha) {
                            Some(c) => assert_eq!(c, want),
                            None => assert!(want.is_zero()),
                        }
                    }
                }
                for alpha in &literal {
                    let reduced = ExpTuple(alpha.parts().iter().map(|&k| reduce_exponent(k as u64, q) as u32).collect());
                    assert_eq!(e.coeff(&reduced).unwrap(), lit(alpha));
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let f5 = make_field(5, 1).unwrap();
        let single = pts(&f5, 2, &[&[3, 4]]);
        let g = delta_spaces(&single).unwrap();
        assert_eq!(g.dims(), BTreeMap::from([(0, 1)]));
        assert_eq!(g.per_degree[&0][0].component, HomogeneousOp::hasse(&t(&[0, 0])));

        let square = pts(&f5, 2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let g = delta_spaces(&square).unwrap();
        assert_eq!(g.dims(), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        let top = &g.per_degree[&2][0].component;
        assert_eq!(top.terms.keys().collect::<Vec<_>>(), vec![&t(&[1, 1])]);

        for (p, ell, n) in [(3u64, 1u32, 1usize), (2, 1, 2), (3, 1, 2), (2, 2, 1), (2, 2, 2)] {
            let f = make_field(p, ell).unwrap();
            let whole = PointList::new(&f, n, all_points(&f, n)).unwrap();
            let g = delta_spaces(&whole).unwrap();
            let q = f.q() as u64;
            for d in 0..=(q - 1) * n as u64 {
                assert_eq!(g.dims().get(&d).copied().unwrap_or(0), monomials_of_weight(n, d, (q - 1) as u32).len());
            }
            assert_eq!(g.max_degree(), (q - 1) * n as u64);
        }
    }

    #[test]
    fn delta_elements_lead_their_operators() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let f = make_field(3, 1).unwrap();
        for _ in 0..30 {
            let a = random_set(&f, 2, &mut rng);
            let g = delta_spaces(&a).unwrap();
            assert_eq!(g.total_dim(), a.len());
            for (&d, basis) in &g.per_degree {
                for el in basis {
                    let e = hasse_expansion(&el.operator);
                    assert_eq!(e.degree(), Some(d));
                    assert_eq!(e.component(d), el.component);
                }
            }
        }
    }

    #[test]
    fn deg_of_set_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(deg_of_set(&pts(&f5, 1, &[&[4]])).unwrap(), 0);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(deg_of_set(&pts(&f3, 1, &[&[0], &[1], &[2]])).unwrap(), 2);
        assert_eq!(deg_of_set(&pts(&f5, 1, &[&[0], &[1]])).unwrap(), 1);
    }

    #[test]
    fn delta_guard() {
        let f = make_field(5, 1).unwrap();
        let a = pts(&f, 3, &[&[0, 0, 0]]);
        assert_eq!(
            delta_spaces_with_limit(&a, 100).unwrap_err(),
            Error::GuardExceeded { guard: "max-cells", required: 125, limit: 100 }
        );
    }

    #[test]
    fn product_examples() {
        let f5 = make_field(5, 1).unwrap();
        let prod = op_product(&f5, &HomogeneousOp::hasse(&t(&[1, 0])), &HomogeneousOp::hasse(&t(&[0, 1]))).unwrap();
        assert_eq!(prod, HomogeneousOp::hasse(&t(&[1, 1])));

        let h1 = HomogeneousOp::hasse(&t(&[1]));
        let sq = op_product(&f5, &h1, &h1).unwrap();
        assert_eq!(sq.coeff(&t(&[2])), f5.from_int(2));
        assert_eq!(sq.degree, 2);

        let f2 = make_field(2, 1).unwrap();
        assert!(op_product(&f2, &h1, &h1).unwrap().is_zero());

        let mismatch = op_product(&f5, &h1, &HomogeneousOp::hasse(&t(&[1, 0])));
        assert!(matches!(mismatch, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn power_of_first_derivative_is_factorial() {
        // (H^(1))^k = k! H^(k)
        let f7 = make_field(7, 1).unwrap();
        let h1 = HomogeneousOp::hasse(&t(&[1]));
        let mut fact = 1i64;
        for k in 1..=8u32 {
            fact *= k as i64;
            let pw = op_power(&f7, &h1, k).unwrap();
            assert_eq!(pw.coeff(&t(&[k])), f7.from_int(fact));
        }
    }

    #[test]
    fn membership_examples() {
        let f3 = make_field(3, 1).unwrap();
        let whole = pts(&f3, 1, &[&[0], &[1], &[2]]);
        let m = hasse_in_delta(&whole, &t(&[0])).unwrap();
        assert!(m.member);
        let m = hasse_in_delta(&whole, &t(&[2])).unwrap();
        assert!(m.member);
        assert!(certifies(m.certificate.as_ref().unwrap(), &HomogeneousOp::hasse(&t(&[2]))));

        let f5 = make_field(5, 1).unwrap();
        let on_axis = pts(&f5, 2, &[&[0, 0], &[1, 0], &[2, 0]]);
        let m = hasse_in_delta(&on_axis, &t(&[0, 1])).unwrap();
        assert!(!m.member);
        assert!(m.certificate.is_none());
        assert!(hasse_in_delta(&on_axis, &t(&[5, 0])).is_err());
    }

    #[test]
    fn rank_degree_lemma_on_random_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for (p, n) in [(3u64, 2usize), (5, 1), (5, 2), (7, 1)] {
            let f = make_field(p, 1).unwrap();
            for _ in 0..20 {
                let a = random_set(&f, n, &mut rng);
                let d = nondeg_degree(&a).unwrap().degree;
                for alpha in enumerate_monomials(n, d, d as u32) {
                    let m = hasse_in_delta(&a, &alpha).unwrap();
                    assert!(m.member, "H^{alpha} missing for set of nondeg {d}");
                }
            }
        }
    }

    #[test]
    fn reduction_shifts_expansion() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for (p, ell, n) in [(3u64, 1u32, 2usize), (5, 1, 2), (2, 2, 2), (7, 1, 1)] {
            let f = make_field(p, ell).unwrap();
            for _ in 0..20 {
                let a = random_set(&f, n, &mut rng);
                let coeffs = (0..a.len()).map(|_| f.elem(rng.gen_range(0..f.q() as u64)).unwrap()).collect();
                let v = OperatorVec::new(&a, coeffs).unwrap();
                let ev = hasse_expansion(&v);
                for i in 0..n {
                    let shifted = hasse_expansion(&v.times_coordinate(i));
                    for alpha in ev.window.exps() {
                        let mut up = alpha.clone();
                        up.0[i] += 1;
                        if let Some(c) = ev.coeff(&up) {
                            assert_eq!(shifted.coeff(alpha).unwrap(), c);
                        }
                    }
                }
            }
        }
    }
}
