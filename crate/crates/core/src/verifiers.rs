//! Theorem verifiers.
//!
//! Each verifier certifies the hypotheses it can (nondegeneracy degrees with
//! vanishing witnesses, digit decompositions, normalizing maps), computes the
//! conclusion by brute force, and returns a [`TheoremReport`]. A report whose
//! hypotheses hold but whose conclusion fails carries the verdict
//! [`Verdict::Violated`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{count_n, find_decomposition, multinomial_mod_p, ExpTuple};
use crate::ffield::{make_field, phi_pack, FieldElem, FieldSpec};
use crate::linalg::FMatrix;
use crate::shiftops::{
    hasse_expansion, hasse_in_delta, nondeg_degree, op_power, op_product, HomogeneousOp, OperatorVec, PointList,
    Polynomial, DEFAULT_MAX_CELLS,
};
use crate::sumsets::{iterate_sumset, sum_of_family, DensePointSet};

/// Resource guards shared by the verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `q^n` that may be materialized as a dense set or window.
    pub max_cells: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    MainFinalp,
    MainSymm,
    MainQ,
    TwoDim,
    Tightness,
    AffineBases,
    PhiCrosscheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    HypothesisFailed,
    NotApplicable,
    /// Hypotheses certified but the conclusion failed.
    Violated,
}

/// How `observed` is compared with `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    AtLeast,
    Below,
}

impl Relation {
    pub fn met(self, observed: u64, target: u64) -> bool {
        match self {
            Relation::AtLeast => observed >= target,
            Relation::Below => observed < target,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `set` avoids every hypersurface of degree `<= degree`; `witness`
    /// vanishes on it and has degree `degree + 1`.
    Nondegeneracy {
        set: usize,
        degree: u64,
        budget: u64,
        witness: Polynomial,
    },
    Decomposition {
        alphas: Vec<ExpTuple>,
        target: ExpTuple,
        multinomial_mod_p: u64,
    },
    /// Operators in each `Lambda_{A_i}` leading with `H^(alpha_i)`, and the
    /// product of those derivatives.
    DerivativeProduct {
        alphas: Vec<ExpTuple>,
        operators: Vec<Vec<FieldElem>>,
        product: HomogeneousOp,
    },
    /// Affine map `z -> linear (z - origin)` sending the first three quad
    /// points to `(0,0), (1,0), (0,1)`.
    Normalization {
        quad: Vec<Vec<FieldElem>>,
        origin: Vec<FieldElem>,
        linear: [[FieldElem; 2]; 2],
        image: (FieldElem, FieldElem),
        discriminant: FieldElem,
        leading: HomogeneousOp,
        leading_power: HomogeneousOp,
    },
    AffineBasis {
        set: usize,
        rank: usize,
    },
    PhiImage {
        ell: u32,
        image: Vec<Vec<FieldElem>>,
        image_report: Box<TheoremReport>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub p: u32,
    pub ell: u32,
    pub n: usize,
    pub hypotheses_hold: bool,
    pub hypotheses: Vec<Hypothesis>,
    pub relation: Relation,
    pub target: u64,
    pub observed: u64,
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
}

impl TheoremReport {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        theorem: TheoremId,
        field: &FieldSpec,
        n: usize,
        applicable: bool,
        hypotheses: Vec<Hypothesis>,
        relation: Relation,
        target: u64,
        observed: u64,
        certificates: Vec<Certificate>,
    ) -> Self {
        let hypotheses_hold = hypotheses.iter().all(|h| h.holds);
        let verdict = if !applicable {
            Verdict::NotApplicable
        } else if !hypotheses_hold {
            Verdict::HypothesisFailed
        } else if relation.met(observed, target) {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        TheoremReport {
            theorem,
            p: field.p(),
            ell: field.ell(),
            n,
            hypotheses_hold,
            hypotheses,
            relation,
            target,
            observed,
            verdict,
            certificates,
        }
    }
}

fn hyp(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Hypothesis {
    Hypothesis {
        name: name.into(),
        holds,
        detail: detail.into(),
    }
}

fn common_space(sets: &[PointList]) -> Result<(FieldSpec, usize)> {
    let first = sets
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty family of sets".into()))?;
    for s in sets {
        if s.field() != first.field() {
            return Err(Error::FieldMismatch);
        }
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    Ok((first.field().clone(), first.dim()))
}

fn require_prime(field: &FieldSpec) -> Result<()> {
    if !field.is_prime_field() {
        return Err(Error::InvalidArgument(format!(
            "expected a prime field, got F_{}",
            field.q()
        )));
    }
    Ok(())
}

fn cells(field: &FieldSpec, n: usize) -> u64 {
    (field.q() as u64).checked_pow(n as u32).unwrap_or(u64::MAX)
}

fn dense(a: &PointList, limits: Limits) -> Result<DensePointSet> {
    DensePointSet::from_point_list_with_limit(a, limits.max_cells)
}

fn observed_family(sets: &[PointList], limits: Limits) -> Result<u64> {
    let dense_sets = sets.iter().map(|s| dense(s, limits)).collect::<Result<Vec<_>>>()?;
    Ok(sum_of_family(&dense_sets)?.len() as u64)
}

/// Nondegeneracy hypotheses `d*(A_i) >= n_i`; budgets default to `d*`.
fn nondeg_hypotheses(
    sets: &[PointList],
    budgets: Option<&[u64]>,
) -> Result<(Vec<u64>, Vec<Hypothesis>, Vec<Certificate>)> {
    if let Some(b) = budgets {
        if b.len() != sets.len() {
            return Err(Error::DimensionMismatch {
                expected: sets.len(),
                found: b.len(),
            });
        }
    }
    let mut used = Vec::with_capacity(sets.len());
    let mut hyps = Vec::with_capacity(sets.len());
    let mut certs = Vec::with_capacity(sets.len());
    for (i, a) in sets.iter().enumerate() {
        let nd = nondeg_degree(a)?;
        let budget = budgets.map_or(nd.degree, |b| b[i]);
        hyps.push(hyp(
            format!("set {i} avoids hypersurfaces of degree <= {budget}"),
            nd.degree >= budget,
            format!("nondegeneracy degree {}", nd.degree),
        ));
        certs.push(Certificate::Nondegeneracy {
            set: i,
            degree: nd.degree,
            budget,
            witness: nd.witness,
        });
        used.push(budget);
    }
    Ok((used, hyps, certs))
}

/// Splits `target` into parts of weight at most `budgets[i]`, filling
/// coordinates in order.
fn greedy_split(target: &ExpTuple, budgets: &[u64]) -> Option<Vec<ExpTuple>> {
    let mut rest = target.parts().to_vec();
    let mut alphas = Vec::with_capacity(budgets.len());
    for &b in budgets {
        let mut room = b;
        let mut alpha = vec![0u32; rest.len()];
        for (a, r) in alpha.iter_mut().zip(rest.iter_mut()) {
            let take = (*r as u64).min(room) as u32;
            *a = take;
            *r -= take;
            room -= take as u64;
        }
        alphas.push(ExpTuple(alpha));
    }
    rest.iter().all(|&r| r == 0).then_some(alphas)
}

/// Certifies `H^(alpha_i)` in `Delta_{A_i}` for each `i` and multiplies the
/// derivatives. `None` if some membership fails or the window is too large.
fn derivative_product(sets: &[PointList], alphas: &[ExpTuple], limits: Limits) -> Result<Option<Certificate>> {
    let field = sets[0].field();
    if cells(field, sets[0].dim()) > limits.max_cells {
        return Ok(None);
    }
    let mut operators = Vec::with_capacity(sets.len());
    let mut product = HomogeneousOp::hasse(&ExpTuple::zero(sets[0].dim()));
    for (a, alpha) in sets.iter().zip(alphas) {
        let m = hasse_in_delta(a, alpha)?;
        let Some(cert) = m.certificate else {
            return Ok(None);
        };
        operators.push(cert.coeffs);
        product = op_product(field, &product, &HomogeneousOp::hasse(alpha))?;
    }
    Ok(Some(Certificate::DerivativeProduct {
        alphas: alphas.to_vec(),
        operators,
        product,
    }))
}

/// Size bound for `A_1 + ... + A_m` over a prime field: with budgets `n_i`
/// (default: the nondegeneracy degrees) and `D = min(sum n_i, (p-1) n)`, the
/// sumset has at least `N(p, n, D)` points.
pub fn verify_main_finalp(sets: &[PointList], budgets: Option<&[u64]>, limits: Limits) -> Result<TheoremReport> {
    let (field, n) = common_space(sets)?;
    require_prime(&field)?;
    let p = field.p() as u64;
    let (used, hypotheses, mut certificates) = nondeg_hypotheses(sets, budgets)?;
    let total: u64 = used.iter().sum();
    let d = total.min((p - 1) * n as u64);
    let target = u64::try_from(count_n(p, n, d)).expect("N(p,n,D) <= p^n");
    let observed = observed_family(sets, limits)?;

    if hypotheses.iter().all(|h| h.holds) && d > 0 {
        // top exponent: (p-1, ..., p-1) truncated to weight D
        let mut z = vec![0u32; n];
        let mut room = d;
        for zi in z.iter_mut() {
            let take = room.min(p - 1);
            *zi = take as u32;
            room -= take;
        }
        let z = ExpTuple(z);
        if let Some(alphas) = greedy_split(&z, &used) {
            certificates.push(Certificate::Decomposition {
                multinomial_mod_p: multinomial_mod_p(p, &alphas),
                alphas: alphas.clone(),
                target: z,
            });
            certificates.extend(derivative_product(sets, &alphas, limits)?);
        }
    }

    Ok(TheoremReport::assemble(
        TheoremId::MainFinalp,
        &field,
        n,
        true,
        hypotheses,
        Relation::AtLeast,
        target,
        observed,
        certificates,
    ))
}

/// `(p-1)`-fold expansion of a set avoiding all hypersurfaces of degree `<= n`.
pub fn verify_main_symm(a: &PointList, limits: Limits) -> Result<TheoremReport> {
    let (field, n) = common_space(std::slice::from_ref(a))?;
    require_prime(&field)?;
    let nd = nondeg_degree(a)?;
    let hypotheses = vec![hyp(
        format!("set avoids hypersurfaces of degree <= {n}"),
        nd.degree >= n as u64,
        format!("nondegeneracy degree {}", nd.degree),
    )];
    let certificates = vec![Certificate::Nondegeneracy {
        set: 0,
        degree: nd.degree,
        budget: n as u64,
        witness: nd.witness,
    }];
    let s = iterate_sumset(&dense(a, limits)?, field.p() as u64 - 1)?;
    Ok(TheoremReport::assemble(
        TheoremId::MainSymm,
        &field,
        n,
        true,
        hypotheses,
        Relation::AtLeast,
        cells(&field, n),
        s.len() as u64,
        certificates,
    ))
}

/// Full expansion over `F_q`: budgets with `sum n_i >= (q-1) n`, each set
/// avoiding degree `<= n_i`, and a carry-free split of `(q-1, ..., q-1)`.
pub fn verify_main_q(sets: &[PointList], budgets: &[u64], limits: Limits) -> Result<TheoremReport> {
    let (field, n) = common_space(sets)?;
    let q = field.q() as u64;
    let (_, mut hypotheses, mut certificates) = nondeg_hypotheses(sets, Some(budgets))?;
    let total: u64 = budgets.iter().sum();
    let needed = (q - 1) * n as u64;
    let applicable = total >= needed;
    hypotheses.push(hyp(
        format!("budgets sum to at least (q-1)n = {needed}"),
        applicable,
        format!("sum {total}"),
    ));
    let decomposition = if applicable {
        find_decomposition(field.p() as u64, field.ell(), n, budgets)
    } else {
        None
    };
    hypotheses.push(hyp(
        "multinomial of (q-1,...,q-1) nonzero mod p for some split",
        decomposition.is_some(),
        match &decomposition {
            Some(dec) => format!("split {:?}", dec.alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>()),
            None => "no admissible split".to_string(),
        },
    ));
    if let Some(dec) = decomposition {
        certificates.push(Certificate::Decomposition {
            multinomial_mod_p: multinomial_mod_p(field.p() as u64, &dec.alphas),
            alphas: dec.alphas.clone(),
            target: dec.target.clone(),
        });
        if hypotheses.iter().all(|h| h.holds) {
            certificates.extend(derivative_product(sets, &dec.alphas, limits)?);
        }
    }
    let observed = observed_family(sets, limits)?;
    Ok(TheoremReport::assemble(
        TheoremId::MainQ,
        &field,
        n,
        applicable,
        hypotheses,
        Relation::AtLeast,
        cells(&field, n),
        observed,
        certificates,
    ))
}

fn require_plane(field: &FieldSpec, pts: &[&[FieldElem]]) -> Result<()> {
    for pt in pts {
        if pt.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: pt.len(),
            });
        }
        for e in pt.iter() {
            field.elem(e.code() as u64)?;
        }
    }
    Ok(())
}

/// `det [[x0,y0,1],[x1,y1,1],[x2,y2,1]]`; zero iff the points are collinear.
pub fn collinearity_det(field: &FieldSpec, p0: &[FieldElem], p1: &[FieldElem], p2: &[FieldElem]) -> FieldElem {
    let u = field.sub_vec(p1, p0);
    let v = field.sub_vec(p2, p0);
    field.sub(field.mul(u[0], v[1]), field.mul(u[1], v[0]))
}

/// The affine map `z -> linear (z - origin)` taking `p0, p1, p2` to
/// `(0,0), (1,0), (0,1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineNormalizer {
    pub origin: Vec<FieldElem>,
    pub linear: [[FieldElem; 2]; 2],
}

impl AffineNormalizer {
    pub fn new(field: &FieldSpec, p0: &[FieldElem], p1: &[FieldElem], p2: &[FieldElem]) -> Result<Self> {
        require_plane(field, &[p0, p1, p2])?;
        let u = field.sub_vec(p1, p0);
        let v = field.sub_vec(p2, p0);
        let det = collinearity_det(field, p0, p1, p2);
        if det.is_zero() {
            return Err(Error::Degenerate("the three points are collinear".into()));
        }
        let inv = field.inv(det)?;
        // inverse of the column matrix [u | v]
        let linear = [
            [field.mul(v[1], inv), field.mul(field.neg(v[0]), inv)],
            [field.mul(field.neg(u[1]), inv), field.mul(u[0], inv)],
        ];
        Ok(AffineNormalizer {
            origin: p0.to_vec(),
            linear,
        })
    }

    pub fn apply(&self, field: &FieldSpec, z: &[FieldElem]) -> (FieldElem, FieldElem) {
        let w = field.sub_vec(z, &self.origin);
        let row = |r: [FieldElem; 2]| field.add(field.mul(r[0], w[0]), field.mul(r[1], w[1]));
        (row(self.linear[0]), row(self.linear[1]))
    }
}

/// Image `(a, b)` of `p3` under the affine map sending `p0, p1, p2` to
/// `(0,0), (1,0), (0,1)`.
pub fn affine_normalize(
    field: &FieldSpec,
    p0: &[FieldElem],
    p1: &[FieldElem],
    p2: &[FieldElem],
    p3: &[FieldElem],
) -> Result<(FieldElem, FieldElem)> {
    require_plane(field, &[p3])?;
    Ok(AffineNormalizer::new(field, p0, p1, p2)?.apply(field, p3))
}

/// `ab(a+b-1)`.
pub fn discriminant(field: &FieldSpec, a: FieldElem, b: FieldElem) -> FieldElem {
    let s = field.sub(field.add(a, b), field.one());
    field.mul(field.mul(a, b), s)
}

/// `(ab)^2 - (a^2-a)(b^2-b)`, the discriminant of the leading quadratic form.
pub fn discriminant_expanded(field: &FieldSpec, a: FieldElem, b: FieldElem) -> FieldElem {
    let ab = field.mul(a, b);
    let qa = field.sub(field.mul(a, a), a);
    let qb = field.sub(field.mul(b, b), b);
    field.sub(field.mul(ab, ab), field.mul(qa, qb))
}

fn require_plane_set(a: &PointList) -> Result<()> {
    let f = a.field();
    require_prime(f)?;
    if f.p() <= 2 {
        return Err(Error::InvalidArgument("needs an odd prime".into()));
    }
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    Ok(())
}

/// First 4-subset of `A` (lexicographic in list order) with no three points
/// collinear, as indices into `A`.
pub fn find_general_position_quad(a: &PointList) -> Result<Option<[usize; 4]>> {
    require_plane_set(a)?;
    let f = a.field();
    let pts = a.points();
    let m = pts.len();
    let ok = |i: usize, j: usize, k: usize| !collinearity_det(f, &pts[i], &pts[j], &pts[k]).is_zero();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if !ok(i, j, k) {
                    continue;
                }
                for l in k + 1..m {
                    if ok(i, j, l) && ok(i, k, l) && ok(j, k, l) {
                        return Ok(Some([i, j, k, l]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// `(a^2-a) H^(2,0) + ab H^(1,1) + (b^2-b) H^(0,2)`.
fn quad_leading_form(field: &FieldSpec, a: FieldElem, b: FieldElem) -> HomogeneousOp {
    let terms = [
        (vec![2, 0], field.sub(field.mul(a, a), a)),
        (vec![1, 1], field.mul(a, b)),
        (vec![0, 2], field.sub(field.mul(b, b), b)),
    ]
    .into_iter()
    .filter(|(_, c)| !c.is_zero())
    .map(|(e, c)| (ExpTuple(e), c))
    .collect();
    HomogeneousOp {
        n: 2,
        degree: 2,
        terms,
    }
}

/// Planar expansion: a quad with no three points collinear forces the
/// `(p-1)`-fold sumset to be all of `F_p^2`.
pub fn verify_2d(a: &PointList, limits: Limits) -> Result<TheoremReport> {
    require_plane_set(a)?;
    let f = a.field();
    let p = f.p();
    let quad = find_general_position_quad(a)?;
    let mut hypotheses = vec![hyp(
        "contains 4 points with no three collinear",
        quad.is_some(),
        match quad {
            Some(ix) => format!("quad at indices {ix:?}"),
            None => "no such quad".to_string(),
        },
    )];
    let mut certificates = Vec::new();
    if let Some(ix) = quad {
        let q: Vec<&[FieldElem]> = ix.iter().map(|&i| a.points()[i].as_slice()).collect();
        let norm = AffineNormalizer::new(f, q[0], q[1], q[2])?;
        let (ai, bi) = norm.apply(f, q[3]);
        let disc = discriminant(f, ai, bi);
        hypotheses.push(hyp(
            "normalized discriminant ab(a+b-1) is nonzero",
            !disc.is_zero(),
            format!("(a,b) = ({}, {}), discriminant {}", ai.code(), bi.code(), disc.code()),
        ));
        hypotheses.push(hyp(
            "(ab)^2 - (a^2-a)(b^2-b) = ab(a+b-1)",
            discriminant_expanded(f, ai, bi) == disc,
            "checked on the instance",
        ));

        // l = T^(a,b) - a T^(1,0) - b T^(0,1) + (a+b-1) T^(0,0) on the normalized quad
        let base = PointList::new(
            f,
            2,
            vec![vec![f.zero(), f.zero()], vec![f.one(), f.zero()], vec![f.zero(), f.one()], vec![ai, bi]],
        )?;
        let l = OperatorVec::new(
            &base,
            vec![f.sub(f.add(ai, bi), f.one()), f.neg(ai), f.neg(bi), f.one()],
        )?;
        let expected = quad_leading_form(f, ai, bi);
        let leading = hasse_expansion(&l).leading();
        hypotheses.push(hyp(
            "leading component of l matches the quadratic form",
            leading.as_ref() == Some(&expected),
            "re-expanded from shift operators",
        ));
        let power = op_power(f, &expected, p - 1)?;
        let top = ExpTuple(vec![p - 1, p - 1]);
        hypotheses.push(hyp(
            "l_(2)^(p-1) has a nonzero H^(p-1,p-1) coefficient",
            !power.coeff(&top).is_zero(),
            format!("coefficient {}", power.coeff(&top).code()),
        ));
        certificates.push(Certificate::Normalization {
            quad: q.iter().map(|x| x.to_vec()).collect(),
            origin: norm.origin.clone(),
            linear: norm.linear,
            image: (ai, bi),
            discriminant: disc,
            leading: expected,
            leading_power: power,
        });
    }
    let s = iterate_sumset(&dense(a, limits)?, p as u64 - 1)?;
    Ok(TheoremReport::assemble(
        TheoremId::TwoDim,
        f,
        2,
        true,
        hypotheses,
        Relation::AtLeast,
        cells(f, 2),
        s.len() as u64,
        certificates,
    ))
}

/// Points whose first nonzero coordinate is 1.
pub fn tight_example(p: u64, n: usize) -> Result<PointList> {
    let f = make_field(p, 1)?;
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let mut points = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        let count = (p as usize).pow(tail as u32);
        for mut code in 0..count {
            let mut pt = vec![f.zero(); n];
            pt[lead] = f.one();
            // trailing coordinates in lexicographic order, last coordinate fastest
            for slot in (lead + 1..n).rev() {
                pt[slot] = f.from_int((code % p as usize) as i64);
                code /= p as usize;
            }
            points.push(pt);
        }
    }
    PointList::new(&f, n, points)
}

/// The tight example has `(p^n-1)/(p-1)` points and its `(p-1)`-fold sumset
/// is not the whole space.
pub fn tight_example_report(p: u64, n: usize, limits: Limits) -> Result<TheoremReport> {
    let a = tight_example(p, n)?;
    let f = a.field().clone();
    let expected = ((p as u128).pow(n as u32) - 1) / (p as u128 - 1);
    let hypotheses = vec![hyp(
        "size (p^n-1)/(p-1)",
        a.len() as u128 == expected,
        format!("{} points", a.len()),
    )];
    let s = iterate_sumset(&dense(&a, limits)?, p - 1)?;
    Ok(TheoremReport::assemble(
        TheoremId::Tightness,
        &f,
        n,
        true,
        hypotheses,
        Relation::Below,
        cells(&f, n),
        s.len() as u64,
        Vec::new(),
    ))
}

fn difference_rank(a: &PointList) -> usize {
    let f = a.field();
    let pts = a.points();
    let rows = pts[1..].iter().map(|x| f.sub_vec(x, &pts[0])).collect();
    FMatrix::from_rows(f, a.dim(), rows).expect("rows have width n").rank()
}

/// `n + 1` points whose differences from the first span `F^n`.
pub fn is_affine_basis(a: &PointList) -> bool {
    a.len() == a.dim() + 1 && difference_rank(a) == a.dim()
}

/// Sumsets of `m` affine bases have at least `min(p^n, (1 + floor(m/n))^n)` points.
pub fn egz_bound_check(sets: &[PointList], limits: Limits) -> Result<TheoremReport> {
    let (field, n) = common_space(sets)?;
    require_prime(&field)?;
    let mut hypotheses = Vec::new();
    let mut certificates = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        let basis = is_affine_basis(a);
        hypotheses.push(hyp(
            format!("set {i} is an affine basis"),
            basis,
            format!("{} points", a.len()),
        ));
        if basis {
            certificates.push(Certificate::AffineBasis { set: i, rank: n });
        }
    }
    let m = sets.len() as u64;
    let side = 1 + m / n as u64;
    let target = cells(&field, n).min(side.checked_pow(n as u32).unwrap_or(u64::MAX));
    let observed = observed_family(sets, limits)?;
    Ok(TheoremReport::assemble(
        TheoremId::AffineBases,
        &field,
        n,
        true,
        hypotheses,
        Relation::AtLeast,
        target,
        observed,
        certificates,
    ))
}

/// Repacks `A` into `F_{p^ell}^{n/ell}`, runs [`verify_main_q`] on `p - 1`
/// copies of the image with budgets `(p^ell - 1)/(p - 1) * (n/ell)`, and
/// compares with the direct `(p-1)`-fold sumset in `F_p^n`.
pub fn crosscheck_phi(a: &PointList, ell: u32, limits: Limits) -> Result<TheoremReport> {
    let (field, n) = common_space(std::slice::from_ref(a))?;
    require_prime(&field)?;
    if ell == 0 || n % ell as usize != 0 {
        return Err(Error::NotDivisible { ell: ell as usize, n });
    }
    let p = field.p();
    let big = make_field(p as u64, ell)?;
    let n_img = n / ell as usize;
    let image_points = a
        .points()
        .iter()
        .map(|x| phi_pack(p, ell as usize, x))
        .collect::<Result<Vec<_>>>()?;
    let image = PointList::new(&big, n_img, image_points.clone())?;
    let q_img = big.q() as u64;
    let budget = (q_img - 1) / (p as u64 - 1) * n_img as u64;
    let copies = vec![image.clone(); p as usize - 1];
    let image_report = verify_main_q(&copies, &vec![budget; copies.len()], limits)?;

    let direct = iterate_sumset(&dense(a, limits)?, p as u64 - 1)?;
    let via_image = iterate_sumset(&dense(&image, limits)?, p as u64 - 1)?;
    let mut mapped = DensePointSet::empty_with_limit(&big, n_img, limits.max_cells)?;
    for x in direct.points() {
        mapped.insert(&phi_pack(p, ell as usize, &x)?)?;
    }

    let mut hypotheses = image_report.hypotheses.clone();
    hypotheses.push(hyp(
        "image of the sumset equals the sumset of the image",
        mapped == via_image,
        format!("{} vs {} points", mapped.len(), via_image.len()),
    ));
    let applicable = image_report.verdict != Verdict::NotApplicable;
    Ok(TheoremReport::assemble(
        TheoremId::PhiCrosscheck,
        &field,
        n,
        applicable,
        hypotheses,
        Relation::AtLeast,
        cells(&field, n),
        direct.len() as u64,
        vec![Certificate::PhiImage {
            ell,
            image: image_points,
            image_report: Box::new(image_report),
        }],
    ))
}
