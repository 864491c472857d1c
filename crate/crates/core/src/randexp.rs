//! Random-set experiments over prime fields: cube partitions, the affine hash
//! family `x -> label(Ax + b)`, exact and sampled hash statistics, and the
//! expansion rate of random `(n+2)`-point sets.
//!
//! All randomness comes from `ChaCha8Rng` seeded by the caller; experiments
//! with several trials give trial `t` its own stream `t` of the same seed.

use num_rational::Ratio;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{make_field, FieldElem, FieldSpec};
use crate::linalg::FMatrix;
use crate::shiftops::{PointList, DEFAULT_MAX_CELLS};
use crate::sumsets::{is_full, iterate_sumset, DensePointSet};

/// Largest `|GL_n(F_p)| * p^n` enumerated in exact mode.
pub const EXACT_ENUMERATION_LIMIT: u64 = 10_000_000;

pub type Rational = Ratio<i128>;

/// `[0, p)` split into `d` near-equal intervals `I_i = [floor((i-1)p/d), floor(ip/d))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubePartition {
    pub p: u64,
    pub d: u64,
    /// `d + 1` boundaries; interval `i` (1-based) is `bounds[i-1]..bounds[i]`.
    pub bounds: Vec<u64>,
}

pub fn make_partition(p: u64, d: u64) -> Result<CubePartition> {
    if d == 0 || d >= p {
        return Err(Error::InvalidArgument(format!("partition count {d} outside [1, {}]", p.saturating_sub(1))));
    }
    let bounds: Vec<u64> = (0..=d).map(|i| i * p / d).collect();
    let part = CubePartition { p, d, bounds };
    let sizes: Vec<u64> = (1..=d).map(|i| part.size(i)).collect();
    let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
    assert!(hi - lo <= 1 && *lo >= 1, "unbalanced partition {sizes:?}");
    assert_eq!(sizes.iter().sum::<u64>(), p);
    Ok(part)
}

impl CubePartition {
    pub fn interval(&self, i: u64) -> std::ops::Range<u64> {
        self.bounds[i as usize - 1]..self.bounds[i as usize]
    }

    pub fn size(&self, i: u64) -> u64 {
        self.bounds[i as usize] - self.bounds[i as usize - 1]
    }

    /// 1-based label of the interval containing `v`.
    pub fn label(&self, v: u64) -> u32 {
        self.bounds.partition_point(|&b| b <= v) as u32
    }

    /// `|R_k|` for a label vector `k`.
    pub fn rect_size(&self, k: &[u32]) -> u64 {
        k.iter().map(|&i| self.size(i as u64)).product()
    }
}

/// `f_{A,b,d}` over `F_p^n`, with `A` stored row-major as residues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineHash {
    pub n: usize,
    pub matrix: Vec<u32>,
    pub offset: Vec<u32>,
    pub partition: CubePartition,
}

impl AffineHash {
    pub fn new(a: &FMatrix, b: &[FieldElem], d: u64) -> Result<Self> {
        let f = a.field();
        if !f.is_prime_field() {
            return Err(Error::InvalidArgument("hash family needs a prime field".into()));
        }
        let n = a.rows();
        if a.cols() != n || b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if a.cols() != n { a.cols() } else { b.len() },
            });
        }
        if a.rank() != n {
            return Err(Error::Degenerate("hash matrix is singular".into()));
        }
        let matrix = (0..n).flat_map(|r| a.row(r).iter().map(|e| e.code())).collect();
        Ok(AffineHash {
            n,
            matrix,
            offset: b.iter().map(|e| e.code()).collect(),
            partition: make_partition(f.p() as u64, d)?,
        })
    }

    fn image(&self, x: &[u32], out: &mut [u64]) {
        let p = self.partition.p;
        for (j, o) in out.iter_mut().enumerate() {
            let row = &self.matrix[j * self.n..(j + 1) * self.n];
            let dot: u64 = row.iter().zip(x).map(|(&a, &xi)| a as u64 * xi as u64).sum();
            *o = (dot + self.offset[j] as u64) % p;
        }
    }
}

/// Labels of the rectangle containing `Ax + b`, 1-based per coordinate.
pub fn hash_eval(h: &AffineHash, x: &[FieldElem]) -> Vec<u32> {
    let codes: Vec<u32> = x.iter().map(|e| e.code()).collect();
    let mut y = vec![0u64; h.n];
    h.image(&codes, &mut y);
    y.iter().map(|&v| h.partition.label(v)).collect()
}

fn random_matrix(field: &FieldSpec, n: usize, rng: &mut impl Rng) -> FMatrix {
    let p = field.p() as i64;
    let rows = (0..n).map(|_| (0..n).map(|_| field.from_int(rng.gen_range(0..p))).collect()).collect();
    FMatrix::from_rows(field, n, rows).expect("square rows")
}

/// A uniform element of `GL_n(F_p)` by rejection, with the number of draws used.
pub fn sample_gl_counted(field: &FieldSpec, n: usize, rng: &mut impl Rng) -> (FMatrix, u64) {
    let mut draws = 0;
    loop {
        draws += 1;
        let m = random_matrix(field, n, rng);
        if m.rank() == n {
            return (m, draws);
        }
    }
}

pub fn sample_gl(field: &FieldSpec, n: usize, rng: &mut impl Rng) -> FMatrix {
    sample_gl_counted(field, n, rng).0
}

/// `prod_{i=1}^n (1 - p^-i)`, the chance that a uniform matrix is invertible.
pub fn gl_fraction(p: u64, n: usize) -> Rational {
    (1..=n as u32).fold(Rational::from_integer(1), |acc, i| {
        acc * (Rational::from_integer(1) - Rational::new(1, (p as i128).pow(i)))
    })
}

/// `|GL_n(F_p)| = prod_{i<n} (p^n - p^i)`, saturating.
pub fn gl_order(p: u64, n: usize) -> u64 {
    let pn = (p as u128).pow(n as u32);
    (0..n as u32)
        .map(|i| pn - (p as u128).pow(i))
        .fold(1u128, |acc, x| acc.saturating_mul(x))
        .min(u64::MAX as u128) as u64
}

fn check_enumeration(p: u64, n: usize) -> Result<()> {
    let required = gl_order(p, n).saturating_mul(p.saturating_pow(n as u32));
    if required > EXACT_ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            guard: "exact-enumeration",
            required,
            limit: EXACT_ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Every invertible `n x n` matrix over `F_p`, row-major residues.
fn enumerate_gl(field: &FieldSpec, n: usize) -> Vec<Vec<u32>> {
    let p = field.p() as u64;
    let total = p.pow((n * n) as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut entries = vec![0u32; n * n];
        for e in entries.iter_mut() {
            *e = (code % p) as u32;
            code /= p;
        }
        let rows = entries
            .chunks(n)
            .map(|r| r.iter().map(|&c| field.from_int(c as i64)).collect())
            .collect();
        if FMatrix::from_rows(field, n, rows).expect("square").rank() == n {
            out.push(entries);
        }
    }
    out
}

/// Calls `visit` with every hash `f_{A,b,d}` over `F_p^n`.
fn for_each_hash(p: u64, n: usize, d: u64, mut visit: impl FnMut(&AffineHash)) -> Result<u64> {
    check_enumeration(p, n)?;
    let field = make_field(p, 1)?;
    let partition = make_partition(p, d)?;
    let mut count = 0;
    for matrix in enumerate_gl(&field, n) {
        for mut code in 0..p.pow(n as u32) {
            let offset = (0..n)
                .map(|_| {
                    let v = (code % p) as u32;
                    code /= p;
                    v
                })
                .collect();
            let h = AffineHash {
                n,
                matrix: matrix.clone(),
                offset,
                partition: partition.clone(),
            };
            visit(&h);
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashStats {
    pub p: u64,
    pub n: usize,
    pub d: u64,
    pub maps: u64,
    pub pr_x: Rational,
    pub pr_y: Rational,
    pub joint: Rational,
    pub covariance: Rational,
    /// `|R_k| / p^n` and `|R_l| / p^n`.
    pub expected_pr_x: Rational,
    pub expected_pr_y: Rational,
    pub expected_covariance: Rational,
    /// For `k = l`, the form `(|R_k|^2 - 1)/((p^n-1) p^n) - |R_k|^2/p^(2n)`,
    /// which counts `|R_k|^2 - 1` instead of `|R_k|(|R_k| - 1)` joint pairs;
    /// kept for comparison and not used in `matches_closed_forms`.
    pub stated_same_label_covariance: Option<Rational>,
    /// Every pair `(s, t)` with `s != t` is hit by `(Ax+b, Ay+b)` with
    /// probability `1/((p^n-1) p^n)`, and no pair with `s = t` is hit.
    pub pair_law_holds: bool,
    pub matches_closed_forms: bool,
    /// `(2/(d p^2))^n`.
    pub displayed_bound: Rational,
    /// Whether `covariance <= displayed_bound`; false flags the bound.
    pub displayed_bound_dominates: bool,
}

fn to_residues(field: &FieldSpec, n: usize, x: &[FieldElem]) -> Result<Vec<u32>> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    x.iter().map(|e| field.elem(e.code() as u64).map(|e| e.code())).collect()
}

fn check_label(k: &[u32], n: usize, d: u64) -> Result<()> {
    if k.len() != n || k.iter().any(|&i| i == 0 || i as u64 > d) {
        return Err(Error::InvalidArgument(format!("label {k:?} outside [1, {d}]^{n}")));
    }
    Ok(())
}

/// Exact `Pr[X_{x,k} = 1]`, `Pr[X_{y,l} = 1]` and their covariance over all
/// `(A, b)`, compared against the closed forms.
#[allow(clippy::too_many_arguments)]
pub fn exact_hash_stats(
    p: u64,
    n: usize,
    d: u64,
    x: &[FieldElem],
    y: &[FieldElem],
    k: &[u32],
    l: &[u32],
) -> Result<HashStats> {
    let field = make_field(p, 1)?;
    let xr = to_residues(&field, n, x)?;
    let yr = to_residues(&field, n, y)?;
    if xr == yr {
        return Err(Error::InvalidArgument("x and y must differ".into()));
    }
    check_label(k, n, d)?;
    check_label(l, n, d)?;
    let cells = p.pow(n as u32) as usize;
    let index = |v: &[u64]| v.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize);
    let mut pair_counts = vec![0u64; cells * cells];
    let (mut hx, mut hy, mut both) = (0i128, 0i128, 0i128);
    let (mut sx, mut sy) = (vec![0u64; n], vec![0u64; n]);
    let maps = for_each_hash(p, n, d, |h| {
        h.image(&xr, &mut sx);
        h.image(&yr, &mut sy);
        pair_counts[index(&sx) * cells + index(&sy)] += 1;
        let kx: Vec<u32> = sx.iter().map(|&v| h.partition.label(v)).collect();
        let ly: Vec<u32> = sy.iter().map(|&v| h.partition.label(v)).collect();
        let (a, b) = (kx == k, ly == l);
        hx += a as i128;
        hy += b as i128;
        both += (a && b) as i128;
    })?;
    let total = maps as i128;
    let pr_x = Rational::new(hx, total);
    let pr_y = Rational::new(hy, total);
    let joint = Rational::new(both, total);
    let covariance = joint - pr_x * pr_y;

    let part = make_partition(p, d)?;
    let pn = (p as i128).pow(n as u32);
    let rk = part.rect_size(k) as i128;
    let rl = part.rect_size(l) as i128;
    let expected_pr_x = Rational::new(rk, pn);
    let expected_pr_y = Rational::new(rl, pn);
    let expected_covariance = if k != l {
        Rational::new(rk * rl, (pn - 1) * pn * pn)
    } else {
        // ordered pairs of distinct points inside R_k
        Rational::new(rk * (rk - 1), (pn - 1) * pn) - Rational::new(rk * rl, pn * pn)
    };
    let stated_same_label_covariance =
        (k == l).then(|| Rational::new(rk * rl - 1, (pn - 1) * pn) - Rational::new(rk * rl, pn * pn));
    let per_pair = total / ((pn - 1) * pn);
    let pair_law_holds = (0..cells).all(|s| {
        (0..cells).all(|t| pair_counts[s * cells + t] as i128 == if s == t { 0 } else { per_pair })
    });
    let displayed_bound = Rational::new(2, d as i128 * (p as i128).pow(2)).pow(n as i32);
    Ok(HashStats {
        p,
        n,
        d,
        maps,
        matches_closed_forms: pr_x == expected_pr_x && pr_y == expected_pr_y && covariance == expected_covariance,
        pr_x,
        pr_y,
        joint,
        displayed_bound_dominates: covariance <= displayed_bound,
        covariance,
        expected_pr_x,
        expected_pr_y,
        expected_covariance,
        stated_same_label_covariance,
        pair_law_holds,
        displayed_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Mode {
    Exact,
    MonteCarlo { trials: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub p: u64,
    pub n: usize,
    pub d: u64,
    pub set_size: usize,
    pub mode: Mode,
    pub successes: u64,
    pub total: u64,
    pub rate: f64,
    /// Present in exact mode.
    pub exact_rate: Option<Rational>,
    /// `1 - (9 d^2)^n / |S|`.
    pub bound: f64,
    pub bound_vacuous: bool,
    /// `rate >= bound`, when the bound is not vacuous.
    pub bound_met: Option<bool>,
}

fn hits_all_labels(h: &AffineHash, set: &[Vec<u32>], seen: &mut [bool], image: &mut [u64]) -> bool {
    let d = h.partition.d as usize;
    seen.iter_mut().for_each(|s| *s = false);
    let mut remaining = seen.len();
    for x in set {
        h.image(x, image);
        let slot = image
            .iter()
            .rev()
            .fold(0usize, |acc, &v| acc * d + h.partition.label(v) as usize - 1);
        if !seen[slot] {
            seen[slot] = true;
            remaining -= 1;
            if remaining == 0 {
                return true;
            }
        }
    }
    false
}

/// Fraction of hashes `f_{A,b,d}` mapping `S` onto `[d]^n`.
pub fn surjectivity_rate(d: u64, s: &PointList, mode: Mode, rng: &mut impl Rng) -> Result<SurjectivityReport> {
    let field = s.field().clone();
    if !field.is_prime_field() {
        return Err(Error::InvalidArgument("hash family needs a prime field".into()));
    }
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let (p, n) = (field.p() as u64, s.dim());
    let partition = make_partition(p, d)?;
    let set: Vec<Vec<u32>> = s.codes();
    let labels = (d as usize).pow(n as u32);
    let mut seen = vec![false; labels];
    let mut image = vec![0u64; n];
    let (successes, total) = match mode {
        Mode::Exact => {
            let mut hits = 0;
            let total = for_each_hash(p, n, d, |h| {
                hits += hits_all_labels(h, &set, &mut seen, &mut image) as u64;
            })?;
            (hits, total)
        }
        Mode::MonteCarlo { trials } => {
            let mut hits = 0;
            for _ in 0..trials {
                let a = sample_gl(&field, n, rng);
                let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p as u32)).collect();
                let h = AffineHash {
                    n,
                    matrix: (0..n).flat_map(|r| a.row(r).iter().map(|e| e.code())).collect(),
                    offset: b,
                    partition: partition.clone(),
                };
                hits += hits_all_labels(&h, &set, &mut seen, &mut image) as u64;
            }
            (hits, trials)
        }
    };
    let rate = successes as f64 / total.max(1) as f64;
    let bound = 1.0 - (9.0 * (d * d) as f64).powi(n as i32) / set.len() as f64;
    let bound_vacuous = bound <= 0.0;
    Ok(SurjectivityReport {
        p,
        n,
        d,
        set_size: set.len(),
        mode,
        successes,
        total,
        rate,
        exact_rate: matches!(mode, Mode::Exact).then(|| Rational::new(successes as i128, total as i128)),
        bound,
        bound_vacuous,
        bound_met: (!bound_vacuous).then_some(rate >= bound),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub p: u64,
    pub n: usize,
    pub c: f64,
    pub trials: u64,
    pub seed: u64,
}

impl TrialConfig {
    /// `ceil(c p)`.
    pub fn summands(&self) -> u64 {
        (self.c * self.p as f64).ceil() as u64
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(Error::InvalidArgument(format!("c = {} outside (0, 1]", self.c)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub points: Vec<Vec<u32>>,
    pub sumset_size: u64,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub config: TrialConfig,
    pub summands: u64,
    pub successes: u64,
    pub rate: f64,
    /// `sqrt(rate (1 - rate) / trials)`.
    pub std_error: f64,
    pub records: Vec<TrialRecord>,
}

/// The generator for trial `t` of a seeded experiment.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `k` distinct uniform points of `F_p^n`; a point colliding with an earlier
/// one is redrawn.
pub fn sample_distinct_points(p: u64, n: usize, k: usize, rng: &mut impl Rng) -> Result<Vec<Vec<u32>>> {
    let cells = (p as u128).pow(n as u32);
    if (k as u128) > cells {
        return Err(Error::InvalidArgument(format!("cannot pick {k} distinct points from {cells}")));
    }
    let mut out: Vec<Vec<u32>> = Vec::with_capacity(k);
    while out.len() < k {
        let x: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p as u32)).collect();
        if !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Rate at which `ceil(c p)` copies of a random `(n+2)`-point set fill `F_p^n`.
pub fn random_expansion_trial(cfg: &TrialConfig, max_cells: u64) -> Result<ExpansionReport> {
    cfg.validate()?;
    let field = make_field(cfg.p, 1)?;
    DensePointSet::empty_with_limit(&field, cfg.n, max_cells)?;
    let summands = cfg.summands();
    let mut records = Vec::with_capacity(cfg.trials as usize);
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t);
        let points = sample_distinct_points(cfg.p, cfg.n, cfg.n + 2, &mut rng)?;
        let b = PointList::from_codes(&field, cfg.n, &points)?;
        let s = iterate_sumset(&DensePointSet::from_point_list_with_limit(&b, max_cells)?, summands)?;
        records.push(TrialRecord {
            trial: t,
            points,
            sumset_size: s.len() as u64,
            success: is_full(&s),
        });
    }
    let successes = records.iter().filter(|r| r.success).count() as u64;
    let rate = successes as f64 / cfg.trials as f64;
    Ok(ExpansionReport {
        config: *cfg,
        summands,
        successes,
        rate,
        std_error: (rate * (1.0 - rate) / cfg.trials as f64).sqrt(),
        records,
    })
}

pub fn random_expansion_default(cfg: &TrialConfig) -> Result<ExpansionReport> {
    random_expansion_trial(cfg, DEFAULT_MAX_CELLS)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineSpanReport {
    pub p: u64,
    pub n: usize,
    pub mode: Mode,
    pub successes: u64,
    pub total: u64,
    pub rate: f64,
    pub exact_rate: Option<Rational>,
    /// `prod_{i=1}^n (1 - p^-i)`.
    pub reference: Rational,
}

fn affinely_independent(field: &FieldSpec, pts: &[Vec<u32>]) -> bool {
    let n = pts.len() - 1;
    let rows = pts[1..]
        .iter()
        .map(|x| {
            x.iter()
                .zip(&pts[0])
                .map(|(&a, &b)| field.sub(field.from_int(a as i64), field.from_int(b as i64)))
                .collect()
        })
        .collect();
    FMatrix::from_rows(field, n, rows).expect("square").rank() == n
}

/// Fraction of uniform `(n+1)`-tuples of points that are affinely independent.
pub fn affine_span_rate(p: u64, n: usize, mode: Mode, rng: &mut impl Rng) -> Result<AffineSpanReport> {
    let field = make_field(p, 1)?;
    let (successes, total) = match mode {
        Mode::Exact => {
            let total = (p as u128).pow((n * (n + 1)) as u32);
            if total > EXACT_ENUMERATION_LIMIT as u128 {
                return Err(Error::GuardExceeded {
                    guard: "exact-enumeration",
                    required: total.min(u64::MAX as u128) as u64,
                    limit: EXACT_ENUMERATION_LIMIT,
                });
            }
            let mut hits = 0;
            for mut code in 0..total as u64 {
                let pts: Vec<Vec<u32>> = (0..=n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                let v = (code % p) as u32;
                                code /= p;
                                v
                            })
                            .collect()
                    })
                    .collect();
                hits += affinely_independent(&field, &pts) as u64;
            }
            (hits, total as u64)
        }
        Mode::MonteCarlo { trials } => {
            let mut hits = 0;
            for _ in 0..trials {
                let pts: Vec<Vec<u32>> =
                    (0..=n).map(|_| (0..n).map(|_| rng.gen_range(0..p as u32)).collect()).collect();
                hits += affinely_independent(&field, &pts) as u64;
            }
            (hits, trials)
        }
    };
    Ok(AffineSpanReport {
        p,
        n,
        mode,
        successes,
        total,
        rate: successes as f64 / total.max(1) as f64,
        exact_rate: matches!(mode, Mode::Exact).then(|| Rational::new(successes as i128, total as i128)),
        reference: gl_fraction(p, n),
    })
}

/// Which step of the random-set argument holds for one sampled set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReplay {
    pub first_points_span: bool,
    /// `floor(cp/2)`-fold sums of `{0, e_1, ..., e_n}` cover `[0, 2 floor(cp/6n)]^n`.
    pub box_covered: bool,
    /// `ceil(7n/c)`.
    pub cube_count: u64,
    pub cube_count_fits: bool,
    /// The normalizing hash maps `{x, 2x, ..., floor(cp/2) x}` onto every label.
    pub progression_surjects: bool,
    pub first_failure: Option<String>,
}

/// Replays the steps of the random-set argument on `n + 2` points `b`.
pub fn proof_replay(cfg: &TrialConfig, b: &[Vec<u32>]) -> Result<ProofReplay> {
    cfg.validate()?;
    let (p, n) = (cfg.p, cfg.n);
    if b.len() != n + 2 {
        return Err(Error::DimensionMismatch {
            expected: n + 2,
            found: b.len(),
        });
    }
    let field = make_field(p, 1)?;
    let half = (cfg.c * p as f64 / 2.0).floor() as u64;
    let side = 2 * (cfg.c * p as f64 / (6.0 * n as f64)).floor() as u64;
    let cube_count = (7.0 * n as f64 / cfg.c).ceil() as u64;

    let first_points_span = affinely_independent(&field, &b[..=n]);
    // the box [0, s]^n needs s n summands from {0, e_i}, and s < p
    let box_covered = side < p && side * n as u64 <= half;
    let cube_count_fits = cube_count < p;
    let mut progression_surjects = false;
    if first_points_span && cube_count_fits && half > 0 {
        // z -> M z + c sending s_0, ..., s_n to 0, e_1, ..., e_n
        let to_elem = |x: &[u32]| x.iter().map(|&v| field.from_int(v as i64)).collect::<Vec<_>>();
        let rows = b[1..=n].iter().map(|x| field.sub_vec(&to_elem(x), &to_elem(&b[0]))).collect();
        let frame = FMatrix::from_rows(&field, n, rows)?.transpose();
        let m = invert(&frame)?;
        let c: Vec<FieldElem> = m.mul_vec(&to_elem(&b[0])).into_iter().map(|v| field.neg(v)).collect();
        let h = AffineHash::new(&m, &c, cube_count)?;
        let x = to_elem(&b[n + 1]);
        let progression: Vec<Vec<u32>> = (1..=half)
            .map(|j| x.iter().map(|&v| field.mul(v, field.from_int(j as i64)).code()).collect())
            .collect();
        let mut seen = vec![false; (cube_count as usize).pow(n as u32)];
        let mut image = vec![0u64; n];
        progression_surjects = hits_all_labels(&h, &progression, &mut seen, &mut image);
    }
    let steps = [
        ("first n+1 points affinely independent", first_points_span),
        ("box covered by the standard simplex sums", box_covered),
        ("cube count below p", cube_count_fits),
        ("progression hits every rectangle", progression_surjects),
    ];
    Ok(ProofReplay {
        first_points_span,
        box_covered,
        cube_count,
        cube_count_fits,
        progression_surjects,
        first_failure: steps.iter().find(|(_, ok)| !ok).map(|(s, _)| s.to_string()),
    })
}

fn invert(m: &FMatrix) -> Result<FMatrix> {
    let f = m.field();
    let n = m.rows();
    let mut aug = FMatrix::zeros(f, n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c));
        }
        aug.set(r, n + r, f.one());
    }
    let red = aug.rref();
    if red.rank < n || red.pivots[..n].iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::Degenerate("matrix is singular".into()));
    }
    let rows = (0..n).map(|r| red.reduced.row(r)[n..].to_vec()).collect();
    FMatrix::from_rows(f, n, rows)
}
