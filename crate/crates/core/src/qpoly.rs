//! Deciding the Q-polynomial property.
//!
//! Three independent deciders are implemented for each nontrivial primitive
//! idempotent `E`:
//!
//! * the balanced set condition, checked as a vector identity over all
//!   coordinates for every pair `x, y` and every `i < j`:
//!   `Σ_{z∈Γ_i(x)∩Γ_j(y)} Eẑ − Σ_{w∈Γ_j(x)∩Γ_i(y)} Eŵ
//!      = p^h_{ij} (θ*_i − θ*_j)/(θ*_0 − θ*_h) (Ex̂ − Eŷ)`;
//! * ordering recovery in dual coordinates: the entrywise powers of `E`
//!   have coordinate vectors `(θ*_h)^p` in the distance-matrix basis, and an
//!   ordering starting at `E` exists iff each new degree brings exactly one
//!   more idempotent into the span;
//! * the Krein parameters `q^h_{ij} = |X| tr((E_i ∘ E_j) E_h) / m_h`, with an
//!   ordering accepted iff its `q^1` pattern is tridiagonal with a positive
//!   superdiagonal.

use std::fmt;

use itertools::Itertools;
use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distance::DistanceData;
use crate::error::QPolyError;
use crate::invariants::IntersectionData;
use crate::spectral::SpectralData;

/// Relative residual above which a balanced-set instance fails.
pub const BALANCED_SET_THRESHOLD: f64 = 1e-6;

pub const DEFAULT_SAMPLES: usize = 10_000;

/// Relative residual below which a vector counts as lying in a span.
const SPAN_MEMBER: f64 = 1e-8;
/// Relative residual above which a vector counts as outside a span.
const SPAN_OUTSIDE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Sampled => "sampled",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Mode::Full),
            "sampled" => Ok(Mode::Sampled),
            other => Err(format!("unknown mode {other:?} (expected full or sampled)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedSetConfig {
    pub mode: Mode,
    pub seed: u64,
    pub samples: usize,
    pub threshold: f64,
}

impl Default for BalancedSetConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Full,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            threshold: BALANCED_SET_THRESHOLD,
        }
    }
}

impl BalancedSetConfig {
    pub fn sampled(seed: u64) -> Self {
        Self {
            mode: Mode::Sampled,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Qpoly,
    NotQpoly,
}

/// A failing balanced-set instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalancedSetWitness {
    pub h: usize,
    pub i: usize,
    pub j: usize,
    pub x: usize,
    pub y: usize,
    pub residual: f64,
}

impl BalancedSetWitness {
    fn key(&self) -> (usize, usize, usize, usize, usize) {
        (self.h, self.i, self.j, self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalancedSetOutcome {
    pub idempotent: usize,
    pub verdict: Verdict,
    /// `h >= 1` with `θ*_0 = θ*_h`, when the guard fired.
    pub collision: Option<usize>,
    /// Lexicographically least failing `(h, i, j, x, y)` among checked instances.
    pub witness: Option<BalancedSetWitness>,
    pub worst_residual: f64,
    pub instances: usize,
    pub distinct_duals: bool,
}

fn dual_scale(dual: &[f64]) -> f64 {
    dual.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0)
}

/// True when the dual values are pairwise separated by more than a relative
/// `1e-9`.
pub fn mutually_distinct(dual: &[f64]) -> bool {
    let tol = 1e-9 * dual_scale(dual);
    dual.iter()
        .tuple_combinations()
        .all(|(a, b)| (a - b).abs() > tol)
}

struct Instance<'a> {
    dd: &'a DistanceData,
    id: &'a IntersectionData,
    e: &'a ndarray::Array2<f64>,
    dual: &'a [f64],
    n: usize,
    w: usize,
}

impl Instance<'_> {
    fn coefficient(&self, h: usize, i: usize, j: usize) -> f64 {
        if h == 0 {
            // x = y: both sides vanish
            return 0.0;
        }
        self.id.p(h, i, j) as f64 * (self.dual[i] - self.dual[j]) / (self.dual[0] - self.dual[h])
    }

    fn relative_residual(&self, lhs: &Array1<f64>, rhs: &Array1<f64>) -> f64 {
        let inf = |v: &Array1<f64>| v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let diff = lhs
            .iter()
            .zip(rhs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        diff / inf(lhs).max(inf(rhs)).max(1.0 / self.n as f64)
    }

    fn rhs(&self, h: usize, i: usize, j: usize, x: usize, y: usize) -> Array1<f64> {
        (&self.e.row(x) - &self.e.row(y)) * self.coefficient(h, i, j)
    }

    /// Every `(i, j)` instance for one pair, from a single pass over `z`.
    fn all_for_pair(&self, x: usize, y: usize, threshold: f64) -> PairResult {
        let h = self.dd.dist(x, y);
        let w = self.w;
        let mut sums = vec![Array1::<f64>::zeros(self.n); w * w];
        for (z, (&dx, &dy)) in self.dd.row(x).iter().zip(self.dd.row(y)).enumerate() {
            if dx != dy {
                sums[dx as usize * w + dy as usize] += &self.e.row(z);
            }
        }
        let mut result = PairResult::default();
        for i in 0..w {
            for j in i + 1..w {
                if self.id.p(h, i, j) == 0 {
                    continue;
                }
                let lhs = &sums[i * w + j] - &sums[j * w + i];
                let r = self.relative_residual(&lhs, &self.rhs(h, i, j, x, y));
                result.record(h, i, j, x, y, r, threshold);
            }
        }
        result
    }

    fn single(&self, x: usize, y: usize, i: usize, j: usize) -> f64 {
        let h = self.dd.dist(x, y);
        let mut lhs = Array1::<f64>::zeros(self.n);
        for (z, (&dx, &dy)) in self.dd.row(x).iter().zip(self.dd.row(y)).enumerate() {
            let (dx, dy) = (dx as usize, dy as usize);
            if dx == i && dy == j {
                lhs += &self.e.row(z);
            }
            if dx == j && dy == i {
                lhs -= &self.e.row(z);
            }
        }
        self.relative_residual(&lhs, &self.rhs(h, i, j, x, y))
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct PairResult {
    worst: f64,
    instances: usize,
    witness: Option<BalancedSetWitness>,
}

impl PairResult {
    #[allow(clippy::too_many_arguments)]
    fn record(&mut self, h: usize, i: usize, j: usize, x: usize, y: usize, r: f64, threshold: f64) {
        self.instances += 1;
        self.worst = self.worst.max(r);
        if r > threshold || r.is_nan() {
            let w = BalancedSetWitness {
                h,
                i,
                j,
                x,
                y,
                residual: r,
            };
            if self.witness.is_none_or(|cur| w.key() < cur.key()) {
                self.witness = Some(w);
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.worst = self.worst.max(other.worst);
        self.instances += other.instances;
        self.witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(if b.key() < a.key() { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Checks the balanced set condition for idempotent `e`.
///
/// Instances with `i = j` vanish identically and `(j, i)` is the negation of
/// `(i, j)`, so only `i < j` is visited; instances with `p^h_{ij} = 0` have
/// both sides zero and are skipped too.
pub fn balanced_set_check(
    dd: &DistanceData,
    id: &IntersectionData,
    sd: &SpectralData,
    e: usize,
    config: &BalancedSetConfig,
) -> Result<BalancedSetOutcome, QPolyError> {
    let d = sd.diameter();
    if e == 0 {
        return Err(QPolyError::TrivialIdempotent);
    }
    if e > d {
        return Err(QPolyError::IndexOutOfRange { index: e, max: d });
    }
    let dual = sd.dual(e);
    let distinct_duals = mutually_distinct(dual);
    let tol = 1e-9 * dual_scale(dual);
    if let Some(h) = (1..=d).find(|&h| (dual[0] - dual[h]).abs() <= tol) {
        return Ok(BalancedSetOutcome {
            idempotent: e,
            verdict: Verdict::NotQpoly,
            collision: Some(h),
            witness: None,
            worst_residual: f64::INFINITY,
            instances: 0,
            distinct_duals,
        });
    }

    let inst = Instance {
        dd,
        id,
        e: sd.idempotent(e),
        dual,
        n: dd.order(),
        w: d + 1,
    };
    let n = dd.order();
    let result = match config.mode {
        Mode::Full => (0..n)
            .into_par_iter()
            .map(|x| {
                (0..n)
                    .filter(|&y| y != x)
                    .map(|y| inst.all_for_pair(x, y, config.threshold))
                    .fold(PairResult::default(), PairResult::merge)
            })
            .reduce(PairResult::default, PairResult::merge),
        Mode::Sampled => {
            let choices: Vec<Vec<(usize, usize)>> = (0..=d)
                .map(|h| {
                    (0..=d)
                        .tuple_combinations()
                        .filter(|&(i, j)| id.p(h, i, j) > 0)
                        .collect()
                })
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let draws: Vec<(usize, usize, usize, usize)> = (0..config.samples)
                .map(|_| {
                    let x = rng.random_range(0..n);
                    let y = (x + rng.random_range(1..n)) % n;
                    let options = &choices[dd.dist(x, y)];
                    let (i, j) = options[rng.random_range(0..options.len())];
                    (x, y, i, j)
                })
                .collect();
            draws
                .par_iter()
                .map(|&(x, y, i, j)| {
                    let mut r = PairResult::default();
                    r.record(dd.dist(x, y), i, j, x, y, inst.single(x, y, i, j), config.threshold);
                    r
                })
                .reduce(PairResult::default, PairResult::merge)
        }
    };
    Ok(BalancedSetOutcome {
        idempotent: e,
        verdict: if result.witness.is_none() {
            Verdict::Qpoly
        } else {
            Verdict::NotQpoly
        },
        collision: None,
        witness: result.witness,
        worst_residual: result.worst,
        instances: result.instances,
        distinct_duals,
    })
}

/// Both sides of one balanced-set instance projected onto `E γ̂`:
/// returns `(⟨LHS, Eγ̂⟩, ⟨RHS, Eγ̂⟩)`.
#[allow(clippy::too_many_arguments)]
pub fn projected_instance(
    dd: &DistanceData,
    id: &IntersectionData,
    sd: &SpectralData,
    e: usize,
    (x, y): (usize, usize),
    (i, j): (usize, usize),
    gamma: usize,
) -> (f64, f64) {
    let inst = Instance {
        dd,
        id,
        e: sd.idempotent(e),
        dual: sd.dual(e),
        n: dd.order(),
        w: sd.diameter() + 1,
    };
    let eg = inst.e.row(gamma);
    let mut lhs = 0.0;
    for z in 0..inst.n {
        let (dx, dy) = (dd.dist(x, z), dd.dist(y, z));
        if dx == i && dy == j {
            lhs += inst.e.row(z).dot(&eg);
        }
        if dx == j && dy == i {
            lhs -= inst.e.row(z).dot(&eg);
        }
    }
    let rhs = inst.rhs(dd.dist(x, y), i, j, x, y).dot(&eg);
    (lhs, rhs)
}

/// Gram–Schmidt basis in `R^{d+1}` with explicit membership decisions.
struct Span {
    basis: Vec<Vec<f64>>,
}

impl Span {
    fn residual(&self, v: &[f64]) -> (Vec<f64>, f64) {
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut r = v.to_vec();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &self.basis {
                let c: f64 = r.iter().zip(b).map(|(a, b)| a * b).sum();
                r.iter_mut().zip(b).for_each(|(a, b)| *a -= c * b);
            }
        }
        let rn = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        (r, if norm == 0.0 { 0.0 } else { rn / norm })
    }

    /// `Some(true)` inside, `Some(false)` outside, `None` ambiguous.
    fn contains(&self, v: &[f64]) -> (Option<bool>, f64) {
        let (_, r) = self.residual(v);
        let decision = if r < SPAN_MEMBER {
            Some(true)
        } else if r > SPAN_OUTSIDE {
            Some(false)
        } else {
            None
        };
        (decision, r)
    }

    fn push(&mut self, v: &[f64]) {
        let (r, _) = self.residual(v);
        let n = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        self.basis.push(r.into_iter().map(|a| a / n).collect());
    }
}

/// The Q-polynomial ordering with `σ(1) = candidate`, if any. Works entirely
/// on the `(d+1)`-dimensional dual coordinate vectors.
pub fn ordering_for_candidate(
    sd: &SpectralData,
    candidate: usize,
) -> Result<Option<Vec<usize>>, QPolyError> {
    let d = sd.diameter();
    if candidate == 0 || candidate > d {
        return Err(QPolyError::IndexOutOfRange {
            index: candidate,
            max: d,
        });
    }
    let scale = dual_scale(sd.dual(candidate));
    let v: Vec<f64> = sd.dual(candidate).iter().map(|a| a / scale).collect();
    let mut span = Span { basis: Vec::new() };
    span.push(&vec![1.0; d + 1]);
    let mut order = vec![0];
    let mut power = vec![1.0; d + 1];
    for degree in 1..=d {
        power.iter_mut().zip(&v).for_each(|(p, a)| *p *= a);
        match span.contains(&power) {
            (Some(true), _) => return Ok(None),
            (None, residual) => {
                return Err(QPolyError::AmbiguousRank {
                    candidate,
                    degree,
                    residual,
                })
            }
            (Some(false), _) => span.push(&power),
        }
        let mut entering = Vec::new();
        for j in (1..=d).filter(|j| !order.contains(j)) {
            let dual = sd.dual(j);
            let s = dual_scale(dual);
            let w: Vec<f64> = dual.iter().map(|a| a / s).collect();
            match span.contains(&w) {
                (Some(true), _) => entering.push(j),
                (Some(false), _) => {}
                (None, residual) => {
                    return Err(QPolyError::AmbiguousRank {
                        candidate,
                        degree,
                        residual,
                    })
                }
            }
        }
        if entering.len() != 1 {
            return Ok(None);
        }
        order.push(entering[0]);
    }
    Ok(Some(order))
}

/// Every Q-polynomial ordering (each starts with 0); empty iff the graph is
/// not Q-polynomial with respect to any idempotent.
pub fn qpoly_orderings(sd: &SpectralData) -> Result<Vec<Vec<usize>>, QPolyError> {
    let mut out = Vec::new();
    for c in 1..=sd.diameter() {
        if let Some(o) = ordering_for_candidate(sd, c)? {
            out.push(o);
        }
    }
    Ok(out)
}

/// Krein parameters and the orderings they certify.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KreinData {
    /// `q[h][i][j]`
    pub q: Vec<Vec<Vec<f64>>>,
    /// Threshold below which a Krein parameter counts as zero.
    pub zero_threshold: f64,
    pub min_value: f64,
    /// Orderings whose relabeled `q^1` pattern is tridiagonal with positive
    /// off-diagonal.
    pub orderings: Vec<Vec<usize>>,
}

impl KreinData {
    pub fn admits_candidate(&self, e: usize) -> bool {
        self.orderings.iter().any(|o| o.get(1) == Some(&e))
    }
}

/// `q^h_{ij} = |X| / m_h · Σ_{x,y} (E_i)_{xy} (E_j)_{xy} (E_h)_{xy}`, plus a
/// brute-force search over orderings for the tridiagonal `q^1` pattern.
pub fn krein_oracle(sd: &SpectralData) -> Result<KreinData, QPolyError> {
    let d = sd.diameter();
    let n = sd.order() as f64;
    let triples: Vec<(usize, usize, usize)> = (0..=d)
        .flat_map(|h| (0..=d).flat_map(move |i| (0..=d).map(move |j| (h, i, j))))
        .collect();
    let values: Vec<f64> = triples
        .par_iter()
        .map(|&(h, i, j)| {
            let (eh, ei, ej) = (sd.idempotent(h), sd.idempotent(i), sd.idempotent(j));
            let s: f64 = ndarray::Zip::from(eh)
                .and(ei)
                .and(ej)
                .fold(0.0, |acc, a, b, c| acc + a * b * c);
            n * s / sd.mult()[h] as f64
        })
        .collect();
    let mut q = vec![vec![vec![0.0; d + 1]; d + 1]; d + 1];
    for (&(h, i, j), &v) in triples.iter().zip(&values) {
        q[h][i][j] = v;
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let eps = sd.tolerance() * scale;
    let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    if let Some(idx) = values.iter().position(|&v| v < -10.0 * eps) {
        let (h, i, j) = triples[idx];
        return Err(QPolyError::NegativeKrein {
            h,
            i,
            j,
            value: values[idx],
        });
    }
    let zero_threshold = 1e-6 * scale;

    let mut orderings = Vec::new();
    for first in 1..=d {
        let rest: Vec<usize> = (1..=d).filter(|&j| j != first).collect();
        for tail in rest.iter().copied().permutations(rest.len()) {
            let sigma: Vec<usize> = [0, first].into_iter().chain(tail).collect();
            let q1 = |a: usize, b: usize| q[sigma[1]][sigma[a]][sigma[b]];
            let banded = (0..=d)
                .tuple_combinations()
                .all(|(a, b)| b - a <= 1 || q1(a, b).abs() <= zero_threshold);
            let chained = (0..d).all(|a| q1(a, a + 1) > zero_threshold);
            if banded && chained {
                orderings.push(sigma);
            }
        }
    }
    Ok(KreinData {
        q,
        zero_threshold,
        min_value,
        orderings,
    })
}

/// The three verdicts for one nontrivial idempotent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdempotentVerdicts {
    pub idempotent: usize,
    pub verdict: Verdict,
    /// `None` when the collision guard fired and no instance was evaluated.
    pub worst_residual: Option<f64>,
    pub witness: Option<BalancedSetWitness>,
    pub collision: Option<usize>,
    pub ordering_verdict: bool,
    pub krein_verdict: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QPolyReport {
    pub verdicts: Vec<IdempotentVerdicts>,
    pub orderings: Vec<Vec<usize>>,
    /// Largest residual among idempotents that pass; 0 when none does.
    pub worst_residual: f64,
    pub mode: Mode,
    pub seed: u64,
    pub instances: usize,
    pub consistent: bool,
    pub krein: KreinData,
}

impl QPolyReport {
    /// Q-polynomial with respect to at least one idempotent, by every decider.
    pub fn is_qpoly(&self) -> bool {
        self.consistent && !self.orderings.is_empty()
    }
}

/// Runs all three deciders and compares them idempotent by idempotent.
pub fn qpoly_consistency(
    dd: &DistanceData,
    id: &IntersectionData,
    sd: &SpectralData,
    config: &BalancedSetConfig,
) -> Result<QPolyReport, QPolyError> {
    let orderings = qpoly_orderings(sd)?;
    let krein = krein_oracle(sd)?;
    let mut verdicts = Vec::new();
    let mut worst: f64 = 0.0;
    let mut instances = 0;
    for e in 1..=sd.diameter() {
        let outcome = balanced_set_check(dd, id, sd, e, config)?;
        if outcome.verdict == Verdict::Qpoly {
            worst = worst.max(outcome.worst_residual);
        }
        instances += outcome.instances;
        let balanced = outcome.verdict == Verdict::Qpoly;
        let ordering_verdict = orderings.iter().any(|o| o[1] == e);
        let krein_verdict = krein.admits_candidate(e);
        // a passing balanced set with colliding duals would contradict the
        // distinctness consequence, so it counts as disagreement
        let agree = balanced == ordering_verdict
            && balanced == krein_verdict
            && (!balanced || outcome.distinct_duals);
        verdicts.push(IdempotentVerdicts {
            idempotent: e,
            verdict: outcome.verdict,
            worst_residual: outcome.collision.is_none().then_some(outcome.worst_residual),
            witness: outcome.witness,
            collision: outcome.collision,
            ordering_verdict,
            krein_verdict,
            agree,
        });
    }
    let consistent = verdicts.iter().all(|v| v.agree);
    Ok(QPolyReport {
        consistent,
        verdicts,
        orderings,
        worst_residual: worst,
        mode: config.mode,
        seed: config.seed,
        instances,
        krein,
    })
}
