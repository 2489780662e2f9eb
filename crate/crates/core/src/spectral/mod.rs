//! Eigenvalues, multiplicities, primitive idempotents and dual eigenvalue
//! sequences of a distance-regular graph.
//!
//! Eigenvalues come from the `(d+1) x (d+1)` intersection matrix (rows
//! `c_i, a_i, b_i`), symmetrized to off-diagonals `sqrt(b_i c_{i+1})` and
//! solved by Sturm bisection. Idempotents are the Lagrange projectors
//! `E_j = Π_{l≠j} (A − θ_l I) / (θ_j − θ_l)`, evaluated with the sparse
//! adjacency structure. Indexing follows decreasing eigenvalue order, so
//! `E_0 = J/|X|` and `E_1` belongs to the second largest eigenvalue.

pub mod tridiagonal;

use ndarray::{Array2, ArrayView2, Zip};
use rayon::prelude::*;
use serde::Serialize;

use crate::distance::DistanceData;
use crate::error::SpectralError;
use crate::invariants::IntersectionData;

/// Distance within which an eigenvalue is snapped to the nearest integer.
pub const SNAP_WINDOW: f64 = 1e-6;

/// Default matrix-residual tolerance: `1e-8 * max(1, k)`.
pub fn default_tolerance(valency: usize) -> f64 {
    1e-8 * (valency.max(1) as f64)
}

/// Eigenvalues in decreasing order with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub theta: Vec<f64>,
    pub mult: Vec<usize>,
}

/// `u_0, ..., u_d` from `u_0 = 1`, `u_1 = θ/k` and
/// `c_i u_{i-1} + a_i u_i + b_i u_{i+1} = θ u_i`.
pub fn standard_sequence(id: &IntersectionData, theta: f64) -> Vec<f64> {
    let d = id.diameter();
    let mut u = vec![1.0; d + 1];
    if d == 0 {
        return u;
    }
    u[1] = theta / id.valency() as f64;
    for i in 1..d {
        let (a, b, c) = (id.a()[i] as f64, id.b_at(i) as f64, id.c_at(i) as f64);
        u[i + 1] = ((theta - a) * u[i] - c * u[i - 1]) / b;
    }
    u
}

/// Residual of the last row `c_d u_{d-1} + a_d u_d = θ u_d`, relative to the
/// size of the terms; zero exactly at eigenvalues of the intersection matrix.
fn last_row_residual(id: &IntersectionData, theta: f64) -> f64 {
    let d = id.diameter();
    let u = standard_sequence(id, theta);
    if d == 0 {
        return (id.a()[0] as f64 - theta).abs();
    }
    let c = id.c_at(d) as f64;
    let a = id.a()[d] as f64;
    let lhs = c * u[d - 1] + a * u[d];
    let scale = (c * u[d - 1]).abs() + (a * u[d]).abs() + (theta * u[d]).abs();
    (lhs - theta * u[d]).abs() / scale.max(1.0)
}

/// Spectrum of the graph from its intersection array alone. Multiplicities
/// use `m = |X| / Σ_i k_i u_i²` with `u` the standard sequence.
pub fn eigenvalues_from_intersection_array(id: &IntersectionData) -> Result<Spectrum, SpectralError> {
    let d = id.diameter();
    let diag: Vec<f64> = id.a().iter().map(|&a| a as f64).collect();
    let off: Vec<f64> = (0..d)
        .map(|i| ((id.b_at(i) * id.c_at(i + 1)) as f64).sqrt())
        .collect();
    let mut theta = tridiagonal::eigenvalues(&diag, &off);
    theta.reverse();

    for t in &mut theta {
        let r = t.round();
        if (*t - r).abs() < SNAP_WINDOW && last_row_residual(id, r) <= last_row_residual(id, *t).max(1e-12) {
            *t = r;
        }
    }

    let scale = id.valency().max(1) as f64;
    let distinct = 1 + theta.windows(2).filter(|w| w[0] - w[1] > 1e-8 * scale).count();
    if distinct != d + 1 {
        return Err(SpectralError::MissingEigenvalues {
            found: distinct,
            expected: d + 1,
        });
    }

    let n = id.order() as f64;
    let ks = id.sphere_sizes();
    let mult = theta
        .iter()
        .map(|&t| {
            let u = standard_sequence(id, t);
            let norm: f64 = u.iter().zip(ks).map(|(u, &k)| k as f64 * u * u).sum();
            let m = n / norm;
            if (m - m.round()).abs() > 1e-6 * n || m.round() < 1.0 {
                Err(SpectralError::NonIntegralMultiplicity { theta: t, value: m })
            } else {
                Ok(m.round() as usize)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Spectrum { theta, mult })
}

/// `E_j = Π_{l≠j} (A − θ_l I)/(θ_j − θ_l)` for every `j`, with `A` read from
/// the distance-1 spheres. Each result is checked for idempotency.
pub fn primitive_idempotents(
    dd: &DistanceData,
    theta: &[f64],
    tolerance: f64,
) -> Result<Vec<Array2<f64>>, SpectralError> {
    let n = dd.order();
    (0..theta.len())
        .into_par_iter()
        .map(|j| {
            let mut e = Array2::<f64>::eye(n);
            for (l, &tl) in theta.iter().enumerate() {
                if l == j {
                    continue;
                }
                let scale = 1.0 / (theta[j] - tl);
                let mut next = Array2::<f64>::zeros((n, n));
                for x in 0..n {
                    let mut row = next.row_mut(x);
                    for &y in dd.sphere(x, 1) {
                        row += &e.row(y);
                    }
                    row.scaled_add(-tl, &e.row(x));
                    row *= scale;
                }
                e = next;
            }
            // symmetric in exact arithmetic; average away roundoff asymmetry
            let sym = (&e + &e.t()) * 0.5;
            let residual = max_abs_diff(sym.dot(&sym).view(), sym.view());
            if residual > tolerance {
                return Err(SpectralError::NotIdempotent {
                    index: j,
                    residual,
                    tolerance,
                });
            }
            Ok(sym)
        })
        .collect()
}

/// `θ*_h = |X| · (E)_{xy}` for any `x, y` at distance `h`, after checking the
/// entries are constant on each distance class.
pub fn dual_eigenvalue_sequence(
    e: &Array2<f64>,
    dd: &DistanceData,
    index: usize,
    tolerance: f64,
) -> Result<Vec<f64>, SpectralError> {
    let n = dd.order();
    let d = dd.diameter();
    let mut lo = vec![f64::INFINITY; d + 1];
    let mut hi = vec![f64::NEG_INFINITY; d + 1];
    let mut sum = vec![0.0; d + 1];
    let mut count = vec![0usize; d + 1];
    for x in 0..n {
        for (y, &h) in dd.row(x).iter().enumerate() {
            let h = h as usize;
            let v = e[[x, y]];
            lo[h] = lo[h].min(v);
            hi[h] = hi[h].max(v);
            sum[h] += v;
            count[h] += 1;
        }
    }
    for h in 0..=d {
        let spread = hi[h] - lo[h];
        if spread > tolerance {
            return Err(SpectralError::NonConstantDistanceClass {
                index,
                distance: h,
                spread,
            });
        }
    }
    Ok((0..=d).map(|h| n as f64 * sum[h] / count[h] as f64).collect())
}

fn max_abs_diff(a: ArrayView2<f64>, b: ArrayView2<f64>) -> f64 {
    Zip::from(a)
        .and(b)
        .fold(0.0f64, |m, &x, &y| m.max((x - y).abs()))
}

/// Spectral data of a distance-regular graph.
#[derive(Debug, Clone)]
pub struct SpectralData {
    n: usize,
    tolerance: f64,
    spectrum: Spectrum,
    idempotents: Vec<Array2<f64>>,
    dual: Vec<Vec<f64>>,
}

/// Max-entry residuals of the idempotent algebra identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraResiduals {
    /// `max_{i,j} |E_i E_j − δ_ij E_i|`
    pub products: f64,
    /// `|Σ_j E_j − I|`
    pub resolution_of_identity: f64,
    /// `|E_0 − J/|X||`
    pub trivial: f64,
    /// `max_j |A E_j − θ_j E_j|`
    pub eigenvector: f64,
    /// `max_j |trace(E_j) − m_j|`
    pub trace: f64,
}

impl SpectralData {
    pub fn compute(
        dd: &DistanceData,
        id: &IntersectionData,
        tolerance: f64,
    ) -> Result<Self, SpectralError> {
        let spectrum = eigenvalues_from_intersection_array(id)?;
        let idempotents = primitive_idempotents(dd, &spectrum.theta, tolerance)?;
        let n = dd.order();
        for (j, e) in idempotents.iter().enumerate() {
            let tr = e.diag().sum();
            if (tr - spectrum.mult[j] as f64).abs() > 1e-6 * n as f64 {
                return Err(SpectralError::NonIntegralMultiplicity {
                    theta: spectrum.theta[j],
                    value: tr,
                });
            }
        }
        let dual = idempotents
            .iter()
            .enumerate()
            .map(|(j, e)| dual_eigenvalue_sequence(e, dd, j, tolerance))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            n,
            tolerance,
            spectrum,
            idempotents,
            dual,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.spectrum.theta.len() - 1
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn theta(&self) -> &[f64] {
        &self.spectrum.theta
    }

    pub fn mult(&self) -> &[usize] {
        &self.spectrum.mult
    }

    pub fn idempotent(&self, j: usize) -> &Array2<f64> {
        &self.idempotents[j]
    }

    pub fn idempotents(&self) -> &[Array2<f64>] {
        &self.idempotents
    }

    /// Dual eigenvalues `θ*_0(j), ..., θ*_d(j)`.
    pub fn dual(&self, j: usize) -> &[f64] {
        &self.dual[j]
    }

    pub fn duals(&self) -> &[Vec<f64>] {
        &self.dual
    }

    pub fn check_index(&self, j: usize) -> Result<(), SpectralError> {
        if j > self.diameter() {
            return Err(SpectralError::IndexOutOfRange {
                index: j,
                max: self.diameter(),
            });
        }
        Ok(())
    }

    /// `max_{x,y} |⟨E_j x̂, E_j ŷ⟩ − |X|^{-1} θ*_{∂(x,y)}(j)|`, with the inner
    /// products taken from the explicit Gram matrix `E_jᵀ E_j`.
    pub fn check_inner_product_identity(
        &self,
        dd: &DistanceData,
        j: usize,
    ) -> Result<f64, SpectralError> {
        self.check_index(j)?;
        let e = &self.idempotents[j];
        let gram = e.t().dot(e);
        let dual = &self.dual[j];
        let inv_n = 1.0 / self.n as f64;
        let residual = (0..self.n)
            .into_par_iter()
            .map(|x| {
                dd.row(x)
                    .iter()
                    .enumerate()
                    .map(|(y, &h)| (gram[[x, y]] - inv_n * dual[h as usize]).abs())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        Ok(residual)
    }

    pub fn algebra_residuals(&self, dd: &DistanceData) -> AlgebraResiduals {
        let n = self.n;
        let d = self.diameter();
        let pairs: Vec<(usize, usize)> = (0..=d).flat_map(|i| (i..=d).map(move |j| (i, j))).collect();
        let products = pairs
            .par_iter()
            .map(|&(i, j)| {
                let prod = self.idempotents[i].dot(&self.idempotents[j]);
                if i == j {
                    max_abs_diff(prod.view(), self.idempotents[i].view())
                } else {
                    prod.iter().fold(0.0f64, |m, v| m.max(v.abs()))
                }
            })
            .reduce(|| 0.0, f64::max);

        let mut sum = Array2::<f64>::zeros((n, n));
        for e in &self.idempotents {
            sum += e;
        }
        let resolution_of_identity = max_abs_diff(sum.view(), Array2::<f64>::eye(n).view());
        let trivial = self.idempotents[0]
            .iter()
            .fold(0.0f64, |m, v| m.max((v - 1.0 / n as f64).abs()));

        let eigenvector = (0..=d)
            .into_par_iter()
            .map(|j| {
                let e = &self.idempotents[j];
                let theta = self.spectrum.theta[j];
                (0..n)
                    .map(|x| {
                        let mut row = e.row(x).to_owned() * -theta;
                        for &y in dd.sphere(x, 1) {
                            row += &e.row(y);
                        }
                        row.iter().fold(0.0f64, |m, v| m.max(v.abs()))
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);

        let trace = self
            .idempotents
            .iter()
            .zip(&self.spectrum.mult)
            .map(|(e, &m)| (e.diag().sum() - m as f64).abs())
            .fold(0.0, f64::max);

        AlgebraResiduals {
            products,
            resolution_of_identity,
            trivial,
            eigenvector,
            trace,
        }
    }

    /// `|X|^{-1} Σ_h θ*_h(j) A_h` evaluated entrywise, compared with `E_j`.
    pub fn reconstruction_residual(&self, dd: &DistanceData, j: usize) -> f64 {
        let e = &self.idempotents[j];
        let dual = &self.dual[j];
        let inv_n = 1.0 / self.n as f64;
        (0..self.n)
            .flat_map(|x| (0..self.n).map(move |y| (x, y)))
            .map(|(x, y)| (e[[x, y]] - inv_n * dual[dd.dist(x, y)]).abs())
            .fold(0.0, f64::max)
    }

    pub fn report(&self) -> SpectraReport {
        SpectraReport {
            theta: self.spectrum.theta.clone(),
            mult: self.spectrum.mult.clone(),
            dual: self.dual.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectraReport {
    pub theta: Vec<f64>,
    pub mult: Vec<usize>,
    pub dual: Vec<Vec<f64>>,
}
