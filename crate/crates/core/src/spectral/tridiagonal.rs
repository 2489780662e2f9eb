//! Sturm-sequence bisection for symmetric tridiagonal matrices.

/// Number of eigenvalues strictly below `lambda`, counted as the negative
/// pivots of the LDLᵀ factorization of `T - lambda I`.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        let prev = if q == 0.0 { f64::EPSILON } else { q };
        q = diag[i] - lambda - if i == 0 { 0.0 } else { coupling / prev };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues in ascending order, each bisected down to a few ulps.
pub fn eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1));
    if n == 0 {
        return Vec::new();
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + off.get(i).map_or(0.0, |e| e.abs());
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = 1.0 + (hi - lo).abs() * 1e-3;
    lo -= pad;
    hi += pad;

    (0..n)
        .map(|index| {
            // smallest lambda with more than `index` eigenvalues below it
            let (mut a, mut b) = (lo, hi);
            for _ in 0..256 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b || b - a <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
                    break;
                }
                if sturm_count(diag, off, mid) > index {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}
