//! Trapezoidal discretization of windowed integral kernels.
//!
//! A kernel `k(σ)` on `[0, span]` is sampled at `n` uniformly spaced nodes
//! `σ_j = j·h`, `h = span/(n−1)`, so that `∫ k(σ) x(σ) dσ ≈ Σ w_j x(σ_j)`.

/// Plain composite trapezoid weights for `kernel` over `n` nodes.
pub fn trapezoid_weights(n: usize, h: f64, kernel: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let end = j == 0 || j + 1 == n;
            let c = if end { 0.5 } else { 1.0 };
            c * h * kernel(j as f64 * h)
        })
        .collect()
}

/// `Σ w_j σ_j^power`.
pub fn moment(weights: &[f64], h: f64, power: i32) -> f64 {
    weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * (j as f64 * h).powi(power))
        .sum()
}

/// Smallest (least-squares) adjustment of `weights` such that the discrete
/// moments `Σ w_j σ_j^i` equal `targets[i]` for `i = 0..targets.len()`.
///
/// Nodes are rescaled to `[0, 1]` before solving the normal equations so the
/// Gram matrix stays well conditioned.
pub fn correct_moments(weights: &mut [f64], h: f64, targets: &[f64]) {
    let n = weights.len();
    let m = targets.len();
    assert!(m >= 1 && m <= n, "need at least as many nodes as moment constraints");
    let span = h * (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|j| j as f64 / (n - 1) as f64).collect();

    // residual in scaled coordinates: Σ w s^i = target_i / span^i
    let mut rhs: Vec<f64> = (0..m)
        .map(|i| {
            let scaled_target = targets[i] / span.powi(i as i32);
            let current: f64 = weights.iter().zip(&nodes).map(|(w, s)| w * s.powi(i as i32)).sum();
            scaled_target - current
        })
        .collect();
    let mut gram: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| nodes.iter().map(|s| s.powi((i + k) as i32)).sum())
                .collect()
        })
        .collect();

    let lambda = solve_dense(&mut gram, &mut rhs);
    for (w, s) in weights.iter_mut().zip(&nodes) {
        *w += (0..m).map(|i| lambda[i] * s.powi(i as i32)).sum::<f64>();
    }
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let m = b.len();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..m {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let s: f64 = (row + 1..m).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}
