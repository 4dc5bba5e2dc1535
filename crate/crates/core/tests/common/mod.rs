#![allow(dead_code)]

use iefsvm::data::{Dataset, Label};
use iefsvm::svm::{kernel_eval, KernelSpec};

/// Signed kernel matrix `Q_ij = y_i y_j K(x_i, x_j)`.
pub fn signed_gram(ds: &Dataset, kernel: KernelSpec) -> Vec<Vec<f64>> {
    let n = ds.n_samples();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ds.label(i).sign() * ds.label(j).sign() * kernel_eval(&kernel, ds.row(i), ds.row(j)).unwrap())
                .collect()
        })
        .collect()
}

/// `sum(alpha) - alpha' Q alpha / 2`.
pub fn dual_objective(q: &[Vec<f64>], alpha: &[f64]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * q[i][j] * alpha[j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Euclidean projection onto `{0 <= a <= upper, y'a = 0}`.
///
/// The residual `y' clip(v - lambda y)` is piecewise linear and non-increasing in
/// `lambda`; the root is found exactly between consecutive breakpoints.
fn project(v: &[f64], y: &[f64], upper: &[f64]) -> Vec<f64> {
    let at = |lambda: f64| -> Vec<f64> {
        v.iter()
            .zip(y)
            .zip(upper)
            .map(|((vi, yi), ui)| (vi - lambda * yi).clamp(0.0, *ui))
            .collect()
    };
    let residual = |lambda: f64| at(lambda).iter().zip(y).map(|(ai, yi)| ai * yi).sum::<f64>();
    let mut knots: Vec<f64> = v
        .iter()
        .zip(y)
        .zip(upper)
        .flat_map(|((vi, yi), ui)| [vi / yi, (vi - ui) / yi])
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let lo_edge = knots[0] - 1.0;
    let hi_edge = knots[knots.len() - 1] + 1.0;
    let mut points = vec![lo_edge];
    points.extend(&knots);
    points.push(hi_edge);
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ra, rb) = (residual(a), residual(b));
        if ra == 0.0 {
            return at(a);
        }
        if ra > 0.0 && rb <= 0.0 {
            let lambda = a + (b - a) * ra / (ra - rb);
            return at(lambda);
        }
    }
    at(hi_edge)
}

/// Accelerated projected gradient on the weighted soft-margin dual with
/// gradient-based momentum restarts, run until the projected step stalls.
pub fn projected_gradient_dual(q: &[Vec<f64>], y: &[f64], upper: &[f64]) -> (Vec<f64>, f64) {
    let n = y.len();
    let lipschitz = (0..n).map(|i| q[i].iter().map(|x| x.abs()).sum::<f64>()).fold(1e-12, f64::max);
    let step = 1.0 / lipschitz;
    let pg_step = |a: &[f64]| -> Vec<f64> {
        let v: Vec<f64> = (0..n)
            .map(|i| a[i] - step * (q[i].iter().zip(a).map(|(x, y)| x * y).sum::<f64>() - 1.0))
            .collect();
        project(&v, y, upper)
    };
    let mut alpha = vec![0.0; n];
    let mut z = alpha.clone();
    let mut t = 1.0f64;
    for iter in 0..1_000_000 {
        let next = pg_step(&z);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let uphill: f64 = (0..n).map(|i| (z[i] - next[i]) * (next[i] - alpha[i])).sum();
        if uphill > 0.0 {
            t = 1.0;
            z = next.clone();
        } else {
            z = (0..n).map(|i| next[i] + (t - 1.0) / t_next * (next[i] - alpha[i])).collect();
            t = t_next;
        }
        alpha = next;
        if iter % 100 == 0 {
            let fixed = pg_step(&alpha);
            if fixed.iter().zip(&alpha).all(|(a, b)| (a - b).abs() < 1e-14) {
                break;
            }
        }
    }
    let obj = dual_objective(q, &alpha);
    (alpha, obj)
}

/// Small random dataset with both classes present, minority first.
pub fn random_small_dataset(rng: &mut impl rand::Rng, max_points: usize) -> Dataset {
    let n = rng.gen_range(2..=max_points);
    let n_pos = rng.gen_range(1..=n / 2);
    let dim = rng.gen_range(1..=3);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = if i < n_pos { Label::Minority } else { Label::Majority };
        let shift = if label.is_minority() { 0.7 } else { -0.7 };
        rows.push((0..dim).map(|_| shift + rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>());
        labels.push(label);
    }
    Dataset::from_rows("random", &rows, labels).unwrap()
}

/// Writes `ds` as a CSV with feature columns `x0..` and a `label` column holding `1` or `0`.
pub fn write_dataset_csv(ds: &Dataset, path: &std::path::Path) {
    let mut text = String::new();
    let d = ds.n_features();
    let header: Vec<String> = (0..d).map(|j| format!("x{j}")).chain(["label".to_string()]).collect();
    text.push_str(&header.join(","));
    text.push('\n');
    for i in 0..ds.n_samples() {
        let mut cells: Vec<String> = ds.row(i).iter().map(|v| v.to_string()).collect();
        cells.push(if ds.label(i).is_minority() { "1" } else { "0" }.to_string());
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}
