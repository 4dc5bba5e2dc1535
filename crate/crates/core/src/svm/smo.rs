//! Sequential minimal optimization for the box-weighted SVM dual
//!
//! ```text
//! min  ½ αᵀQα − eᵀα   s.t.  yᵀα = 0,  0 ≤ α_i ≤ s_i C
//! ```
//!
//! Working pairs are chosen as the maximal violating pair; each pair is solved
//! analytically and clipped to its box.

use super::cache::QMatrix;
use super::KernelSpec;
use crate::error::{Error, Result};

pub(crate) struct Problem<'a> {
    pub rows: Vec<&'a [f64]>,
    pub signs: Vec<f64>,
    pub upper: Vec<f64>,
}

pub(crate) struct Solution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub gap: f64,
    pub objective: f64,
    pub trace: Vec<f64>,
}

pub(crate) struct Params {
    pub kernel: KernelSpec,
    pub tol: f64,
    pub max_iterations: usize,
    pub curvature_floor: f64,
    pub cache_rows: usize,
    pub record_objective: bool,
}

fn dual_objective(alpha: &[f64], grad: &[f64]) -> f64 {
    // with G = Qα − e:  Σα − ½αᵀQα = ½ Σ α_t (1 − G_t)
    0.5 * alpha.iter().zip(grad).map(|(a, g)| a * (1.0 - g)).sum::<f64>()
}

pub(crate) fn solve(problem: Problem<'_>, params: &Params) -> Result<Solution> {
    let n = problem.rows.len();
    let y = problem.signs.clone();
    let upper = problem.upper;
    let mut q = QMatrix::new(problem.rows, problem.signs, params.kernel, params.cache_rows);
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut trace = Vec::new();

    let in_up = |a: f64, u: f64, yt: f64| (yt > 0.0 && a < u) || (yt < 0.0 && a > 0.0);
    let in_low = |a: f64, u: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < u);

    let mut iterations = 0;
    let (mut m_up, mut m_low);
    loop {
        // m_up = max_{I_up} -y G, m_low = min_{I_low} -y G
        let (mut i, mut j) = (usize::MAX, usize::MAX);
        m_up = f64::NEG_INFINITY;
        m_low = f64::INFINITY;
        for t in 0..n {
            let v = -y[t] * grad[t];
            if in_up(alpha[t], upper[t], y[t]) && v > m_up {
                m_up = v;
                i = t;
            }
            if in_low(alpha[t], upper[t], y[t]) && v < m_low {
                m_low = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || m_up - m_low <= params.tol {
            break;
        }
        if iterations >= params.max_iterations {
            return Err(Error::NotConverged {
                iterations,
                violation: m_up - m_low,
            });
        }
        iterations += 1;

        let qi = q.row(i);
        let qj = q.row(j);
        let (ci, cj) = (upper[i], upper[j]);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = q.diag(i) + q.diag(j) + 2.0 * qi[j];
            if quad <= 0.0 {
                quad = params.curvature_floor;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > ci - cj {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = ci - diff;
                }
            } else if alpha[j] > cj {
                alpha[j] = cj;
                alpha[i] = cj + diff;
            }
        } else {
            let mut quad = q.diag(i) + q.diag(j) - 2.0 * qi[j];
            if quad <= 0.0 {
                quad = params.curvature_floor;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > ci {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = sum - ci;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > cj {
                if alpha[j] > cj {
                    alpha[j] = cj;
                    alpha[i] = sum - cj;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += qi[t] * di + qj[t] * dj;
        }
        if params.record_objective {
            trace.push(dual_objective(&alpha, &grad));
        }
    }

    // bias = −ρ: mean of −y_t G_t over free vectors, else midpoint of [m_low, m_up]
    let (mut sum, mut free) = (0.0, 0usize);
    for t in 0..n {
        if alpha[t] > 0.0 && alpha[t] < upper[t] {
            sum += -y[t] * grad[t];
            free += 1;
        }
    }
    let bias = if free > 0 {
        sum / free as f64
    } else {
        match (m_up.is_finite(), m_low.is_finite()) {
            (true, true) => 0.5 * (m_up + m_low),
            (true, false) => m_up,
            (false, true) => m_low,
            (false, false) => 0.0,
        }
    };

    let gap = if m_up.is_finite() && m_low.is_finite() {
        (m_up - m_low).max(0.0)
    } else {
        0.0
    };
    Ok(Solution {
        objective: dual_objective(&alpha, &grad),
        alpha,
        bias,
        iterations,
        gap,
        trace,
    })
}
