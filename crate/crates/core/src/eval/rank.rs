use serde::{Deserialize, Serialize};

use super::{EvalReport, Method};
use crate::error::{Error, Result};
use crate::stats::fractional_ranks;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub dataset: String,
    pub ir: f64,
    pub mean_auc: Vec<f64>,
    /// Rank 1 is the highest mean AUC; ties share the mean of their ranks.
    pub ranks: Vec<f64>,
}

/// Per-dataset ranks with average-rank footers, one column per method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub methods: Vec<Method>,
    pub rows: Vec<RankRow>,
    pub ir_threshold: f64,
    pub average_all: Vec<f64>,
    /// Over datasets with `IR > ir_threshold`; `None` when there are none.
    pub average_above: Option<Vec<f64>>,
    /// Over datasets with `IR <= ir_threshold`.
    pub average_below: Option<Vec<f64>>,
}

fn average(rows: &[&RankRow], m: usize) -> Option<Vec<f64>> {
    if rows.is_empty() {
        return None;
    }
    Some(
        (0..m)
            .map(|j| rows.iter().map(|r| r.ranks[j]).sum::<f64>() / rows.len() as f64)
            .collect(),
    )
}

/// Builds the rank table from reports; every dataset must cover the same methods.
pub fn rank_table(reports: &[EvalReport], ir_threshold: f64) -> Result<RankTable> {
    let mut methods: Vec<Method> = Vec::new();
    let mut datasets: Vec<(String, f64)> = Vec::new();
    for r in reports {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
        if !datasets.iter().any(|(d, _)| d == &r.dataset) {
            datasets.push((r.dataset.clone(), r.ir));
        }
    }
    let mut rows = Vec::with_capacity(datasets.len());
    for (name, ir) in datasets {
        let mean_auc = methods
            .iter()
            .map(|m| {
                let hits: Vec<&EvalReport> = reports.iter().filter(|r| r.dataset == name && r.method == *m).collect();
                match hits.as_slice() {
                    [one] => Ok(one.mean_auc),
                    [] => Err(Error::Config(format!("dataset {name} has no result for {m}"))),
                    _ => Err(Error::Config(format!("dataset {name} has duplicate results for {m}"))),
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        let ranks = fractional_ranks(&mean_auc, true);
        rows.push(RankRow {
            dataset: name,
            ir,
            mean_auc,
            ranks,
        });
    }
    let m = methods.len();
    let all: Vec<&RankRow> = rows.iter().collect();
    let above: Vec<&RankRow> = rows.iter().filter(|r| r.ir > ir_threshold).collect();
    let below: Vec<&RankRow> = rows.iter().filter(|r| r.ir <= ir_threshold).collect();
    Ok(RankTable {
        average_all: average(&all, m).unwrap_or_default(),
        average_above: average(&above, m),
        average_below: average(&below, m),
        methods,
        rows,
        ir_threshold,
    })
}

impl RankTable {
    /// `(method display name, average rank)` over the selected rows.
    pub fn named_averages(&self, averages: &[f64]) -> Vec<(String, f64)> {
        self.methods
            .iter()
            .zip(averages)
            .map(|(m, r)| (m.display_name().to_string(), *r))
            .collect()
    }
}
