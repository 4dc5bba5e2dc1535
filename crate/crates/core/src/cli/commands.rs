use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::RunConfig;
use super::output::{read_json, write_csv, write_json, write_text, Meta};
use crate::data::{
    imbalance_info, load_csv, load_csv_unlabeled, Dataset, Label, LabelColumn, LoadOptions, MinMaxScaler,
};
use crate::entropy::{emit_pattern_atlas, enumerate_patterns, pattern_stats, PatternStats, LEVEL_CURVES};
use crate::error::{Error, Result};
use crate::eval::{auc, fit_method, rank_table, run_benchmark, tune, EvalReport, Method, RankTable};
use crate::neighbors::{all_profiles, MAX_K};
use crate::seed;
use crate::stats::{holm_test, wilcoxon_signed_rank};
use crate::svm::TrainedModel;

/// Files written by a command and messages for the user.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub notices: Vec<String>,
}

struct Emitter {
    dir: PathBuf,
    meta: Meta,
    out: CommandOutput,
}

impl Emitter {
    fn new(command: &str, cfg: &RunConfig) -> Result<Self> {
        std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
        let mut em = Emitter {
            dir: cfg.out_dir.clone(),
            meta: Meta::new(command, cfg),
            out: CommandOutput::default(),
        };
        let text = format!("# {}\n{}", em.meta.comment(), cfg.to_config_text());
        let path = em.path("run.cfg");
        write_text(&path, &text)?;
        em.out.files.push(path);
        Ok(em)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.path(name);
        write_csv(&path, &self.meta, header, rows)?;
        self.out.files.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, body: Value) -> Result<()> {
        let path = self.path(name);
        write_json(&path, &self.meta, body)?;
        self.out.files.push(path);
        Ok(())
    }
}

fn load_options(cfg: &RunConfig) -> Result<LoadOptions> {
    let label_column = cfg
        .label_col
        .clone()
        .ok_or_else(|| Error::Config("--label-col is required".into()))?;
    let minority_label = cfg
        .minority_label
        .clone()
        .ok_or_else(|| Error::Config("--minority-label is required".into()))?;
    Ok(LoadOptions {
        label_column,
        minority_label,
        has_header: cfg.header,
    })
}

fn single_data(cfg: &RunConfig) -> Result<&Path> {
    match cfg.data.as_slice() {
        [one] => Ok(one),
        [] => Err(Error::Config("--data is required".into())),
        _ => Err(Error::Config("this command takes exactly one --data file".into())),
    }
}

fn label_column_text(col: &LabelColumn) -> String {
    match col {
        LabelColumn::Name(n) => n.clone(),
        LabelColumn::Index(i) => i.to_string(),
    }
}

fn opt_stats_cells(stats: Option<&PatternStats>) -> [String; 5] {
    match stats {
        Some(s) => [
            s.mu.to_string(),
            s.sigma.to_string(),
            s.d.to_string(),
            s.theta.to_string(),
            s.d_theta().to_string(),
        ],
        None => Default::default(),
    }
}

pub fn cmd_patterns(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut em = Emitter::new("patterns", cfg)?;
    let patterns = enumerate_patterns();
    let path = em.path("atlas.csv");
    emit_pattern_atlas(&patterns, &path, &[em.meta.comment()])?;
    em.out.files.push(path);

    let mut by_nonzero = [0usize; MAX_K / 2 + 2];
    for p in &patterns {
        by_nonzero[p.nonzero_count] += 1;
    }
    let rows: Vec<Value> = patterns
        .iter()
        .map(|p| {
            json!({
                "counts": p.counts,
                "mu": p.stats.mu,
                "sigma": p.stats.sigma,
                "d": p.stats.d,
                "theta": p.stats.theta,
                "nonzero_count": p.nonzero_count,
            })
        })
        .collect();
    em.json(
        "atlas.json",
        json!({
            "pattern_count": patterns.len(),
            "count_by_nonzero": by_nonzero,
            "level_curves": LEVEL_CURVES,
            "patterns": rows,
        }),
    )?;
    Ok(em.out)
}

fn single_method(cfg: &RunConfig) -> Result<Method> {
    match cfg.methods.as_slice() {
        [] => Ok(Method::Iefsvm),
        [m] => Ok(*m),
        _ => Err(Error::Config("train takes exactly one method".into())),
    }
}

pub fn cmd_train(cfg: &RunConfig) -> Result<CommandOutput> {
    let method = single_method(cfg)?;
    let opts = load_options(cfg)?;
    let raw = load_csv(single_data(cfg)?, &opts)?;
    let info = imbalance_info(&raw)?;
    let scaler = cfg.normalize.then(|| MinMaxScaler::fit(&raw));
    let ds = match &scaler {
        Some(s) => s.transform(&raw)?,
        None => raw,
    };
    let proto = cfg.protocol();
    let hp = tune(&ds, method, &proto, seed::derive(cfg.seed, &[1]))?;
    let (model, s) = fit_method(&ds, method, hp, &proto, seed::derive(cfg.seed, &[2]))?;

    let mut em = Emitter::new("train", cfg)?;
    em.json(
        "model.json",
        json!({
            "format": "iefsvm-trained",
            "method": method,
            "hyperparams": hp,
            "dataset": ds.name(),
            "label_column": label_column_text(&opts.label_column),
            "minority_label": opts.minority_label,
            "imbalance": info,
            "scaler": scaler,
            "model": model.to_json_value(),
        }),
    )?;

    if cfg.dump_memberships {
        let stats: Option<Vec<PatternStats>> = if ds.n_samples() > MAX_K {
            Some(all_profiles(&ds)?.iter().map(pattern_stats).collect())
        } else {
            em.out
                .notices
                .push(format!("note: {} samples is too few for neighbourhood statistics", ds.n_samples()));
            None
        };
        let mut rows = Vec::with_capacity(ds.n_samples());
        let mut records = Vec::with_capacity(ds.n_samples());
        for i in 0..ds.n_samples() {
            let st = stats.as_ref().map(|v| &v[i]);
            let cells = opt_stats_cells(st);
            let mut row = vec![i.to_string(), ds.label(i).sign().to_string()];
            row.extend(cells.iter().cloned());
            row.push(s[i].to_string());
            rows.push(row);
            records.push(json!({
                "index": i,
                "label": ds.label(i),
                "mu": st.map(|x| x.mu),
                "sigma": st.map(|x| x.sigma),
                "d": st.map(|x| x.d),
                "theta": st.map(|x| x.theta),
                "g": st.map(|x| x.d_theta()),
                "s": s[i],
            }));
        }
        em.csv(
            "memberships.csv",
            &["index", "label", "mu", "sigma", "d", "theta", "g", "s"],
            &rows,
        )?;
        em.json("memberships.json", json!({ "method": method, "c": hp.c, "memberships": records }))?;
    }
    Ok(em.out)
}

pub fn cmd_predict(cfg: &RunConfig) -> Result<CommandOutput> {
    let model_path = cfg
        .model
        .as_ref()
        .ok_or_else(|| Error::Config("--model is required".into()))?;
    let doc = read_json(model_path)?;
    let model = TrainedModel::from_json_value(
        doc.get("model")
            .cloned()
            .ok_or_else(|| Error::ModelFormat("missing \"model\" entry".into()))?,
    )?;
    let scaler: Option<MinMaxScaler> = match doc.get("scaler") {
        None | Some(Value::Null) => None,
        Some(v) => Some(serde_json::from_value(v.clone()).map_err(|e| Error::ModelFormat(e.to_string()))?),
    };
    let data = single_data(cfg)?;
    let (rows, truth): (Vec<Vec<f64>>, Option<Vec<Label>>) = match &cfg.label_col {
        Some(col) => {
            let minority_label = cfg
                .minority_label
                .clone()
                .or_else(|| doc.get("minority_label").and_then(Value::as_str).map(str::to_string))
                .ok_or_else(|| Error::Config("--minority-label is required".into()))?;
            let ds = load_csv(
                data,
                &LoadOptions {
                    label_column: col.clone(),
                    minority_label,
                    has_header: cfg.header,
                },
            )?;
            (ds.rows().map(<[f64]>::to_vec).collect(), Some(ds.labels().to_vec()))
        }
        None => (load_csv_unlabeled(data, cfg.header)?, None),
    };

    let mut values = Vec::with_capacity(rows.len());
    for row in &rows {
        let x = match &scaler {
            Some(s) => s.transform_row(row)?,
            None => row.clone(),
        };
        values.push(model.decision_value(&x)?);
    }
    let pred: Vec<Label> = values.iter().map(|&v| Label::from_decision(v)).collect();

    let mut em = Emitter::new("predict", cfg)?;
    let mut header = vec!["index", "decision_value", "predicted"];
    if truth.is_some() {
        header.push("label");
    }
    let csv_rows: Vec<Vec<String>> = (0..rows.len())
        .map(|i| {
            let mut r = vec![i.to_string(), values[i].to_string(), pred[i].sign().to_string()];
            if let Some(t) = &truth {
                r.push(t[i].sign().to_string());
            }
            r
        })
        .collect();
    em.csv("predictions.csv", &header, &csv_rows)?;

    let (auc_pct, error_rate) = match &truth {
        Some(t) if !t.is_empty() => {
            let wrong = pred.iter().zip(t).filter(|(p, t)| p != t).count();
            let a = auc(&pred, t).ok().map(|a| 100.0 * a);
            (a, Some(wrong as f64 / t.len() as f64))
        }
        _ => (None, None),
    };
    em.json(
        "predictions.json",
        json!({
            "n_samples": rows.len(),
            "auc": auc_pct,
            "error_rate": error_rate,
            "decision_values": values,
            "predicted": pred,
            "labels": truth,
        }),
    )?;
    Ok(em.out)
}

fn ranks_rows(table: &RankTable) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![r.dataset.clone(), r.ir.to_string()];
            row.extend(r.ranks.iter().map(f64::to_string));
            row
        })
        .collect();
    let thr = table.ir_threshold;
    let footers = [
        ("average (all)".to_string(), Some(&table.average_all)),
        (format!("average (IR>{thr})"), table.average_above.as_ref()),
        (format!("average (IR<={thr})"), table.average_below.as_ref()),
    ];
    for (label, avg) in footers {
        let mut row = vec![label, String::new()];
        match avg {
            Some(v) => row.extend(v.iter().map(f64::to_string)),
            None => row.extend(table.methods.iter().map(|_| String::new())),
        }
        rows.push(row);
    }
    rows
}

pub fn cmd_bench(cfg: &RunConfig) -> Result<CommandOutput> {
    if cfg.data.is_empty() {
        return Err(Error::Config("--data is required".into()));
    }
    let opts = load_options(cfg)?;
    let methods = if cfg.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        cfg.methods.clone()
    };
    let mut datasets = Vec::with_capacity(cfg.data.len());
    for path in &cfg.data {
        let ds = load_csv(path, &opts)?;
        if datasets.iter().any(|d: &Dataset| d.name() == ds.name()) {
            return Err(Error::Config(format!("two datasets share the name {:?}", ds.name())));
        }
        datasets.push(if cfg.normalize { crate::data::normalize_minmax(&ds) } else { ds });
    }
    let result = run_benchmark(&datasets, &methods, cfg.reps, cfg.seed, &cfg.protocol(), cfg.ir_threshold)?;

    let mut em = Emitter::new("bench", cfg)?;
    let rows: Vec<Vec<String>> = result
        .reports
        .iter()
        .map(|r| {
            vec![
                r.dataset.clone(),
                r.ir.to_string(),
                r.method.key().to_string(),
                r.mean_auc.to_string(),
                r.std_auc.to_string(),
                r.rep_auc.len().to_string(),
                r.seed.to_string(),
                r.rep_auc.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
            ]
        })
        .collect();
    em.csv(
        "bench_report.csv",
        &["dataset", "ir", "method", "mean_auc", "std_auc", "reps", "seed", "rep_auc"],
        &rows,
    )?;
    em.json(
        "bench_report.json",
        json!({ "ir_threshold": cfg.ir_threshold, "reports": result.reports, "ranks": result.ranks }),
    )?;

    let names: Vec<&str> = result.ranks.methods.iter().map(|m| m.display_name()).collect();
    let mut header = vec!["dataset", "ir"];
    header.extend(&names);
    em.csv("ranks.csv", &header, &ranks_rows(&result.ranks))?;
    em.json("ranks.json", json!(result.ranks))?;
    Ok(em.out)
}

fn read_reports(paths: &[PathBuf]) -> Result<Vec<EvalReport>> {
    let mut all = Vec::new();
    for path in paths {
        let doc = read_json(path)?;
        let reports = doc
            .get("reports")
            .cloned()
            .ok_or_else(|| Error::ModelFormat(format!("{}: missing \"reports\"", path.display())))?;
        let mut reports: Vec<EvalReport> =
            serde_json::from_value(reports).map_err(|e| Error::ModelFormat(format!("{}: {e}", path.display())))?;
        all.append(&mut reports);
    }
    Ok(all)
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<CommandOutput> {
    if cfg.reports.is_empty() {
        return Err(Error::Config("--report is required".into()));
    }
    let reports = read_reports(&cfg.reports)?;
    let table = rank_table(&reports, cfg.ir_threshold)?;
    let champ_idx = table
        .methods
        .iter()
        .position(|m| *m == cfg.champion)
        .ok_or_else(|| Error::UnknownMethod(cfg.champion.key().to_string()))?;
    let champion = cfg.champion.display_name();
    let thr = cfg.ir_threshold;

    let mut em = Emitter::new("compare", cfg)?;
    let mut holm_rows = Vec::new();
    let mut wil_rows = Vec::new();
    let mut subsets_json = Vec::new();

    if table.methods.len() < 2 {
        em.out
            .notices
            .push(format!("notice: no methods besides the champion {champion}; nothing to compare"));
    }
    let subsets = [
        ("all".to_string(), Some(&table.average_all), table.rows.iter().collect::<Vec<_>>()),
        (
            format!("IR>{thr}"),
            table.average_above.as_ref(),
            table.rows.iter().filter(|r| r.ir > thr).collect(),
        ),
        (
            format!("IR<={thr}"),
            table.average_below.as_ref(),
            table.rows.iter().filter(|r| r.ir <= thr).collect(),
        ),
    ];
    for (name, avg, rows) in subsets {
        let Some(avg) = avg else { continue };
        if table.methods.len() < 2 {
            continue;
        }
        let holm = holm_test(&table.named_averages(avg), champion, rows.len(), cfg.alpha)?;
        for h in &holm {
            holm_rows.push(vec![
                name.clone(),
                h.method.clone(),
                h.z.to_string(),
                h.p.to_string(),
                h.adjusted_alpha.to_string(),
                if h.rejected { "rejected" } else { "not rejected" }.to_string(),
            ]);
        }
        let champ_auc: Vec<f64> = rows.iter().map(|r| r.mean_auc[champ_idx]).collect();
        let mut wilcoxon = Vec::new();
        for (j, m) in table.methods.iter().enumerate() {
            if j == champ_idx {
                continue;
            }
            let other: Vec<f64> = rows.iter().map(|r| r.mean_auc[j]).collect();
            match wilcoxon_signed_rank(&champ_auc, &other) {
                Ok(w) => {
                    wil_rows.push(vec![
                        name.clone(),
                        m.display_name().to_string(),
                        w.n.to_string(),
                        w.w_plus.to_string(),
                        w.w_minus.to_string(),
                        w.statistic.to_string(),
                        w.z.to_string(),
                        w.p.to_string(),
                        String::new(),
                    ]);
                    wilcoxon.push(json!({ "method": m.display_name(), "result": w }));
                }
                Err(Error::TooFewDifferences(n)) => {
                    let mut row = vec![name.clone(), m.display_name().to_string(), n.to_string()];
                    row.extend(std::iter::repeat(String::new()).take(5));
                    row.push("insufficient pairs".into());
                    wil_rows.push(row);
                    wilcoxon.push(json!({ "method": m.display_name(), "result": null, "note": "insufficient pairs" }));
                }
                Err(e) => return Err(e),
            }
        }
        subsets_json.push(json!({
            "subset": name,
            "n_datasets": rows.len(),
            "average_ranks": table.named_averages(avg),
            "holm": holm,
            "wilcoxon": wilcoxon,
        }));
    }

    em.csv(
        "holm.csv",
        &["subset", "method", "z", "p", "adjusted_alpha", "hypothesis"],
        &holm_rows,
    )?;
    em.csv(
        "wilcoxon.csv",
        &["subset", "method", "n", "w_plus", "w_minus", "statistic", "z", "p", "note"],
        &wil_rows,
    )?;
    em.json(
        "compare.json",
        json!({
            "champion": champion,
            "alpha": cfg.alpha,
            "ir_threshold": thr,
            "notices": em.out.notices.clone(),
            "subsets": subsets_json,
        }),
    )?;
    Ok(em.out)
}
