//! Baseline comparisons: the total % difference table with Wilcoxon p-values
//! and the per-interval difference grid.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use epimoead::epigenetics::BlockingVariant;
use epimoead::metrics::{interval_differences, interval_mean, IgdTrace};
use epimoead::problems::{Category, ProblemKind};
use epimoead::stats::{wilcoxon_signed_rank, PairedSample, WilcoxonResult};
use serde::Serialize;

use crate::persist;
use crate::runner::RunRecord;
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub problem: String,
    pub category: Category,
    pub variant: BlockingVariant,
    /// Sum over intervals of `100 (baseline - variant) / baseline`.
    pub total_pct_diff: f64,
    /// `None` when every interval difference is exactly zero.
    pub wilcoxon: Option<WilcoxonResult>,
    /// Share of intervals in which the variant beat the baseline.
    pub positive_fraction: f64,
    pub intervals: usize,
}

impl Comparison {
    pub fn p_value(&self) -> Option<f64> {
        self.wilcoxon.map(|w| w.p_value)
    }

    pub fn significant(&self) -> bool {
        self.wilcoxon.is_some_and(|w| w.significant())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub variant: BlockingVariant,
    pub problems: usize,
    /// Problems with a positive total.
    pub positive: usize,
    /// Problems with a positive total and p < 0.05.
    pub significant_positive: usize,
    /// Problems on which this variant has the largest total of all variants.
    pub best: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub interval: usize,
    pub problems: Vec<String>,
    pub variants: Vec<BlockingVariant>,
    pub rows: Vec<Comparison>,
    pub tally: Vec<Tally>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub problem: String,
    pub category: Category,
    pub variant: BlockingVariant,
    pub interval: usize,
    pub start_generation: u64,
    pub baseline_igd: f64,
    pub variant_igd: f64,
    /// Positive when the variant is better.
    pub pct_diff: f64,
}

fn catalog_rank(name: &str) -> (usize, String) {
    let rank = name
        .parse::<ProblemKind>()
        .ok()
        .and_then(|k| ProblemKind::ALL.iter().position(|&x| x == k))
        .unwrap_or(usize::MAX);
    (rank, name.to_string())
}

fn category_of(name: &str) -> Result<Category, HarnessError> {
    name.parse::<ProblemKind>()
        .map(|k| k.category())
        .map_err(|e| HarnessError::Report(e.to_string()))
}

type Grouped<'a> = BTreeMap<(usize, String), BTreeMap<BlockingVariant, Vec<&'a IgdTrace>>>;

fn group(records: &[RunRecord]) -> Grouped<'_> {
    let mut grouped: Grouped<'_> = BTreeMap::new();
    for r in records {
        grouped
            .entry(catalog_rank(&r.problem))
            .or_default()
            .entry(r.variant)
            .or_default()
            .push(&r.trace);
    }
    grouped
}

fn means(traces: &[&IgdTrace], interval: usize) -> Result<Vec<f64>, HarnessError> {
    let owned: Vec<IgdTrace> = traces.iter().map(|t| (*t).clone()).collect();
    interval_mean(&owned, interval).map_err(|e| HarnessError::Report(e.to_string()))
}

fn baseline_of<'a, 'b>(
    problem: &str,
    by_variant: &'b BTreeMap<BlockingVariant, Vec<&'a IgdTrace>>,
) -> Result<&'b Vec<&'a IgdTrace>, HarnessError> {
    by_variant
        .get(&BlockingVariant::Off)
        .ok_or_else(|| HarnessError::Report(format!("no baseline runs for {problem}")))
}

/// Per problem and variant: total % difference against the baseline and the
/// Wilcoxon signed-rank test on the paired per-interval mean IGD.
pub fn render_summary(records: &[RunRecord], interval: usize) -> Result<Summary, HarnessError> {
    let grouped = group(records);
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    let mut variants: Vec<BlockingVariant> = Vec::new();
    for ((_, problem), by_variant) in &grouped {
        let base = means(baseline_of(problem, by_variant)?, interval)?;
        problems.push(problem.clone());
        for (&variant, traces) in by_variant {
            if variant == BlockingVariant::Off {
                continue;
            }
            if !variants.contains(&variant) {
                variants.push(variant);
            }
            let other = means(traces, interval)?;
            let diffs = interval_differences(&base, &other)
                .map_err(|e| HarnessError::Report(format!("{problem}: {e}")))?;
            let sample = PairedSample::from_columns(&base, &other)
                .map_err(|e| HarnessError::Report(e.to_string()))?;
            rows.push(Comparison {
                problem: problem.clone(),
                category: category_of(problem)?,
                variant,
                total_pct_diff: diffs.iter().sum(),
                wilcoxon: wilcoxon_signed_rank(&sample).ok(),
                positive_fraction: diffs.iter().filter(|d| **d > 0.0).count() as f64
                    / diffs.len() as f64,
                intervals: diffs.len(),
            });
        }
    }
    variants.sort();

    let mut tally: Vec<Tally> = variants
        .iter()
        .map(|&variant| Tally {
            variant,
            problems: 0,
            positive: 0,
            significant_positive: 0,
            best: 0,
        })
        .collect();
    for problem in &problems {
        let cells: Vec<&Comparison> = rows.iter().filter(|r| &r.problem == problem).collect();
        let top = cells
            .iter()
            .map(|c| c.total_pct_diff)
            .fold(f64::NEG_INFINITY, f64::max);
        for c in cells {
            let t = tally
                .iter_mut()
                .find(|t| t.variant == c.variant)
                .expect("tallied");
            t.problems += 1;
            if c.total_pct_diff > 0.0 {
                t.positive += 1;
                if c.significant() {
                    t.significant_positive += 1;
                }
            }
            if c.total_pct_diff == top {
                t.best += 1;
            }
        }
    }
    Ok(Summary {
        interval,
        problems,
        variants,
        rows,
        tally,
    })
}

/// Signed % difference of `variant` against the baseline for every interval
/// of `problem`.
pub fn render_interval_grid(
    records: &[RunRecord],
    problem: &str,
    variant: BlockingVariant,
    interval: usize,
) -> Result<Vec<GridCell>, HarnessError> {
    let grouped = group(records);
    let by_variant = grouped
        .get(&catalog_rank(problem))
        .ok_or_else(|| HarnessError::Report(format!("no runs for {problem}")))?;
    let base = means(baseline_of(problem, by_variant)?, interval)?;
    let traces = by_variant
        .get(&variant)
        .ok_or_else(|| HarnessError::Report(format!("no {variant} runs for {problem}")))?;
    let other = means(traces, interval)?;
    let diffs = interval_differences(&base, &other)
        .map_err(|e| HarnessError::Report(format!("{problem}: {e}")))?;
    let category = category_of(problem)?;
    Ok(diffs
        .iter()
        .enumerate()
        .map(|(k, &d)| GridCell {
            problem: problem.to_string(),
            category,
            variant,
            interval: k,
            start_generation: (k * interval) as u64,
            baseline_igd: base[k],
            variant_igd: other[k],
            pct_diff: d,
        })
        .collect())
}

/// Grid cells of every problem and non-baseline variant, grouped by category.
pub fn full_grid(summary: &Summary, records: &[RunRecord]) -> Result<Vec<GridCell>, HarnessError> {
    let mut order: Vec<&Comparison> = summary.rows.iter().collect();
    order.sort_by_key(|c| (c.category, catalog_rank(&c.problem), c.variant));
    let mut cells = Vec::new();
    for c in order {
        cells.extend(render_interval_grid(
            records,
            &c.problem,
            c.variant,
            summary.interval,
        )?);
    }
    Ok(cells)
}

fn format_p(p: Option<f64>) -> String {
    match p {
        None => "n/a".into(),
        Some(p) if p < 0.001 => "<0.001".into(),
        Some(p) => format!("{p:.3}"),
    }
}

impl Summary {
    fn cell(&self, problem: &str, variant: BlockingVariant) -> Option<&Comparison> {
        self.rows
            .iter()
            .find(|r| r.problem == problem && r.variant == variant)
    }

    /// Fixed-width text table: total % difference with the p-value in brackets.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{:<8} {:<4}", "problem", "cat");
        for v in &self.variants {
            let _ = write!(s, " {:>20}", v.label());
        }
        s.push('\n');
        for problem in &self.problems {
            let cat = category_of(problem)
                .map(|c| c.to_string())
                .unwrap_or_default();
            let _ = write!(s, "{problem:<8} {cat:<4}");
            for &v in &self.variants {
                let text = match self.cell(problem, v) {
                    Some(c) => format!("{:.2} ({})", c.total_pct_diff, format_p(c.p_value())),
                    None => "-".into(),
                };
                let _ = write!(s, " {text:>20}");
            }
            s.push('\n');
        }
        for (label, pick) in [
            ("positive", (|t: &Tally| t.positive) as fn(&Tally) -> usize),
            ("p<0.05", |t: &Tally| t.significant_positive),
            ("best", |t: &Tally| t.best),
        ] {
            let _ = write!(s, "{label:<13}");
            for t in &self.tally {
                let _ = write!(s, " {:>20}", format!("{}/{}", pick(t), t.problems));
            }
            s.push('\n');
        }
        s
    }

    pub fn to_csv(&self) -> anyhow::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "problem",
            "category",
            "variant",
            "total_pct_diff",
            "p_value",
            "statistic",
            "n",
            "method",
            "significant",
            "positive_fraction",
            "pairing",
        ])?;
        for r in &self.rows {
            let (p, stat, n, method) = match r.wilcoxon {
                Some(w) => (
                    w.p_value.to_string(),
                    w.statistic.to_string(),
                    w.n.to_string(),
                    format!("{:?}", w.method).to_lowercase(),
                ),
                None => (
                    String::new(),
                    String::new(),
                    "0".into(),
                    "degenerate".into(),
                ),
            };
            w.write_record([
                r.problem.clone(),
                r.category.to_string(),
                r.variant.label().to_string(),
                r.total_pct_diff.to_string(),
                p,
                stat,
                n,
                method,
                r.significant().to_string(),
                r.positive_fraction.to_string(),
                "interval-mean".to_string(),
            ])?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }
}

pub fn grid_csv(cells: &[GridCell]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "category",
        "problem",
        "variant",
        "interval",
        "start_generation",
        "baseline_igd",
        "variant_igd",
        "pct_diff",
    ])?;
    for c in cells {
        w.write_record([
            c.category.to_string(),
            c.problem.clone(),
            c.variant.label().to_string(),
            c.interval.to_string(),
            c.start_generation.to_string(),
            c.baseline_igd.to_string(),
            c.variant_igd.to_string(),
            c.pct_diff.to_string(),
        ])?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// Writes `summary.csv` and `grid.csv` into `dir` and returns the summary.
pub fn write_reports(
    dir: &Path,
    records: &[RunRecord],
    interval: usize,
) -> Result<Summary, HarnessError> {
    let summary = render_summary(records, interval)?;
    let grid = full_grid(&summary, records)?;
    persist::write_atomic(&dir.join(persist::SUMMARY), &summary.to_csv()?)?;
    persist::write_atomic(&dir.join(persist::GRID), &grid_csv(&grid)?)?;
    Ok(summary)
}
