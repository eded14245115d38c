//! Markdown and CSV views of an [`AnalysisReport`]. The JSON form is the
//! authoritative one; the other two round numbers for reading.

use std::fmt::Write as _;
use std::str::FromStr;

use super::analysis::AnalysisReport;
use super::PipelineError;
use crate::stats::{Descriptives, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(PipelineError::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(report: &AnalysisReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Markdown => render_markdown(report),
        ReportFormat::Csv => render_csv(report),
    }
}

/// Integers as integers, everything else to four decimals, and `n/a` for
/// missing or non-finite values.
pub fn format_number(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                format!("{v:.0}")
            } else {
                format!("{v:.4}")
            }
        }
        _ => "n/a".to_string(),
    }
}

fn num(x: f64) -> String {
    format_number(Some(x))
}

fn table(out: &mut String, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for row in rows {
        let _ = writeln!(out, "| {} |", row.join(" | "));
    }
    out.push('\n');
}

fn desc_cells(d: &Descriptives) -> Vec<String> {
    let mut cells = vec![d.n.to_string()];
    cells.extend([d.mean, d.sd, d.median, d.q1, d.q3, d.iqr, d.min, d.max].map(format_number));
    cells
}

fn test_cells(r: Option<&TestResult>) -> [String; 3] {
    match r {
        Some(r) => [num(r.statistic), format_number(r.degrees_of_freedom.first().copied()), num(r.p_value)],
        None => ["n/a".into(), "n/a".into(), "n/a".into()],
    }
}

pub fn render_markdown(report: &AnalysisReport) -> String {
    let p = &report.provenance;
    let mut out = String::new();
    let _ = writeln!(out, "# Analysis report: {}\n", p.study.study_id);
    let _ = writeln!(out, "- Tool: {} {}", p.tool, p.tool_version);
    let _ = writeln!(out, "- Timing method: {}", p.study.timing_method);
    if let Some(limit) = p.study.time_limit_seconds {
        let _ = writeln!(out, "- Time limit (s): {}", num(limit));
    }
    if let Some(note) = &p.study.variant_note {
        let _ = writeln!(out, "- Task variants: {note}");
    }
    let _ = writeln!(out, "- Significance level: {}", num(report.alpha));
    if let Some(seed) = p.seed {
        let _ = writeln!(out, "- Seed: {seed}");
    }
    out.push('\n');

    if !report.warnings.is_empty() {
        out.push_str("## Warnings\n\n");
        for w in &report.warnings {
            let _ = writeln!(out, "- {w}");
        }
        out.push('\n');
    }

    out.push_str("## Groups\n\n");
    table(
        &mut out,
        &["Group", "Participants", "C", "DNF", "DNS", "Help"],
        report.groups.iter().map(|g| {
            vec![
                g.label.clone(),
                g.participants.to_string(),
                g.status_counts.completed.to_string(),
                g.status_counts.did_not_finish.to_string(),
                g.status_counts.did_not_start.to_string(),
                g.help_count.map_or("n/a".into(), |h| h.to_string()),
            ]
        }),
    );

    const DESC: [&str; 9] = ["n", "mean", "sd", "median", "q1", "q3", "iqr", "min", "max"];
    out.push_str("## Descriptive statistics\n\n");
    let mut header = vec!["Metric", "Group", "Missing"];
    header.extend(DESC);
    table(
        &mut out,
        &header,
        report.descriptives.iter().map(|d| {
            let mut row = vec![d.metric.to_string(), d.group.clone(), d.missing.to_string()];
            row.extend(desc_cells(&d.stats));
            row
        }),
    );

    out.push_str("## Execution time (s)\n\n");
    let mut header = vec!["Group", "Tasks"];
    header.extend(DESC);
    table(
        &mut out,
        &header,
        report.execution_time.iter().flat_map(|t| {
            [("C + DNF", &t.inclusive), ("C only", &t.censored)].map(|(which, d)| {
                let mut row = vec![t.group.clone(), which.to_string()];
                row.extend(desc_cells(d));
                row
            })
        }),
    );

    out.push_str("## Reliability (Cronbach's alpha)\n\n");
    table(
        &mut out,
        &["Scale", "Items", "Respondents", "alpha", "Acceptable", "Note"],
        report.reliability.iter().map(|r| {
            vec![
                r.scale.clone(),
                r.items.to_string(),
                r.respondents.to_string(),
                format_number(r.alpha),
                r.acceptable.map_or("n/a".into(), |a| if a { "yes" } else { "no" }.into()),
                r.not_computable.clone().unwrap_or_default(),
            ]
        }),
    );

    out.push_str("## Normality (Shapiro-Wilk)\n\n");
    table(
        &mut out,
        &["Metric", "Group", "n", "W", "p", "Normal", "Note"],
        report.normality.iter().map(|r| {
            let c = &r.check;
            vec![
                r.metric.to_string(),
                r.group.clone(),
                c.n.to_string(),
                format_number(c.result.as_ref().map(|t| t.statistic)),
                format_number(c.result.as_ref().map(|t| t.p_value)),
                if c.passed { "yes" } else { "no" }.into(),
                c.not_computable.clone().unwrap_or_default(),
            ]
        }),
    );

    out.push_str("## Homogeneity of variance (Levene)\n\n");
    table(
        &mut out,
        &["Metric", "Statistic", "df1", "p", "Note"],
        report.homogeneity.iter().map(|h| {
            let [s, df, pv] = test_cells(h.result.as_ref());
            vec![h.metric.to_string(), s, df, pv, h.not_computable.clone().unwrap_or_default()]
        }),
    );

    out.push_str("## Group comparisons\n\n");
    table(
        &mut out,
        &["Metric", "Branch", "Test", "Statistic", "df", "p", "z", "Significant", "Cohen's d*", "Note"],
        report.comparisons.iter().map(|c| {
            let [s, df, pv] = test_cells(c.result.as_ref());
            let mut note = vec![c.reason.clone()];
            note.extend(c.not_computable.iter().cloned());
            note.extend(c.warnings.iter().cloned());
            vec![
                c.metric.to_string(),
                format!("{:?}", c.branch),
                c.test.map_or("none".into(), |t| t.to_string()),
                s,
                df,
                pv,
                format_number(c.result.as_ref().and_then(|r| r.z)),
                c.result
                    .as_ref()
                    .map_or("n/a".into(), |r| if r.significant(report.alpha) { "yes" } else { "no" }.into()),
                format_number(c.effect_size.as_ref().and_then(|e| e.cohens_d)),
                note.join("; "),
            ]
        }),
    );
    out.push_str("\\* Cohen's d is reported in addition to the prescribed tests.\n\n");

    out.push_str("## Correlations\n\n");
    table(
        &mut out,
        &["x", "y", "Sample", "n", "Method", "r", "p", "Note"],
        report.correlations.iter().map(|c| {
            vec![
                c.x.to_string(),
                c.y.to_string(),
                c.group.clone().unwrap_or_else(|| "pooled".into()),
                c.n.to_string(),
                c.method.map_or("none".into(), |m| m.to_string()),
                format_number(c.result.as_ref().map(|r| r.statistic)),
                format_number(c.result.as_ref().map(|r| r.p_value)),
                c.not_computable.clone().unwrap_or_default(),
            ]
        }),
    );
    out
}

/// One row per group and metric with the descriptive statistics at full
/// precision. Missing values are empty cells.
pub fn render_csv(report: &AnalysisReport) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let cell = |x: Option<f64>| x.filter(|v| v.is_finite()).map_or(String::new(), |v| v.to_string());
    w.write_record(["group", "metric", "n", "missing", "mean", "sd", "median", "q1", "q3", "iqr", "min", "max"])
        .expect("in-memory write");
    for d in &report.descriptives {
        let s = &d.stats;
        let mut row = vec![d.group.clone(), d.metric.to_string(), s.n.to_string(), d.missing.to_string()];
        row.extend([s.mean, s.sd, s.median, s.q1, s.q3, s.iqr, s.min, s.max].map(cell));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
