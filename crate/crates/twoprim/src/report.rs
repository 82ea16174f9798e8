//! Report rows and their CSV / JSON encodings.
//!
//! Every command emits rows with the columns
//! `q,p,k,command,stage_or_verdict,margin_or_witness,elapsed_ms`
//! plus an ordered key/value summary. CSV carries the summary as leading
//! `# key: value` comment lines; JSON as a `summary` object.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub q: Option<u64>,
    pub p: Option<u64>,
    pub k: Option<u32>,
    pub command: String,
    pub stage_or_verdict: String,
    pub margin_or_witness: String,
    pub elapsed_ms: Option<f64>,
}

impl ReportRow {
    /// A row not tied to a particular `q`.
    pub fn general(command: &str, verdict: impl Into<String>, detail: impl Into<String>) -> Self {
        ReportRow {
            q: None,
            p: None,
            k: None,
            command: command.to_string(),
            stage_or_verdict: verdict.into(),
            margin_or_witness: detail.into(),
            elapsed_ms: None,
        }
    }

    pub fn for_q(
        ctx: &twoprim_core::PrimePowerCtx,
        command: &str,
        verdict: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        ReportRow { q: Some(ctx.q), p: Some(ctx.p), k: Some(ctx.k), ..ReportRow::general(command, verdict, detail) }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub summary: Vec<(String, String)>,
}

impl Report {
    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
        self.summary.extend(other.summary);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_report(report: &Report, format: Format, out: impl Write) -> anyhow::Result<()> {
    match format {
        Format::Csv => write_csv(report, out),
        Format::Json => write_json(report, out),
    }
}

pub fn write_csv(report: &Report, mut out: impl Write) -> anyhow::Result<()> {
    for (k, v) in &report.summary {
        writeln!(out, "# {k}: {v}")?;
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["q", "p", "k", "command", "stage_or_verdict", "margin_or_witness", "elapsed_ms"])?;
    for row in &report.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(report: &Report, mut out: impl Write) -> anyhow::Result<()> {
    let summary: serde_json::Map<String, serde_json::Value> =
        report.summary.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
    let doc = serde_json::json!({ "rows": report.rows, "summary": summary });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

/// Comma-free list rendering for summary values.
pub fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let ctx = twoprim_core::PrimePowerCtx::new(9).unwrap();
        let mut r = Report::default();
        r.rows.push(ReportRow::for_q(&ctx, "scan", "exception", "-1.5e0"));
        r.rows.push(ReportRow { elapsed_ms: Some(1.25), ..ReportRow::general("algorithm1", "true", "t1=11;t2=13") });
        r.note("total", 1);
        r
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# total: 1\n\
             q,p,k,command,stage_or_verdict,margin_or_witness,elapsed_ms\n\
             9,3,2,scan,exception,-1.5e0,\n\
             ,,,algorithm1,true,t1=11;t2=13,1.25\n"
        );
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        write_json(&sample(), &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rows"][0]["q"], 9);
        assert_eq!(v["rows"][0]["k"], 2);
        assert!(v["rows"][0]["elapsed_ms"].is_null());
        assert_eq!(v["rows"][1]["margin_or_witness"], "t1=11;t2=13");
        assert_eq!(v["summary"]["total"], "1");
    }
}
