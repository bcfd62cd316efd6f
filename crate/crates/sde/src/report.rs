// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! CSV records and correlation reports.
//!
//! Column layout: `index`, `graph`, `class`, then every metric name in
//! [`Metric::ALL`] order, ending with `sde_q`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use sde_core::metrics::{pearson, Metric, MetricsError, METRIC_COUNT};
use sde_core::MetricsRecord;
use serde::Serialize;
use thiserror::Error;

pub const ID_COLUMNS: [&str; 3] = ["index", "graph", "class"];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}: cannot parse `{value}` in column `{column}`")]
    BadValue {
        row: usize,
        column: String,
        value: String,
    },
}

/// Formats like C's `%.12g`, spelling non-finite values `inf`, `-inf` and `nan`.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    const PRECISION: i32 = 12;
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..PRECISION).contains(&exp) {
        let fixed = format!("{:.*}", (PRECISION - 1 - exp) as usize, v);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One graph's CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub index: usize,
    /// graph6 text of the graph.
    pub graph: String,
    pub class: String,
    pub record: MetricsRecord,
}

pub fn header() -> Vec<&'static str> {
    ID_COLUMNS
        .iter()
        .copied()
        .chain(Metric::ALL.iter().map(|m| m.name()))
        .collect()
}

/// Writes the header and one row per record, LF-terminated.
pub fn write_records_csv<W: Write>(rows: &[RecordRow], out: W) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header())?;
    for row in rows {
        let mut fields = vec![row.index.to_string(), row.graph.clone(), row.class.clone()];
        fields.extend(row.record.values().iter().map(|&v| format_real(v)));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv_string(rows: &[RecordRow]) -> String {
    let mut buf = Vec::new();
    write_records_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// Numeric metric columns read back from a CSV; unknown columns are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    pub metrics: Vec<Metric>,
    /// `rows[r][k]` is the value of `metrics[k]` in row `r`.
    pub rows: Vec<Vec<f64>>,
}

impl MetricTable {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a MetricsRecord>) -> Self {
        Self {
            metrics: Metric::ALL.to_vec(),
            rows: records.into_iter().map(|r| r.values().to_vec()).collect(),
        }
    }

    pub fn column(&self, m: Metric) -> Option<Vec<f64>> {
        let k = self.metrics.iter().position(|&x| x == m)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_metric_table<R: Read>(input: R) -> Result<MetricTable, ReportError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(input);
    let headers = rdr.headers()?.clone();
    let columns: Vec<(usize, Metric)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| Metric::from_name(h.trim()).map(|m| (i, m)))
        .collect();
    if !columns.iter().any(|&(_, m)| m == Metric::SdeQ) {
        return Err(ReportError::MissingColumn(Metric::SdeQ.name().into()));
    }
    let mut rows = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let mut row = Vec::with_capacity(columns.len());
        for &(i, m) in &columns {
            let cell = rec.get(i).unwrap_or_default().trim();
            let v = cell.parse::<f64>().map_err(|_| ReportError::BadValue {
                row: r + 1,
                column: m.name().into(),
                value: cell.into(),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(MetricTable {
        metrics: columns.into_iter().map(|(_, m)| m).collect(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricCorrelation {
    pub metric: &'static str,
    /// `None` when the column could not be correlated.
    pub r: Option<f64>,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excluded_reason: Option<String>,
}

/// Pearson correlation of every metric against `sde_q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub corpus: String,
    pub total: usize,
    pub graph_count: usize,
    pub excluded_count: usize,
    /// Excluded rows by reason.
    pub excluded: BTreeMap<String, usize>,
    pub correlations: Vec<MetricCorrelation>,
}

impl CorrelationReport {
    pub fn r(&self, m: Metric) -> Option<f64> {
        self.correlations
            .iter()
            .find(|c| c.metric == m.name())
            .and_then(|c| c.r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table with aligned columns.
    pub fn to_table(&self) -> String {
        let width = self
            .correlations
            .iter()
            .map(|c| c.metric.len())
            .max()
            .unwrap_or(6)
            .max(6);
        let mut s = format!(
            "corpus {}: {} graphs used, {} excluded of {}\n",
            self.corpus, self.graph_count, self.excluded_count, self.total
        );
        for (reason, count) in &self.excluded {
            s.push_str(&format!("  excluded {reason}: {count}\n"));
        }
        s.push_str(&format!(
            "{:<width$}  {:>9}  {:>7}\n",
            "metric", "r", "samples"
        ));
        for c in &self.correlations {
            let r = match (c.r, &c.excluded_reason) {
                (Some(r), _) => format!("{r:>9.4}"),
                (None, Some(why)) => format!("{why:>9}"),
                (None, None) => format!("{:>9}", "-"),
            };
            s.push_str(&format!("{:<width$}  {r}  {:>7}\n", c.metric, c.samples));
        }
        s
    }
}

/// Rows whose `sde_q` is not finite (regular graphs, infinite exponents) are
/// excluded; each remaining metric is correlated over rows where it is finite.
pub fn correlate(table: &MetricTable, corpus: &str) -> Result<CorrelationReport, ReportError> {
    let q = table
        .column(Metric::SdeQ)
        .ok_or_else(|| ReportError::MissingColumn(Metric::SdeQ.name().into()))?;
    let mut excluded = BTreeMap::new();
    let mut usable = Vec::new();
    for (r, &v) in q.iter().enumerate() {
        if v.is_finite() {
            usable.push(r);
        } else {
            let reason = if v.is_nan() {
                "undefined_q"
            } else {
                "infinite_q"
            };
            *excluded.entry(reason.to_string()).or_insert(0) += 1;
        }
    }
    let mut correlations = Vec::with_capacity(METRIC_COUNT);
    for (k, &m) in table.metrics.iter().enumerate() {
        if m == Metric::SdeQ {
            continue;
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = usable
            .iter()
            .map(|&r| (table.rows[r][k], q[r]))
            .filter(|(x, _)| x.is_finite())
            .unzip();
        let (r, excluded_reason) = match pearson(&xs, &ys) {
            Ok(r) => (Some(r), None),
            Err(MetricsError::ConstantSeries) => (None, Some("ConstantSeries".to_string())),
            Err(MetricsError::TooShort) => (None, Some("TooShort".to_string())),
            Err(e) => (None, Some(e.to_string())),
        };
        correlations.push(MetricCorrelation {
            metric: m.name(),
            r,
            samples: xs.len(),
            excluded_reason,
        });
    }
    let excluded_count = excluded.values().sum();
    Ok(CorrelationReport {
        corpus: corpus.to_string(),
        total: q.len(),
        graph_count: usable.len(),
        excluded_count,
        excluded,
        correlations,
    })
}
