use std::fmt;

use serde::{Deserialize, Serialize};

use super::ProbeError;

/// An unreduced `num/den` count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: usize,
    pub den: usize,
}

impl Fraction {
    pub fn add(&mut self, pass: bool) {
        self.den += 1;
        if pass {
            self.num += 1;
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRow {
    pub object_count: usize,
    pub passed: usize,
    pub total: usize,
}

impl SizeRow {
    pub fn fraction(&self) -> Fraction {
        Fraction {
            num: self.passed,
            den: self.total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionRow {
    pub position: usize,
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Inconsistent cases, ascending object count.
    pub rows: Vec<SizeRow>,
    pub consistent_accuracy: Fraction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub underspecified_accuracy: Option<Fraction>,
    #[serde(default)]
    pub by_position: Vec<PositionRow>,
}

impl ProbeReport {
    /// Parses a JSON report and checks its counts.
    pub fn from_json(text: &str) -> Result<Self, ProbeError> {
        let r: ProbeReport = serde_json::from_str(text).map_err(|e| ProbeError::MalformedReport(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report") + "\n"
    }

    pub fn validate(&self) -> Result<(), ProbeError> {
        let bad = |m: String| Err(ProbeError::MalformedReport(m));
        for w in self.rows.windows(2) {
            if w[0].object_count >= w[1].object_count {
                return bad(format!("object count {} is out of order", w[1].object_count));
            }
        }
        for r in &self.rows {
            if r.passed > r.total {
                return bad(format!("{}/{} at object count {}", r.passed, r.total, r.object_count));
            }
        }
        for p in &self.by_position {
            if p.passed > p.total {
                return bad(format!("{}/{} at position {}", p.passed, p.total, p.position));
            }
        }
        let c = self.consistent_accuracy;
        if c.num > c.den {
            return bad(format!("consistent accuracy {c}"));
        }
        Ok(())
    }
}

const HEADER: &str = "object_count\tpass_fraction";

/// Header line, then one `count<TAB>passed/total` row per object count.
pub fn render_tsv(report: &ProbeReport) -> String {
    let mut out = format!("{HEADER}\n");
    for r in &report.rows {
        out.push_str(&format!("{}\t{}\n", r.object_count, r.fraction()));
    }
    out
}

/// Reads [`render_tsv`] output back.
pub fn parse_report_tsv(text: &str) -> Result<Vec<SizeRow>, ProbeError> {
    let bad = |m: String| ProbeError::MalformedReport(m);
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(HEADER) {
        return Err(bad("missing header".into()));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let row = i + 2;
        let (count, frac) = line
            .split_once('\t')
            .ok_or_else(|| bad(format!("line {row}: expected two tab-separated fields")))?;
        let (num, den) = frac
            .split_once('/')
            .ok_or_else(|| bad(format!("line {row}: `{frac}` is not a fraction")))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("line {row}: `{s}` is not a count")));
        rows.push(SizeRow {
            object_count: parse(count)?,
            passed: parse(num)?,
            total: parse(den)?,
        });
    }
    let r = ProbeReport {
        rows,
        ..ProbeReport::default()
    };
    r.validate()?;
    Ok(r.rows)
}

/// Fixed-width table with the same two columns, followed by the
/// consistent-case accuracy when there were consistent cases.
pub fn render_table(report: &ProbeReport) -> String {
    let head = ("Object Count", "Pass Fraction");
    let mut out = format!("{:<12} | {}\n{}-+-{}\n", head.0, head.1, "-".repeat(12), "-".repeat(13));
    for r in &report.rows {
        out.push_str(&format!("{:<12} | {}\n", r.object_count, r.fraction()));
    }
    if report.consistent_accuracy.den > 0 {
        out.push_str(&format!("\nconsistent accuracy: {}\n", report.consistent_accuracy));
    }
    if let Some(u) = report.underspecified_accuracy {
        out.push_str(&format!("underspecified accuracy: {u}\n"));
    }
    out
}

/// Text table and TSV for a JSON report artifact.
pub fn render_report(json: &str) -> Result<(String, String), ProbeError> {
    let r = ProbeReport::from_json(json)?;
    Ok((render_table(&r), render_tsv(&r)))
}
