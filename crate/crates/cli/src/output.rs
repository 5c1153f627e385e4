//! Result rows, error records and the CSV / JSON writers.

use std::io::Write;

use hharmonic::{EvalResult, Error};
use serde::Serialize;

use crate::args::OutputFormat;

pub const CSV_HEADER: [&str; 7] = ["x", "y", "value", "rep", "terms_used", "tail_estimate", "wall_time"];

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
    pub rep: String,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub converged: bool,
    pub wall_time: Option<f64>,
}

impl Row {
    pub fn from_eval(x: &[f64], y: &[f64], rep: impl Into<String>, r: &EvalResult, wall_time: Option<f64>) -> Self {
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
            value: r.value,
            rep: rep.into(),
            terms_used: r.terms_used,
            tail_estimate: r.tail_estimate,
            converged: r.converged,
            wall_time,
        }
    }

    /// A derived quantity (residual, table entry) with no points attached.
    pub fn derived(rep: impl Into<String>, value: f64) -> Self {
        Self {
            x: Vec::new(),
            y: Vec::new(),
            value,
            rep: rep.into(),
            terms_used: 0,
            tail_estimate: 0.0,
            converged: true,
            wall_time: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Domain,
    NonConvergence,
    Usage,
    Tolerance,
}

impl ErrorKind {
    pub fn exit_code(self) -> u8 {
        match self {
            ErrorKind::Domain | ErrorKind::Usage => 2,
            ErrorKind::NonConvergence => 3,
            ErrorKind::Tolerance => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub kind: ErrorKind,
    pub message: String,
    /// Index of the failing row in the request, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial: Option<EvalResult>,
}

impl ErrorRecord {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Usage,
            message: message.into(),
            index: None,
            partial: None,
        }
    }

    pub fn from_error(e: &Error, index: Option<usize>) -> Self {
        let (kind, partial) = match e {
            Error::Domain(_) => (ErrorKind::Domain, None),
            Error::NonConvergence { partial } => (ErrorKind::NonConvergence, Some(*partial)),
        };
        Self {
            kind,
            message: e.to_string(),
            index,
            partial,
        }
    }
}

/// Everything one command produces.
#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub rows: Vec<Row>,
    pub errors: Vec<ErrorRecord>,
}

impl Report {
    /// Exit code: the largest code among the recorded errors, 0 if none.
    pub fn exit_code(&self) -> u8 {
        self.errors.iter().map(|e| e.kind.exit_code()).max().unwrap_or(0)
    }
}

/// Shortest round-trip form, switching to exponent notation outside
/// `[1e-4, 1e16)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn join(coords: &[f64]) -> String {
    coords.iter().map(|c| fmt_f64(*c)).collect::<Vec<_>>().join(",")
}

pub fn write_csv(out: impl Write, rows: &[Row]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            join(&r.x),
            join(&r.y),
            fmt_f64(r.value),
            r.rep.clone(),
            r.terms_used.to_string(),
            fmt_f64(r.tail_estimate),
            r.wall_time.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonDocument<'a, R: Serialize> {
    request: &'a R,
    rows: &'a [Row],
    errors: &'a [ErrorRecord],
}

/// Writes the report; CSV goes to `out` with errors on `err`, JSON carries
/// both in one document.
pub fn emit<R: Serialize>(
    format: OutputFormat,
    request: &R,
    report: &Report,
    mut out: impl Write,
    mut err: impl Write,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => {
            write_csv(&mut out, &report.rows).map_err(std::io::Error::other)?;
            for e in &report.errors {
                writeln!(err, "error: {}", e.message)?;
            }
        }
        OutputFormat::Json => {
            let doc = JsonDocument {
                request,
                rows: &report.rows,
                errors: &report.errors,
            };
            serde_json::to_writer_pretty(&mut out, &doc).map_err(std::io::Error::other)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_coordinates() {
        let r = Row::from_eval(&[0.1, 0.0], &[0.0, 0.2], "x9", &EvalResult::exact(1.5, 3), None);
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "x,y,value,rep,terms_used,tail_estimate,wall_time\n\"0.1,0\",\"0,0.2\",1.5,x9,3,0,\n"
        );
    }

    #[test]
    fn small_and_large_values_use_exponents() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(1.25), "1.25");
        assert_eq!(fmt_f64(9.5e-15), "9.5e-15");
        assert_eq!(fmt_f64(2e20), "2e20");
        assert_eq!(fmt_f64(-3e-7), "-3e-7");
    }

    #[test]
    fn exit_code_is_the_worst_error() {
        let mut rep = Report::default();
        assert_eq!(rep.exit_code(), 0);
        rep.errors.push(ErrorRecord::usage("u"));
        rep.errors.push(ErrorRecord::from_error(
            &Error::NonConvergence {
                partial: EvalResult::exact(0.0, 1),
            },
            Some(0),
        ));
        assert_eq!(rep.exit_code(), 3);
    }
}
