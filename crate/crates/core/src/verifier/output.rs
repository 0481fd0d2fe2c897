use std::io::Write;

use serde::Serialize;

use crate::catalog::{BoundEval, Side};
use crate::error::Result;

/// Per-sample CSV with columns `bound_id,n,k,x,lhs,rhs,margin,certified`.
///
/// Leading `#` lines carry the caller's metadata. Values are printed with
/// enough digits to round-trip at their precision.
pub struct CsvSampleWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvSampleWriter<W> {
    pub fn new(mut out: W, comments: &[String]) -> Result<Self> {
        for c in comments {
            for line in c.lines() {
                writeln!(out, "# {line}")?;
            }
        }
        let mut inner = csv::Writer::from_writer(out);
        inner.write_record(["bound_id", "n", "k", "x", "lhs", "rhs", "margin", "certified"])?;
        Ok(CsvSampleWriter { inner })
    }

    pub fn write(&mut self, e: &BoundEval) -> Result<()> {
        let digits = |a: &crate::ApproxReal| (f64::from(a.prec()) * std::f64::consts::LOG10_2).ceil() as usize + 1;
        let mut id = e.case.id.label().to_string();
        match e.case.side {
            Some(Side::L) => id.push('L'),
            Some(Side::R) => id.push('R'),
            None => {}
        }
        let opt = |v: Option<u32>| v.map(|v| v.to_string()).unwrap_or_default();
        self.inner.write_record([
            id,
            opt(e.case.n),
            opt(e.case.k),
            format!("{:e}", e.x),
            e.lhs.value_string(digits(&e.lhs)),
            e.rhs.value_string(digits(&e.rhs)),
            e.margin.value_string(digits(&e.margin)),
            e.certified().to_string(),
        ])?;
        Ok(())
    }

    pub fn finish(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| crate::Error::Io(std::io::Error::other(e.to_string())))
    }
}

/// Pretty JSON followed by a newline.
pub fn write_report_json<T: Serialize>(out: impl Write, value: &T) -> Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
