use std::path::Path;

use ndarray::Array2;

use super::TimeSeries;
use crate::{Error, Result};

/// Write a series as CSV: header row with column names, one row per time
/// step, `.` decimal points regardless of locale.
pub fn write_series_csv<P: AsRef<Path>>(series: &TimeSeries, path: P) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(series.names())?;
    for row in series.values().rows() {
        let rec: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a series written by [`write_series_csv`] (or any headered numeric CSV).
pub fn read_series_csv<P: AsRef<Path>>(path: P) -> Result<TimeSeries> {
    let mut r = csv::Reader::from_path(path)?;
    let names: Vec<String> = r
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut data: Vec<f64> = Vec::new();
    let mut rows = 0usize;
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != names.len() {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} fields, header has {}",
                rows + 1,
                rec.len(),
                names.len()
            )));
        }
        for field in rec.iter() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::NonFinite("csv field"))?;
            data.push(v);
        }
        rows += 1;
    }
    let arr = Array2::from_shape_vec((rows, names.len()), data)
        .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
    TimeSeries::with_names(arr, names)
}
