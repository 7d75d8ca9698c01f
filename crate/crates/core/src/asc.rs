//! Esri ASCII grid reader and writer.
//!
//! The format is a plain-text raster: header lines `ncols`, `nrows`,
//! `xllcorner`, `yllcorner`, `cellsize`, an optional `NODATA_value`
//! (default -9999), then `nrows` rows of whitespace-separated values, the
//! northernmost row first. Header keys are matched case-insensitively and
//! both LF and CRLF line endings are accepted.
//!
//! Values print as the shortest decimal string that parses back to the
//! identical float, so `parse_asc(write_asc(g)) == g` holds bit-for-bit.

use crate::error::{Error, Result};
use crate::grid::{DemGrid, GridHeader};
use crate::scalar::Scalar;

const DEFAULT_NODATA: f64 = -9999.0;

fn parse_header_f64(key: &str, value: &str) -> Result<f64> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::NonNumericHeaderValue {
            key: key.to_string(),
            value: value.to_string(),
        }),
    }
}

fn parse_header_dim(key: &'static str, value: &str) -> Result<usize> {
    let n = value
        .parse::<i64>()
        .map_err(|_| Error::NonNumericHeaderValue {
            key: key.to_string(),
            value: value.to_string(),
        })?;
    if n <= 0 {
        return Err(Error::NonPositiveDimension { key, value: n });
    }
    Ok(n as usize)
}

/// Parses an Esri ASCII grid. Cells numerically equal to the nodata
/// sentinel come back flagged nodata; all other cells must be finite.
pub fn parse_asc<T: Scalar>(text: &str) -> Result<DemGrid<T>> {
    let mut ncols = None;
    let mut nrows = None;
    let mut xllcorner = None;
    let mut yllcorner = None;
    let mut cellsize = None;
    let mut nodata_value = None;

    // Header lines start with an alphabetic key; the first line that does
    // not marks the beginning of the data section.
    let mut rest = text;
    loop {
        let line_end = rest.find('\n').map(|i| i + 1).unwrap_or(rest.len());
        let line = rest[..line_end].trim();
        if line.is_empty() {
            if line_end == rest.len() {
                break;
            }
            rest = &rest[line_end..];
            continue;
        }
        if !line.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            break;
        }
        let mut it = line.split_whitespace();
        let key = it.next().expect("non-empty line has a first token");
        let value = it.next().unwrap_or("");
        if it.next().is_some() {
            return Err(Error::UnexpectedHeaderField(line.to_string()));
        }
        match key.to_ascii_lowercase().as_str() {
            "ncols" => ncols = Some(parse_header_dim("ncols", value)?),
            "nrows" => nrows = Some(parse_header_dim("nrows", value)?),
            "xllcorner" => xllcorner = Some(parse_header_f64("xllcorner", value)?),
            "yllcorner" => yllcorner = Some(parse_header_f64("yllcorner", value)?),
            "cellsize" => {
                let v = parse_header_f64("cellsize", value)?;
                if v <= 0.0 {
                    return Err(Error::NonPositiveCellsize(v));
                }
                cellsize = Some(v);
            }
            "nodata_value" => nodata_value = Some(parse_header_f64("NODATA_value", value)?),
            _ => return Err(Error::UnexpectedHeaderField(key.to_string())),
        }
        rest = &rest[line_end..];
    }

    let header = GridHeader {
        ncols: ncols.ok_or(Error::MissingHeaderField("ncols"))?,
        nrows: nrows.ok_or(Error::MissingHeaderField("nrows"))?,
        xllcorner: xllcorner.ok_or(Error::MissingHeaderField("xllcorner"))?,
        yllcorner: yllcorner.ok_or(Error::MissingHeaderField("yllcorner"))?,
        cellsize: cellsize.ok_or(Error::MissingHeaderField("cellsize"))?,
        nodata_value: nodata_value.unwrap_or(DEFAULT_NODATA),
    };

    let expected = header
        .ncols
        .checked_mul(header.nrows)
        .ok_or_else(|| Error::InvalidParameter("raster dimensions overflow".into()))?;
    let sentinel = T::from_f64(header.nodata_value);
    // grow from a bounded capacity: a lying header must not abort on OOM
    let cap = expected.min(1 << 20);
    let mut values = Vec::with_capacity(cap);
    let mut nodata = Vec::with_capacity(cap);
    for (i, token) in rest.split_whitespace().enumerate() {
        if i >= expected {
            return Err(Error::CellCountMismatch {
                expected,
                found: expected + 1 + rest.split_whitespace().skip(i + 1).count(),
            });
        }
        let v =
            token
                .parse::<T>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or(Error::NonNumericToken {
                    row: i / header.ncols,
                    col: i % header.ncols,
                    token: token.to_string(),
                })?;
        if v == sentinel {
            values.push(sentinel);
            nodata.push(true);
        } else {
            values.push(v);
            nodata.push(false);
        }
    }
    if values.len() != expected {
        return Err(Error::CellCountMismatch {
            expected,
            found: values.len(),
        });
    }
    DemGrid::new(header, values, nodata)
}

/// Serializes a grid back to Esri ASCII text. Nodata cells print the
/// sentinel; rows end with LF.
pub fn write_asc<T: Scalar>(grid: &DemGrid<T>) -> String {
    let h = grid.header();
    let mut out = String::with_capacity(grid.values().len() * 8 + 128);
    out.push_str(&format!("ncols {}\n", h.ncols));
    out.push_str(&format!("nrows {}\n", h.nrows));
    out.push_str(&format!("xllcorner {}\n", h.xllcorner));
    out.push_str(&format!("yllcorner {}\n", h.yllcorner));
    out.push_str(&format!("cellsize {}\n", h.cellsize));
    out.push_str(&format!("NODATA_value {}\n", h.nodata_value));
    for row in 0..h.nrows {
        for col in 0..h.ncols {
            if col > 0 {
                out.push(' ');
            }
            out.push_str(&grid.value(row, col).to_string());
        }
        out.push('\n');
    }
    out
}
