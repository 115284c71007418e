//! Plain-text weight matrix dump.
//!
//! ```text
//! # year=2000 scheme=exporter-gdp normalizer=1.2345678901234567e-2
//! 0.0000000000000000e0 1.0000000000000000e0 ...
//! ...
//! ```
//!
//! Values are written with 17 significant digits, which is enough for every
//! `f64` to parse back to the same bits.

use std::io::{BufRead, Write};

use super::{GraphError, UndirectedNetwork, WeightVariant};
use crate::ingest::Year;
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixDump {
    pub year: Year,
    pub scheme: WeightVariant,
    pub normalizer: f64,
    pub weights: SquareMatrix<f64>,
}

pub fn write_matrix_dump<S: Scalar, W: Write>(
    mut sink: W,
    net: &UndirectedNetwork<S>,
    scheme: WeightVariant,
) -> Result<(), GraphError> {
    writeln!(
        sink,
        "# year={} scheme={} normalizer={:.16e}",
        net.year,
        scheme,
        net.normalizer.to_f64_lossy()
    )?;
    let n = net.node_count();
    let mut line = String::new();
    for i in 0..n {
        line.clear();
        for (j, w) in net.weights.row(i).iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{:.16e}", w.to_f64_lossy()));
        }
        writeln!(sink, "{line}")?;
    }
    Ok(())
}

fn dump_err(line: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Dump {
        line,
        reason: reason.into(),
    }
}

pub fn read_matrix_dump<R: BufRead>(source: R) -> Result<MatrixDump, GraphError> {
    let mut lines = source.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l?,
        None => return Err(dump_err(1, "empty input")),
    };
    let body = header
        .strip_prefix('#')
        .ok_or_else(|| dump_err(1, "header must start with `#`"))?;

    let (mut year, mut scheme, mut normalizer) = (None, None, None);
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| dump_err(1, format!("bad header token `{token}`")))?;
        match key {
            "year" => year = Some(value.parse().map_err(|_| dump_err(1, "bad year"))?),
            "scheme" => scheme = Some(value.parse().map_err(|e: String| dump_err(1, e))?),
            "normalizer" => normalizer = Some(value.parse().map_err(|_| dump_err(1, "bad normalizer"))?),
            other => return Err(dump_err(1, format!("unknown header key `{other}`"))),
        }
    }
    let (year, scheme, normalizer) = match (year, scheme, normalizer) {
        (Some(y), Some(s), Some(v)) => (y, s, v),
        _ => return Err(dump_err(1, "header needs year, scheme and normalizer")),
    };

    let mut data = Vec::new();
    let mut n = None;
    let mut rows = 0;
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| dump_err(idx + 1, e.to_string()))?;
        match n {
            None => n = Some(row.len()),
            Some(k) if k != row.len() => {
                return Err(dump_err(idx + 1, format!("expected {k} columns, found {}", row.len())))
            }
            _ => {}
        }
        data.extend(row);
        rows += 1;
    }
    let n = n.unwrap_or(0);
    if rows != n {
        return Err(dump_err(rows + 1, format!("matrix has {rows} rows but {n} columns")));
    }
    let weights = SquareMatrix::from_row_major(n, data).expect("checked shape");
    Ok(MatrixDump {
        year,
        scheme,
        normalizer,
        weights,
    })
}
