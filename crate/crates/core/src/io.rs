//! Text formats: point-cloud CSV, SPD CSV and distance-matrix CSV.
//!
//! Lines starting with `#` are comments. A point-cloud or SPD file may start
//! with a header row; a trailing `label` header column marks integer class
//! labels. SPD files declare the matrix size with `# spd k=<k>`.

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, MetricSpace, Point};
use crate::scalar::Scalar;
use crate::spd::SpdMatrix;

/// Points read from a CSV file, with labels when the file has them.
#[derive(Debug, Clone)]
pub struct PointFile<T: Scalar> {
    pub points: Vec<Point<T>>,
    pub labels: Option<Vec<usize>>,
    pub space: MetricSpace<T>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Table {
    header: Option<Vec<String>>,
    rows: Vec<(usize, Vec<String>)>,
    comments: Vec<String>,
}

fn split_table(text: &str) -> Table {
    let mut header = None;
    let mut rows = Vec::new();
    let mut comments = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
        let numeric = cells.iter().all(|c| c.parse::<f64>().is_ok());
        if header.is_none() && rows.is_empty() && !numeric {
            header = Some(cells);
        } else {
            rows.push((i + 1, cells));
        }
    }
    Table {
        header,
        rows,
        comments,
    }
}

fn parse_cell<T: Scalar>(s: &str, line: usize, column: usize) -> Result<T> {
    let v: f64 = s
        .parse()
        .map_err(|_| parse_err(line, column, format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, column, "non-finite value"));
    }
    Ok(T::from_f64_lossy(v))
}

fn parse_label(s: &str, line: usize, column: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_err(line, column, format!("bad label: {s:?}")))
}

/// Reads a euclidean point cloud.
pub fn read_point_csv<T: Scalar>(text: &str) -> Result<PointFile<T>> {
    let t = split_table(text);
    let has_label = t
        .header
        .as_ref()
        .is_some_and(|h| h.last().map(String::as_str) == Some("label"));
    let Some((_, first)) = t.rows.first() else {
        return Err(parse_err(1, 1, "no data rows"));
    };
    let width = first.len();
    let dim = width - usize::from(has_label);
    if dim == 0 {
        return Err(parse_err(t.rows[0].0, 1, "no coordinate columns"));
    }
    let mut points = Vec::with_capacity(t.rows.len());
    let mut labels = Vec::new();
    for (line, cells) in &t.rows {
        if cells.len() != width {
            return Err(parse_err(
                *line,
                cells.len().min(width) + 1,
                format!("expected {width} fields, got {}", cells.len()),
            ));
        }
        let coords = cells[..dim]
            .iter()
            .enumerate()
            .map(|(c, s)| parse_cell(s, *line, c + 1))
            .collect::<Result<Vec<T>>>()?;
        points.push(Point::Euclidean(coords));
        if has_label {
            labels.push(parse_label(&cells[dim], *line, dim + 1)?);
        }
    }
    Ok(PointFile {
        points,
        labels: has_label.then_some(labels),
        space: MetricSpace::euclidean(dim)?,
    })
}

fn declared_k(comments: &[String]) -> Option<usize> {
    comments.iter().find_map(|c| {
        let rest = c.strip_prefix("spd")?.trim();
        rest.strip_prefix("k=")?.trim().parse().ok()
    })
}

/// Reads SPD matrices, `k²` row-major entries per row.
pub fn read_spd_csv<T: Scalar>(text: &str) -> Result<PointFile<T>> {
    let t = split_table(text);
    let k = declared_k(&t.comments)
        .ok_or_else(|| parse_err(1, 1, "missing `# spd k=<k>` declaration"))?;
    let kk = k * k;
    let mut points = Vec::with_capacity(t.rows.len());
    let mut labels = Vec::new();
    let mut has_label = None;
    for (line, cells) in &t.rows {
        let labelled = match cells.len() {
            n if n == kk => false,
            n if n == kk + 1 => true,
            n => {
                return Err(parse_err(
                    *line,
                    n.min(kk) + 1,
                    format!("expected {kk} or {} fields, got {n}", kk + 1),
                ))
            }
        };
        if *has_label.get_or_insert(labelled) != labelled {
            return Err(parse_err(*line, kk + 1, "inconsistent label column"));
        }
        let entries = cells[..kk]
            .iter()
            .enumerate()
            .map(|(c, s)| parse_cell(s, *line, c + 1))
            .collect::<Result<Vec<T>>>()?;
        let m = SpdMatrix::from_row_slice(k, &entries)
            .map_err(|e| parse_err(*line, 1, e.to_string()))?;
        points.push(Point::Spd(m));
        if labelled {
            labels.push(parse_label(&cells[kk], *line, kk + 1)?);
        }
    }
    if points.is_empty() {
        return Err(parse_err(1, 1, "no data rows"));
    }
    Ok(PointFile {
        points,
        labels: has_label.unwrap_or(false).then_some(labels),
        space: MetricSpace::spd(k)?,
    })
}

/// Reads a square matrix without header. Symmetry, zero diagonal and
/// nonnegativity are left to [`crate::metric::validate_distance_matrix`].
pub fn read_distance_matrix_csv<T: Scalar>(text: &str) -> Result<DistanceMatrix<T>> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(c, s)| {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(i + 1, c + 1, format!("not a number: {:?}", s.trim())))?;
                Ok(T::from_f64_lossy(v))
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(parse_err(
                r + 1,
                row.len().min(n) + 1,
                format!("expected {n} columns for a {n}x{n} matrix, got {}", row.len()),
            ));
        }
    }
    DistanceMatrix::from_raw(n, rows.into_iter().flatten().collect())
}

fn fmt<T: Scalar>(v: T) -> String {
    format!("{:?}", v.as_f64())
}

fn push_comment(out: &mut String, comment: Option<&str>) {
    if let Some(c) = comment {
        for l in c.lines() {
            out.push_str("# ");
            out.push_str(l);
            out.push('\n');
        }
    }
}

/// Writes euclidean points with a header `x1,...,xd[,label]`.
pub fn write_point_csv<T: Scalar>(
    points: &[Point<T>],
    labels: Option<&[usize]>,
    comment: Option<&str>,
) -> Result<String> {
    let dim = match points.first() {
        Some(Point::Euclidean(v)) => v.len(),
        Some(_) => return Err(Error::DomainMismatch("point CSV holds euclidean points")),
        None => 0,
    };
    let mut out = String::new();
    push_comment(&mut out, comment);
    let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        let v = p
            .as_euclidean()
            .ok_or(Error::DomainMismatch("point CSV holds euclidean points"))?;
        let mut cells: Vec<String> = v.iter().map(|&c| fmt(c)).collect();
        if let Some(l) = labels {
            cells.push(l[i].to_string());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes SPD matrices row-major after a `# spd k=<k>` line.
pub fn write_spd_csv<T: Scalar>(
    points: &[Point<T>],
    labels: Option<&[usize]>,
    comment: Option<&str>,
) -> Result<String> {
    let mut out = String::new();
    push_comment(&mut out, comment);
    let k = match points.first() {
        Some(Point::Spd(m)) => m.size(),
        Some(_) => return Err(Error::DomainMismatch("SPD CSV holds SPD matrices")),
        None => 0,
    };
    out.push_str(&format!("# spd k={k}\n"));
    for (i, p) in points.iter().enumerate() {
        let Point::Spd(m) = p else {
            return Err(Error::DomainMismatch("SPD CSV holds SPD matrices"));
        };
        let mut cells: Vec<String> = m.to_row_major().into_iter().map(fmt).collect();
        if let Some(l) = labels {
            cells.push(l[i].to_string());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_distance_matrix_csv<T: Scalar>(m: &DistanceMatrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.len() {
        let cells: Vec<String> = m.row(i).iter().map(|&v| fmt(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
