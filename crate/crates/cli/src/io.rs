//! Text formats: dense CSV, svmlight, and coefficient files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use kl_pdhg::{Dataset, DesignMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Svmlight,
    Auto,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Model(#[from] kl_pdhg::Error),
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a dataset from `path`.
///
/// CSV files hold one sample per row with the label in the last column and
/// an optional header. svmlight files use `label idx:val ...` with 1-based
/// indices. `Auto` picks svmlight when the first data line contains `:`.
pub fn load_dataset(path: impl AsRef<Path>, format: Format) -> Result<Dataset, LoadError> {
    parse_dataset(&read(path.as_ref())?, format)
}

pub fn parse_dataset(text: &str, format: Format) -> Result<Dataset, LoadError> {
    let format = match format {
        Format::Auto => sniff(text),
        f => f,
    };
    match format {
        Format::Svmlight => parse_svmlight(text),
        _ => parse_csv(text),
    }
}

fn sniff(text: &str) -> Format {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    match first {
        Some(l) if l.contains(':') => Format::Svmlight,
        _ => Format::Csv,
    }
}

/// Maps raw labels to `{0, 1}`. `{-1, +1}` is accepted and remapped.
fn binary_labels(raw: &[(usize, f64)]) -> Result<Vec<f64>, LoadError> {
    if let Some(&(line, v)) = raw.iter().find(|(_, v)| ![-1.0, 0.0, 1.0].contains(v)) {
        return Err(LoadError::Data(format!(
            "line {line}: label {v} is not binary"
        )));
    }
    let has_neg = raw.iter().any(|(_, v)| *v == -1.0);
    let has_zero = raw.iter().any(|(_, v)| *v == 0.0);
    if has_neg && has_zero {
        return Err(LoadError::Data(
            "labels mix -1 and 0; use either {0,1} or {-1,+1}".into(),
        ));
    }
    Ok(raw
        .iter()
        .map(|&(_, v)| if v == 1.0 { 1.0 } else { 0.0 })
        .collect())
}

fn parse_f64(tok: &str, line: usize, what: &str) -> Result<f64, LoadError> {
    tok.trim().parse::<f64>().map_err(|_| LoadError::Parse {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

fn parse_csv(text: &str) -> Result<Dataset, LoadError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut cols = None;
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| LoadError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if k == 0 && rec.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if rec.len() < 2 {
            return Err(LoadError::Parse {
                line,
                msg: "need at least one feature and a label".into(),
            });
        }
        let n = rec.len() - 1;
        if *cols.get_or_insert(n) != n {
            return Err(LoadError::Parse {
                line,
                msg: format!("expected {} fields, found {}", cols.unwrap() + 1, rec.len()),
            });
        }
        for f in rec.iter().take(n) {
            values.push(parse_f64(f, line, "value")?);
        }
        labels.push((line, parse_f64(&rec[n], line, "label")?));
    }
    let Some(cols) = cols else {
        return Err(LoadError::Data("no samples in input".into()));
    };
    let y = binary_labels(&labels)?;
    let design = DesignMatrix::dense(y.len(), cols, values)?;
    Ok(Dataset::new(design, y)?)
}

fn parse_svmlight(text: &str) -> Result<Dataset, LoadError> {
    let mut offsets = vec![0usize];
    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut ncols = 0usize;
    let mut row: Vec<(usize, f64)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let label = parse_f64(toks.next().unwrap(), line, "label")?;
        row.clear();
        for tok in toks {
            let (i, v) = tok.split_once(':').ok_or_else(|| LoadError::Parse {
                line,
                msg: format!("expected index:value, found {tok:?}"),
            })?;
            if i == "qid" {
                continue;
            }
            let i: usize = i
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| LoadError::Parse {
                    line,
                    msg: format!("invalid feature index {i:?}"),
                })?;
            row.push((i - 1, parse_f64(v, line, "value")?));
        }
        row.sort_by_key(|e| e.0);
        if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(LoadError::Parse {
                line,
                msg: format!("feature {} appears twice", w[0].0 + 1),
            });
        }
        for &(i, v) in &row {
            ncols = ncols.max(i + 1);
            indices.push(i);
            values.push(v);
        }
        offsets.push(indices.len());
        labels.push((line, label));
    }
    if labels.is_empty() {
        return Err(LoadError::Data("no samples in input".into()));
    }
    let y = binary_labels(&labels)?;
    let design = DesignMatrix::csr(y.len(), ncols, offsets, indices, values)?;
    Ok(Dataset::new(design, y)?)
}

/// Writes `data` as CSV with the label last. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_csv(data: &Dataset, mut w: impl Write) -> std::io::Result<()> {
    let a = data.design();
    let mut buf = vec![0.0; a.ncols()];
    for (i, yi) in data.y().iter().enumerate() {
        buf.iter_mut().for_each(|b| *b = 0.0);
        for (j, v) in a.row(i).iter() {
            buf[j] = v;
        }
        for b in &buf {
            write!(w, "{b},")?;
        }
        writeln!(w, "{yi}")?;
    }
    Ok(())
}

/// Writes `data` in svmlight form. Exact zeros are omitted.
pub fn write_svmlight(data: &Dataset, mut w: impl Write) -> std::io::Result<()> {
    let a = data.design();
    for (i, yi) in data.y().iter().enumerate() {
        write!(w, "{yi}")?;
        for (j, v) in a.row(i).iter().filter(|e| e.1 != 0.0) {
            write!(w, " {}:{v}", j + 1)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads a coefficient vector of length `n`.
///
/// Accepts the JSON written by `solve`, CSV or `index:value` pairs with
/// 0-based indices, or one value per line.
pub fn load_coefficients(path: impl AsRef<Path>, n: usize) -> Result<Vec<f64>, LoadError> {
    parse_coefficients(&read(path.as_ref())?, n)
}

pub fn parse_coefficients(text: &str, n: usize) -> Result<Vec<f64>, LoadError> {
    if text.trim_start().starts_with('{') {
        let out: crate::output::SolveOutput =
            serde_json::from_str(text).map_err(|e| LoadError::Parse {
                line: e.line(),
                msg: e.to_string(),
            })?;
        let mut theta = vec![0.0; n];
        for c in out.theta {
            *theta.get_mut(c.index).ok_or_else(|| {
                LoadError::Data(format!(
                    "coefficient index {} out of range for {n} features",
                    c.index
                ))
            })? = c.value;
        }
        return Ok(theta);
    }
    let mut theta = vec![0.0; n];
    let mut dense = 0usize;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() || body.eq_ignore_ascii_case("index,value") {
            continue;
        }
        let (idx, val) = match body.split_once([',', ':']) {
            Some((i, v)) => {
                let i: usize = i.trim().parse().map_err(|_| LoadError::Parse {
                    line,
                    msg: format!("invalid index {i:?}"),
                })?;
                (i, parse_f64(v, line, "value")?)
            }
            None => {
                dense += 1;
                (dense - 1, parse_f64(body, line, "value")?)
            }
        };
        *theta.get_mut(idx).ok_or_else(|| {
            LoadError::Data(format!(
                "line {line}: index {idx} out of range for {n} features"
            ))
        })? = val;
    }
    Ok(theta)
}
