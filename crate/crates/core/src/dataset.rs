//! Labelled datasets for the finite-sum objectives.
//!
//! The on-disk format is plain CSV with one datapoint per row,
//! `label,feat_1,...,feat_d`, labels in `{0,1}`. A header row is allowed and
//! recognised by a non-numeric first field.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<f64>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<f64>) -> Result<Self> {
        if features.rows() == 0 || features.cols() == 0 {
            return Err(Error::Config("dataset needs N >= 1 rows and d >= 1 features".into()));
        }
        if labels.len() != features.rows() {
            return Err(Error::Config(format!(
                "{} labels for {} feature rows",
                labels.len(),
                features.rows()
            )));
        }
        if let Some(z) = labels.iter().find(|&&z| z != 0.0 && z != 1.0) {
            return Err(Error::Config(format!("label {z} is not 0 or 1")));
        }
        if features.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("features contain a non-finite value".into()));
        }
        Ok(Self { features, labels })
    }

    pub fn len(&self) -> usize {
        self.features.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    #[inline]
    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }
}

/// Reads `label,feat_1,...,feat_d` rows. Rows keep file order.
pub fn load_dataset_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);

    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let mut dim: Option<usize> = None;
    let mut labels = Vec::new();
    let mut data = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(idx + 1, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let first = &record[0];
        if labels.is_empty() && dim.is_none() && first.parse::<f64>().is_err() {
            // header row
            dim = Some(record.len() - 1);
            continue;
        }
        let d = record.len().saturating_sub(1);
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(parse_err(
                    line,
                    format!("expected {} fields, found {}", expected + 1, record.len()),
                ))
            }
            _ => {}
        }
        if d == 0 {
            return Err(parse_err(line, "row has a label but no features".into()));
        }
        let label: f64 = first
            .parse()
            .map_err(|_| parse_err(line, format!("label {first:?} is not numeric")))?;
        if label != 0.0 && label != 1.0 {
            return Err(parse_err(line, format!("label {first:?} is not 0 or 1")));
        }
        labels.push(label);
        for (col, field) in record.iter().enumerate().skip(1) {
            let v: f64 = field.parse().map_err(|_| {
                parse_err(line, format!("field {} ({field:?}) is not numeric", col + 1))
            })?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("field {} is not finite", col + 1)));
            }
            data.push(v);
        }
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset(path.to_path_buf()));
    }
    let d = dim.unwrap_or(0);
    Dataset::new(Matrix::from_row_major(labels.len(), d, data), labels)
}

/// Writes the dataset in the format accepted by [`load_dataset_csv`]. Numbers
/// use Rust's shortest round-trip formatting.
pub fn write_dataset_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    for i in 0..dataset.len() {
        write!(w, "{}", dataset.label(i)).map_err(io_err)?;
        for v in dataset.row(i) {
            write!(w, ",{v:?}").map_err(io_err)?;
        }
        writeln!(w).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Simulated logistic-regression data: standard normal features, a hidden
/// standard normal parameter, and Bernoulli labels with logistic link.
pub fn generate_simdata(n_points: usize, dim: usize, rng: &mut RngStream) -> Result<Dataset> {
    if n_points == 0 || dim == 0 {
        return Err(Error::Config("SimData needs N >= 1 and d >= 1".into()));
    }
    let theta: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let data: Vec<f64> = (0..n_points * dim)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    let features = Matrix::from_row_major(n_points, dim, data);
    let labels = (0..n_points)
        .map(|i| {
            let p = crate::objectives::sigmoid(dot(&theta, features.row(i)));
            if rng.random::<f64>() < p {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Dataset::new(features, labels)
}
