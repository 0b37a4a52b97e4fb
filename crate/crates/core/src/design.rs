use crate::error::{Error, Result};

/// `n` design points in `R^d`, stored row-major, with optional per-point columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSet {
    dim: usize,
    points: Vec<f64>,
    /// Observed responses `y_i`.
    pub responses: Option<Vec<f64>>,
    /// Noiseless target values `f*(x_i)`.
    pub f_star: Option<Vec<f64>>,
    /// True (or externally supplied) input density at each point.
    pub density: Option<Vec<f64>>,
}

impl DesignSet {
    /// Builds a design set from a row-major buffer of `n * dim` coordinates.
    pub fn new(dim: usize, points: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("design dimension must be positive".into()));
        }
        if points.is_empty() || points.len() % dim != 0 {
            return Err(Error::Config(format!(
                "coordinate buffer of length {} is not a nonempty multiple of dim {}",
                points.len(),
                dim
            )));
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite coordinate in row {}",
                pos / dim
            )));
        }
        Ok(Self {
            dim,
            points,
            responses: None,
            f_star: None,
            density: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut points = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Config(format!(
                    "row {i} has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            points.extend_from_slice(row);
        }
        Self::new(dim, points)
    }

    pub fn with_responses(mut self, y: Vec<f64>) -> Result<Self> {
        self.check_column_len("responses", y.len())?;
        self.responses = Some(y);
        Ok(self)
    }

    pub fn with_f_star(mut self, f: Vec<f64>) -> Result<Self> {
        self.check_column_len("f_star", f.len())?;
        self.f_star = Some(f);
        Ok(self)
    }

    pub fn with_density(mut self, p: Vec<f64>) -> Result<Self> {
        self.check_column_len("density", p.len())?;
        self.density = Some(p);
        Ok(self)
    }

    fn check_column_len(&self, name: &str, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::Config(format!(
                "{name} column has length {len}, expected {}",
                self.len()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.points
    }

    /// New design set holding the selected rows (repetition allowed); columns are not carried over.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut points = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(Error::Config(format!(
                    "index {i} out of range for {} points",
                    self.len()
                )));
            }
            points.extend_from_slice(self.row(i));
        }
        Self::new(self.dim, points)
    }
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}
