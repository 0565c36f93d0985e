//! Long-format CSV data with typed columns.
//!
//! Each declared variable becomes a typed column; the key column, when the
//! design names one, is kept as text. Empty cells and `NA` are null. Nulls
//! are dropped per analysis and the counts travel with every sample view.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::speclang::{parse_number, DType, ValidatedSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("{0}")]
    Io(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("column `{0}` not found in data")]
    MissingColumn(String),
    #[error("row {row}, column `{column}`: `{cell}` is not a number")]
    TypeMismatch { row: usize, column: String, cell: String },
    #[error("row {row}, column `{column}`: `{cell}` is not a declared category")]
    CategoryViolation { row: usize, column: String, cell: String },
    #[error("row {row}, column `{column}`: {value} lies outside the declared range")]
    RangeViolation { row: usize, column: String, value: f64 },
    #[error("no observations for category `{0}`")]
    EmptyGroup(String),
    #[error("unit `{unit}` has more than one row for condition `{condition}`")]
    DuplicateCell { unit: String, condition: String },
    #[error("no unit has a value under every condition")]
    NoCompleteUnits,
    #[error("variable `{0}` is not loaded")]
    UnknownColumn(String),
    #[error("variable `{0}` is not categorical")]
    NotCategorical(String),
    #[error("variable `{0}` is not numeric")]
    NotNumeric(String),
    #[error("the design names no key column")]
    NoKey,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<Option<f64>>),
    Categorical { categories: Vec<String>, ordinal: bool, codes: Vec<Option<usize>> },
    Text(Vec<Option<String>>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical { codes, .. } => codes.len(),
            Column::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One numeric sample per factor category, in declared order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGroups {
    pub labels: Vec<String>,
    pub groups: Vec<Vec<f64>>,
    /// Rows dropped because the outcome or the factor was null.
    pub dropped: usize,
}

impl SampleGroups {
    pub fn get(&self, label: &str) -> Option<&[f64]> {
        self.labels.iter().position(|l| l == label).map(|i| self.groups[i].as_slice())
    }

    pub fn as_slices(&self) -> Vec<&[f64]> {
        self.groups.iter().map(Vec::as_slice).collect()
    }
}

/// Complete-case matrix of units by conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSamples {
    pub units: Vec<String>,
    pub conditions: Vec<String>,
    /// `matrix[unit][condition]`.
    pub matrix: Vec<Vec<f64>>,
    /// Units lacking a value under at least one condition.
    pub excluded_units: usize,
    /// Rows whose key or condition was null.
    pub skipped_rows: usize,
}

impl PairedSamples {
    pub fn column(&self, condition: &str) -> Option<Vec<f64>> {
        let j = self.conditions.iter().position(|c| c == condition)?;
        Some(self.matrix.iter().map(|row| row[j]).collect())
    }
}

/// Outcome values with the level codes of several factors, complete cases only.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSamples {
    pub y: Vec<f64>,
    pub codes: Vec<Vec<usize>>,
    pub levels: Vec<Vec<String>>,
    pub dropped: usize,
}

/// Complete pairs of two coded columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedColumns {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub dropped: usize,
}

/// Cross tabulation; rows follow `row_labels`, columns follow `col_labels`.
#[derive(Debug, Clone, PartialEq)]
pub struct Crosstab {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub dropped: usize,
}

#[derive(Debug)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Column>,
    row_count: usize,
    key_column: Option<String>,
    reads: AtomicUsize,
}

fn is_null(cell: &str) -> bool {
    cell.is_empty() || cell == "NA"
}

impl Dataset {
    /// Builds a dataset from already-typed columns of equal length.
    pub fn from_columns(columns: Vec<(String, Column)>, key_column: Option<String>) -> Result<Self, DataError> {
        let row_count = columns.first().map_or(0, |(_, c)| c.len());
        if let Some((name, _)) = columns.iter().find(|(_, c)| c.len() != row_count) {
            return Err(DataError::Csv(format!("column `{name}` has a different length")));
        }
        if let Some(k) = &key_column {
            if !columns.iter().any(|(n, _)| n == k) {
                return Err(DataError::MissingColumn(k.clone()));
            }
        }
        let (names, columns) = columns.into_iter().unzip();
        Ok(Self { names, columns, row_count, key_column, reads: AtomicUsize::new(0) })
    }

    pub fn load_csv(path: &Path, spec: &ValidatedSpec) -> Result<Self, DataError> {
        let file = std::fs::File::open(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => DataError::Io(format!("file not found: {}", path.display())),
            _ => DataError::Io(format!("cannot read {}: {e}", path.display())),
        })?;
        Self::from_reader(file, spec)
    }

    pub fn from_reader<R: Read>(reader: R, spec: &ValidatedSpec) -> Result<Self, DataError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| DataError::Csv(e.to_string()))?.clone();
        let mut records = Vec::new();
        for rec in rdr.records() {
            records.push(rec.map_err(|e| DataError::Csv(e.to_string()))?);
        }
        let index = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| DataError::MissingColumn(name.to_string()))
        };

        let mut columns = Vec::new();
        for v in &spec.spec.variables {
            let j = index(&v.name)?;
            let cells = records.iter().map(|r| r.get(j).unwrap_or(""));
            let column = if v.dtype.is_categorical() {
                let mut codes = Vec::with_capacity(records.len());
                for (i, cell) in cells.enumerate() {
                    codes.push(if is_null(cell) {
                        None
                    } else {
                        Some(v.category_index(cell).ok_or_else(|| DataError::CategoryViolation {
                            row: i + 1,
                            column: v.name.clone(),
                            cell: cell.to_string(),
                        })?)
                    });
                }
                Column::Categorical { categories: v.categories.clone(), ordinal: v.dtype == DType::Ordinal, codes }
            } else {
                let mut values = Vec::with_capacity(records.len());
                for (i, cell) in cells.enumerate() {
                    if is_null(cell) {
                        values.push(None);
                        continue;
                    }
                    let value = parse_number(cell).filter(|x| x.is_finite()).ok_or_else(|| {
                        DataError::TypeMismatch { row: i + 1, column: v.name.clone(), cell: cell.to_string() }
                    })?;
                    if v.range.is_some_and(|r| !r.contains(value)) {
                        return Err(DataError::RangeViolation { row: i + 1, column: v.name.clone(), value });
                    }
                    values.push(Some(value));
                }
                Column::Numeric(values)
            };
            columns.push((v.name.clone(), column));
        }

        let key = spec.spec.design.key.clone();
        if let Some(k) = &key {
            if spec.variable(k).is_none() {
                let j = index(k)?;
                let cells = records.iter().map(|r| r.get(j).filter(|c| !is_null(c)).map(str::to_string)).collect();
                columns.push((k.clone(), Column::Text(cells)));
            }
        }
        let mut ds = Self::from_columns(columns, key)?;
        ds.row_count = records.len();
        Ok(ds)
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn key_column(&self) -> Option<&str> {
        self.key_column.as_deref()
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    /// Number of sample-reading calls made so far. Structural checks must
    /// leave it untouched.
    pub fn sample_reads(&self) -> usize {
        self.reads.load(Ordering::Relaxed)
    }

    fn column(&self, name: &str) -> Result<&Column, DataError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.columns[i])
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    fn touch(&self) {
        self.reads.fetch_add(1, Ordering::Relaxed);
    }

    fn categorical(&self, name: &str) -> Result<(&[String], &[Option<usize>]), DataError> {
        match self.column(name)? {
            Column::Categorical { categories, codes, .. } => Ok((categories, codes)),
            _ => Err(DataError::NotCategorical(name.to_string())),
        }
    }

    /// Numeric view: measurements as is, ordinal categories as ranks 1..k,
    /// nominal categories as their 0-based declared position.
    fn coded(&self, name: &str) -> Result<Vec<Option<f64>>, DataError> {
        Ok(match self.column(name)? {
            Column::Numeric(v) => v.clone(),
            Column::Categorical { ordinal, codes, .. } => {
                let shift = if *ordinal { 1.0 } else { 0.0 };
                codes.iter().map(|c| c.map(|i| i as f64 + shift)).collect()
            }
            Column::Text(_) => return Err(DataError::NotNumeric(name.to_string())),
        })
    }

    fn outcome(&self, name: &str) -> Result<Vec<Option<f64>>, DataError> {
        match self.column(name)? {
            Column::Categorical { ordinal: false, .. } | Column::Text(_) => {
                Err(DataError::NotNumeric(name.to_string()))
            }
            _ => self.coded(name),
        }
    }

    /// Non-null values of a numeric (or ordinal) column.
    pub fn values(&self, name: &str) -> Result<(Vec<f64>, usize), DataError> {
        self.touch();
        let col = self.outcome(name)?;
        let values: Vec<f64> = col.iter().flatten().copied().collect();
        let dropped = col.len() - values.len();
        Ok((values, dropped))
    }

    /// Splits `outcome` by the categories of `factor`.
    pub fn group_samples(&self, outcome: &str, factor: &str) -> Result<SampleGroups, DataError> {
        self.touch();
        let y = self.outcome(outcome)?;
        let (labels, codes) = self.categorical(factor)?;
        let mut groups = vec![Vec::new(); labels.len()];
        let mut dropped = 0;
        for (v, c) in y.iter().zip(codes) {
            match (v, c) {
                (Some(v), Some(c)) => groups[*c].push(*v),
                _ => dropped += 1,
            }
        }
        if let Some(i) = groups.iter().position(Vec::is_empty) {
            return Err(DataError::EmptyGroup(labels[i].clone()));
        }
        Ok(SampleGroups { labels: labels.to_vec(), groups, dropped })
    }

    /// Units-by-conditions matrix keyed on the key column, sorted by unit.
    pub fn pair_samples(&self, outcome: &str, condition: &str) -> Result<PairedSamples, DataError> {
        self.touch();
        let key = self.key_column.as_deref().ok_or(DataError::NoKey)?;
        let units: Vec<Option<String>> = match self.column(key)? {
            Column::Text(v) => v.clone(),
            Column::Numeric(v) => v.iter().map(|x| x.map(|x| format!("{x}"))).collect(),
            Column::Categorical { categories, codes, .. } => {
                codes.iter().map(|c| c.map(|i| categories[i].clone())).collect()
            }
        };
        let y = self.outcome(outcome)?;
        let (conditions, codes) = self.categorical(condition)?;
        let k = conditions.len();

        let mut cells: BTreeMap<&str, Vec<Option<Option<f64>>>> = BTreeMap::new();
        let mut skipped_rows = 0;
        for ((unit, c), v) in units.iter().zip(codes).zip(&y) {
            let (Some(unit), Some(c)) = (unit, c) else {
                skipped_rows += 1;
                continue;
            };
            let row = cells.entry(unit.as_str()).or_insert_with(|| vec![None; k]);
            if row[*c].replace(*v).is_some() {
                return Err(DataError::DuplicateCell { unit: unit.clone(), condition: conditions[*c].clone() });
            }
        }
        let mut out_units = Vec::new();
        let mut matrix = Vec::new();
        let mut excluded_units = 0;
        for (unit, row) in cells {
            let complete: Option<Vec<f64>> = row.into_iter().map(Option::flatten).collect();
            match complete {
                Some(values) => {
                    out_units.push(unit.to_string());
                    matrix.push(values);
                }
                None => excluded_units += 1,
            }
        }
        if matrix.is_empty() {
            return Err(DataError::NoCompleteUnits);
        }
        Ok(PairedSamples { units: out_units, conditions: conditions.to_vec(), matrix, excluded_units, skipped_rows })
    }

    /// Outcome with the codes of every factor, dropping incomplete rows.
    pub fn cell_samples(&self, outcome: &str, factors: &[&str]) -> Result<CellSamples, DataError> {
        self.touch();
        let y = self.outcome(outcome)?;
        let cats: Vec<(&[String], &[Option<usize>])> =
            factors.iter().map(|f| self.categorical(f)).collect::<Result<_, _>>()?;
        let mut out = CellSamples {
            y: Vec::new(),
            codes: vec![Vec::new(); factors.len()],
            levels: cats.iter().map(|(l, _)| l.to_vec()).collect(),
            dropped: 0,
        };
        for (i, v) in y.iter().enumerate() {
            let codes: Option<Vec<usize>> = cats.iter().map(|(_, c)| c[i]).collect();
            match (v, codes) {
                (Some(v), Some(codes)) => {
                    out.y.push(*v);
                    for (dst, c) in out.codes.iter_mut().zip(codes) {
                        dst.push(c);
                    }
                }
                _ => out.dropped += 1,
            }
        }
        Ok(out)
    }

    /// Complete pairs of two columns under the numeric coding.
    pub fn paired_columns(&self, x: &str, y: &str) -> Result<PairedColumns, DataError> {
        self.touch();
        let (xs, ys) = (self.coded(x)?, self.coded(y)?);
        let mut out = PairedColumns { x: Vec::new(), y: Vec::new(), dropped: 0 };
        for (a, b) in xs.iter().zip(&ys) {
            match (a, b) {
                (Some(a), Some(b)) => {
                    out.x.push(*a);
                    out.y.push(*b);
                }
                _ => out.dropped += 1,
            }
        }
        Ok(out)
    }

    /// Counts of `cols` categories within each `rows` category.
    pub fn crosstab(&self, rows: &str, cols: &str) -> Result<Crosstab, DataError> {
        self.touch();
        let (row_labels, rc) = self.categorical(rows)?;
        let (col_labels, cc) = self.categorical(cols)?;
        let mut counts = vec![vec![0u64; col_labels.len()]; row_labels.len()];
        let mut dropped = 0;
        for (r, c) in rc.iter().zip(cc) {
            match (r, c) {
                (Some(r), Some(c)) => counts[*r][*c] += 1,
                _ => dropped += 1,
            }
        }
        Ok(Crosstab { row_labels: row_labels.to_vec(), col_labels: col_labels.to_vec(), counts, dropped })
    }
}
