//! Typed mixed categorical/numeric tables: schemas, records, CSV ingestion,
//! seeded splitting.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::ops::Deref;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Kind and domain of one attribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureKind {
    Categorical { domain: Vec<String> },
    Numeric { min: f64, max: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

impl FeatureSpec {
    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        domain: impl IntoIterator<Item = S>,
    ) -> Self {
        FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Categorical {
                domain: domain.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn numeric(name: impl Into<String>, min: f64, max: f64) -> Self {
        FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Numeric { min, max },
        }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self.kind, FeatureKind::Categorical { .. })
    }

    /// Domain size for categorical features, `None` for numeric ones.
    pub fn cardinality(&self) -> Option<usize> {
        match &self.kind {
            FeatureKind::Categorical { domain } => Some(domain.len()),
            FeatureKind::Numeric { .. } => None,
        }
    }
}

#[derive(Deserialize)]
struct RawSchema {
    features: Vec<FeatureSpec>,
}

/// Ordered list of attribute specifications.
///
/// Construction validates that names are unique and non-empty, categorical
/// domains are non-empty without duplicates, and numeric ranges satisfy
/// `min <= max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchema")]
pub struct Schema {
    features: Vec<FeatureSpec>,
    #[serde(skip)]
    lookup: Vec<HashMap<String, u32>>,
}

impl TryFrom<RawSchema> for Schema {
    type Error = Error;

    fn try_from(raw: RawSchema) -> Result<Self> {
        Schema::new(raw.features)
    }
}

impl Schema {
    pub fn new(features: Vec<FeatureSpec>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidSchema("schema has no features".into()));
        }
        let mut names = HashSet::new();
        let mut lookup = Vec::with_capacity(features.len());
        for f in &features {
            if f.name.is_empty() {
                return Err(Error::InvalidSchema("empty feature name".into()));
            }
            if !names.insert(f.name.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate feature name `{}`",
                    f.name
                )));
            }
            let mut map = HashMap::new();
            match &f.kind {
                FeatureKind::Categorical { domain } => {
                    if domain.is_empty() {
                        return Err(Error::InvalidSchema(format!(
                            "`{}` has an empty domain",
                            f.name
                        )));
                    }
                    for (code, v) in domain.iter().enumerate() {
                        if map.insert(v.clone(), code as u32).is_some() {
                            return Err(Error::InvalidSchema(format!(
                                "`{}` lists category `{v}` twice",
                                f.name
                            )));
                        }
                    }
                }
                FeatureKind::Numeric { min, max } => {
                    if !(min.is_finite() && max.is_finite() && min <= max) {
                        return Err(Error::InvalidSchema(format!(
                            "`{}` has invalid range [{min}, {max}]",
                            f.name
                        )));
                    }
                }
            }
            lookup.push(map);
        }
        Ok(Schema { features, lookup })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serializes")
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn feature(&self, index: usize) -> &FeatureSpec {
        &self.features[index]
    }

    /// Number of attributes `k`.
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|f| f.name.as_str())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// Domain code of `value` for categorical feature `feature`.
    pub fn category_code(&self, feature: usize, value: &str) -> Option<u32> {
        self.lookup[feature].get(value).copied()
    }

    /// Category label for a domain code.
    pub fn category_label(&self, feature: usize, code: u32) -> &str {
        match &self.features[feature].kind {
            FeatureKind::Categorical { domain } => &domain[code as usize],
            FeatureKind::Numeric { .. } => panic!("feature {feature} is numeric"),
        }
    }

    pub fn numeric_features(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.features[i].is_categorical())
            .collect()
    }

    pub fn categorical_features(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.features[i].is_categorical())
            .collect()
    }

    /// Check that `record` has `k` values of the right kinds and domains.
    pub fn validate(&self, record: &Record) -> Result<()> {
        if record.len() != self.len() {
            return Err(Error::SchemaMismatch(format!(
                "record has {} values, schema has {} features",
                record.len(),
                self.len()
            )));
        }
        for (i, (v, f)) in record.iter().zip(&self.features).enumerate() {
            match (v, &f.kind) {
                (Value::Cat(code), FeatureKind::Categorical { domain })
                    if (*code as usize) < domain.len() => {}
                (Value::Num(x), FeatureKind::Numeric { .. }) if x.is_finite() => {}
                _ => {
                    return Err(Error::SchemaMismatch(format!(
                        "value {v:?} does not conform to feature {i} (`{}`)",
                        f.name
                    )))
                }
            }
        }
        Ok(())
    }
}

/// One attribute value. Categorical values are stored as their index into
/// the feature's schema domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    Cat(u32),
    Num(f64),
}

impl Value {
    pub fn as_num(self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(x),
            Value::Cat(_) => None,
        }
    }

    pub fn as_cat(self) -> Option<u32> {
        match self {
            Value::Cat(c) => Some(c),
            Value::Num(_) => None,
        }
    }

    /// Bit pattern used for exact-match hashing; `-0.0` and `0.0` coincide.
    pub(crate) fn key(self) -> u64 {
        match self {
            Value::Cat(c) => u64::from(c),
            Value::Num(0.0) => 0,
            Value::Num(x) => x.to_bits(),
        }
    }
}

/// A row `x_i = (x_{i,1}, ..., x_{i,k})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Record(Vec<Value>);

impl Record {
    pub fn new(values: Vec<Value>) -> Self {
        Record(values)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn set(&mut self, feature: usize, value: Value) {
        self.0[feature] = value;
    }

    /// Hashable identity for exact matching.
    pub(crate) fn key(&self) -> Vec<u64> {
        self.0.iter().map(|v| v.key()).collect()
    }
}

impl Deref for Record {
    type Target = [Value];

    fn deref(&self) -> &[Value] {
        &self.0
    }
}

impl From<Vec<Value>> for Record {
    fn from(values: Vec<Value>) -> Self {
        Record(values)
    }
}

/// Provenance role of a dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Target,
    Holdout,
    Aux,
    Synthetic,
    Shadow,
    Unlabeled,
}

/// Immutable table of records conforming to a shared schema.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Arc<Schema>,
    rows: Vec<Record>,
    role: Role,
}

impl Dataset {
    /// Build a dataset, validating every record.
    pub fn new(schema: Arc<Schema>, rows: Vec<Record>, role: Role) -> Result<Self> {
        for r in &rows {
            schema.validate(r)?;
        }
        Ok(Dataset { schema, rows, role })
    }

    /// Build without validation; callers guarantee conformance.
    pub(crate) fn from_trusted(schema: Arc<Schema>, rows: Vec<Record>, role: Role) -> Self {
        Dataset { schema, rows, role }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn schema_arc(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn rows(&self) -> &[Record] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &Record {
        &self.rows[index]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    /// New dataset holding the rows at `indices` (in that order).
    pub fn select(&self, indices: &[usize], role: Role) -> Dataset {
        Dataset {
            schema: Arc::clone(&self.schema),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            role,
        }
    }

    /// Whether both datasets use the same schema.
    pub fn same_schema(&self, other: &Dataset) -> bool {
        Arc::ptr_eq(&self.schema, &other.schema) || *self.schema == *other.schema
    }

    pub(crate) fn ensure_same_schema(&self, other: &Dataset) -> Result<()> {
        self.ensure_schema(&other.schema)
    }

    pub(crate) fn ensure_schema(&self, schema: &Arc<Schema>) -> Result<()> {
        if Arc::ptr_eq(&self.schema, schema) || *self.schema == **schema {
            Ok(())
        } else {
            Err(Error::SchemaMismatch(
                "datasets use different schemas".into(),
            ))
        }
    }

    /// Render a value as the string written to CSV.
    pub fn format_value(&self, feature: usize, value: Value) -> String {
        match value {
            Value::Cat(code) => self.schema.category_label(feature, code).to_owned(),
            Value::Num(x) => x.to_string(),
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.schema.names())?;
        for r in &self.rows {
            w.write_record(r.iter().enumerate().map(|(f, &v)| self.format_value(f, v)))?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Load a CSV file against a JSON schema file.
pub fn load_csv(path: impl AsRef<Path>, schema_path: impl AsRef<Path>) -> Result<Dataset> {
    let schema = Arc::new(Schema::load(schema_path)?);
    load_csv_with_schema(path, schema)
}

pub fn load_csv_with_schema(path: impl AsRef<Path>, schema: Arc<Schema>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema)
}

/// Parse CSV text (header row required) into an unlabeled dataset.
pub fn read_csv<R: Read>(mut reader: R, schema: Arc<Schema>) -> Result<Dataset> {
    let mut buf = Vec::new();
    reader
        .read_to_end(&mut buf)
        .map_err(|e| Error::io("<csv input>", e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(buf.as_slice());
    let headers = rdr.headers()?.clone();
    if !headers.iter().eq(schema.names()) {
        return Err(Error::SchemaMismatch(format!(
            "header [{}] does not match schema [{}]",
            headers.iter().collect::<Vec<_>>().join(","),
            schema.names().collect::<Vec<_>>().join(",")
        )));
    }
    let k = schema.len();
    let mut rows = Vec::new();
    let mut rec = csv::StringRecord::new();
    let blank = first_blank_row(&buf);
    let blank_row = |row: usize| {
        if k == 1 {
            Error::MissingValue {
                row,
                column: schema.feature(0).name.clone(),
            }
        } else {
            Error::malformed(Some(row), "empty line")
        }
    };
    while rdr.read_record(&mut rec)? {
        let row = rows.len() + 1;
        if blank == Some(row) {
            return Err(blank_row(row));
        }
        if rec.len() != k {
            return Err(Error::malformed(
                Some(row),
                format!("expected {k} fields, found {}", rec.len()),
            ));
        }
        let mut values = Vec::with_capacity(k);
        for (f, cell) in rec.iter().enumerate() {
            let spec = schema.feature(f);
            if cell.is_empty() {
                return Err(Error::MissingValue {
                    row,
                    column: spec.name.clone(),
                });
            }
            let value = match spec.kind {
                FeatureKind::Categorical { .. } => {
                    Value::Cat(schema.category_code(f, cell).ok_or_else(|| {
                        Error::UnknownCategory {
                            row,
                            column: spec.name.clone(),
                            value: cell.to_owned(),
                        }
                    })?)
                }
                FeatureKind::Numeric { .. } => Value::Num(parse_real(cell).ok_or_else(|| {
                    Error::malformed(
                        Some(row),
                        format!("column `{}`: `{cell}` is not a finite number", spec.name),
                    )
                })?),
            };
            values.push(value);
        }
        rows.push(Record(values));
    }
    if let Some(row) = blank {
        return Err(blank_row(row));
    }
    Ok(Dataset::from_trusted(schema, rows, Role::Unlabeled))
}

/// 1-based data row of the first blank line after the header. The csv
/// reader skips such lines silently, which would hide a missing value in a
/// single-column file.
fn first_blank_row(buf: &[u8]) -> Option<usize> {
    let (mut line, mut empty, mut quoted) = (0usize, true, false);
    let mut i = 0;
    while i < buf.len() {
        match buf[i] {
            b'"' => {
                quoted = !quoted;
                empty = false;
            }
            b @ (b'\n' | b'\r') if !quoted => {
                if empty && line > 0 {
                    return Some(line);
                }
                if b == b'\r' && buf.get(i + 1) == Some(&b'\n') {
                    i += 1;
                }
                line += 1;
                empty = true;
            }
            _ => empty = false,
        }
        i += 1;
    }
    None
}

fn parse_real(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Infer a schema from a CSV file's observed values.
///
/// A column is numeric when at least `numeric_threshold` of its cells parse
/// as finite reals; otherwise it is categorical with its distinct values as
/// a lexicographically sorted domain.
pub fn infer_schema(path: impl AsRef<Path>, numeric_threshold: f64) -> Result<Schema> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    infer_schema_from_reader(file, numeric_threshold)
}

pub fn infer_schema_from_reader<R: Read>(reader: R, numeric_threshold: f64) -> Result<Schema> {
    if !(0.0..=1.0).contains(&numeric_threshold) {
        return Err(Error::InvalidConfig(format!(
            "numeric threshold {numeric_threshold} outside [0, 1]"
        )));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let k = headers.len();
    let mut columns: Vec<Vec<String>> = vec![Vec::new(); k];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != k {
            return Err(Error::malformed(
                Some(i + 1),
                format!("expected {k} fields, found {}", rec.len()),
            ));
        }
        for (f, cell) in rec.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::malformed(
                    Some(i + 1),
                    format!("empty cell in column `{}`", headers[f]),
                ));
            }
            columns[f].push(cell.to_owned());
        }
    }
    if columns.first().is_none_or(Vec::is_empty) {
        return Err(Error::malformed(None, "no data rows"));
    }
    let features = headers
        .into_iter()
        .zip(columns)
        .map(|(name, cells)| {
            let parsed: Vec<f64> = cells.iter().filter_map(|c| parse_real(c)).collect();
            if parsed.len() as f64 >= numeric_threshold * cells.len() as f64 && !parsed.is_empty() {
                let min = parsed.iter().copied().fold(f64::INFINITY, f64::min);
                let max = parsed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                FeatureSpec::numeric(name, min, max)
            } else {
                let domain: BTreeSet<String> = cells.into_iter().collect();
                FeatureSpec::categorical(name, domain)
            }
        })
        .collect();
    Schema::new(features)
}

/// Sizes and seed for a target/holdout/aux partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub target_size: usize,
    pub holdout_size: usize,
    pub aux_size: usize,
    pub seed: u64,
}

/// Source row indices assigned to each split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitIndices {
    pub target: Vec<usize>,
    pub holdout: Vec<usize>,
    pub aux: Vec<usize>,
}

impl SplitSpec {
    /// Partition `0..n` by a seeded Fisher–Yates shuffle.
    pub fn indices(&self, n: usize) -> Result<SplitIndices> {
        if self.target_size == 0 || self.holdout_size == 0 || self.aux_size == 0 {
            return Err(Error::InvalidConfig(
                "split sizes must all be at least 1".into(),
            ));
        }
        let needed = self.target_size + self.holdout_size + self.aux_size;
        if needed > n {
            return Err(Error::InsufficientRows {
                needed,
                available: n,
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        rng::shuffle(&mut order, &mut rng::seeded(self.seed));
        let holdout_end = self.target_size + self.holdout_size;
        Ok(SplitIndices {
            target: order[..self.target_size].to_vec(),
            holdout: order[self.target_size..holdout_end].to_vec(),
            aux: order[holdout_end..needed].to_vec(),
        })
    }
}

/// Split `source` into pairwise-disjoint target, holdout and auxiliary sets.
pub fn split(source: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset, Dataset)> {
    let idx = spec.indices(source.len())?;
    Ok((
        source.select(&idx.target, Role::Target),
        source.select(&idx.holdout, Role::Holdout),
        source.select(&idx.aux, Role::Aux),
    ))
}

/// Copy of `d` with row `index` replaced by `record`.
pub fn replace_record(d: &Dataset, index: usize, record: Record) -> Result<Dataset> {
    if index >= d.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: d.len(),
        });
    }
    d.schema.validate(&record)?;
    let mut rows = d.rows.clone();
    rows[index] = record;
    Ok(Dataset::from_trusted(Arc::clone(&d.schema), rows, d.role))
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Target => "target",
            Role::Holdout => "holdout",
            Role::Aux => "aux",
            Role::Synthetic => "synthetic",
            Role::Shadow => "shadow",
            Role::Unlabeled => "unlabeled",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema2() -> Arc<Schema> {
        Arc::new(
            Schema::new(vec![
                FeatureSpec::numeric("x", 0.0, 10.0),
                FeatureSpec::categorical("c", ["A", "B"]),
            ])
            .unwrap(),
        )
    }

    fn parse(text: &str) -> Result<Dataset> {
        read_csv(text.as_bytes(), schema2())
    }

    #[test]
    fn loads_three_rows() {
        let d = parse("x,c\n1.5,A\n2,B\n3,A\n").unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.schema().len(), 2);
        assert_eq!(d.role(), Role::Unlabeled);
        assert_eq!(d.row(1).values(), &[Value::Num(2.0), Value::Cat(1)]);
    }

    #[test]
    fn missing_value_names_row_and_column() {
        match parse("x,c\n1,A\n,B\n").unwrap_err() {
            Error::MissingValue { row, column } => {
                assert_eq!(row, 2);
                assert_eq!(column, "x");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn blank_lines_are_not_skipped() {
        let one = Arc::new(Schema::new(vec![FeatureSpec::numeric("x", 0.0, 10.0)]).unwrap());
        let read1 = |t: &str| read_csv(t.as_bytes(), one.clone());
        assert_eq!(read1("x\n1\n2").unwrap().len(), 2);
        assert_eq!(read1("x\r\n1\r\n2\r\n").unwrap().len(), 2);
        assert!(matches!(
            read1("x\n1\n\n2\n").unwrap_err(),
            Error::MissingValue { row: 2, .. }
        ));
        assert!(matches!(
            read1("x\n\n1\n").unwrap_err(),
            Error::MissingValue { row: 1, .. }
        ));
        assert!(matches!(
            read1("x\r\n1\r\n\r\n").unwrap_err(),
            Error::MissingValue { row: 2, .. }
        ));
        assert!(matches!(
            parse("x,c\n1,A\n\n").unwrap_err(),
            Error::Malformed { row: Some(2), .. }
        ));
        assert_eq!(parse("x,c\r\n1,A\r\n2,\"B\"\r\n").unwrap().len(), 2);
    }

    #[test]
    fn unknown_category_is_rejected() {
        assert!(matches!(
            parse("x,c\n1,Z\n").unwrap_err(),
            Error::UnknownCategory { ref value, .. } if value == "Z"
        ));
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(matches!(
            parse("x,c\n1,A,3\n").unwrap_err(),
            Error::Malformed { row: Some(1), .. }
        ));
        assert!(matches!(
            parse("x,c\nabc,A\n").unwrap_err(),
            Error::Malformed { .. }
        ));
        assert!(matches!(
            parse("x,c\nNaN,A\n").unwrap_err(),
            Error::Malformed { .. }
        ));
        assert!(matches!(
            parse("c,x\nA,1\n").unwrap_err(),
            Error::SchemaMismatch(_)
        ));
    }

    #[test]
    fn schema_json_round_trip_and_validation() {
        let json = r#"{"features":[{"name":"age","kind":"numeric","min":0,"max":99},
                       {"name":"sex","kind":"categorical","domain":["F","M"]}]}"#;
        let s = Schema::from_json(json).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(Schema::from_json(&s.to_json()).unwrap(), s);

        let dup = r#"{"features":[{"name":"a","kind":"categorical","domain":["x","x"]}]}"#;
        assert!(Schema::from_json(dup).is_err());
        let bad_range = r#"{"features":[{"name":"a","kind":"numeric","min":2,"max":1}]}"#;
        assert!(Schema::from_json(bad_range).is_err());
        let dup_name = r#"{"features":[{"name":"a","kind":"numeric","min":0,"max":1},
                           {"name":"a","kind":"numeric","min":0,"max":1}]}"#;
        assert!(Schema::from_json(dup_name).is_err());
    }

    #[test]
    fn infers_numeric_and_categorical_columns() {
        let s = infer_schema_from_reader("n,c,m\n1,A,1\n2,B,x\n3,A,2\n".as_bytes(), 1.0).unwrap();
        assert_eq!(
            s.feature(0).kind,
            FeatureKind::Numeric { min: 1.0, max: 3.0 }
        );
        assert_eq!(
            s.feature(1).kind,
            FeatureKind::Categorical {
                domain: vec!["A".into(), "B".into()]
            }
        );
        assert_eq!(
            s.feature(2).kind,
            FeatureKind::Categorical {
                domain: vec!["1".into(), "2".into(), "x".into()]
            }
        );
        // With a looser threshold the mixed column becomes numeric.
        let loose = infer_schema_from_reader("m\n1\nx\n2\n".as_bytes(), 0.5).unwrap();
        assert_eq!(
            loose.feature(0).kind,
            FeatureKind::Numeric { min: 1.0, max: 2.0 }
        );
    }

    fn ten_rows() -> Dataset {
        let text: String = std::iter::once("x,c\n".to_string())
            .chain((0..10).map(|i| format!("{i},{}\n", if i % 2 == 0 { "A" } else { "B" })))
            .collect();
        parse(&text).unwrap()
    }

    #[test]
    fn split_is_disjoint_covering_and_deterministic() {
        let d = ten_rows();
        let spec = SplitSpec {
            target_size: 4,
            holdout_size: 3,
            aux_size: 3,
            seed: 11,
        };
        let idx = spec.indices(d.len()).unwrap();
        let mut all: Vec<usize> = idx
            .target
            .iter()
            .chain(&idx.holdout)
            .chain(&idx.aux)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        let (t, h, a) = split(&d, &spec).unwrap();
        assert_eq!((t.len(), h.len(), a.len()), (4, 3, 3));
        assert_eq!(
            (t.role(), h.role(), a.role()),
            (Role::Target, Role::Holdout, Role::Aux)
        );
        assert_eq!(split(&d, &spec).unwrap(), (t, h, a));
    }

    #[test]
    fn split_seed_changes_assignment() {
        let d = ten_rows();
        let a = SplitSpec {
            target_size: 4,
            holdout_size: 3,
            aux_size: 3,
            seed: 1,
        };
        let b = SplitSpec { seed: 2, ..a };
        let (ta, _, _) = split(&d, &a).unwrap();
        let (tb, _, _) = split(&d, &b).unwrap();
        let key = |ds: &Dataset| {
            let mut v: Vec<_> = ds.rows().iter().map(|r| r.key()).collect();
            v.sort();
            v
        };
        assert_ne!(key(&ta), key(&tb));
    }

    #[test]
    fn split_rejects_oversized_request() {
        let spec = SplitSpec {
            target_size: 6,
            holdout_size: 3,
            aux_size: 3,
            seed: 0,
        };
        assert!(matches!(
            split(&ten_rows(), &spec).unwrap_err(),
            Error::InsufficientRows {
                needed: 12,
                available: 10
            }
        ));
    }

    #[test]
    fn replace_record_copies() {
        let d = parse("x,c\n1,A\n2,B\n").unwrap();
        let r = Record::new(vec![Value::Num(9.0), Value::Cat(1)]);
        let e = replace_record(&d, 0, r.clone()).unwrap();
        assert_eq!(e.row(0), &r);
        assert_eq!(e.row(1), d.row(1));
        assert_eq!(d.row(0).values()[0], Value::Num(1.0));
        assert!(matches!(
            replace_record(&d, 2, r).unwrap_err(),
            Error::IndexOutOfRange { index: 2, len: 2 }
        ));
        assert_eq!(replace_record(&d, 1, d.row(1).clone()).unwrap(), d);
    }
}
