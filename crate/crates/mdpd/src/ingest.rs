//! Whitespace-separated label and truth files.
//!
//! A label file holds one `item worker label` triple per line and a truth
//! file one `item label` pair per line. Tokens are arbitrary strings without
//! whitespace or `#`; everything from a `#` to the end of the line is a
//! comment, and blank lines are skipped. Items, workers and labels are
//! numbered from 0 in order of first appearance, unless an explicit class
//! list fixes the label order.

use std::collections::HashMap;
use std::path::Path;

use mdpd_core::{GroundTruth, LabelMatrix, Observation};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("no entries")]
    NoEntries,
    #[error("line {line}: expected {expected} tokens, found {found}")]
    Malformed { line: usize, expected: usize, found: usize },
    #[error("line {line}: item `{item}` already has a label from worker `{worker}` (line {first})")]
    Duplicate { line: usize, first: usize, item: String, worker: String },
    #[error("line {line}: label `{token}` exceeds the {declared} declared classes")]
    TooManyLabels { line: usize, token: String, declared: usize },
    #[error("line {line}: unknown label `{token}`")]
    UnknownLabel { line: usize, token: String },
    #[error("line {line}: unknown item `{token}`")]
    UnknownItem { line: usize, token: String },
    #[error("line {line}: item `{item}` already has a true label")]
    DuplicateTruth { line: usize, item: String },
    #[error("class `{0}` listed twice")]
    DuplicateClass(String),
    #[error("id `{0}` cannot be written to a label file")]
    InvalidId(String),
    #[error("{0}")]
    Options(String),
    #[error(transparent)]
    Core(#[from] mdpd_core::Error),
}

type Result<T> = std::result::Result<T, IngestError>;

/// Dense numbering of string ids in order of first appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl IdMap {
    /// Fails if a name repeats.
    pub fn from_names<I, S>(names: I) -> std::result::Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut map = IdMap::default();
        for name in names {
            let name = name.into();
            if map.index.contains_key(&name) {
                return Err(name);
            }
            map.intern(&name);
        }
        Ok(map)
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Label tokens in class order. Tokens outside the list are rejected.
    pub classes: Option<Vec<String>>,
    /// Declared number of classes C. Defaults to the class list length, or
    /// to the number of distinct labels seen.
    pub n_classes: Option<usize>,
}

/// A label matrix together with the ids it was read with.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    matrix: LabelMatrix,
    items: IdMap,
    workers: IdMap,
    labels: IdMap,
}

impl Dataset {
    /// Pairs a matrix with id maps covering its items, workers and used labels.
    pub fn new(matrix: LabelMatrix, items: IdMap, workers: IdMap, labels: IdMap) -> Result<Self> {
        let max_label = matrix.entries().iter().map(|o| o.label + 1).max().unwrap_or(0);
        if items.len() != matrix.n_items() || workers.len() != matrix.n_workers() || labels.len() < max_label {
            return Err(IngestError::Options("id maps do not match the label matrix".into()));
        }
        if labels.len() > matrix.n_classes() {
            return Err(IngestError::Options("more label names than classes".into()));
        }
        for name in items.names().iter().chain(workers.names()).chain(labels.names()) {
            if name.is_empty() || name.contains('#') || name.contains(char::is_whitespace) {
                return Err(IngestError::InvalidId(name.clone()));
            }
        }
        Ok(Self { matrix, items, workers, labels })
    }

    pub fn matrix(&self) -> &LabelMatrix {
        &self.matrix
    }

    pub fn items(&self) -> &IdMap {
        &self.items
    }

    pub fn workers(&self) -> &IdMap {
        &self.workers
    }

    pub fn labels(&self) -> &IdMap {
        &self.labels
    }
}

/// Tokens of a line with the comment stripped.
fn tokens(line: &str) -> Vec<&str> {
    line.split('#').next().unwrap_or("").split_whitespace().collect()
}

pub fn parse_labels(text: &str, options: &ParseOptions) -> Result<Dataset> {
    let fixed = match &options.classes {
        Some(list) => Some(IdMap::from_names(list.iter().cloned()).map_err(IngestError::DuplicateClass)?),
        None => None,
    };
    let declared = match (&fixed, options.n_classes) {
        (Some(list), Some(c)) if list.len() != c => {
            return Err(IngestError::Options(format!("{} classes listed but C = {c} declared", list.len())))
        }
        (Some(list), _) => Some(list.len()),
        (None, c) => c,
    };
    if declared == Some(0) {
        return Err(IngestError::Options("C must be at least 1".into()));
    }

    let mut labels = fixed.clone().unwrap_or_default();
    let mut items = IdMap::default();
    let mut workers = IdMap::default();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut observations = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        if t.is_empty() {
            continue;
        }
        if t.len() != 3 {
            return Err(IngestError::Malformed { line, expected: 3, found: t.len() });
        }
        let label = match (labels.get(t[2]), &fixed) {
            (Some(l), _) => l,
            (None, Some(_)) => return Err(IngestError::UnknownLabel { line, token: t[2].into() }),
            (None, None) => {
                if declared.is_some_and(|c| labels.len() >= c) {
                    return Err(IngestError::TooManyLabels { line, token: t[2].into(), declared: declared.unwrap() });
                }
                labels.intern(t[2])
            }
        };
        let item = items.intern(t[0]);
        let worker = workers.intern(t[1]);
        if let Some(&first) = seen.get(&(item, worker)) {
            return Err(IngestError::Duplicate { line, first, item: t[0].into(), worker: t[1].into() });
        }
        seen.insert((item, worker), line);
        observations.push(Observation { item, worker, label });
    }
    if observations.is_empty() {
        return Err(IngestError::NoEntries);
    }

    let n_classes = declared.unwrap_or(labels.len());
    let matrix = LabelMatrix::new(items.len(), workers.len(), n_classes, observations)?;
    Ok(Dataset { matrix, items, workers, labels })
}

/// Truth for the items of `dataset`; items may be left out.
pub fn parse_ground_truth(text: &str, dataset: &Dataset) -> Result<GroundTruth> {
    let mut pairs = Vec::new();
    let mut seen = vec![false; dataset.items.len()];
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = tokens(raw);
        if t.is_empty() {
            continue;
        }
        if t.len() != 2 {
            return Err(IngestError::Malformed { line, expected: 2, found: t.len() });
        }
        let item = dataset.items.get(t[0]).ok_or_else(|| IngestError::UnknownItem { line, token: t[0].into() })?;
        let label = dataset.labels.get(t[1]).ok_or_else(|| IngestError::UnknownLabel { line, token: t[1].into() })?;
        if std::mem::replace(&mut seen[item], true) {
            return Err(IngestError::DuplicateTruth { line, item: t[0].into() });
        }
        pairs.push((item, label));
    }
    Ok(GroundTruth::new(dataset.items.len(), dataset.matrix.n_classes(), pairs)?)
}

/// Label file text, one line per observation in the order they were read.
pub fn write_labels(dataset: &Dataset) -> String {
    let mut out = String::new();
    for o in dataset.matrix.entries() {
        out.push_str(dataset.items.name(o.item));
        out.push(' ');
        out.push_str(dataset.workers.name(o.worker));
        out.push(' ');
        out.push_str(dataset.labels.name(o.label));
        out.push('\n');
    }
    out
}

/// Truth file text in item order.
pub fn write_ground_truth(dataset: &Dataset, truth: &GroundTruth) -> String {
    let mut out = String::new();
    for (item, label) in truth.iter() {
        out.push_str(dataset.items.name(item));
        out.push(' ');
        out.push_str(dataset.labels.name(label));
        out.push('\n');
    }
    out
}

pub fn read_labels(path: &Path, options: &ParseOptions) -> crate::Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
    parse_labels(&text, options).map_err(|e| with_path(path, e))
}

pub fn read_ground_truth(path: &Path, dataset: &Dataset) -> crate::Result<GroundTruth> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
    parse_ground_truth(&text, dataset).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: IngestError) -> crate::Error {
    crate::Error::Usage(format!("{}: {e}", path.display()))
}
