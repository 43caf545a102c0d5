use core::fmt;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A label matrix with no observations.
    NoEntries,
    /// A class index outside `0..n_classes`.
    LabelOutOfRange {
        label: usize,
        n_classes: usize,
    },
    /// An item or worker index outside the matrix dimensions.
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    /// Two observations for the same (item, worker) pair.
    DuplicateObservation {
        item: usize,
        worker: usize,
    },
    TooManyClasses(usize),
    /// A pairwise statistic was requested for a worker with itself.
    SameWorker(usize),
    TooFewWorkers {
        required: usize,
        found: usize,
    },
    /// A requested subset size L outside `1..=n_workers`.
    SubsetSize {
        requested: usize,
        n_workers: usize,
    },
    EmptySubset,
    DuplicateWorker(usize),
    EmptyTruth,
    /// More mixture components than items.
    TooManyComponents {
        components: usize,
        items: usize,
    },
    InvalidParameter(&'static str),
    /// Shapes of two inputs disagree.
    ShapeMismatch {
        expected: usize,
        found: usize,
    },
    /// A non-finite value appeared during fitting.
    NumericalFailure(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoEntries => write!(f, "no entries"),
            Error::LabelOutOfRange { label, n_classes } => {
                write!(f, "label {label} outside 0..{n_classes}")
            }
            Error::IndexOutOfRange { what, index, len } => {
                write!(f, "{what} index {index} outside 0..{len}")
            }
            Error::DuplicateObservation { item, worker } => {
                write!(f, "duplicate label for item {item}, worker {worker}")
            }
            Error::TooManyClasses(c) => write!(f, "{c} classes exceeds the supported maximum"),
            Error::SameWorker(i) => write!(f, "pairwise statistic requested for worker {i} with itself"),
            Error::TooFewWorkers { required, found } => {
                write!(f, "need at least {required} workers, found {found}")
            }
            Error::SubsetSize { requested, n_workers } => {
                write!(f, "subset size {requested} outside 1..={n_workers}")
            }
            Error::EmptySubset => write!(f, "empty worker subset"),
            Error::DuplicateWorker(w) => write!(f, "worker {w} appears twice in subset"),
            Error::EmptyTruth => write!(f, "ground truth covers no items"),
            Error::TooManyComponents { components, items } => {
                write!(f, "{components} components for only {items} items")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {expected}, found {found}")
            }
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
