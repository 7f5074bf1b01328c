//! Exact arithmetic kernels and averaging pipelines for murmuration
//! experiments over modular forms, class numbers, L-values and binary
//! quadratic forms.

pub mod arith;
pub mod quadforms;
pub mod traces;
pub mod ingest;
pub mod experiments;

pub use arith::{ArithError, DiscriminantClass, FactorTable, Factorization, XiPolicy};
pub use experiments::{
    Diagnostics, Exact, ExperimentConfig, ExperimentError, Family, LevelFilter, Series, SeriesPoint, SurdSum,
};
pub use ingest::{CurveRecord, Dataset, IngestError, NewformRecord, SignPattern};
pub use quadforms::{HurwitzTable, Twelfths};
pub use traces::{TraceContext, TraceError};
