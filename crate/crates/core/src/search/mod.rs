//! Search machinery: enumeration, the parameter scan, the integer oracle,
//! cross-validation and checkpointed batch runs.

pub mod checkpoint;
pub mod crossval;
pub mod farey;
pub mod oracle;
pub mod rank;
pub mod scan;

pub use crossval::{cross_validate, cross_validate_records, CrossValidationReport};
pub use farey::{enumerate_rationals, farey_count, HeightOrderedRationals};
pub use oracle::{brute_force_cuboids, OracleRecord};
pub use rank::{near_miss_rank, squarefree_kernel, Kernel};
pub use scan::{scan_point, scan_uz, SearchRecord, Verdict};
