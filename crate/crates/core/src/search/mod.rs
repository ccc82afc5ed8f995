//! Exhaustive search over small-coefficient correlation Bell expressions.

pub mod canonical;
pub mod enumerate;
pub mod scan;

pub use canonical::{canonical_entries, Coef};
pub use enumerate::{enumerate_classes, ClassRep, EnumerationConfig, EnumerationMode};
pub use scan::{
    canonical_key, scan_expressions, scan_for_witnesses, ScanConfig, ScanRecord, SearchHit,
};
