//! Candidate self-equivalence tuples `(B, A)` of prime order, up to
//! extended power-similarity.

mod reference;
mod tuples;

pub use reference::{
    blocks_to_matrix, reference_classes, reference_table, PublishedVerdict, ReferenceClass,
    ReferenceDimension, ReferenceTable,
};
pub use tuples::{
    enumerate_classes, enumerate_degenerate_classes, extended_power_similar, match_paper_class,
    power_similar, prime_order_rcfs, prime_orders, AutoTuple, ClassRecord, ClassesFile,
    CLASSES_SCHEMA,
};
