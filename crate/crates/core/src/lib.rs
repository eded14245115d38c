pub mod compare;
pub mod instruments;
pub mod par;
pub mod pipeline;
pub mod rdf;
pub mod stats;
pub mod study;
