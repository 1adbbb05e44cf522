//! Problem families as validatable instance/solution streams, plus seeded
//! generators that attach hidden certificates for honest desk-scale solving.

mod gen;
mod poset;
mod streams;
mod validate;

pub use gen::{
    gen_certified_instance, BaseKind, Certificate, CertificateSummary, CertifiedInstance,
    Fixture, GenParams, InstancePayload, OrtFamily, ProblemTag, StaircaseSchedule,
};
pub use poset::{linear_extension, FinitePoset};
pub use streams::{
    ColoringStream, DescendingStream, EnumerationStream, MonotoneNatStream, OrderedItem,
    UnaryColorStream, WitnessStream,
};
pub use validate::{
    validate_certificate, validate_descending, validate_right_ordered, validate_solution_prefix,
    SolutionPrefix, ValidationReport, ValidationVerdict, ViolationSite,
};
