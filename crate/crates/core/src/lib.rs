//! A workbench for finite Wm-groups.

pub mod axioms;
pub mod catalog;
pub mod check;
pub mod enumerate;
pub mod error;
pub mod homs;
pub mod props;
pub mod subgroups;
pub mod table;

pub use axioms::{
    verify, verify_with, Axiom, Axiom4, AxiomReport, AxiomViolation, Semantics, WitnessPolicy,
    WmStructure,
};
pub use catalog::Instance;
pub use check::Check;
pub use enumerate::{enumerate_wm_groups, enumerate_wm_groups_with, EnumerationOptions, EnumerationResult};
pub use error::{Result, WmError};
pub use homs::{are_isomorphic, canonical_form, CanonicalForm, HomMap};
pub use subgroups::SubSet;
pub use table::{CayleyTable, Element};
