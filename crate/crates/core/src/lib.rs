//! Subtyping for session types, decided three independent ways:
//!
//! * [`charform`]: generate the characteristic formula of one type and
//!   model-check it against the transition system of the other;
//! * [`gh`]: the coinductive inference rules with explicit unfolding and a
//!   context of visited pairs;
//! * [`kps`]: emptiness of the product of two term automata.
//!
//! Around these sit [`safety`] checking for binary systems, seeded
//! [`generator`]s for benchmark families, the recursive [`lambda`]-type
//! instance of the formula construction, and a timing [`harness`].

pub mod budget;
pub mod charform;
pub mod exec;
pub mod generator;
pub mod gh;
pub mod harness;
pub mod kps;
pub mod lambda;
pub mod mu;
pub mod safety;
pub mod types;

pub use budget::{Budget, BudgetExceeded};
pub use exec::Execution;
pub use types::{parse_type, print_type, SessionType};
