//! Analogical-proportion reasoning over Boolean and nominal tables.
//!
//! * [`ap`] checks and solves `a : b :: c : d` on values and tuples.
//! * [`classifier`] votes over triplets, mines competent pairs, resolves
//!   conflicting pairs as Bongard problems, and evaluates by cross-validation.
//! * [`explainer`] answers why / why-not questions from adverse examples.
//! * [`dependencies`] checks functional, multivalued and weak multivalued
//!   dependencies and relates them to analogical proportions.
//! * [`io`] and [`generate`] load, write and synthesize tables.

pub mod ap;
pub mod classifier;
pub mod dataset;
pub mod dependencies;
pub mod error;
pub mod explainer;
pub mod generate;
pub mod io;
pub mod schema;

pub use ap::{ap_holds, ap_holds_vec, diff, inverse_paralogy, solve, solve_vec, DiffEntry, DiffVector};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use schema::{Attribute, Code, Domain, Item, Schema, Value};
