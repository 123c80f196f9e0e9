//! Coherent-state relations: amplitudes, relation sizes and probabilities for
//! SU(2) and Weyl-Heisenberg coherent states, two-mode squeezing, generalized
//! Bell states, a relational hidden-variable sampler, and a truncated
//! Fock-space oracle for checking the closed forms.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod error;
pub mod fock;
pub mod group;
pub mod hv;
pub mod oracle_check;
pub mod registry;
pub mod relation;
pub mod squeeze;
pub mod su2;
pub mod wh;

pub use error::{Error, Result};
