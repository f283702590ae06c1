#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod criteria;
pub mod error;
pub mod espace;
pub mod interp;
pub mod krein;
pub mod majorant;
pub mod numeric;
pub mod par;
pub mod schema;
pub mod weight;

pub use error::{Error, Result};
