// NaN must fail these checks, so `!(x <= tol)` is intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod automorph;
pub mod cli;
pub mod domains;
pub mod error;
pub mod exact;
pub mod polyroot;
pub mod propermaps;
pub mod symmetric;
