//! Exact computations around Saito-Kurokawa lifts.
//!
//! * [`arith`]: factorization, Kronecker symbols, root counts.
//! * [`qform`]: binary quadratic forms, `Gamma^0(N)`-equivalence and class
//!   enumeration.
//! * [`rayclass`]: ray class group orders.
//! * [`bessel`]: symbolic local Bessel values of type IIb and the product
//!   identity behind the Maass relations at higher level.
//! * [`sklift`]: the Igusa cusp form from theta constants, Fourier
//!   coefficient tables and the Maass relation checkers.

pub mod arith;
pub mod bessel;
pub mod qform;
pub mod rayclass;
pub mod sklift;

pub use qform::{ClassSet, QForm, UnimodularMatrix};
pub use sklift::table::FourierTable;
