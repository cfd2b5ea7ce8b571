//! Exact tropical geometry toolkit: polyhedral complexes with integral
//! structure, parameterized tropical curves, strata of their moduli, and
//! families of curves over polyhedral bases.

pub mod family;
pub mod io;
pub mod linalg;
pub mod moduli;
pub mod polyhedral;
pub mod report;
pub mod tropcurve;
