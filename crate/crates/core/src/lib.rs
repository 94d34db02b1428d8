//! Singular invariants of the genus-one Hauptmodul pairs `x_N, y_N` for the groups
//! `Gamma0(N)+`: modular polynomials, generating polynomials, CM values and
//! ring class polynomials.

pub mod arith;
pub mod classfield;
pub mod cmeval;
pub mod curvedata;
pub mod error;
pub mod exactalg;
pub mod fixtures;
pub mod genpoly;
pub mod modpoly;
pub mod quadforms;

pub use curvedata::{CurveRecord, LevelRegistry};
pub use error::{Error, Result};
pub use exactalg::{Cubic, CycInt, IntPoly, QSeries, YLinearPoly, ZSeries};
