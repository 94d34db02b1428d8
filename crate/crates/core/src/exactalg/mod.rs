//! Exact arithmetic: integer polynomials, cyclotomic integers, truncated Laurent series
//! and y-linear polynomials modulo the cubic relation.

pub mod cyclo;
pub mod poly;
pub mod series;
pub mod ylinear;

pub use cyclo::{cyc_to_int, cyclotomic_poly, totient, CycInt};
pub use poly::IntPoly;
pub use series::{series_arith, series_reindex, Coef, CycSeries, QSeries, SeriesOp, ZSeries};
pub use ylinear::{ylinear_mul, Cubic, YLinearPoly};
