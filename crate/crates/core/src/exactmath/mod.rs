//! Exact arithmetic: rationals, homogeneous polynomials, linear algebra,
//! truncated power series and resultants.

pub mod linalg;
pub mod poly;
pub mod rat;
pub mod resultant;
pub mod series;

pub use linalg::{rat_linear_solve, Echelon};
pub use poly::{graded_monomials, normal_form, Exponent, HomogPoly, Reducer};
pub use rat::{format_rat, int, parse_rat, rat, Rat};
pub use series::{series_solve_branch, Branch, LocalChart, PowerSeries, PRECISION_CAP};
