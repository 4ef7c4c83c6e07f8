//! Exact computation and verification of Lubbock-type subdivided summation
//! coefficients, and a numeric engine that applies them.
//!
//! The coefficient families Λ, P and Q are polynomials in the subdivision
//! parameter `m` (stored `m`-scaled), computed as generalized Bernoulli
//! polynomials and cross-checked against formal power series, factorial sums
//! and recursions.

pub mod exactmath;
pub mod series;
pub mod bernoulli;
pub mod operators;
pub mod lubbock;
pub mod identities;
pub mod verify;
pub mod summation;
pub mod expr;

pub use bernoulli::{gen_bernoulli, n1_residue, BernoulliError, DegreeVector};
pub use exactmath::{int, parse_rational, rat, PolyM, Rational, Ring};
pub use expr::{parse_expr, EvalError, Expr, ParseError};
pub use identities::{Quantity, VerificationCase};
pub use lubbock::{coeff, table, CoeffEntry, CoeffTable, CrossCheckReport, Route, TableFamily};
pub use operators::{DeltaOperator, Family, OperatorError};
pub use series::{Series, SeriesError};
pub use summation::{SampleTable, SummationError, SummationRequest, SummationResult, Variant};
pub use verify::{Report, Suite, VerifyOptions};
