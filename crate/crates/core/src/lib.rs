//! Exact reduction of hypergeometric and central-binomial series to
//! constants of level 1, 2 and 4, with an independent numeric referee.

pub mod atom;
pub mod atoms;
pub mod basetable;
pub mod ball;
pub mod closedform;
pub mod db;
pub mod coeff;
pub mod error;
pub mod exact;
pub mod fitter;
pub mod fl;
pub mod gamma;
pub mod oracle;
pub mod parser;
pub mod pfrac;
pub mod poly;
pub mod reducer;
pub mod series;

pub use atom::{Atom, Part};
pub use closedform::{ClosedForm, Monomial};
pub use coeff::GaussianRational;
pub use error::{Error, Result};
pub use poly::{Poly, RatFunc};
pub use series::{BinomSpec, PfqSpec, SeriesSpec};
