//! Exact algebra for truncated algebraic power series.

pub mod algnum;
pub mod bounds;
pub mod division;
pub mod error;
pub mod exact_arith;
pub mod gapscan;
pub mod localalg;
pub mod monorder;
pub mod polyseries;
pub mod text;

pub use error::{Error, Result};
pub use exact_arith::{rat, Field, ParamRational, Rational};
pub use monorder::{OrderSpec, RegionPartition};
pub use polyseries::{Exponent, Jet, Order, Poly, VectorJet, EXACT};

pub type QPoly = Poly<Rational>;
pub type QJet = Jet<Rational>;
pub type ParamPoly = Poly<ParamRational>;
pub type ParamJet = Jet<ParamRational>;
