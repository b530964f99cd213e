pub mod budget;
pub mod clm;
pub mod contraction;
pub mod error;
pub mod field;
pub mod grid;
pub mod hyperterm;
pub mod json;
pub mod linalg;
pub mod modp;
pub mod ore;
pub mod poly;
pub mod ratfun;
pub mod surfaces;

pub use budget::Budget;
pub use error::{Error, Result};
pub use field::{Field, Rat};
pub use grid::{Cell, Components, Format, SurfaceGrid};
pub use ore::{parse_operator, AlgebraKind, OreCoeff, OreField, OrePoly, Shape};
pub use poly::{parse_poly, Degree, MPoly, Monomial, Var};
pub use ratfun::RatFun;

/// Polynomial in `x, y, k` over the rationals.
pub type Poly = MPoly<Rat>;
/// Rational function in `x, y, k` over the rationals.
pub type RatPoly = RatFun<Rat>;
/// Operator with polynomial coefficients.
pub type PolyOp = OrePoly<Poly>;
/// Operator with rational-function coefficients.
pub type RatOp = OrePoly<RatPoly>;
