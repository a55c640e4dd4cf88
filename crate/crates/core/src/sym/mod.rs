//! Exact algebra in `K[u_1^±, …, u_n^±]`, `K = ℚ(i)(z)`.

pub mod basis;
pub mod derivation;
pub mod gcd;
pub mod jacobian;
pub mod laurent;
pub(crate) mod mpoly;
pub mod numeric;
pub mod ratfunc;
pub mod roots;
pub mod scalar;
pub mod separate;
pub mod serial;
pub mod ypoly;
pub mod zpoly;

pub use basis::{frequency_independence, Independence, UnitBasis};
pub use derivation::{critical_pair, derivation_du, CriticalPair};
pub use gcd::{is_squarefree, laurent_gcd, squarefree_decompose, SquareFree};
pub use jacobian::{euler_identity, jacobian_det};
pub use laurent::{LaurentPoly, Monomial};
pub use ratfunc::RatFunc;
pub use roots::{extract_exp_poly_roots, ratfunc_roots, ExtractedRoot};
pub use scalar::GaussRat;
pub use separate::{monomial_shape_check, separate_variable, SeparationResult, ShapeCheck};
pub use ypoly::{discriminant, resultant, resultant_in, MonicYPoly};
pub use zpoly::ZPoly;
