//! Numerical Nevanlinna theory for finite-order exponential polynomials:
//! certified zero finding in disks, counting, proximity and characteristic
//! functions, and numeric checks of the main inequalities.

pub mod checks;
pub mod counting;
pub mod exec;
pub mod function;
pub mod grid;
pub mod quad;
pub mod zeros;

use expoly_core::{ParseError, SymError};
use thiserror::Error;

pub use checks::{
    dpower_obstruction_check, first_main_check, gcd_smallness_check, logderiv_check, smt_moving_check,
    transversality_check, truncated_borel_check, CheckReport, CheckSettings,
};
pub use counting::{
    analyze, characteristic, characteristic_map, counting_function, pole_counting, gcd_counting, jensen_check, order_estimate,
    proximity_at, proximity_function, JensenReport, NevanlinnaSample,
};
pub use exec::ExecMode;
pub use function::ExpPolyFunction;
pub use grid::RGrid;
pub use zeros::{common_radius, zeros_in_disk, PoleRecord, ZeroOptions, ZeroRecord, ZeroSet};

#[derive(Clone, Debug, Error)]
pub enum NevError {
    #[error("quadrature did not converge ({intervals} intervals, error estimate {error:e})")]
    Quadrature { intervals: usize, error: f64 },
    #[error("contour integral {value} is not close to an integer")]
    NonIntegerWinding { value: String },
    #[error("winding number mismatch: contour gives {contour}, zeros found sum to {found}")]
    WindingMismatch { contour: i64, found: i64 },
    #[error("could not verify an isolating enclosure around {location}")]
    Enclosure { location: String },
    #[error("no radius clear of zeros found near r = {r}")]
    BoundaryNudge { r: f64 },
    #[error("quadtree exceeded depth {depth} near {location}")]
    DepthExceeded { depth: usize, location: String },
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("pole of a coefficient lies on the contour near {0}")]
    PoleOnContour(String),
    #[error("ambiguous zero pairing at {location}: {candidates} candidates within tolerance")]
    AmbiguousPairing { location: String, candidates: usize },
    #[error("degenerate radius grid: {0}")]
    DegenerateGrid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl NevError {
    /// Whether the error reports a violated mathematical precondition rather
    /// than a numerical or input failure.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            NevError::Precondition(_)
                | NevError::Sym(
                    SymError::Precondition(_)
                        | SymError::DependentBasis(_)
                        | SymError::HypothesisFailure(_)
                        | SymError::NotHomogeneous(_)
                        | SymError::MonomialInput
                )
        )
    }
}
