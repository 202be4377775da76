//! Verification and search toolkit for (1,≤2)-identifying codes in the
//! king grid.
//!
//! * [`conditions`]: the local characterisation, densities, the diagonal
//!   construction.
//! * [`discharge`]: frame roles and the two discharging procedures, run
//!   with exact rational charges.
//! * [`lemma`]: exhaustive counterexample search over partially assigned
//!   windows, used to machine-check the structural lemmas.
//! * [`search`]: minimum valid codes on small tori by branch and bound.

pub mod bits;
pub mod conditions;
pub mod coord;
pub mod discharge;
pub mod frame;
pub mod lemma;
pub mod oracle;
pub mod parallel;
pub mod rational;
pub mod search;
pub mod torus;

pub use conditions::{
    check_conditions, density, diagonal_code, three_sevenths_code, frame_average, frame_count, is_valid, verify_code,
    ConditionCheck, SetKind, Verification, Violation,
};
pub use coord::{Coord, Symmetry};
pub use frame::{frame_cells, Frame, FrameStats};
pub use oracle::{identification_oracle, OracleResult};
pub use rational::{Rational, RationalJson};
pub use torus::{CodeError, ParseError, TorusCode};
