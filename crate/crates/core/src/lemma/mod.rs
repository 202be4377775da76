//! Machine checking of local lemmas by exhaustive search over windows.

pub mod engine;
pub mod expr;
pub mod scenario;
pub mod suite;
pub mod window;

pub use engine::{
    forced_cells, search, Compiled, Forced, ForcedMap, ForcedOutcome, SearchConfig, SearchOutcome, Verdict,
    DEFAULT_BUDGET,
};
pub use expr::{Cmp, Expr, FrameSet, Pos};
pub use scenario::{all_bundled, bundled, bundled_ids, Figure, Fixed, Scenario, ScenarioError, WindowSpec};
pub use suite::{check_scenario, run_suite, ScenarioReport, SuiteReport, VariantReport};
pub use window::{CellState, TriStateWindow, WindowError};
