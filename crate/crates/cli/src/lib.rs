//! Pipeline and serialization behind the `quadclass` binary: triple records,
//! the staged search, and CSV/JSON emission.

pub mod record;
pub mod search;
pub mod tables_io;

pub use record::{evaluate_triple, PredictionDepth, Status, TripleRecord};
pub use search::{run_search, SearchConfig};
