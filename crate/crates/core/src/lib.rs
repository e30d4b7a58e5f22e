//! Identifiability games for formal and probabilistic languages, Angluin
//! tell-tale sets, and growth and compute-cost analytics for model
//! ecosystems.

pub mod cost;
pub mod ecosystem;
pub mod error;
pub mod game;
pub mod growth;
pub mod lang;
pub mod problang;
pub mod telltale;

pub use ecosystem::{AssetRecord, CumulativeSeries, Snapshot, YearMonth};
pub use error::{Error, Result};
pub use game::{Learner, SimulationReport, Teacher};
pub use growth::{ExpFit, GrowthPoint, Window};
pub use lang::{Alphabet, Dfa, Language, LanguageFamily, LanguageKind, Sample};
pub use problang::{Prob, ProbLanguage};
pub use telltale::{AngluinViolation, TellTaleAssignment};
