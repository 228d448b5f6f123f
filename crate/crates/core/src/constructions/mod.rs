//! Builders of finite models: profinite quotients, Bernoulli labelings,
//! treeable involution models, and generator extensions by word rules.

mod bernoulli;
mod cycles;
mod oe;
mod profinite;
mod round;
mod target;
mod treeable;

pub use bernoulli::{bernoulli_labeling, bernoulli_target, default_word_table, BERNOULLI_MAX_CELLS};
pub use cycles::cycle_ratio;
pub use oe::{oe_add_generator, OEReport, WordRule};
pub use profinite::{build_profinite, Labeling, Preset};
pub use round::{rational_round, rational_round_stats, RationalSolution};
pub use target::{target_stats_free_involutions, TARGET_MAX_BITS};
pub use treeable::{build_treeable, TreeableModel};
