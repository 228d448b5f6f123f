//! Finite colored, labeled action graphs.

mod defect;
mod finite;
mod io;
mod label;
mod recolor;
mod word;

pub use defect::{nontrivial_words, sofic_defect, SoficDefectReport};
pub use finite::FiniteAction;
pub use io::{parse_action, write_action};
pub use label::LabelWord;
pub(crate) use label::packed_to_string;
pub use recolor::recolor_to_involutions;
pub use word::{EnumeratedWord, GeneratorWord, Letter, Mode, WordEnumeration};
