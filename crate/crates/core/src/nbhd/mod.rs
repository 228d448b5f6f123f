//! Neighborhood types, their statistics and distances.

mod code;
mod distance;
mod iso;
mod stats;

pub use code::{
    code_with, neighborhood_code, neighborhood_code_with, restrict_type, BallModel, NeighborhoodType, Walk,
    OUTSIDE,
};
pub use distance::{statistical_distance, TypeOrdering};
pub use iso::{iso_bruteforce, BallGraph, ISO_MAX_VERTICES};
pub use stats::{pair_stats, stat_vector, stat_vector_with, vertex_types, PairKey, PairStatVector, StatVector};
