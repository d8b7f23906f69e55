//! On-disk formats: evaluation CSVs, pair-distance CSVs and the JSON config.

mod align;
mod config;
mod evaluations;
mod pair_distances;

pub use align::{align_pairs, AlignMode, Alignment};
pub use config::{load_config, parse_config_str, AuditConfig, PathsConfig};
pub use evaluations::{format_decimal, parse_evaluations, parse_evaluations_str, write_evaluations, EvaluationSet};
pub use pair_distances::{parse_pair_distances, parse_pair_distances_str, write_pair_distances};
