//! Empirical fairness quantities over aligned evaluation data.

mod distance;
mod estimate;

pub use distance::{
    input_distance, outcome_distance, FeatureStats, InputSpace, PairDistances,
    MATRIX_DUPLICATE_TOLERANCE,
};
pub use estimate::{
    audit_profiles, estimate_epsilon, estimate_if_slack, estimate_lipschitz,
    max_qualifying_gap, statistical_parity_gap, statistical_parity_gap_over, EpsilonEstimate,
    GroupTable, IfSlackEstimate, LipschitzFit, PairExtremum, ParityEvent, ParityGap,
};
