//! Measurements of estimation error, variance envelopes, stationarity bounds
//! and `Σ‖z_i‖` growth along optimizer trajectories.

mod bounds;
mod closed_form;
mod envelope;
mod growth;
mod record;
pub mod stats;

pub use bounds::{
    theorem1_bound_check, theorem2_metric, theorem2_premise, Theorem1Inputs, Theorem1Report,
    Theorem2Metric,
};
pub use closed_form::{closed_form_z, zeta_weights};
pub use envelope::{
    lemma1_envelope_check, quadratic_recursion_check, EnvelopePoint, EnvelopeReport,
    RecursionPoint, RecursionReport, LEMMA1_C, MIN_ENVELOPE_SEEDS,
};
pub use growth::{fit_growth_exponent, growth_curve, GrowthCurve, MIN_FIT_LEN};
pub use record::{record_iteration, IterationRecord};

use crate::error::{Error, Result};

/// Checks that every trajectory is non-empty and has the same length.
pub(crate) fn common_length<T>(trajectories: &[Vec<T>]) -> Result<usize> {
    let first = trajectories.first().ok_or(Error::EmptyTrajectory)?;
    let len = first.len();
    if len == 0 {
        return Err(Error::EmptyTrajectory);
    }
    for (index, t) in trajectories.iter().enumerate() {
        if t.len() != len {
            return Err(Error::MismatchedTrajectories {
                index,
                expected: len,
                found: t.len(),
            });
        }
    }
    Ok(len)
}
