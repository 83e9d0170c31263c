pub mod analytic;
pub mod element;
pub mod ensemble;
pub mod pipeline;
pub mod visibility;

pub use analytic::{analytic_double_slit, analytic_single_slit, sinc};
pub use element::{apply_element, ElementOutcome, OpticalElement};
pub use ensemble::{
    coincidence_pattern, singles_pattern, CoincidencePattern, Mode, PropagatedBranch, PropagatedEnsemble,
};
pub use pipeline::{run_pipeline, screen_field, Pipeline, PipelineResult, Regime};
pub use visibility::visibility;
