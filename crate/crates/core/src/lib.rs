//! Coherence measures of quantum states and the cohering and decohering
//! powers of quantum channels.
//!
//! Powers are suprema over state spaces; they are estimated by seeded
//! multi-start optimization and every reported value is attained by an
//! explicit input state, paired with the analytic upper bound that applies.

pub mod cli;
pub mod coherence;
pub mod error;
pub mod optimizer;
pub mod powers;
pub mod quantum;
pub mod random;
pub mod verify;
pub mod zoo;

pub use coherence::{c_l1, c_rel_entropy, coherence, CoherenceMeasure, QIDecomposition};
pub use error::{Error, Result};
pub use optimizer::{OptimizationOutcome, OptimizerConfig, StateParameterization};
pub use powers::{PowerKind, PowerReport};
pub use quantum::{DensityMatrix, ExtendedReal, KrausChannel, PureState};
pub use zoo::ChannelSpec;
