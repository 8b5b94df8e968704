//! First level crossing time of a compound renewal process.
//!
//! With renewal gaps `T`, jumps `Y` and `V(s)` the sum of the jumps up to
//! time `s`, the crossing time is `Υ = inf{s : V(s) - cs > u}`. The crate
//! evaluates `P{v < Υ ≤ t | T₁ = v}` three ways:
//!
//! * inverse-Gaussian approximations, the main term and a corrected
//!   expansion ([`approx`], constants in [`moments`]);
//! * an exact Bessel-function formula when `T` and `Y` are Exponential
//!   ([`exact`]);
//! * Monte Carlo simulation on a reproducible LCG stream ([`sim`]).
//!
//! ```
//! use fpt::{approx, moments, CrossingQuery, DistributionSpec};
//!
//! let t: DistributionSpec = "erlang:1.2,2".parse().unwrap();
//! let y: DistributionSpec = "erlang:1,2".parse().unwrap();
//! let k = moments::model_constants(&t, &y).unwrap();
//! let q = CrossingQuery::new(40.0, 1.0, 0.0, 1000.0).unwrap();
//! let r = approx::corrected(&q, &k);
//! assert!(r.main > 0.0 && r.main < 1.0);
//! ```

pub mod approx;
pub mod distributions;
pub mod error;
pub mod exact;
pub mod job;
pub mod moments;
pub mod plot;
pub mod quad;
pub mod report;
pub mod rng;
pub mod sim;
pub mod specfun;

pub use approx::{ApproxResult, CrossingQuery};
pub use distributions::{DistributionSpec, MomentSet};
pub use error::{Error, Result};
pub use exact::ExpExpModel;
pub use moments::ModelConstants;
pub use report::{Method, SweepResult};
pub use rng::RngState;
pub use sim::{SimEstimate, SweepGrid};
