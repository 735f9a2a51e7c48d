//! Interaction-free measurement (IFM) treated as a quantum channel
//! discrimination problem.
//!
//! An interferometer interrogates a semitransparent object over `N` cycles,
//! each cycle rotating the probe photon by `θ = π/2N` and then letting the
//! object absorb the lower-arm amplitude. Detecting the object amounts to
//! discriminating the two N-cycle channels "object present" / "object
//! absent". This crate provides:
//!
//! - [`smallmat`]: dense complex small-matrix algebra (Kronecker products,
//!   partial traces, a Jacobi eigensolver, trace norms),
//! - [`channels`]: the Kraus channels of the interrogation cycle and their
//!   N-fold compositions, plus the generalized trace distance,
//! - [`transfer`]: the 2x2 pure-state transfer matrices and the analytic
//!   form of the N-cycle product,
//! - [`metrics`]: the loss probability, the minimum discrimination error,
//!   and the combined failure probability,
//! - [`optimal`]: closed-form optimal input states together with a
//!   brute-force grid oracle that certifies them,
//! - [`asymptotics`]: large-N expansions of the optimal loss rates.
//!
//! ```
//! use ifm_core::metrics::{self, InputState};
//! use ifm_core::{optimal, IfmParams};
//!
//! // 10 cycles against an object of transparency 0.25 (a = 0.5), present
//! // with probability 1/2.
//! let p = IfmParams::new(10, 0.5, 0.5)?;
//!
//! // The loss-optimal input, and the best input that still guarantees a
//! // perfect presence/absence call.
//! let floor = optimal::min_ploss(&p)?;
//! let safe = optimal::best_zero_error(&p)?;
//! assert!(floor.value <= safe.value);
//!
//! let input = InputState::Single(safe.state_old_basis.clone());
//! assert!(metrics::p_error(&input, &p) < 1e-10);
//! assert!((metrics::p_loss(&input, &p) - safe.value).abs() < 1e-12);
//! # Ok::<(), ifm_core::IfmError>(())
//! ```

pub mod asymptotics;
pub mod channels;
pub mod error;
pub mod metrics;
pub mod optimal;
pub mod smallmat;
pub mod transfer;

pub use channels::{DensityMatrix, IfmParams, KrausChannel};
pub use error::{IfmError, Result};
pub use metrics::{BipartitePureState, DiscriminationResult, InputState};
pub use optimal::{BlochVector, Objective, Optimum};
pub use smallmat::{ComplexMatrix, HermitianEigenResult};
pub use transfer::{PureState, Regime, TransferCoeffs, UnnormalizedVector};
