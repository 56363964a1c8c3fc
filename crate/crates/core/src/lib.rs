//! Recursive extensions of classical hypergeometric summation formulas.
//!
//! Ten recursion families generalize Gauss's second theorem, Kummer's theorem,
//! the Srivastava z=2 sum, and the Pfaff-Saalschutz, Dixon, Watson and Bailey
//! sums at unit argument. Each family is a sequence `G_k` satisfying a two- or
//! three-term recurrence in the integer index `k`, anchored by a classical
//! gamma-ratio base case. The crate evaluates every family three ways:
//!
//! * [`recursions`] — the recurrences themselves, resolved over the integer
//!   shift lattice with memoized base cases;
//! * [`series`] — definition-level summation of the underlying `2F1`/`pFq`
//!   series, the independent oracle;
//! * [`closedforms`] — the finite-sum closed forms obtained by induction.
//!
//! [`contiguous`] catalogs the contiguous relations behind the recurrences as
//! checkable residuals, and [`verify`] cross-checks all three evaluation routes
//! on randomized parameter draws, producing machine-readable reports.

pub mod closedforms;
pub mod contiguous;
pub mod recursions;
pub mod scalar;
pub mod series;
pub mod specialfun;
pub mod verify;

pub use recursions::FamilyId;
pub use series::{ConvergenceClass, EvalResult, HypSpec, SummationPolicy};
