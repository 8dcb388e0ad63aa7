//! Exact permutation statistics over the symmetric group, their joint
//! generating polynomials, gamma-basis expansion, and exhaustive checks of
//! the q-Eulerian gamma-positivity identities built on them.

pub mod cli;
pub mod dist;
pub mod gamma;
pub mod perm;
pub mod poly;
pub mod stats;
pub mod verify;

pub use dist::{Dist, DistError, Engine};
pub use gamma::{gamma_expand, GammaVector};
pub use perm::{enumerate, enumerate_block, PermError, Permutation, MAX_N};
pub use poly::{Monomial, MultiPoly, PolyError};
pub use stats::{Stat, StatRecord};
pub use verify::{CheckId, CheckReport, Counterexample};
