//! Exact class calculus in the image of the Grothendieck ring of varieties,
//! together with finite-field point counting of quotients by finite groups.
//!
//! Every quotient identity is stated twice: once symbolically in `Z[L][symbols]`
//! ([`classes`]) and once as an exact point count over `F_q` obtained from
//! twisted Frobenius fixed points and Burnside averaging ([`ffcount`]). The
//! [`identities`] and [`polydiag`] modules bind the two together, and
//! [`suite`] drives batteries of checks and renders reports.

pub mod classes;
pub mod error;
pub mod ffcount;
pub mod identities;
pub mod partitions;
pub mod perm;
pub mod polydiag;
pub mod suite;

pub use classes::{MotivicClass, ZetaSeries};
pub use error::{Error, Result};
pub use partitions::{PartitionType, SetPartition, StabilizerDecomposition};
pub use perm::{PermGroup, Permutation};
