//! Executable scenarios: random instances, the local-measurement theorem,
//! teleportation, and the randomized self-test.

pub mod random;
pub mod selftest;
pub mod teleport;
pub mod theorem;

pub use selftest::{run_selftest, SelftestReport};
pub use teleport::{bell_basis, teleport, teleport_classical, teleport_general, TeleportReport};
pub use theorem::{verify_theorem, TheoremReport};
