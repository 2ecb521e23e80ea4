//! Conditional density operators and the channel–state correspondence over
//! finite-dimensional C*-algebras.
//!
//! An algebra `⊕ⱼ B(C^{dⱼ})` is described by an [`AlgebraShape`] and its
//! elements are stored as block-diagonal matrices in the embedding
//! `B(C^{d₁+…+dₙ})`. Composite systems use the Kronecker layout with the
//! first factor as the slow index: `|i⟩ ⊗ |j⟩` sits at row `i·d_B + j`.
//! A [`ConditionalState`] always stores its conditioning system first.
//!
//! ```
//! use qcond::{channels, AlgebraShape, Channel, State};
//!
//! let qubit = AlgebraShape::irreducible(2);
//! let ch = Channel::completely_depolarizing(2);
//! let cond = channels::choi_conditional(&ch);
//! let back = channels::channel_from_conditional(&cond).unwrap();
//! let rho = State::maximally_mixed(&qubit);
//! assert_eq!(back.apply(&rho).unwrap().shape(), &qubit);
//! ```

pub mod algebra;
pub mod channels;
pub mod cli;
pub mod conditional;
pub mod error;
pub mod io;
pub mod matcore;
pub mod povm;
pub mod scenarios;
pub mod states;

pub use algebra::{AlgebraElement, AlgebraShape};
pub use channels::Channel;
pub use conditional::ConditionalState;
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, Side};
pub use povm::{Ensemble, Povm};
pub use states::{JointState, State};
