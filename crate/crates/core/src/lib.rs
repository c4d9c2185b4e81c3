//! Double-point enhanced grid homology of knots, computed from grid diagrams,
//! together with executable checks of the identities behind its invariance:
//! differentials on the torus and its 4-fold cover, the homotopies between
//! consecutive variables, commutation and stabilization maps.

pub mod chain;
pub mod combined;
pub mod cover;
pub mod error;
pub mod grid;
pub mod harness;
pub mod homology;
pub mod stab;
pub mod verify;

pub use chain::{ChainElement, Monomial};
pub use error::{Error, Result};
pub use grid::{GridDiagram, GridState, Theory};
