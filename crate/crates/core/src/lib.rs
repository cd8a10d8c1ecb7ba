//! Heegaard diagrams of closed orientable 3-manifolds: surface words and homology, symplectic
//! basis changes, curve arrangements in minimal position, Heegaard-diagram reduction and Morse
//! handle cancellation.

pub mod arrangement;
pub mod basis_change;
pub mod matrix;
pub mod surface_group;
pub mod heegaard;
pub mod morse;
pub mod presentation;
