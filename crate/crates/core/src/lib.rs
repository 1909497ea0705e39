//! Thomason cohomology and homology of finite categories.
//!
//! The crate computes (co)homology of a finite category `C` with
//! coefficients in functors on its simplex category `Δ/C`, including the
//! classical coefficient systems obtained by pulling back along
//! `Δ/C → FC → C^op × C → C → π₁C → 𝟙`. Everything is exact: matrices hold
//! arbitrary-precision integers or rationals.
//!
//! Module map:
//! - [`fincat`]: finite categories, functors, comma and factorization categories.
//! - [`exactalg`]: matrices, Smith normal form, homology, limits.
//! - [`simplex`]: nerves, simplicial operators, `Δ/u` and `ν`.
//! - [`coeff`]: coefficient systems.
//! - [`complexes`]: Thomason (co)chain complexes and induced maps.
//! - [`kan`]: derived Kan extensions and Leray E₂ pages.
//! - [`fibration`]: split Grothendieck fibrations.
//! - [`io`]: JSON formats.
//! - [`verify`]: independent oracles and the acceptance suite.

pub mod coeff;
pub mod complexes;
pub mod error;
pub mod exactalg;
pub mod fibration;
pub mod fincat;
pub mod io;
pub mod kan;
pub mod simplex;
pub mod verify;

pub use error::{Error, Result};
