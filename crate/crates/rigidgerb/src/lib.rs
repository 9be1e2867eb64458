//! Exact finite computations around rigid inner forms.
//!
//! The crate works entirely with integers and rationals: finitely generated
//! abelian groups in Smith normal form, modules over finite groups and their
//! low degree (Tate) cohomology, level cochains with the unbalanced cup
//! product, the finite gerb groups `u_{E/F,n}`, the lattice functor
//! `Ybar_{+,tor}` and its pairing with the dual center, the explicit real gerb
//! with its rigidifying cocycles, and small matrix groups over the Gaussian
//! rationals with their character tables.
//!
//! Everything except [`battery`] is deterministic. The crate is `no_std` and
//! only needs `alloc`.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod abgroup;
pub mod battery;
pub mod cochain;
pub mod cyclo;
pub mod gerb;
pub mod gmodule;
pub mod lattice;
pub mod realgerb;
pub mod report;
pub mod rigidcoh;
pub mod spectra;

pub use abgroup::{smith_normal_form, AbError, AbHom, FinAb, IntMatrix, QZ};
pub use gmodule::{FiniteGroup, GammaModule, TateClassGroup};
pub use report::{Check, Report, Status};
