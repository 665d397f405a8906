//! Exact computations on almost-toric truncated wedges: invariants, mutations,
//! Mori sequences, antiflips and flips, and Hirzebruch-Jung chain calculus.

pub mod exactmath;
pub mod flip;
pub mod hjchain;
pub mod lattice;
pub mod mori;
pub mod mutate;
pub mod polygon;
pub mod wedge;
