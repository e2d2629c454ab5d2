//! Exact-arithmetic engine for circular and left orders on finitely
//! generated free groups defined by combinatorial ping-pong data, with
//! cross-validation against exact Möbius and piecewise-projective circle
//! actions, covering lifts, certified rotation numbers, and induced left
//! orders on central extensions.

pub mod circle;
pub mod extensions;
pub mod freegroup;
pub mod harness;
pub mod orders;
pub mod pingpong;
pub mod render;

pub use circle::{
    cut_cmp, cyclic_ord, in_open_arc, CircleError, CircleMap, Cover, CoverPoint, LiftedMap,
    MoebiusMap, PLCircleMap, ProjectivePoint, RotationNumber,
};
pub use freegroup::{ball, Alphabet, Letter, ReducedWord, WordError};
pub use orders::{CircularOracle, OrderError, OrderTable, OrderValue};
pub use pingpong::{PingPongConfig, PingPongError, RealizedAction, Slot};
