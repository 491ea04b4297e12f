//! Chain signatures over a bilinear pairing, plus three path-vector routing
//! protocols (plain BGP, stateful S-BGP and stateless-secure SS-BGP) that use
//! them, wired into a deterministic wireless-broadcast simulator.
//!
//! Layering, bottom to top:
//!
//! * [`bilinear`] — the pairing group abstraction (BLS12-381 underneath) with
//!   hash-to-group and canonical serialization.
//! * [`ecs`] — ordered chain sequences and the chain-signature algorithms:
//!   sign, verify, aggregate verification, and the suffix-strip oracle.
//! * [`game`] — an unforgeability game harness with pluggable adversary
//!   strategies and the non-signable predicate used to judge forgeries.
//! * [`routing`] — the three routing engines sharing one table core and
//!   validation pipeline.
//! * [`sim`] — unit-disk broadcast simulation with honest and adversarial
//!   node roles, producing deterministic metrics.

pub mod bilinear;
pub mod ecs;
pub mod game;
pub mod routing;
pub mod sim;
