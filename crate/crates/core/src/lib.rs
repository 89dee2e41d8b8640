//! Reduced Khovanov homology of 2-tangle closures computed by pairing a
//! twisted complex over the pillowcase category with a test curve, plus an
//! independent cube-of-resolutions oracle and Jones state sum to check it.

pub mod catalog;
pub mod construct;
pub mod corpus;
pub mod f2linalg;
pub mod functor;
pub mod khovanov;
pub mod pairing;
pub mod pillowcase;
pub mod pipeline;
pub mod ranks;
pub mod tangle;
pub mod twisted;
