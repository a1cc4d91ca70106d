//! Derive session-typed protocols from object-oriented programs, check them
//! against hardware FSMs, and realize verified systems as interconnect
//! models and template floorplans.

pub mod session;
pub mod equiv;
pub mod hw;
pub mod frontend;
pub mod interconnect;
pub mod layout;
pub mod project;
pub mod service;
