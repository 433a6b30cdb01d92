//! Probabilistic route-request flooding over lossy wireless links.
//!
//! This crate holds the allocation-only pieces of the simulator: geometric
//! topologies, random-direction mobility, the flood engine, the RCH/RET
//! metrics and an exhaustive-enumeration oracle for small topologies. It is
//! `no_std` (with `alloc`); file formats, the scenario runner and the CLI
//! live in the `noisyflood` crate.
//!
//! A flood starts at a source node which always transmits. Every in-range
//! neighbour of a transmitter receives the request with probability `p_c`
//! (the probability of reception); on its first successful reception a node
//! retransmits with probability `p_r`, and never more than once.
//!
//! ```
//! use noisyflood_core::{flood, rng, FloodParams, Point, Topology};
//!
//! let topo = Topology::build(
//!     &[Point::new(0.0, 0.0), Point::new(50.0, 0.0)],
//!     100.0,
//! )
//! .unwrap();
//! let mut stream = rng::derive_substream(7, &[0]);
//! let out = flood::flood(&topo, 0, FloodParams::new(1.0, 1.0).unwrap(), &mut stream).unwrap();
//! assert_eq!(out.reached_count(), 1);
//! assert_eq!(out.transmissions(), 2);
//! ```

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

mod error;
pub mod fixtures;
pub mod flood;
pub mod metrics;
pub mod mobility;
pub mod model;
pub mod oracle;
pub mod rng;

pub use error::Error;
pub use flood::{FloodOutcome, FloodParams};
pub use metrics::MetricPoint;
pub use mobility::MobilityState;
pub use model::{
    density, pause_time, snapshot_count, Area, NodeState, Point, RangeRule, ScenarioConfig, Sources, Topology,
};
pub use oracle::OracleResult;

pub type Result<T, E = Error> = core::result::Result<T, E>;
