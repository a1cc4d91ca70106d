//! Interconnect realization: cycle model for a snoopy bus and a crossbar,
//! analytic area and leakage, and the CNN pipeline workload.

mod sim;
mod topology;
mod workload;

pub use sim::{calibrate_frequency, compare, rows_to_csv, simulate, ComparisonRow, SimReport, TxTiming};
pub use topology::{area_power, AreaPower, TopologyKind, TopologyModel};
pub use workload::{cnn_macs, cnn_workload, cnn_workload_with, CnnWorkload, MacSummary, Transaction, Workload, ELEMENT_BITS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid workload: {0}")]
    InvalidWorkload(String),
    #[error("workload needs {needed} nodes but the topology has {available}")]
    TooFewNodes { needed: usize, available: usize },
    #[error("ordering constraints form a cycle")]
    OrderingCycle,
    #[error("degenerate CNN sizes n={n}, k={k}: need n > k >= 1 and n - k + 1 >= 2")]
    DegenerateCnn { n: u64, k: u64 },
}

/// Snoopy-bus latency reported for the 8×8 / 3×3 CNN, used to fix the clock.
pub const TC1_BUS_LATENCY_US: f64 = 0.5371;

/// Bus topology whose clock is calibrated so that the 8×8 / 3×3 CNN at one
/// cycle per MAC takes [`TC1_BUS_LATENCY_US`].
pub fn calibrated_bus() -> TopologyModel {
    let cnn = cnn_workload(8, 3).expect("valid sizes");
    let base = TopologyModel::bus(cnn.workload.nodes());
    let cycles = simulate(&base, &cnn.workload).expect("valid workload").total_cycles;
    TopologyModel { freq_mhz: calibrate_frequency(cycles, TC1_BUS_LATENCY_US), ..base }
}
