use serde::{Deserialize, Serialize};

use super::SimError;

/// One pairwise transfer followed by compute at the destination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub src: usize,
    pub dst: usize,
    pub bits: u64,
    pub compute: u64,
    pub session: usize,
}

/// Transactions in session order. Within a session the list order is the
/// protocol order; `after` adds cross-session precedence `(before, after)`
/// between transaction indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Workload {
    pub node_names: Vec<String>,
    pub transactions: Vec<Transaction>,
    #[serde(default)]
    pub after: Vec<(usize, usize)>,
}

impl Workload {
    pub fn nodes(&self) -> usize {
        self.node_names.len()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (i, t) in self.transactions.iter().enumerate() {
            if t.src >= self.nodes() || t.dst >= self.nodes() {
                return Err(SimError::InvalidWorkload(format!("transaction {i} names a node outside 0..{}", self.nodes())));
            }
            if t.src == t.dst {
                return Err(SimError::InvalidWorkload(format!("transaction {i} sends to itself")));
            }
            if t.bits == 0 {
                return Err(SimError::InvalidWorkload(format!("transaction {i} carries no bits")));
            }
        }
        for &(a, b) in &self.after {
            if a >= self.transactions.len() || b >= self.transactions.len() {
                return Err(SimError::InvalidWorkload(format!("ordering constraint ({a}, {b}) is out of range")));
            }
        }
        Ok(())
    }

    /// `nodes - 1` independent senders, each delivering `bits` to node 0.
    pub fn all_to_one(nodes: usize, bits: u64) -> Workload {
        Workload {
            node_names: (0..nodes).map(|i| format!("n{i}")).collect(),
            transactions: (1..nodes).map(|src| Transaction { src, dst: 0, bits, compute: 0, session: src }).collect(),
            after: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacSummary {
    pub conv: u64,
    pub relu: u64,
    pub pool: u64,
    pub fc: u64,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnnWorkload {
    pub n: u64,
    pub k: u64,
    pub macs: MacSummary,
    pub workload: Workload,
}

/// Bits per tensor element on the wire.
pub const ELEMENT_BITS: u64 = 8;

/// MAC counts of the conv → ReLU → pool → FC pipeline on an `n×n` input
/// with a `k×k` kernel, valid padding and 2×2 pooling.
pub fn cnn_macs(n: u64, k: u64) -> Result<MacSummary, SimError> {
    if k == 0 || n <= k || n - k + 1 < 2 {
        return Err(SimError::DegenerateCnn { n, k });
    }
    let m = n - k + 1;
    let conv = m * m * k * k;
    let fc = (m / 2) * (m / 2);
    Ok(MacSummary { conv, relu: 0, pool: 0, fc, total: conv + fc })
}

/// CNN pipeline workload with one compute cycle per MAC.
pub fn cnn_workload(n: u64, k: u64) -> Result<CnnWorkload, SimError> {
    cnn_workload_with(n, k, 1)
}

/// CNN pipeline as a single session: the host streams the input to Conv,
/// each stage forwards its output tensor, and FC returns one element.
pub fn cnn_workload_with(n: u64, k: u64, cycles_per_mac: u64) -> Result<CnnWorkload, SimError> {
    let macs = cnn_macs(n, k)?;
    let m = n - k + 1;
    let pooled = m / 2;
    let hop = |src, dst, elems: u64, macs: u64| Transaction {
        src,
        dst,
        bits: elems * ELEMENT_BITS,
        compute: macs * cycles_per_mac,
        session: 0,
    };
    let transactions = vec![
        hop(0, 1, n * n, macs.conv),
        hop(1, 2, m * m, macs.relu),
        hop(2, 3, m * m, macs.pool),
        hop(3, 4, pooled * pooled, macs.fc),
        hop(4, 0, 1, 0),
    ];
    let node_names = ["Host", "Conv", "ReLU", "Pool", "FC"].map(String::from).to_vec();
    Ok(CnnWorkload { n, k, macs, workload: Workload { node_names, transactions, after: Vec::new() } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_sizes_are_rejected() {
        assert!(cnn_macs(3, 3).is_err());
        assert!(cnn_macs(4, 4).is_err());
        assert_eq!(cnn_macs(4, 3).unwrap().fc, 1);
        assert!(cnn_macs(5, 0).is_err());
        assert!(cnn_macs(5, 3).is_ok());
    }

    #[test]
    fn pipeline_carries_stage_tensors() {
        let w = cnn_workload(8, 3).unwrap();
        let bits: Vec<u64> = w.workload.transactions.iter().map(|t| t.bits).collect();
        assert_eq!(bits, [512, 288, 288, 72, 8]);
        assert!(w.workload.validate().is_ok());
    }

    #[test]
    fn self_sends_are_invalid() {
        let mut w = Workload::all_to_one(3, 8);
        w.transactions[0].dst = w.transactions[0].src;
        assert!(w.validate().is_err());
    }
}
