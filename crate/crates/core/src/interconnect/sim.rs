use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use super::{area_power, SimError, TopologyKind, TopologyModel, Workload};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TxTiming {
    pub index: usize,
    pub start: u64,
    pub end: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub topology: TopologyKind,
    pub nodes: usize,
    pub total_cycles: u64,
    pub latency_us: f64,
    /// Indexed like the workload's transactions.
    pub transactions: Vec<TxTiming>,
    pub area: f64,
    pub leakage: f64,
}

impl SimReport {
    /// Mean cycles from start to end over all transactions.
    pub fn cycles_per_transaction(&self) -> f64 {
        if self.transactions.is_empty() {
            return 0.0;
        }
        let sum: u64 = self.transactions.iter().map(|t| t.end - t.start).sum();
        sum as f64 / self.transactions.len() as f64
    }
}

/// Precedence edges: session order plus explicit constraints.
fn predecessors(workload: &Workload) -> Vec<Vec<usize>> {
    let mut preds = vec![Vec::new(); workload.transactions.len()];
    let mut last_in_session: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, t) in workload.transactions.iter().enumerate() {
        if let Some(prev) = last_in_session.insert(t.session, i) {
            preds[i].push(prev);
        }
    }
    for &(before, after) in &workload.after {
        preds[after].push(before);
    }
    preds
}

/// Issue order: lowest ready index first.
fn issue_order(preds: &[Vec<usize>]) -> Result<Vec<usize>, SimError> {
    let n = preds.len();
    let mut succs = vec![Vec::new(); n];
    let mut pending = vec![0usize; n];
    for (i, ps) in preds.iter().enumerate() {
        pending[i] = ps.len();
        for &p in ps {
            succs[p].push(i);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| pending[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &s in &succs[i] {
            pending[s] -= 1;
            if pending[s] == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    if order.len() < n {
        return Err(SimError::OrderingCycle);
    }
    Ok(order)
}

/// Cycle-level run of `workload` on `topology`.
///
/// The bus serializes everything: each transaction holds the medium for
/// arbitration, its beats and the destination's compute. The crossbar
/// list-schedules transfers on per-pair links; a node computes one
/// transaction at a time.
pub fn simulate(topology: &TopologyModel, workload: &Workload) -> Result<SimReport, SimError> {
    topology.validate()?;
    workload.validate()?;
    if workload.nodes() > topology.nodes {
        return Err(SimError::TooFewNodes { needed: workload.nodes(), available: topology.nodes });
    }
    let preds = predecessors(workload);
    let order = issue_order(&preds)?;
    let mut timing = vec![TxTiming { index: 0, start: 0, end: 0 }; workload.transactions.len()];

    match topology.kind {
        TopologyKind::SnoopyBus => {
            let mut now = 0;
            for i in order {
                let t = &workload.transactions[i];
                let end = now + topology.arbitration + topology.beats(t.bits) + t.compute;
                timing[i] = TxTiming { index: i, start: now, end };
                now = end;
            }
        }
        TopologyKind::Crossbar => {
            let mut link_free: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            let mut node_free = vec![0u64; topology.nodes];
            for i in order {
                let t = &workload.transactions[i];
                let pair = (t.src.min(t.dst), t.src.max(t.dst));
                let deps = preds[i].iter().map(|&p| timing[p].end).max().unwrap_or(0);
                let start = deps.max(link_free.get(&pair).copied().unwrap_or(0)).max(node_free[t.src]);
                let delivered = start + topology.beats(t.bits);
                let end = delivered.max(node_free[t.dst]) + t.compute;
                link_free.insert(pair, delivered);
                node_free[t.src] = node_free[t.src].max(delivered);
                node_free[t.dst] = end;
                timing[i] = TxTiming { index: i, start, end };
            }
        }
    }

    let total_cycles = timing.iter().map(|t| t.end).max().unwrap_or(0);
    let ap = area_power(topology);
    Ok(SimReport {
        topology: topology.kind,
        nodes: topology.nodes,
        total_cycles,
        latency_us: total_cycles as f64 / topology.freq_mhz,
        transactions: timing,
        area: ap.area,
        leakage: ap.leakage,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub workload: String,
    #[serde(rename = "N")]
    pub nodes: usize,
    pub topology: TopologyKind,
    pub cycles: u64,
    pub latency_us: f64,
    pub area: f64,
    pub leakage: f64,
}

/// Run every workload on every topology; rows sorted by workload, node
/// count, then topology.
pub fn compare(workloads: &[(String, Workload)], topologies: &[TopologyModel]) -> Result<Vec<ComparisonRow>, SimError> {
    let mut rows = Vec::new();
    for (name, workload) in workloads {
        for topology in topologies {
            let r = simulate(topology, workload)?;
            rows.push(ComparisonRow {
                workload: name.clone(),
                nodes: r.nodes,
                topology: r.topology,
                cycles: r.total_cycles,
                latency_us: r.latency_us,
                area: r.area,
                leakage: r.leakage,
            });
        }
    }
    rows.sort_by(|a, b| (&a.workload, a.nodes, a.topology).cmp(&(&b.workload, b.nodes, b.topology)));
    Ok(rows)
}

/// CSV with columns `N,topology,cycles,latency_us,area,leakage`.
pub fn rows_to_csv(rows: &[ComparisonRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "topology", "cycles", "latency_us", "area", "leakage"]).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.nodes.to_string(),
            r.topology.to_string(),
            r.cycles.to_string(),
            format!("{:.6}", r.latency_us),
            format!("{:.6}", r.area),
            format!("{:.6}", r.leakage),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

/// Clock frequency (MHz) at which `cycles` take `latency_us`.
pub fn calibrate_frequency(cycles: u64, latency_us: f64) -> f64 {
    cycles as f64 / latency_us
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interconnect::Transaction;

    fn one(bits: u64) -> Workload {
        Workload {
            node_names: vec!["a".into(), "b".into()],
            transactions: vec![Transaction { src: 0, dst: 1, bits, compute: 0, session: 0 }],
            after: vec![],
        }
    }

    #[test]
    fn single_transaction_cost() {
        let w = one(64);
        assert_eq!(simulate(&TopologyModel::bus(2), &w).unwrap().total_cycles, 3);
        assert_eq!(simulate(&TopologyModel::crossbar(2), &w).unwrap().total_cycles, 2);
    }

    #[test]
    fn disjoint_pairs_overlap_only_on_crossbar() {
        let w = Workload {
            node_names: (0..4).map(|i| i.to_string()).collect(),
            transactions: vec![
                Transaction { src: 0, dst: 1, bits: 96, compute: 0, session: 0 },
                Transaction { src: 2, dst: 3, bits: 160, compute: 0, session: 1 },
            ],
            after: vec![],
        };
        // bus: (1+3) + (1+5); crossbar: max(3, 5)
        assert_eq!(simulate(&TopologyModel::bus(4), &w).unwrap().total_cycles, 10);
        assert_eq!(simulate(&TopologyModel::crossbar(4), &w).unwrap().total_cycles, 5);
    }

    #[test]
    fn ordering_cycle_is_an_error() {
        let mut w = Workload::all_to_one(3, 8);
        w.after = vec![(0, 1), (1, 0)];
        assert_eq!(simulate(&TopologyModel::bus(3), &w).unwrap_err(), SimError::OrderingCycle);
    }

    #[test]
    fn workload_must_fit() {
        let w = Workload::all_to_one(5, 8);
        assert!(matches!(simulate(&TopologyModel::bus(4), &w), Err(SimError::TooFewNodes { .. })));
    }

    #[test]
    fn csv_header_is_fixed() {
        let rows = compare(&[("x".into(), one(8))], &[TopologyModel::bus(2), TopologyModel::crossbar(2)]).unwrap();
        let csv = rows_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("N,topology,cycles,latency_us,area,leakage"));
        assert!(lines.next().unwrap().starts_with("2,snoopy-bus,2,"));
    }
}
