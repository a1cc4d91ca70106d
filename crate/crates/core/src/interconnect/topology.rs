use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SimError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    SnoopyBus,
    Crossbar,
}

impl TopologyKind {
    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::SnoopyBus => "snoopy-bus",
            TopologyKind::Crossbar => "crossbar",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bus" | "snoopy" | "snoopy-bus" => Ok(TopologyKind::SnoopyBus),
            "crossbar" | "xbar" => Ok(TopologyKind::Crossbar),
            other => Err(SimError::InvalidTopology(format!("unknown topology `{other}`"))),
        }
    }
}

/// Interconnect parameters. Area and leakage coefficients are abstract
/// units; only their ratios matter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyModel {
    pub kind: TopologyKind,
    pub nodes: usize,
    /// Bits moved per beat.
    pub width: u32,
    /// Cycles to win the shared medium (bus only).
    pub arbitration: u64,
    pub c_node: f64,
    /// Area of the shared bus wires.
    pub c_bus: f64,
    /// Area of one dedicated crossbar link.
    pub c_link: f64,
    /// Leakage per unit of area.
    pub leakage_per_area: f64,
    pub freq_mhz: f64,
}

impl TopologyModel {
    pub fn new(kind: TopologyKind, nodes: usize) -> Self {
        TopologyModel {
            kind,
            nodes,
            width: 32,
            arbitration: 1,
            c_node: 1.0,
            c_bus: 1.0,
            c_link: 0.5,
            leakage_per_area: 0.01,
            freq_mhz: 700.0,
        }
    }

    pub fn bus(nodes: usize) -> Self {
        Self::new(TopologyKind::SnoopyBus, nodes)
    }

    pub fn crossbar(nodes: usize) -> Self {
        Self::new(TopologyKind::Crossbar, nodes)
    }

    pub fn with_nodes(&self, nodes: usize) -> Self {
        TopologyModel { nodes, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: &str| Err(SimError::InvalidTopology(msg.to_string()));
        if self.nodes < 2 {
            return bad("at least two nodes are required");
        }
        if self.width == 0 {
            return bad("beat width must be at least one bit");
        }
        let coefficients = [self.c_node, self.c_bus, self.c_link, self.leakage_per_area, self.freq_mhz];
        if coefficients.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return bad("coefficients and frequency must be positive");
        }
        Ok(())
    }

    /// Beats needed to move `bits`.
    pub fn beats(&self, bits: u64) -> u64 {
        bits.div_ceil(u64::from(self.width))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaPower {
    pub area: f64,
    pub leakage: f64,
}

/// Analytic area: linear in `N` for the bus, one link per unordered node
/// pair for the crossbar.
pub fn area_power(topology: &TopologyModel) -> AreaPower {
    let n = topology.nodes as f64;
    let interconnect = match topology.kind {
        TopologyKind::SnoopyBus => topology.c_bus,
        TopologyKind::Crossbar => topology.c_link * n * (n - 1.0) / 2.0,
    };
    let area = topology.c_node * n + interconnect;
    AreaPower { area, leakage: topology.leakage_per_area * area }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bus_area_plugs_into_formula() {
        let t = TopologyModel { c_node: 1.0, c_bus: 2.0, ..TopologyModel::bus(4) };
        assert_eq!(area_power(&t).area, 6.0);
    }

    #[test]
    fn doubling_nodes() {
        let bus = TopologyModel::bus(6);
        let var = |t: &TopologyModel| area_power(t).area - t.c_bus;
        assert_eq!(var(&bus.with_nodes(12)), 2.0 * var(&bus));
        let xbar = TopologyModel::crossbar(6);
        let links = |t: &TopologyModel| area_power(t).area - t.c_node * t.nodes as f64;
        // 12·11/2 over 6·5/2
        assert_eq!(links(&xbar.with_nodes(12)) / links(&xbar), 66.0 / 15.0);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(TopologyModel::bus(1).validate().is_err());
        assert!(TopologyModel { width: 0, ..TopologyModel::bus(2) }.validate().is_err());
        assert!(TopologyModel { c_link: 0.0, ..TopologyModel::crossbar(3) }.validate().is_err());
        assert_eq!("bus".parse::<TopologyKind>().unwrap(), TopologyKind::SnoopyBus);
    }
}
