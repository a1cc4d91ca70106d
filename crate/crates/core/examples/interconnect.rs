// CNN traffic on a shared bus and a crossbar, then a node-count sweep.

use objchip::interconnect::{
    calibrated_bus, cnn_workload, compare, rows_to_csv, simulate, TopologyKind, TopologyModel, Workload,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let bus = calibrated_bus();
    println!("bus clock calibrated to {:.1} MHz", bus.freq_mhz);
    for (n, k) in [(8, 3), (16, 5), (32, 7)] {
        let cnn = cnn_workload(n, k)?;
        let on_bus = simulate(&bus, &cnn.workload)?;
        let xbar = simulate(&TopologyModel { kind: TopologyKind::Crossbar, ..bus.clone() }, &cnn.workload)?;
        println!(
            "n={n:>2} k={k}: {} MACs, bus {} cycles / {:.4} us, crossbar {} cycles",
            cnn.macs.total, on_bus.total_cycles, on_bus.latency_us, xbar.total_cycles
        );
    }

    let mut rows = Vec::new();
    for nodes in [2, 4, 8, 16] {
        let w = Workload::all_to_one(nodes, 64);
        let tops = [TopologyModel::bus(nodes), TopologyModel::crossbar(nodes)];
        rows.extend(compare(&[(format!("all-to-one/{nodes}"), w)], &tops)?);
    }
    print!("{}", rows_to_csv(&rows));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
