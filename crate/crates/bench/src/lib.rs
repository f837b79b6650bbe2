//! Fixtures shared by the benchmarks.

use eccsim_core::{path_graph, random_connected_graph, Graph, NodeId, WakeSchedule};

pub fn path_fixture(n: usize) -> (Graph, WakeSchedule) {
    (path_graph(n).expect("n >= 2"), WakeSchedule::single(NodeId(0)))
}

pub fn random_fixture(n: usize, p: f64, seed: u64) -> (Graph, WakeSchedule) {
    let g = random_connected_graph(n, p, seed).expect("valid parameters");
    let s = WakeSchedule::single(g.id_at(0));
    (g, s)
}
