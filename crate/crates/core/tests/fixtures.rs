//! Example runs on the path and T-shaped fixtures, checked round by round.

use eccsim_core::verify::{check_bounds, Claim};
use eccsim_core::{
    oracle_metrics, path_graph, run, t_graph, ExtU32, NodeId, RoundTraceEntry, Status, Variant,
    WakeSchedule,
};

fn entry(trace: &[RoundTraceEntry], node: u64, round: u32) -> &RoundTraceEntry {
    trace
        .iter()
        .find(|e| e.node == NodeId(node) && e.round == round)
        .unwrap_or_else(|| panic!("no trace entry for node {node} round {round}"))
}

#[test]
fn path_eleven_probe_traces() {
    let g = path_graph(11).unwrap();
    let probes = [NodeId(0), NodeId(5), NodeId(10)];
    let res = run(&g, &WakeSchedule::single(NodeId(0)), Variant::FullSet, &probes, 200).unwrap();
    let trace = &res.trace;

    // Node k wakes in round k.
    for k in 0..=10u64 {
        assert_eq!(res.wake_rounds[&NodeId(k)], k as u32);
    }

    // Node 0 hears a new origin every two rounds: node k's flood arrives in round 2k.
    for k in 1..=10u32 {
        let e = entry(trace, 0, 2 * k);
        assert_eq!((e.ecc, e.quiet, e.new_bfs), (k, 0, 1));
        assert_eq!(entry(trace, 0, 2 * k - 1).quiet, 1);
    }

    // Node 5 wakes in round 5 hearing origins 0..=4, so e = d = 5 at once.
    let e = entry(trace, 5, 5);
    assert_eq!((e.ecc, e.diam, e.new_bfs, e.status), (5, 5, 6, Status::Active));
    // Its diameter estimate then grows every two rounds as nodes 6..10 wake.
    for (round, d) in [(7, 6), (9, 7), (11, 8), (13, 9), (15, 10)] {
        assert_eq!(entry(trace, 5, round).diam, d, "round {round}");
    }

    // The radius at node 10 settles at 5 when the center's Rad arrives.
    assert_eq!(entry(trace, 10, 21).radius, ExtU32::Finite(6));
    assert_eq!(entry(trace, 10, 22).radius, ExtU32::Finite(5));
    assert!(entry(trace, 10, 22).quiet >= 10);

    for id in probes {
        let v = res.final_values[&id];
        assert_eq!((v.d, v.r), (10, ExtU32::Finite(5)));
    }
}

#[test]
fn path_eleven_detection_rounds() {
    let g = path_graph(11).unwrap();
    let res = run(&g, &WakeSchedule::single(NodeId(0)), Variant::FullSet, &[], 200).unwrap();
    let det = |k: u64| res.detection[&NodeId(k)];
    assert_eq!((det(0).ecc_round, det(5).ecc_round), (Some(22), Some(17)));
    // Node 10 has every origin after round 10, so c reaches 2 in round 12.
    assert_eq!(det(10).ecc_round, Some(12));
    assert_eq!(
        (det(0).diam_round, det(5).diam_round, det(10).diam_round),
        (Some(31), Some(26), Some(21))
    );
    assert_eq!((det(0).rad_round, det(10).rad_round), (Some(30), Some(22)));
    for d in res.detection.values() {
        let t = d.diam_round.unwrap().max(d.rad_round.unwrap());
        assert_eq!(d.termination_round, Some(t + 1));
        assert!(d.ecc_round <= d.diam_round && d.ecc_round <= d.rad_round);
    }
}

#[test]
fn path_eleven_bound_slacks() {
    let g = path_graph(11).unwrap();
    let oracle = oracle_metrics(&g);
    let res = run(&g, &WakeSchedule::single(NodeId(0)), Variant::FullSet, &[], 200).unwrap();
    let rep = check_bounds(&res, &oracle);
    let slack = |node: u64, claim| rep.node(NodeId(node), claim).unwrap().slack;
    assert_eq!(slack(5, Claim::Eccentricity), 0);
    assert_eq!(slack(0, Claim::Eccentricity), 0);
    assert_eq!(slack(0, Claim::DiameterTight), 0);
    assert_eq!(slack(0, Claim::Diameter), 1);
    assert_eq!(slack(0, Claim::Radius), 0);
    assert_eq!(slack(10, Claim::Radius), 8);
    assert!(rep.passed());
}

/// The T-graph with arms (5, 5, 4) started at the stem end reproduces the
/// adversarial run: the diameter estimate sits at 9 for ten rounds, jumps
/// to 10 in round 28 and is only certified in round 29.
///
/// Other arm lengths give the same shape with different round numbers.
#[test]
fn t_graph_late_diameter_increase() {
    let g = t_graph(5, 5, 4).unwrap();
    let oracle = oracle_metrics(&g);
    assert_eq!(oracle.diameter, 10);
    assert_eq!(g.degree(NodeId(14)), 1);

    let res = run(&g, &WakeSchedule::single(NodeId(14)), Variant::FullSet, &[NodeId(14)], 200).unwrap();
    let trace = &res.trace;
    for round in 18..=27 {
        assert_eq!(entry(trace, 14, round).diam, 9, "round {round}");
    }
    assert_eq!(entry(trace, 14, 28).diam, 10);
    let det = res.detection[&NodeId(14)];
    assert_eq!(det.diam_round, Some(29));
    // c first exceeds d exactly at detection
    let at = entry(trace, 14, 29);
    assert!(at.quiet > at.diam);
    let before = entry(trace, 14, 28);
    assert!(before.quiet <= before.diam);
}

#[test]
fn two_node_network() {
    let g = path_graph(2).unwrap();
    for schedule in [WakeSchedule::single(NodeId(0)), WakeSchedule::all(&g)] {
        let res = run(&g, &schedule, Variant::FullSet, &[], 8).unwrap();
        assert!(res.last_termination().unwrap() <= 8);
        for (id, v) in &res.final_values {
            assert_eq!((v.e, v.d, v.r), (1, 1, ExtU32::Finite(1)), "node {id}");
        }
        for t in res.traffic.values() {
            assert_eq!(t.bfs_origins, 2);
        }
    }
}
