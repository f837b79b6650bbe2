//! Parsing of graph sources and wake schedules given on the command line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use eccsim_core::{
    complete_graph, parse_edge_list, path_graph, random_connected_graph, t_graph, Graph, NodeId,
    WakeSchedule,
};

/// A generator invocation, e.g. `path 11`, `t 5 5 4` or `random 30 0.1 7`.
pub fn generate(kind: &str, params: &[String]) -> Result<Graph> {
    let int = |i: usize, name: &str| -> Result<usize> {
        let raw = params
            .get(i)
            .with_context(|| format!("{kind} generator needs parameter `{name}`"))?;
        raw.parse()
            .with_context(|| format!("parameter `{name}` must be a non-negative integer, got `{raw}`"))
    };
    let expect = |n: usize| -> Result<()> {
        if params.len() != n {
            bail!("{kind} generator takes {n} parameter(s), got {}", params.len());
        }
        Ok(())
    };
    let g = match kind {
        "path" => {
            expect(1)?;
            path_graph(int(0, "n")?)?
        }
        "complete" => {
            expect(1)?;
            complete_graph(int(0, "n")?)?
        }
        "t" => {
            expect(3)?;
            t_graph(int(0, "left")?, int(1, "right")?, int(2, "stem")?)?
        }
        "random" => {
            expect(3)?;
            let p: f64 = params[1]
                .parse()
                .with_context(|| format!("edge probability must be a number, got `{}`", params[1]))?;
            let seed: u64 = params[2]
                .parse()
                .with_context(|| format!("seed must be a non-negative integer, got `{}`", params[2]))?;
            random_connected_graph(int(0, "n")?, p, seed)?
        }
        other => bail!("unknown generator `{other}` (expected path, t, random or complete)"),
    };
    Ok(g)
}

/// `--graph` value: `<generator>:<p1>,<p2>,...` (`:` also accepted between
/// parameters), e.g. `path:11`, `t:5,5,4`, `random:30,0.1,7`.
pub fn graph_spec(spec: &str) -> Result<Graph> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let params: Vec<String> = rest
        .split([',', ':'])
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    generate(kind, &params).with_context(|| format!("invalid graph `{spec}`"))
}

pub fn edge_file(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("invalid edge list {}", path.display()))
}

/// `node:round` pairs separated by commas, or `all:<round>`.
pub fn schedule(spec: &str, g: &Graph) -> Result<WakeSchedule> {
    let mut entries = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (node, round) = part
            .split_once(':')
            .with_context(|| format!("wake entry `{part}` is not `node:round`"))?;
        let round: u32 = round
            .parse()
            .with_context(|| format!("wake round `{round}` is not a non-negative integer"))?;
        if node == "all" {
            entries.extend(g.node_ids().iter().map(|&id| (id, round)));
            continue;
        }
        let id = NodeId(
            node.parse()
                .with_context(|| format!("wake node `{node}` is not a node id"))?,
        );
        if !g.contains(id) {
            bail!("wake schedule names node {id}, which is not in the graph");
        }
        entries.push((id, round));
    }
    Ok(WakeSchedule::new(entries)?)
}

/// Comma-separated node ids, or `all`.
pub fn probes(spec: Option<&str>, g: &Graph) -> Result<Vec<NodeId>> {
    match spec {
        None | Some("all") => Ok(g.node_ids().to_vec()),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                let id = NodeId(s.parse().with_context(|| format!("probe `{s}` is not a node id"))?);
                if !g.contains(id) {
                    bail!("probe node {id} is not in the graph");
                }
                Ok(id)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_specs() {
        assert_eq!(graph_spec("path:11").unwrap().node_count(), 11);
        assert_eq!(graph_spec("t:5,5,4").unwrap().node_count(), 15);
        assert_eq!(graph_spec("t:5:5:4").unwrap().node_count(), 15);
        assert_eq!(graph_spec("random:12,0.3,1").unwrap().node_count(), 12);
        assert!(graph_spec("path:1").is_err());
        assert!(graph_spec("star:4").is_err());
        assert!(graph_spec("t:1,2").is_err());
    }

    #[test]
    fn schedules() {
        let g = path_graph(4).unwrap();
        let s = schedule("all:0", &g).unwrap();
        assert_eq!(s.len(), 4);
        let s = schedule("1:3, 2:5", &g).unwrap();
        assert_eq!(s.get(NodeId(1)), Some(0));
        assert_eq!(s.get(NodeId(2)), Some(2));
        assert!(schedule("9:0", &g).is_err());
        assert!(schedule("1", &g).is_err());
        assert!(schedule("", &g).is_err());
    }

    #[test]
    fn probe_lists() {
        let g = path_graph(11).unwrap();
        assert_eq!(probes(Some("0,5,10"), &g).unwrap(), vec![NodeId(0), NodeId(5), NodeId(10)]);
        assert_eq!(probes(None, &g).unwrap().len(), 11);
        assert!(probes(Some("11"), &g).is_err());
    }
}
