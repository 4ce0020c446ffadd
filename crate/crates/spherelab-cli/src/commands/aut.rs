//! `aut`: automorphism groups of finite graphs.

use std::path::Path;

use serde_json::json;
use spherelab::autom::{automorphism_group, kneser_graph, sym_action_matches, FiniteGraph};

use crate::report::{parse_json, read_input, usage, CliError, Report};

pub fn run_file(path: &Path) -> Result<Report, CliError> {
    let mut report = Report::new("aut");
    report.param("graph", path.display());
    let bytes = read_input(&mut report, "graph", path)?;
    let graph: FiniteGraph = parse_json(&bytes, "graph JSON")?;
    let group = automorphism_group(&graph).map_err(|e| usage(e.to_string()))?;
    report.count("vertices", graph.vertex_count() as u64);
    report.count("edges", graph.edge_count() as u64);
    report.count("order", group.order);
    report.count("generators", group.generators.len() as u64);
    report.check("automorphism group computed", true, format!("order {}", group.order));
    report.certificates = json!({ "group": group });
    Ok(report)
}

pub fn run_kneser(s: u8, expect: Option<u64>) -> Result<Report, CliError> {
    let mut report = Report::new("aut kneser");
    report.param("s", s);
    let graph = kneser_graph(s);
    let group = automorphism_group(&graph).map_err(|e| usage(e.to_string()))?;
    report.count("vertices", graph.vertex_count() as u64);
    report.count("order", group.order);
    let action = sym_action_matches(s).map_err(|e| usage(e.to_string()))?;
    report.check(
        "symmetric action matches",
        action,
        format!("Sym({s}) acting on label pairs"),
    );
    if let Some(expected) = expect {
        report.param("expect", expected);
        report.check(
            "expected order",
            group.order == expected,
            format!("computed {}, expected {expected}", group.order),
        );
    }
    report.certificates = json!({ "group": group });
    Ok(report)
}
