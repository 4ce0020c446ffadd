//! `rank2`: the Farey-with-fins ball, non-rigidity witnesses for its finite
//! subgraphs, and stand-alone verification of stored witnesses.

use std::path::Path;

use serde_json::json;
use spherelab::error::Error;
use spherelab::rank2::{
    build_farey_fins, find_nonrigidity_witness, verify_witness, FareyFins, Subgraph, WitnessMap,
};

use crate::report::{parse_json, read_input, usage, write_output, CliError, Report};

/// Hard cap on ball depth; the ball doubles per level, so this is already
/// ~12k triangle vertices.
const MAX_DEPTH: usize = 12;

pub fn run_build(depth: usize, dot: Option<&Path>) -> Result<Report, CliError> {
    let mut report = Report::new("rank2 build");
    report.param("depth", depth);
    if depth > MAX_DEPTH {
        return Err(usage(format!("depth {depth} exceeds the cap of {MAX_DEPTH}")));
    }
    let g = build_farey_fins(depth);
    report.count("triangle vertices", g.farey_vertex_count() as u64);
    report.count("triangle edges", g.farey_edge_count() as u64);
    report.count("vertices", g.vertex_count() as u64);
    report.count("edges", g.edge_count() as u64);
    let fv = 3usize << depth;
    let fe = 3 * ((2usize << depth) - 1);
    report.check(
        "ball counts match the closed forms",
        g.farey_vertex_count() == fv && g.farey_edge_count() == fe,
        format!("expected {fv} triangle vertices and {fe} triangle edges"),
    );
    report.certificates = json!({
        "depth": depth,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
    });
    if let Some(path) = dot {
        write_output(path, &g.to_dot())?;
    }
    Ok(report)
}

/// Builds the ball at `depth`, growing it (up to the cap) until the witness
/// search no longer reports the input as out of range.
fn witness_with_growth(
    x: &Subgraph,
    depth: usize,
    report: &mut Report,
) -> Result<(WitnessMap, FareyFins), CliError> {
    let mut d = depth;
    loop {
        let g = build_farey_fins(d);
        match find_nonrigidity_witness(x, &g) {
            Ok(w) => {
                if d > depth {
                    report
                        .frontier
                        .push(format!("ball grown to depth {d} to contain the input"));
                }
                return Ok((w, g));
            }
            Err(Error::BallTooSmall) if d < MAX_DEPTH => d += 1,
            Err(e) => return Err(usage(e.to_string())),
        }
    }
}

pub fn run_witness(input: &Path, out: Option<&Path>, depth: usize) -> Result<Report, CliError> {
    let mut report = Report::new("rank2 witness");
    report.param("input", input.display());
    report.param("depth", depth);
    if depth > MAX_DEPTH {
        return Err(usage(format!("depth {depth} exceeds the cap of {MAX_DEPTH}")));
    }
    let bytes = read_input(&mut report, "subgraph", input)?;
    let x: Subgraph = parse_json(&bytes, "subgraph JSON")?;
    report.count("vertices", x.vertices().len() as u64);
    report.count("edges", x.edges().len() as u64);
    let (w, g) = witness_with_growth(&x, depth, &mut report)?;
    report.param("case", &w.case);
    let check = verify_witness(&w, &g);
    report.check(
        "witness verifies",
        check.ok,
        if check.reasons.is_empty() {
            w.case.clone()
        } else {
            check.reasons.join("; ")
        },
    );
    report.certificates = json!({ "witness": w });
    if let Some(path) = out {
        let mut s = serde_json::to_string_pretty(&w).expect("witness serializes");
        s.push('\n');
        write_output(path, &s)?;
    }
    Ok(report)
}

pub fn run_verify(witness: &Path, depth: usize) -> Result<Report, CliError> {
    let mut report = Report::new("rank2 verify");
    report.param("witness", witness.display());
    report.param("depth", depth);
    let bytes = read_input(&mut report, "witness", witness)?;
    let w: WitnessMap = parse_json(&bytes, "witness JSON")?;
    report.param("case", &w.case);
    report.count("vertices", w.domain.vertices().len() as u64);
    report.count("map entries", w.map.len() as u64);
    let mut d = depth.min(MAX_DEPTH);
    let g = loop {
        let g = build_farey_fins(d);
        if d >= MAX_DEPTH || w.domain.vertices().iter().all(|v| g.contains(v)) {
            if d > depth {
                report
                    .frontier
                    .push(format!("ball grown to depth {d} to contain the domain"));
            }
            break g;
        }
        d += 1;
    };
    let check = verify_witness(&w, &g);
    report.check(
        "witness verifies",
        check.ok,
        if check.reasons.is_empty() {
            w.case.clone()
        } else {
            check.reasons.join("; ")
        },
    );
    report.certificates = json!({ "witness": w });
    Ok(report)
}
