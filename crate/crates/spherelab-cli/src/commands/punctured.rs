//! `gen-punctured`: build the sphere complex of a punctured sphere.

use std::path::Path;

use serde_json::json;
use spherelab::punctured::build_complex;

use crate::report::{usage, write_output, CliError, Report};

pub fn run(s: u8, dot: Option<&Path>) -> Result<Report, CliError> {
    let mut report = Report::new("gen-punctured");
    report.param("s", s);
    let complex = build_complex(s).map_err(|e| usage(e.to_string()))?;
    let skeleton = complex.skeleton();
    let vertices = complex.vertices();
    report.count("vertices", vertices.len() as u64);
    report.count("edges", skeleton.edge_count() as u64);

    // Vertex count must equal the number of essential splits of [s].
    let expected = (1u64 << (s - 1)) - 1 - s as u64;
    report.check(
        "vertex count",
        vertices.len() as u64 == expected,
        format!("{} vertices, formula gives {expected}", vertices.len()),
    );
    if s <= 8 {
        let pants = complex.enumerate_pants();
        let double_factorial: u64 = (1..=2 * s as u64 - 5).step_by(2).product();
        report.count("pants", pants.len() as u64);
        report.check(
            "pants count",
            pants.len() as u64 == double_factorial,
            format!("{} decompositions, (2s-5)!! = {double_factorial}", pants.len()),
        );
    }

    report.certificates = json!({
        "s": s,
        "vertices": vertices,
        "edges": skeleton.edges(),
    });

    if let Some(path) = dot {
        let mut out = String::from("graph punctured_complex {\n  node [shape=circle];\n");
        for v in vertices {
            out.push_str(&format!("  \"{v}\";\n"));
        }
        for (i, j) in skeleton.edges() {
            out.push_str(&format!("  \"{}\" -- \"{}\";\n", vertices[i], vertices[j]));
        }
        out.push_str("}\n");
        write_output(path, &out)?;
    }
    Ok(report)
}
