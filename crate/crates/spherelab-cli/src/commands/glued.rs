//! `glued`: pants checks, split-sphere slots, and exchanges in the glued
//! model.

use std::path::Path;

use serde::Deserialize;
use serde_json::json;
use spherelab::glued::{is_pants, GluedManifold, GluedPants, SphereClass};

use crate::report::{parse_json, read_input, usage, write_output, CliError, Report};

/// Input shape shared by the `glued` and `rigid expand` commands: a
/// manifold and a sphere list (any dual-graph data in the file is ignored
/// and recomputed).
#[derive(Deserialize)]
pub struct PantsInput {
    pub manifold: GluedManifold,
    pub spheres: Vec<SphereClass>,
}

pub fn load_pants(report: &mut Report, name: &str, path: &Path) -> Result<GluedPants, CliError> {
    let bytes = read_input(report, name, path)?;
    let input: PantsInput = parse_json(&bytes, "pants JSON")?;
    is_pants(&input.manifold, &input.spheres).map_err(|e| usage(e.to_string()))
}

pub fn parse_sphere(arg: &str, m: &GluedManifold) -> Result<SphereClass, CliError> {
    let sphere: SphereClass =
        serde_json::from_str(arg).map_err(|e| usage(format!("invalid sphere JSON: {e}")))?;
    sphere
        .validate_over(m)
        .map_err(|e| usage(format!("sphere {sphere}: {e}")))?;
    Ok(sphere)
}

pub fn run_pants_check(path: &Path) -> Result<Report, CliError> {
    let mut report = Report::new("glued pants-check");
    report.param("input", path.display());
    let bytes = read_input(&mut report, "pants", path)?;
    let input: PantsInput = parse_json(&bytes, "pants JSON")?;
    report.count("spheres", input.spheres.len() as u64);
    match is_pants(&input.manifold, &input.spheres) {
        Ok(pants) => {
            report.count("dual vertices", pants.dual_vertex_count() as u64);
            report.check(
                "maximal decomposition",
                true,
                format!(
                    "{} spheres cut {} three-holed pieces",
                    input.spheres.len(),
                    pants.dual_vertex_count()
                ),
            );
            report.certificates = json!({ "pants": pants });
        }
        Err(e) => {
            report.check("maximal decomposition", false, e);
        }
    }
    Ok(report)
}

pub fn run_split_spheres(path: &Path, sphere: Option<&str>) -> Result<Report, CliError> {
    let mut report = Report::new("glued split-spheres");
    report.param("input", path.display());
    let pants = load_pants(&mut report, "pants", path)?;
    let targets: Vec<SphereClass> = match sphere {
        Some(arg) => vec![parse_sphere(arg, pants.manifold())?],
        None => pants.spheres().to_vec(),
    };
    let mut results = Vec::new();
    let mut found_total = 0u64;
    for a in &targets {
        let outcome = pants
            .split_spheres_for(a)
            .map_err(|e| usage(e.to_string()))?;
        for note in outcome.notes() {
            report.frontier.push(format!("at {a}: {note}"));
        }
        let found = outcome.found();
        found_total += found.len() as u64;
        report.check(
            &format!("slots at {a}"),
            true,
            if outcome.is_self_adjacent() {
                "self-adjacent; no split spheres".to_string()
            } else {
                format!("{} of 2 slots realized in the model", found.len())
            },
        );
        results.push(json!({ "sphere": a, "outcome": outcome }));
    }
    report.count("split spheres found", found_total);
    report.certificates = json!(results);
    Ok(report)
}

pub fn run_exchange(
    path: &Path,
    at: &str,
    with: &str,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let mut report = Report::new("glued exchange");
    report.param("input", path.display());
    let pants = load_pants(&mut report, "pants", path)?;
    let a = parse_sphere(at, pants.manifold())?;
    let b = parse_sphere(with, pants.manifold())?;
    report.param("at", &a);
    report.param("with", &b);
    let exchanged = pants.exchange(&a, &b).map_err(|e| usage(e.to_string()))?;
    // The reverse exchange restores the original decomposition.
    let back = exchanged
        .exchange(&b, &a)
        .map_err(|e| usage(e.to_string()))?;
    report.check("exchange reversible", back == pants, "");
    report.certificates = json!({ "pants": exchanged });
    if let Some(path) = out {
        let mut s = serde_json::to_string_pretty(&exchanged).expect("pants serialize");
        s.push('\n');
        write_output(path, &s)?;
    }
    Ok(report)
}
