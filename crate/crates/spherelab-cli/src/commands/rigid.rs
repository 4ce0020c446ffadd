//! `rigid`: building, auditing, expanding, and exhausting the finite
//! vertex sets of the glued model.

use std::path::Path;

use serde_json::json;
use spherelab::disks::good_pair_check;
use spherelab::error::Error;
use spherelab::glued::SphereClass;
use spherelab::rigid::{
    build_rigid_set, detect_intersection, expand_fully_split, exhaust, resolve_budget, RigidSetX,
};

use crate::commands::glued::{load_pants, parse_sphere};
use crate::report::{parse_json, read_input, usage, write_output, CliError, Report};

pub fn run_build(n: u8, out: Option<&Path>) -> Result<Report, CliError> {
    let mut report = Report::new("rigid build");
    report.param("n", n);
    let x = build_rigid_set(n).map_err(|e| usage(e.to_string()))?;
    report.count("vertices", x.vertex_count() as u64);
    report.count("handle spheres", x.y_spheres().len() as u64);
    report.count("interior spheres", x.interior_spheres().len() as u64);
    report.count("good pairs", x.good_pairs().len() as u64);
    for pair in x.good_pairs() {
        let ok = good_pair_check(&pair.goodness_prime, &pair.goodness_second)
            .map_err(|e| usage(e.to_string()))?;
        report.check(
            &format!("good pair at {}", SphereClass::Y(pair.y)),
            ok,
            format!("{} and {}", pair.a_prime, pair.a_second),
        );
    }
    report.certificates = json!({ "set": x });
    if let Some(path) = out {
        let mut s = serde_json::to_string_pretty(&x).expect("rigid set serializes");
        s.push('\n');
        write_output(path, &s)?;
    }
    Ok(report)
}

pub fn load_rigid_set(report: &mut Report, path: &Path) -> Result<RigidSetX, CliError> {
    let bytes = read_input(report, "set", path)?;
    parse_json(&bytes, "rigid set JSON")
}

pub fn run_detect(
    path: &Path,
    alpha: &str,
    beta: &str,
    budget: Option<u64>,
) -> Result<Report, CliError> {
    let mut report = Report::new("rigid detect");
    report.param("x", path.display());
    let x = load_rigid_set(&mut report, path)?;
    let alpha = parse_sphere(alpha, x.manifold())?;
    let beta = parse_sphere(beta, x.manifold())?;
    report.param("alpha", &alpha);
    report.param("beta", &beta);
    let budget = resolve_budget(budget);
    report.param("budget", budget);
    let vertex_set = x.vertex_set();
    match detect_intersection(&vertex_set, &alpha, &beta, x.manifold(), Some(budget)) {
        Ok(cert) => {
            let ok = cert
                .verify(&vertex_set, x.manifold())
                .map_err(|e| usage(e.to_string()))?;
            report.check(
                "crossing detected inside the set",
                ok,
                format!("completions around {alpha} and {beta} agree off the pair"),
            );
            report.certificates = json!({ "certificate": cert });
        }
        Err(e @ Error::NotDetectable(_)) => {
            report.check("crossing detected inside the set", false, e);
        }
        Err(e) => return Err(usage(e.to_string())),
    }
    Ok(report)
}

pub fn run_expand(x_path: &Path, pants_path: &Path, out: Option<&Path>) -> Result<Report, CliError> {
    let mut report = Report::new("rigid expand");
    report.param("x", x_path.display());
    report.param("pants", pants_path.display());
    let x = load_rigid_set(&mut report, x_path)?;
    let pants = load_pants(&mut report, "pants", pants_path)?;
    if pants.manifold() != x.manifold() {
        return Err(usage("the decomposition lives over a different manifold"));
    }
    let outcome = expand_fully_split(&x.vertex_set(), &pants).map_err(|e| usage(e.to_string()))?;
    report.count("vertices before", x.vertex_count() as u64);
    report.count("vertices after", outcome.expanded.len() as u64);
    report.count("added", outcome.added.len() as u64);
    report.count("certificates", outcome.certificates.len() as u64);
    report.check("layers exhausted", outcome.layers_exhaustive, "");
    report.check(
        "fully split",
        outcome.fully_split,
        "every realized split sphere lies in the expansion",
    );
    for (i, cert) in outcome.certificates.iter().enumerate() {
        let ok = cert.verify().map_err(|e| usage(e.to_string()))?;
        report.check(&format!("split pair {i} at {}", cert.a), ok, "");
    }
    report.frontier = outcome.frontier.clone();
    report.certificates = json!({ "expansion": outcome });
    if let Some(path) = out {
        let mut s = serde_json::to_string_pretty(&outcome).expect("expansion serializes");
        s.push('\n');
        write_output(path, &s)?;
    }
    Ok(report)
}

pub fn run_exhaust(n: u8, depth: usize, out: Option<&Path>) -> Result<Report, CliError> {
    let mut report = Report::new("rigid exhaust");
    report.param("n", n);
    report.param("depth", depth);
    let outcome = exhaust(n, depth).map_err(|e| usage(e.to_string()))?;
    report.count("vertices", outcome.vertices.len() as u64);
    for layer in &outcome.layers {
        report.count(
            &format!("layer {} vertices", layer.index),
            layer.vertices_after as u64,
        );
        report.count(
            &format!("layer {} next decompositions", layer.index),
            layer.next_layer_size as u64,
        );
        report.check(
            &format!("layer {} next layer contained", layer.index),
            layer.next_layer_contained,
            "every sphere of every exchanged decomposition lies in the set",
        );
        report.check(
            &format!("layer {} next layer split", layer.index),
            layer.next_layer_split,
            "every exchanged decomposition has a split sphere in the set",
        );
        for f in &layer.frontier {
            report.frontier.push(format!("layer {}: {f}", layer.index));
        }
    }
    report.certificates = json!({ "exhaustion": outcome });
    if let Some(path) = out {
        let mut s = serde_json::to_string_pretty(&outcome).expect("report serializes");
        s.push('\n');
        write_output(path, &s)?;
    }
    Ok(report)
}
