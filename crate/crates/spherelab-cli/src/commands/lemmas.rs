//! `verify-lemma`: bundled re-checks of the statements the library rests
//! on.  Each bundle is a named battery; any failing check exits nonzero.

use std::collections::BTreeSet;

use serde_json::json;
use spherelab::autom::{automorphism_group, kneser_graph, sym_action_matches};
use spherelab::disks::good_pair_check;
use spherelab::error::Error;
use spherelab::glued::SphereClass;
use spherelab::punctured::{build_complex, construct_split_pairs, TreePants};
use spherelab::rank2::{build_farey_fins, witness_battery};
use spherelab::rigid::{build_rigid_set, expand_fully_split};
use spherelab::splits::{self, Split};

use crate::report::{usage, CliError, Report};

fn factorial(n: u8) -> u64 {
    (1..=n as u64).product()
}

/// Double factorial (2s-5)!!, the pants count of the s-holed tree model.
fn pants_count(s: u8) -> u64 {
    (1..=2 * s as u64 - 5).step_by(2).product()
}

/// A vertex of the tree model is pinned down by which size-2 vertices it is
/// adjacent to, provided its own size is at least 3.
pub fn run_partition_determines(s: Option<u8>) -> Result<Report, CliError> {
    let mut report = Report::new("verify-lemma partition-determines");
    // Size-3 vertices first appear at s = 6; below that the statement is
    // vacuous, so the default sweep starts there.
    let range: Vec<u8> = match s {
        Some(v) => vec![v],
        None => vec![6, 7],
    };
    report.param(
        "s",
        range
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    for &s in &range {
        let complex = build_complex(s).map_err(|e| usage(e.to_string()))?;
        let vertices = complex.vertices();
        report.count(&format!("s={s} vertices"), vertices.len() as u64);
        let expected = (1u64 << (s - 1)) - 1 - s as u64;
        report.check(
            &format!("s={s}: vertex count matches the closed form"),
            vertices.len() as u64 == expected,
            format!("expected {expected}"),
        );
        let mut tested = 0u64;
        let mut all = true;
        for u in vertices {
            if splits::size(u) < 3 {
                continue;
            }
            tested += 1;
            if !complex.verify_unique(u).map_err(|e| usage(e.to_string()))? {
                all = false;
            }
        }
        report.count(&format!("s={s} vertices of size >= 3"), tested);
        report.check(
            &format!("s={s}: size-2 neighborhood determines the vertex"),
            all,
            format!("{tested} vertices re-derived from their size-2 links"),
        );
        let pants = complex.enumerate_pants().len() as u64;
        report.count(&format!("s={s} pants decompositions"), pants);
        report.check(
            &format!("s={s}: pants count matches the double factorial"),
            pants == pants_count(s),
            format!("expected {}", pants_count(s)),
        );
    }
    report.certificates = json!({ "ground_sizes": range });
    Ok(report)
}

/// The automorphisms of the size-2 subcomplex are exactly the label
/// permutations.
pub fn run_kneser(s: Option<u8>, expect: Option<u64>) -> Result<Report, CliError> {
    let mut report = Report::new("verify-lemma kneser");
    let range: Vec<u8> = match s {
        Some(v) => vec![v],
        None => vec![5, 6, 7],
    };
    report.param(
        "s",
        range
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let mut orders = Vec::new();
    for &s in &range {
        let g = kneser_graph(s);
        let group = automorphism_group(&g).map_err(|e| usage(e.to_string()))?;
        report.count(&format!("s={s} order"), group.order);
        let expected = expect.unwrap_or_else(|| factorial(s));
        report.check(
            &format!("s={s}: group order is {expected}"),
            group.order == expected,
            format!("found {}", group.order),
        );
        let matches = sym_action_matches(s).map_err(|e| usage(e.to_string()))?;
        report.check(
            &format!("s={s}: every automorphism is a label permutation"),
            matches,
            "",
        );
        orders.push(json!({ "s": s, "order": group.order }));
    }
    report.certificates = json!({ "orders": orders });
    Ok(report)
}

/// The third spheres of two crossing pairs sharing a sphere cross each other
/// and everything in sight; frozen on the six-boundary example.
pub fn run_evil_twins() -> Result<Report, CliError> {
    let mut report = Report::new("verify-lemma evil-twins");
    let mk = |piece: &[u8]| Split::new(6, piece).map_err(|e| usage(e.to_string()));
    let a = mk(&[1, 2, 3])?;
    let b = mk(&[1, 6])?;
    let c = mk(&[3, 4])?;
    report.param("a", a);
    report.param("b", b);
    report.param("c", c);
    let b_twin = splits::m04_third_sphere(&a, &b).map_err(|e| usage(e.to_string()))?;
    let c_twin = splits::m04_third_sphere(&a, &c).map_err(|e| usage(e.to_string()))?;
    report.check(
        "twin of b is {1,4,5}",
        b_twin == mk(&[1, 4, 5])?,
        format!("found {b_twin}"),
    );
    report.check(
        "twin of c is {3,5,6}",
        c_twin == mk(&[3, 5, 6])?,
        format!("found {c_twin}"),
    );
    let mut pattern = true;
    for (u, v) in [
        (&b_twin, &c_twin),
        (&b_twin, &b),
        (&b_twin, &c),
        (&c_twin, &b),
        (&c_twin, &c),
    ] {
        if !splits::intersects(u, v).map_err(|e| usage(e.to_string()))? {
            pattern = false;
        }
    }
    report.check(
        "twins cross each other and both original spheres",
        pattern,
        "",
    );
    report.certificates = json!({ "a": a, "b": b, "c": c, "b_twin": b_twin, "c_twin": c_twin });
    Ok(report)
}

/// Exchanging a sphere of a pants decomposition pairs up the split spheres
/// of its neighbors; frozen on the five-boundary example.
pub fn run_split_pairs() -> Result<Report, CliError> {
    let mut report = Report::new("verify-lemma split-pairs");
    let mk = |piece: &[u8]| Split::new(5, piece).map_err(|e| usage(e.to_string()));
    let a = mk(&[1, 2])?;
    let b = mk(&[2, 3])?;
    let c = mk(&[4, 5])?;
    report.param("a", a);
    report.param("b", b);
    report.param("c", c);
    let p = TreePants::new(5, &[a, c]).map_err(|e| usage(e.to_string()))?;
    let pairs = construct_split_pairs(&p, &a, &c, &b).map_err(|e| usage(e.to_string()))?;
    let got: BTreeSet<(Split, Split)> = pairs.iter().map(|sp| (sp.d, sp.e)).collect();
    let want: BTreeSet<(Split, Split)> = [
        (mk(&[3, 4])?, mk(&[1, 5])?),
        (mk(&[3, 5])?, mk(&[1, 4])?),
    ]
    .into_iter()
    .collect();
    report.check(
        "split pairs are ({3,4},{1,5}) and ({3,5},{1,4})",
        got == want,
        format!(
            "found {}",
            got.iter()
                .map(|(d, e)| format!("({d},{e})"))
                .collect::<Vec<_>>()
                .join(" and ")
        ),
    );
    for sp in &pairs {
        let ok = sp.verify().map_err(|e| usage(e.to_string()))?;
        report.check(
            &format!("pair at d={} verifies", sp.d),
            ok,
            format!("partner {}, twins {} and {}", sp.e, sp.twins.0, sp.twins.1),
        );
    }
    report.certificates = json!({ "pairs": pairs });
    Ok(report)
}

/// Good pairs exist from three handles up, every pair passes the capped-disk
/// goodness check, and each member is detectably crossing its handle sphere.
pub fn run_good_pairs(n: u8, budget: Option<u64>) -> Result<Report, CliError> {
    let mut report = Report::new("verify-lemma good-pairs");
    report.param("n", n);
    match build_rigid_set(n) {
        Ok(x) => {
            report.count("vertices", x.vertex_count() as u64);
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
            let certs = x
                .detectability_audit(budget)
                .map_err(|e| usage(e.to_string()))?;
            report.count("detectability certificates", certs.len() as u64);
            let vertex_set = x.vertex_set();
            for cert in &certs {
                let ok = cert
                    .verify(&vertex_set, x.manifold())
                    .map_err(|e| usage(e.to_string()))?;
                report.check(
                    &format!("{} against {} is detectable", cert.alpha, cert.beta),
                    ok,
                    "",
                );
            }
            report.certificates = json!({ "certificates": certs });
        }
        Err(Error::CannotPlaceGoodPairs(k)) => {
            report.check(
                "construction refuses below three handles",
                true,
                format!("no disjoint good pairs fit with {k} handles"),
            );
            report.certificates = json!({ "refused": n });
        }
        Err(e) => return Err(usage(e.to_string())),
    }
    Ok(report)
}

/// Expanding the base decomposition of the rigid candidate set adds nothing:
/// the set is already closed under split-sphere completion there.
pub fn run_fully_split(n: u8) -> Result<Report, CliError> {
    let mut report = Report::new("verify-lemma fully-split");
    report.param("n", n);
    let x = build_rigid_set(n).map_err(|e| usage(e.to_string()))?;
    let p = x.base_pants().map_err(|e| usage(e.to_string()))?;
    let vertex_set = x.vertex_set();
    let first = expand_fully_split(&vertex_set, &p).map_err(|e| usage(e.to_string()))?;
    report.count("vertices before", vertex_set.len() as u64);
    report.count("vertices after", first.expanded.len() as u64);
    report.count("added", first.added.len() as u64);
    report.check("layers exhausted", first.layers_exhaustive, "");
    report.check(
        "fully split",
        first.fully_split,
        "every realized split sphere lies in the expansion",
    );
    for (i, cert) in first.certificates.iter().enumerate() {
        let ok = cert.verify().map_err(|e| usage(e.to_string()))?;
        report.check(&format!("split pair {i} at {}", cert.a), ok, "");
    }
    let again = expand_fully_split(&first.expanded, &p).map_err(|e| usage(e.to_string()))?;
    report.check(
        "expansion is idempotent",
        again.expanded == first.expanded && again.added.is_empty(),
        "re-expanding the result adds nothing",
    );
    report.frontier = first.frontier.clone();
    report.certificates = json!({ "expansion": first });
    Ok(report)
}

/// Seeded battery: every sampled connected subgraph of the ball yields a
/// verified non-rigidity witness.
pub fn run_rank2_battery(depth: usize, seed: u64) -> Result<Report, CliError> {
    let mut report = Report::new("verify-lemma rank2-battery");
    const ROUNDS: usize = 50;
    const MAX_VERTICES: usize = 15;
    report.param("depth", depth);
    report.param("seed", seed);
    report.param("rounds", ROUNDS);
    let g = build_farey_fins(depth);
    let battery =
        witness_battery(&g, seed, ROUNDS, MAX_VERTICES).map_err(|e| usage(e.to_string()))?;
    report.count("rounds", battery.rounds.len() as u64);
    report.count("verified", battery.verified_count as u64);
    let mut by_case: std::collections::BTreeMap<String, u64> = Default::default();
    for round in &battery.rounds {
        *by_case.entry(round.case.clone()).or_default() += 1;
    }
    for (case, count) in &by_case {
        report.count(&format!("case {case}"), *count);
    }
    report.check(
        "every sampled subgraph has a verified witness",
        battery.verified_count == battery.rounds.len(),
        format!("{}/{}", battery.verified_count, battery.rounds.len()),
    );
    report.certificates = json!({ "battery": battery });
    Ok(report)
}
