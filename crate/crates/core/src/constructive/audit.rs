//! A battery of structural checks for partition snapshots. This module
//! re-derives every structure and checks the deeper properties the search
//! relies on, reporting violations with vertex witnesses instead of
//! panicking. The driver consults it once per candidate fixed point (a
//! dirty candidate is abandoned and the attempt reseeds); the per-switch
//! hot loops never run it. Tests run it over recorded fixed points.

use super::aux_graph::{embed_cycle, AuxGraph, Embedding, Shape};
use super::partition::{Partition, Side, SideAssignment};
use super::rings::ring_geometry;
use crate::graph::{Graph, Vertex, INFINITY};
use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct AuditViolation {
    /// Stable kebab-case rule name.
    pub rule: &'static str,
    /// Vertices that exhibit the problem.
    pub witness: Vec<Vertex>,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub violations: Vec<AuditViolation>,
    /// Observations worth surfacing that are not failures (for example a
    /// free component shaped like a tree rather than a path).
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn flag(&mut self, rule: &'static str, witness: Vec<Vertex>, detail: impl Into<String>) {
        self.violations.push(AuditViolation {
            rule,
            witness,
            detail: detail.into(),
        });
    }
}

/// A self-contained JSON record of an audited state, for persisting the
/// witness when a check fails.
pub fn witness_json(g: &Graph, assignment: &SideAssignment, report: &AuditReport) -> String {
    let sides: Vec<serde_json::Value> = assignment
        .iter()
        .map(|s| match s {
            Some(Side::A) => serde_json::json!(0),
            Some(Side::B) => serde_json::json!(1),
            None => serde_json::Value::Null,
        })
        .collect();
    let violations: Vec<serde_json::Value> = report
        .violations
        .iter()
        .map(|v| {
            serde_json::json!({
                "rule": v.rule,
                "witness": v.witness,
                "detail": v.detail,
            })
        })
        .collect();
    serde_json::json!({
        "graph6": crate::graph6::emit_graph6(g).ok(),
        "assignment": sides,
        "violations": violations,
        "notes": report.notes,
    })
    .to_string()
}

fn common_neighbors(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let mut set = g.neighbor_set(u).clone();
    set.intersect_with(g.neighbor_set(v));
    set.to_vec()
}

/// Orders a path-shaped component from one endpoint to the other.
fn path_order(aux: &AuxGraph, comp: &[Vertex]) -> Vec<Vertex> {
    if comp.len() == 1 {
        return comp.to_vec();
    }
    let start = *comp
        .iter()
        .find(|&&v| aux.degree(v) <= 1)
        .expect("path has an endpoint");
    let mut order = vec![start];
    let mut prev = None;
    loop {
        let cur = *order.last().unwrap();
        let next = aux
            .neighbors_of(cur)
            .iter()
            .find(|&w| Some(w) != prev);
        match next {
            Some(w) => {
                prev = Some(cur);
                order.push(w);
            }
            None => break,
        }
    }
    order
}

/// Checks a snapshot against everything the search assumes about its fixed
/// points: independent sides, frees seeing both sides, free components no
/// larger than an edge, at most one adjacent free pair per component, no
/// tangled components, and for every cycle component a chordless star or
/// ring structure whose surroundings behave — colored up to distance two,
/// no illegal shared neighbors, consistent middle sides along path
/// realizations, no four-step connection between a stray free vertex's
/// neighbor and the unique cycle, and distinct star attachments.
pub fn audit(g: &Graph, assignment: &SideAssignment) -> AuditReport {
    let mut report = AuditReport::default();
    let n = g.vertex_count();
    if assignment.len() != n {
        report.flag(
            "assignment-length",
            vec![],
            format!("{} entries for {} vertices", assignment.len(), n),
        );
        return report;
    }

    for (u, v) in g.edges() {
        if assignment[u].is_some() && assignment[u] == assignment[v] {
            report.flag(
                "side-independence",
                vec![u, v],
                "adjacent vertices share a side",
            );
        }
    }

    let p = match Partition::from_assignment_lenient(n, assignment) {
        Ok(p) => p,
        Err(e) => {
            report.flag("assignment-shape", vec![], e.to_string());
            return report;
        }
    };

    for v in 0..n {
        if !p.is_free(v) {
            continue;
        }
        for s in [Side::A, Side::B] {
            if p.side_neighbors(g, v, s) == 0 {
                report.flag(
                    "free-missing-side",
                    vec![v],
                    format!("free vertex sees no {s:?}-side neighbor"),
                );
            }
        }
    }

    for comp in p.free_components(g) {
        if comp.len() > 2 {
            report.flag(
                "free-component-size",
                comp.clone(),
                "free vertices form a component larger than an edge",
            );
        }
    }

    let balls = g.second_neighborhoods();
    let aux = AuxGraph::build(&p, &balls);
    let comps = aux.components();

    let mut cycle_comps: Vec<&Vec<Vertex>> = Vec::new();
    for comp in &comps {
        let pairs: Vec<(Vertex, Vertex)> = comp
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| {
                comp[i + 1..]
                    .iter()
                    .filter(move |&&v| g.has_edge(u, v))
                    .map(move |&v| (u, v))
            })
            .collect();
        if pairs.len() > 1 {
            report.flag(
                "pair-count",
                comp.clone(),
                format!("{} adjacent free pairs in one component", pairs.len()),
            );
        }
        match aux.classify(comp) {
            Shape::Tangle => {
                report.flag("component-shape", comp.clone(), "component tangles");
            }
            Shape::Tree => {
                report
                    .notes
                    .push(format!("free component {comp:?} is a tree, not a path"));
            }
            Shape::Cycle => cycle_comps.push(comp),
            Shape::Path => {}
        }
    }

    // Path components: some one side must be able to host every interior
    // colored vertex of a shortest realization.
    for comp in &comps {
        if aux.classify(comp) != Shape::Path || comp.len() < 2 {
            continue;
        }
        let order = path_order(&aux, comp);
        let mut feasible = [true; 2];
        for w in order.windows(2) {
            if g.has_edge(w[0], w[1]) {
                continue;
            }
            let mut here = [false; 2];
            for m in common_neighbors(g, w[0], w[1]) {
                match p.side_of(m) {
                    Some(Side::A) => here[0] = true,
                    Some(Side::B) => here[1] = true,
                    None => {}
                }
            }
            feasible[0] &= here[0];
            feasible[1] &= here[1];
        }
        if !feasible[0] && !feasible[1] {
            report.flag(
                "path-middle-sides",
                comp.clone(),
                "no single side hosts middles for the whole path",
            );
        }
    }

    for comp in &cycle_comps {
        let emb = match embed_cycle(g, &p, &aux, comp) {
            Ok(e) => e,
            Err(e) => {
                report.flag("cycle-structure", (*comp).clone(), e);
                continue;
            }
        };
        match &emb {
            Embedding::Star { hub, members } => {
                // Attachments of the three members, hub aside, never
                // coincide.
                let mut seen: Vec<(Vertex, Vertex)> = Vec::new();
                for &m in members {
                    for &w in g.neighbors(m) {
                        if w == *hub {
                            continue;
                        }
                        if let Some(&(m0, _)) = seen.iter().find(|&&(_, w0)| w0 == w) {
                            if m0 != m {
                                report.flag(
                                    "star-attachments-collide",
                                    vec![m0, m, w],
                                    "two star members attach to the same vertex",
                                );
                            }
                        }
                        seen.push((m, w));
                    }
                }
            }
            Embedding::Ring { middles, .. } => {
                let geo = match ring_geometry(&p, &emb) {
                    Ok(geo) => geo,
                    Err(e) => {
                        report.flag("middle-sides", (*comp).clone(), e);
                        continue;
                    }
                };
                audit_ring(g, &p, &geo, middles, comp, &mut report);
            }
        }

        if cycle_comps.len() == 1 {
            audit_third_admission(g, &p, &emb, comp, &mut report);
        }
    }

    report
}

fn audit_ring(
    g: &Graph,
    p: &Partition,
    geo: &super::rings::RingGeometry,
    middles: &[Option<Vertex>],
    comp: &[Vertex],
    report: &mut AuditReport,
) {
    let walk = &geo.cycle;
    let l = walk.len();
    let on_walk = |v: Vertex| walk.contains(&v);

    // Chordless: the only edges among structure vertices are the walk's.
    for i in 0..l {
        for j in i + 1..l {
            let consecutive = j == i + 1 || (i == 0 && j == l - 1);
            if !consecutive && g.has_edge(walk[i], walk[j]) {
                report.flag(
                    "ring-chord",
                    vec![walk[i], walk[j]],
                    "edge between non-consecutive structure vertices",
                );
            }
        }
    }

    // Everything at distance one or two from the structure is colored.
    let mut dist = vec![INFINITY; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &v in walk {
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] >= 2 {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == INFINITY {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    for v in 0..g.vertex_count() {
        if !on_walk(v) && (1..=2).contains(&dist[v]) && p.is_free(v) {
            report.flag(
                "near-cycle-colored",
                vec![v],
                format!("free vertex at distance {} from a cycle structure", dist[v]),
            );
        }
    }

    // Shared-neighbor rules along the structure.
    let members: Vec<Vertex> = comp.to_vec();
    let pair: Option<(Vertex, Vertex)> = geo
        .pair_edge
        .map(|e| (walk[e], walk[(e + 1) % l]));
    for (a, &u) in members.iter().enumerate() {
        for &v in members.iter().skip(a + 1) {
            if pair == Some((u, v)) || pair == Some((v, u)) {
                continue;
            }
            let shared: Vec<Vertex> = common_neighbors(g, u, v)
                .into_iter()
                .filter(|&w| !on_walk(w))
                .collect();
            if let Some(&w) = shared.first() {
                report.flag(
                    "members-share-neighbour",
                    vec![u, v, w],
                    "two members share a neighbor off the structure",
                );
            }
        }
    }
    for i in 0..l {
        let (u, v) = (walk[i], walk[(i + 1) % l]);
        if let Some(&w) = common_neighbors(g, u, v).first() {
            report.flag(
                "consecutive-share",
                vec![u, v, w],
                "consecutive structure vertices share a neighbor",
            );
        }
        let x = walk[(i + 2) % l];
        let shared: Vec<Vertex> = common_neighbors(g, u, x)
            .into_iter()
            .filter(|&w| !on_walk(w))
            .collect();
        if let Some(&w) = shared.first() {
            report.flag(
                "distance-two-share",
                vec![u, x, w],
                "structure vertices two apart share a neighbor off the structure",
            );
        }
    }
    if members.len() != 3 {
        let ring_middles: Vec<Vertex> = middles.iter().flatten().copied().collect();
        for &u in &members {
            if !p.is_lone_free(g, u) {
                continue;
            }
            for &m in &ring_middles {
                let shared: Vec<Vertex> = common_neighbors(g, u, m)
                    .into_iter()
                    .filter(|&w| !on_walk(w))
                    .collect();
                if let Some(&w) = shared.first() {
                    report.flag(
                        "free-black-share",
                        vec![u, m, w],
                        "a lone free and a colored structure vertex share an outside neighbor",
                    );
                }
            }
        }
    }
}

/// With a unique cycle component, no free vertex off it may have a
/// neighbor sitting in the middle of a four-edge path between two
/// structure vertices whose interior avoids the structure.
fn audit_third_admission(
    g: &Graph,
    p: &Partition,
    emb: &Embedding,
    comp: &[Vertex],
    report: &mut AuditReport,
) {
    let anchor: Vec<Vertex> = match emb {
        Embedding::Star { .. } => emb.members(),
        Embedding::Ring { .. } => emb.structure_vertices(),
    };
    let in_anchor = |v: Vertex| anchor.contains(&v);
    for z in 0..g.vertex_count() {
        if !p.is_free(z) || comp.contains(&z) {
            continue;
        }
        for &w in g.neighbors(z) {
            let around: Vec<Vertex> = g
                .neighbors(w)
                .iter()
                .copied()
                .filter(|&u| !in_anchor(u) && u != w)
                .collect();
            for &u in &around {
                for &v in &around {
                    if u == v {
                        continue;
                    }
                    for &u1 in g.neighbors(u) {
                        if !in_anchor(u1) || u1 == w || u1 == v {
                            continue;
                        }
                        for &u2 in g.neighbors(v) {
                            if !in_anchor(u2) || u2 == u1 || u2 == w || u2 == u {
                                continue;
                            }
                            report.flag(
                                "third-admission",
                                vec![z, w, u1, u, v, u2],
                                "a stray free vertex reaches the cycle through a four-edge detour",
                            );
                            return;
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructive::driver::{solve_1122_logged, SolverOptions};
    use crate::graph;

    #[test]
    fn driver_fixed_points_audit_clean() {
        for g in [
            graph::cycle(5).unwrap(),
            graph::cycle(7).unwrap(),
            graph::complete(4),
            graph::prism(3).unwrap(),
        ] {
            let (res, log) = solve_1122_logged(&g, &SolverOptions::default());
            assert!(res.is_ok());
            for snap in &log.fixed_points {
                let report = audit(&g, snap);
                assert!(
                    report.is_clean(),
                    "violations {:?}",
                    report.violations
                );
            }
        }
    }

    #[test]
    fn missing_side_is_flagged() {
        let g = graph::path(3).unwrap();
        let assignment = vec![Some(Side::A), None, None];
        let report = audit(&g, &assignment);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "free-missing-side"));
    }

    #[test]
    fn planted_chord_is_flagged() {
        // An eight-ring with alternating colored middles, plus a chord
        // between two middles: the sides stop being independent and the
        // structure stops being chordless.
        let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        edges.push((1, 5));
        let g = Graph::from_edges(8, &edges).unwrap();
        let assignment: SideAssignment = (0..8)
            .map(|v| if v % 2 == 1 { Some(Side::A) } else { None })
            .collect();
        let report = audit(&g, &assignment);
        let rules: Vec<&str> = report.violations.iter().map(|v| v.rule).collect();
        assert!(rules.contains(&"side-independence"), "{rules:?}");
        assert!(rules.contains(&"ring-chord"), "{rules:?}");
    }

    #[test]
    fn shared_outside_neighbor_is_flagged() {
        // A six-ring whose members 0 and 2 both attach to an extra vertex.
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.push((0, 6));
        edges.push((2, 6));
        let g = Graph::from_edges(7, &edges).unwrap();
        let mut assignment: SideAssignment = vec![None; 7];
        for v in [1, 3, 5] {
            assignment[v] = Some(Side::A);
        }
        assignment[6] = Some(Side::B);
        let report = audit(&g, &assignment);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "members-share-neighbour"));
    }

    #[test]
    fn witness_serializes() {
        let g = graph::path(3).unwrap();
        let assignment = vec![Some(Side::A), None, None];
        let report = audit(&g, &assignment);
        let json = witness_json(&g, &assignment, &report);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(parsed["graph6"].is_string());
        assert_eq!(parsed["assignment"][0], 0);
        assert!(parsed["violations"].as_array().map(Vec::len).unwrap() >= 1);
    }
}
