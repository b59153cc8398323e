//! Dissolving cycle components of the free-vertex auxiliary graph.
//!
//! `reduce_cycle_count` picks the two nearest cycle structures and switches
//! a free vertex off one of them toward the other; each accepted step
//! either drops the number of cycles or strictly shrinks the gap between
//! the nearest pair. `eliminate_last_cycle` then walks the final cycle
//! through a chain of switches — every non-terminal step consumes one path
//! component into the next cycle and emits the remainder of the old one —
//! until no cycle is left. Both mutate the partition only when a step is
//! accepted, so a stall leaves the last good state in place.

use super::aux_graph::{embed_cycle, AuxGraph, Embedding, Shape};
use super::partition::Partition;
use super::rings::{
    cycle_gap, edges_covering, edges_giving_lone, exchange_ring, flip_hub, ring_geometry,
};
use crate::bitset::BitSet;
use crate::graph::{Graph, Vertex};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// One committed elimination switch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// The lone free vertex that got colored.
    pub x: Vertex,
    /// The outside vertex that got freed in exchange.
    pub y: Vertex,
    /// The path component absorbed into the new cycle, sorted; `None` on
    /// the terminal step, which leaves no cycle behind.
    pub consumed: Option<Vec<Vertex>>,
    /// What remained of the old cycle component, sorted.
    pub emitted: Vec<Vertex>,
    /// Whether a rotation or member/middle exchange preceded the switch.
    pub rearranged: bool,
}

/// The outcome of an elimination run.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub steps: Vec<TraceStep>,
    /// `None` when no cycle component remains; otherwise why the chain
    /// stopped short of that.
    pub stalled: Option<String>,
}

fn split_cycles<'a>(
    aux: &AuxGraph,
    comps: &'a [Vec<Vertex>],
) -> (Vec<&'a Vec<Vertex>>, Vec<&'a Vec<Vertex>>, bool) {
    let mut cycles = Vec::new();
    let mut paths = Vec::new();
    let mut tangle = false;
    for c in comps {
        match aux.classify(c) {
            Shape::Cycle => cycles.push(c),
            Shape::Path => paths.push(c),
            Shape::Tangle => tangle = true,
            Shape::Tree => {}
        }
    }
    (cycles, paths, tangle)
}

/// Walks the last cycle component out of existence. Each step recolors a
/// lone free vertex `x` of the cycle and frees an outside neighbor `y`;
/// the step is accepted only if it leaves no cycle (terminal) or exactly
/// one new cycle made of `y` plus a previously existing path component,
/// disjoint from what the old cycle emitted. A path emitted earlier is
/// never consumed again, and the number of consuming steps cannot exceed
/// the number of path components present at entry.
pub fn eliminate_last_cycle(
    g: &Graph,
    p: &mut Partition,
    balls: &[BitSet],
    mut salt: Option<&mut ChaCha8Rng>,
) -> Elimination {
    let entry = AuxGraph::build(p, balls);
    let entry_comps = entry.components();
    let (_, entry_paths, _) = split_cycles(&entry, &entry_comps);
    let budget = entry_paths.len();

    let mut steps: Vec<TraceStep> = Vec::new();
    let mut emitted_paths: HashSet<Vec<Vertex>> = HashSet::new();
    let mut y_prev: Option<Vertex> = None;
    let mut consumed_steps = 0usize;

    loop {
        let aux = AuxGraph::build(p, balls);
        let comps = aux.components();
        let (cycles, _, _) = split_cycles(&aux, &comps);
        if cycles.is_empty() {
            return Elimination {
                steps,
                stalled: None,
            };
        }
        if cycles.len() > 1 {
            return Elimination {
                steps,
                stalled: Some("more than one cycle component during elimination".into()),
            };
        }
        let comp = cycles[0].clone();
        let emb = match embed_cycle(g, p, &aux, &comp) {
            Ok(e) => e,
            Err(e) => {
                return Elimination {
                    steps,
                    stalled: Some(format!("cycle component does not embed: {e}")),
                }
            }
        };

        // Alternative arrangements of the same structure: the state as-is,
        // rotations of a ring with a pair, and the member/middle exchange
        // on a pairless ring. On a triangle with a pair the arrangements
        // that put the previously freed vertex into the pair come first,
        // so the sole remaining lone free does the next switch.
        let mut stages: Vec<(Partition, bool)> = Vec::new();
        match &emb {
            Embedding::Star { .. } => stages.push((p.clone(), false)),
            Embedding::Ring { members, middles } => {
                if middles.iter().any(|m| m.is_none()) {
                    let geo = match ring_geometry(p, &emb) {
                        Ok(geo) => geo,
                        Err(e) => {
                            return Elimination {
                                steps,
                                stalled: Some(format!("ring geometry unavailable: {e}")),
                            }
                        }
                    };
                    let current = geo.pair_edge.expect("pair present");
                    let mut order: Vec<usize> = Vec::new();
                    if members.len() == 3 {
                        if let Some(yp) = y_prev {
                            if geo.position_of(yp).is_some() {
                                order.extend(edges_covering(&geo, yp));
                            }
                        }
                    }
                    if !order.contains(&current) {
                        order.push(current);
                    }
                    for e in 0..geo.len() {
                        if !order.contains(&e) {
                            order.push(e);
                        }
                    }
                    for e in order {
                        if e == current {
                            stages.push((p.clone(), false));
                            continue;
                        }
                        let mut q = p.clone();
                        if super::rings::rotate_pair_to(g, &mut q, &geo, &[e]).is_ok() {
                            stages.push((q, true));
                        }
                    }
                } else {
                    stages.push((p.clone(), false));
                    if let Ok(geo) = ring_geometry(p, &emb) {
                        let mut q = p.clone();
                        if exchange_ring(g, &mut q, &geo).is_ok() {
                            stages.push((q, true));
                        }
                    }
                }
            }
        }

        let mut breach_seen = false;
        let mut budget_hit = false;
        let mut adopted = false;
        'stages: for (base, rearranged) in stages {
            let aux_m = AuxGraph::build(&base, balls);
            let comps_m = aux_m.components();
            let (cycles_m, paths_m, tangle_m) = split_cycles(&aux_m, &comps_m);
            if tangle_m || cycles_m.len() != 1 {
                continue;
            }
            let comp_m = cycles_m[0].clone();
            let Ok(emb_m) = embed_cycle(g, &base, &aux_m, &comp_m) else {
                continue;
            };
            let structure: HashSet<Vertex> = emb_m.structure_vertices().into_iter().collect();
            let pre_paths: HashSet<Vec<Vertex>> = paths_m.into_iter().cloned().collect();
            let hub = match &emb_m {
                Embedding::Star { hub, .. } => Some(*hub),
                Embedding::Ring { .. } => None,
            };

            let mut cands: Vec<(Vertex, Vertex)> = Vec::new();
            for &x in &comp_m {
                if Some(x) == y_prev || !base.is_lone_free(g, x) {
                    continue;
                }
                for &y in g.neighbors(x) {
                    if !structure.contains(&y) && base.side_of(y).is_some() {
                        cands.push((x, y));
                    }
                }
            }
            if let Some(rng) = salt.as_deref_mut() {
                cands.shuffle(rng);
            }

            for (x, y) in cands {
                let mut q = base.clone();
                if let Some(h) = hub {
                    if q.side_of(h) == q.side_of(y) && flip_hub(g, &mut q, h).is_err() {
                        continue;
                    }
                }
                if !q.is_valid_switch(g, y, x) || q.switch(g, y, x).is_err() {
                    continue;
                }
                let aux2 = AuxGraph::build(&q, balls);
                let comps2 = aux2.components();
                let (cycles2, _, tangle2) = split_cycles(&aux2, &comps2);
                if tangle2 {
                    continue;
                }
                let emitted: Vec<Vertex> =
                    comp_m.iter().copied().filter(|&v| v != x).collect();
                match cycles2.len() {
                    0 => {
                        *p = q;
                        steps.push(TraceStep {
                            x,
                            y,
                            consumed: None,
                            emitted,
                            rearranged,
                        });
                        return Elimination {
                            steps,
                            stalled: None,
                        };
                    }
                    1 => {
                        let cnew = cycles2[0];
                        if !cnew.contains(&y) || cnew.iter().any(|v| emitted.contains(v)) {
                            continue;
                        }
                        let consumed: Vec<Vertex> =
                            cnew.iter().copied().filter(|&v| v != y).collect();
                        if !pre_paths.contains(&consumed) {
                            continue;
                        }
                        if emitted_paths.contains(&consumed) {
                            breach_seen = true;
                            continue;
                        }
                        if consumed_steps >= budget {
                            budget_hit = true;
                            continue;
                        }
                        *p = q;
                        emitted_paths.insert(emitted.clone());
                        steps.push(TraceStep {
                            x,
                            y,
                            consumed: Some(consumed),
                            emitted,
                            rearranged,
                        });
                        y_prev = Some(y);
                        consumed_steps += 1;
                        adopted = true;
                        break 'stages;
                    }
                    _ => continue,
                }
            }
        }

        if !adopted {
            let reason = if budget_hit {
                "elimination ran past its path-consumption budget".to_string()
            } else if breach_seen {
                "elimination blocked: every continuation would re-consume an emitted path"
                    .to_string()
            } else {
                match &emb {
                    Embedding::Star { .. } => {
                        "no clean switch from a star component".to_string()
                    }
                    Embedding::Ring { members, .. } if members.len() == 3 => {
                        "no clean switch from a triangle component".to_string()
                    }
                    Embedding::Ring { .. } => {
                        "invariant violation: a long ring offered no clean switch".to_string()
                    }
                }
            };
            return Elimination {
                steps,
                stalled: Some(reason),
            };
        }
    }
}

/// One committed reduction switch.
#[derive(Clone, Debug)]
pub struct ReduceStep {
    pub x: Vertex,
    pub y: Vertex,
    pub cycles_before: usize,
    pub gap_before: u32,
    pub cycles_after: usize,
    /// Gap between the nearest cycle structures after the switch, when two
    /// or more remain and all of them still embed.
    pub gap_after: Option<u32>,
    pub rearranged: bool,
}

fn embedded_structures(
    g: &Graph,
    p: &Partition,
    aux: &AuxGraph,
    cycles: &[&Vec<Vertex>],
) -> Option<Vec<Vec<Vertex>>> {
    let mut out = Vec::with_capacity(cycles.len());
    for c in cycles {
        out.push(embed_cycle(g, p, aux, c).ok()?.structure_vertices());
    }
    Some(out)
}

/// Measures a tentative post-switch state against `(cycles, gap)`. A state
/// is an advance if it has strictly fewer cycle components, or as many but
/// with a strictly smaller gap between the nearest two structures. Tangled
/// states are never adopted.
fn measure_advance(
    g: &Graph,
    q: &Partition,
    balls: &[BitSet],
    n_before: usize,
    gap_before: u32,
) -> Option<(usize, Option<u32>)> {
    let aux2 = AuxGraph::build(q, balls);
    let comps2 = aux2.components();
    let (cycles2, _, tangle2) = split_cycles(&aux2, &comps2);
    if tangle2 {
        return None;
    }
    let n_after = cycles2.len();
    let gap_after = embedded_structures(g, q, &aux2, &cycles2)
        .and_then(|st| cycle_gap(g, &st))
        .map(|w| w.dist);
    if n_after < n_before {
        return Some((n_after, gap_after));
    }
    if n_after == n_before {
        if let Some(d) = gap_after {
            if d < gap_before {
                return Some((n_after, gap_after));
            }
        }
    }
    None
}

/// With at least two cycle components present, finds a switch that either
/// merges/breaks one of them or pulls the nearest pair of structures
/// strictly closer, and commits it. The preferred move takes the shortest
/// path between the two nearest structures and recolors its endpoint into
/// its first interior vertex, rearranging the endpoint's structure first
/// so the endpoint is a lone free vertex.
pub fn reduce_cycle_count(
    g: &Graph,
    p: &mut Partition,
    balls: &[BitSet],
    mut salt: Option<&mut ChaCha8Rng>,
) -> Result<ReduceStep, String> {
    let aux = AuxGraph::build(p, balls);
    let comps = aux.components();
    let (cycles, _, _) = split_cycles(&aux, &comps);
    if cycles.len() < 2 {
        return Err("reduction needs at least two cycle components".into());
    }
    let n_before = cycles.len();
    let mut embs = Vec::with_capacity(cycles.len());
    let mut structures = Vec::with_capacity(cycles.len());
    for c in &cycles {
        let e = embed_cycle(g, p, &aux, c)
            .map_err(|e| format!("cycle component does not embed: {e}"))?;
        structures.push(e.structure_vertices());
        embs.push(e);
    }
    let w = cycle_gap(g, &structures).ok_or("cycle structures do not see each other")?;
    let gap_before = w.dist;

    let commit = |p: &mut Partition, q: Partition, x, y, rearranged, after: (usize, Option<u32>)| {
        *p = q;
        ReduceStep {
            x,
            y,
            cycles_before: n_before,
            gap_before,
            cycles_after: after.0,
            gap_after: after.1,
            rearranged,
        }
    };

    // Preferred: walk the shortest path between the nearest structures,
    // from either end.
    let mut reversed = w.path.clone();
    reversed.reverse();
    let mut orientations = vec![(w.path.clone(), w.from), (reversed, w.to)];
    if let Some(rng) = salt.as_deref_mut() {
        orientations.shuffle(rng);
    }
    for (path, ci) in orientations {
        let u1 = path[0];
        let v1 = path[1];
        if p.side_of(v1).is_none() {
            continue;
        }
        let mut bases: Vec<(Partition, bool)> = Vec::new();
        match &embs[ci] {
            Embedding::Star { hub, .. } => {
                if u1 == *hub {
                    continue;
                }
                let mut base = p.clone();
                if base.side_of(*hub) == base.side_of(v1) && flip_hub(g, &mut base, *hub).is_err()
                {
                    continue;
                }
                bases.push((base, false));
            }
            emb @ Embedding::Ring { .. } => {
                if p.is_lone_free(g, u1) {
                    bases.push((p.clone(), false));
                } else if let Ok(geo) = ring_geometry(p, emb) {
                    if geo.pair_edge.is_some() {
                        if geo.position_of(u1).is_some() {
                            let targets = edges_giving_lone(&geo, u1);
                            let mut q = p.clone();
                            if super::rings::rotate_pair_to(g, &mut q, &geo, &targets).is_ok() {
                                bases.push((q, true));
                            }
                        }
                    } else if p.side_of(u1).is_some() {
                        let mut q = p.clone();
                        if exchange_ring(g, &mut q, &geo).is_ok() {
                            bases.push((q, true));
                        }
                    }
                }
            }
        }
        for (base, rearranged) in bases {
            if !base.is_lone_free(g, u1) || !base.is_valid_switch(g, v1, u1) {
                continue;
            }
            let mut q = base;
            if q.switch(g, v1, u1).is_err() {
                continue;
            }
            if let Some(after) = measure_advance(g, &q, balls, n_before, gap_before) {
                return Ok(commit(p, q, u1, v1, rearranged, after));
            }
        }
    }

    // Fallback: any member of any cycle switched with any colored vertex
    // off its own structure, first as-is, then after exchanging a pairless
    // ring.
    let mut direct: Vec<(usize, Vertex, Vertex)> = Vec::new();
    for (ci, c) in cycles.iter().enumerate() {
        let structure: HashSet<Vertex> = structures[ci].iter().copied().collect();
        for &x in c.iter() {
            if !p.is_lone_free(g, x) {
                continue;
            }
            for &y in g.neighbors(x) {
                if !structure.contains(&y) && p.side_of(y).is_some() {
                    direct.push((ci, x, y));
                }
            }
        }
    }
    if let Some(rng) = salt.as_deref_mut() {
        direct.shuffle(rng);
    }
    for (ci, x, y) in direct {
        let mut q = p.clone();
        if let Embedding::Star { hub, .. } = &embs[ci] {
            if q.side_of(*hub) == q.side_of(y) && flip_hub(g, &mut q, *hub).is_err() {
                continue;
            }
        }
        if !q.is_valid_switch(g, y, x) || q.switch(g, y, x).is_err() {
            continue;
        }
        if let Some(after) = measure_advance(g, &q, balls, n_before, gap_before) {
            return Ok(commit(p, q, x, y, false, after));
        }
    }

    let mut exchanged: Vec<(Partition, Vertex, Vertex)> = Vec::new();
    for (ci, emb) in embs.iter().enumerate() {
        let Embedding::Ring { middles, .. } = emb else {
            continue;
        };
        if middles.iter().any(|m| m.is_none()) {
            continue;
        }
        let Ok(geo) = ring_geometry(p, emb) else {
            continue;
        };
        let mut base = p.clone();
        if exchange_ring(g, &mut base, &geo).is_err() {
            continue;
        }
        let structure: HashSet<Vertex> = structures[ci].iter().copied().collect();
        for mid in middles.iter().flatten() {
            let x = *mid;
            if !base.is_lone_free(g, x) {
                continue;
            }
            for &y in g.neighbors(x) {
                if !structure.contains(&y) && base.side_of(y).is_some() {
                    exchanged.push((base.clone(), x, y));
                }
            }
        }
    }
    if let Some(rng) = salt.as_deref_mut() {
        exchanged.shuffle(rng);
    }
    for (mut q, x, y) in exchanged {
        if !q.is_valid_switch(g, y, x) || q.switch(g, y, x).is_err() {
            continue;
        }
        if let Some(after) = measure_advance(g, &q, balls, n_before, gap_before) {
            return Ok(commit(p, q, x, y, true, after));
        }
    }

    Err("no switch advanced the cycle-reduction measure".into())
}

/// Whether recoloring the lone free `x` of its cycle component for some
/// colored neighbor off the structure leaves either no cycle at all or one
/// new cycle containing the freed vertex and avoiding the rest of `x`'s
/// old component. Errors if `x` is not a lone free on a cycle or has no
/// such neighbor to try.
pub fn has_clean_exit(
    g: &Graph,
    p: &Partition,
    balls: &[BitSet],
    x: Vertex,
) -> Result<bool, String> {
    if !p.is_lone_free(g, x) {
        return Err("vertex is not a lone free".into());
    }
    let aux = AuxGraph::build(p, balls);
    let comps = aux.components();
    let comp = comps
        .iter()
        .find(|c| c.contains(&x))
        .expect("free vertex belongs to a component")
        .clone();
    if aux.classify(&comp) != Shape::Cycle {
        return Err("vertex is not on a cycle component".into());
    }
    let emb = embed_cycle(g, p, &aux, &comp)?;
    let structure: HashSet<Vertex> = emb.structure_vertices().into_iter().collect();
    let hub = match &emb {
        Embedding::Star { hub, .. } => Some(*hub),
        Embedding::Ring { .. } => None,
    };
    let ys: Vec<Vertex> = g
        .neighbors(x)
        .iter()
        .copied()
        .filter(|&y| !structure.contains(&y) && p.side_of(y).is_some())
        .collect();
    if ys.is_empty() {
        return Err("no colored neighbour outside the structure".into());
    }
    let rest: Vec<Vertex> = comp.iter().copied().filter(|&v| v != x).collect();
    for y in ys {
        let mut q = p.clone();
        if let Some(h) = hub {
            if q.side_of(h) == q.side_of(y) && flip_hub(g, &mut q, h).is_err() {
                continue;
            }
        }
        if !q.is_valid_switch(g, y, x) || q.switch(g, y, x).is_err() {
            continue;
        }
        let aux2 = AuxGraph::build(&q, balls);
        let comps2 = aux2.components();
        let (cycles2, _, _) = split_cycles(&aux2, &comps2);
        match cycles2.len() {
            0 => return Ok(true),
            1 => {
                let cnew = cycles2[0];
                if cnew.contains(&y) && !cnew.iter().any(|v| rest.contains(v)) {
                    return Ok(true);
                }
            }
            _ => {}
        }
    }
    Ok(false)
}
