//! Moves on the structures behind cycle components: rotating the free pair
//! around an odd ring by a series of switches, the wholesale member/middle
//! exchange on an even ring, the hub flip on a star, and the gap metric
//! between cycle structures that the reduction phase drives down.

use super::aux_graph::Embedding;
use super::partition::{Partition, Side};
use crate::graph::{Graph, Vertex, INFINITY};
use std::collections::VecDeque;

/// A ring laid out as the closed walk it traces in `G`. For a ring with a
/// pair the walk has odd length `2k − 1` and the pair occupies one edge;
/// without a pair the length is the even `2k` and members and middles
/// alternate.
pub struct RingGeometry {
    pub cycle: Vec<Vertex>,
    /// Index `i` such that `(cycle[i], cycle[i+1])` is the free pair.
    pub pair_edge: Option<usize>,
    /// The shared side of the middles.
    pub side: Side,
}

impl RingGeometry {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn position_of(&self, v: Vertex) -> Option<usize> {
        self.cycle.iter().position(|&u| u == v)
    }

    /// The at most one neighbor of `cycle[idx]` off the ring. Cycle-shaped
    /// components with same-side middles leave no room for chords, so any
    /// non-cyclic neighbor is genuinely outside.
    pub fn outside_neighbor(&self, g: &Graph, idx: usize) -> Option<Vertex> {
        let l = self.cycle.len();
        let v = self.cycle[idx];
        let prev = self.cycle[(idx + l - 1) % l];
        let next = self.cycle[(idx + 1) % l];
        g.neighbors(v).iter().copied().find(|&w| w != prev && w != next)
    }
}

/// Lays a ring embedding out as its closed walk and checks the middle-side
/// uniformity the rotation moves depend on.
pub fn ring_geometry(p: &Partition, emb: &Embedding) -> Result<RingGeometry, String> {
    let Embedding::Ring { members, middles } = emb else {
        return Err("star structures have no ring geometry".into());
    };
    let side = super::aux_graph::ring_middles_side(p, middles)?;
    let mut cycle = Vec::with_capacity(2 * members.len());
    let mut pair_edge = None;
    for (i, &m) in members.iter().enumerate() {
        if middles[i].is_none() {
            pair_edge = Some(cycle.len());
        }
        cycle.push(m);
        if let Some(mid) = middles[i] {
            cycle.push(mid);
        }
    }
    Ok(RingGeometry {
        cycle,
        pair_edge,
        side,
    })
}

/// Whether position `pos` is free when the pair occupies edge `e` of an
/// odd ring of length `l`: the frees are the pair plus every second
/// position after it.
fn free_at(l: usize, e: usize, pos: usize) -> bool {
    let d = (pos + l - e) % l;
    d == 0 || (d - 1) % 2 == 0
}

/// Pair edges under which `v` is one of the two pair members.
pub fn edges_covering(geo: &RingGeometry, v: Vertex) -> Vec<usize> {
    let l = geo.len();
    let pos = geo.position_of(v).expect("vertex on ring");
    vec![(pos + l - 1) % l, pos]
}

/// Pair edges under which `v` is free but not in the pair.
pub fn edges_giving_lone(geo: &RingGeometry, v: Vertex) -> Vec<usize> {
    let l = geo.len();
    let pos = geo.position_of(v).expect("vertex on ring");
    (0..l)
        .filter(|&e| free_at(l, e, pos) && e != pos && e != (pos + l - 1) % l)
        .collect()
}

/// Rotates the free pair to the nearest reachable edge in `targets` by the
/// switch series, mutating `p`. Each elementary step moves the pair two
/// edge positions and is valid only when the entering vertex's outside
/// neighbor avoids the middles' side. Fails if no target is reachable.
pub fn rotate_pair_to(
    g: &Graph,
    p: &mut Partition,
    geo: &RingGeometry,
    targets: &[usize],
) -> Result<usize, String> {
    let l = geo.len();
    let Some(start) = geo.pair_edge else {
        return Err("ring has no pair to rotate".into());
    };
    if targets.contains(&start) {
        return Ok(start);
    }
    // A step is allowed when the vertex being colored has no outside
    // neighbor already on the middles' side; that is a property of the
    // position alone, fixed for the whole rotation.
    let step_ok = |idx: usize| -> bool {
        match geo.outside_neighbor(g, idx) {
            Some(w) => p.side_of(w) != Some(geo.side),
            None => true,
        }
    };
    let mut prev: Vec<Option<usize>> = vec![None; l];
    let mut queue = VecDeque::from([start]);
    prev[start] = Some(start);
    let mut found = None;
    'bfs: while let Some(e) = queue.pop_front() {
        // Forward: color cycle[e], free cycle[e-1]; pair lands on e-2.
        // Backward: color cycle[e+1], free cycle[e+2]; pair lands on e+2.
        let moves = [((e + l - 2) % l, e), ((e + 2) % l, (e + 1) % l)];
        for (next, entering) in moves {
            if prev[next].is_some() || !step_ok(entering) {
                continue;
            }
            prev[next] = Some(e);
            if targets.contains(&next) {
                found = Some(next);
                break 'bfs;
            }
            queue.push_back(next);
        }
    }
    let Some(goal) = found else {
        return Err("no rotation path reaches the requested pair position".into());
    };
    let mut hops = vec![goal];
    while *hops.last().unwrap() != start {
        hops.push(prev[*hops.last().unwrap()].unwrap());
    }
    hops.reverse();
    for w in hops.windows(2) {
        let (e, next) = (w[0], w[1]);
        let (out, fresh) = if next == (e + l - 2) % l {
            (geo.cycle[(e + l - 1) % l], geo.cycle[e])
        } else {
            (geo.cycle[(e + 2) % l], geo.cycle[(e + 1) % l])
        };
        p.switch(g, out, fresh)
            .map_err(|err| format!("rotation switch failed: {err}"))?;
    }
    Ok(goal)
}

/// The wholesale exchange on a pairless ring: members take a side, middles
/// become free. Tries the middles' own side first, then the other; fails
/// if outside neighbors block both.
pub fn exchange_ring(g: &Graph, p: &mut Partition, geo: &RingGeometry) -> Result<Side, String> {
    if geo.pair_edge.is_some() {
        return Err("exchange applies only to pairless rings".into());
    }
    let members: Vec<Vertex> = geo.cycle.iter().copied().filter(|&v| p.is_free(v)).collect();
    let middles: Vec<Vertex> = geo.cycle.iter().copied().filter(|&v| !p.is_free(v)).collect();
    let target = [geo.side, geo.side.other()].into_iter().find(|&t| {
        members.iter().all(|&u| {
            g.neighbor_set(u)
                .iter()
                .all(|w| p.side_of(w) != Some(t) || middles.contains(&w))
        })
    });
    let Some(t) = target else {
        return Err("outside neighbors block the exchange on both sides".into());
    };
    for &m in &middles {
        p.assign(m, None);
    }
    for &u in &members {
        p.assign(u, Some(t));
    }
    Ok(t)
}

/// Moves a star's hub to the other side. The hub's neighbors are exactly
/// the three free members, so this is always consistent; the check is
/// defensive.
pub fn flip_hub(g: &Graph, p: &mut Partition, hub: Vertex) -> Result<Side, String> {
    let Some(s) = p.side_of(hub) else {
        return Err("hub is not colored".into());
    };
    let t = s.other();
    if !g.neighbor_set(hub).is_disjoint(p.side_set(t)) {
        return Err("hub has a neighbor on the target side".into());
    }
    p.assign(hub, Some(t));
    Ok(t)
}

/// Places the hub of a star opposite `avoid`, flipping it if needed.
pub fn place_hub_opposite(
    g: &Graph,
    p: &mut Partition,
    hub: Vertex,
    avoid: Side,
) -> Result<(), String> {
    if p.side_of(hub) == Some(avoid) {
        flip_hub(g, p, hub)?;
    }
    Ok(())
}

/// Shortest connection between two cycle structures.
#[derive(Clone, Debug)]
pub struct GapWitness {
    pub dist: u32,
    /// A shortest path; first vertex on structure `from`, last on `to`.
    pub path: Vec<Vertex>,
    pub from: usize,
    pub to: usize,
}

/// The gap metric: the minimum `G`-distance between the structure vertex
/// sets of any two cycle components, with an achieving path. `None` when
/// fewer than two structures exist. Ties break toward the lowest component
/// pair and then the lowest target vertex.
pub fn cycle_gap(g: &Graph, structures: &[Vec<Vertex>]) -> Option<GapWitness> {
    if structures.len() < 2 {
        return None;
    }
    let n = g.vertex_count();
    let mut best: Option<GapWitness> = None;
    for i in 0..structures.len() {
        let mut dist = vec![INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &v in &structures[i] {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == INFINITY {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        for (j, other) in structures.iter().enumerate().skip(i + 1) {
            let Some(&target) = other
                .iter()
                .filter(|&&v| dist[v] != INFINITY)
                .min_by_key(|&&v| (dist[v], v))
            else {
                continue;
            };
            let d = dist[target];
            if best.as_ref().is_some_and(|b| b.dist <= d) {
                continue;
            }
            let mut path = vec![target];
            while dist[*path.last().unwrap()] != 0 {
                path.push(parent[*path.last().unwrap()]);
            }
            path.reverse();
            best = Some(GapWitness {
                dist: d,
                path,
                from: i,
                to: j,
            });
        }
    }
    best
}
