//! The auxiliary graph on the free vertices: two frees are joined when
//! their distance in `G` is at most 2. Same-class distance ≥ 3 for the two
//! radius-2 classes is exactly independence here, so the solver's whole job
//! is to reorganize this graph until every component is bipartite.
//!
//! Edges depend only on which vertices are free plus the static distance-2
//! balls of `G`, so a switch updates the structure incrementally; a full
//! rebuild is the test oracle for those updates.

use super::partition::Partition;
use crate::bitset::BitSet;
use crate::graph::{Graph, Vertex};

#[derive(Clone, PartialEq, Eq)]
pub struct AuxGraph {
    adj: Vec<BitSet>,
    free: BitSet,
}

/// Component shapes. Paths and trees are bipartite and need no further
/// work; cycles are what the reduction and elimination phases remove;
/// anything containing a cycle plus more (a vertex of degree ≥ 3 on a
/// cycle) is a tangle, which the driver treats as an unusable state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Path,
    Tree,
    Cycle,
    Tangle,
}

impl AuxGraph {
    pub fn build(p: &Partition, balls: &[BitSet]) -> AuxGraph {
        let n = p.vertex_count();
        let free = p.free_set().clone();
        let mut adj = vec![BitSet::new(n); n];
        for v in free.iter() {
            let mut row = balls[v].clone();
            row.intersect_with(&free);
            adj[v] = row;
        }
        AuxGraph { adj, free }
    }

    /// Incremental update after a switch: `colored` left the free set (it
    /// was placed on a side) and `freed` joined it.
    pub fn apply_switch(&mut self, balls: &[BitSet], colored: Vertex, freed: Vertex) {
        debug_assert!(self.free.contains(colored) && !self.free.contains(freed));
        for u in self.adj[colored].to_vec() {
            self.adj[u].remove(colored);
        }
        self.adj[colored].clear();
        self.free.remove(colored);
        self.free.insert(freed);
        let mut row = balls[freed].clone();
        row.intersect_with(&self.free);
        row.remove(freed);
        for u in row.iter() {
            self.adj[u].insert(freed);
        }
        self.adj[freed] = row;
    }

    pub fn free(&self) -> &BitSet {
        &self.free
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors_of(&self, v: Vertex) -> &BitSet {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(v)
    }

    /// Connected components of the free vertices under distance-≤2
    /// adjacency, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = BitSet::new(self.adj.len());
        let mut comps = Vec::new();
        for s in self.free.iter() {
            if seen.contains(s) {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(u) = stack.pop() {
                comp.push(u);
                for w in self.adj[u].iter() {
                    if !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn edges_within(&self, comp: &[Vertex]) -> usize {
        comp.iter().map(|&v| self.adj[v].len()).sum::<usize>() / 2
    }

    pub fn classify(&self, comp: &[Vertex]) -> Shape {
        let edges = self.edges_within(comp);
        let max_deg = comp.iter().map(|&v| self.adj[v].len()).max().unwrap_or(0);
        if edges + 1 == comp.len() {
            if max_deg <= 2 {
                Shape::Path
            } else {
                Shape::Tree
            }
        } else if edges == comp.len() && max_deg == 2 {
            Shape::Cycle
        } else {
            Shape::Tangle
        }
    }

    pub fn classified_components(&self) -> Vec<(Vec<Vertex>, Shape)> {
        self.components()
            .into_iter()
            .map(|c| {
                let shape = self.classify(&c);
                (c, shape)
            })
            .collect()
    }

    pub fn cycle_components(&self) -> Vec<Vec<Vertex>> {
        self.classified_components()
            .into_iter()
            .filter(|(_, s)| *s == Shape::Cycle)
            .map(|(c, _)| c)
            .collect()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_components().len()
    }

    pub fn path_components(&self) -> Vec<Vec<Vertex>> {
        self.classified_components()
            .into_iter()
            .filter(|(_, s)| *s == Shape::Path)
            .map(|(c, _)| c)
            .collect()
    }

    /// Members of a cycle component in cyclic order, canonicalized: starts
    /// at the smallest member and proceeds toward its smaller neighbor.
    pub fn cycle_order(&self, comp: &[Vertex]) -> Vec<Vertex> {
        debug_assert_eq!(self.classify(comp), Shape::Cycle);
        let start = comp[0];
        let nbrs = self.adj[start].to_vec();
        let mut order = vec![start, nbrs[0]];
        while order.len() < comp.len() {
            let cur = order[order.len() - 1];
            let prev = order[order.len() - 2];
            let next = self.adj[cur].iter().find(|&w| w != prev).expect("cycle walk");
            order.push(next);
        }
        order
    }
}

/// How a cycle component sits inside `G`: either a star (three frees on a
/// common colored hub) or a ring — an alternating closed walk where
/// consecutive frees are joined by a colored middle or, at most once, by a
/// direct edge (the free pair).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedding {
    Star {
        hub: Vertex,
        members: [Vertex; 3],
    },
    /// `middles[i]` sits between `members[i]` and `members[(i+1) % k]`;
    /// `None` marks the direct pair edge.
    Ring {
        members: Vec<Vertex>,
        middles: Vec<Option<Vertex>>,
    },
}

impl Embedding {
    /// Free members of the structure.
    pub fn members(&self) -> Vec<Vertex> {
        match self {
            Embedding::Star { members, .. } => members.to_vec(),
            Embedding::Ring { members, .. } => members.clone(),
        }
    }

    /// All vertices of the structure in `G` (members plus hub or middles).
    pub fn structure_vertices(&self) -> Vec<Vertex> {
        match self {
            Embedding::Star { hub, members } => {
                let mut v = members.to_vec();
                v.push(*hub);
                v.sort_unstable();
                v
            }
            Embedding::Ring { members, middles } => {
                let mut v = members.clone();
                v.extend(middles.iter().flatten().copied());
                v.sort_unstable();
                v
            }
        }
    }

    /// Index of the pair edge on a ring, if any.
    pub fn pair_position(&self) -> Option<usize> {
        match self {
            Embedding::Star { .. } => None,
            Embedding::Ring { middles, .. } => middles.iter().position(|m| m.is_none()),
        }
    }
}

const MIDDLE_SEARCH_CAP: usize = 4096;

/// Realizes a cycle component of the auxiliary graph inside `G`. Fails with
/// a reason when the component does not embed as a star or a ring with
/// distinct colored middles and at most one direct pair — at a genuine
/// fixed point that cannot happen, so the driver treats a failure as a
/// signal to restart.
pub fn embed_cycle(g: &Graph, p: &Partition, aux: &AuxGraph, comp: &[Vertex]) -> Result<Embedding, String> {
    if aux.classify(comp) != Shape::Cycle {
        return Err("component is not a cycle".into());
    }
    if comp.len() == 3 {
        let mut common = g.neighbor_set(comp[0]).clone();
        common.intersect_with(g.neighbor_set(comp[1]));
        common.intersect_with(g.neighbor_set(comp[2]));
        let hub = common.iter().next();
        if let Some(hub) = hub {
            debug_assert!(!p.is_free(hub), "a free hub would enlarge the component");
            return Ok(Embedding::Star {
                hub,
                members: [comp[0], comp[1], comp[2]],
            });
        }
    }
    let members = aux.cycle_order(comp);
    let k = members.len();
    let mut choices: Vec<Vec<Option<Vertex>>> = Vec::with_capacity(k);
    let mut pairs = 0;
    for i in 0..k {
        let (u, v) = (members[i], members[(i + 1) % k]);
        if g.has_edge(u, v) {
            pairs += 1;
            choices.push(vec![None]);
        } else {
            let mut common = g.neighbor_set(u).clone();
            common.intersect_with(g.neighbor_set(v));
            let list: Vec<Option<Vertex>> = common
                .iter()
                .filter(|&w| !p.is_free(w))
                .map(Some)
                .collect();
            if list.is_empty() {
                return Err(format!(
                    "frees {u} and {v} are consecutive on a cycle but share no colored neighbor"
                ));
            }
            choices.push(list);
        }
    }
    if pairs > 1 {
        return Err("cycle carries more than one free pair".into());
    }
    // Middles must be pairwise distinct; the choice lists are tiny, so a
    // capped backtracking pass settles it.
    let mut picked: Vec<Option<Vertex>> = Vec::with_capacity(k);
    let mut nodes = 0usize;
    if !pick_distinct(&choices, &mut picked, &mut nodes) {
        return Err("no system of distinct middles exists for the cycle".into());
    }
    Ok(Embedding::Ring {
        members,
        middles: picked,
    })
}

fn pick_distinct(
    choices: &[Vec<Option<Vertex>>],
    picked: &mut Vec<Option<Vertex>>,
    nodes: &mut usize,
) -> bool {
    if picked.len() == choices.len() {
        return true;
    }
    *nodes += 1;
    if *nodes > MIDDLE_SEARCH_CAP {
        return false;
    }
    for &c in &choices[picked.len()] {
        if c.is_some() && picked.contains(&c) {
            continue;
        }
        picked.push(c);
        if pick_distinct(choices, picked, nodes) {
            return true;
        }
        picked.pop();
    }
    false
}

/// The shared side of a ring's middles. The rotation and exchange moves
/// rely on this uniformity; a mixed ring at a claimed fixed point is a
/// restart signal.
pub fn ring_middles_side(p: &Partition, middles: &[Option<Vertex>]) -> Result<super::partition::Side, String> {
    let mut side = None;
    for &m in middles.iter().flatten() {
        let s = p.side_of(m).ok_or_else(|| format!("ring middle {m} is free"))?;
        match side {
            None => side = Some(s),
            Some(t) if t != s => {
                return Err(format!("ring middles straddle both sides (vertex {m})"))
            }
            _ => {}
        }
    }
    side.ok_or_else(|| "ring has no middles".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructive::partition::Side;
    use crate::graph;

    fn partition_with(g: &Graph, a: &[Vertex], b: &[Vertex]) -> Partition {
        let mut side = vec![None; g.vertex_count()];
        for &v in a {
            side[v] = Some(Side::A);
        }
        for &v in b {
            side[v] = Some(Side::B);
        }
        Partition::from_assignment(g, &side).unwrap()
    }

    #[test]
    fn build_matches_pairwise_distances() {
        let g = graph::petersen();
        let p = partition_with(&g, &[0, 2], &[6, 7]);
        let aux = AuxGraph::build(&p, &g.second_neighborhoods());
        let free: Vec<Vertex> = p.free_set().iter().collect();
        for &u in &free {
            for &v in &free {
                if u == v {
                    continue;
                }
                let expected = g.distance(u, v).unwrap() <= 2;
                assert_eq!(aux.has_edge(u, v), expected, "pair ({u},{v})");
            }
        }
    }

    #[test]
    fn incremental_update_equals_rebuild() {
        let g = graph::prism(5).unwrap();
        let balls = g.second_neighborhoods();
        let mut p = partition_with(&g, &[0, 2], &[1, 3]);
        let mut aux = AuxGraph::build(&p, &balls);
        // Walk through every valid switch once, checking the incremental
        // update against a fresh build each time.
        for _ in 0..6 {
            let Some(&(out, fresh)) = p.valid_switches(&g).first() else {
                break;
            };
            p.switch(&g, out, fresh).unwrap();
            aux.apply_switch(&balls, fresh, out);
            assert!(aux == AuxGraph::build(&p, &balls), "drift after switch({out},{fresh})");
        }
    }

    #[test]
    fn path_and_cycle_shapes() {
        // On C6 with sides {0, 3}: frees 1,2 and 4,5 sit at pairwise
        // distance ≤ 2 all around, forming a single 4-cycle in the
        // auxiliary graph: 1-2-4-5-1.
        let g = graph::cycle(6).unwrap();
        let p = partition_with(&g, &[0], &[3]);
        let aux = AuxGraph::build(&p, &g.second_neighborhoods());
        let comps = aux.classified_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0, vec![1, 2, 4, 5]);
        assert_eq!(comps[0].1, Shape::Cycle);
        assert_eq!(aux.cycle_order(&comps[0].0), vec![1, 2, 4, 5]);

        // On P5 with the odd vertices colored, the frees 0, 2, 4 sit at
        // consecutive distance 2 and form an auxiliary path.
        let g = graph::path(5).unwrap();
        let p = partition_with(&g, &[1], &[3]);
        let aux = AuxGraph::build(&p, &g.second_neighborhoods());
        let comps = aux.classified_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0, vec![0, 2, 4]);
        assert_eq!(comps[0].1, Shape::Path);
    }

    #[test]
    fn star_shape_and_embedding() {
        // K_{1,3}: hub 0 colored, leaves free. Leaves are pairwise at
        // distance 2, giving a triangle that embeds as a star.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = partition_with(&g, &[0], &[]);
        let aux = AuxGraph::build(&p, &g.second_neighborhoods());
        let comps = aux.components();
        assert_eq!(comps, vec![vec![1, 2, 3]]);
        assert_eq!(aux.classify(&comps[0]), Shape::Cycle);
        let emb = embed_cycle(&g, &p, &aux, &comps[0]).unwrap();
        assert_eq!(
            emb,
            Embedding::Star {
                hub: 0,
                members: [1, 2, 3]
            }
        );
        assert_eq!(emb.structure_vertices(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn ring_embedding_with_pair_on_c5() {
        // C5 with exactly two colored vertices: frees {1, 3, 4} with pair
        // (3,4), middles 2 (between 1 and 3) and 0 (between 4 and 1).
        let g = graph::cycle(5).unwrap();
        let p = partition_with(&g, &[0], &[2]);
        let aux = AuxGraph::build(&p, &g.second_neighborhoods());
        let comps = aux.components();
        assert_eq!(comps, vec![vec![1, 3, 4]]);
        let emb = embed_cycle(&g, &p, &aux, &comps[0]).unwrap();
        let Embedding::Ring { members, middles } = &emb else {
            panic!("expected a ring, got {emb:?}");
        };
        assert_eq!(members, &vec![1, 3, 4]);
        assert_eq!(middles, &vec![Some(2), None, Some(0)]);
        assert_eq!(emb.pair_position(), Some(1));
        assert_eq!(emb.structure_vertices(), vec![0, 1, 2, 3, 4]);
        assert!(ring_middles_side(&p, middles).is_err()); // mixed sides here
        let p2 = partition_with(&g, &[0, 2], &[]);
        assert_eq!(ring_middles_side(&p2, middles).unwrap(), Side::A);
    }

    #[test]
    fn alternating_six_cycle_embeds_without_pair() {
        let g = graph::cycle(6).unwrap();
        let p = partition_with(&g, &[0, 2, 4], &[]);
        let aux = AuxGraph::build(&p, &g.second_neighborhoods());
        let comps = aux.components();
        assert_eq!(comps, vec![vec![1, 3, 5]]);
        let emb = embed_cycle(&g, &p, &aux, &comps[0]).unwrap();
        let Embedding::Ring { members, middles } = &emb else {
            panic!("expected a ring");
        };
        assert_eq!(members, &vec![1, 3, 5]);
        assert_eq!(middles, &vec![Some(2), Some(4), Some(0)]);
        assert_eq!(emb.pair_position(), None);
    }

    #[test]
    fn tangle_is_flagged() {
        // A colored hub with four frees around it in a star of P2 legs:
        // free degree in the auxiliary graph exceeds 2.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let p = partition_with(&g, &[0], &[]);
        let aux = AuxGraph::build(&p, &g.second_neighborhoods());
        let comps = aux.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(aux.classify(&comps[0]), Shape::Tangle);
        assert!(embed_cycle(&g, &p, &aux, &comps[0]).is_err());
    }
}
