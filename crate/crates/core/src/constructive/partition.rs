//! The working state of the constructive solver: two disjoint independent
//! sets `A` and `B` plus the remaining "free" vertices, and the switch
//! operation that exchanges a colored vertex for a free one.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Per-vertex side tags; `None` is free. This is the snapshot form used for
/// deduplication, instrumentation, and the audit entry point.
pub type SideAssignment = Vec<Option<Side>>;

/// Two disjoint independent sets over a fixed graph. The score — the number
/// of colored vertices — is what the first improvement phase maximizes; the
/// free vertices are what later phases organize.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    side: SideAssignment,
    a: BitSet,
    b: BitSet,
    free: BitSet,
}

impl Partition {
    pub fn all_free(n: usize) -> Self {
        Partition {
            side: vec![None; n],
            a: BitSet::new(n),
            b: BitSet::new(n),
            free: {
                let mut f = BitSet::new(n);
                for v in 0..n {
                    f.insert(v);
                }
                f
            },
        }
    }

    /// Restores a snapshot. Fails if the tagged sets are not independent in
    /// `g`.
    pub fn from_assignment(g: &Graph, side: &[Option<Side>]) -> Result<Self> {
        if side.len() != g.vertex_count() {
            return Err(Error::invalid("assignment length does not match graph"));
        }
        let mut p = Partition::all_free(side.len());
        for (v, &s) in side.iter().enumerate() {
            if let Some(s) = s {
                p.assign(v, Some(s));
            }
        }
        for (u, v) in g.edges() {
            if p.side[u].is_some() && p.side[u] == p.side[v] {
                return Err(Error::invalid(format!(
                    "vertices {u} and {v} are adjacent but share a side"
                )));
            }
        }
        Ok(p)
    }

    /// Restores a snapshot without the independence check, so that audits
    /// can inspect deliberately broken states. Only the length is
    /// validated.
    pub(crate) fn from_assignment_lenient(n: usize, side: &[Option<Side>]) -> Result<Self> {
        if side.len() != n {
            return Err(Error::invalid("assignment length does not match graph"));
        }
        let mut p = Partition::all_free(n);
        for (v, &s) in side.iter().enumerate() {
            if let Some(s) = s {
                p.assign(v, Some(s));
            }
        }
        Ok(p)
    }

    pub fn vertex_count(&self) -> usize {
        self.side.len()
    }

    pub fn side_of(&self, v: Vertex) -> Option<Side> {
        self.side[v]
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        self.side[v].is_none()
    }

    pub fn side_set(&self, s: Side) -> &BitSet {
        match s {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn free_set(&self) -> &BitSet {
        &self.free
    }

    pub fn snapshot(&self) -> SideAssignment {
        self.side.clone()
    }

    /// Number of colored vertices.
    pub fn score(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// Moves `v` to a side or back to free, keeping the bitsets in step.
    /// Callers are responsible for independence; `switch` and the
    /// improvement moves check it, tests can use `assert_consistent`.
    pub(crate) fn assign(&mut self, v: Vertex, to: Option<Side>) {
        match self.side[v] {
            Some(Side::A) => self.a.remove(v),
            Some(Side::B) => self.b.remove(v),
            None => self.free.remove(v),
        }
        match to {
            Some(Side::A) => self.a.insert(v),
            Some(Side::B) => self.b.insert(v),
            None => self.free.insert(v),
        }
        self.side[v] = to;
    }

    /// Colored neighbors of `v` on side `s`.
    pub fn side_neighbors(&self, g: &Graph, v: Vertex, s: Side) -> usize {
        g.neighbor_set(v).intersection_len(self.side_set(s))
    }

    /// True if taking `out` from its side and giving that side to `fresh`
    /// keeps both sides independent: `fresh` must be free, and its only
    /// neighbor on the side of `out` must be `out` itself.
    pub fn is_valid_switch(&self, g: &Graph, out: Vertex, fresh: Vertex) -> bool {
        let Some(s) = self.side[out] else {
            return false;
        };
        if !self.is_free(fresh) {
            return false;
        }
        g.neighbor_set(fresh).intersection_singleton(self.side_set(s)) == Some(out)
    }

    /// The exchange move: `out` leaves its side (becoming free) and `fresh`
    /// takes its place. Score is preserved by construction.
    pub fn switch(&mut self, g: &Graph, out: Vertex, fresh: Vertex) -> Result<Side> {
        if !self.is_valid_switch(g, out, fresh) {
            return Err(Error::invalid(format!(
                "switch({out}, {fresh}) violates its precondition"
            )));
        }
        let s = self.side[out].unwrap();
        self.assign(out, None);
        self.assign(fresh, Some(s));
        Ok(s)
    }

    /// Every `(out, fresh)` accepted by [`Partition::is_valid_switch`],
    /// ascending in `(fresh, side)`.
    pub fn valid_switches(&self, g: &Graph) -> Vec<(Vertex, Vertex)> {
        let mut moves = Vec::new();
        for fresh in self.free.iter() {
            for s in [Side::A, Side::B] {
                if let Some(out) =
                    g.neighbor_set(fresh).intersection_singleton(self.side_set(s))
                {
                    moves.push((out, fresh));
                }
            }
        }
        moves
    }

    /// Connected components of the subgraph induced by the free vertices,
    /// each sorted, ordered by smallest member.
    pub fn free_components(&self, g: &Graph) -> Vec<Vec<Vertex>> {
        let mut seen = BitSet::new(self.side.len());
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
                for &w in g.neighbors(u) {
                    if self.is_free(w) && !seen.contains(w) {
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

    pub fn free_component_count(&self, g: &Graph) -> usize {
        self.free_components(g).len()
    }

    /// True if `v` is free with no free neighbor.
    pub fn is_lone_free(&self, g: &Graph, v: Vertex) -> bool {
        self.is_free(v) && g.neighbor_set(v).is_disjoint(&self.free)
    }

    /// Full structural check, for tests and debug assertions.
    pub fn assert_consistent(&self, g: &Graph) {
        assert_eq!(self.side.len(), g.vertex_count());
        for v in 0..self.side.len() {
            let in_sets = [
                self.a.contains(v),
                self.b.contains(v),
                self.free.contains(v),
            ];
            assert_eq!(in_sets.iter().filter(|&&x| x).count(), 1, "vertex {v}");
            match self.side[v] {
                Some(Side::A) => assert!(in_sets[0]),
                Some(Side::B) => assert!(in_sets[1]),
                None => assert!(in_sets[2]),
            }
        }
        for (u, v) in g.edges() {
            assert!(
                self.side[u].is_none() || self.side[u] != self.side[v],
                "edge ({u},{v}) inside a side"
            );
        }
    }
}

impl std::fmt::Debug for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Partition(a={:?}, b={:?}, free={:?})",
            self.a, self.b, self.free
        )
    }
}

/// Seeded greedy start: a maximal independent set in shuffled order becomes
/// `A`, a maximal independent set among the rest becomes `B`. Both sides are
/// maximal by construction, so every free vertex already has a neighbor in
/// `A` (and in `B` once the first improvement pass finishes).
pub fn initial_partition(g: &Graph, rng: &mut impl Rng) -> Partition {
    let n = g.vertex_count();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let mut p = Partition::all_free(n);
    for &v in &order {
        if g.neighbor_set(v).is_disjoint(p.side_set(Side::A)) {
            p.assign(v, Some(Side::A));
        }
    }
    for &v in &order {
        if p.is_free(v) && g.neighbor_set(v).is_disjoint(p.side_set(Side::B)) {
            p.assign(v, Some(Side::B));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn initial_partition_on_k4_leaves_a_free_pair() {
        let k4 = graph::complete(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = initial_partition(&k4, &mut rng);
        p.assert_consistent(&k4);
        // Any maximal independent set in K4 is a single vertex.
        assert_eq!(p.side_set(Side::A).len(), 1);
        assert_eq!(p.side_set(Side::B).len(), 1);
        assert_eq!(p.free_components(&k4).len(), 1);
        assert_eq!(p.free_components(&k4)[0].len(), 2);
    }

    #[test]
    fn initial_partition_is_seed_deterministic() {
        let g = graph::petersen();
        let a = initial_partition(&g, &mut ChaCha8Rng::seed_from_u64(5));
        let b = initial_partition(&g, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a.snapshot(), b.snapshot());
    }

    #[test]
    fn switch_moves_one_vertex_each_way() {
        // P4: A = {0, 2}, B = {1}, free = {3}. Switching 2 out for 3 is
        // valid: 3's only A-neighbor is 2.
        let p4 = graph::path(4).unwrap();
        let mut p = Partition::all_free(4);
        p.assign(0, Some(Side::A));
        p.assign(2, Some(Side::A));
        p.assign(1, Some(Side::B));
        assert!(p.is_valid_switch(&p4, 2, 3));
        let before = p.score();
        let side = p.switch(&p4, 2, 3).unwrap();
        assert_eq!(side, Side::A);
        assert_eq!(p.score(), before);
        assert!(p.is_free(2));
        assert_eq!(p.side_of(3), Some(Side::A));
        p.assert_consistent(&p4);
        // Switching back restores the original state.
        p.switch(&p4, 3, 2).unwrap();
        assert_eq!(p.side_of(2), Some(Side::A));
        assert!(p.is_free(3));
    }

    #[test]
    fn switch_rejects_conflicts() {
        // C4 with A = {0, 2}: vertex 1 sees both, so no switch can admit it.
        let c4 = graph::cycle(4).unwrap();
        let mut p = Partition::all_free(4);
        p.assign(0, Some(Side::A));
        p.assign(2, Some(Side::A));
        assert!(!p.is_valid_switch(&c4, 0, 1));
        assert!(p.switch(&c4, 0, 1).is_err());
        // Free target must actually be free, colored source colored.
        assert!(!p.is_valid_switch(&c4, 1, 3));
        assert!(!p.is_valid_switch(&c4, 0, 2));
    }

    #[test]
    fn valid_switches_enumeration_matches_definition() {
        let g = graph::prism(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = initial_partition(&g, &mut rng);
        let listed = p.valid_switches(&g);
        for out in 0..g.vertex_count() {
            for fresh in 0..g.vertex_count() {
                let expected = p.is_valid_switch(&g, out, fresh);
                assert_eq!(listed.contains(&(out, fresh)), expected);
            }
        }
    }

    #[test]
    fn assignment_round_trip_and_validation() {
        let g = graph::cycle(5).unwrap();
        let mut p = Partition::all_free(5);
        p.assign(0, Some(Side::A));
        p.assign(2, Some(Side::B));
        let snap = p.snapshot();
        let back = Partition::from_assignment(&g, &snap).unwrap();
        assert_eq!(back.snapshot(), snap);
        // Adjacent same-side tags are rejected.
        let bad = vec![Some(Side::A), Some(Side::A), None, None, None];
        assert!(Partition::from_assignment(&g, &bad).is_err());
    }
}
