//! Graph generation: exhaustive enumeration of small connected subcubic
//! graphs (deduplicated by canonical form) and random connected cubic graphs
//! via the pairing model.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Largest size for which canonical forms (and hence enumeration) are
/// offered; the encoder tries vertex orders exhaustively with pruning, which
/// is comfortable here and pointless beyond.
pub const CANONICAL_CAP: usize = 8;

/// Canonical form of a graph: the lexicographically smallest packing of the
/// upper adjacency triangle over all vertex orders (column by column, MSB
/// first — the same bit order graph6 uses, so equal forms mean isomorphic
/// graphs and vice versa). Leading byte is the vertex count.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalForm(Vec<u8>);

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let n = g.vertex_count();
    if n > CANONICAL_CAP {
        return Err(Error::Unsupported(format!(
            "canonical form limited to {CANONICAL_CAP} vertices, got {n}"
        )));
    }
    let mut best: Option<Vec<bool>> = None;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    // Grow the vertex order one position at a time; `bits` holds the triangle
    // bits of the chosen prefix. A prefix whose bits already exceed the best
    // complete encoding cannot win, and one that is already smaller will
    // replace it, so comparing against `best` at each step prunes hard.
    fn descend(
        g: &Graph,
        perm: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        bits: &mut Vec<bool>,
        best: &mut Option<Vec<bool>>,
    ) {
        let n = g.vertex_count();
        if perm.len() == n {
            if best.as_ref().is_none_or(|b| bits[..] < b[..]) {
                *best = Some(bits.clone());
            }
            return;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let start = bits.len();
            for &p in perm.iter() {
                bits.push(g.has_edge(p, cand));
            }
            let keep = match best {
                Some(b) => bits[..] <= b[..bits.len().min(b.len())],
                None => true,
            };
            if keep {
                perm.push(cand);
                used[cand] = true;
                descend(g, perm, used, bits, best);
                used[cand] = false;
                perm.pop();
            }
            bits.truncate(start);
        }
    }
    descend(g, &mut perm, &mut used, &mut Vec::new(), &mut best);

    let bits = best.unwrap_or_default();
    let mut bytes = vec![n as u8];
    for chunk in bits.chunks(8) {
        let mut b = 0u8;
        for (i, &bit) in chunk.iter().enumerate() {
            if bit {
                b |= 1 << (7 - i);
            }
        }
        bytes.push(b);
    }
    Ok(CanonicalForm(bytes))
}

/// All connected graphs with maximum degree at most 3 on exactly `n`
/// vertices, one representative per isomorphism class, sorted by canonical
/// form. `n` is capped at [`CANONICAL_CAP`].
///
/// Works by growing graphs one vertex at a time: every connected graph can be
/// built by repeatedly attaching a new vertex to a non-empty set of earlier
/// ones (peel a BFS order backwards), so attaching new vertices to all
/// feasible subsets and deduplicating canonically reaches every class.
pub fn enumerate_connected_subcubic(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > CANONICAL_CAP {
        return Err(Error::invalid(format!(
            "enumeration supports 1..={CANONICAL_CAP} vertices, got {n}"
        )));
    }
    let mut layer: Vec<Graph> = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut seen: HashSet<CanonicalForm> = HashSet::new();
        let mut next: Vec<(CanonicalForm, Graph)> = Vec::new();
        for g in &layer {
            let old = size - 1;
            // Non-empty subsets of the existing vertices, at most 3 of them,
            // all with room for one more edge.
            for mask in 1u32..1 << old {
                if mask.count_ones() > 3 {
                    continue;
                }
                let members: Vec<Vertex> =
                    (0..old).filter(|&v| mask >> v & 1 == 1).collect();
                if members.iter().any(|&v| g.degree(v) >= 3) {
                    continue;
                }
                let mut edges = g.edges();
                for &v in &members {
                    edges.push((v, old));
                }
                let candidate = Graph::from_edges(size, &edges)?;
                let form = canonical_form(&candidate)?;
                if seen.insert(form.clone()) {
                    next.push((form, candidate));
                }
            }
        }
        next.sort_by(|a, b| a.0 .0.cmp(&b.0 .0));
        layer = next.into_iter().map(|(_, g)| g).collect();
    }
    Ok(layer)
}

/// Connected cubic graph on `n` vertices (even, at least 4) drawn from the
/// pairing model: three stubs per vertex, a random perfect matching on the
/// stubs, resampled until the result is simple and connected. The same seed
/// always returns the same graph.
pub fn generate_random_cubic(n: usize, seed: u64) -> Result<Graph> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::invalid(format!(
            "a cubic graph needs an even vertex count of at least 4, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| [v, v, v]).collect();
    loop {
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(3 * n / 2);
        let mut ok = true;
        let mut seen: HashSet<(Vertex, Vertex)> = HashSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                ok = false;
                break;
            }
            edges.push((u, v));
        }
        if !ok {
            continue;
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
}
