//! Colorings, the verifier, and the JSON certificate format.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, INFINITY};
use crate::schedule::PackingSchedule;
use serde::{Deserialize, Serialize};

/// A total assignment of vertices to schedule classes.
/// `assignment[v]` is the 0-based class of vertex `v`.
#[derive(Clone, PartialEq, Eq)]
pub struct PackingColoring {
    schedule: PackingSchedule,
    assignment: Vec<usize>,
}

impl PackingColoring {
    pub fn new(schedule: PackingSchedule, assignment: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = assignment.iter().find(|&&c| c >= schedule.len()) {
            return Err(Error::invalid(format!(
                "class index {bad} out of range for a {}-class schedule",
                schedule.len()
            )));
        }
        Ok(PackingColoring {
            schedule,
            assignment,
        })
    }

    pub fn schedule(&self) -> &PackingSchedule {
        &self.schedule
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    /// Members of each class, ascending within a class.
    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let mut classes = vec![Vec::new(); self.schedule.len()];
        for (v, &c) in self.assignment.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }
}

impl std::fmt::Debug for PackingColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PackingColoring({:?}, {:?})",
            self.schedule, self.assignment
        )
    }
}

/// A witness that some class is not the packing it should be.
/// `class_no` is 1-based to match display conventions ("class 1" is the
/// first class of the schedule).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub class_no: usize,
    pub pair: (Vertex, Vertex),
    pub distance: u32,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "class {} holds vertices {} and {} at distance {}",
            self.class_no, self.pair.0, self.pair.1, self.distance
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks every class of `coloring` against its radius. Returns the first
/// violation in (class, lexicographic pair) order, so failures are stable
/// across runs.
pub fn verify(g: &Graph, coloring: &PackingColoring) -> Result<Verdict> {
    if coloring.vertex_count() != g.vertex_count() {
        return Err(Error::invalid(format!(
            "coloring covers {} vertices but the graph has {}",
            coloring.vertex_count(),
            g.vertex_count()
        )));
    }
    let classes = coloring.classes();
    for (i, members) in classes.iter().enumerate() {
        let radius = coloring.schedule.radius(i);
        for &u in members {
            // One bounded BFS from u; the first same-class vertex above u
            // inside the ball is the lexicographically first partner.
            let dist = bounded_bfs(g, u, radius);
            let hit = members
                .iter()
                .copied()
                .filter(|&v| v > u && dist[v] <= radius)
                .min();
            if let Some(v) = hit {
                return Ok(Verdict::Invalid(Violation {
                    class_no: i + 1,
                    pair: (u, v),
                    distance: dist[v],
                }));
            }
        }
    }
    Ok(Verdict::Valid)
}

/// BFS from `source` stopping at `radius`; entries beyond stay INFINITY.
fn bounded_bfs(g: &Graph, source: Vertex, radius: u32) -> Vec<u32> {
    let mut dist = vec![INFINITY; g.vertex_count()];
    dist[source] = 0;
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == INFINITY {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// How a subdivision vertex relates to the graph it came from. Serialized
/// into certificates produced by the subdivision pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LineageEntry {
    Original { original: Vertex },
    Midpoint { midpoint: (Vertex, Vertex) },
}

/// The on-disk certificate format:
///
/// ```json
/// {"schedule": [1,1,2,2], "classes": [[0,3],[1,2],[4],[5]], "valid": true}
/// ```
///
/// `classes[i]` lists the vertices of class `i+1` in ascending order.
/// Subdivision certificates additionally carry `lineage`, one entry per
/// vertex: `{"original": v}` or `{"midpoint": [u, v]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub schedule: PackingSchedule,
    pub classes: Vec<Vec<Vertex>>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lineage: Option<Vec<LineageEntry>>,
}

impl Certificate {
    /// Packages a coloring, stamping `valid` from a fresh verification.
    pub fn new(g: &Graph, coloring: &PackingColoring) -> Result<Self> {
        Ok(Certificate {
            schedule: coloring.schedule().clone(),
            classes: coloring.classes(),
            valid: verify(g, coloring)?.is_valid(),
            lineage: None,
        })
    }

    /// Rebuilds the coloring. Fails if the classes are not a partition of
    /// `0..n` for some `n` (gaps, repeats, or out-of-range class count).
    pub fn to_coloring(&self) -> Result<PackingColoring> {
        if self.classes.len() != self.schedule.len() {
            return Err(Error::invalid(format!(
                "certificate has {} classes but the schedule has {}",
                self.classes.len(),
                self.schedule.len()
            )));
        }
        let n: usize = self.classes.iter().map(Vec::len).sum();
        let mut assignment = vec![usize::MAX; n];
        for (i, members) in self.classes.iter().enumerate() {
            for &v in members {
                if v >= n {
                    return Err(Error::invalid(format!(
                        "vertex {v} out of range in certificate classes"
                    )));
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::invalid(format!(
                        "vertex {v} appears in two certificate classes"
                    )));
                }
                assignment[v] = i;
            }
        }
        PackingColoring::new(self.schedule.clone(), assignment)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn coloring(schedule: &str, assignment: &[usize]) -> PackingColoring {
        PackingColoring::new(PackingSchedule::parse(schedule).unwrap(), assignment.to_vec())
            .unwrap()
    }

    #[test]
    fn adjacent_same_class_is_flagged() {
        let p3 = graph::path(3).unwrap();
        let verdict = verify(&p3, &coloring("1,1", &[0, 0, 1])).unwrap();
        assert_eq!(
            verdict,
            Verdict::Invalid(Violation {
                class_no: 1,
                pair: (0, 1),
                distance: 1
            })
        );
    }

    #[test]
    fn five_cycle_112_coloring_is_valid() {
        let c5 = graph::cycle(5).unwrap();
        // Classes {0,2}, {1,3}, {4}.
        let verdict = verify(&c5, &coloring("1,1,2", &[0, 1, 0, 1, 2])).unwrap();
        assert!(verdict.is_valid());
    }

    #[test]
    fn violation_order_is_class_then_pair() {
        // C6 with class 1 = {0,1} (bad, d=1) and class 2 = {2,3} (bad too).
        // The class-1 pair must win.
        let c6 = graph::cycle(6).unwrap();
        let verdict = verify(&c6, &coloring("1,2", &[0, 0, 1, 1, 0, 1])).unwrap();
        match verdict {
            Verdict::Invalid(v) => {
                assert_eq!(v.class_no, 1);
                assert_eq!(v.pair, (0, 1));
            }
            Verdict::Valid => panic!("expected a violation"),
        }
    }

    #[test]
    fn verify_checks_distance_not_just_adjacency() {
        // P4 vertices 0 and 2 are non-adjacent but at distance 2, which a
        // radius-2 class must still reject.
        let p4 = graph::path(4).unwrap();
        let verdict = verify(&p4, &coloring("1,2", &[1, 0, 1, 0])).unwrap();
        match verdict {
            Verdict::Invalid(v) => {
                assert_eq!(v.class_no, 2);
                assert_eq!(v.pair, (0, 2));
                assert_eq!(v.distance, 2);
            }
            Verdict::Valid => panic!("expected a violation"),
        }
    }

    #[test]
    fn k4_singletons_valid() {
        let k4 = graph::complete(4);
        let verdict = verify(&k4, &coloring("1,1,2,2", &[0, 1, 2, 3])).unwrap();
        assert!(verdict.is_valid());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let p3 = graph::path(3).unwrap();
        assert!(verify(&p3, &coloring("1,1", &[0, 1])).is_err());
    }

    #[test]
    fn out_of_range_class_rejected() {
        let s = PackingSchedule::parse("1,1").unwrap();
        assert!(PackingColoring::new(s, vec![0, 2]).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let c5 = graph::cycle(5).unwrap();
        let col = coloring("1,1,2", &[0, 1, 0, 1, 2]);
        let cert = Certificate::new(&c5, &col).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.classes, vec![vec![0, 2], vec![1, 3], vec![4]]);
        let json = cert.to_json().unwrap();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back.to_coloring().unwrap(), col);
        // Field spellings are part of the format.
        assert!(json.contains("\"schedule\":[1,1,2]"));
        assert!(json.contains("\"classes\":[[0,2],[1,3],[4]]"));
        assert!(json.contains("\"valid\":true"));
        assert!(!json.contains("lineage"));
    }

    #[test]
    fn certificate_rejects_overlap_and_gaps() {
        let bad = Certificate {
            schedule: PackingSchedule::parse("1,1").unwrap(),
            classes: vec![vec![0, 1], vec![1]],
            valid: true,
            lineage: None,
        };
        assert!(bad.to_coloring().is_err());
        let gap = Certificate {
            schedule: PackingSchedule::parse("1,1").unwrap(),
            classes: vec![vec![0], vec![2]],
            valid: true,
            lineage: None,
        };
        assert!(gap.to_coloring().is_err());
    }

    #[test]
    fn lineage_serialization_shapes() {
        let entries = vec![
            LineageEntry::Original { original: 3 },
            LineageEntry::Midpoint { midpoint: (0, 2) },
        ];
        let json = serde_json::to_string(&entries).unwrap();
        assert_eq!(json, r#"[{"original":3},{"midpoint":[0,2]}]"#);
        let back: Vec<LineageEntry> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, entries);
    }
}
