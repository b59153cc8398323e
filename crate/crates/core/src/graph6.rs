//! graph6 and plain edge-list text formats.
//!
//! graph6 packs the upper adjacency triangle column by column into 6-bit
//! groups offset by 63; the leading bytes encode the vertex count (one byte
//! up to 62 vertices, `~` plus three bytes up to 258047). Parse errors carry
//! the byte offset of the offending input.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

const OFFSET: u8 = 63;
const LONG_FORM_MAX: usize = 258_047;

/// Decodes one graph6 line (an optional `>>graph6<<` header is accepted).
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.trim_end_matches(['\r', '\n']);
    let (body, base) = match line.strip_prefix(">>graph6<<") {
        Some(rest) => (rest, ">>graph6<<".len()),
        None => (line, 0),
    };
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(Error::parse(base, "empty graph6 string"));
    }
    if bytes[0] == b':' || bytes[0] == b';' {
        return Err(Error::parse(
            base,
            "sparse6 input is not supported, expected graph6",
        ));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(OFFSET..=126).contains(&b) {
            return Err(Error::parse(
                base + i,
                format!("byte 0x{b:02x} outside graph6 range '?'..'~'"),
            ));
        }
    }

    // Vertex count.
    let (n, pos) = if bytes[0] == b'~' {
        if bytes.len() < 4 {
            return Err(Error::parse(base, "truncated long-form vertex count"));
        }
        if bytes[1] == b'~' {
            return Err(Error::parse(
                base,
                "graphs beyond 258047 vertices are not supported",
            ));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - OFFSET) as usize);
        (n, 4)
    } else {
        ((bytes[0] - OFFSET) as usize, 1)
    };

    let bit_count = if n < 2 { 0 } else { n * (n - 1) / 2 };
    let expected_bytes = bit_count.div_ceil(6);
    let have = bytes.len() - pos;
    if have < expected_bytes {
        return Err(Error::parse(
            base + bytes.len(),
            format!("{n} vertices need {expected_bytes} data bytes, found {have}"),
        ));
    }
    if have > expected_bytes {
        return Err(Error::parse(
            base + pos + expected_bytes,
            "trailing bytes after adjacency data",
        ));
    }

    let mut edges = Vec::new();
    let data = &bytes[pos..];
    let mut bit_index = 0usize;
    for col in 1..n {
        for row in 0..col {
            let byte = (data[bit_index / 6] - OFFSET) as usize;
            let bit = byte >> (5 - bit_index % 6) & 1;
            if bit == 1 {
                edges.push((row, col));
            }
            bit_index += 1;
        }
    }
    // Padding bits beyond the triangle must be zero.
    if bit_count % 6 != 0 {
        let last = (bytes[bytes.len() - 1] - OFFSET) as usize;
        let pad_mask = (1usize << (6 - bit_count % 6)) - 1;
        if last & pad_mask != 0 {
            return Err(Error::parse(base + bytes.len() - 1, "nonzero padding bits"));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Encodes a graph as a graph6 line (no trailing newline).
pub fn emit_graph6(g: &Graph) -> Result<String> {
    let n = g.vertex_count();
    if n > LONG_FORM_MAX {
        return Err(Error::Unsupported(format!(
            "graph6 encoding for {n} vertices exceeds the long form"
        )));
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + OFFSET);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 0x3f) as u8 + OFFSET);
        out.push(((n >> 6) & 0x3f) as u8 + OFFSET);
        out.push((n & 0x3f) as u8 + OFFSET);
    }
    let mut group = 0u8;
    let mut filled = 0u8;
    for col in 1..n {
        for row in 0..col {
            group <<= 1;
            if g.has_edge(row, col) {
                group |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(group + OFFSET);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + OFFSET);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ascii"))
}

/// Parses the plain edge-list format: a header line `n m` followed by `m`
/// lines `u v`. Blank lines and `#` comments are allowed.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut offset = 0usize;
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut fields = content.split_whitespace();
        let a = fields.next();
        let b = fields.next();
        if fields.next().is_some() {
            return Err(Error::parse(line_start, "expected exactly two integers"));
        }
        let (a, b) = match (a, b) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::parse(line_start, "expected two integers")),
        };
        let parse_int = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(line_start, format!("bad integer '{s}'")))
        };
        let (x, y) = (parse_int(a)?, parse_int(b)?);
        match header {
            None => header = Some((x, y)),
            Some(_) => edges.push((x, y)),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(offset, "missing 'n m' header line"))?;
    if edges.len() != m {
        return Err(Error::parse(
            offset,
            format!("header promised {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges)
}

/// Writes the edge-list format parsed by [`parse_edge_list`].
pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{self, are_isomorphic};

    #[test]
    fn hand_packed_small_graphs() {
        // K1: single byte n=1.
        let k1 = parse_graph6("@").unwrap();
        assert_eq!(k1.vertex_count(), 1);
        assert_eq!(k1.edge_count(), 0);
        assert_eq!(emit_graph6(&k1).unwrap(), "@");

        // Path 0-1-2: bits x(0,1)=1 x(0,2)=0 x(1,2)=1, padded "101000" = 40,
        // so the data byte is 40+63 = 'g'.
        let p3 = parse_graph6("Bg").unwrap();
        assert_eq!(p3.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(emit_graph6(&p3).unwrap(), "Bg");

        // 5 vertices, no edges: 10 zero bits = two '?' data bytes.
        let e5 = parse_graph6("D??").unwrap();
        assert_eq!(e5.vertex_count(), 5);
        assert_eq!(e5.edge_count(), 0);
    }

    #[test]
    fn header_prefix_accepted() {
        let g = parse_graph6(">>graph6<<Bg").unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn petersen_round_trip_is_isomorphic_identity() {
        let g = graph::petersen();
        let line = emit_graph6(&g).unwrap();
        let back = parse_graph6(&line).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert!(are_isomorphic(&back, &graph::petersen()));
        assert_eq!(back.vertex_count(), 10);
        assert_eq!(back.edge_count(), 15);
        assert!(back.is_cubic());
    }

    #[test]
    fn long_form_vertex_count() {
        let g = graph::path(63).unwrap();
        let line = emit_graph6(&g).unwrap();
        assert!(line.starts_with('~'));
        let back = parse_graph6(&line).unwrap();
        assert_eq!(back.vertex_count(), 63);
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match parse_graph6("B\u{7f}") {
            Err(crate::Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        // Too few data bytes for 10 vertices.
        assert!(parse_graph6("I").is_err());
        // Trailing garbage.
        assert!(parse_graph6("Bg?").is_err());
        // sparse6 marker.
        assert!(parse_graph6(":Bg").is_err());
        // Nonzero padding bits: P3 byte with an extra low bit set.
        assert!(parse_graph6("Bh").is_err());
    }

    #[test]
    fn round_trip_generated_corpus() {
        for n in [1usize, 2, 5, 9, 62, 63, 70] {
            let g = graph::path(n).unwrap();
            let back = parse_graph6(&emit_graph6(&g).unwrap()).unwrap();
            assert_eq!(back.edges(), g.edges(), "path({n})");
        }
        let prism = graph::prism(7).unwrap();
        assert_eq!(
            parse_graph6(&emit_graph6(&prism).unwrap()).unwrap().edges(),
            prism.edges()
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = graph::prism(4).unwrap();
        let text = emit_edge_list(&g);
        assert!(text.starts_with("8 12\n"));
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn edge_list_rejects_malformed() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("2 1\n").is_err()); // promised edge missing
        assert!(parse_edge_list("2 1\n0 1\n0 1\n").is_err()); // duplicate
        assert!(parse_edge_list("2 x\n").is_err());
        assert!(parse_edge_list("3 1\n0 1 2\n").is_err());
        // Comments and blank lines are fine.
        let g = parse_edge_list("# triangle\n3 3\n\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    proptest::proptest! {
        // Any graph survives the trip through graph6, not just the handful
        // of shapes above: build one from an arbitrary bit choice over all
        // vertex pairs and compare the edge lists after emit + parse.
        #[test]
        fn arbitrary_graphs_round_trip(
            n in 1usize..24,
            bits in proptest::collection::vec(proptest::bool::ANY, 0..=276),
        ) {
            let mut edges = Vec::new();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits.get(k).copied().unwrap_or(false) {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let text = emit_graph6(&g).unwrap();
            let back = parse_graph6(&text).unwrap();
            proptest::prop_assert_eq!(back.vertex_count(), g.vertex_count());
            proptest::prop_assert_eq!(back.edges(), g.edges());
        }
    }
}
