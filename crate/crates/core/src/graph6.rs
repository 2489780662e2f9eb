//! graph6 reading and writing.
//!
//! Layout: `N(n)` size prefix followed by the upper triangle of the adjacency
//! matrix, column by column (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), packed
//! big-endian into 6-bit groups, each group offset by 63. An optional
//! `>>graph6<<` header may precede the data.

use crate::error::Graph6Error;
use crate::graph::Graph;

pub const HEADER: &str = ">>graph6<<";

const MAX_ORDER: usize = 68_719_476_735;

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

fn sextet(bytes: &[u8], pos: usize) -> Result<usize, Graph6Error> {
    match bytes.get(pos) {
        Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as usize),
        Some(&b) => Err(Graph6Error::InvalidChar(b)),
        None => Err(Graph6Error::Empty),
    }
}

/// Returns `(n, bytes consumed)`.
fn decode_size(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let first = *bytes.first().ok_or(Graph6Error::Empty)?;
    if first != 126 {
        return Ok((sextet(bytes, 0)?, 1));
    }
    let (start, len) = if bytes.get(1) == Some(&126) { (2, 6) } else { (1, 3) };
    let mut n = 0;
    for i in 0..len {
        n = (n << 6) | sextet(bytes, start + i).map_err(|_| Graph6Error::Truncated { n: 0 })?;
    }
    Ok((n, start + len))
}

/// Encodes `g` without header or trailing newline.
pub fn to_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(Graph6Error::TooLarge(n));
    }
    let mut out = Vec::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

/// Decodes a single graph6 string; a leading header and surrounding
/// whitespace are accepted.
pub fn from_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let (n, mut pos) = decode_size(bytes)?;
    let total_bits = n * n.saturating_sub(1) / 2;
    let groups = total_bits.div_ceil(6);
    if bytes.len() < pos + groups {
        return Err(Graph6Error::Truncated { n });
    }
    if bytes.len() > pos + groups {
        return Err(Graph6Error::TrailingData(bytes.len() - pos - groups));
    }

    let mut adj = vec![Vec::new(); n];
    let mut bit = 0;
    let mut current = 0;
    for j in 1..n {
        for i in 0..j {
            if bit % 6 == 0 {
                current = sextet(bytes, pos)?;
                pos += 1;
            }
            if (current >> (5 - bit % 6)) & 1 == 1 {
                adj[i].push(j);
                adj[j].push(i);
            }
            bit += 1;
        }
    }
    if bit % 6 != 0 {
        let pad = 6 - bit % 6;
        if current & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonZeroPadding);
        }
    }
    Ok(Graph::from_neighbor_lists_unchecked(adj))
}

/// One graph per non-empty line.
pub fn parse_graph6_lines(text: &str) -> Result<Vec<Graph>, Graph6Error> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(from_graph6)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn petersen_edges() -> Vec<(usize, usize)> {
        vec![
            (0, 1), (0, 4), (0, 5), (1, 2), (1, 6), (2, 3), (2, 7), (3, 4),
            (3, 8), (4, 9), (5, 7), (5, 8), (6, 8), (6, 9), (7, 9),
        ]
    }

    // Reference strings produced by an independent graph6 writer.
    #[test]
    fn known_encodings() {
        let p = Graph::from_edges(10, &petersen_edges()).unwrap();
        assert_eq!(to_graph6(&p).unwrap(), "IheA@GUAo");
        let c6 = Graph::from_edges(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(to_graph6(&c6).unwrap(), "EhEG");
        assert_eq!(to_graph6(&Graph::from_edges(0, &[]).unwrap()).unwrap(), "?");
        assert_eq!(to_graph6(&Graph::from_edges(1, &[]).unwrap()).unwrap(), "@");
    }

    #[test]
    fn long_size_prefix() {
        let path: Vec<_> = (0..69).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(70, &path).unwrap();
        let s = to_graph6(&g).unwrap();
        assert!(s.starts_with("~?@EhCGGC@?G?_@?@??_?G?@??C??G"));
        assert!(s.ends_with("@???????????G"));
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn header_is_accepted() {
        let k4 = from_graph6(">>graph6<<C~\n").unwrap();
        assert_eq!(k4.order(), 4);
        assert_eq!(k4.size(), 6);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(from_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(from_graph6("C"), Err(Graph6Error::Truncated { n: 4 }));
        assert_eq!(from_graph6("C~~"), Err(Graph6Error::TrailingData(1)));
        assert_eq!(from_graph6("C!"), Err(Graph6Error::InvalidChar(b'!')));
        // K_3 with a padding bit set: 3 data bits then 3 padding bits.
        assert_eq!(from_graph6("Bx"), Err(Graph6Error::NonZeroPadding));
        assert_eq!(from_graph6("Bw").unwrap().size(), 3);
    }

    #[test]
    fn multi_line() {
        let gs = parse_graph6_lines("IheA@GUAo\n\nEhEG\n").unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[1].order(), 6);
    }

    proptest! {
        #[test]
        fn roundtrip(n in 0usize..80, seed in any::<u64>()) {
            let mut state = seed | 1;
            let mut edges = Vec::new();
            for j in 1..n {
                for i in 0..j {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    if state % 3 == 0 {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let s = to_graph6(&g).unwrap();
            prop_assert_eq!(from_graph6(&s).unwrap(), g);
        }
    }
}
