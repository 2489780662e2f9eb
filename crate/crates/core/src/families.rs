//! Deterministic constructors for the named graph families.
//!
//! Subset and word vertices are enumerated in lexicographic order and then
//! replaced by integer indices; the original labels are kept on the graph as
//! a side table.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::FamilyError;
use crate::graph::Graph;

/// Upper bound on the vertex count of any family graph.
pub const VERTEX_CEILING: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// Odd graph `O_{d+1}` on the `d`-subsets of a `(2d+1)`-set.
    Odd { d: usize },
    Johnson { n: usize, k: usize },
    Hamming { d: usize, q: usize },
    /// Folded `n`-cube, `n` odd.
    FoldedCube { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Petersen,
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph, FamilyError> {
        let g = match *self {
            FamilySpec::Odd { d } => odd_graph(d)?,
            FamilySpec::Johnson { n, k } => johnson_graph(n, k)?,
            FamilySpec::Hamming { d, q } => hamming_graph(d, q)?,
            FamilySpec::FoldedCube { n } => folded_cube(n)?,
            FamilySpec::Cycle { n } => cycle(n)?,
            FamilySpec::Complete { n } => complete(n)?,
            FamilySpec::Petersen => petersen(),
        };
        Ok(g.with_label(self.to_string()))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Odd { d } => write!(f, "odd:{d}"),
            FamilySpec::Johnson { n, k } => write!(f, "johnson:{n},{k}"),
            FamilySpec::Hamming { d, q } => write!(f, "hamming:{d},{q}"),
            FamilySpec::FoldedCube { n } => write!(f, "folded_cube:{n}"),
            FamilySpec::Cycle { n } => write!(f, "cycle:{n}"),
            FamilySpec::Complete { n } => write!(f, "complete:{n}"),
            FamilySpec::Petersen => write!(f, "petersen"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = || FamilyError::Parse(s.to_string());
        let (kind, params) = match s.split_once(':') {
            Some((k, p)) => (k.trim(), Some(p)),
            None => (s.trim(), None),
        };
        let nums: Vec<usize> = match params {
            Some(p) => p
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err()))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let spec = match (kind, nums.as_slice()) {
            ("odd", &[d]) => FamilySpec::Odd { d },
            ("johnson", &[n, k]) => FamilySpec::Johnson { n, k },
            ("hamming", &[d, q]) => FamilySpec::Hamming { d, q },
            ("folded_cube", &[n]) => FamilySpec::FoldedCube { n },
            ("cycle", &[n]) => FamilySpec::Cycle { n },
            ("complete", &[n]) => FamilySpec::Complete { n },
            ("petersen", &[]) => FamilySpec::Petersen,
            _ => return Err(parse_err()),
        };
        Ok(spec)
    }
}

fn invalid(kind: &'static str, reason: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParameters {
        kind,
        reason: reason.into(),
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn check_ceiling(kind: &'static str, vertices: u128) -> Result<usize, FamilyError> {
    if vertices > VERTEX_CEILING as u128 {
        return Err(FamilyError::TooLarge {
            kind,
            vertices,
            ceiling: VERTEX_CEILING,
        });
    }
    Ok(vertices as usize)
}

fn subset_label(mask: u64) -> String {
    let elems = (0..64).filter(|b| mask >> b & 1 == 1).join(",");
    format!("{{{elems}}}")
}

/// All `k`-subsets of `0..n` as bitmasks, in lexicographic order of their
/// sorted element lists, plus the reverse index.
fn subsets(n: usize, k: usize) -> (Vec<u64>, HashMap<u64, usize>) {
    let masks: Vec<u64> = (0..n)
        .combinations(k)
        .map(|c| c.into_iter().fold(0u64, |m, e| m | 1 << e))
        .collect();
    let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    (masks, index)
}

/// Odd graph `O_{d+1}`: `d`-subsets of a `(2d+1)`-set, adjacent iff
/// disjoint. Requires `d >= 2`.
pub fn odd_graph(d: usize) -> Result<Graph, FamilyError> {
    if d < 2 {
        return Err(invalid("odd", "d must be at least 2"));
    }
    odd_graph_any(d)
}

/// `odd_graph` without the `d >= 2` restriction; `d = 1` gives `K_3`.
pub(crate) fn odd_graph_any(d: usize) -> Result<Graph, FamilyError> {
    if d == 0 {
        return Err(invalid("odd", "d must be positive"));
    }
    let ground = 2 * d + 1;
    check_ceiling("odd", binomial(ground, d))?;
    let (masks, index) = subsets(ground, d);
    let full = (1u64 << ground) - 1;
    let adj = masks
        .iter()
        .map(|&m| {
            let rest = full & !m;
            // neighbours: drop one element of the complement
            (0..ground)
                .filter(|b| rest >> b & 1 == 1)
                .map(|b| index[&(rest & !(1 << b))])
                .collect()
        })
        .collect();
    Ok(Graph::from_neighbor_lists_unchecked(adj)
        .with_vertex_labels(masks.iter().map(|&m| subset_label(m)).collect()))
}

/// Johnson graph `J(n, k)`: `k`-subsets of an `n`-set, adjacent iff they
/// meet in `k - 1` elements.
pub fn johnson_graph(n: usize, k: usize) -> Result<Graph, FamilyError> {
    if k == 0 || n <= k {
        return Err(invalid("johnson", "need n > k >= 1"));
    }
    if n > 64 {
        return Err(invalid("johnson", "ground set larger than 64"));
    }
    check_ceiling("johnson", binomial(n, k))?;
    let (masks, index) = subsets(n, k);
    let adj = masks
        .iter()
        .map(|&m| {
            let inside = (0..n).filter(|b| m >> b & 1 == 1).collect_vec();
            let outside = (0..n).filter(|b| m >> b & 1 == 0).collect_vec();
            inside
                .iter()
                .cartesian_product(outside.iter())
                .map(|(&i, &o)| index[&(m & !(1 << i) | 1 << o)])
                .collect()
        })
        .collect();
    Ok(Graph::from_neighbor_lists_unchecked(adj)
        .with_vertex_labels(masks.iter().map(|&m| subset_label(m)).collect()))
}

/// Hamming graph `H(d, q)`: words of length `d` over `q` symbols, adjacent
/// iff they differ in one coordinate. Word index is its base-`q` value with
/// the first coordinate most significant.
pub fn hamming_graph(d: usize, q: usize) -> Result<Graph, FamilyError> {
    if d == 0 || q < 2 {
        return Err(invalid("hamming", "need d >= 1 and q >= 2"));
    }
    let count = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    let n = check_ceiling("hamming", count)?;
    let adj = (0..n)
        .map(|w| {
            let mut ns = Vec::with_capacity(d * (q - 1));
            let mut place = 1;
            for _ in 0..d {
                let digit = w / place % q;
                for s in 0..q {
                    if s != digit {
                        ns.push(w - digit * place + s * place);
                    }
                }
                place *= q;
            }
            ns
        })
        .collect();
    let labels = (0..n)
        .map(|w| {
            let mut digits = Vec::with_capacity(d);
            let mut x = w;
            for _ in 0..d {
                digits.push(char::from_digit((x % q) as u32, 36).unwrap_or('?'));
                x /= q;
            }
            digits.iter().rev().collect()
        })
        .collect();
    Ok(Graph::from_neighbor_lists_unchecked(adj).with_vertex_labels(labels))
}

/// Folded `n`-cube for odd `n >= 5`. Keeps, from each antipodal pair of
/// `n`-bit words, the one whose leading bit is 0; a flip of the leading bit
/// is folded back through complementation.
pub fn folded_cube(n: usize) -> Result<Graph, FamilyError> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(invalid("folded_cube", "need odd n >= 5"));
    }
    let count = check_ceiling(
        "folded_cube",
        1u128.checked_shl(n as u32 - 1).unwrap_or(u128::MAX),
    )?;
    let low = (1usize << (n - 1)) - 1;
    let adj = (0..count)
        .map(|w| {
            let mut ns: Vec<usize> = (0..n - 1).map(|b| w ^ (1 << b)).collect();
            ns.push(w ^ low);
            ns
        })
        .collect();
    let labels = (0..count).map(|w| format!("{w:0n$b}")).collect();
    Ok(Graph::from_neighbor_lists_unchecked(adj).with_vertex_labels(labels))
}

pub fn cycle(n: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(invalid("cycle", "need n >= 3"));
    }
    check_ceiling("cycle", n as u128)?;
    let adj = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
    Ok(Graph::from_neighbor_lists_unchecked(adj))
}

pub fn complete(n: usize) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(invalid("complete", "need n >= 2"));
    }
    check_ceiling("complete", (n as u128) * (n as u128))?;
    let adj = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
    Ok(Graph::from_neighbor_lists_unchecked(adj))
}

/// Petersen graph: outer 5-cycle `0..5`, spokes `i — i+5`, inner pentagram.
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("valid edges")
}
