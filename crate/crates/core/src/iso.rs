//! Isomorphism testing for small graphs.
//!
//! Vertices are first coloured by iterated refinement of their distance
//! profiles (computed jointly over both graphs so colours are comparable).
//! A backtracking search then maps vertices of one graph onto equally
//! coloured vertices of the other, requiring every pairwise distance to
//! already-mapped vertices to be preserved.

use std::collections::BTreeMap;

use crate::error::GraphError;
use crate::graph::Graph;

pub const DEFAULT_MAX_VERTICES: usize = 64;

const UNREACHABLE: usize = usize::MAX;

/// Bounded isomorphism search.
#[derive(Debug, Clone, Copy)]
pub struct IsoSearch {
    pub max_vertices: usize,
}

impl Default for IsoSearch {
    fn default() -> Self {
        Self {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

/// Returns a witness permutation `p` (vertex `v` of `g` maps to `p[v]` in
/// `h`) when the graphs are isomorphic, using the default vertex cap.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, GraphError> {
    IsoSearch::default().run(g, h)
}

/// True iff `p` is a bijection carrying the edge set of `g` onto that of `h`.
pub fn verify_isomorphism(g: &Graph, h: &Graph, p: &[usize]) -> bool {
    let n = g.order();
    if h.order() != n || p.len() != n || g.size() != h.size() {
        return false;
    }
    let mut hit = vec![false; n];
    for &w in p {
        if w >= n || std::mem::replace(&mut hit[w], true) {
            return false;
        }
    }
    g.edges().all(|(u, v)| h.has_edge(p[u], p[v]))
}

impl IsoSearch {
    pub fn run(&self, g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, GraphError> {
        let n = g.order();
        for order in [n, h.order()] {
            if order > self.max_vertices {
                return Err(GraphError::TooLargeForIsomorphism {
                    order,
                    cap: self.max_vertices,
                });
            }
        }
        if n != h.order() || g.size() != h.size() {
            return Ok(None);
        }
        if n == 0 {
            return Ok(Some(Vec::new()));
        }
        let dg = distance_table(g);
        let dh = distance_table(h);
        let Some((cg, ch)) = refine_colors(&dg, &dh, n) else {
            return Ok(None);
        };

        let order = search_order(g, &cg);
        let mut state = Search {
            dg: &dg,
            dh: &dh,
            cg: &cg,
            ch: &ch,
            n,
            order: &order,
            map: vec![UNREACHABLE; n],
            used: vec![false; n],
        };
        if state.extend(0) {
            let p = state.map;
            debug_assert!(verify_isomorphism(g, h, &p));
            Ok(Some(p))
        } else {
            Ok(None)
        }
    }
}

fn distance_table(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut table = vec![UNREACHABLE; n * n];
    for s in 0..n {
        for (t, d) in g.bfs_distances(s).into_iter().enumerate() {
            if let Some(d) = d {
                table[s * n + t] = d;
            }
        }
    }
    table
}

/// Joint colour refinement; `None` when the colour histograms of the two
/// graphs differ at some round.
fn refine_colors(dg: &[usize], dh: &[usize], n: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut cg = vec![0usize; n];
    let mut ch = vec![0usize; n];
    let mut classes = 1;
    loop {
        let sig = |dist: &[usize], col: &[usize], v: usize| {
            let mut s: Vec<(usize, usize)> =
                (0..n).map(|w| (dist[v * n + w], col[w])).collect();
            s.sort_unstable();
            (col[v], s)
        };
        let sg: Vec<_> = (0..n).map(|v| sig(dg, &cg, v)).collect();
        let sh: Vec<_> = (0..n).map(|v| sig(dh, &ch, v)).collect();
        let mut ids = BTreeMap::new();
        for s in sg.iter().chain(sh.iter()) {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        cg = sg.iter().map(|s| ids[s]).collect();
        ch = sh.iter().map(|s| ids[s]).collect();

        let mut hg = vec![0usize; ids.len()];
        let mut hh = vec![0usize; ids.len()];
        cg.iter().for_each(|&c| hg[c] += 1);
        ch.iter().for_each(|&c| hh[c] += 1);
        if hg != hh {
            return None;
        }
        if ids.len() == classes {
            return Some((cg, ch));
        }
        classes = ids.len();
    }
}

/// Start from a vertex of the rarest colour, then grow in BFS order so each
/// new vertex is constrained by mapped neighbours.
fn search_order(g: &Graph, colors: &[usize]) -> Vec<usize> {
    let n = g.order();
    let mut freq = BTreeMap::new();
    colors.iter().for_each(|&c| *freq.entry(c).or_insert(0usize) += 1);
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| (freq[&colors[v]], v));
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut head = order.len();
        order.push(r);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    dg: &'a [usize],
    dh: &'a [usize],
    cg: &'a [usize],
    ch: &'a [usize],
    n: usize,
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.n {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.n {
            if self.used[w] || self.cg[v] != self.ch[w] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                self.dg[v * self.n + u] == self.dh[w * self.n + self.map[u]]
            });
            if !consistent {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[w] = false;
            self.map[v] = UNREACHABLE;
        }
        false
    }
}
