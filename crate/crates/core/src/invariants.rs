//! Distance-regularity, intersection numbers and the bipartite / antipodal /
//! primitive classification.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::DistanceData;
use crate::error::GraphError;
use crate::graph::Graph;

/// Intersection numbers `p^h_{ij}` of a distance-regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionData {
    d: usize,
    k: usize,
    n: usize,
    p: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
    a: Vec<u64>,
    sphere_sizes: Vec<u64>,
}

/// The intersection array `{b_0..b_{d-1}; c_1..c_d}` in report form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionArray {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

/// Evidence that a graph is not distance-regular: two vertex pairs at the
/// same distance `h` whose `(i, j)` counts differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotDrgWitness {
    pub h: usize,
    pub i: usize,
    pub j: usize,
    pub reference: (usize, usize),
    pub reference_count: u64,
    pub offending: (usize, usize),
    pub offending_count: u64,
}

impl fmt::Display for NotDrgWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairs {:?} and {:?} at distance {} have {} vs {} vertices at distances ({}, {})",
            self.reference,
            self.offending,
            self.h,
            self.reference_count,
            self.offending_count,
            self.i,
            self.j
        )
    }
}

impl std::error::Error for NotDrgWitness {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassificationFlags {
    pub bipartite: bool,
    pub antipodal: bool,
    pub primitive: bool,
}

/// `(d+1) x (d+1)` table of `|{z : ∂(x,z)=i, ∂(y,z)=j}|`.
pub fn pair_counts(dd: &DistanceData, x: usize, y: usize) -> Vec<u64> {
    let w = dd.diameter() + 1;
    let mut counts = vec![0u64; w * w];
    for (&dx, &dy) in dd.row(x).iter().zip(dd.row(y)) {
        counts[dx as usize * w + dy as usize] += 1;
    }
    counts
}

/// Verifies exhaustively that every count `|Γ_i(x) ∩ Γ_j(y)|` depends only on
/// `∂(x, y)`, and returns the full intersection tensor. On failure the
/// witness is the lexicographically first offending ordered pair, compared
/// against the first pair at the same distance.
pub fn check_distance_regular(
    g: &Graph,
    dd: &DistanceData,
) -> Result<IntersectionData, NotDrgWitness> {
    debug_assert_eq!(g.order(), dd.order());
    let n = dd.order();
    let d = dd.diameter();
    let w = d + 1;

    let references: Vec<(usize, usize)> = (0..=d)
        .map(|h| dd.pairs_at(h).next().expect("every distance up to d occurs"))
        .collect();
    let tables: Vec<Vec<u64>> = references
        .iter()
        .map(|&(x, y)| pair_counts(dd, x, y))
        .collect();

    let violation = (0..n).into_par_iter().find_map_first(|x| {
        (0..n).find_map(|y| {
            let h = dd.dist(x, y);
            let counts = pair_counts(dd, x, y);
            let expected = &tables[h];
            let idx = (0..w * w).find(|&t| counts[t] != expected[t])?;
            Some(NotDrgWitness {
                h,
                i: idx / w,
                j: idx % w,
                reference: references[h],
                reference_count: expected[idx],
                offending: (x, y),
                offending_count: counts[idx],
            })
        })
    });
    if let Some(witness) = violation {
        return Err(witness);
    }

    let p: Vec<u64> = tables.concat();
    let at = |h: usize, i: usize, j: usize| p[(h * w + i) * w + j];
    let k = at(0, 1, 1) as usize;
    let b = (0..d).map(|i| at(i, 1, i + 1)).collect();
    let c = (1..=d).map(|i| at(i, 1, i - 1)).collect();
    let a = (0..=d).map(|i| at(i, 1, i)).collect();
    let sphere_sizes = (0..=d).map(|i| at(0, i, i)).collect();
    Ok(IntersectionData {
        d,
        k,
        n,
        p,
        b,
        c,
        a,
        sphere_sizes,
    })
}

impl IntersectionData {
    pub fn diameter(&self) -> usize {
        self.d
    }

    pub fn valency(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `p^h_{ij}` without bounds reporting; panics when out of range.
    #[inline]
    pub fn p(&self, h: usize, i: usize, j: usize) -> u64 {
        let w = self.d + 1;
        self.p[(h * w + i) * w + j]
    }

    pub fn intersection_number(&self, h: usize, i: usize, j: usize) -> Result<u64, GraphError> {
        for index in [h, i, j] {
            if index > self.d {
                return Err(GraphError::IndexOutOfRange {
                    index,
                    max: self.d,
                });
            }
        }
        Ok(self.p(h, i, j))
    }

    /// `b_0, ..., b_{d-1}`.
    pub fn b(&self) -> &[u64] {
        &self.b
    }

    /// `c_1, ..., c_d`.
    pub fn c(&self) -> &[u64] {
        &self.c
    }

    /// `a_0, ..., a_d`.
    pub fn a(&self) -> &[u64] {
        &self.a
    }

    /// `b_i` with `b_d = 0`.
    pub fn b_at(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i` with `c_0 = 0`.
    pub fn c_at(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// Sphere sizes `k_0, ..., k_d`.
    pub fn sphere_sizes(&self) -> &[u64] {
        &self.sphere_sizes
    }

    pub fn intersection_array(&self) -> IntersectionArray {
        IntersectionArray {
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }
}

/// Bipartite by 2-colouring; antipodal by testing that "equal or at distance
/// d" is transitive; primitive when neither.
pub fn classify(g: &Graph, dd: &DistanceData) -> ClassificationFlags {
    let bipartite = g.is_bipartite();
    let d = dd.diameter();
    let class_of = |x: usize| {
        let mut s = dd.sphere(x, d).to_vec();
        if d > 0 {
            s.push(x);
            s.sort_unstable();
        }
        s
    };
    let antipodal = (0..dd.order()).all(|x| {
        let cx = class_of(x);
        cx.iter().all(|&y| class_of(y) == cx)
    });
    ClassificationFlags {
        bipartite,
        antipodal,
        primitive: !bipartite && !antipodal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cycle, folded_cube, hamming_graph, odd_graph, petersen};

    fn drg(g: &Graph) -> (DistanceData, IntersectionData) {
        let dd = DistanceData::new(g).unwrap();
        let id = check_distance_regular(g, &dd).unwrap();
        (dd, id)
    }

    #[test]
    fn petersen_array() {
        let (_, id) = drg(&petersen());
        assert_eq!(id.b(), &[3, 2]);
        assert_eq!(id.c(), &[1, 1]);
        assert_eq!(id.a(), &[0, 0, 2]);
        assert_eq!(id.sphere_sizes(), &[1, 3, 6]);
    }

    #[test]
    fn c6_array() {
        let (_, id) = drg(&cycle(6).unwrap());
        assert_eq!(id.b(), &[2, 1, 1]);
        assert_eq!(id.c(), &[1, 1, 2]);
    }

    #[test]
    fn path_is_not_drg() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let dd = DistanceData::new(&p3).unwrap();
        let w = check_distance_regular(&p3, &dd).unwrap_err();
        // (1, 0) is the first pair whose counts differ from those of (0, 1)
        assert_eq!(w.h, 1);
        assert_eq!(w.reference, (0, 1));
        assert_eq!(w.offending, (1, 0));
        assert_eq!((w.i, w.j), (1, 2));
        assert_eq!((w.reference_count, w.offending_count), (0, 1));
    }

    #[test]
    fn regular_but_not_drg() {
        // Triangular prism: 3-regular, but adjacent pairs differ in common neighbours.
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let dd = DistanceData::new(&g).unwrap();
        let w = check_distance_regular(&g, &dd).unwrap_err();
        assert_eq!(w.h, 1);
        let recount = |(x, y): (usize, usize)| pair_counts(&dd, x, y)[w.i * 3 + w.j];
        assert_eq!(recount(w.reference), w.reference_count);
        assert_eq!(recount(w.offending), w.offending_count);
        assert_ne!(w.reference_count, w.offending_count);
    }

    #[test]
    fn index_checks() {
        let (_, id) = drg(&petersen());
        assert_eq!(id.intersection_number(0, 1, 1), Ok(3));
        assert_eq!(id.intersection_number(1, 0, 2), Ok(0));
        assert!(id.intersection_number(3, 0, 0).is_err());
    }

    #[test]
    fn odd_graph_a_values() {
        for d in 3..=5 {
            let (_, id) = drg(&odd_graph(d).unwrap());
            for h in 0..d {
                assert_eq!(id.p(h, 1, h), 0);
            }
            assert_eq!(id.p(d, 1, d) as usize, (d + 2) / 2);
        }
    }

    #[test]
    fn tensor_identities() {
        for g in [petersen(), odd_graph(3).unwrap(), hamming_graph(3, 3).unwrap()] {
            let (_, id) = drg(&g);
            let d = id.diameter();
            let ks = id.sphere_sizes();
            assert_eq!(id.p(0, 1, 1) as usize, id.valency());
            for h in 0..=d {
                for i in 0..=d {
                    let row: u64 = (0..=d).map(|j| id.p(h, i, j)).sum();
                    assert_eq!(row, ks[i]);
                    for j in 0..=d {
                        assert_eq!(id.p(h, i, j), id.p(h, j, i));
                        assert_eq!(ks[h] * id.p(h, i, j), ks[i] * id.p(i, h, j));
                        if i + j < h || i.abs_diff(j) > h {
                            assert_eq!(id.p(h, i, j), 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classifications() {
        let flags = |g: Graph| classify(&g, &DistanceData::new(&g).unwrap());
        let cube = flags(hamming_graph(3, 2).unwrap());
        assert!(cube.bipartite && cube.antipodal && !cube.primitive);
        let p = flags(petersen());
        assert!(!p.bipartite && !p.antipodal && p.primitive);
        let c6 = flags(cycle(6).unwrap());
        assert!(c6.bipartite && c6.antipodal);
        assert!(flags(odd_graph(3).unwrap()).primitive);
        let f7 = flags(folded_cube(7).unwrap());
        assert!(!f7.bipartite);
        assert!(!f7.antipodal);
    }
}
