//! All-pairs hop distances, distance spheres and distance matrices.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::GraphError;
use crate::graph::Graph;

/// Exact all-pairs distances of a connected graph.
///
/// Distances are stored one byte per entry; spheres `Γ_i(γ)` are kept as
/// sorted vertex lists for every `γ`.
#[derive(Debug, Clone)]
pub struct DistanceData {
    n: usize,
    diameter: usize,
    dist: Vec<u8>,
    spheres: Vec<Vec<Vec<usize>>>,
}

impl DistanceData {
    /// Runs one BFS per source vertex (concurrently) and assembles the
    /// distance store. Fails on disconnected input, naming an unreachable pair.
    pub fn new(g: &Graph) -> Result<Self, GraphError> {
        let n = g.order();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let rows: Vec<Vec<Option<usize>>> =
            (0..n).into_par_iter().map(|s| g.bfs_distances(s)).collect();

        let mut dist = vec![0u8; n * n];
        let mut diameter = 0;
        for (x, row) in rows.iter().enumerate() {
            for (y, d) in row.iter().enumerate() {
                let d = d.ok_or(GraphError::Disconnected(x, y))?;
                if d > u8::MAX as usize {
                    return Err(GraphError::DiameterTooLarge(d));
                }
                diameter = diameter.max(d);
                dist[x * n + y] = d as u8;
            }
        }
        let spheres = (0..n)
            .map(|x| {
                let mut s = vec![Vec::new(); diameter + 1];
                for y in 0..n {
                    s[dist[x * n + y] as usize].push(y);
                }
                s
            })
            .collect();
        Ok(Self {
            n,
            diameter,
            dist,
            spheres,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    #[inline]
    pub fn dist(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y] as usize
    }

    /// Row `x` of the distance matrix.
    #[inline]
    pub fn row(&self, x: usize) -> &[u8] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }

    /// `Γ_i(γ)`, sorted. Empty when `i` exceeds the diameter.
    pub fn sphere(&self, gamma: usize, i: usize) -> &[usize] {
        self.spheres[gamma].get(i).map_or(&[], Vec::as_slice)
    }

    /// Sorted union of `Γ_i(γ)` for `i` in `range`.
    pub fn ball_shell(&self, gamma: usize, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        let mut out: Vec<usize> = range
            .flat_map(|i| self.sphere(gamma, i).iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Sphere sizes `|Γ_i(γ)|` for `i = 0..=d`.
    pub fn sphere_sizes(&self, gamma: usize) -> Vec<usize> {
        self.spheres[gamma].iter().map(Vec::len).collect()
    }

    /// Distance matrix `A_h` as a dense 0/1 matrix.
    pub fn distance_matrix(&self, h: usize) -> Array2<f64> {
        Array2::from_shape_fn((self.n, self.n), |(x, y)| {
            if self.dist(x, y) == h {
                1.0
            } else {
                0.0
            }
        })
    }

    /// All ordered pairs `(x, y)` at distance `h`, lexicographic.
    pub fn pairs_at(&self, h: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.sphere(x, h).iter().map(move |&y| (x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn c6_spheres() {
        let dd = DistanceData::new(&cycle(6)).unwrap();
        assert_eq!(dd.diameter(), 3);
        for g in 0..6 {
            assert_eq!(dd.sphere_sizes(g), vec![1, 2, 2, 1]);
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(
            DistanceData::new(&g).unwrap_err(),
            GraphError::Disconnected(0, 3)
        );
    }

    #[test]
    fn distance_matrices_sum_to_all_ones() {
        let dd = DistanceData::new(&cycle(7)).unwrap();
        let mut total = Array2::<f64>::zeros((7, 7));
        for h in 0..=dd.diameter() {
            total = total + dd.distance_matrix(h);
        }
        assert!(total.iter().all(|&v| v == 1.0));
        assert_eq!(dd.distance_matrix(0), Array2::<f64>::eye(7));
    }
}
