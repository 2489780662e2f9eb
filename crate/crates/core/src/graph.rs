//! Simple undirected graphs stored as sorted adjacency lists.

use std::collections::VecDeque;

use crate::error::GraphError;

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    label: Option<String>,
    vertex_labels: Option<Vec<String>>,
}

/// Result of [`Graph::induced_subgraph`]: the subgraph plus the map from its
/// vertices back to the parent graph.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub parent_index: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are symmetrized and
    /// deduplicated; loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_neighbor_lists_unchecked(adj))
    }

    /// Adjacency lists that are known to be symmetric and loop-free; they are
    /// sorted and deduplicated here.
    pub(crate) fn from_neighbor_lists_unchecked(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        debug_assert!(adj
            .iter()
            .enumerate()
            .all(|(v, ns)| ns.iter().all(|&w| w != v && adj[w].binary_search(&v).is_ok())));
        Self {
            adj,
            label: None,
            vertex_labels: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub(crate) fn with_vertex_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.adj.len());
        self.vertex_labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Human-readable name of a vertex (subset, word, ...) when the graph came
    /// from a family constructor.
    pub fn vertex_label(&self, v: usize) -> Option<&str> {
        self.vertex_labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|ns| ns.len() == k).then_some(k)
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<InducedSubgraph, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        let mut parent_index = vertices.to_vec();
        parent_index.sort_unstable();
        parent_index.dedup();
        let mut local = vec![usize::MAX; self.order()];
        for (i, &v) in parent_index.iter().enumerate() {
            if v >= self.order() {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    n: self.order(),
                });
            }
            local[v] = i;
        }
        let adj = parent_index
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect()
            })
            .collect();
        Ok(InducedSubgraph {
            graph: Self::from_neighbor_lists_unchecked(adj),
            parent_index,
        })
    }

    /// Connected components, each sorted, ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            let mut block = Vec::new();
            while let Some(v) = queue.pop_front() {
                block.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            block.sort_unstable();
            components.push(block);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.order() > 0 && self.connected_components().len() == 1
    }

    /// A proper 2-colouring (`false`/`true` per vertex) if one exists.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let n = self.order();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(false);
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                for &w in &self.adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Bipartite double: vertex `v` becomes `v` (plus copy) and `v + n`
    /// (minus copy); `v⁺ ~ w⁻` iff `v ~ w`.
    pub fn bipartite_double(&self) -> Graph {
        let n = self.order();
        let mut adj = vec![Vec::new(); 2 * n];
        for v in 0..n {
            for &w in &self.adj[v] {
                adj[v].push(w + n);
                adj[w + n].push(v);
            }
        }
        Self::from_neighbor_lists_unchecked(adj)
    }

    /// Hop distances from `source`; unreachable vertices get `None`.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Diameter of a connected graph, `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.order() {
            for d in self.bfs_distances(v) {
                best = best.max(d?);
            }
        }
        Some(best)
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
    fn triangle_and_cycle() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(k3.regular_degree(), Some(2));
        assert_eq!(k3.size(), 3);
        let c5 = cycle(5);
        assert!((0..5).all(|v| c5.degree(v) == 2));
    }

    #[test]
    fn rejects_loops_and_range() {
        assert_eq!(Graph::from_edges(2, &[(0, 0)]), Err(GraphError::Loop(0)));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn duplicates_are_merged() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn induced_k3_in_k4() {
        let edges: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let k4 = Graph::from_edges(4, &edges).unwrap();
        let sub = k4.induced_subgraph(&[3, 0, 2]).unwrap();
        assert_eq!(sub.parent_index, vec![0, 2, 3]);
        assert_eq!(sub.graph.order(), 3);
        assert_eq!(sub.graph.size(), 3);
        assert_eq!(k4.induced_subgraph(&[]).unwrap_err(), GraphError::EmptyVertexSet);
    }

    #[test]
    fn c6_first_sphere_is_independent() {
        let c6 = cycle(6);
        let sub = c6.induced_subgraph(&[1, 5]).unwrap();
        assert_eq!(sub.graph.size(), 0);
        assert_eq!(sub.graph.connected_components().len(), 2);
    }

    #[test]
    fn components() {
        let k3 = cycle(3);
        assert_eq!(k3.connected_components(), vec![vec![0, 1, 2]]);
        let empty = Graph::from_edges(4, &[]).unwrap();
        assert_eq!(empty.connected_components().len(), 4);
    }

    #[test]
    fn bipartite_doubles() {
        let d = cycle(3).bipartite_double();
        assert_eq!(d.order(), 6);
        assert_eq!(d.regular_degree(), Some(2));
        assert!(d.is_connected());
        assert!(d.is_bipartite());

        let d4 = cycle(4).bipartite_double();
        assert_eq!(d4.connected_components().len(), 2);
        assert_eq!(d4.size(), 8);
    }

    #[test]
    fn diameter_of_cycles() {
        assert_eq!(cycle(6).diameter(), Some(3));
        assert_eq!(cycle(7).diameter(), Some(3));
        assert_eq!(Graph::from_edges(2, &[]).unwrap().diameter(), None);
    }
}
