//! Subconstituents and the connectivity certificates built on them.

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::DistanceData;
use crate::error::AnalysisError;
use crate::families::{binomial, odd_graph_any};
use crate::graph::{Graph, InducedSubgraph};
use crate::iso::{self, IsoSearch};

/// Dual values this close to zero are treated as zero by [`ck_index`].
pub const CK_SNAP: f64 = 1e-9;

fn check_index(dd: &DistanceData, i: usize) -> Result<(), AnalysisError> {
    if i > dd.diameter() {
        return Err(AnalysisError::IndexOutOfRange {
            index: i,
            diameter: dd.diameter(),
        });
    }
    Ok(())
}

/// Induced subgraph on `Γ_i(γ)`.
pub fn subconstituent(
    g: &Graph,
    dd: &DistanceData,
    gamma: usize,
    i: usize,
) -> Result<InducedSubgraph, AnalysisError> {
    check_index(dd, i)?;
    Ok(g.induced_subgraph(dd.sphere(gamma, i))?)
}

/// Connectivity of the subgraph induced on a union of consecutive spheres.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShellConnectivity {
    pub gamma: usize,
    pub connected: bool,
    /// Components as sorted parent-vertex lists, ordered by least vertex.
    pub components: Vec<Vec<usize>>,
}

/// Induced subgraph on `Γ_lo(γ) ∪ … ∪ Γ_hi(γ)`.
pub fn shell_connectivity(
    g: &Graph,
    dd: &DistanceData,
    gamma: usize,
    lo: usize,
    hi: usize,
) -> Result<ShellConnectivity, AnalysisError> {
    check_index(dd, hi)?;
    if lo > hi {
        return Err(AnalysisError::IndexOutOfRange {
            index: lo,
            diameter: hi,
        });
    }
    let sub = g.induced_subgraph(&dd.ball_shell(gamma, lo..=hi))?;
    let components: Vec<Vec<usize>> = sub
        .graph
        .connected_components()
        .into_iter()
        .map(|c| c.into_iter().map(|v| sub.parent_index[v]).collect())
        .collect();
    Ok(ShellConnectivity {
        gamma,
        connected: components.len() == 1,
        components,
    })
}

/// `Γ_{d−1}(γ) ∪ Γ_d(γ)`; needs `d >= 2`.
pub fn last_two_connected(
    g: &Graph,
    dd: &DistanceData,
    gamma: usize,
) -> Result<ShellConnectivity, AnalysisError> {
    let d = dd.diameter();
    if d < 2 {
        return Err(AnalysisError::DiameterTooSmall {
            needed: 2,
            diameter: d,
        });
    }
    shell_connectivity(g, dd, gamma, d - 1, d)
}

/// `∪_{i=s}^{d} Γ_i(γ)`; `s = 0` is the whole graph.
pub fn tail_connected(
    g: &Graph,
    dd: &DistanceData,
    gamma: usize,
    s: usize,
) -> Result<bool, AnalysisError> {
    Ok(shell_connectivity(g, dd, gamma, s, dd.diameter())?.connected)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CkIndex {
    pub s: usize,
    /// Positions whose dual value was snapped to zero.
    pub snapped: Vec<usize>,
}

/// The unique `s` with `θ*_{s−1} > 0 ≥ θ*_s`.
pub fn ck_index(dual: &[f64]) -> Result<CkIndex, AnalysisError> {
    let first = *dual.first().ok_or_else(|| AnalysisError::NoSignChange(Vec::new()))?;
    if first <= CK_SNAP {
        return Err(AnalysisError::NonPositiveStart(first));
    }
    let mut snapped = Vec::new();
    let values: Vec<f64> = dual
        .iter()
        .enumerate()
        .map(|(h, &v)| {
            if v != 0.0 && v.abs() <= CK_SNAP {
                log::info!("dual value {v:e} at position {h} snapped to zero");
                snapped.push(h);
                0.0
            } else {
                v
            }
        })
        .collect();
    let crossings: Vec<usize> = (1..values.len())
        .filter(|&s| values[s - 1] > 0.0 && values[s] <= 0.0)
        .collect();
    match crossings.as_slice() {
        [] => Err(AnalysisError::NoSignChange(values)),
        [s] => Ok(CkIndex { s: *s, snapped }),
        _ => Err(AnalysisError::MultipleSignChanges(values)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubDiameter {
    Diameter(usize),
    Disconnected { components: usize },
}

pub fn subconstituent_diameter(
    g: &Graph,
    dd: &DistanceData,
    gamma: usize,
    i: usize,
) -> Result<SubDiameter, AnalysisError> {
    let sub = subconstituent(g, dd, gamma, i)?.graph;
    Ok(match sub.diameter() {
        Some(diam) => SubDiameter::Diameter(diam),
        None => SubDiameter::Disconnected {
            components: sub.connected_components().len(),
        },
    })
}

/// Structure of one subconstituent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubconstituentStats {
    pub i: usize,
    pub vertices: usize,
    pub edges: usize,
    pub regular_degree: Option<usize>,
    pub components: usize,
    pub diameter: SubDiameter,
}

pub fn subconstituent_stats(
    g: &Graph,
    dd: &DistanceData,
    gamma: usize,
) -> Result<Vec<SubconstituentStats>, AnalysisError> {
    (0..=dd.diameter())
        .map(|i| {
            let sub = subconstituent(g, dd, gamma, i)?.graph;
            let components = sub.connected_components().len();
            let diameter = match sub.diameter() {
                Some(diam) => SubDiameter::Diameter(diam),
                None => SubDiameter::Disconnected { components },
            };
            Ok(SubconstituentStats {
                i,
                vertices: sub.order(),
                edges: sub.size(),
                regular_degree: sub.regular_degree(),
                components,
                diameter,
            })
        })
        .collect()
}

/// Component structure of `Γ_d(γ)` in an Odd graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddCensus {
    pub d: usize,
    pub gamma: usize,
    pub count: usize,
    pub component_size: usize,
    /// Every component is bipartite with equal parts.
    pub balanced_bipartite: bool,
    /// `None` when the components exceed the isomorphism cap.
    pub iso_certified: Option<bool>,
}

/// Shared data for checking the census at many base vertices of `O_{d+1}`.
pub struct OddCensusContext {
    d: usize,
    graph: Graph,
    dd: DistanceData,
    expected_count: usize,
    expected_size: usize,
    reference: Graph,
    search: IsoSearch,
}

impl OddCensusContext {
    pub fn new(d: usize) -> Result<Self, AnalysisError> {
        if d < 3 {
            return Err(AnalysisError::CensusDiameter(d));
        }
        let m = if d.is_multiple_of(2) { d / 2 } else { d.div_ceil(2) };
        let r = if d.is_multiple_of(2) { d / 2 } else { (d - 1) / 2 };
        let graph = odd_graph_any(d)?;
        let dd = DistanceData::new(&graph)?;
        Ok(Self {
            d,
            expected_count: (binomial(2 * m, m) / 2) as usize,
            expected_size: 2 * binomial(2 * r + 1, r) as usize,
            reference: odd_graph_any(r)?.bipartite_double(),
            graph,
            dd,
            search: IsoSearch::default(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn distances(&self) -> &DistanceData {
        &self.dd
    }

    pub fn expected_count(&self) -> usize {
        self.expected_count
    }

    pub fn expected_size(&self) -> usize {
        self.expected_size
    }

    /// Census at `gamma`; any deviation from the expected structure is an error.
    pub fn at(&self, gamma: usize) -> Result<OddCensus, AnalysisError> {
        let mismatch = |what: String| AnalysisError::CensusMismatch(format!("O_{} at vertex {gamma}: {what}", self.d + 1));
        let sub = subconstituent(&self.graph, &self.dd, gamma, self.d)?.graph;
        let components = sub.connected_components();
        if components.len() != self.expected_count {
            return Err(mismatch(format!(
                "{} components, expected {}",
                components.len(),
                self.expected_count
            )));
        }
        if let Some(c) = components.iter().find(|c| c.len() != self.expected_size) {
            return Err(mismatch(format!(
                "component of size {}, expected {}",
                c.len(),
                self.expected_size
            )));
        }
        let mut balanced = true;
        let mut iso_certified = (self.expected_size <= self.search.max_vertices).then_some(true);
        for c in &components {
            let block = sub.induced_subgraph(c)?.graph;
            balanced &= block.two_coloring().is_some_and(|col| {
                2 * col.iter().filter(|&&b| b).count() == col.len()
            });
            if iso_certified.is_some() {
                let certified = self
                    .search
                    .run(&block, &self.reference)?
                    .is_some_and(|p| iso::verify_isomorphism(&block, &self.reference, &p));
                if !certified {
                    iso_certified = Some(false);
                }
            }
        }
        if !balanced {
            return Err(mismatch("a component is not bipartite with equal parts".into()));
        }
        if iso_certified == Some(false) {
            return Err(mismatch("a component is not isomorphic to the bipartite double".into()));
        }
        Ok(OddCensus {
            d: self.d,
            gamma,
            count: components.len(),
            component_size: self.expected_size,
            balanced_bipartite: balanced,
            iso_certified,
        })
    }

    /// Census at every vertex, in vertex order.
    pub fn all(&self) -> Result<Vec<OddCensus>, AnalysisError> {
        (0..self.graph.order())
            .into_par_iter()
            .map(|gamma| self.at(gamma))
            .collect()
    }
}

/// Census of `O_{d+1}` at its lexicographically first vertex.
pub fn odd_component_census(d: usize) -> Result<OddCensus, AnalysisError> {
    OddCensusContext::new(d)?.at(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaConnectivity {
    pub gamma: usize,
    pub connected: bool,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm1Section {
    pub all_connected: bool,
    pub per_gamma: Vec<GammaConnectivity>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CkSection {
    pub s: usize,
    pub snapped: Vec<usize>,
    pub tail_all_connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSection {
    pub d: usize,
    pub count: usize,
    pub component_size: usize,
    pub iso_certified: bool,
}

impl From<&OddCensus> for CensusSection {
    fn from(c: &OddCensus) -> Self {
        Self {
            d: c.d,
            count: c.count,
            component_size: c.component_size,
            iso_certified: c.iso_certified == Some(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub thm1: Option<Thm1Section>,
    pub ck: CkSection,
    pub census: Option<CensusSection>,
    /// Subconstituent structure at vertex 0.
    pub subconstituents: Vec<SubconstituentStats>,
}

/// Last-two-shell connectivity at every vertex.
pub fn thm1_section(g: &Graph, dd: &DistanceData) -> Result<Thm1Section, AnalysisError> {
    let per_gamma = (0..g.order())
        .into_par_iter()
        .map(|gamma| {
            let sc = last_two_connected(g, dd, gamma)?;
            Ok(GammaConnectivity {
                gamma,
                connected: sc.connected,
                components: sc.components.len(),
            })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    Ok(Thm1Section {
        all_connected: per_gamma.iter().all(|p| p.connected),
        per_gamma,
    })
}

/// CK index from `dual` (the sequence for `θ_1`) and tail connectivity at
/// every vertex.
pub fn ck_section(g: &Graph, dd: &DistanceData, dual: &[f64]) -> Result<CkSection, AnalysisError> {
    let ck = ck_index(dual)?;
    let tail = (0..g.order())
        .into_par_iter()
        .map(|gamma| tail_connected(g, dd, gamma, ck.s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CkSection {
        s: ck.s,
        snapped: ck.snapped,
        tail_all_connected: tail.into_iter().all(|t| t),
    })
}

/// `thm1` is included only for `d >= 3` (the theorem's hypothesis);
/// `census` is supplied by callers that know the graph is an Odd graph.
pub fn connectivity_report(
    g: &Graph,
    dd: &DistanceData,
    dual_theta1: &[f64],
    census: Option<&OddCensus>,
) -> Result<ConnectivityReport, AnalysisError> {
    let thm1 = if dd.diameter() >= 3 {
        Some(thm1_section(g, dd)?)
    } else {
        None
    };
    Ok(ConnectivityReport {
        thm1,
        ck: ck_section(g, dd, dual_theta1)?,
        census: census.map(CensusSection::from),
        subconstituents: subconstituent_stats(g, dd, 0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{folded_cube, hamming_graph, odd_graph, petersen};

    fn dd(g: &Graph) -> DistanceData {
        DistanceData::new(g).unwrap()
    }

    #[test]
    fn odd_subconstituents() {
        let g = odd_graph(3).unwrap();
        let dd = dd(&g);
        let top = subconstituent(&g, &dd, 0, 3).unwrap().graph;
        assert_eq!(top.order(), 18);
        assert_eq!(top.regular_degree(), Some(2));
        for i in [1, 2] {
            assert_eq!(subconstituent(&g, &dd, 0, i).unwrap().graph.size(), 0);
        }
        assert!(matches!(
            subconstituent(&g, &dd, 0, 4),
            Err(AnalysisError::IndexOutOfRange { index: 4, diameter: 3 })
        ));
    }

    #[test]
    fn folded_cube_first_subconstituent_is_edgeless() {
        let g = folded_cube(7).unwrap();
        let dd = dd(&g);
        assert_eq!(subconstituent(&g, &dd, 5, 1).unwrap().graph.size(), 0);
    }

    #[test]
    fn shells() {
        let cube = hamming_graph(3, 2).unwrap();
        let d = dd(&cube);
        let sc = last_two_connected(&cube, &d, 0).unwrap();
        assert!(sc.connected);
        assert_eq!(sc.components[0].len(), 4);

        let g = odd_graph(3).unwrap();
        let d = dd(&g);
        for gamma in [0, 17, 34] {
            assert!(last_two_connected(&g, &d, gamma).unwrap().connected);
            assert!(!shell_connectivity(&g, &d, gamma, 1, 2).unwrap().connected);
            assert!(!tail_connected(&g, &d, gamma, 3).unwrap());
            assert!(tail_connected(&g, &d, gamma, 0).unwrap());
        }
        let p = petersen();
        assert!(matches!(
            last_two_connected(&cycle3(), &dd(&cycle3()), 0),
            Err(AnalysisError::DiameterTooSmall { .. })
        ));
        assert!(last_two_connected(&p, &dd(&p), 0).unwrap().connected);
    }

    fn cycle3() -> Graph {
        crate::families::cycle(3).unwrap()
    }

    #[test]
    fn ck_sign_patterns() {
        assert_eq!(ck_index(&[5.0, 5.0 / 3.0, -5.0 / 3.0]).unwrap().s, 2);
        assert_eq!(ck_index(&[4.0, 3.0, 0.0, -1.0]).unwrap().s, 2);
        let snapped = ck_index(&[4.0, 1e-12, -1.0]).unwrap();
        assert_eq!(snapped.s, 1);
        assert_eq!(snapped.snapped, vec![1]);
        assert!(matches!(ck_index(&[1.0, 0.5]), Err(AnalysisError::NoSignChange(_))));
        assert!(matches!(
            ck_index(&[1.0, -1.0, 1.0, -1.0]),
            Err(AnalysisError::MultipleSignChanges(_))
        ));
        assert!(matches!(ck_index(&[0.0, -1.0]), Err(AnalysisError::NonPositiveStart(_))));
    }

    #[test]
    fn diameters() {
        let p = petersen();
        let d = dd(&p);
        assert_eq!(subconstituent_diameter(&p, &d, 0, 0).unwrap(), SubDiameter::Diameter(0));
        assert!(matches!(
            subconstituent_diameter(&p, &d, 0, 2).unwrap(),
            SubDiameter::Diameter(x) if x <= 3
        ));
        let g = odd_graph(3).unwrap();
        assert_eq!(
            subconstituent_diameter(&g, &dd(&g), 0, 3).unwrap(),
            SubDiameter::Disconnected { components: 3 }
        );
    }

    #[test]
    fn census_values() {
        let c3 = odd_component_census(3).unwrap();
        assert_eq!((c3.count, c3.component_size, c3.iso_certified), (3, 6, Some(true)));
        let c4 = odd_component_census(4).unwrap();
        assert_eq!((c4.count, c4.component_size, c4.iso_certified), (3, 20, Some(true)));
        assert!(c4.balanced_bipartite);
        assert!(matches!(odd_component_census(2), Err(AnalysisError::CensusDiameter(2))));
    }

    #[test]
    fn census_context_expectations() {
        let ctx = OddCensusContext::new(5).unwrap();
        assert_eq!((ctx.expected_count(), ctx.expected_size()), (10, 20));
        assert_eq!(ctx.expected_count() * ctx.expected_size(), ctx.distances().sphere(0, 5).len());
    }

    #[test]
    fn report_shape() {
        let g = odd_graph(3).unwrap();
        let d = dd(&g);
        let census = odd_component_census(3).unwrap();
        let r = connectivity_report(&g, &d, &[14.0, 7.0, 0.0, -7.0 / 3.0], Some(&census)).unwrap();
        assert!(r.thm1.as_ref().unwrap().all_connected);
        assert_eq!(r.ck.s, 2);
        assert!(r.ck.tail_all_connected);
        assert_eq!(r.census.as_ref().unwrap().count, 3);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["census"]["component_size"], 6);
        assert_eq!(json["thm1"]["per_gamma"].as_array().unwrap().len(), 35);
    }
}
