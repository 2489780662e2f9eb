//! The end-to-end analysis pipeline and its JSON report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::distance::DistanceData;
use crate::error::Error;
use crate::families::FamilySpec;
use crate::graph::Graph;
use crate::invariants::{check_distance_regular, classify, ClassificationFlags, IntersectionData, NotDrgWitness};
use crate::qpoly::{qpoly_consistency, BalancedSetConfig, Mode, QPolyReport, BALANCED_SET_THRESHOLD, DEFAULT_SAMPLES};
use crate::spectral::{default_tolerance, SpectraReport, SpectralData};
use crate::subconstituent::{connectivity_report, ConnectivityReport, OddCensusContext};

/// Graphs up to this order get the full balanced-set sweep unless a mode is
/// forced.
pub const FULL_MODE_MAX_ORDER: usize = 200;

pub const TOOL_NAME: &str = "drg";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Intersection,
    Classification,
    Spectra,
    Qpoly,
    Connectivity,
}

impl Section {
    pub const ALL: [Section; 5] = [
        Section::Intersection,
        Section::Classification,
        Section::Spectra,
        Section::Qpoly,
        Section::Connectivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::Intersection => "intersection",
            Section::Classification => "classification",
            Section::Spectra => "spectra",
            Section::Qpoly => "qpoly",
            Section::Connectivity => "connectivity",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Section {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Section::ALL
            .into_iter()
            .find(|sec| sec.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Section::ALL.iter().map(|s| s.name()).collect();
                format!("unknown section {s:?} (expected one of {})", names.join(", "))
            })
    }
}

/// Where a graph came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Family(FamilySpec),
    Graph6 { path: String },
}

impl Source {
    pub fn family(&self) -> Option<FamilySpec> {
        match self {
            Source::Family(f) => Some(*f),
            Source::Graph6 { .. } => None,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Family(spec) => write!(f, "{spec}"),
            Source::Graph6 { path } => f.write_str(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Spectral tolerance; defaults to `1e-8 · max(1, k)`.
    pub spectral_tolerance: Option<f64>,
    /// Relative residual threshold for balanced-set instances.
    pub threshold: f64,
    /// `None` picks full mode up to [`FULL_MODE_MAX_ORDER`] vertices.
    pub mode: Option<Mode>,
    pub seed: u64,
    pub samples: usize,
    /// `None` computes every section.
    pub only: Option<Section>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            spectral_tolerance: None,
            threshold: BALANCED_SET_THRESHOLD,
            mode: None,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            only: None,
        }
    }
}

impl Settings {
    pub fn resolve_mode(&self, n: usize) -> Mode {
        self.mode.unwrap_or(if n <= FULL_MODE_MAX_ORDER {
            Mode::Full
        } else {
            Mode::Sampled
        })
    }

    pub fn balanced_config(&self, n: usize) -> BalancedSetConfig {
        BalancedSetConfig {
            mode: self.resolve_mode(n),
            seed: self.seed,
            samples: self.samples,
            threshold: self.threshold,
        }
    }

    fn wants(&self, s: Section) -> bool {
        self.only.is_none_or(|o| o == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphInfo {
    pub source: String,
    pub family: Option<String>,
    pub n: usize,
    pub edges: usize,
    pub diameter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingsInfo {
    pub spectral_tolerance: f64,
    pub threshold: f64,
    pub mode: Mode,
    pub seed: u64,
    pub samples: usize,
    pub only: Option<Section>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionSection {
    pub distance_regular: bool,
    pub d: usize,
    pub k: Option<usize>,
    pub b: Option<Vec<u64>>,
    pub c: Option<Vec<u64>>,
    pub a: Option<Vec<u64>>,
    pub sphere_sizes: Option<Vec<u64>>,
    pub witness: Option<NotDrgWitness>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Sections {
    pub intersection: Option<IntersectionSection>,
    pub classification: Option<ClassificationFlags>,
    pub spectra: Option<SpectraReport>,
    pub qpoly: Option<QPolyReport>,
    pub connectivity: Option<ConnectivityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: &'static str,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub graph: GraphInfo,
    pub settings: SettingsInfo,
    pub sections: Sections,
    pub timing: Vec<StageTiming>,
}

impl AnalysisReport {
    pub fn is_distance_regular(&self) -> bool {
        self.sections
            .intersection
            .as_ref()
            .is_none_or(|s| s.distance_regular)
    }

    /// Paper claims contradicted by this report's data.
    pub fn alarms(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = self.graph.diameter;
        if let Some(q) = &self.sections.qpoly {
            if !q.consistent {
                let bad: Vec<_> = q.verdicts.iter().filter(|v| !v.agree).map(|v| v.idempotent).collect();
                out.push(format!("Q-polynomial deciders disagree on idempotents {bad:?}"));
            }
        }
        if let Some(c) = &self.sections.connectivity {
            let qpoly = self.sections.qpoly.as_ref().is_some_and(QPolyReport::is_qpoly);
            if let Some(t) = &c.thm1 {
                if qpoly && !t.all_connected {
                    let bad: Vec<_> = t.per_gamma.iter().filter(|p| !p.connected).map(|p| p.gamma).collect();
                    out.push(format!("last two subconstituents disconnected at vertices {bad:?}"));
                }
            }
            if !c.ck.tail_all_connected {
                out.push(format!("tail from s = {} is disconnected at some vertex", c.ck.s));
            }
            if 2 * c.ck.s < d {
                out.push(format!("CK index s = {} is below d/2 = {}", c.ck.s, d as f64 / 2.0));
            }
        }
        out
    }
}

struct Timer {
    stages: Vec<StageTiming>,
}

impl Timer {
    fn run<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.stages.push(StageTiming {
            stage,
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }
}

/// Everything computed along the way, for callers that need more than the
/// report.
pub struct Pipeline {
    pub graph: Graph,
    pub distances: DistanceData,
    pub intersection: Result<IntersectionData, NotDrgWitness>,
    pub spectral: Option<SpectralData>,
}

impl Pipeline {
    /// Distances and the distance-regularity check.
    pub fn new(graph: Graph) -> Result<Self, Error> {
        let distances = DistanceData::new(&graph)?;
        let intersection = check_distance_regular(&graph, &distances);
        Ok(Self {
            graph,
            distances,
            intersection,
            spectral: None,
        })
    }

    pub fn require_drg(&self) -> Result<&IntersectionData, Error> {
        self.intersection
            .as_ref()
            .map_err(|w| Error::NotDistanceRegular(w.to_string()))
    }

    pub fn spectral(&mut self, tolerance: Option<f64>) -> Result<&SpectralData, Error> {
        if self.spectral.is_none() {
            let id = self.require_drg()?;
            let tol = tolerance.unwrap_or_else(|| default_tolerance(id.valency()));
            self.spectral = Some(SpectralData::compute(&self.distances, id, tol)?);
        }
        Ok(self.spectral.as_ref().expect("just computed"))
    }
}

/// Runs the pipeline. A graph that is not distance-regular yields a report
/// whose intersection section carries the witness and whose later sections
/// are empty.
pub fn analyze(source: &Source, graph: Graph, settings: &Settings) -> Result<AnalysisReport, Error> {
    let mut timer = Timer { stages: Vec::new() };
    let mut p = timer.run("distances", || Pipeline::new(graph))?;
    let n = p.graph.order();
    let d = p.distances.diameter();
    let mut sections = Sections::default();

    let intersection = match &p.intersection {
        Ok(id) => IntersectionSection {
            distance_regular: true,
            d,
            k: Some(id.valency()),
            b: Some(id.b().to_vec()),
            c: Some(id.c().to_vec()),
            a: Some(id.a().to_vec()),
            sphere_sizes: Some(id.sphere_sizes().to_vec()),
            witness: None,
        },
        Err(w) => IntersectionSection {
            distance_regular: false,
            d,
            k: p.graph.regular_degree(),
            b: None,
            c: None,
            a: None,
            sphere_sizes: None,
            witness: Some(w.clone()),
        },
    };
    let drg = intersection.distance_regular;
    let spectral_tolerance = settings
        .spectral_tolerance
        .unwrap_or_else(|| default_tolerance(intersection.k.unwrap_or(1)));
    if settings.wants(Section::Intersection) {
        sections.intersection = Some(intersection);
    }
    if settings.wants(Section::Classification) {
        sections.classification = Some(timer.run("classification", || classify(&p.graph, &p.distances)));
    }

    if drg {
        let needs_spectra = [Section::Spectra, Section::Qpoly, Section::Connectivity]
            .into_iter()
            .any(|s| settings.wants(s));
        if needs_spectra && d >= 1 {
            timer.run("spectra", || p.spectral(Some(spectral_tolerance)).map(|_| ()))?;
        }
        let id = p.intersection.as_ref().expect("checked above");
        if let Some(sd) = p.spectral.as_ref() {
            if settings.wants(Section::Spectra) {
                sections.spectra = Some(sd.report());
            }
            if settings.wants(Section::Qpoly) {
                let cfg = settings.balanced_config(n);
                sections.qpoly = Some(timer.run("qpoly", || qpoly_consistency(&p.distances, id, sd, &cfg))?);
            }
            if settings.wants(Section::Connectivity) {
                let census = match source.family() {
                    Some(FamilySpec::Odd { d: od }) if od >= 3 => {
                        Some(timer.run("census", || OddCensusContext::new(od).and_then(|c| c.at(0)))?)
                    }
                    _ => None,
                };
                sections.connectivity = Some(timer.run("connectivity", || {
                    connectivity_report(&p.graph, &p.distances, sd.dual(1), census.as_ref())
                })?);
            }
        }
    }

    Ok(AnalysisReport {
        tool: ToolInfo {
            name: TOOL_NAME,
            version: env!("CARGO_PKG_VERSION"),
        },
        graph: GraphInfo {
            source: source.to_string(),
            family: source.family().map(|f| f.to_string()),
            n,
            edges: p.graph.size(),
            diameter: d,
        },
        settings: SettingsInfo {
            spectral_tolerance,
            threshold: settings.threshold,
            mode: settings.resolve_mode(n),
            seed: settings.seed,
            samples: settings.samples,
            only: settings.only,
        },
        sections,
        timing: timer.stages,
    })
}
