//! Named checks over the standard catalogue of distance-regular graphs, and
//! the single-target verification suites built from the same checks.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{Pipeline, Settings, Source};
use crate::distance::DistanceData;
use crate::error::Error;
use crate::families::FamilySpec;
use crate::graph::Graph;
use crate::invariants::{check_distance_regular, IntersectionData};
use crate::qpoly::{balanced_set_check, ordering_for_candidate, qpoly_consistency, QPolyReport, Verdict};
use crate::spectral::{default_tolerance, standard_sequence, SpectralData};
use crate::subconstituent::{
    ck_section, last_two_connected, shell_connectivity, subconstituent, OddCensusContext,
};

pub const CATALOGUE: [&str; 12] = [
    "petersen",
    "cycle:6",
    "hamming:3,2",
    "hamming:3,3",
    "hamming:4,2",
    "johnson:6,3",
    "johnson:7,3",
    "folded_cube:5",
    "folded_cube:7",
    "odd:3",
    "odd:4",
    "odd:5",
];

/// Max-entry tolerance for the Bose–Mesner identities.
pub const ALGEBRA_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Thm1,
    Census,
    Sharpness,
    Intersection,
    Folded,
    Eq2,
    Qpoly,
    Idempotents,
    Ck,
    Dual,
    Negative,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Thm1,
        Check::Census,
        Check::Sharpness,
        Check::Intersection,
        Check::Folded,
        Check::Eq2,
        Check::Qpoly,
        Check::Idempotents,
        Check::Ck,
        Check::Dual,
        Check::Negative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Thm1 => "thm1",
            Check::Census => "census",
            Check::Sharpness => "sharpness",
            Check::Intersection => "intersection",
            Check::Folded => "folded",
            Check::Eq2 => "eq2",
            Check::Qpoly => "qpoly",
            Check::Idempotents => "idempotents",
            Check::Ck => "ck",
            Check::Dual => "dual",
            Check::Negative => "negative",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check {s:?} (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub status: Status,
    pub residual: Option<f64>,
    pub detail: String,
}

impl Outcome {
    fn new(passed: bool, residual: Option<f64>, detail: impl Into<String>) -> Self {
        Self {
            status: if passed { Status::Pass } else { Status::Fail },
            residual,
            detail: detail.into(),
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Self {
            status: Status::Skipped,
            residual: None,
            detail: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub graph: String,
    pub check: Check,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub seconds: f64,
}

/// A distance-regular graph with its spectral data, plus the Q-polynomial
/// report once it has been asked for.
pub struct Subject {
    pub source: Source,
    pub graph: Graph,
    pub distances: DistanceData,
    pub intersection: IntersectionData,
    pub spectral: SpectralData,
    settings: Settings,
    qpoly: Option<QPolyReport>,
}

impl Subject {
    pub fn new(source: Source, graph: Graph, settings: &Settings) -> Result<Self, Error> {
        let mut p = Pipeline::new(graph)?;
        let id = p.require_drg()?.clone();
        if p.distances.diameter() == 0 {
            return Err(Error::Precondition("graph has a single vertex".into()));
        }
        let tol = settings
            .spectral_tolerance
            .unwrap_or_else(|| default_tolerance(id.valency()));
        p.spectral(Some(tol))?;
        Ok(Self {
            source,
            graph: p.graph,
            distances: p.distances,
            intersection: id,
            spectral: p.spectral.expect("computed above"),
            settings: settings.clone(),
            qpoly: None,
        })
    }

    pub fn from_family(spec: FamilySpec, settings: &Settings) -> Result<Self, Error> {
        Self::new(Source::Family(spec), spec.build()?, settings)
    }

    pub fn diameter(&self) -> usize {
        self.distances.diameter()
    }

    pub fn qpoly(&mut self) -> Result<&QPolyReport, Error> {
        if self.qpoly.is_none() {
            let cfg = self.settings.balanced_config(self.graph.order());
            self.qpoly = Some(qpoly_consistency(
                &self.distances,
                &self.intersection,
                &self.spectral,
                &cfg,
            )?);
        }
        Ok(self.qpoly.as_ref().expect("computed above"))
    }

    fn odd_d(&self) -> Option<usize> {
        match self.source.family() {
            Some(FamilySpec::Odd { d }) if d >= 3 => Some(d),
            _ => None,
        }
    }

    fn vertices(&self) -> std::ops::Range<usize> {
        0..self.graph.order()
    }

    /// `None` when the check does not apply to this graph's family.
    pub fn run(&mut self, check: Check) -> Option<Result<Outcome, Error>> {
        let family = self.source.family();
        let out = match check {
            Check::Thm1 => self.thm1(),
            Check::Census => self.census()?,
            Check::Sharpness => {
                self.odd_d()?;
                self.sharpness()
            }
            Check::Intersection => self.odd_intersection()?,
            Check::Folded => match family {
                Some(FamilySpec::FoldedCube { .. }) => self.folded(),
                _ => return None,
            },
            Check::Eq2 => self.eq2(),
            Check::Qpoly => self.qpoly_check(),
            Check::Idempotents => Ok(self.idempotents()),
            Check::Ck => self.ck(),
            Check::Dual => Ok(self.dual()),
            Check::Negative => return None,
        };
        Some(out)
    }

    fn thm1(&mut self) -> Result<Outcome, Error> {
        let d = self.diameter();
        if d < 3 {
            return Ok(Outcome::skipped(format!("diameter {d} < 3")));
        }
        if !self.qpoly()?.is_qpoly() {
            return Ok(Outcome::skipped("not Q-polynomial"));
        }
        for gamma in self.vertices() {
            let sc = last_two_connected(&self.graph, &self.distances, gamma)?;
            if !sc.connected {
                return Ok(Outcome::new(
                    false,
                    None,
                    format!("vertex {gamma}: {} components, first {:?}", sc.components.len(), sc.components[0]),
                ));
            }
        }
        Ok(Outcome::new(
            true,
            None,
            format!("connected at all {} vertices", self.graph.order()),
        ))
    }

    fn census(&self) -> Option<Result<Outcome, Error>> {
        let d = self.odd_d()?;
        Some((|| {
            let ctx = OddCensusContext::new(d)?;
            let all = ctx.all()?;
            let iso = match all[0].iso_certified {
                Some(true) => "isomorphism certified",
                _ => "isomorphism check skipped",
            };
            Ok(Outcome::new(
                true,
                None,
                format!(
                    "{} components of size {} at all {} vertices, {iso}",
                    all[0].count,
                    all[0].component_size,
                    all.len()
                ),
            ))
        })())
    }

    fn sharpness(&self) -> Result<Outcome, Error> {
        for gamma in self.vertices() {
            let sc = shell_connectivity(&self.graph, &self.distances, gamma, 1, 2)?;
            if sc.connected {
                return Ok(Outcome::new(false, None, format!("first two shells connected at vertex {gamma}")));
            }
        }
        Ok(Outcome::new(true, None, "first two shells disconnected at every vertex"))
    }

    fn odd_intersection(&self) -> Option<Result<Outcome, Error>> {
        let d = self.odd_d()?;
        Some((|| {
            let id = &self.intersection;
            // ⌈(d+1)/2⌉
            let expected = (d + 2) / 2;
            if let Some(h) = (0..d).find(|&h| id.p(h, 1, h) != 0) {
                return Ok(Outcome::new(false, None, format!("p^{h}_(1,{h}) = {}", id.p(h, 1, h))));
            }
            if id.p(d, 1, d) as usize != expected {
                return Ok(Outcome::new(
                    false,
                    None,
                    format!("p^{d}_(1,{d}) = {}, expected {expected}", id.p(d, 1, d)),
                ));
            }
            for gamma in self.vertices() {
                let sub = subconstituent(&self.graph, &self.distances, gamma, d)?.graph;
                if sub.regular_degree() != Some(expected) {
                    return Ok(Outcome::new(
                        false,
                        None,
                        format!("Γ_{d} at vertex {gamma} is not {expected}-regular"),
                    ));
                }
            }
            Ok(Outcome::new(
                true,
                None,
                format!("p^h_(1,h) = 0 for h < {d}; Γ_{d} is {expected}-regular at every vertex"),
            ))
        })())
    }

    fn folded(&self) -> Result<Outcome, Error> {
        let d = self.diameter();
        for gamma in self.vertices() {
            for h in 1..d {
                let edges = subconstituent(&self.graph, &self.distances, gamma, h)?.graph.size();
                if edges != 0 {
                    return Ok(Outcome::new(false, None, format!("Γ_{h} at vertex {gamma} has {edges} edges")));
                }
            }
            if !last_two_connected(&self.graph, &self.distances, gamma)?.connected {
                return Ok(Outcome::new(false, None, format!("last two shells disconnected at vertex {gamma}")));
            }
        }
        Ok(Outcome::new(
            true,
            None,
            format!("Γ_1..Γ_{} edgeless and last two shells connected at every vertex", d - 1),
        ))
    }

    fn eq2(&self) -> Result<Outcome, Error> {
        let mut worst: f64 = 0.0;
        for j in 0..=self.diameter() {
            worst = worst.max(self.spectral.check_inner_product_identity(&self.distances, j)?);
        }
        Ok(Outcome::new(
            worst < ALGEBRA_TOLERANCE,
            Some(worst),
            "max |<E x, E y> - θ*_h / n|",
        ))
    }

    fn qpoly_check(&mut self) -> Result<Outcome, Error> {
        let report = self.qpoly()?;
        let orderings: Vec<String> = report.orderings.iter().map(|o| format!("{o:?}")).collect();
        let mut detail = format!(
            "{} mode, {} instances, orderings {}",
            report.mode,
            report.instances,
            if orderings.is_empty() { "none".to_string() } else { orderings.join(" ") }
        );
        let disagreeing: Vec<String> = report
            .verdicts
            .iter()
            .filter(|v| !v.agree)
            .map(|v| {
                let w = v.witness.map_or_else(String::new, |w| {
                    format!(" at (h,i,j,x,y) = ({},{},{},{},{})", w.h, w.i, w.j, w.x, w.y)
                });
                format!("E_{} balanced {:?} vs ordering {}{w}", v.idempotent, v.verdict, v.ordering_verdict)
            })
            .collect();
        if !disagreeing.is_empty() {
            detail.push_str("; disagreement: ");
            detail.push_str(&disagreeing.join(", "));
        }
        // residual of the idempotents ordering recovery says should pass
        let residual = report
            .verdicts
            .iter()
            .filter(|v| v.ordering_verdict)
            .filter_map(|v| v.worst_residual)
            .fold(0.0, f64::max);
        Ok(Outcome::new(report.consistent, Some(residual), detail))
    }

    fn idempotents(&self) -> Outcome {
        let r = self.spectral.algebra_residuals(&self.distances);
        let worst = r.products.max(r.resolution_of_identity).max(r.trivial);
        let trace_ok = r.trace < 1e-6 * self.graph.order() as f64;
        Outcome::new(
            worst < ALGEBRA_TOLERANCE && trace_ok,
            Some(worst),
            format!("trace deviation {:.1e}", r.trace),
        )
    }

    fn ck(&self) -> Result<Outcome, Error> {
        let d = self.diameter();
        let ck = ck_section(&self.graph, &self.distances, self.spectral.dual(1))?;
        let ok = 2 * ck.s >= d && ck.tail_all_connected;
        Ok(Outcome::new(
            ok,
            None,
            format!(
                "s = {} (d = {d}), tail {}",
                ck.s,
                if ck.tail_all_connected { "connected at every vertex" } else { "disconnected somewhere" }
            ),
        ))
    }

    fn dual(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        for j in 0..=self.diameter() {
            let m = self.spectral.mult()[j] as f64;
            let u = standard_sequence(&self.intersection, self.spectral.theta()[j]);
            for (read, ui) in self.spectral.dual(j).iter().zip(&u) {
                let expect = m * ui;
                worst = worst.max((read - expect).abs() / expect.abs().max(1.0));
            }
        }
        Outcome::new(worst < ALGEBRA_TOLERANCE, Some(worst), "entry-read vs recurrence duals")
    }
}

/// Rejection of non-distance-regular inputs and of colliding duals.
pub fn negative_check(seed: u64) -> Result<Outcome, Error> {
    let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)])?;
    let p3_witness = check_distance_regular(&p3, &DistanceData::new(&p3)?).err();

    let random = random_irregular_graph(12, seed);
    let random_witness = check_distance_regular(&random, &DistanceData::new(&random)?).err();

    let c6 = Subject::from_family(FamilySpec::Cycle { n: 6 }, &Settings::default())?;
    // θ = -1 sits at index 2 in decreasing order
    let guard = balanced_set_check(
        &c6.distances,
        &c6.intersection,
        &c6.spectral,
        2,
        &Default::default(),
    )?;
    let ordering = ordering_for_candidate(&c6.spectral, 2)?;
    let guard_ok = guard.verdict == Verdict::NotQpoly && guard.collision.is_some() && ordering.is_none();

    let ok = p3_witness.is_some() && random_witness.is_some() && guard_ok;
    let detail = format!(
        "P_3: {}; random: {}; C_6 collision at h = {:?}",
        p3_witness.map_or("accepted".into(), |w| w.to_string()),
        random_witness.map_or("accepted".into(), |w| w.to_string()),
        guard.collision
    );
    Ok(Outcome::new(ok, None, detail))
}

/// A connected graph with at least two distinct degrees, from a seeded
/// `G(n, 1/3)` with rejection.
pub fn random_irregular_graph(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|_| rng.random_bool(1.0 / 3.0))
            .collect();
        let g = Graph::from_edges(n, &edges).expect("edges are in range");
        if g.is_connected() && g.regular_degree().is_none() {
            return g;
        }
    }
}

fn timed(graph: &str, check: Check, f: impl FnOnce() -> Option<Result<Outcome, Error>>) -> Option<Row> {
    let start = Instant::now();
    let outcome = f()?.unwrap_or_else(|e| Outcome::new(false, None, format!("error: {e}")));
    Some(Row {
        graph: graph.to_string(),
        check,
        outcome,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Every applicable (graph, check) row over [`CATALOGUE`], optionally
/// restricted to one check.
pub fn run_catalogue(settings: &Settings, only: Option<Check>) -> Result<Vec<Row>, Error> {
    let checks: Vec<Check> = Check::ALL
        .into_iter()
        .filter(|c| only.is_none_or(|o| o == *c))
        .collect();
    let mut rows = Vec::new();
    for name in CATALOGUE {
        let spec: FamilySpec = name.parse()?;
        let graph_checks: Vec<Check> = checks.iter().copied().filter(|&c| c != Check::Negative).collect();
        if graph_checks.is_empty() {
            continue;
        }
        log::info!("catalogue: {name}");
        let mut subject = Subject::from_family(spec, settings)?;
        for check in graph_checks {
            rows.extend(timed(name, check, || subject.run(check)));
        }
    }
    if checks.contains(&Check::Negative) {
        rows.extend(timed("-", Check::Negative, || Some(negative_check(settings.seed))));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Thm1,
    Ck,
    Census,
    QpolyConsistency,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Ck => "ck",
            Suite::Census => "census",
            Suite::QpolyConsistency => "qpoly-consistency",
        }
    }

    fn check(self) -> Check {
        match self {
            Suite::Thm1 => Check::Thm1,
            Suite::Ck => Check::Ck,
            Suite::Census => Check::Census,
            Suite::QpolyConsistency => Check::Qpoly,
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Suite::Thm1, Suite::Ck, Suite::Census, Suite::QpolyConsistency]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?} (expected thm1, ck, census or qpoly-consistency)"))
    }
}

/// Runs one suite on one target. Targets outside a suite's hypothesis are
/// precondition errors, never silent passes.
pub fn verify(suite: Suite, subject: &mut Subject) -> Result<Outcome, Error> {
    let d = subject.diameter();
    match suite {
        Suite::Thm1 if d < 3 => {
            return Err(Error::Precondition(format!(
                "thm1 needs diameter at least 3, {} has diameter {d}",
                subject.source
            )))
        }
        Suite::Census if subject.odd_d().is_none() => {
            return Err(Error::Precondition(format!(
                "census needs an Odd graph target odd:d with d >= 3, got {}",
                subject.source
            )))
        }
        _ => {}
    }
    let outcome = subject
        .run(suite.check())
        .expect("suite checks apply to every admissible target")?;
    if outcome.status == Status::Skipped {
        return Err(Error::Precondition(format!("{} on {}: {}", suite.name(), subject.source, outcome.detail)));
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subject(spec: &str) -> Subject {
        Subject::from_family(spec.parse().unwrap(), &Settings::default()).unwrap()
    }

    #[test]
    fn names_roundtrip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>(), Ok(c));
        }
        assert_eq!("qpoly-consistency".parse::<Suite>(), Ok(Suite::QpolyConsistency));
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn per_graph_checks_pass_on_odd_graph() {
        let mut s = subject("odd:3");
        for c in [
            Check::Thm1,
            Check::Census,
            Check::Sharpness,
            Check::Intersection,
            Check::Eq2,
            Check::Qpoly,
            Check::Idempotents,
            Check::Ck,
            Check::Dual,
        ] {
            let out = s.run(c).unwrap().unwrap();
            assert_eq!(out.status, Status::Pass, "{c}: {}", out.detail);
        }
        assert!(s.run(Check::Folded).is_none());
    }

    #[test]
    fn folded_cube_check() {
        let mut s = subject("folded_cube:7");
        assert_eq!(s.run(Check::Folded).unwrap().unwrap().status, Status::Pass);
        assert!(s.run(Check::Census).is_none());
    }

    #[test]
    fn verify_preconditions() {
        let mut k3 = subject("cycle:3");
        assert!(matches!(verify(Suite::Thm1, &mut k3), Err(Error::Precondition(_))));
        let mut p = subject("petersen");
        assert!(matches!(verify(Suite::Census, &mut p), Err(Error::Precondition(_))));
        assert_eq!(verify(Suite::Ck, &mut p).unwrap().status, Status::Pass);
    }

    #[test]
    fn negative_rows() {
        let out = negative_check(0).unwrap();
        assert_eq!(out.status, Status::Pass, "{}", out.detail);
        let g = random_irregular_graph(12, 3);
        assert!(g.is_connected() && g.regular_degree().is_none());
        assert_eq!(g, random_irregular_graph(12, 3));
    }
}
