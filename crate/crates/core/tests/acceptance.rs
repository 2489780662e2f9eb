//! Acceptance suite: one PASS/FAIL line per criterion over the catalogue.
//! Oracles that the library also computes (connectivity, dual sequences,
//! inner products, census expectations) are recomputed here independently.

use std::collections::VecDeque;
use std::process::ExitCode;
use std::time::Instant;

use drg_core::analysis::Settings;
use drg_core::catalogue::CATALOGUE;
use drg_core::families::{cycle, petersen};
use drg_core::invariants::pair_counts;
use drg_core::iso::are_isomorphic;
use drg_core::qpoly::{balanced_set_check, ordering_for_candidate, qpoly_consistency, BalancedSetConfig, QPolyReport, Verdict};
use drg_core::spectral::default_tolerance;
use drg_core::subconstituent::{ck_index, subconstituent};
use drg_core::{check_distance_regular, DistanceData, FamilySpec, Graph, IntersectionData, SpectralData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Entry {
    name: &'static str,
    spec: FamilySpec,
    g: Graph,
    dd: DistanceData,
    id: IntersectionData,
    sd: SpectralData,
    qpoly: QPolyReport,
}

fn load() -> Vec<Entry> {
    CATALOGUE
        .iter()
        .map(|&name| {
            let spec: FamilySpec = name.parse().unwrap();
            let g = spec.build().unwrap();
            let dd = DistanceData::new(&g).unwrap();
            let id = check_distance_regular(&g, &dd).unwrap();
            let sd = SpectralData::compute(&dd, &id, default_tolerance(id.valency())).unwrap();
            let cfg = Settings::default().balanced_config(g.order());
            let qpoly = qpoly_consistency(&dd, &id, &sd, &cfg).unwrap();
            Entry { name, spec, g, dd, id, sd, qpoly }
        })
        .collect()
}

/// BFS restricted to `set`; true iff `set` is nonempty and induces a
/// connected subgraph.
fn induces_connected(g: &Graph, set: &[usize]) -> bool {
    let mut inside = vec![false; g.order()];
    for &v in set {
        inside[v] = true;
    }
    let Some(&start) = set.first() else { return false };
    let mut seen = vec![false; g.order()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == set.len()
}

fn shells(dd: &DistanceData, gamma: usize, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    (0..dd.order()).filter(|&v| range.contains(&dd.dist(gamma, v))).collect()
}

fn edgeless(g: &Graph, set: &[usize]) -> bool {
    set.iter().all(|&u| set.iter().all(|&v| !g.has_edge(u, v)))
}

/// Dual sequence from the three-term recurrence, with the multiplicity from
/// `n / Σ k_i u_i²`.
fn recurrence_dual(b: &[u64], c: &[u64], n: usize, theta: f64) -> Vec<f64> {
    let d = b.len();
    let k = b[0] as f64;
    let mut u = vec![1.0, theta / k];
    let mut sizes = vec![1.0, k];
    for i in 1..d {
        let (bi, ci) = (b[i] as f64, c[i - 1] as f64);
        let ai = k - bi - ci;
        u.push(((theta - ai) * u[i] - ci * u[i - 1]) / bi);
        sizes.push(sizes[i] * bi / c[i] as f64);
    }
    u.truncate(d + 1);
    let m = n as f64 / sizes.iter().zip(&u).map(|(s, x)| s * x * x).sum::<f64>();
    u.iter().map(|x| m * x).collect()
}

struct Criterion {
    number: usize,
    title: &'static str,
    result: Result<String, String>,
    seconds: f64,
}

fn criterion(number: usize, title: &'static str, f: impl FnOnce() -> Result<String, String>) -> Criterion {
    let start = Instant::now();
    let result = f();
    Criterion { number, title, result, seconds: start.elapsed().as_secs_f64() }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn c1_last_two_connected(entries: &[Entry]) -> Result<String, String> {
    let mut certified = Vec::new();
    for e in entries {
        let d = e.dd.diameter();
        if d < 3 || !e.qpoly.is_qpoly() {
            continue;
        }
        for gamma in 0..e.g.order() {
            let set = shells(&e.dd, gamma, d - 1..=d);
            ensure(induces_connected(&e.g, &set), || format!("{}: disconnected at vertex {gamma}", e.name))?;
        }
        certified.push(e.name);
    }
    ensure(certified.len() >= 8, || format!("only {} graphs certified", certified.len()))?;
    Ok(format!("every vertex of {}", certified.join(", ")))
}

fn c2_census(entries: &[Entry]) -> Result<String, String> {
    let c6 = cycle(6).unwrap();
    let petersen_double = petersen().bipartite_double();
    let expected = [(3, 3, 6, Some(&c6)), (4, 3, 20, Some(&petersen_double)), (5, 10, 20, None)];
    for (d, count, size, reference) in expected {
        let e = entries.iter().find(|e| e.spec == FamilySpec::Odd { d }).unwrap();
        for gamma in 0..e.g.order() {
            let top = subconstituent(&e.g, &e.dd, gamma, d).unwrap().graph;
            let comps = top.connected_components();
            ensure(comps.len() == count, || format!("odd:{d} vertex {gamma}: {} components", comps.len()))?;
            for comp in &comps {
                ensure(comp.len() == size, || format!("odd:{d} vertex {gamma}: component of size {}", comp.len()))?;
                if let Some(r) = reference {
                    let block = top.induced_subgraph(comp).unwrap().graph;
                    let iso = are_isomorphic(&block, r).map_err(|e| e.to_string())?;
                    ensure(iso.is_some(), || format!("odd:{d} vertex {gamma}: component not isomorphic"))?;
                }
            }
        }
    }
    Ok("counts 3, 3, 10 and sizes 6, 20, 20 at every vertex; C_6 and Petersen-double certified".into())
}

fn c3_sharpness(entries: &[Entry]) -> Result<String, String> {
    for d in [3, 4] {
        let e = entries.iter().find(|e| e.spec == FamilySpec::Odd { d }).unwrap();
        for gamma in 0..e.g.order() {
            let set = shells(&e.dd, gamma, 1..=2);
            ensure(!induces_connected(&e.g, &set), || format!("odd:{d}: connected at vertex {gamma}"))?;
        }
    }
    Ok("disconnected at every vertex of odd:3 and odd:4".into())
}

fn c4_intersection(entries: &[Entry]) -> Result<String, String> {
    for (d, top) in [(3usize, 2u64), (4, 3), (5, 3)] {
        let e = entries.iter().find(|e| e.spec == FamilySpec::Odd { d }).unwrap();
        for h in 0..d {
            ensure(e.id.p(h, 1, h) == 0, || format!("odd:{d}: p^{h}_(1,{h}) = {}", e.id.p(h, 1, h)))?;
        }
        ensure(e.id.p(d, 1, d) == top, || format!("odd:{d}: p^d_(1,d) = {}", e.id.p(d, 1, d)))?;
        for gamma in 0..e.g.order() {
            let sphere = shells(&e.dd, gamma, d..=d);
            for &u in &sphere {
                let deg = sphere.iter().filter(|&&v| e.g.has_edge(u, v)).count() as u64;
                ensure(deg == top, || format!("odd:{d}: vertex {u} has degree {deg} in Γ_{d}({gamma})"))?;
            }
        }
    }
    Ok("p^h_(1,h) = 0 below d; valencies 2, 3, 3 at every vertex".into())
}

fn c5_folded(entries: &[Entry]) -> Result<String, String> {
    let e = entries.iter().find(|e| e.spec == FamilySpec::FoldedCube { n: 7 }).unwrap();
    for gamma in 0..e.g.order() {
        for h in [1, 2] {
            ensure(edgeless(&e.g, &shells(&e.dd, gamma, h..=h)), || format!("Γ_{h}({gamma}) has edges"))?;
        }
        ensure(induces_connected(&e.g, &shells(&e.dd, gamma, 2..=3)), || format!("Γ_2 ∪ Γ_3 disconnected at {gamma}"))?;
    }
    Ok("all 64 vertices".into())
}

fn c6_inner_products(entries: &[Entry]) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for e in entries {
        let n = e.g.order();
        for j in 0..=e.dd.diameter() {
            let m = e.sd.idempotent(j);
            let dual = e.sd.dual(j);
            for x in 0..n {
                for y in x..n {
                    let ip = m.column(x).dot(&m.column(y));
                    worst = worst.max((ip - dual[e.dd.dist(x, y)] / n as f64).abs());
                }
            }
        }
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e}"))
}

fn c7_consistency(entries: &[Entry]) -> Result<String, String> {
    let mut summary = Vec::new();
    for e in entries {
        let q = &e.qpoly;
        for v in &q.verdicts {
            let balanced = v.verdict == Verdict::Qpoly;
            ensure(balanced == v.ordering_verdict && balanced == v.krein_verdict, || {
                format!(
                    "{} E_{}: balanced {balanced}, ordering {}, krein {}",
                    e.name, v.idempotent, v.ordering_verdict, v.krein_verdict
                )
            })?;
        }
        ensure(q.consistent, || format!("{}: inconsistent", e.name))?;
        summary.push(format!("{} {}", e.name, q.orderings.len()));
    }
    Ok(format!("orderings per graph: {}", summary.join(", ")))
}

fn c8_algebra(entries: &[Entry]) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for e in entries {
        let r = e.sd.algebra_residuals(&e.dd);
        worst = worst.max(r.products).max(r.resolution_of_identity).max(r.trivial);
        let n = e.g.order() as f64;
        for j in 0..=e.dd.diameter() {
            let tr = e.sd.idempotent(j).diag().sum();
            ensure((tr - tr.round()).abs() < 1e-6 * n && tr.round() as usize == e.sd.mult()[j], || {
                format!("{} E_{j}: trace {tr}", e.name)
            })?;
        }
    }
    ensure(worst < 1e-8, || format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.2e}"))
}

fn c9_ck(entries: &[Entry]) -> Result<String, String> {
    let mut found = Vec::new();
    for e in entries {
        let d = e.dd.diameter();
        let dual = e.sd.dual(1);
        let s = ck_index(dual).map_err(|err| format!("{}: {err}", e.name))?.s;
        let snap = |v: f64| if v.abs() <= 1e-9 { 0.0 } else { v };
        let crossings = (1..=d).filter(|&i| snap(dual[i - 1]) > 0.0 && snap(dual[i]) <= 0.0).count();
        ensure(crossings == 1, || format!("{}: {crossings} sign changes", e.name))?;
        ensure(snap(dual[s - 1]) > 0.0 && snap(dual[s]) <= 0.0, || format!("{}: bad sign pattern at s = {s}", e.name))?;
        ensure(2 * s >= d, || format!("{}: s = {s} < d/2", e.name))?;
        for gamma in 0..e.g.order() {
            ensure(induces_connected(&e.g, &shells(&e.dd, gamma, s..=d)), || {
                format!("{}: tail from {s} disconnected at {gamma}", e.name)
            })?;
        }
        found.push(format!("{} s={s}", e.name));
    }
    Ok(found.join(", "))
}

fn c10_dual_oracle(entries: &[Entry]) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for e in entries {
        for j in 0..=e.dd.diameter() {
            let oracle = recurrence_dual(e.id.b(), e.id.c(), e.g.order(), e.sd.theta()[j]);
            for (read, want) in e.sd.dual(j).iter().zip(&oracle) {
                worst = worst.max((read - want).abs() / want.abs().max(1.0));
            }
        }
    }
    ensure(worst < 1e-8, || format!("max relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:.2e}"))
}

fn random_irregular(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.35) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() && g.regular_degree().is_none() {
            return g;
        }
    }
}

fn c11_negative() -> Result<String, String> {
    let w = g_rejects(&Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(), "P_3")?;
    let w2 = g_rejects(&random_irregular(10, 2024), "random graph")?;

    let c6 = cycle(6).unwrap();
    let dd = DistanceData::new(&c6).unwrap();
    let id = check_distance_regular(&c6, &dd).unwrap();
    let sd = SpectralData::compute(&dd, &id, default_tolerance(2)).unwrap();
    let j = sd.theta().iter().position(|t| (t + 1.0).abs() < 1e-9).unwrap();
    let dual = sd.dual(j);
    ensure((dual[0] - dual[3]).abs() < 1e-9, || format!("expected θ*_0 = θ*_3, got {dual:?}"))?;
    let out = balanced_set_check(&dd, &id, &sd, j, &BalancedSetConfig::default()).map_err(|e| e.to_string())?;
    ensure(out.verdict == Verdict::NotQpoly && out.collision == Some(3), || format!("guard did not fire: {out:?}"))?;
    let ordering = ordering_for_candidate(&sd, j).map_err(|e| e.to_string())?;
    ensure(ordering.is_none(), || format!("ordering recovery accepted {ordering:?}"))?;
    Ok(format!("{w}; {w2}; C_6 θ = -1 guard at h = 3"))
}

fn g_rejects(g: &Graph, name: &str) -> Result<String, String> {
    let dd = DistanceData::new(g).unwrap();
    let w = check_distance_regular(g, &dd).err().ok_or_else(|| format!("{name} accepted"))?;
    let d = dd.diameter() + 1;
    let count = |(x, y): (usize, usize)| pair_counts(&dd, x, y)[w.i * d + w.j];
    ensure(dd.dist(w.reference.0, w.reference.1) == w.h && dd.dist(w.offending.0, w.offending.1) == w.h, || {
        format!("{name}: witness pairs not at distance {}", w.h)
    })?;
    // recount the witness directly
    let direct = |(x, y): (usize, usize)| {
        (0..g.order()).filter(|&z| dd.dist(x, z) == w.i && dd.dist(y, z) == w.j).count() as u64
    };
    ensure(direct(w.reference) == w.reference_count && direct(w.offending) == w.offending_count, || {
        format!("{name}: witness counts do not recount")
    })?;
    ensure(count(w.reference) != count(w.offending), || format!("{name}: witness counts equal"))?;
    Ok(format!("{name} rejected ({w})"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let entries = load();
    println!("loaded {} catalogue graphs in {:.2}s", entries.len(), start.elapsed().as_secs_f64());
    let results = [
        criterion(1, "last two subconstituents connected", || c1_last_two_connected(&entries)),
        criterion(2, "odd graph census", || c2_census(&entries)),
        criterion(3, "sharpness contrast", || c3_sharpness(&entries)),
        criterion(4, "odd graph intersection numbers", || c4_intersection(&entries)),
        criterion(5, "folded cube subconstituents", || c5_folded(&entries)),
        criterion(6, "inner product identity", || c6_inner_products(&entries)),
        criterion(7, "three-way Q-polynomial consistency", || c7_consistency(&entries)),
        criterion(8, "idempotent algebra", || c8_algebra(&entries)),
        criterion(9, "CK index and tails", || c9_ck(&entries)),
        criterion(10, "dual sequence oracle", || c10_dual_oracle(&entries)),
        criterion(11, "negative paths", c11_negative),
    ];
    let mut failed = 0;
    for c in &results {
        match &c.result {
            Ok(detail) => println!("PASS criterion {:>2} {} [{:.2}s]: {detail}", c.number, c.title, c.seconds),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {} [{:.2}s]: {why}", c.number, c.title, c.seconds);
            }
        }
    }
    println!("{} of {} criteria passed in {:.2}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
