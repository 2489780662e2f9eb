//! Human-readable renderings for `--pretty`.

use std::fmt::Write;

use drg_core::analysis::AnalysisReport;
use drg_core::catalogue::{Outcome, Row, Status};
use drg_core::qpoly::Verdict;

fn list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format_number(*v)).collect();
    parts.join(", ")
}

fn format_number(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.6}")
    }
}

pub fn report(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let g = &r.graph;
    let _ = writeln!(s, "graph      {} (n = {}, edges = {}, diameter = {})", g.source, g.n, g.edges, g.diameter);
    let sec = &r.sections;
    if let Some(i) = &sec.intersection {
        if i.distance_regular {
            let b = i.b.as_deref().unwrap_or_default();
            let c = i.c.as_deref().unwrap_or_default();
            let _ = writeln!(s, "drg        yes, k = {}, array {{{:?}; {:?}}}", i.k.unwrap_or(0), b, c);
        } else if let Some(w) = &i.witness {
            let _ = writeln!(s, "drg        no: {w}");
        }
    }
    if let Some(c) = &sec.classification {
        let _ = writeln!(
            s,
            "class      bipartite = {}, antipodal = {}, primitive = {}",
            c.bipartite, c.antipodal, c.primitive
        );
    }
    if let Some(sp) = &sec.spectra {
        let _ = writeln!(s, "theta      {}", list(&sp.theta));
        let mult: Vec<String> = sp.mult.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "mult       {}", mult.join(", "));
        for (j, dual) in sp.dual.iter().enumerate() {
            let _ = writeln!(s, "dual[{j}]    {}", list(dual));
        }
    }
    if let Some(q) = &sec.qpoly {
        let _ = writeln!(s, "qpoly      {} mode, seed {}, consistent = {}", q.mode, q.seed, q.consistent);
        for v in &q.verdicts {
            let verdict = match v.verdict {
                Verdict::Qpoly => "qpoly",
                Verdict::NotQpoly => "not_qpoly",
            };
            let residual = v
                .worst_residual
                .map_or_else(|| format!("dual collision at h = {}", v.collision.unwrap_or(0)), |r| format!("residual {r:.2e}"));
            let _ = writeln!(
                s,
                "  E_{}      {verdict:<10} {residual}; ordering {}, krein {}",
                v.idempotent, v.ordering_verdict, v.krein_verdict
            );
        }
        let orderings: Vec<String> = q.orderings.iter().map(|o| format!("{o:?}")).collect();
        let _ = writeln!(
            s,
            "orderings  {}",
            if orderings.is_empty() { "none".to_string() } else { orderings.join(" ") }
        );
    }
    if let Some(c) = &sec.connectivity {
        if let Some(t) = &c.thm1 {
            let _ = writeln!(s, "last two   connected at every vertex: {}", t.all_connected);
        }
        let _ = writeln!(s, "ck         s = {}, tail connected at every vertex: {}", c.ck.s, c.ck.tail_all_connected);
        if let Some(cen) = &c.census {
            let _ = writeln!(
                s,
                "census     Γ_{} has {} components of size {}, isomorphism certified: {}",
                cen.d, cen.count, cen.component_size, cen.iso_certified
            );
        }
        for st in &c.subconstituents {
            let _ = writeln!(
                s,
                "  Γ_{}(0)   {} vertices, {} edges, {} components",
                st.i, st.vertices, st.edges, st.components
            );
        }
    }
    let total: f64 = r.timing.iter().map(|t| t.seconds).sum();
    let _ = writeln!(s, "time       {total:.3}s");
    s
}

pub fn outcome(suite: &str, target: &str, o: &Outcome) -> String {
    let status = match o.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    };
    match o.residual {
        Some(r) => format!("{status} {suite} {target}: {} (residual {r:.2e})\n", o.detail),
        None => format!("{status} {suite} {target}: {}\n", o.detail),
    }
}

pub fn table(rows: &[Row]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<14} {:<13} {:<8} {:>10} {:>8}  detail", "graph", "check", "status", "residual", "time");
    for r in rows {
        let residual = r.outcome.residual.map_or_else(|| "-".to_string(), |v| format!("{v:.2e}"));
        let _ = writeln!(
            s,
            "{:<14} {:<13} {:<8} {:>10} {:>7.2}s  {}",
            r.graph,
            r.check.name(),
            r.outcome.status.to_string(),
            residual,
            r.seconds,
            r.outcome.detail
        );
    }
    let failed = rows.iter().filter(|r| r.outcome.status == Status::Fail).count();
    let _ = writeln!(s, "{} rows, {failed} failed", rows.len());
    s
}
