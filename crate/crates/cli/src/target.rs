use std::fs;
use std::path::Path;

use drg_core::analysis::Source;
use drg_core::graph6::parse_graph6_lines;
use drg_core::{FamilySpec, Graph};

use crate::Failure;

/// A family spec such as `odd:3`, or a path to a graph6 file. An existing
/// file wins over a spec of the same spelling.
pub fn load(target: &str) -> Result<(Source, Graph), Failure> {
    let path = Path::new(target);
    if path.is_file() {
        return load_graph6(target);
    }
    match target.parse::<FamilySpec>() {
        Ok(spec) => {
            let graph = spec.build().map_err(|e| Failure::usage(e.to_string()))?;
            Ok((Source::Family(spec), graph))
        }
        Err(_) if looks_like_path(target) => {
            Err(Failure::usage(format!("cannot read graph file {target}: no such file")))
        }
        Err(_) => Err(Failure::usage(format!(
            "unrecognized target {target:?}: expected a family spec (odd:3, johnson:6,3, hamming:3,2, \
             folded_cube:7, cycle:6, complete:4, petersen) or a graph6 file"
        ))),
    }
}

fn looks_like_path(target: &str) -> bool {
    target.contains('/') || target.contains('\\') || target.contains('.')
}

fn load_graph6(target: &str) -> Result<(Source, Graph), Failure> {
    let text = fs::read_to_string(target)
        .map_err(|e| Failure::usage(format!("cannot read graph file {target}: {e}")))?;
    let mut graphs = parse_graph6_lines(&text)
        .map_err(|e| Failure::usage(format!("{target}: invalid graph6: {e}")))?;
    if graphs.is_empty() {
        return Err(Failure::usage(format!("{target}: no graph found")));
    }
    if graphs.len() > 1 {
        log::warn!("{target} holds {} graphs; analysing the first", graphs.len());
    }
    let graph = graphs.swap_remove(0).with_label(target);
    Ok((
        Source::Graph6 {
            path: target.to_string(),
        },
        graph,
    ))
}
