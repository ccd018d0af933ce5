//! Graph sources and instance files.

use std::fs;
use std::path::Path;

use bipartite_resilience::extremal::SubnetworkInstance;
use bipartite_resilience::graph::{
    canonical_form, gen_kdd, gen_kdn, gen_matching, gen_star, BipartiteGraph,
};
use bipartite_resilience::Error;

use crate::Failure;

pub fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

/// A generator (`star:5`, `matching:4`, `kdd:6:2`, `kdn:8:3`) or a
/// path to a graph file.
pub fn load_graph(spec: &str) -> Result<BipartiteGraph, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Failure::usage(format!("bad number {s:?} in graph {spec:?}")))
    };
    let g = match parts.as_slice() {
        ["star", k] => gen_star(num(k)?)?,
        ["matching", n] => gen_matching(num(n)?)?,
        ["kdd", n, d] => gen_kdd(num(n)?, num(d)?)?,
        ["kdn", n, d] => gen_kdn(num(n)?, num(d)?)?,
        [kind, ..] if ["star", "matching", "kdd", "kdn"].contains(kind) => {
            return Err(Failure::usage(format!(
                "wrong number of arguments in {spec:?}"
            )))
        }
        _ => read_file(Path::new(spec))?.parse()?,
    };
    Ok(g)
}

/// Name of the standard graph `g` is isomorphic to, if any.
pub fn standard_name(g: &BipartiteGraph, d: usize) -> Option<String> {
    let n = g.n_left();
    if n != g.n_right() || n == 0 {
        return None;
    }
    let form = canonical_form(g).ok()?;
    let mut known = vec![
        (format!("matching:{n}"), gen_matching(n).ok()),
        (format!("star:{n}"), gen_star(n).ok()),
    ];
    if d > 1 {
        known.push((format!("kdd:{n}:{d}"), gen_kdd(n, d).ok()));
        known.push((format!("kdn:{n}:{d}"), gen_kdn(n, d).ok()));
    }
    known
        .into_iter()
        .find(|(_, h)| h.as_ref().and_then(|h| canonical_form(h).ok()).as_ref() == Some(&form))
        .map(|(name, _)| name)
}

/// Instance file text: `# d=` and `# certificate=` lines, then the graph.
pub fn instance_text(inst: &SubnetworkInstance) -> String {
    let mut out = format!("# d={}\n", inst.d.d);
    if let Some(c) = inst.certificate {
        out.push_str(&format!("# certificate={c}\n"));
    }
    out.push_str(&inst.graph.to_text());
    out
}

/// Reads an instance file; `d` overrides the file's `# d=` line.
pub fn load_instance(path: &Path, d: Option<usize>) -> Result<SubnetworkInstance, Failure> {
    let text = read_file(path)?;
    let mut file_d = None;
    let mut certificate = None;
    for line in text.lines() {
        let Some(rest) = line.trim().strip_prefix('#') else {
            continue;
        };
        let Some((key, value)) = rest.trim().split_once('=') else {
            continue;
        };
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("bad value in instance line {line:?}")))?;
        match key.trim() {
            "d" => file_d = Some(value),
            "certificate" => certificate = Some(value),
            _ => {}
        }
    }
    let d = d
        .or(file_d)
        .ok_or_else(|| Failure::usage("no degree given: pass --d or add a `# d=` line"))?;
    let graph: BipartiteGraph = text.parse()?;
    let mut inst = SubnetworkInstance::new(graph, d);
    inst.certificate = certificate;
    Ok(inst)
}

/// Clique-source file: vertex count, then one `a b` pair per line.
pub fn parse_pairs(text: &str) -> Result<(usize, Vec<(usize, usize)>), Error> {
    let mut n = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse {
            line: idx + 1,
            msg: format!("expected integers in {line:?}"),
        };
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match (n, nums.as_slice()) {
            (None, [count]) => n = Some(*count),
            (Some(_), [a, b]) => pairs.push((*a, *b)),
            _ => return Err(bad()),
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    Ok((n, pairs))
}
