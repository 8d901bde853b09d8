//! Specifications and graphs bundled with the library, addressable by name.

use crate::error::Result;
use crate::graph::{GraphFamily, ProcessGraph};
use crate::syntax::{parse_graphs, parse_tss};
use crate::tss::Tss;

/// Bundled specification texts.
pub const TSS_FILES: &[(&str, &str)] = &[
    ("ex1", include_str!("../corpus/ex1.tss")),
    ("ex8-model1", include_str!("../corpus/ex8-model1.tss")),
    ("ex8-model2", include_str!("../corpus/ex8-model2.tss")),
    ("sec9-counter", include_str!("../corpus/sec9-counter.tss")),
    ("sec10-seq", include_str!("../corpus/sec10-seq.tss")),
    ("sec11-transclosure", include_str!("../corpus/sec11-transclosure.tss")),
    ("sec12-p0", include_str!("../corpus/sec12-p0.tss")),
    ("sec12-pf", include_str!("../corpus/sec12-pf.tss")),
    ("sec12-qtau", include_str!("../corpus/sec12-qtau.tss")),
    ("sec13-intersection", include_str!("../corpus/sec13-intersection.tss")),
];

/// Bundled graph files.
pub const GRAPH_FILES: &[(&str, &str)] = &[
    ("tauchain", include_str!("../corpus/tauchain.graphs")),
    ("ex10", include_str!("../corpus/ex10.graphs")),
    ("sec11-chain", include_str!("../corpus/sec11-chain.graphs")),
    ("sec9-b", include_str!("../corpus/sec9-b.graphs")),
    ("ex8-tree", include_str!("../corpus/ex8-tree.graphs")),
    ("ex8-shared", include_str!("../corpus/ex8-shared.graphs")),
];

/// Alternative names.
pub const ALIASES: &[(&str, &str)] = &[("cax", "ex8-model2"), ("example1", "ex1")];

fn resolve(name: &str) -> &str {
    let stem = name.rsplit('/').next().unwrap_or(name);
    let stem = stem
        .strip_suffix(".tss")
        .or_else(|| stem.strip_suffix(".graphs"))
        .or_else(|| stem.strip_suffix(".graph"))
        .unwrap_or(stem);
    ALIASES.iter().find(|(a, _)| *a == stem).map(|(_, n)| *n).unwrap_or(stem)
}

/// Text of a bundled specification, by name, file name or alias.
pub fn tss_text(name: &str) -> Option<&'static str> {
    let key = resolve(name);
    TSS_FILES.iter().find(|(n, _)| *n == key).map(|(_, t)| *t)
}

pub fn graphs_text(name: &str) -> Option<&'static str> {
    let key = resolve(name);
    GRAPH_FILES.iter().find(|(n, _)| *n == key).map(|(_, t)| *t)
}

/// Parses a bundled specification. Panics only if the bundled text is
/// malformed, which the test suite rules out.
pub fn tss(name: &str) -> Option<Tss> {
    tss_text(name).map(|t| parse_tss(t).expect("bundled specification parses"))
}

pub fn graphs(name: &str) -> Option<Vec<(String, ProcessGraph)>> {
    graphs_text(name).map(|t| parse_graphs(t).expect("bundled graphs parse"))
}

/// A bundled graph file as a family.
pub fn family(name: &str) -> Option<GraphFamily> {
    graphs(name).map(|gs| gs.into_iter().map(|(_, g)| g).collect())
}

/// A single named graph from a bundled file.
pub fn graph(file: &str, graph: &str) -> Option<ProcessGraph> {
    graphs(file)?.into_iter().find(|(n, _)| n == graph).map(|(_, g)| g)
}

/// Every bundled specification, parsed.
pub fn all_tss() -> Result<Vec<(&'static str, Tss)>> {
    TSS_FILES.iter().map(|(n, t)| Ok((*n, parse_tss(t)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{canonical_tss, serialize_graph, serialize_tss};

    #[test]
    fn every_file_round_trips() {
        for (name, tss) in all_tss().unwrap() {
            let text = serialize_tss(&tss);
            let back = parse_tss(&text).unwrap();
            assert_eq!(back, canonical_tss(&tss), "{name}");
            assert_eq!(serialize_tss(&back), text, "{name}");
        }
        for (file, _) in GRAPH_FILES {
            for (name, g) in graphs(file).unwrap() {
                let back = parse_graphs(&serialize_graph(&name, &g)).unwrap();
                assert_eq!(back, vec![(name, g)]);
            }
        }
    }

    #[test]
    fn aliases_and_extensions_resolve() {
        assert_eq!(tss_text("cax.tss"), tss_text("ex8-model2"));
        assert!(tss("ex1.tss").is_some());
        assert!(family("tauchain.graphs").is_some());
        assert!(tss("nope").is_none());
    }
}
