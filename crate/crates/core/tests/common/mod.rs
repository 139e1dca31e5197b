#![allow(dead_code)]

use std::path::PathBuf;

use vcm_mapper::{AnchorTable, ConceptId, TerminologyGraph, VcmOntology};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub struct Fixture {
    pub graph: TerminologyGraph,
    pub ontology: VcmOntology,
    pub anchors: AnchorTable,
}

pub fn load(anchors: &str) -> Fixture {
    let graph = TerminologyGraph::load(&fixture("concepts.tsv"), &fixture("relationships.tsv")).unwrap();
    let ontology = VcmOntology::load(&fixture("vcm_ontology.txt")).unwrap();
    let anchors = AnchorTable::load(&fixture(anchors), &graph, &ontology).unwrap();
    Fixture {
        graph,
        ontology,
        anchors,
    }
}

pub fn with_overrides() -> Fixture {
    load("anchors.tsv")
}

pub fn without_overrides() -> Fixture {
    load("anchors_no_overrides.tsv")
}

pub fn corpus() -> Vec<ConceptId> {
    std::fs::read_to_string(fixture("corpus.txt"))
        .unwrap()
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse().unwrap())
        .collect()
}

pub fn label_id(graph: &TerminologyGraph, label: &str) -> ConceptId {
    graph
        .concepts()
        .find(|c| c.label == label)
        .unwrap_or_else(|| panic!("no concept labelled {label}"))
        .id
}
