//! Semi-automatic mapping of SNOMED-CT-style clinical findings to VCM icons.
//!
//! A small number of curated anchors link terminology concepts to the
//! medical concepts of the VCM ontology; everything else is derived by
//! walking the terminology's relationships and the ontology's links to
//! graphical primitives.
//!
//! ```no_run
//! use std::path::Path;
//! use vcm_mapper::{AnchorTable, ConceptId, IconEngine, TerminologyGraph, VcmOntology};
//!
//! let graph = TerminologyGraph::load(Path::new("concepts.tsv"), Path::new("relationships.tsv"))?;
//! let ontology = VcmOntology::load(Path::new("vcm_ontology.txt"))?;
//! let anchors = AnchorTable::load(Path::new("anchors.tsv"), &graph, &ontology)?;
//! let engine = IconEngine::new(&graph, &ontology, &anchors);
//! let set = engine.generate_icons(ConceptId(4927003))?;
//! println!("{}", set.tsv_row());
//! # Ok::<(), vcm_mapper::Error>(())
//! ```

pub mod anchors;
mod dag;
pub mod engine;
pub mod error;
pub mod icon;
pub mod terminology;
mod tsv;
pub mod vcm;

pub use anchors::{AnchorEntry, AnchorTable, MatchKind, Resolution, ResolutionTrace};
pub use engine::{assemble, Assembly, IconEngine, IconSet, MappingReport, MAX_MODIFIERS};
pub use error::{Error, Result};
pub use icon::{Color, Icon, Shape};
pub use terminology::{
    Concept, ConceptId, GroupList, RelType, Relationship, SemanticTag, TerminologyGraph, Via,
};
pub use vcm::{Category, ConsistencyRule, Primitive, PrimitiveKind, VcmConcept, VcmOntology};
