//! Manually curated anchors from terminology concepts to VCM medical
//! concepts, recursive resolution over is-a / part-of, and detection of
//! anatomical structures that reach more than one pictogram.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::terminology::{ConceptId, SemanticTag, TerminologyGraph};
use crate::tsv;
use crate::vcm::VcmOntology;

pub const ANCHORS_HEADER: [&str; 3] = ["terminology_id", "vcm_id", "match"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchKind {
    /// The two concepts are equivalent; resolution stops here.
    Exact,
    /// The terminology concept is only partly represented; resolution
    /// keeps the VCM concept and continues upwards.
    Partial,
    /// Curated single-pictogram choice for an ambiguous structure.
    Override,
}

impl MatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchKind::Exact => "exact",
            MatchKind::Partial => "partial",
            MatchKind::Override => "override",
        }
    }
}

impl fmt::Display for MatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatchKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(MatchKind::Exact),
            "partial" => Ok(MatchKind::Partial),
            "override" => Ok(MatchKind::Override),
            _ => Err(format!(
                "bad match token '{s}' (expected exact, partial or override)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnchorEntry {
    pub terminology_id: ConceptId,
    pub vcm_id: String,
    pub kind: MatchKind,
}

#[derive(Debug, Clone, Default)]
pub struct AnchorTable {
    /// Exact and partial anchors, sorted by VCM id within each concept.
    entries: BTreeMap<ConceptId, Vec<(String, MatchKind)>>,
    overrides: BTreeMap<ConceptId, String>,
}

/// One anchor hit recorded during resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorHit {
    pub concept: ConceptId,
    pub vcm_id: String,
    pub kind: MatchKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResolutionTrace {
    /// Terminology concepts in visit order; never repeats.
    pub visited: Vec<ConceptId>,
    pub hits: Vec<AnchorHit>,
    /// Breadth-first level of the last visited concept (0 = start only).
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub vcm_concepts: BTreeSet<String>,
    pub trace: ResolutionTrace,
}

impl AnchorTable {
    pub fn load(path: &Path, graph: &TerminologyGraph, ont: &VcmOntology) -> Result<Self> {
        let rows = tsv::read_file(path, &ANCHORS_HEADER)?;
        Self::from_rows(rows, &path.display().to_string(), graph, ont)
    }

    pub fn from_reader<R: Read>(input: R, graph: &TerminologyGraph, ont: &VcmOntology) -> Result<Self> {
        let rows = tsv::read(input, "anchors.tsv", &ANCHORS_HEADER)?;
        Self::from_rows(rows, "anchors.tsv", graph, ont)
    }

    fn from_rows(
        rows: Vec<tsv::Row>,
        name: &str,
        graph: &TerminologyGraph,
        ont: &VcmOntology,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len());
        for row in rows {
            let err = |m: String| Error::parse(name, row.line, m);
            let terminology_id: ConceptId = row.fields[0].parse().map_err(err)?;
            let kind: MatchKind = row.fields[2].parse().map_err(err)?;
            entries.push(AnchorEntry {
                terminology_id,
                vcm_id: row.fields[1].trim().to_string(),
                kind,
            });
        }
        Self::new(entries, graph, ont)
    }

    /// Builds a validated table. Every id must resolve and each
    /// (terminology, VCM) pair may appear once.
    pub fn new(entries: Vec<AnchorEntry>, graph: &TerminologyGraph, ont: &VcmOntology) -> Result<Self> {
        let dangling: BTreeSet<ConceptId> = entries
            .iter()
            .map(|e| e.terminology_id)
            .filter(|id| !graph.contains(*id))
            .collect();
        if !dangling.is_empty() {
            return Err(Error::DanglingReference {
                ids: dangling.into_iter().collect(),
            });
        }
        let mut table = AnchorTable::default();
        for e in entries {
            table.insert(e, ont)?;
        }
        Ok(table)
    }

    fn insert(&mut self, e: AnchorEntry, ont: &VcmOntology) -> Result<()> {
        let Some(vcm) = ont.concept(&e.vcm_id) else {
            return Err(Error::UnresolvedReference {
                context: format!("anchor for concept {}", e.terminology_id),
                reference: e.vcm_id,
            });
        };
        let duplicate = || Error::Duplicate(format!("anchor {} -> {}", e.terminology_id, e.vcm_id));
        let pair_taken = self
            .entries
            .get(&e.terminology_id)
            .is_some_and(|v| v.iter().any(|(id, _)| *id == e.vcm_id))
            || self.overrides.get(&e.terminology_id) == Some(&e.vcm_id);
        if pair_taken {
            return Err(duplicate());
        }
        match e.kind {
            MatchKind::Override => {
                let count = vcm.pictograms().count();
                if count != 1 {
                    return Err(Error::InvalidOverride {
                        concept: e.terminology_id,
                        vcm: e.vcm_id,
                        count,
                    });
                }
                if self.overrides.contains_key(&e.terminology_id) {
                    return Err(Error::Duplicate(format!(
                        "second override for concept {}",
                        e.terminology_id
                    )));
                }
                self.overrides.insert(e.terminology_id, e.vcm_id);
            }
            kind => {
                let list = self.entries.entry(e.terminology_id).or_default();
                list.push((e.vcm_id, kind));
                list.sort();
            }
        }
        Ok(())
    }

    /// Adds one validated entry.
    pub fn add(&mut self, entry: AnchorEntry, graph: &TerminologyGraph, ont: &VcmOntology) -> Result<()> {
        if !graph.contains(entry.terminology_id) {
            return Err(Error::DanglingReference {
                ids: vec![entry.terminology_id],
            });
        }
        self.insert(entry, ont)
    }

    /// Copy of this table with every override row dropped.
    pub fn without_overrides(&self) -> Self {
        AnchorTable {
            entries: self.entries.clone(),
            overrides: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum::<usize>() + self.overrides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All rows, ordered by terminology id then VCM id.
    pub fn entries(&self) -> Vec<AnchorEntry> {
        let mut out: Vec<AnchorEntry> = self
            .entries
            .iter()
            .flat_map(|(id, list)| {
                list.iter().map(|(vcm, kind)| AnchorEntry {
                    terminology_id: *id,
                    vcm_id: vcm.clone(),
                    kind: *kind,
                })
            })
            .chain(self.overrides.iter().map(|(id, vcm)| AnchorEntry {
                terminology_id: *id,
                vcm_id: vcm.clone(),
                kind: MatchKind::Override,
            }))
            .collect();
        out.sort();
        out
    }

    pub fn anchors_of(&self, id: ConceptId) -> &[(String, MatchKind)] {
        self.entries.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn override_of(&self, id: ConceptId) -> Option<&str> {
        self.overrides.get(&id).map(String::as_str)
    }

    /// Maps a terminology concept to VCM medical concepts.
    ///
    /// Breadth-first over parents and bigger-than concepts, one merged
    /// frontier per level in ascending id order. At each concept an override
    /// wins and ends the branch; otherwise exact anchors end the branch with
    /// all of the concept's anchors; partial anchors are kept and the branch
    /// continues; unanchored concepts just continue.
    pub fn resolve(&self, graph: &TerminologyGraph, concept: ConceptId) -> Result<Resolution> {
        if !graph.contains(concept) {
            return Err(Error::ConceptNotFound(concept));
        }
        let mut result = BTreeSet::new();
        let mut trace = ResolutionTrace::default();
        let mut seen = BTreeSet::from([concept]);
        let mut level = vec![concept];

        loop {
            let mut next = Vec::new();
            for &c in &level {
                trace.visited.push(c);
                if let Some(vcm) = self.overrides.get(&c) {
                    result.insert(vcm.clone());
                    trace.hits.push(AnchorHit {
                        concept: c,
                        vcm_id: vcm.clone(),
                        kind: MatchKind::Override,
                    });
                    continue;
                }
                let anchors = self.anchors_of(c);
                for (vcm, kind) in anchors {
                    result.insert(vcm.clone());
                    trace.hits.push(AnchorHit {
                        concept: c,
                        vcm_id: vcm.clone(),
                        kind: *kind,
                    });
                }
                if anchors.iter().any(|(_, k)| *k == MatchKind::Exact) {
                    continue;
                }
                for n in graph.parents(c)?.into_iter().chain(graph.bigger_than(c)?) {
                    if seen.insert(n) {
                        next.push(n);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            trace.depth += 1;
            level = next;
        }

        Ok(Resolution {
            vcm_concepts: result,
            trace,
        })
    }

    /// Pictograms reachable from one terminology concept through resolution
    /// and the ontology's concept-to-primitive links.
    pub fn pictograms_of(
        &self,
        graph: &TerminologyGraph,
        ont: &VcmOntology,
        concept: ConceptId,
    ) -> Result<BTreeSet<String>> {
        let resolution = self.resolve(graph, concept)?;
        let mut picts = BTreeSet::new();
        for vcm in &resolution.vcm_concepts {
            let c = ont
                .concept(vcm)
                .ok_or_else(|| Error::VcmConceptNotFound(vcm.clone()))?;
            picts.extend(c.pictograms().map(str::to_string));
        }
        Ok(picts)
    }

    /// Body structures without an override that reach two or more distinct
    /// pictograms, ascending by concept id.
    pub fn detect_ambiguities(
        &self,
        graph: &TerminologyGraph,
        ont: &VcmOntology,
    ) -> Result<Vec<(ConceptId, BTreeSet<String>)>> {
        let structures: Vec<ConceptId> = graph
            .concepts()
            .filter(|c| c.semantic_tag == SemanticTag::BodyStructure && !self.overrides.contains_key(&c.id))
            .map(|c| c.id)
            .collect();
        let found: Vec<Option<(ConceptId, BTreeSet<String>)>> = structures
            .par_iter()
            .map(|&id| {
                let picts = self.pictograms_of(graph, ont, id)?;
                Ok((picts.len() >= 2).then_some((id, picts)))
            })
            .collect::<Result<_>>()?;
        Ok(found.into_iter().flatten().collect())
    }
}
