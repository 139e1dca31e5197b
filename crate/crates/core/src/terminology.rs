//! SNOMED-CT-style terminology snapshot: concepts, grouped typed
//! relationships, and the is-a / part-of axes used for recursion.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use crate::dag;
use crate::error::{Error, Result};
use crate::tsv;

pub const CONCEPTS_HEADER: [&str; 3] = ["id", "label", "semantic_tag"];
pub const RELATIONSHIPS_HEADER: [&str; 4] = ["source_id", "rel_type", "destination_id", "group_id"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptId(pub u64);

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for ConceptId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().parse::<u64>() {
            Ok(0) => Err("concept id must be strictly positive".to_string()),
            Ok(v) => Ok(ConceptId(v)),
            Err(_) => Err(format!("non-numeric concept id '{s}'")),
        }
    }
}

impl From<u64> for ConceptId {
    fn from(v: u64) -> Self {
        ConceptId(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemanticTag {
    Disorder,
    Finding,
    BodyStructure,
    Morphology,
    Organism,
    Other,
}

impl SemanticTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SemanticTag::Disorder => "disorder",
            SemanticTag::Finding => "finding",
            SemanticTag::BodyStructure => "body-structure",
            SemanticTag::Morphology => "morphology",
            SemanticTag::Organism => "organism",
            SemanticTag::Other => "other",
        }
    }

    /// Disorders and findings are the concepts icons are generated for.
    pub fn is_clinical_finding(self) -> bool {
        matches!(self, SemanticTag::Disorder | SemanticTag::Finding)
    }
}

impl FromStr for SemanticTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "disorder" => SemanticTag::Disorder,
            "finding" => SemanticTag::Finding,
            "body-structure" => SemanticTag::BodyStructure,
            "morphology" => SemanticTag::Morphology,
            "organism" => SemanticTag::Organism,
            "other" => SemanticTag::Other,
            _ => return Err(format!("unknown semantic tag '{s}'")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    pub id: ConceptId,
    pub label: String,
    pub semantic_tag: SemanticTag,
}

/// Relationship types. Anything not in the known list is kept as `Other`
/// and never harvested.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelType {
    IsA,
    FindingSite,
    AssociatedMorphology,
    TemporalContext,
    HasInterpretation,
    Interprets,
    HasDefinitionalManifestation,
    PathologicalProcess,
    HasFocus,
    CausativeAgent,
    AssociatedWith,
    DueTo,
    PartOf,
    Other(String),
}

impl RelType {
    pub const HARVESTED: [RelType; 11] = [
        RelType::FindingSite,
        RelType::AssociatedMorphology,
        RelType::TemporalContext,
        RelType::HasInterpretation,
        RelType::Interprets,
        RelType::HasDefinitionalManifestation,
        RelType::PathologicalProcess,
        RelType::HasFocus,
        RelType::CausativeAgent,
        RelType::AssociatedWith,
        RelType::DueTo,
    ];

    pub fn as_str(&self) -> &str {
        match self {
            RelType::IsA => "is_a",
            RelType::FindingSite => "finding_site",
            RelType::AssociatedMorphology => "associated_morphology",
            RelType::TemporalContext => "temporal_context",
            RelType::HasInterpretation => "has_interpretation",
            RelType::Interprets => "interprets",
            RelType::HasDefinitionalManifestation => "has_definitional_manifestation",
            RelType::PathologicalProcess => "pathological_process",
            RelType::HasFocus => "has_focus",
            RelType::CausativeAgent => "causative_agent",
            RelType::AssociatedWith => "associated_with",
            RelType::DueTo => "due_to",
            RelType::PartOf => "part_of",
            RelType::Other(name) => name,
        }
    }

    /// Whether step-1 harvesting follows this relationship.
    pub fn is_harvested(&self) -> bool {
        !matches!(self, RelType::IsA | RelType::PartOf | RelType::Other(_))
    }
}

impl fmt::Display for RelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let known = [RelType::IsA, RelType::PartOf]
            .into_iter()
            .chain(RelType::HARVESTED)
            .find(|t| t.as_str() == s);
        match known {
            Some(t) => Ok(t),
            None if !s.is_empty()
                && s.chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') =>
            {
                Ok(RelType::Other(s.to_string()))
            }
            None => Err(format!("malformed relationship type '{s}'")),
        }
    }
}

// Canonical ordering is by type name.
impl Ord for RelType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl PartialOrd for RelType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relationship {
    pub source: ConceptId,
    pub rel_type: RelType,
    pub destination: ConceptId,
    pub group_id: u32,
}

/// How a concept entered a step-1 list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Via {
    /// The concept icons are being generated for.
    Itself,
    Relation(RelType),
}

impl fmt::Display for Via {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Via::Itself => f.write_str("self"),
            Via::Relation(t) => f.write_str(t.as_str()),
        }
    }
}

/// The step-1 concept list for one relationship group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupList {
    pub group_id: u32,
    pub members: Vec<(Via, ConceptId)>,
}

/// Immutable, fully indexed terminology graph.
#[derive(Debug, Clone)]
pub struct TerminologyGraph {
    concepts: BTreeMap<ConceptId, Concept>,
    relationships: Vec<Relationship>,
    outgoing: BTreeMap<ConceptId, Vec<Relationship>>,
    is_a: BTreeMap<ConceptId, Vec<ConceptId>>,
    part_of: BTreeMap<ConceptId, Vec<ConceptId>>,
}

impl TerminologyGraph {
    pub fn load(concepts_path: &Path, relationships_path: &Path) -> Result<Self> {
        let concept_rows = tsv::read_file(concepts_path, &CONCEPTS_HEADER)?;
        let rel_rows = tsv::read_file(relationships_path, &RELATIONSHIPS_HEADER)?;
        Self::from_rows(
            concept_rows,
            &concepts_path.display().to_string(),
            rel_rows,
            &relationships_path.display().to_string(),
        )
    }

    pub fn from_readers<C: Read, R: Read>(concepts: C, relationships: R) -> Result<Self> {
        let concept_rows = tsv::read(concepts, "concepts.tsv", &CONCEPTS_HEADER)?;
        let rel_rows = tsv::read(relationships, "relationships.tsv", &RELATIONSHIPS_HEADER)?;
        Self::from_rows(concept_rows, "concepts.tsv", rel_rows, "relationships.tsv")
    }

    fn from_rows(
        concept_rows: Vec<tsv::Row>,
        concepts_name: &str,
        rel_rows: Vec<tsv::Row>,
        rels_name: &str,
    ) -> Result<Self> {
        let mut concepts = Vec::with_capacity(concept_rows.len());
        let mut seen = BTreeSet::new();
        for row in concept_rows {
            let id: ConceptId = row.fields[0]
                .parse()
                .map_err(|m: String| Error::parse(concepts_name, row.line, m))?;
            if !seen.insert(id) {
                return Err(Error::parse(
                    concepts_name,
                    row.line,
                    format!("duplicate concept id {id}"),
                ));
            }
            let semantic_tag = row.fields[2]
                .parse()
                .map_err(|m: String| Error::parse(concepts_name, row.line, m))?;
            concepts.push(Concept {
                id,
                label: row.fields[1].clone(),
                semantic_tag,
            });
        }

        let mut relationships = Vec::with_capacity(rel_rows.len());
        for row in rel_rows {
            let err = |m: String| Error::parse(rels_name, row.line, m);
            let source: ConceptId = row.fields[0].parse().map_err(err)?;
            let rel_type: RelType = row.fields[1].parse().map_err(err)?;
            let destination: ConceptId = row.fields[2].parse().map_err(err)?;
            let group_id: u32 = row.fields[3].trim().parse().map_err(|_| {
                err(format!(
                    "group id '{}' is not a non-negative integer",
                    row.fields[3]
                ))
            })?;
            relationships.push(Relationship {
                source,
                rel_type,
                destination,
                group_id,
            });
        }

        Self::new(concepts, relationships)
    }

    /// Builds and validates a graph from in-memory records. Duplicate
    /// relationships collapse to one.
    pub fn new(concepts: Vec<Concept>, mut relationships: Vec<Relationship>) -> Result<Self> {
        let mut by_id = BTreeMap::new();
        for c in concepts {
            if c.id.0 == 0 {
                return Err(Error::InvalidId(c.id));
            }
            let id = c.id;
            if by_id.insert(id, c).is_some() {
                return Err(Error::Duplicate(format!("concept {id}")));
            }
        }

        relationships.sort();
        relationships.dedup();

        let dangling: BTreeSet<ConceptId> = relationships
            .iter()
            .flat_map(|r| [r.source, r.destination])
            .filter(|id| !by_id.contains_key(id))
            .collect();
        if !dangling.is_empty() {
            return Err(Error::DanglingReference {
                ids: dangling.into_iter().collect(),
            });
        }

        let mut outgoing: BTreeMap<ConceptId, Vec<Relationship>> = BTreeMap::new();
        let mut is_a: BTreeMap<ConceptId, Vec<ConceptId>> = BTreeMap::new();
        let mut part_of: BTreeMap<ConceptId, Vec<ConceptId>> = BTreeMap::new();
        for r in &relationships {
            outgoing.entry(r.source).or_default().push(r.clone());
            let axis = match r.rel_type {
                RelType::IsA => Some(&mut is_a),
                RelType::PartOf => Some(&mut part_of),
                _ => None,
            };
            if let Some(axis) = axis {
                axis.entry(r.source).or_default().push(r.destination);
            }
        }
        // The same is-a edge may appear in several groups.
        for targets in is_a.values_mut().chain(part_of.values_mut()) {
            targets.sort();
            targets.dedup();
        }

        for (name, axis) in [("is_a", &is_a), ("part_of", &part_of)] {
            if let Some(cycle) = dag::find_cycle(axis) {
                return Err(Error::Cycle {
                    axis: name.to_string(),
                    cycle: cycle.iter().map(|c| c.to_string()).collect(),
                });
            }
        }

        Ok(TerminologyGraph {
            concepts: by_id,
            relationships,
            outgoing,
            is_a,
            part_of,
        })
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, id: ConceptId) -> Option<&Concept> {
        self.concepts.get(&id)
    }

    pub fn contains(&self, id: ConceptId) -> bool {
        self.concepts.contains_key(&id)
    }

    /// All concepts in ascending id order.
    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    /// All distinct relationships in canonical order.
    pub fn relationships(&self) -> &[Relationship] {
        &self.relationships
    }

    /// Outgoing relationships of a concept, including is-a and part-of.
    pub fn outgoing(&self, id: ConceptId) -> Result<&[Relationship]> {
        self.require(id)?;
        Ok(self.outgoing.get(&id).map(Vec::as_slice).unwrap_or(&[]))
    }

    fn require(&self, id: ConceptId) -> Result<&Concept> {
        self.concepts.get(&id).ok_or(Error::ConceptNotFound(id))
    }

    /// Step-1 lists, one per relationship group. Group-0 relationships are
    /// folded into every numbered group; the concept itself heads each list.
    pub fn related_concepts(&self, id: ConceptId) -> Result<Vec<GroupList>> {
        self.require(id)?;
        let mut groups: BTreeMap<u32, BTreeSet<(RelType, ConceptId)>> = BTreeMap::new();
        let mut ungrouped: BTreeSet<(RelType, ConceptId)> = BTreeSet::new();
        for r in self.outgoing.get(&id).into_iter().flatten() {
            if !r.rel_type.is_harvested() {
                continue;
            }
            let entry = (r.rel_type.clone(), r.destination);
            if r.group_id == 0 {
                ungrouped.insert(entry);
            } else {
                groups.entry(r.group_id).or_default().insert(entry);
            }
        }

        let build = |group_id: u32, rels: BTreeSet<(RelType, ConceptId)>| {
            let mut members = vec![(Via::Itself, id)];
            members.extend(rels.into_iter().map(|(t, d)| (Via::Relation(t), d)));
            GroupList { group_id, members }
        };

        if groups.is_empty() {
            return Ok(vec![build(0, ungrouped)]);
        }
        Ok(groups
            .into_iter()
            .map(|(gid, mut rels)| {
                rels.extend(ungrouped.iter().cloned());
                build(gid, rels)
            })
            .collect())
    }

    /// Direct is-a parents, ascending.
    pub fn parents(&self, id: ConceptId) -> Result<Vec<ConceptId>> {
        self.require(id)?;
        Ok(self.is_a.get(&id).cloned().unwrap_or_default())
    }

    /// Wholes this concept is part of (inverse part-of), ascending.
    pub fn bigger_than(&self, id: ConceptId) -> Result<Vec<ConceptId>> {
        self.require(id)?;
        Ok(self.part_of.get(&id).cloned().unwrap_or_default())
    }

    /// True iff `descendant` reaches `ancestor` through zero or more is-a edges.
    pub fn subsumes(&self, ancestor: ConceptId, descendant: ConceptId) -> Result<bool> {
        self.require(ancestor)?;
        self.require(descendant)?;
        Ok(dag::reaches(&self.is_a, &descendant, &ancestor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONCEPTS: &str = "id\tlabel\tsemantic_tag
# six concepts
10\tDisease\tdisorder
20\tHepatic disorder\tdisorder
30\tHepatitis\tdisorder
40\tLiver structure\tbody-structure
50\tInflammation\tmorphology
60\tAbdomen structure\tbody-structure
";

    const RELATIONSHIPS: &str = "source_id\trel_type\tdestination_id\tgroup_id
20\tis_a\t10\t0
30\tis_a\t20\t0
30\tfinding_site\t40\t1
30\tassociated_morphology\t50\t1
20\tfinding_site\t40\t0
40\tpart_of\t60\t0
30\tlaterality\t60\t0
";

    fn fixture() -> TerminologyGraph {
        TerminologyGraph::from_readers(CONCEPTS.as_bytes(), RELATIONSHIPS.as_bytes()).unwrap()
    }

    #[test]
    fn counts_follow_input() {
        let g = fixture();
        assert_eq!(g.len(), 6);
        assert_eq!(g.relationships().len(), 7);
    }

    #[test]
    fn duplicate_relationship_rows_collapse() {
        let rels = format!("{RELATIONSHIPS}30\tis_a\t20\t0\n");
        let g = TerminologyGraph::from_readers(CONCEPTS.as_bytes(), rels.as_bytes()).unwrap();
        assert_eq!(g.relationships().len(), 7);
    }

    #[test]
    fn dangling_reference_names_the_id() {
        let rels = format!("{RELATIONSHIPS}30\tfinding_site\t999\t0\n");
        let err = TerminologyGraph::from_readers(CONCEPTS.as_bytes(), rels.as_bytes()).unwrap_err();
        match err {
            Error::DanglingReference { ids } => assert_eq!(ids, vec![ConceptId(999)]),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn is_a_cycle_is_rejected() {
        let rels = "source_id\trel_type\tdestination_id\tgroup_id\n10\tis_a\t20\t0\n20\tis_a\t10\t0\n";
        let err = TerminologyGraph::from_readers(CONCEPTS.as_bytes(), rels.as_bytes()).unwrap_err();
        match err {
            Error::Cycle { axis, cycle } => {
                assert_eq!(axis, "is_a");
                assert_eq!(cycle, vec!["10", "20", "10"]);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn part_of_cycle_is_rejected() {
        let rels = "source_id\trel_type\tdestination_id\tgroup_id\n40\tpart_of\t60\t0\n60\tpart_of\t40\t0\n";
        let err = TerminologyGraph::from_readers(CONCEPTS.as_bytes(), rels.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Cycle { ref axis, .. } if axis == "part_of"));
    }

    #[test]
    fn malformed_rows() {
        let bad_id = "id\tlabel\tsemantic_tag\nabc\tX\tdisorder\n";
        let err = TerminologyGraph::from_readers(
            bad_id.as_bytes(),
            "source_id\trel_type\tdestination_id\tgroup_id\n".as_bytes(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let bad_tag = "id\tlabel\tsemantic_tag\n1\tX\tprocedure\n";
        let err = TerminologyGraph::from_readers(
            bad_tag.as_bytes(),
            "source_id\trel_type\tdestination_id\tgroup_id\n".as_bytes(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let neg_group = format!("{RELATIONSHIPS}30\tis_a\t10\t-1\n");
        let err = TerminologyGraph::from_readers(CONCEPTS.as_bytes(), neg_group.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 9, .. }), "{err}");

        let zero_id = "id\tlabel\tsemantic_tag\n0\tX\tdisorder\n";
        assert!(TerminologyGraph::from_readers(
            zero_id.as_bytes(),
            "source_id\trel_type\tdestination_id\tgroup_id\n".as_bytes()
        )
        .is_err());
    }

    #[test]
    fn unknown_types_are_kept_but_not_harvested() {
        let g = fixture();
        let out = g.outgoing(ConceptId(30)).unwrap();
        assert!(out
            .iter()
            .any(|r| r.rel_type == RelType::Other("laterality".into())));
        let lists = g.related_concepts(ConceptId(30)).unwrap();
        for l in &lists {
            assert!(l
                .members
                .iter()
                .all(|(via, _)| !matches!(via, Via::Relation(RelType::Other(_)))));
        }
    }

    #[test]
    fn grouped_relationships_include_ungrouped_and_self() {
        let g = fixture();
        let lists = g.related_concepts(ConceptId(30)).unwrap();
        assert_eq!(lists.len(), 1);
        assert_eq!(lists[0].group_id, 1);
        assert_eq!(
            lists[0].members,
            vec![
                (Via::Itself, ConceptId(30)),
                (Via::Relation(RelType::AssociatedMorphology), ConceptId(50)),
                (Via::Relation(RelType::FindingSite), ConceptId(40)),
            ]
        );
    }

    #[test]
    fn no_harvestable_relations_leaves_only_self() {
        let g = fixture();
        let lists = g.related_concepts(ConceptId(10)).unwrap();
        assert_eq!(
            lists,
            vec![GroupList {
                group_id: 0,
                members: vec![(Via::Itself, ConceptId(10))]
            }]
        );
    }

    #[test]
    fn axes() {
        let g = fixture();
        assert_eq!(g.parents(ConceptId(30)).unwrap(), vec![ConceptId(20)]);
        assert_eq!(g.parents(ConceptId(10)).unwrap(), vec![]);
        assert_eq!(g.bigger_than(ConceptId(40)).unwrap(), vec![ConceptId(60)]);
        assert_eq!(g.bigger_than(ConceptId(30)).unwrap(), vec![]);
        assert!(matches!(
            g.parents(ConceptId(7)),
            Err(Error::ConceptNotFound(ConceptId(7)))
        ));
    }

    #[test]
    fn subsumption() {
        let g = fixture();
        assert!(g.subsumes(ConceptId(30), ConceptId(30)).unwrap());
        assert!(g.subsumes(ConceptId(20), ConceptId(30)).unwrap());
        assert!(g.subsumes(ConceptId(10), ConceptId(30)).unwrap());
        assert!(!g.subsumes(ConceptId(30), ConceptId(20)).unwrap());
        // part-of is not subsumption
        assert!(!g.subsumes(ConceptId(60), ConceptId(40)).unwrap());
        assert!(g.subsumes(ConceptId(99), ConceptId(30)).is_err());
    }

    #[test]
    fn rel_type_round_trips_names() {
        for t in RelType::HARVESTED.iter().chain([&RelType::IsA, &RelType::PartOf]) {
            assert_eq!(&t.as_str().parse::<RelType>().unwrap(), t);
        }
        assert!("Finding Site".parse::<RelType>().is_err());
    }
}
