//! The icon generation pipeline.
//!
//! Per relationship group: harvest the step-1 concept list, resolve each
//! member to VCM medical concepts, keep the most specific ones, expand them
//! to primitives, and assemble icons. Group results are merged by union and
//! a final specificity pruning.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::anchors::{AnchorTable, Resolution};
use crate::error::{Error, Result};
use crate::icon::{Color, Icon, Shape};
use crate::terminology::{ConceptId, TerminologyGraph, Via};
use crate::vcm::{Primitive, PrimitiveKind, VcmOntology};

/// Upper bound on distinct modifiers fed to one assembly (2^10 subsets).
pub const MAX_MODIFIERS: usize = 10;

pub const BATCH_HEADER: &str = "concept_id\ticon_codes\tn_icons";

/// Output of one assembly run with its bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembly {
    pub icons: Vec<Icon>,
    pub generated: usize,
    pub removed_inconsistent: usize,
    pub removed_less_specific: usize,
}

/// Color implied by color primitives: past over risk over current.
fn pick_color(primitives: &[Primitive]) -> Color {
    primitives
        .iter()
        .filter(|p| p.kind == PrimitiveKind::Color)
        .filter_map(|p| p.code.parse::<Color>().ok())
        .max_by_key(|c| match c {
            Color::Current => 0,
            Color::Risk => 1,
            Color::Past => 2,
        })
        .unwrap_or(Color::Current)
}

/// Physiological only when a physio shape is linked and no patho shape is.
fn pick_shape(primitives: &[Primitive]) -> Shape {
    let shapes: BTreeSet<Shape> = primitives
        .iter()
        .filter(|p| p.kind == PrimitiveKind::BaseShape)
        .filter_map(|p| p.code.parse::<Shape>().ok())
        .collect();
    if shapes.contains(&Shape::Physio) && !shapes.contains(&Shape::Patho) {
        Shape::Physio
    } else {
        Shape::Patho
    }
}

fn sort_by_code(icons: &mut [Icon]) {
    icons.sort_by_cached_key(Icon::code);
}

/// Removes duplicates and every icon some other icon is more specific than.
/// Returns the survivors in code order and the number removed as dominated.
pub fn prune_less_specific(ont: &VcmOntology, icons: Vec<Icon>) -> Result<(Vec<Icon>, usize)> {
    let unique: Vec<Icon> = icons.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    for x in &unique {
        ont.check_codes(x)?;
    }
    let mut kept: Vec<Icon> = unique
        .iter()
        .filter(|x| !unique.iter().any(|y| ont.strictly_covers(y, x)))
        .cloned()
        .collect();
    let removed = unique.len() - kept.len();
    sort_by_code(&mut kept);
    Ok((kept, removed))
}

/// Builds icons from a primitive list: every pictogram (or none when the
/// list has no pictogram) crossed with every subset of the modifiers, then
/// inconsistent and less specific candidates are dropped.
pub fn assemble(ont: &VcmOntology, primitives: &[Primitive]) -> Result<Assembly> {
    for p in primitives {
        if !ont.has_primitive(p.kind, &p.code) {
            return Err(Error::UnknownPrimitive(p.to_string()));
        }
    }
    let codes = |kind: PrimitiveKind| -> Vec<String> {
        primitives
            .iter()
            .filter(|p| p.kind == kind)
            .map(|p| p.code.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    };
    let pictograms: Vec<Option<String>> = {
        let p = codes(PrimitiveKind::CentralPictogram);
        if p.is_empty() {
            vec![None]
        } else {
            p.into_iter().map(Some).collect()
        }
    };
    let modifiers = codes(PrimitiveKind::ShapeModifier);
    if modifiers.len() > MAX_MODIFIERS {
        return Err(Error::ModifierOverflow {
            count: modifiers.len(),
            max: MAX_MODIFIERS,
        });
    }
    let color = pick_color(primitives);
    let shape = pick_shape(primitives);

    let mut candidates = Vec::with_capacity(pictograms.len() << modifiers.len());
    for pictogram in &pictograms {
        for mask in 0u32..(1u32 << modifiers.len()) {
            let subset = modifiers
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, m)| m.clone())
                .collect();
            candidates.push(Icon {
                color,
                shape,
                pictogram: pictogram.clone(),
                modifiers: subset,
            });
        }
    }
    let generated = candidates.len();

    let mut consistent = Vec::with_capacity(generated);
    for c in candidates {
        if ont.is_consistent(&c)? {
            consistent.push(c);
        }
    }
    let removed_inconsistent = generated - consistent.len();
    let (icons, removed_less_specific) = prune_less_specific(ont, consistent)?;

    Ok(Assembly {
        icons,
        generated,
        removed_inconsistent,
        removed_less_specific,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarvestedMember {
    pub via: Via,
    pub concept: ConceptId,
    pub label: String,
}

/// Provenance for one relationship group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReport {
    pub group_id: u32,
    /// Step 1.
    pub harvested: Vec<HarvestedMember>,
    /// Step 2, one entry per harvested member.
    pub resolutions: Vec<(ConceptId, Resolution)>,
    /// Step 3.
    pub retained: BTreeSet<String>,
    /// Step 4.
    pub primitives: Vec<Primitive>,
    /// Step 5.
    pub assembly: Assembly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingReport {
    pub concept: ConceptId,
    pub label: String,
    pub groups: Vec<GroupReport>,
    /// Distinct icons in the union of all groups.
    pub merged_candidates: usize,
    /// Union members dropped by cross-group pruning.
    pub removed_across_groups: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IconSet {
    pub concept: ConceptId,
    /// Ordered by icon code.
    pub icons: Vec<Icon>,
    pub report: MappingReport,
}

impl IconSet {
    pub fn codes(&self) -> Vec<String> {
        self.icons.iter().map(Icon::code).collect()
    }

    /// `concept_id<TAB>codes<TAB>n_icons`
    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}",
            self.concept,
            self.codes().join(" "),
            self.icons.len()
        )
    }
}

/// The generation pipeline over one set of loaded inputs.
#[derive(Debug, Clone, Copy)]
pub struct IconEngine<'a> {
    pub graph: &'a TerminologyGraph,
    pub ontology: &'a VcmOntology,
    pub anchors: &'a AnchorTable,
}

impl<'a> IconEngine<'a> {
    pub fn new(graph: &'a TerminologyGraph, ontology: &'a VcmOntology, anchors: &'a AnchorTable) -> Self {
        IconEngine {
            graph,
            ontology,
            anchors,
        }
    }

    pub fn generate_icons(&self, concept: ConceptId) -> Result<IconSet> {
        let root = self
            .graph
            .concept(concept)
            .ok_or(Error::ConceptNotFound(concept))?;
        let mut groups = Vec::new();
        let mut union = Vec::new();

        for list in self.graph.related_concepts(concept)? {
            let mut resolved = BTreeSet::new();
            let mut resolutions = Vec::with_capacity(list.members.len());
            let mut harvested = Vec::with_capacity(list.members.len());
            for (via, id) in &list.members {
                let r = self.anchors.resolve(self.graph, *id)?;
                resolved.extend(r.vcm_concepts.iter().cloned());
                resolutions.push((*id, r));
                harvested.push(HarvestedMember {
                    via: via.clone(),
                    concept: *id,
                    label: self
                        .graph
                        .concept(*id)
                        .map(|c| c.label.clone())
                        .unwrap_or_default(),
                });
            }
            let retained = self.ontology.most_specific_concepts(&resolved)?;
            let mut primitives = Vec::new();
            for vcm in &retained {
                primitives.extend(self.ontology.primitives_for(vcm)?);
            }
            primitives.sort();
            primitives.dedup();
            let assembly = assemble(self.ontology, &primitives)?;
            union.extend(assembly.icons.iter().cloned());
            groups.push(GroupReport {
                group_id: list.group_id,
                harvested,
                resolutions,
                retained,
                primitives,
                assembly,
            });
        }

        let merged_candidates = union.iter().collect::<BTreeSet<_>>().len();
        let (icons, removed_across_groups) = prune_less_specific(self.ontology, union)?;

        Ok(IconSet {
            concept,
            icons,
            report: MappingReport {
                concept,
                label: root.label.clone(),
                groups,
                merged_candidates,
                removed_across_groups,
            },
        })
    }

    /// Maps every concept in parallel; results keep input order and equal the
    /// sequential run. A failing concept does not stop the batch.
    pub fn batch_generate(&self, concepts: &[ConceptId]) -> Vec<(ConceptId, Result<IconSet>)> {
        concepts
            .par_iter()
            .map(|&id| (id, self.generate_icons(id)))
            .collect()
    }

    pub fn batch_generate_sequential(&self, concepts: &[ConceptId]) -> Vec<(ConceptId, Result<IconSet>)> {
        concepts.iter().map(|&id| (id, self.generate_icons(id))).collect()
    }
}

/// One batch output row; errors become `ERROR:<reason>` cells.
pub fn batch_row(id: ConceptId, result: &Result<IconSet>) -> String {
    match result {
        Ok(set) => set.tsv_row(),
        Err(e) => {
            let reason: String = e
                .to_string()
                .chars()
                .map(|c| {
                    if c == '\t' || c == '\n' || c == '\r' {
                        ' '
                    } else {
                        c
                    }
                })
                .collect();
            format!("{id}\tERROR:{reason}\t0")
        }
    }
}

pub fn write_batch_tsv<W: Write + ?Sized>(
    out: &mut W,
    results: &[(ConceptId, Result<IconSet>)],
) -> io::Result<()> {
    writeln!(out, "{BATCH_HEADER}")?;
    for (id, r) in results {
        writeln!(out, "{}", batch_row(*id, r))?;
    }
    Ok(())
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(sep)
    }
}

impl fmt::Display for MappingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "concept {} {}", self.concept, self.label)?;
        for g in &self.groups {
            writeln!(f, "  group {}", g.group_id)?;
            writeln!(f, "    step 1 harvested:")?;
            for h in &g.harvested {
                writeln!(f, "      {} {} {}", h.via, h.concept, h.label)?;
            }
            writeln!(f, "    step 2 resolved:")?;
            for (id, r) in &g.resolutions {
                let hits = join(
                    r.trace
                        .hits
                        .iter()
                        .map(|h| format!("{}->{}({})", h.concept, h.vcm_id, h.kind)),
                    " ",
                );
                writeln!(
                    f,
                    "      {} => {{{}}} depth={} visited=[{}] hits=[{}]",
                    id,
                    join(&r.vcm_concepts, ", "),
                    r.trace.depth,
                    join(&r.trace.visited, " "),
                    hits
                )?;
            }
            writeln!(f, "    step 3 most specific: {{{}}}", join(&g.retained, ", "))?;
            writeln!(f, "    step 4 primitives: {}", join(&g.primitives, " "))?;
            writeln!(
                f,
                "    step 5 generated={} inconsistent={} less_specific={} kept={}: {}",
                g.assembly.generated,
                g.assembly.removed_inconsistent,
                g.assembly.removed_less_specific,
                g.assembly.icons.len(),
                join(g.assembly.icons.iter().map(Icon::code), " ")
            )?;
        }
        writeln!(
            f,
            "  merged candidates={} removed_across_groups={}",
            self.merged_candidates, self.removed_across_groups
        )
    }
}
