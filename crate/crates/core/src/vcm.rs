//! The icon-language ontology: graphical primitives, medical concepts and
//! the links between them, consistency rules, and specificity links.
//!
//! File format (tab-separated, `#` comments):
//!
//! ```text
//! primitive  <kind>  <code>
//! concept    <id>    <category>  parents=<p1,p2|->  prims=<kind:code,...|->
//! forbid     <kind:code>  <kind:code>
//! spec       <kind:specific_code>  <kind:general_code>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::dag;
use crate::error::{Error, Result};
use crate::icon::{is_valid_token, Color, Icon, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimitiveKind {
    Color,
    BaseShape,
    CentralPictogram,
    ShapeModifier,
}

impl PrimitiveKind {
    pub const ALL: [PrimitiveKind; 4] = [
        PrimitiveKind::Color,
        PrimitiveKind::BaseShape,
        PrimitiveKind::CentralPictogram,
        PrimitiveKind::ShapeModifier,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PrimitiveKind::Color => "color",
            PrimitiveKind::BaseShape => "base_shape",
            PrimitiveKind::CentralPictogram => "central_pictogram",
            PrimitiveKind::ShapeModifier => "shape_modifier",
        }
    }
}

impl FromStr for PrimitiveKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        PrimitiveKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown primitive kind '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Primitive {
    pub kind: PrimitiveKind,
    pub code: String,
}

impl Primitive {
    pub fn new(kind: PrimitiveKind, code: impl Into<String>) -> Self {
        Primitive {
            kind,
            code: code.into(),
        }
    }

    pub fn pictogram(code: impl Into<String>) -> Self {
        Self::new(PrimitiveKind::CentralPictogram, code)
    }

    pub fn modifier(code: impl Into<String>) -> Self {
        Self::new(PrimitiveKind::ShapeModifier, code)
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.as_str(), self.code)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    AnatomicalStructure,
    BiologicalFunction,
    PathologicalProcess,
    PatientCharacteristic,
    TemporalAspect,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::AnatomicalStructure => "anatomical_structure",
            Category::BiologicalFunction => "biological_function",
            Category::PathologicalProcess => "pathological_process",
            Category::PatientCharacteristic => "patient_characteristic",
            Category::TemporalAspect => "temporal_aspect",
        }
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "anatomical_structure" => Category::AnatomicalStructure,
            "biological_function" => Category::BiologicalFunction,
            "pathological_process" => Category::PathologicalProcess,
            "patient_characteristic" => Category::PatientCharacteristic,
            "temporal_aspect" => Category::TemporalAspect,
            _ => return Err(format!("unknown category '{s}'")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcmConcept {
    pub id: String,
    pub category: Category,
    pub parents: Vec<String>,
    /// Linked primitives in canonical (kind, code) order.
    pub primitives: Vec<Primitive>,
}

impl VcmConcept {
    pub fn pictograms(&self) -> impl Iterator<Item = &str> {
        self.primitives
            .iter()
            .filter(|p| p.kind == PrimitiveKind::CentralPictogram)
            .map(|p| p.code.as_str())
    }
}

/// A pair of icon elements that may not appear together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsistencyRule {
    /// Pictogram (or the absent pictogram) with a modifier.
    PictogramModifier {
        pictogram: Option<String>,
        modifier: String,
    },
    /// Two modifiers, stored in lexicographic order.
    ModifierPair(String, String),
}

impl ConsistencyRule {
    pub fn violated_by(&self, icon: &Icon) -> bool {
        match self {
            ConsistencyRule::PictogramModifier { pictogram, modifier } => {
                icon.pictogram == *pictogram && icon.modifiers.contains(modifier)
            }
            ConsistencyRule::ModifierPair(a, b) => icon.modifiers.contains(a) && icon.modifiers.contains(b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VcmOntology {
    primitives: BTreeSet<Primitive>,
    concepts: BTreeMap<String, VcmConcept>,
    rules: Vec<ConsistencyRule>,
    /// Reflexive-transitive ancestor closure over concept parents.
    concept_ancestors: BTreeMap<String, BTreeSet<String>>,
    /// Reflexive-transitive generalizations per pictogram.
    pictogram_general: BTreeMap<String, BTreeSet<String>>,
    /// Reflexive-transitive generalizations per modifier.
    modifier_general: BTreeMap<String, BTreeSet<String>>,
}

fn closure(
    nodes: impl Iterator<Item = String>,
    edges: &BTreeMap<String, Vec<String>>,
) -> BTreeMap<String, BTreeSet<String>> {
    nodes
        .map(|n| {
            let mut seen = BTreeSet::from([n.clone()]);
            let mut stack = vec![n.clone()];
            while let Some(cur) = stack.pop() {
                for next in edges.get(&cur).into_iter().flatten() {
                    if seen.insert(next.clone()) {
                        stack.push(next.clone());
                    }
                }
            }
            (n, seen)
        })
        .collect()
}

struct LineCtx<'a> {
    file: &'a str,
    line: u64,
}

impl LineCtx<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.file, self.line, msg)
    }

    fn primitive_ref(&self, s: &str) -> Result<(PrimitiveKind, String)> {
        let (kind, code) = s
            .split_once(':')
            .ok_or_else(|| self.err(format!("expected <kind:code>, found '{s}'")))?;
        let kind: PrimitiveKind = kind.parse().map_err(|e: String| self.err(e))?;
        if code != "_" && !is_valid_token(code) {
            return Err(self.err(format!("invalid primitive code '{code}'")));
        }
        Ok((kind, code.to_string()))
    }

    fn list<'s>(&self, field: &'s str, key: &str) -> Result<Vec<&'s str>> {
        let value = field
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| self.err(format!("expected '{key}=...', found '{field}'")))?;
        if value == "-" {
            return Ok(Vec::new());
        }
        Ok(value.split(',').collect())
    }
}

type RawPrimitive = (PrimitiveKind, String);

/// Raw contents of an ontology file before validation.
#[derive(Debug, Default)]
struct Draft {
    primitives: BTreeSet<Primitive>,
    concepts: BTreeMap<String, (Category, Vec<String>, Vec<RawPrimitive>)>,
    forbids: Vec<(RawPrimitive, RawPrimitive)>,
    specs: Vec<(RawPrimitive, RawPrimitive)>,
}

impl VcmOntology {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let mut draft = Draft::default();
        let mut any = false;
        for (idx, raw) in text.lines().enumerate() {
            let ctx = LineCtx {
                file,
                line: idx as u64 + 1,
            };
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            any = true;
            let fields: Vec<&str> = line.split('\t').collect();
            let expect = |n: usize| {
                if fields.len() == n {
                    Ok(())
                } else {
                    Err(ctx.err(format!(
                        "'{}' line expects {n} fields, found {}",
                        fields[0],
                        fields.len()
                    )))
                }
            };
            match fields[0] {
                "primitive" => {
                    expect(3)?;
                    let kind: PrimitiveKind = fields[1].parse().map_err(|e: String| ctx.err(e))?;
                    let code = fields[2];
                    if !is_valid_token(code) {
                        return Err(ctx.err(format!("invalid primitive code '{code}'")));
                    }
                    let known_ok = match kind {
                        PrimitiveKind::Color => code.parse::<Color>().is_ok(),
                        PrimitiveKind::BaseShape => code.parse::<Shape>().is_ok(),
                        _ => true,
                    };
                    if !known_ok {
                        return Err(ctx.err(format!(
                            "{} code '{code}' is not one of the fixed codes",
                            kind.as_str()
                        )));
                    }
                    if !draft.primitives.insert(Primitive::new(kind, code)) {
                        return Err(Error::Duplicate(format!("primitive {}:{code}", kind.as_str())));
                    }
                }
                "concept" => {
                    expect(5)?;
                    let id = fields[1];
                    if !is_valid_token(id) {
                        return Err(ctx.err(format!("invalid concept id '{id}'")));
                    }
                    let category: Category = fields[2].parse().map_err(|e: String| ctx.err(e))?;
                    let parents: Vec<String> = ctx
                        .list(fields[3], "parents")?
                        .into_iter()
                        .map(str::to_string)
                        .collect();
                    let prims = ctx
                        .list(fields[4], "prims")?
                        .into_iter()
                        .map(|p| ctx.primitive_ref(p))
                        .collect::<Result<Vec<_>>>()?;
                    if draft
                        .concepts
                        .insert(id.to_string(), (category, parents, prims))
                        .is_some()
                    {
                        return Err(Error::Duplicate(format!("VCM concept {id}")));
                    }
                }
                "forbid" => {
                    expect(3)?;
                    let a = ctx.primitive_ref(fields[1])?;
                    let b = ctx.primitive_ref(fields[2])?;
                    draft.forbids.push((a, b));
                }
                "spec" => {
                    expect(3)?;
                    let a = ctx.primitive_ref(fields[1])?;
                    let b = ctx.primitive_ref(fields[2])?;
                    draft.specs.push((a, b));
                }
                other => return Err(ctx.err(format!("unknown record type '{other}'"))),
            }
        }
        if !any {
            return Err(Error::EmptyOntology);
        }
        Self::validate(draft)
    }

    fn validate(draft: Draft) -> Result<Self> {
        let mut primitives = draft.primitives;
        // Colors and base shapes are fixed by the language itself.
        for c in Color::ALL {
            primitives.insert(Primitive::new(PrimitiveKind::Color, c.as_str()));
        }
        for s in Shape::ALL {
            primitives.insert(Primitive::new(PrimitiveKind::BaseShape, s.as_str()));
        }

        let resolve = |context: &str, (kind, code): &(PrimitiveKind, String)| -> Result<Primitive> {
            let p = Primitive::new(*kind, code.clone());
            if primitives.contains(&p) {
                Ok(p)
            } else {
                Err(Error::UnresolvedReference {
                    context: context.to_string(),
                    reference: p.to_string(),
                })
            }
        };

        let mut concepts = BTreeMap::new();
        for (id, (category, parents, prims)) in &draft.concepts {
            let ctx = format!("concept {id}");
            for p in parents {
                if !draft.concepts.contains_key(p) {
                    return Err(Error::UnresolvedReference {
                        context: ctx.clone(),
                        reference: p.clone(),
                    });
                }
            }
            let mut linked = prims
                .iter()
                .map(|p| resolve(&ctx, p))
                .collect::<Result<Vec<_>>>()?;
            linked.sort();
            linked.dedup();
            let mut parents = parents.clone();
            parents.sort();
            parents.dedup();
            let concept = VcmConcept {
                id: id.clone(),
                category: *category,
                parents,
                primitives: linked,
            };
            if concept.category == Category::AnatomicalStructure && concept.pictograms().count() > 1 {
                return Err(Error::Invariant(format!(
                    "anatomical structure '{id}' links to {} pictograms",
                    concept.pictograms().count()
                )));
            }
            concepts.insert(id.clone(), concept);
        }

        let mut rules = Vec::new();
        for (a, b) in &draft.forbids {
            let rule = match (a.0, b.0) {
                (PrimitiveKind::CentralPictogram, PrimitiveKind::ShapeModifier)
                | (PrimitiveKind::ShapeModifier, PrimitiveKind::CentralPictogram) => {
                    let (pict, modifier) = if a.0 == PrimitiveKind::CentralPictogram {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    let modifier = resolve("forbid", modifier)?.code;
                    let pictogram = if pict.1 == "_" {
                        None
                    } else {
                        Some(resolve("forbid", pict)?.code)
                    };
                    ConsistencyRule::PictogramModifier { pictogram, modifier }
                }
                (PrimitiveKind::ShapeModifier, PrimitiveKind::ShapeModifier) => {
                    let x = resolve("forbid", a)?.code;
                    let y = resolve("forbid", b)?.code;
                    ConsistencyRule::ModifierPair(x.clone().min(y.clone()), x.max(y))
                }
                _ => {
                    return Err(Error::Invariant(format!(
                        "forbid rules pair a pictogram with a modifier or two modifiers, found {}:{} / {}:{}",
                        a.0.as_str(),
                        a.1,
                        b.0.as_str(),
                        b.1
                    )))
                }
            };
            rules.push(rule);
        }
        rules.sort();
        rules.dedup();

        let mut pict_edges: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut mod_edges: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (specific, general) in &draft.specs {
            if specific.0 != general.0 {
                return Err(Error::Invariant(format!(
                    "specificity link between different kinds: {}:{} -> {}:{}",
                    specific.0.as_str(),
                    specific.1,
                    general.0.as_str(),
                    general.1
                )));
            }
            let edges = match specific.0 {
                PrimitiveKind::CentralPictogram => &mut pict_edges,
                PrimitiveKind::ShapeModifier => &mut mod_edges,
                other => {
                    return Err(Error::Invariant(format!(
                        "specificity links are only defined for pictograms and modifiers, not {}",
                        other.as_str()
                    )))
                }
            };
            let s = resolve("spec", specific)?.code;
            let g = resolve("spec", general)?.code;
            edges.entry(s).or_default().push(g);
        }

        let parent_edges: BTreeMap<String, Vec<String>> = concepts
            .values()
            .map(|c: &VcmConcept| (c.id.clone(), c.parents.clone()))
            .collect();
        for (axis, edges) in [
            ("VCM parents", &parent_edges),
            ("pictogram specificity", &pict_edges),
            ("modifier specificity", &mod_edges),
        ] {
            if let Some(cycle) = dag::find_cycle(edges) {
                return Err(Error::Cycle {
                    axis: axis.to_string(),
                    cycle,
                });
            }
        }

        let codes_of = |kind: PrimitiveKind| {
            primitives
                .iter()
                .filter(move |p| p.kind == kind)
                .map(|p| p.code.clone())
                .collect::<Vec<_>>()
        };
        let concept_ancestors = closure(concepts.keys().cloned(), &parent_edges);
        let pictogram_general = closure(codes_of(PrimitiveKind::CentralPictogram).into_iter(), &pict_edges);
        let modifier_general = closure(codes_of(PrimitiveKind::ShapeModifier).into_iter(), &mod_edges);

        Ok(VcmOntology {
            primitives,
            concepts,
            rules,
            concept_ancestors,
            pictogram_general,
            modifier_general,
        })
    }

    pub fn concept(&self, id: &str) -> Option<&VcmConcept> {
        self.concepts.get(id)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &VcmConcept> {
        self.concepts.values()
    }

    pub fn primitives(&self) -> impl Iterator<Item = &Primitive> {
        self.primitives.iter()
    }

    pub fn rules(&self) -> &[ConsistencyRule] {
        &self.rules
    }

    pub fn has_primitive(&self, kind: PrimitiveKind, code: &str) -> bool {
        self.primitives.contains(&Primitive::new(kind, code))
    }

    fn require(&self, id: &str) -> Result<&VcmConcept> {
        self.concepts
            .get(id)
            .ok_or_else(|| Error::VcmConceptNotFound(id.to_string()))
    }

    /// Primitives linked to a medical concept, in (kind, code) order.
    pub fn primitives_for(&self, id: &str) -> Result<Vec<Primitive>> {
        Ok(self.require(id)?.primitives.clone())
    }

    /// True iff `ancestor` is reachable from `id` through zero or more parents.
    pub fn is_ancestor_or_self(&self, ancestor: &str, id: &str) -> Result<bool> {
        self.require(ancestor)?;
        Ok(self.concept_ancestors[&self.require(id)?.id].contains(ancestor))
    }

    /// Drops every concept that is a strict ancestor of another member.
    pub fn most_specific_concepts(&self, concepts: &BTreeSet<String>) -> Result<BTreeSet<String>> {
        for c in concepts {
            self.require(c)?;
        }
        Ok(concepts
            .iter()
            .filter(|c| {
                !concepts
                    .iter()
                    .any(|other| other != *c && self.concept_ancestors[other].contains(*c))
            })
            .cloned()
            .collect())
    }

    pub(crate) fn check_codes(&self, icon: &Icon) -> Result<()> {
        if let Some(p) = &icon.pictogram {
            if !self.pictogram_general.contains_key(p) {
                return Err(Error::UnknownPrimitive(format!("central_pictogram:{p}")));
            }
        }
        for m in &icon.modifiers {
            if !self.modifier_general.contains_key(m) {
                return Err(Error::UnknownPrimitive(format!("shape_modifier:{m}")));
            }
        }
        Ok(())
    }

    /// An icon is consistent when no forbidden pair occurs in it and its
    /// modifier set does not carry a modifier together with one of its own
    /// generalizations.
    pub fn is_consistent(&self, icon: &Icon) -> Result<bool> {
        self.check_codes(icon)?;
        if self.rules.iter().any(|r| r.violated_by(icon)) {
            return Ok(false);
        }
        let redundant = icon.modifiers.iter().any(|m| {
            self.modifier_general[m]
                .iter()
                .any(|g| g != m && icon.modifiers.contains(g))
        });
        Ok(!redundant)
    }

    /// `general` is `specific` or one of its generalizations; the absent
    /// pictogram generalizes every pictogram.
    fn pictogram_covers(&self, specific: Option<&String>, general: Option<&String>) -> bool {
        match (specific, general) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(s), Some(g)) => self.pictogram_general[s].contains(g),
        }
    }

    /// Weak dominance: `a` says at least everything `b` says.
    fn covers(&self, a: &Icon, b: &Icon) -> bool {
        a.color == b.color
            && a.shape == b.shape
            && self.pictogram_covers(a.pictogram.as_ref(), b.pictogram.as_ref())
            && b.modifiers.iter().all(|mb| {
                a.modifiers
                    .iter()
                    .any(|ma| self.modifier_general[ma].contains(mb))
            })
    }

    /// Strict specificity: `a` covers `b` and `b` does not cover `a`.
    pub fn is_more_specific(&self, a: &Icon, b: &Icon) -> Result<bool> {
        self.check_codes(a)?;
        self.check_codes(b)?;
        Ok(self.strictly_covers(a, b))
    }

    /// `is_more_specific` for icons already passed through `check_codes`.
    pub(crate) fn strictly_covers(&self, a: &Icon, b: &Icon) -> bool {
        self.covers(a, b) && !self.covers(b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI: &str = "\
# tiny ontology
primitive\tcentral_pictogram\teye
primitive\tcentral_pictogram\tliver
primitive\tcentral_pictogram\tendocrine
primitive\tcentral_pictogram\tthyroid
primitive\tcentral_pictogram\tpregnancy
primitive\tshape_modifier\tinflammation
primitive\tshape_modifier\tinfection
primitive\tshape_modifier\tvirus
primitive\tshape_modifier\thyperfunction
concept\teye\tanatomical_structure\tparents=-\tprims=central_pictogram:eye
concept\tanterior_uvea\tanatomical_structure\tparents=eye\tprims=central_pictogram:eye
concept\tpharynx\tanatomical_structure\tparents=-\tprims=-
concept\tinflammation_process\tpathological_process\tparents=-\tprims=shape_modifier:inflammation
concept\tthyroid_function\tbiological_function\tparents=-\tprims=central_pictogram:thyroid
concept\tthyroid_hyperfunction\tbiological_function\tparents=thyroid_function\tprims=shape_modifier:hyperfunction,central_pictogram:thyroid
forbid\tcentral_pictogram:pregnancy\tshape_modifier:hyperfunction
spec\tcentral_pictogram:thyroid\tcentral_pictogram:endocrine
spec\tshape_modifier:virus\tshape_modifier:infection
";

    fn ont() -> VcmOntology {
        VcmOntology::parse(MINI, "mini.txt").unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn icon(p: Option<&str>, mods: &[&str]) -> Icon {
        Icon::new(Color::Current, Shape::Patho, p, mods.iter().copied())
    }

    #[test]
    fn primitives_in_canonical_order() {
        let o = ont();
        assert_eq!(
            o.primitives_for("eye").unwrap(),
            vec![Primitive::pictogram("eye")]
        );
        assert_eq!(
            o.primitives_for("inflammation_process").unwrap(),
            vec![Primitive::modifier("inflammation")]
        );
        assert_eq!(
            o.primitives_for("thyroid_hyperfunction").unwrap(),
            vec![
                Primitive::pictogram("thyroid"),
                Primitive::modifier("hyperfunction")
            ]
        );
        assert!(matches!(
            o.primitives_for("nope"),
            Err(Error::VcmConceptNotFound(_))
        ));
    }

    #[test]
    fn fixed_colors_and_shapes_are_implicit() {
        let o = ont();
        assert!(o.has_primitive(PrimitiveKind::Color, "past"));
        assert!(o.has_primitive(PrimitiveKind::BaseShape, "physio"));
        let err = VcmOntology::parse("primitive\tcolor\tgreen\n", "x").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn most_specific() {
        let o = ont();
        assert_eq!(
            o.most_specific_concepts(&set(&["eye", "anterior_uvea"])).unwrap(),
            set(&["anterior_uvea"])
        );
        assert_eq!(
            o.most_specific_concepts(&set(&["eye", "pharynx"])).unwrap(),
            set(&["eye", "pharynx"])
        );
        assert_eq!(o.most_specific_concepts(&set(&[])).unwrap(), set(&[]));
        assert!(o.most_specific_concepts(&set(&["eye", "zzz"])).is_err());
    }

    #[test]
    fn consistency() {
        let o = ont();
        assert!(o.is_consistent(&icon(Some("eye"), &["inflammation"])).unwrap());
        assert!(!o
            .is_consistent(&icon(Some("pregnancy"), &["hyperfunction"]))
            .unwrap());
        assert!(o.is_consistent(&icon(Some("pregnancy"), &[])).unwrap());
        assert!(o.is_consistent(&icon(None, &[])).unwrap());
        // a modifier next to its own generalization is redundant
        assert!(!o
            .is_consistent(&icon(Some("eye"), &["virus", "infection"]))
            .unwrap());
        assert!(matches!(
            o.is_consistent(&icon(Some("xyz"), &[])),
            Err(Error::UnknownPrimitive(_))
        ));
    }

    #[test]
    fn specificity() {
        let o = ont();
        let liver_infl = icon(Some("liver"), &["inflammation"]);
        let liver = icon(Some("liver"), &[]);
        assert!(o.is_more_specific(&liver_infl, &liver).unwrap());
        assert!(!o.is_more_specific(&liver, &liver_infl).unwrap());
        assert!(!o.is_more_specific(&liver, &liver).unwrap());
        assert!(!o
            .is_more_specific(&icon(Some("eye"), &[]), &icon(Some("liver"), &[]))
            .unwrap());
        // pictogram generalization and the absent pictogram
        assert!(o
            .is_more_specific(&icon(Some("thyroid"), &[]), &icon(Some("endocrine"), &[]))
            .unwrap());
        assert!(o
            .is_more_specific(&icon(Some("eye"), &[]), &icon(None, &[]))
            .unwrap());
        // modifier generalization
        assert!(o
            .is_more_specific(&icon(Some("eye"), &["virus"]), &icon(Some("eye"), &["infection"]))
            .unwrap());
        // color must agree
        let mut past = liver_infl.clone();
        past.color = Color::Past;
        assert!(!o.is_more_specific(&past, &liver).unwrap());
    }

    #[test]
    fn load_errors() {
        assert!(matches!(VcmOntology::parse("", "x"), Err(Error::EmptyOntology)));
        assert!(matches!(
            VcmOntology::parse("# only a comment\n\n", "x"),
            Err(Error::EmptyOntology)
        ));

        let unknown = "concept\tc\tanatomical_structure\tparents=-\tprims=central_pictogram:xyz\n";
        match VcmOntology::parse(unknown, "x").unwrap_err() {
            Error::UnresolvedReference { reference, .. } => assert_eq!(reference, "central_pictogram:xyz"),
            other => panic!("unexpected {other}"),
        }

        let cyclic = "concept\ta\tanatomical_structure\tparents=b\tprims=-\nconcept\tb\tanatomical_structure\tparents=a\tprims=-\n";
        assert!(matches!(
            VcmOntology::parse(cyclic, "x"),
            Err(Error::Cycle { .. })
        ));

        let spec_cycle = "primitive\tshape_modifier\ta\nprimitive\tshape_modifier\tb\nspec\tshape_modifier:a\tshape_modifier:b\nspec\tshape_modifier:b\tshape_modifier:a\n";
        assert!(matches!(
            VcmOntology::parse(spec_cycle, "x"),
            Err(Error::Cycle { .. })
        ));

        let two_picts = "primitive\tcentral_pictogram\ta\nprimitive\tcentral_pictogram\tb\nconcept\tc\tanatomical_structure\tparents=-\tprims=central_pictogram:a,central_pictogram:b\n";
        assert!(matches!(
            VcmOntology::parse(two_picts, "x"),
            Err(Error::Invariant(_))
        ));

        let bad_line = "primitive\tcentral_pictogram\n";
        assert!(matches!(
            VcmOntology::parse(bad_line, "x"),
            Err(Error::Parse { line: 1, .. })
        ));

        let dup = "primitive\tshape_modifier\ta\nprimitive\tshape_modifier\ta\n";
        assert!(matches!(VcmOntology::parse(dup, "x"), Err(Error::Duplicate(_))));
    }
}
