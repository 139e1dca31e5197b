mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::subsequence;

use common::{with_overrides, Fixture};
use vcm_mapper::{AnchorEntry, Category, Color, ConceptId, Icon, MatchKind, SemanticTag, Shape};

fn fx() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(with_overrides)
}

fn token() -> impl Strategy<Value = String> {
    "[a-z0-9][a-z0-9_]{0,11}"
}

fn icon() -> impl Strategy<Value = Icon> {
    (
        prop::sample::select(Color::ALL.to_vec()),
        prop::sample::select(Shape::ALL.to_vec()),
        prop::option::of(token()),
        prop::collection::btree_set(token(), 0..5),
    )
        .prop_map(|(color, shape, pictogram, modifiers)| Icon {
            color,
            shape,
            pictogram,
            modifiers,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn icon_code_round_trips(icon in icon()) {
        let code = icon.code();
        prop_assert_eq!(code.parse::<Icon>().unwrap(), icon.clone());
        prop_assert_eq!(icon.to_string(), code);
    }
}

fn vcm_ids() -> Vec<String> {
    fx().ontology.concepts().map(|c| c.id.clone()).collect()
}

proptest! {
    #[test]
    fn most_specific_is_an_antichain_subset(picked in subsequence(vcm_ids(), 0..12)) {
        let ont = &fx().ontology;
        let input: BTreeSet<String> = picked.into_iter().collect();
        let out = ont.most_specific_concepts(&input).unwrap();
        prop_assert!(out.is_subset(&input));
        prop_assert_eq!(out.is_empty(), input.is_empty());
        for a in &out {
            for b in &out {
                if a != b {
                    prop_assert!(!ont.is_ancestor_or_self(a, b).unwrap());
                }
            }
        }
        // everything dropped has a more specific survivor
        for d in input.difference(&out) {
            prop_assert!(out.iter().any(|s| ont.is_ancestor_or_self(d, s).unwrap()));
        }
    }

    #[test]
    fn override_dominates(structure in 0usize..64, target in 0usize..64) {
        let f = fx();
        let structures: Vec<ConceptId> = f
            .graph
            .concepts()
            .filter(|c| c.semantic_tag == SemanticTag::BodyStructure)
            .map(|c| c.id)
            .collect();
        let targets: Vec<String> = f
            .ontology
            .concepts()
            .filter(|c| c.category == Category::AnatomicalStructure && c.pictograms().count() == 1)
            .map(|c| c.id.clone())
            .collect();
        let id = structures[structure % structures.len()];
        let vcm = &targets[target % targets.len()];
        let mut anchors = f.anchors.without_overrides();
        prop_assume!(anchors.anchors_of(id).iter().all(|(v, _)| v != vcm));
        anchors
            .add(
                AnchorEntry { terminology_id: id, vcm_id: vcm.clone(), kind: MatchKind::Override },
                &f.graph,
                &f.ontology,
            )
            .unwrap();
        let r = anchors.resolve(&f.graph, id).unwrap();
        prop_assert_eq!(r.vcm_concepts, BTreeSet::from([vcm.clone()]));
        prop_assert!(anchors.detect_ambiguities(&f.graph, &f.ontology).unwrap().iter().all(|(c, _)| *c != id));
    }

    #[test]
    fn new_exact_anchor_resolves_at_depth_zero(concept in 0usize..128, target in 0usize..64) {
        let f = fx();
        let ids: Vec<ConceptId> = f.graph.concepts().map(|c| c.id).collect();
        let vcms = vcm_ids();
        let id = ids[concept % ids.len()];
        let vcm = &vcms[target % vcms.len()];
        let before = f.anchors.resolve(&f.graph, id).unwrap();
        let mut anchors = f.anchors.clone();
        let added = anchors.add(
            AnchorEntry { terminology_id: id, vcm_id: vcm.clone(), kind: MatchKind::Exact },
            &f.graph,
            &f.ontology,
        );
        prop_assume!(added.is_ok());
        let after = anchors.resolve(&f.graph, id).unwrap();
        prop_assert!(after.trace.depth <= before.trace.depth);
        prop_assert_eq!(after.trace.depth, 0);
    }
}

/// A small closed world of icons over the fixture's specificity links.
fn icon_universe() -> Vec<Icon> {
    let picts = [
        None,
        Some("thyroid"),
        Some("endocrine"),
        Some("diabetes"),
        Some("ear"),
        Some("ent"),
    ];
    let mods = ["virus", "bacteria", "infection", "pain"];
    let mut out = Vec::new();
    for color in [Color::Current, Color::Past] {
        for shape in Shape::ALL {
            for p in picts {
                for mask in 0..(1u32 << mods.len()) {
                    let ms = mods
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, m)| *m);
                    out.push(Icon::new(color, shape, p, ms));
                }
            }
        }
    }
    out
}

#[test]
fn specificity_is_a_strict_partial_order() {
    let ont = &fx().ontology;
    let icons = icon_universe();
    let n = icons.len();
    let rel: Vec<Vec<bool>> = icons
        .iter()
        .map(|a| {
            icons
                .iter()
                .map(|b| ont.is_more_specific(a, b).unwrap())
                .collect()
        })
        .collect();
    for i in 0..n {
        assert!(!rel[i][i], "{} reflexive", icons[i]);
        for j in 0..n {
            if rel[i][j] {
                assert!(!rel[j][i], "{} <-> {}", icons[i], icons[j]);
                for k in 0..n {
                    if rel[j][k] {
                        assert!(
                            rel[i][k],
                            "{} > {} > {} not transitive",
                            icons[i], icons[j], icons[k]
                        );
                    }
                }
            }
        }
    }
    let thyroid = Icon::new(Color::Current, Shape::Patho, Some("thyroid"), ["virus"]);
    let endocrine = Icon::new(Color::Current, Shape::Patho, Some("endocrine"), ["infection"]);
    assert!(ont.is_more_specific(&thyroid, &endocrine).unwrap());
    assert!(ont.is_more_specific(&endocrine, &Icon::generic()).unwrap());
    let hepatitis = Icon::new(Color::Current, Shape::Patho, Some("liver"), ["inflammation"]);
    let hepatic_disorder = Icon::new(Color::Current, Shape::Patho, Some("liver"), None::<&str>);
    assert!(ont.is_more_specific(&hepatitis, &hepatic_disorder).unwrap());
    assert!(!ont.is_more_specific(&hepatic_disorder, &hepatitis).unwrap());
}
