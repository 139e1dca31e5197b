//! Expert review sheets: one row per concept with its terminology
//! relationships, generated icons, and blank judgement columns.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vcm_mapper::{ConceptId, IconEngine, RelType, Result, TerminologyGraph};

pub const REVIEW_HEADER: &str = "concept_id\tlabel\trelationships\ticons\tacceptable\tcomments";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewRow {
    pub concept: ConceptId,
    pub label: String,
    pub relationships: String,
    pub icons: Vec<String>,
}

impl ReviewRow {
    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t\t",
            self.concept,
            self.label,
            self.relationships,
            self.icons.join(" ")
        )
    }
}

/// Renders a concept's defining relationships the way a terminology
/// browser shows them: harvested attributes by group, then is-a parents.
pub fn render_relationships(graph: &TerminologyGraph, id: ConceptId) -> Result<String> {
    let label = |c: ConceptId| graph.concept(c).map(|c| c.label.as_str()).unwrap_or("?");
    let mut parts = Vec::new();
    let mut parents = Vec::new();
    for r in graph.outgoing(id)? {
        if r.rel_type == RelType::IsA {
            parents.push(format!("is a: {}", label(r.destination)));
        } else if r.rel_type.is_harvested() {
            let name = r.rel_type.as_str().replace('_', " ");
            let group = if r.group_id > 0 {
                format!("[{}] ", r.group_id)
            } else {
                String::new()
            };
            parts.push((
                r.group_id,
                r.rel_type.clone(),
                format!("{group}{name}: {}", label(r.destination)),
            ));
        }
    }
    parts.sort();
    let mut rendered: Vec<String> = parts.into_iter().map(|(_, _, s)| s).collect();
    rendered.extend(parents);
    Ok(rendered.join("; "))
}

pub fn review_row(engine: &IconEngine<'_>, id: ConceptId) -> Result<ReviewRow> {
    let set = engine.generate_icons(id)?;
    Ok(ReviewRow {
        concept: id,
        label: set.report.label.clone(),
        relationships: render_relationships(engine.graph, id)?,
        icons: set.codes(),
    })
}

/// Picks `n` concepts with a seeded ChaCha8 generator, keeping corpus order.
/// The same seed gives the same sample on every platform.
pub fn sample(corpus: &[ConceptId], n: usize, seed: u64) -> Vec<ConceptId> {
    let n = n.min(corpus.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, corpus.len(), n).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| corpus[i]).collect()
}
