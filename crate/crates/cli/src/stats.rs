//! Corpus statistics over a batch output file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use vcm_mapper::engine::BATCH_HEADER;
use vcm_mapper::Icon;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    /// Concepts that were mapped (error rows excluded).
    pub total_concepts: usize,
    pub failed_concepts: usize,
    /// icons-per-concept -> number of concepts
    pub histogram: BTreeMap<usize, usize>,
    pub distinct_icons: usize,
    pub icon_assignments: usize,
    /// Concepts whose icon set contains the generic "disorder" icon.
    pub generic_icon_count: usize,
}

impl CorpusStats {
    pub fn mean_concepts_per_icon(&self) -> f64 {
        if self.distinct_icons == 0 {
            0.0
        } else {
            self.icon_assignments as f64 / self.distinct_icons as f64
        }
    }

    pub fn percentage(&self, n_icons: usize) -> f64 {
        let count = self.histogram.get(&n_icons).copied().unwrap_or(0);
        if self.total_concepts == 0 {
            0.0
        } else {
            100.0 * count as f64 / self.total_concepts as f64
        }
    }

    /// Parses batch TSV text. Errors carry the 1-based line number.
    pub fn from_batch_tsv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim_end_matches('\r') == BATCH_HEADER => {}
            Some((i, h)) => {
                return Err(format!(
                    "line {}: expected header '{BATCH_HEADER}', found '{h}'",
                    i + 1
                ))
            }
            None => return Err("empty batch file".to_string()),
        }

        let mut stats = CorpusStats {
            total_concepts: 0,
            failed_concepts: 0,
            histogram: BTreeMap::new(),
            distinct_icons: 0,
            icon_assignments: 0,
            generic_icon_count: 0,
        };
        let mut distinct = BTreeSet::new();
        let mut seen_ids = BTreeSet::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
            let [id, codes, n] = fields.as_slice() else {
                return Err(format!(
                    "line {line_no}: expected 3 columns, found {}",
                    fields.len()
                ));
            };
            if id.parse::<u64>().is_err() {
                return Err(format!("line {line_no}: bad concept id '{id}'"));
            }
            if !seen_ids.insert(id.to_string()) {
                return Err(format!("line {line_no}: concept {id} listed twice"));
            }
            if codes.starts_with("ERROR:") {
                stats.failed_concepts += 1;
                continue;
            }
            let n: usize = n
                .parse()
                .map_err(|_| format!("line {line_no}: bad icon count '{n}'"))?;
            let icons = codes
                .split(' ')
                .filter(|c| !c.is_empty())
                .map(|c| c.parse::<Icon>().map_err(|e| format!("line {line_no}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            if icons.len() != n || n == 0 {
                return Err(format!(
                    "line {line_no}: n_icons {n} does not match {} codes",
                    icons.len()
                ));
            }
            stats.total_concepts += 1;
            *stats.histogram.entry(n).or_default() += 1;
            stats.icon_assignments += n;
            if icons.iter().any(Icon::is_generic) {
                stats.generic_icon_count += 1;
            }
            distinct.extend(icons);
        }
        stats.distinct_icons = distinct.len();
        Ok(stats)
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total_concepts\t{}", self.total_concepts)?;
        writeln!(f, "failed_concepts\t{}", self.failed_concepts)?;
        for (n, count) in &self.histogram {
            writeln!(f, "icons_per_concept\t{n}\t{count}\t{:.1}%", self.percentage(*n))?;
        }
        writeln!(f, "distinct_icons\t{}", self.distinct_icons)?;
        writeln!(f, "icon_assignments\t{}", self.icon_assignments)?;
        writeln!(f, "mean_concepts_per_icon\t{:.2}", self.mean_concepts_per_icon())?;
        writeln!(f, "generic_icon_count\t{}", self.generic_icon_count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_concept() {
        let s = CorpusStats::from_batch_tsv("concept_id\ticon_codes\tn_icons\n1\tcurrent.patho.eye._\t1\n")
            .unwrap();
        assert_eq!(s.total_concepts, 1);
        assert_eq!(s.histogram, BTreeMap::from([(1, 1)]));
        assert_eq!(s.percentage(1), 100.0);
        assert_eq!(s.distinct_icons, 1);
    }

    #[test]
    fn shared_icons_are_counted_once() {
        let text = "concept_id\ticon_codes\tn_icons
1\tcurrent.patho.eye._\t1
2\tcurrent.patho.eye._ current.patho.ent._\t2
3\tERROR:concept 3 not found\t0
4\tcurrent.patho._._\t1
";
        let s = CorpusStats::from_batch_tsv(text).unwrap();
        assert_eq!(s.total_concepts, 3);
        assert_eq!(s.failed_concepts, 1);
        assert_eq!(s.icon_assignments, 4);
        assert_eq!(s.distinct_icons, 3);
        assert_eq!(s.generic_icon_count, 1);
        assert!((s.mean_concepts_per_icon() - 4.0 / 3.0).abs() < 1e-12);
        let text = s.to_string();
        assert!(text.contains("icons_per_concept\t1\t2\t66.7%"));
        assert!(text.contains("icons_per_concept\t2\t1\t33.3%"));
    }

    #[test]
    fn malformed_input() {
        assert!(CorpusStats::from_batch_tsv("").is_err());
        assert!(CorpusStats::from_batch_tsv("id\tcodes\n").is_err());
        let wrong_count = "concept_id\ticon_codes\tn_icons\n1\tcurrent.patho.eye._\t2\n";
        assert!(CorpusStats::from_batch_tsv(wrong_count)
            .unwrap_err()
            .starts_with("line 2"));
        let bad_code = "concept_id\ticon_codes\tn_icons\n1\tcurrent.round.eye._\t1\n";
        assert!(CorpusStats::from_batch_tsv(bad_code).is_err());
    }

    #[test]
    fn header_only() {
        let s = CorpusStats::from_batch_tsv("concept_id\ticon_codes\tn_icons\n").unwrap();
        assert_eq!(s.total_concepts, 0);
        assert_eq!(s.mean_concepts_per_icon(), 0.0);
    }
}
