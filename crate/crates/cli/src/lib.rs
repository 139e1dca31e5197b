//! Command-line surface for the icon mapper.
//!
//! Exit codes: 0 success, 1 input/load error, 2 unknown concept,
//! 3 generation error (for `batch`: every concept failed).

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use vcm_mapper::engine::write_batch_tsv;
use vcm_mapper::{AnchorTable, ConceptId, Error, IconEngine, TerminologyGraph, VcmOntology};

pub mod review;
pub mod stats;

pub const EXIT_OK: u8 = 0;
pub const EXIT_LOAD: u8 = 1;
pub const EXIT_UNKNOWN_CONCEPT: u8 = 2;
pub const EXIT_GENERATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "vcm-map",
    version,
    about = "Map clinical finding concepts to VCM icon codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Inputs {
    /// concepts.tsv (id, label, semantic_tag)
    #[arg(long)]
    pub concepts: PathBuf,
    /// relationships.tsv (source_id, rel_type, destination_id, group_id)
    #[arg(long)]
    pub relationships: PathBuf,
    /// VCM ontology file
    #[arg(long)]
    pub vcm: PathBuf,
    /// anchors.tsv (terminology_id, vcm_id, match)
    #[arg(long)]
    pub anchors: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the icons for one concept.
    Map {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        id: u64,
        /// Also print the full mapping report.
        #[arg(long)]
        verbose: bool,
    },
    /// Generate icons for every concept id listed in a corpus file.
    Batch {
        #[command(flatten)]
        inputs: Inputs,
        /// One concept id per line; `#` comments allowed.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Mapping reports for each concept, written to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Summarize a batch output file.
    Stats {
        /// Batch TSV produced by `batch`.
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List body structures that reach more than one central pictogram.
    Ambiguities {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an expert review sheet for a corpus or a seeded sample of it.
    ExportReview {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        corpus: PathBuf,
        /// Number of concepts to sample; all concepts when omitted.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Loaded {
    graph: TerminologyGraph,
    ontology: VcmOntology,
    anchors: AnchorTable,
}

impl Loaded {
    fn load(inputs: &Inputs) -> Result<Self, Error> {
        let graph = TerminologyGraph::load(&inputs.concepts, &inputs.relationships)?;
        let ontology = VcmOntology::load(&inputs.vcm)?;
        let anchors = AnchorTable::load(&inputs.anchors, &graph, &ontology)?;
        Ok(Loaded {
            graph,
            ontology,
            anchors,
        })
    }

    fn engine(&self) -> IconEngine<'_> {
        IconEngine::new(&self.graph, &self.ontology, &self.anchors)
    }
}

/// Reads a corpus file: one positive integer id per line.
pub fn read_corpus(path: &Path) -> Result<Vec<ConceptId>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut ids = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let id: ConceptId = line
            .parse()
            .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        ids.push(id);
    }
    Ok(ids)
}

/// Runs `body` against the `--out` file or the given stdout.
fn with_output(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()
        }
        None => body(stdout),
    }
}

macro_rules! fail {
    ($stderr:expr, $code:expr, $($arg:tt)*) => {{
        let _ = writeln!($stderr, $($arg)*);
        return $code;
    }};
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match cli.command {
        Command::Map { inputs, id, verbose } => {
            let loaded = match Loaded::load(&inputs) {
                Ok(l) => l,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {e}"),
            };
            let id = ConceptId(id);
            if !loaded.graph.contains(id) {
                fail!(stderr, EXIT_UNKNOWN_CONCEPT, "error: concept {id} not found");
            }
            let set = match loaded.engine().generate_icons(id) {
                Ok(s) => s,
                Err(e) => fail!(stderr, EXIT_GENERATION, "error: {e}"),
            };
            let written = writeln!(stdout, "{}", set.tsv_row()).and_then(|_| {
                if verbose {
                    write!(stdout, "{}", set.report)
                } else {
                    Ok(())
                }
            });
            if let Err(e) = written {
                fail!(stderr, EXIT_LOAD, "error: {e}");
            }
            EXIT_OK
        }
        Command::Batch {
            inputs,
            corpus,
            out,
            verbose,
        } => {
            let loaded = match Loaded::load(&inputs) {
                Ok(l) => l,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {e}"),
            };
            let ids = match read_corpus(&corpus) {
                Ok(ids) => ids,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {e}"),
            };
            let results = loaded.engine().batch_generate(&ids);
            for (id, r) in &results {
                match r {
                    Err(e) => {
                        let _ = writeln!(stderr, "warning: concept {id}: {e}");
                    }
                    Ok(set) if verbose => {
                        let _ = write!(stderr, "{}", set.report);
                    }
                    Ok(_) => {}
                }
            }
            if let Err(e) = with_output(&out, stdout, |w| write_batch_tsv(w, &results)) {
                fail!(stderr, EXIT_LOAD, "error: {e}");
            }
            if !results.is_empty() && results.iter().all(|(_, r)| r.is_err()) {
                fail!(stderr, EXIT_GENERATION, "error: every concept failed");
            }
            EXIT_OK
        }
        Command::Stats { input, out } => {
            let text = match fs::read_to_string(&input) {
                Ok(t) => t,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {}: {e}", input.display()),
            };
            let stats = match stats::CorpusStats::from_batch_tsv(&text) {
                Ok(s) => s,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {}: {e}", input.display()),
            };
            if let Err(e) = with_output(&out, stdout, |w| write!(w, "{stats}")) {
                fail!(stderr, EXIT_LOAD, "error: {e}");
            }
            EXIT_OK
        }
        Command::Ambiguities { inputs, out } => {
            let loaded = match Loaded::load(&inputs) {
                Ok(l) => l,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {e}"),
            };
            let found = match loaded.anchors.detect_ambiguities(&loaded.graph, &loaded.ontology) {
                Ok(f) => f,
                Err(e) => fail!(stderr, EXIT_GENERATION, "error: {e}"),
            };
            let written = with_output(&out, stdout, |w| {
                writeln!(w, "concept_id\tlabel\tpictograms")?;
                for (id, picts) in &found {
                    let label = loaded.graph.concept(*id).map(|c| c.label.as_str()).unwrap_or("");
                    let picts: Vec<&str> = picts.iter().map(String::as_str).collect();
                    writeln!(w, "{id}\t{label}\t{}", picts.join(","))?;
                }
                Ok(())
            });
            if let Err(e) = written {
                fail!(stderr, EXIT_LOAD, "error: {e}");
            }
            EXIT_OK
        }
        Command::ExportReview {
            inputs,
            corpus,
            sample,
            seed,
            out,
        } => {
            let loaded = match Loaded::load(&inputs) {
                Ok(l) => l,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {e}"),
            };
            let ids = match read_corpus(&corpus) {
                Ok(ids) => ids,
                Err(e) => fail!(stderr, EXIT_LOAD, "error: {e}"),
            };
            let chosen = match sample {
                Some(n) => review::sample(&ids, n, seed),
                None => ids,
            };
            let engine = loaded.engine();
            let mut rows = Vec::with_capacity(chosen.len());
            for id in chosen {
                match review::review_row(&engine, id) {
                    Ok(r) => rows.push(r),
                    Err(Error::ConceptNotFound(c)) => {
                        fail!(stderr, EXIT_UNKNOWN_CONCEPT, "error: concept {c} not found")
                    }
                    Err(e) => fail!(stderr, EXIT_GENERATION, "error: concept {id}: {e}"),
                }
            }
            let written = with_output(&out, stdout, |w| {
                writeln!(w, "{}", review::REVIEW_HEADER)?;
                for r in &rows {
                    writeln!(w, "{}", r.tsv())?;
                }
                Ok(())
            });
            if let Err(e) = written {
                fail!(stderr, EXIT_LOAD, "error: {e}");
            }
            EXIT_OK
        }
    }
}
