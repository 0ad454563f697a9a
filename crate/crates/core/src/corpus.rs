//! Batch analysis of dot-bracket records: per-pattern censuses on the
//! secondary structures and on their shapes, scatter data for 21 and 321,
//! and bracket-type statistics.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CorpusError;
use crate::pattern::{count_occurrences, EndheredPattern};
use crate::structure::{bracket_types_used, collapse_shape, parse_dotbracket, BracketAlphabet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub structure: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    Tsv,
    Jsonl,
}

impl std::str::FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(CorpusFormat::Tsv),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(format!(
                "unknown corpus format `{other}`, expected tsv or jsonl"
            )),
        }
    }
}

pub fn load_corpus(
    path: impl AsRef<Path>,
    format: CorpusFormat,
) -> Result<Vec<CorpusRecord>, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&text, format)
}

/// TSV lines are `id<TAB>structure` with an optional third `tool` column;
/// blank lines and lines starting with `#` are skipped. JSONL lines are
/// objects with `id`, `structure` and optional `tool`.
pub fn parse_corpus(text: &str, format: CorpusFormat) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| CorpusError::Malformed {
            line: line_no,
            reason,
        };
        let record = match format {
            CorpusFormat::Tsv => {
                let mut cols = line.split('\t');
                let id = cols.next().unwrap_or("").trim();
                let structure = cols
                    .next()
                    .ok_or_else(|| malformed("expected `id<TAB>structure`".into()))?
                    .trim();
                let tool = cols
                    .next()
                    .map(|t| t.trim().to_string())
                    .filter(|t| !t.is_empty());
                if cols.next().is_some() {
                    return Err(malformed("too many columns".into()));
                }
                CorpusRecord {
                    id: id.to_string(),
                    structure: structure.to_string(),
                    tool,
                }
            }
            CorpusFormat::Jsonl => {
                serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?
            }
        };
        if record.id.is_empty() {
            return Err(malformed("empty id".into()));
        }
        records.push(record);
    }
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for r in &records {
        let n = seen.entry(&r.id).or_default();
        *n += 1;
        if *n == 2 {
            log::warn!("duplicate id {} in corpus; keeping every copy", r.id);
        }
    }
    Ok(records)
}

/// Report labels: the id, with `#2`, `#3`, ... appended to repeats.
fn labels(records: &[CorpusRecord]) -> Vec<String> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    records
        .iter()
        .map(|r| {
            let n = seen.entry(&r.id).or_default();
            *n += 1;
            if *n == 1 {
                r.id.clone()
            } else {
                format!("{}#{}", r.id, n)
            }
        })
        .collect()
}

/// Counts for one successfully parsed record, indexed like the pattern list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordAnalysis {
    pub label: String,
    pub size: usize,
    pub shape_size: usize,
    pub counts: Vec<usize>,
    pub shape_counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub label: String,
    pub error: String,
}

/// Records containing a pattern at least once, in input order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternCensus {
    pub ids: Vec<String>,
    pub counts: Vec<usize>,
}

impl PatternCensus {
    pub fn contains(&self, id: &str) -> bool {
        self.ids.iter().any(|x| x == id)
    }

    fn to_json(&self) -> Value {
        let counts: serde_json::Map<String, Value> = self
            .ids
            .iter()
            .zip(&self.counts)
            .map(|(id, &c)| (id.clone(), json!(c)))
            .collect();
        json!({ "ids": self.ids, "counts": counts })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusReport {
    pub patterns: Vec<EndheredPattern>,
    pub records: Vec<RecordAnalysis>,
    pub failures: Vec<Failure>,
    pub secondary: Vec<PatternCensus>,
    pub shape: Vec<PatternCensus>,
}

/// 21, 12 and the six patterns of size 3.
pub fn default_patterns() -> Vec<EndheredPattern> {
    ["21", "12", "231", "312", "132", "321", "213", "123"]
        .iter()
        .map(|s| s.parse().expect("valid pattern"))
        .collect()
}

pub fn analyze(records: &[CorpusRecord], patterns: &[EndheredPattern]) -> CorpusReport {
    analyze_with(records, patterns, &BracketAlphabet::standard())
}

pub fn analyze_with(
    records: &[CorpusRecord],
    patterns: &[EndheredPattern],
    alphabet: &BracketAlphabet,
) -> CorpusReport {
    let labels = labels(records);
    let results: Vec<Result<RecordAnalysis, Failure>> = records
        .par_iter()
        .zip(labels.par_iter())
        .map(|(r, label)| {
            let s = parse_dotbracket(&r.structure, alphabet).map_err(|e| Failure {
                label: label.clone(),
                error: e.to_string(),
            })?;
            let m = s.to_matching();
            let shape = collapse_shape(&m);
            Ok(RecordAnalysis {
                label: label.clone(),
                size: m.size(),
                shape_size: shape.size(),
                counts: patterns.iter().map(|p| count_occurrences(&m, p)).collect(),
                shape_counts: patterns
                    .iter()
                    .map(|p| count_occurrences(&shape, p))
                    .collect(),
            })
        })
        .collect();

    let mut analyses = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(a) => analyses.push(a),
            Err(f) => {
                log::warn!("skipping {}: {}", f.label, f.error);
                failures.push(f);
            }
        }
    }
    let census = |pick: fn(&RecordAnalysis) -> &[usize]| -> Vec<PatternCensus> {
        (0..patterns.len())
            .map(|p| {
                let mut c = PatternCensus::default();
                for a in &analyses {
                    let k = pick(a)[p];
                    if k > 0 {
                        c.ids.push(a.label.clone());
                        c.counts.push(k);
                    }
                }
                c
            })
            .collect()
    };
    CorpusReport {
        patterns: patterns.to_vec(),
        secondary: census(|a| &a.counts),
        shape: census(|a| &a.shape_counts),
        records: analyses,
        failures,
    }
}

impl CorpusReport {
    /// Censuses for `pattern`, if it was analyzed: `(secondary, shape)`.
    pub fn census(&self, pattern: &str) -> Option<(&PatternCensus, &PatternCensus)> {
        let idx = self
            .patterns
            .iter()
            .position(|p| p.to_string() == pattern)?;
        Some((&self.secondary[idx], &self.shape[idx]))
    }

    pub fn to_json(&self) -> Value {
        let mut per_pattern = serde_json::Map::new();
        for (i, p) in self.patterns.iter().enumerate() {
            per_pattern.insert(
                p.to_string(),
                json!({
                    "secondary": self.secondary[i].to_json(),
                    "shape": self.shape[i].to_json(),
                }),
            );
        }
        json!({
            "records": self.records.len() + self.failures.len(),
            "failures": self.failures,
            "patterns": per_pattern,
        })
    }

    /// One line per pattern with the number of records and their ids, for
    /// secondary structures and for shapes.
    pub fn to_text(&self) -> String {
        let list = |c: &PatternCensus| format!("{} ({})", c.ids.len(), c.ids.join(", "));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} records, {} failures",
            self.records.len() + self.failures.len(),
            self.failures.len()
        );
        for (i, p) in self.patterns.iter().enumerate() {
            let _ = writeln!(
                out,
                "{p}\tsecondary: {}\tshape: {}",
                list(&self.secondary[i]),
                list(&self.shape[i])
            );
        }
        for f in &self.failures {
            let _ = writeln!(out, "failed\t{}\t{}", f.label, f.error);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScatterRow {
    pub id: String,
    pub size: usize,
    pub count_21: usize,
    pub count_321: usize,
}

/// Matching size against occurrences of 21 and 321, omitting records with
/// neither. Records that fail to parse are skipped.
pub fn scatter_data(records: &[CorpusRecord]) -> Vec<ScatterRow> {
    let pats: Vec<EndheredPattern> = ["21", "321"].iter().map(|s| s.parse().unwrap()).collect();
    analyze(records, &pats)
        .records
        .into_iter()
        .filter(|a| a.counts.iter().any(|&c| c > 0))
        .map(|a| ScatterRow {
            id: a.label,
            size: a.size,
            count_21: a.counts[0],
            count_321: a.counts[1],
        })
        .collect()
}

pub fn scatter_csv(rows: &[ScatterRow]) -> String {
    let mut out = String::from("id,size,count_21,count_321\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.id, r.size, r.count_21, r.count_321);
    }
    out
}

/// Records grouped by how many bracket types their raw string uses.
pub fn bracket_type_stats(
    records: &[CorpusRecord],
    alphabet: &BracketAlphabet,
) -> BTreeMap<usize, Vec<String>> {
    let mut out: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (r, label) in records.iter().zip(labels(records)) {
        out.entry(bracket_types_used(&r.structure, alphabet))
            .or_default()
            .push(label);
    }
    out
}
