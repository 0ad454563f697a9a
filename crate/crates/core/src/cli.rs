//! Command-line front end. `run` takes the argument list and writers so the
//! binary, the tests and the acceptance suite all drive the same code.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asymptotics::poisson_half_pmf;
use crate::census::{BruteForce, MonteCarlo};
use crate::corpus::{self, CorpusFormat};
use crate::enumeration::table_for_pattern;
use crate::error::CountError;
use crate::matching::Matching;
use crate::pattern::{find_occurrences, EndheredPattern};
use crate::structure::{
    collapse_shape, parse_dotbracket, serialize_dotbracket, validate_waterman_ponty,
    BracketAlphabet, SecondaryStructure,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ENDHERED_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "endhered",
    version,
    about = "Endhered patterns in perfect matchings and RNA structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Tsv,
    Jsonl,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Matching as space-separated arcs, e.g. "1-3 2-4"
    #[arg(long)]
    matching: Option<String>,
    /// Dot-bracket structure; unpaired positions are dropped
    #[arg(long)]
    dotbracket: Option<String>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Letter bracket pairs open with the uppercase character (Aa, Bb, ...)
    #[arg(long)]
    uppercase_openers: bool,
}

impl Common {
    fn alphabet(&self) -> BracketAlphabet {
        if self.uppercase_openers {
            BracketAlphabet::uppercase_openers()
        } else {
            BracketAlphabet::standard()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact distribution table from the formulas
    Enumerate {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Occurrences of a pattern in one matching
    Count {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        common: Common,
    },
    /// Left or right endhered twist
    Twist {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        side: Side,
        #[command(flatten)]
        common: Common,
    },
    /// Collapse to the RNA shape
    Collapse {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Waterman-Ponty checks on a dot-bracket structure
    Validate {
        #[arg(long)]
        dotbracket: String,
        #[arg(long, default_value_t = 0)]
        theta: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Censuses over a corpus file
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Brute force against the exact tables
    Verify {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        /// Patterns to check; defaults to every pattern with a table
        #[arg(long)]
        pattern: Vec<String>,
        /// Lift the matching-size guard of the exhaustive scan
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo occurrence law against Poisson(1/2)
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "21")]
        pattern: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct CorpusArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Tsv)]
    corpus_format: InputFormat,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// Per-pattern lists for structures and shapes
    Analyze {
        #[command(flatten)]
        args: CorpusArgs,
        /// Patterns to census; defaults to 21, 12 and all of size 3
        #[arg(long)]
        pattern: Vec<String>,
    },
    /// Size against counts of 21 and 321
    Scatter {
        #[command(flatten)]
        args: CorpusArgs,
    },
    /// Records grouped by number of bracket types used
    Brackets {
        #[command(flatten)]
        args: CorpusArgs,
    },
}

/// An error after argument parsing; exit status 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Runs the command line `args` (including the program name). Returns the
/// exit status: 0 on success, 1 on a domain error, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    configure_threads();
    match dispatch(cli.command) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// Sizes the global worker pool from `ENDHERED_THREADS` if it is set.
pub fn configure_threads() {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // fails harmlessly if the pool was already built
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        _ => log::warn!("ignoring {THREADS_ENV}={raw:?}, expected a positive integer"),
    }
}

fn pattern(s: &str) -> Result<EndheredPattern, Failure> {
    Ok(s.parse::<EndheredPattern>()?)
}

fn read_matching(input: &Input, alphabet: &BracketAlphabet) -> Result<Matching, Failure> {
    match (&input.matching, &input.dotbracket) {
        (Some(m), _) => Ok(m.parse::<Matching>()?),
        (None, Some(d)) => Ok(parse_dotbracket(d, alphabet)?.to_matching()),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn json_line(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Enumerate {
            pattern: p,
            max_n,
            common,
        } => {
            if max_n == 0 {
                return Err(Failure("--max-n must be at least 1".into()));
            }
            let table = table_for_pattern(&pattern(&p)?, max_n)?;
            Ok(match common.format {
                Format::Text => table.to_text(),
                Format::Csv => table.to_csv(),
                Format::Json => json_line(table.to_json()),
            })
        }
        Command::Count {
            input,
            pattern: p,
            common,
        } => {
            let m = read_matching(&input, &common.alphabet())?;
            let pat = pattern(&p)?;
            let occ = find_occurrences(&m, &pat);
            Ok(match common.format {
                Format::Text => format!("{}\n", occ.len()),
                Format::Csv => format!("pattern,size,count\n{pat},{},{}\n", m.size(), occ.len()),
                Format::Json => json_line(json!({
                    "pattern": pat.to_string(),
                    "size": m.size(),
                    "count": occ.len(),
                    "occurrences": occ.iter().map(|o| [o.start, o.end]).collect::<Vec<_>>(),
                })),
            })
        }
        Command::Twist {
            input,
            side,
            common,
        } => {
            let m = read_matching(&input, &common.alphabet())?;
            let t = match side {
                Side::Left => m.left_twist(),
                Side::Right => m.right_twist(),
            };
            let side = match side {
                Side::Left => "left",
                Side::Right => "right",
            };
            Ok(match common.format {
                Format::Text => format!("{t}\n"),
                Format::Csv => format!("side,input,output\n{side},{m},{t}\n"),
                Format::Json => json_line(
                    json!({ "side": side, "input": m.to_string(), "output": t.to_string() }),
                ),
            })
        }
        Command::Collapse { input, common } => {
            let alphabet = common.alphabet();
            let m = read_matching(&input, &alphabet)?;
            let shape = collapse_shape(&m);
            let text = serialize_dotbracket(&SecondaryStructure::from_matching(&shape), &alphabet)?;
            Ok(match common.format {
                Format::Text => format!("{text}\n"),
                Format::Csv => format!(
                    "size,shape_size,shape\n{},{},{text}\n",
                    m.size(),
                    shape.size()
                ),
                Format::Json => json_line(json!({
                    "size": m.size(),
                    "shape_size": shape.size(),
                    "shape": text,
                    "matching": shape.to_string(),
                })),
            })
        }
        Command::Validate {
            dotbracket,
            theta,
            common,
        } => {
            let s = parse_dotbracket(&dotbracket, &common.alphabet())?;
            let report = validate_waterman_ponty(&s, theta);
            Ok(match common.format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report)?;
                    v["valid"] = json!(report.is_valid());
                    json_line(v)
                }
                Format::Text | Format::Csv => {
                    let mut rows = Vec::new();
                    for (a, b) in &report.monogamy_violations {
                        rows.push(format!("monogamy,{}-{},{}-{}", a.0, a.1, b.0, b.1));
                    }
                    for a in &report.distance_violations {
                        rows.push(format!("distance,{}-{},", a.0, a.1));
                    }
                    for (a, b) in &report.pseudoknot_violations {
                        rows.push(format!("pseudoknot,{}-{},{}-{}", a.0, a.1, b.0, b.1));
                    }
                    if common.format == Format::Csv {
                        let mut s = String::from("condition,pair,other\n");
                        for r in rows {
                            s.push_str(&r);
                            s.push('\n');
                        }
                        s
                    } else if rows.is_empty() {
                        format!("valid for theta={theta}\n")
                    } else {
                        let mut s = format!("{} violations for theta={theta}\n", rows.len());
                        for r in rows {
                            s.push_str(&r.replace(',', " "));
                            s.push('\n');
                        }
                        s
                    }
                }
            })
        }
        Command::Corpus { action } => corpus_command(action),
        Command::Verify {
            max_n,
            pattern: pats,
            allow_large,
            common,
        } => verify(max_n, &pats, allow_large, common.format),
        Command::Sample {
            n,
            samples,
            seed,
            pattern: p,
            common,
        } => sample(n, samples, seed, &pattern(&p)?, common.format),
    }
}

fn corpus_command(action: CorpusAction) -> Outcome {
    let (args, patterns) = match &action {
        CorpusAction::Analyze { args, pattern } => (args, pattern.clone()),
        CorpusAction::Scatter { args } | CorpusAction::Brackets { args } => (args, Vec::new()),
    };
    let format = match args.corpus_format {
        InputFormat::Tsv => CorpusFormat::Tsv,
        InputFormat::Jsonl => CorpusFormat::Jsonl,
    };
    let records = corpus::load_corpus(&args.input, format)?;
    let alphabet = args.common.alphabet();
    let out_format = args.common.format;
    match action {
        CorpusAction::Analyze { .. } => {
            let pats = if patterns.is_empty() {
                corpus::default_patterns()
            } else {
                patterns
                    .iter()
                    .map(|p| pattern(p))
                    .collect::<Result<_, _>>()?
            };
            let report = corpus::analyze_with(&records, &pats, &alphabet);
            Ok(match out_format {
                Format::Text => report.to_text(),
                Format::Json => json_line(report.to_json()),
                Format::Csv => {
                    let mut s = String::from("pattern,kind,id,count\n");
                    for (i, p) in report.patterns.iter().enumerate() {
                        for (kind, c) in [
                            ("secondary", &report.secondary[i]),
                            ("shape", &report.shape[i]),
                        ] {
                            for (id, k) in c.ids.iter().zip(&c.counts) {
                                s.push_str(&format!("{p},{kind},{id},{k}\n"));
                            }
                        }
                    }
                    s
                }
            })
        }
        CorpusAction::Scatter { .. } => {
            let rows = corpus::scatter_data(&records);
            Ok(match out_format {
                Format::Json => json_line(json!(rows)),
                Format::Text | Format::Csv => corpus::scatter_csv(&rows),
            })
        }
        CorpusAction::Brackets { .. } => {
            let stats = corpus::bracket_type_stats(&records, &alphabet);
            Ok(match out_format {
                Format::Json => {
                    let obj: serde_json::Map<String, Value> = stats
                        .iter()
                        .map(|(k, ids)| (k.to_string(), json!(ids)))
                        .collect();
                    json_line(Value::Object(obj))
                }
                Format::Csv => {
                    let mut s = String::from("types,id\n");
                    for (k, ids) in &stats {
                        for id in ids {
                            s.push_str(&format!("{k},{id}\n"));
                        }
                    }
                    s
                }
                Format::Text => stats
                    .iter()
                    .map(|(k, ids)| format!("{k}\t{}\t{}\n", ids.len(), ids.join(", ")))
                    .collect(),
            })
        }
    }
}

const TABLE_PATTERNS: [&str; 8] = ["21", "12", "123", "321", "132", "213", "231", "312"];

fn verify(max_n: usize, pats: &[String], allow_large: bool, format: Format) -> Outcome {
    let guard = if allow_large {
        BruteForce::allow_large()
    } else {
        BruteForce::default()
    };
    // fail before scanning the smaller sizes
    if max_n > guard.max_n {
        return Err(CountError::SizeGuard {
            n: max_n,
            limit: guard.max_n,
        }
        .into());
    }
    let names: Vec<String> = if pats.is_empty() {
        TABLE_PATTERNS.iter().map(|s| s.to_string()).collect()
    } else {
        pats.to_vec()
    };
    let parsed: Vec<EndheredPattern> =
        names.iter().map(|p| pattern(p)).collect::<Result<_, _>>()?;
    let tables = parsed
        .iter()
        .map(|p| table_for_pattern(p, max_n.max(1)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut results = Vec::new();
    for n in 1..=max_n {
        let dists = guard.distributions(n, &parsed)?;
        for ((p, table), dist) in parsed.iter().zip(&tables).zip(dists) {
            let agrees = (0..n)
                .all(|k| table.get(n, k) == dist.get(&k).copied().unwrap_or(0).into())
                && dist.keys().all(|&k| k < n);
            results.push((p.to_string(), n, agrees));
        }
    }
    let all = results.iter().all(|r| r.2);
    let text = match format {
        Format::Json => json_line(json!({
            "max_n": max_n,
            "results": results.iter().map(|(p, n, a)| json!({"pattern": p, "n": n, "agrees": a})).collect::<Vec<_>>(),
            "all_agree": all,
        })),
        Format::Csv => {
            let mut s = String::from("pattern,n,agrees\n");
            for (p, n, a) in &results {
                s.push_str(&format!("{p},{n},{a}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (p, n, a) in &results {
                s.push_str(&format!(
                    "{p}\tn={n}\t{}\n",
                    if *a { "ok" } else { "MISMATCH" }
                ));
            }
            s.push_str(if all {
                "all agree\n"
            } else {
                "mismatches found\n"
            });
            s
        }
    };
    if all {
        Ok(text)
    } else {
        Err(Failure(format!(
            "brute force disagrees with the tables\n{text}"
        )))
    }
}

fn sample(n: usize, samples: usize, seed: u64, pat: &EndheredPattern, format: Format) -> Outcome {
    let mc = MonteCarlo::run(n, pat, samples, seed)?;
    let tv = mc.tv_distance(poisson_half_pmf);
    let freq = mc.frequencies();
    let top = freq.keys().next_back().copied().unwrap_or(0);
    let rows: Vec<(usize, f64, f64)> = (0..=top)
        .map(|k| (k, freq.get(&k).copied().unwrap_or(0.0), poisson_half_pmf(k)))
        .collect();
    Ok(match format {
        Format::Json => json_line(json!({
            "n": n,
            "samples": samples,
            "seed": seed,
            "pattern": pat.to_string(),
            "pmf": rows.iter().map(|&(k, e, p)| json!({"k": k, "empirical": e, "poisson": p})).collect::<Vec<_>>(),
            "tv_distance": tv,
        })),
        Format::Csv => {
            let mut s = String::from("k,empirical,poisson\n");
            for (k, e, p) in rows {
                s.push_str(&format!("{k},{e},{p}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "pattern {pat}, n={n}, {samples} samples, seed {seed}\n k  empirical   poisson\n"
            );
            for (k, e, p) in rows {
                s.push_str(&format!("{k:>2}  {e:.6}  {p:.6}\n"));
            }
            s.push_str(&format!("tv_distance {tv:.6}\n"));
            s
        }
    })
}
