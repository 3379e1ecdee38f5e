//! Command-line front end: word normalization, polyhedron construction and
//! export, factorization labeling, cross-term inventories, the bundled
//! figure checks, and the 7-sphere report.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.
//! Artifact output is deterministic for fixed inputs; timings go to stderr.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use fcpoly_core::cw::{cross_term_level, cw_decompose, load_spec};
use fcpoly_core::factorization::{labeled_polytope_json, TargetMap};
use fcpoly_core::polytope::{
    euler_boundary, export_complex, f_vector, fc_polytope_with_limit, permutohedron_with_limit,
    ExportFormat, DEFAULT_MAX_N,
};
use fcpoly_core::whitehead::{expr_to_json, s7_example};
use fcpoly_core::word::{Bidegree, LetterKind, OpWord};
use std::path::PathBuf;
use std::time::Instant;

const FIG3_GOLDEN: &str = include_str!("../../../figures/fig3.json");
const FIG4_GOLDEN: &str = include_str!("../../../figures/fig4.json");

#[derive(Parser)]
#[command(name = "fcpoly", version, about = "face-codegeneracy polyhedra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceArg {
    /// Source bidegree "cosimp,simp" the word acts from.
    #[arg(long, value_parser = parse_bidegree)]
    source: Bidegree,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a word to its normal form (canonical face/codegeneracy
    /// factorization, or the degeneracies-then-faces form for a purely
    /// simplicial word).
    Normalize {
        /// Word in compact syntax, e.g. "s^0 d_0 s^1 d_1".
        word: String,
        #[command(flatten)]
        source: SourceArg,
    },
    /// Build a permutohedron or face-codegeneracy polyhedron and export it.
    Polytope {
        /// Number of letters.
        #[arg(long = "N")]
        n_letters: u32,
        /// Codegeneracy count of the quotient; omit for the permutohedron.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: ExportFormat,
        /// Also print the boundary f-vector and Euler characteristic.
        #[arg(long)]
        summary: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the factorizations of a composite map and emit its labeled
    /// polyhedron as JSON.
    Factorize {
        /// The composite, e.g. "d_0 d_1 s^0 s^1".
        psi: String,
        #[command(flatten)]
        source: SourceArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Level inventories of CW and cross-term bases from a spec file.
    Crossterms {
        /// JSON or TOML spec file.
        #[arg(long)]
        spec: PathBuf,
        /// Cross-term level "n,r" to tabulate.
        #[arg(long, value_parser = parse_pair)]
        level: Option<(u32, u32)>,
        /// CW level to decompose.
        #[arg(long)]
        cw_level: Option<u32>,
    },
    /// Recompute the bundled labeled polyhedra and compare against the
    /// golden corpus.
    CheckFigures {
        /// Directory holding fig3.json and fig4.json; defaults to the
        /// embedded corpus.
        #[arg(long)]
        figures_dir: Option<PathBuf>,
    },
    /// Bookkeeping report for the 7-sphere computation.
    S7Report {
        #[arg(long)]
        json: bool,
    },
}

fn parse_bidegree(text: &str) -> Result<Bidegree, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"cosimp,simp\", got {text:?}"));
    }
    let cosimp = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let simp = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Bidegree::new(cosimp, simp))
}

fn parse_pair(text: &str) -> Result<(u32, u32), String> {
    let b = parse_bidegree(text)?;
    Ok((b.cosimp, b.simp))
}

fn parse_format(text: &str) -> Result<ExportFormat, String> {
    match text {
        "json" => Ok(ExportFormat::Json),
        "dot" => Ok(ExportFormat::Dot),
        "off" => Ok(ExportFormat::Off),
        other => Err(format!("unknown format {other:?} (json|dot|off)")),
    }
}

fn max_n() -> anyhow::Result<u32> {
    match std::env::var("FCPOLY_MAX_N") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .with_context(|| format!("FCPOLY_MAX_N={v:?} is not an integer")),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

/// Outcome of one invocation: named check results, emitted files, and
/// per-stage wall times.
#[derive(Default)]
struct RunReport {
    checks: Vec<(String, bool)>,
    artifacts: Vec<PathBuf>,
    timings: Vec<(String, std::time::Duration)>,
}

impl RunReport {
    fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push((name.into(), pass));
    }

    fn all_passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn emit(out: &Option<PathBuf>, content: &str, report: &mut RunReport) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .with_context(|| format!("writing {}", path.display()))?;
            report.artifacts.push(path.clone());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            for (name, duration) in &report.timings {
                eprintln!("{name}: {duration:?}");
            }
            for path in &report.artifacts {
                eprintln!("wrote {}", path.display());
            }
            if report.all_passed() {
                std::process::exit(0);
            }
            std::process::exit(1);
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<RunReport> {
    let mut report = RunReport::default();
    let started = Instant::now();
    match cli.command {
        Command::Normalize { word, source } => {
            let word = OpWord::parse(&word, source.source)?;
            word.validate()?;
            let simplicial = word.letters.iter().all(|l| l.kind.is_simplicial());
            let has_degen = word.letters.iter().any(|l| l.kind == LetterKind::SimpDegen);
            if simplicial && has_degen {
                println!("{}", word.simp_normalize()?);
            } else {
                println!("{}", word.normalize()?);
            }
        }
        Command::Polytope { n_letters, n, format, summary, out } => {
            let limit = max_n()?;
            let complex = match n {
                Some(n) => fc_polytope_with_limit(n_letters, n, limit)?,
                None => permutohedron_with_limit(n_letters, limit)?,
            };
            report.timings.push(("build".into(), started.elapsed()));
            let content = export_complex(&complex, format)?;
            emit(&out, &content, &mut report)?;
            if summary {
                println!("f-vector (boundary): {:?}", f_vector(&complex, false));
                if complex.n_codegens >= 1 {
                    println!("euler (boundary): {}", euler_boundary(&complex)?);
                }
            }
        }
        Command::Factorize { psi, source, out } => {
            let word = OpWord::parse(&psi, source.source)?;
            let target = TargetMap::from_word(&word)?;
            let json = labeled_polytope_json(&target)?;
            report.timings.push(("factorize".into(), started.elapsed()));
            emit(&out, &json, &mut report)?;
        }
        Command::Crossterms { spec, level, cw_level } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let (cw, cross) = load_spec(&text)?;
            if let Some(level) = cw_level {
                let inventory = cw_decompose(level, &cw);
                println!("cw level {level}:");
                for (degree, name) in inventory.iter() {
                    println!("  deg {degree}: {name}");
                }
            }
            if let Some((n, r)) = level {
                let inventory = cross_term_level(n, r, &cross);
                println!("cross-term level ({n},{r}):");
                for (degree, name) in inventory.iter() {
                    println!("  deg {degree}: {name}");
                }
            }
            if cw_level.is_none() && level.is_none() {
                return Err(anyhow!("pass --cw-level and/or --level n,r"));
            }
        }
        Command::CheckFigures { figures_dir } => {
            let cases = [
                ("fig3.json", "d_0 d_1 s^0 s^1", Bidegree::new(2, 2), FIG3_GOLDEN),
                ("fig4.json", "d_0 d_1 d_2 s^0", Bidegree::new(1, 3), FIG4_GOLDEN),
            ];
            for (file, text, source, embedded) in cases {
                let golden = match &figures_dir {
                    Some(dir) => std::fs::read_to_string(dir.join(file))
                        .with_context(|| format!("reading {}", dir.join(file).display()))?,
                    None => embedded.to_string(),
                };
                let word = OpWord::parse(text, source)?;
                let computed = labeled_polytope_json(&TargetMap::from_word(&word)?)?;
                let pass = computed == golden;
                if !pass {
                    print_diff(file, &golden, &computed);
                }
                println!("{file} ({text}): {}", if pass { "pass" } else { "FAIL" });
                report.check(file, pass);
            }
            report.timings.push(("check-figures".into(), started.elapsed()));
        }
        Command::S7Report { json } => {
            let s7 = s7_example()?;
            if json {
                let candidates: Vec<serde_json::Value> = s7
                    .candidates
                    .iter()
                    .map(|(psi, classes, doubled)| {
                        serde_json::json!({
                            "psi": psi.to_string(),
                            "classes": classes,
                            "doubled": doubled,
                        })
                    })
                    .collect();
                let doc = serde_json::json!({
                    "format_version": 1,
                    "c11": {"generator": s7.c11.0.name, "degree": s7.c11.0.degree,
                             "attaching": expr_to_json(&s7.c11.1)},
                    "c22": {"generator": s7.c22.0.name, "degree": s7.c22.0.degree,
                             "attaching": expr_to_json(&s7.c22.1),
                             "signs": s7.c22_signs()},
                    "e21_degree13_generators": s7.e21.count(13),
                    "candidates": candidates,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("cross-term ({},{}) generator {} of degree {}", 1, 1, s7.c11.0.name, s7.c11.0.degree);
                println!("  attaching: {}", s7.c11.1);
                println!("cross-term ({},{}) generator {} of degree {}", 2, 2, s7.c22.0.name, s7.c22.0.degree);
                println!("  attaching: {}", s7.c22.1);
                println!("  signs: {:?}", s7.c22_signs());
                println!("level (2,1) inventory: {} generators of degree 13", s7.e21.count(13));
                for (psi, classes, doubled) in &s7.candidates {
                    println!("candidate {psi}: {classes} classes, {doubled} doubled");
                }
            }
            report.check("s7-degree-13", s7.c11.0.degree == 13);
            report.check("s7-degree-19", s7.c22.0.degree == 19);
            report.check("s7-signs", s7.c22_signs() == vec![1, -1, 1]);
        }
    }
    Ok(report)
}

fn print_diff(file: &str, golden: &str, computed: &str) {
    let golden_lines: Vec<&str> = golden.lines().collect();
    let computed_lines: Vec<&str> = computed.lines().collect();
    let max = golden_lines.len().max(computed_lines.len());
    for i in 0..max {
        let g = golden_lines.get(i).copied().unwrap_or("<eof>");
        let c = computed_lines.get(i).copied().unwrap_or("<eof>");
        if g != c {
            println!("{file}:{}: golden   {g}", i + 1);
            println!("{file}:{}: computed {c}", i + 1);
        }
    }
}
