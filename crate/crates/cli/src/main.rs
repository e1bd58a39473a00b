use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use polyplex::analyzer::{self, CertVerdict, ClassSpec, EnumerationBudget};
use polyplex::corpus;
use polyplex::expr::Expr;
use polyplex::freecat::{self, check_derivation, Derivation, EqConfig, Sign, Verdict};
use polyplex::polygraph::Polygraph;
use polyplex::polyplex::{automorphism_group, eval, Polyplex};
use polyplex::text::{parse_document, parse_expr, write_polygraph, ParseError};
use polyplex::{classify, validate};

const OK: u8 = 0;
const CLAIM_FAILS: u8 = 1;
const USAGE: u8 = 2;
const UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "polyplex", version, about = "Polygraphs, free ω-categories and polyplexes")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print polyplexes in canonical cell order.
    #[arg(long, global = true)]
    canonical: bool,
    /// Size bound for the brute-force equality oracle.
    #[arg(long, global = true, env = "POLYPLEX_ORACLE_BOUND")]
    oracle_bound: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Polygraph file (`cell` lines, optional `universal = ...`).
    #[arg(long, short = 'f', conflicts_with = "example")]
    file: Option<PathBuf>,
    /// Built-in corpus entry instead of a file.
    #[arg(long, short = 'x')]
    example: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum SignArg {
    Minus,
    Plus,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Expect {
    Equal,
    Unequal,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ExpectCert {
    Certified,
    Refuted,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value = "all")]
    class: String,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    #[arg(long, default_value_t = 6)]
    max_cells: usize,
    #[arg(long)]
    max_top_cells: Option<usize>,
    #[arg(long)]
    max_expression_depth: Option<usize>,
    /// Bound on codimension-one cells in the source plus target of a plex.
    #[arg(long)]
    max_boundary_length: Option<usize>,
    /// Generate plexes of dimension 3 and up with identity source and target.
    #[arg(long)]
    unital: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every cell is well-formed.
    Validate(Input),
    /// Report class membership flags.
    Classify(Input),
    /// Decide equality of two arrows.
    Eq {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Print the k-source or k-target of an arrow.
    Boundary {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, short)]
        k: usize,
        #[arg(long, value_enum, default_value = "minus")]
        sign: SignArg,
    },
    /// Print the smallest sub-polygraph generating an arrow.
    Support {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        expr: Option<String>,
    },
    /// Evaluate an arrow to its labeled polyplex.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        expr: Option<String>,
    },
    /// Automorphism group of the polyplex of an arrow.
    Autgroup {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        expr: Option<String>,
    },
    /// Enumerate plexes or polyplexes of a class within a budget.
    Enumerate {
        #[command(flatten)]
        budget: BudgetArgs,
        /// Only plexes, without composites of the top dimension.
        #[arg(long)]
        plexes: bool,
        /// Print only counts per dimension.
        #[arg(long)]
        count: bool,
    },
    /// Certify a class good up to a budget, or refute it.
    Certify {
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum)]
        expect: Option<ExpectCert>,
    },
    /// Run a named demonstration (`--list` to see them).
    Example {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Check a derivation file (`start <expr>` then `step <axiom> <pos> <expr>` lines).
    CheckDerivation {
        #[command(flatten)]
        input: Input,
        #[arg(long, short)]
        derivation: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: USAGE, message: message.into() }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_failure(origin: &str, e: ParseError) -> Failure {
    Failure::usage(format!("{origin}:{}:{}: {}", e.line, e.column, e.message))
}

struct Loaded {
    pg: Arc<Polygraph>,
    universal: Option<Expr>,
}

fn load(input: &Input) -> Result<Loaded, Failure> {
    match (&input.file, &input.example) {
        (Some(path), _) => {
            let doc = parse_document(&read(path)?).map_err(|e| parse_failure(&path.display().to_string(), e))?;
            Ok(Loaded { pg: Arc::new(doc.polygraph), universal: doc.universal })
        }
        (None, Some(name)) => {
            let ex = corpus::by_name(name).ok_or_else(|| {
                Failure::usage(format!("unknown example `{name}` (known: {})", corpus::NAMES.join(", ")))
            })?;
            Ok(Loaded { pg: ex.pg, universal: Some(ex.expr) })
        }
        (None, None) => Err(Failure::usage("one of --file or --example is required")),
    }
}

fn expr(loaded: &Loaded, src: Option<&str>) -> Result<Expr, Failure> {
    match src {
        Some(s) => parse_expr(&loaded.pg, s).map_err(|e| parse_failure("<expr>", e)),
        None => loaded.universal.clone().ok_or_else(|| Failure::usage("no --expr given and no universal line")),
    }
}

fn engine(e: impl std::fmt::Display) -> Failure {
    Failure::usage(e.to_string())
}

fn budget(b: &BudgetArgs) -> Result<(ClassSpec, EnumerationBudget), Failure> {
    let class: ClassSpec = b.class.parse().map_err(Failure::usage)?;
    let mut budget = EnumerationBudget::new(b.max_dim, b.max_cells);
    if let Some(t) = b.max_top_cells {
        budget.max_top_cells = t;
    }
    if let Some(d) = b.max_expression_depth {
        budget.max_expression_depth = d;
    }
    budget.max_boundary_length = b.max_boundary_length;
    budget.unital_above_dim2 = b.unital;
    Ok((class, budget))
}

fn show(cli: &Cli, p: &Polyplex) -> String {
    if cli.canonical {
        p.canonical().0.to_text()
    } else {
        p.to_text()
    }
}

fn run(cli: &Cli) -> Outcome {
    let cfg = EqConfig { oracle_bound: cli.oracle_bound, ..EqConfig::default() };
    match &cli.command {
        Command::Validate(input) => {
            let l = load(input)?;
            let report = validate(&l.pg);
            if cli.json {
                println!("{}", json!({ "valid": report.is_valid(), "violations": report.violations }));
            } else if report.is_valid() {
                println!("valid ({} cells)", l.pg.len());
            } else {
                for v in &report.violations {
                    println!("{}: {}", v.cell, v.message);
                }
            }
            Ok(if report.is_valid() { OK } else { CLAIM_FAILS })
        }
        Command::Classify(input) => {
            let l = load(input)?;
            let report = validate(&l.pg);
            if !report.is_valid() {
                return Err(Failure { code: CLAIM_FAILS, message: "polygraph is not valid".into() });
            }
            let f = classify(&l.pg);
            if cli.json {
                println!("{}", serde_json::to_string(&f).expect("flags serialize"));
            } else {
                for (name, v) in [
                    ("positive", f.positive),
                    ("source-positive", f.source_positive),
                    ("target-positive", f.target_positive),
                    ("many-to-one", f.many_to_one),
                    ("globular", f.globular),
                ] {
                    println!("{name}: {}", if v { "yes" } else { "no" });
                }
            }
            Ok(OK)
        }
        Command::Eq { input, lhs, rhs, expect } => {
            let l = load(input)?;
            let a = expr(&l, Some(lhs))?;
            let b = expr(&l, Some(rhs))?;
            let v = freecat::arrows_equal_with(&l.pg, &a, &b, &cfg).map_err(engine)?;
            if cli.json {
                println!("{}", json!({ "verdict": v }));
            } else {
                println!("{v}");
            }
            Ok(match (v, expect) {
                (Verdict::Unknown, _) => UNKNOWN,
                (Verdict::Equal, Some(Expect::Unequal)) | (Verdict::Unequal, Some(Expect::Equal)) => CLAIM_FAILS,
                _ => OK,
            })
        }
        Command::Boundary { input, expr: e, k, sign } => {
            let l = load(input)?;
            let e = expr(&l, e.as_deref())?;
            let sign = match sign {
                SignArg::Minus => Sign::Minus,
                SignArg::Plus => Sign::Plus,
            };
            let b = freecat::boundary(&l.pg, &e, *k, sign).map_err(engine)?;
            let text = b.display(&l.pg).to_string();
            if cli.json {
                println!("{}", json!({ "boundary": text }));
            } else {
                println!("{text}");
            }
            Ok(OK)
        }
        Command::Support { input, expr: e } => {
            let l = load(input)?;
            let e = expr(&l, e.as_deref())?;
            let (sub, incl) = freecat::support(&l.pg, &e).map_err(engine)?;
            let text = if cli.canonical {
                let back = |c: polyplex::CellId| {
                    polyplex::CellId(incl.iter().position(|&x| x == c).expect("support contains the arrow") as u32)
                };
                Polyplex::new(Arc::new(sub.clone()), e.map_cells(&back))
                    .map(|p| p.canonical().0.to_text())
                    .unwrap_or_else(|_| write_polygraph(&sub))
            } else {
                write_polygraph(&sub)
            };
            if cli.json {
                println!("{}", json!({ "cells": sub.len(), "polygraph": text }));
            } else {
                print!("{text}");
            }
            Ok(OK)
        }
        Command::Eval { input, expr: e } => {
            let l = load(input)?;
            let e = expr(&l, e.as_deref())?;
            let mut ld = eval(&l.pg, &e).map_err(engine)?;
            if cli.canonical {
                let (plex, renum) = ld.plex.canonical();
                let mut map = vec![polyplex::CellId(0); renum.len()];
                for (old, new) in renum.iter().enumerate() {
                    map[new.index()] = ld.labeling.map[old];
                }
                ld.labeling = polyplex::PolygraphMorphism::unchecked(plex.pg().clone(), l.pg.clone(), map);
                ld.plex = plex;
            }
            if cli.json {
                println!("{}", json!({ "diagram": ld.to_text(), "unique": ld.unique }));
            } else {
                print!("{}", ld.to_text());
                if !ld.unique {
                    println!("# representation not guaranteed unique");
                }
            }
            Ok(OK)
        }
        Command::Autgroup { input, expr: e } => {
            let l = load(input)?;
            let e = expr(&l, e.as_deref())?;
            let ld = eval(&l.pg, &e).map_err(engine)?;
            let g = automorphism_group(&ld.plex).map_err(engine)?;
            let pg = ld.plex.pg();
            let perms: Vec<Vec<(String, String)>> = g
                .elements
                .iter()
                .map(|m| {
                    pg.ids()
                        .filter(|&c| m.apply(c) != c)
                        .map(|c| (pg.name(c).to_string(), pg.name(m.apply(c)).to_string()))
                        .collect()
                })
                .collect();
            if cli.json {
                println!("{}", json!({ "order": g.order(), "unresolved": g.unresolved.len(), "elements": perms }));
            } else {
                println!("order {}", g.order());
                for p in perms.iter().filter(|p| !p.is_empty()) {
                    let moved: Vec<String> = p.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
                    println!("  {}", moved.join(", "));
                }
                if !g.unresolved.is_empty() {
                    println!("unresolved {}", g.unresolved.len());
                }
            }
            Ok(if g.unresolved.is_empty() { OK } else { UNKNOWN })
        }
        Command::Enumerate { budget: b, plexes, count } => {
            let (class, budget) = budget(b)?;
            let (list, quarantined) = if *plexes {
                (analyzer::enumerate_plexes(&class, &budget), 0)
            } else {
                let en = analyzer::enumerate(&class, &budget);
                let q = en.quarantined.len();
                (en.polyplexes, q)
            };
            let mut by_dim = Vec::new();
            for p in &list {
                if by_dim.len() <= p.dim() {
                    by_dim.resize(p.dim() + 1, 0);
                }
                by_dim[p.dim()] += 1;
            }
            if cli.json {
                let items: Vec<String> = list.iter().map(|p| p.canonical().0.to_text()).collect();
                println!(
                    "{}",
                    json!({ "class": class.to_string(), "budget": budget, "counts": by_dim, "quarantined": quarantined, "items": items })
                );
            } else {
                println!("# {} polyplexes by dimension: {:?}", list.len(), by_dim);
                if !*count {
                    for p in &list {
                        println!("{}", show(cli, p));
                    }
                }
                if quarantined > 0 {
                    println!("# {quarantined} quarantined");
                }
            }
            Ok(if quarantined > 0 { UNKNOWN } else { OK })
        }
        Command::Certify { budget: b, expect } => {
            let (class, budget) = budget(b)?;
            let rep = analyzer::certify_good(&class, &budget);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            } else {
                println!("{}", rep.verdict);
                println!("class {}; polyplexes by dimension {:?}", rep.class, rep.polyplexes_by_dim);
                if let Some(w) = rep.witnesses.first() {
                    let moved: Vec<String> = w.moved.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
                    println!("witness (automorphism group of order {}: {}):", w.group_order, moved.join(", "));
                    print!("{}", w.polyplex);
                }
                if rep.condition_c.checked > 0 {
                    println!(
                        "associativity of gluing checked on {} triples, {} failures",
                        rep.condition_c.checked,
                        rep.condition_c.failures.len()
                    );
                }
            }
            Ok(match (rep.verdict, expect) {
                (CertVerdict::Inconclusive, _) => UNKNOWN,
                (CertVerdict::Refuted, Some(ExpectCert::Certified))
                | (CertVerdict::CertifiedGoodUpToBudget, Some(ExpectCert::Refuted)) => CLAIM_FAILS,
                _ => OK,
            })
        }
        Command::Example { name, list } => {
            if *list || name.is_none() {
                for n in analyzer::EXAMPLE_NAMES {
                    println!("{n}");
                }
                return Ok(if *list { OK } else { USAGE });
            }
            let rep = analyzer::run_named_example(name.as_deref().unwrap_or_default()).map_err(Failure::usage)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            } else {
                println!("{}", rep.name);
                for c in &rep.claims {
                    let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
                    println!("  {}: {}{detail}", if c.holds { "yes" } else { "NO" }, c.claim);
                }
            }
            Ok(if rep.all_hold() { OK } else { CLAIM_FAILS })
        }
        Command::CheckDerivation { input, derivation } => {
            let l = load(input)?;
            let text = read(derivation)?;
            let d = Derivation::parse(&l.pg, &text).map_err(|e| parse_failure(&derivation.display().to_string(), e))?;
            match check_derivation(&l.pg, &d) {
                Ok(()) => {
                    if cli.json {
                        println!("{}", json!({ "valid": true, "steps": d.steps.len() }));
                    } else {
                        println!("valid ({} steps)", d.steps.len());
                    }
                    Ok(OK)
                }
                Err(e) => {
                    if cli.json {
                        println!("{}", json!({ "valid": false, "step": e.index, "message": e.message }));
                    } else {
                        println!("invalid: {e}");
                    }
                    Ok(CLAIM_FAILS)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
