//! `stereo` — query stereotype knowledge bases, check the structural laws,
//! verify the selection-stability theorems, and search for consequence
//! relations no stereotype system can produce.
//!
//! Exit codes are a stable contract:
//! 0 pass/ok · 1 any FAIL · 2 usage or load error · 3 no unique minimum ·
//! 4 NOT_APPLICABLE without a FAIL.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use stereo_core::check::{
    check_assumption_four, check_assumption_zero, check_eq2, check_klm, check_tree_structure,
    verify_theorem1, verify_theorem2, CheckError, CheckReport, KlmProperty, SweepLimits, Verdict,
};
use stereo_core::corpus;
use stereo_core::infer::{nm_consequences, nm_entails, InferenceError};
use stereo_core::kb::KnowledgeBase;
use stereo_core::logic::parse_formula;
use stereo_core::represent::search_nonrepresentable;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_NON_UNIQUE: u8 = 3;
const EXIT_NOT_APPLICABLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "stereo",
    version,
    about = "Finite-model workbench for stereotype-based nonmonotonic reasoning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct KbArg {
    /// Path to a knowledge base document, or `builtin:<name>` for a shipped
    /// demo (example1..example4, eq2-violation, tie).
    #[arg(long)]
    kb: String,
}

#[derive(Args)]
struct BudgetArgs {
    /// Elementary-step cap for exhaustive sweeps; defaults to the
    /// STEREO_BUDGET environment variable or 100000000.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Run sweeps whose estimated case count exceeds the budget anyway.
    #[arg(long)]
    override_scale_limit: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one inference step: facts in, chosen stereotype and consequences out.
    Infer {
        #[command(flatten)]
        kb: KbArg,
        /// The facts, as a formula over the base's atoms.
        #[arg(long)]
        given: String,
        /// Optional conclusion to test against the consequences.
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check structural laws: zero | eq2 | four | tree | klm:NAME | all.
    Check {
        #[command(flatten)]
        kb: KbArg,
        /// zero, eq2, four, tree, klm:reflexivity, klm:lle, klm:rw-and,
        /// klm:cut, klm:cautious-monotony, klm:cumulativity, klm:or, or all.
        #[arg(long)]
        property: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Verify a selection-stability theorem (1: shrinking, 2: unions).
    Verify {
        #[command(flatten)]
        kb: KbArg,
        #[arg(long)]
        theorem: u8,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Search a small space for cumulative selection functions that no
    /// stereotype set within the bound can realize.
    Search {
        /// World count (at most 4).
        #[arg(long)]
        worlds: usize,
        /// Largest candidate stereotype set; defaults to all nonempty subsets.
        #[arg(long)]
        max_stereotypes: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Worker threads; the output is identical for any count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Show the full distance comparison for one set of facts.
    Explain {
        #[command(flatten)]
        kb: KbArg,
        #[arg(long)]
        given: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Infer {
            kb,
            given,
            query,
            format,
        } => cmd_infer(&kb.kb, &given, query.as_deref(), format),
        Command::Check {
            kb,
            property,
            budget,
            format,
        } => cmd_check(&kb.kb, &property, &budget, format),
        Command::Verify {
            kb,
            theorem,
            budget,
            format,
        } => cmd_verify(&kb.kb, theorem, &budget, format),
        Command::Search {
            worlds,
            max_stereotypes,
            budget,
            workers,
            format,
        } => cmd_search(worlds, max_stereotypes, &budget, workers, format),
        Command::Explain { kb, given, format } => cmd_explain(&kb.kb, &given, format),
    };
    ExitCode::from(code)
}

fn fail(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {}", message);
    EXIT_ERROR
}

fn load_kb(reference: &str) -> Result<KnowledgeBase, u8> {
    if let Some(name) = reference.strip_prefix("builtin:") {
        return corpus::builtin(name).ok_or_else(|| {
            fail(format!(
                "no builtin `{}` (available: {})",
                name,
                corpus::builtin_names().join(", ")
            ))
        });
    }
    let text = fs::read_to_string(reference)
        .map_err(|e| fail(format!("cannot read `{}`: {}", reference, e)))?;
    KnowledgeBase::from_json(&text).map_err(fail)
}

fn resolve_limits(args: &BudgetArgs) -> SweepLimits {
    let env_budget = std::env::var("STEREO_BUDGET")
        .ok()
        .and_then(|v| v.parse::<u64>().ok());
    let mut limits = match args.budget.or(env_budget) {
        Some(budget) => SweepLimits::with_budget(budget),
        None => SweepLimits::default(),
    };
    limits.override_scale_limit = args.override_scale_limit;
    limits
}

fn cmd_infer(kb_ref: &str, given: &str, query: Option<&str>, format: Format) -> u8 {
    let kb = match load_kb(kb_ref) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    let space = kb.space();
    let given_formula = match parse_formula(given, space) {
        Ok(f) => f,
        Err(e) => return fail(format!("--given: {}", e)),
    };
    let query_formula = match query {
        None => None,
        Some(text) => match parse_formula(text, space) {
            Ok(f) => Some(f),
            Err(e) => return fail(format!("--query: {}", e)),
        },
    };
    let facts = space.models(&given_formula);
    let result = match nm_consequences(&kb, facts) {
        Ok(result) => result,
        Err(InferenceError::NoUniqueMinimum { tied }) => {
            eprintln!(
                "no unique minimum: co-minimal stereotypes {}",
                tied.join(", ")
            );
            return EXIT_NON_UNIQUE;
        }
        Err(e) => return fail(e),
    };
    let entailed = query_formula
        .as_ref()
        .map(|q| nm_entails(&kb, &given_formula, q).expect("selection already succeeded"));

    match format {
        Format::Json => {
            let mut doc = serde_json::to_value(result.report(&kb)).expect("serializable");
            if let (Some(q), Some(verdict)) = (query, entailed) {
                doc["query"] = json!({"formula": q, "entailed": verdict});
            }
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Text => {
            println!("F = {}", space.render_set(result.given));
            if result.distances.is_empty() {
                println!("distances: (empty information set, nothing to compare)");
            } else {
                println!("distances:");
                for (s, value) in result.distances.iter().enumerate() {
                    println!("  {:<12} {}", kb.stereotype(s).name(), value);
                }
            }
            match result.chosen {
                Some(s) => println!("chosen: {}", kb.stereotype(s).name()),
                None => println!("chosen: (none)"),
            }
            println!("F' = {}", space.render_set(result.consequences));
            println!(
                "consistent: {}",
                if result.consistent { "yes" } else { "no" }
            );
            if let (Some(q), Some(verdict)) = (query, entailed) {
                println!("query: {}", q);
                println!("entailed: {}", if verdict { "yes" } else { "no" });
            }
        }
    }
    EXIT_OK
}

fn aggregate_exit(reports: &[CheckReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.verdict == Verdict::NotApplicable) {
        EXIT_NOT_APPLICABLE
    } else {
        EXIT_OK
    }
}

fn emit_reports(reports: &[CheckReport], format: Format) {
    match format {
        Format::Json => {
            let docs: Vec<serde_json::Value> = reports.iter().map(CheckReport::to_json).collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&docs).expect("serializable")
            );
        }
        Format::Text => {
            for (i, report) in reports.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print!("{}", report.render_text());
            }
        }
    }
}

fn cmd_check(kb_ref: &str, property: &str, budget: &BudgetArgs, format: Format) -> u8 {
    let kb = match load_kb(kb_ref) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    let limits = resolve_limits(budget);
    let run = |property: &str| -> Result<CheckReport, String> {
        match property {
            "zero" => Ok(check_assumption_zero(&kb)),
            "eq2" => check_eq2(&kb, &limits).map_err(|e: CheckError| e.to_string()),
            "four" => check_assumption_four(&kb, &limits).map_err(|e| e.to_string()),
            "tree" => Ok(check_tree_structure(&kb)),
            other => {
                let name = other.strip_prefix("klm:").unwrap_or(other);
                let klm: KlmProperty = name.parse()?;
                check_klm(&kb, klm, &limits).map_err(|e| e.to_string())
            }
        }
    };
    let properties: Vec<String> = if property == "all" {
        let mut names = vec![
            "zero".to_string(),
            "eq2".to_string(),
            "four".to_string(),
            "tree".to_string(),
        ];
        names.extend(KlmProperty::ALL.iter().map(|p| format!("klm:{}", p.name())));
        names
    } else if ["zero", "eq2", "four", "tree"].contains(&property) || property.starts_with("klm:") {
        vec![property.to_string()]
    } else {
        return fail(format!(
            "unknown property `{}` (zero, eq2, four, tree, klm:<name>, all)",
            property
        ));
    };
    let mut reports = Vec::new();
    for name in &properties {
        match run(name) {
            Ok(report) => reports.push(report),
            Err(e) => return fail(e),
        }
    }
    emit_reports(&reports, format);
    aggregate_exit(&reports)
}

fn cmd_verify(kb_ref: &str, theorem: u8, budget: &BudgetArgs, format: Format) -> u8 {
    let kb = match load_kb(kb_ref) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    let limits = resolve_limits(budget);
    let report = match theorem {
        1 => verify_theorem1(&kb, &limits),
        2 => verify_theorem2(&kb, &limits),
        other => return fail(format!("no theorem {} (expected 1 or 2)", other)),
    };
    match report {
        Ok(report) => {
            let code = aggregate_exit(std::slice::from_ref(&report));
            emit_reports(&[report], format);
            code
        }
        Err(e) => fail(e),
    }
}

fn cmd_search(
    worlds: usize,
    max_stereotypes: Option<usize>,
    budget: &BudgetArgs,
    workers: usize,
    format: Format,
) -> u8 {
    if worlds == 0 || worlds > 4 {
        return fail("--worlds must be between 1 and 4");
    }
    let all_subsets = (1usize << worlds) - 1;
    let bound = max_stereotypes.unwrap_or(all_subsets);
    if bound == 0 || bound > all_subsets {
        return fail(format!(
            "--max-stereotypes must be between 1 and {}",
            all_subsets
        ));
    }
    let limits = resolve_limits(budget);
    let space = corpus::sized_space(worlds);
    let outcome = search_nonrepresentable(&space, bound, limits.budget, workers);
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.to_json(&space)).expect("serializable")
            );
        }
        Format::Text => {
            for (i, item) in outcome.found.iter().enumerate() {
                println!("nonrepresentable selection function #{}:", i + 1);
                for f in stereo_core::info::InfoSet::nonempty_subsets(worlds) {
                    println!(
                        "  {} -> {}",
                        space.render_set(f),
                        space.render_set(item.selection.get(f))
                    );
                }
                println!("  candidate sets refuted: {}", item.verdicts.len());
            }
            let stats = &outcome.stats;
            println!(
                "summary: worlds={} max_stereotypes={} found={} examined={} cumulative={} \
                 representable={} unknown={} unexamined={}",
                worlds,
                bound,
                stats.nonrepresentable,
                stats.selection_functions,
                stats.cumulative,
                stats.representable,
                stats.unknown,
                stats.unexamined_selection_functions,
            );
        }
    }
    EXIT_OK
}

fn cmd_explain(kb_ref: &str, given: &str, format: Format) -> u8 {
    let kb = match load_kb(kb_ref) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    let space = kb.space();
    let formula = match parse_formula(given, space) {
        Ok(f) => f,
        Err(e) => return fail(format!("--given: {}", e)),
    };
    let facts = space.models(&formula);
    let mut rows: Vec<(usize, stereo_core::ratio::DistanceValue)> = (0..kb.stereotype_count())
        .map(|s| (s, kb.distance(facts, s)))
        .collect();
    rows.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    let minimum = rows.first().map(|(_, d)| *d).expect("at least one stereotype");
    let minimal: Vec<&str> = rows
        .iter()
        .filter(|(_, d)| *d == minimum)
        .map(|(s, _)| kb.stereotype(*s).name())
        .collect();
    let unique = minimal.len() == 1;

    match format {
        Format::Json => {
            let table: Vec<serde_json::Value> = rows
                .iter()
                .map(|(s, d)| {
                    json!({
                        "stereotype": kb.stereotype(*s).name(),
                        "value": d.to_string(),
                        "minimal": *d == minimum,
                    })
                })
                .collect();
            let doc = json!({
                "given": space.set_names(facts),
                "distances": table,
                "unique": unique,
                "minimal": minimal,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Text => {
            println!("F = {}", space.render_set(facts));
            println!("distance table (ascending):");
            for (s, d) in &rows {
                let marker = if *d == minimum { "*" } else { " " };
                println!("  {} {:<12} {}", marker, kb.stereotype(*s).name(), d);
            }
            if facts.is_empty() {
                println!("empty information set: no selection");
            } else if unique {
                println!("unique minimum: {}", minimal[0]);
            } else {
                println!("NON-UNIQUE MINIMUM: {}", minimal.join(", "));
            }
        }
    }
    if facts.is_empty() || unique {
        EXIT_OK
    } else {
        EXIT_NON_UNIQUE
    }
}
