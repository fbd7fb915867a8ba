//! Command-line front end: evaluate choices and frontiers, run deferred
//! acceptance, execute verification suites, and extract revealed priorities
//! from instance files.
//!
//! Exit codes: 0 when everything passed, 1 when a check reported violations,
//! 2 on input or budget errors.

mod parse;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use distchoice::choice::{
    check_no_justified_envy, check_non_wasteful, check_path_independence, check_promotes,
    distributional_choice, distributional_choice_rule, reveal_priorities, Revealed,
};
use distchoice::frontier::{
    certify, frontier, PropertyReport,
};
use distchoice::matroid::{bases, check_base_axioms, check_independence_axioms};
use distchoice::mechanism::{
    check_individual_rationality, check_matching_no_justified_envy, check_matching_non_wasteful,
    check_matching_promotes, check_strategy_proofness, deferred_acceptance,
};
use distchoice::set::{GroundSet, StudentSet};
use distchoice::Error;

use parse::{parse_instance, CompiledInstance, CompiledSchool, InstanceFile};
use report::{CheckResult, Report};

#[derive(Parser)]
#[command(name = "distchoice", about = "Distributional choice rules and matching")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Attach wall-clock timing to the report (off by default so identical
    /// inputs produce byte-identical reports).
    #[arg(long, global = true)]
    timing: bool,
    /// Cap on subsets enumerated per frontier computation.
    #[arg(long, default_value_t = distchoice::DEFAULT_MAX_SUBSETS, global = true)]
    max_subsets: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the greedy choice rule of one school on a pool of students.
    Choose {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        school: String,
        /// "all" or a comma-separated list of student labels.
        #[arg(long, default_value = "all")]
        pool: String,
    },
    /// List the frontier members of a pool under a school's preference.
    Frontier {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        school: String,
        #[arg(long, default_value = "all")]
        pool: String,
    },
    /// Run student-proposing deferred acceptance on the instance's market.
    Da {
        #[arg(long)]
        instance: String,
        /// Include the number of rounds in the report.
        #[arg(long)]
        trace: bool,
    },
    /// Run a named verification suite.
    Verify {
        /// structural-properties | choice-axioms | path-independence |
        /// matroid-axioms | matching-axioms | strategy-proofness
        suite: String,
        #[arg(long)]
        instance: String,
        #[arg(long)]
        school: Option<String>,
        /// Cap on deferred-acceptance runs for strategy-proofness.
        #[arg(long, default_value_t = 100_000)]
        max_reports: usize,
    },
    /// Extract the priorities a school's choice rule reveals.
    Reveal {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        school: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(mut rep) => {
            if cli.timing {
                rep.elapsed_ms = Some(started.elapsed().as_millis());
            }
            let passed = rep.all_passed();
            println!("{}", rep.render(matches!(cli.format, Format::Json)));
            if passed {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(errors) => {
            for e in errors {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}

fn load(path: &str) -> Result<(InstanceFile, CompiledInstance), Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| vec![format!("cannot read {path}: {e}")])?;
    parse_instance(&text)
}

fn school_or_err<'a>(
    inst: &'a CompiledInstance,
    id: &str,
) -> Result<&'a CompiledSchool, Vec<String>> {
    inst.school(id)
        .ok_or_else(|| vec![format!("unknown school {id:?}")])
}

fn labels(ground: &GroundSet, set: StudentSet) -> Vec<String> {
    ground.labels(set)
}

fn fmt_set(ground: &GroundSet, set: StudentSet) -> String {
    format!("{{{}}}", ground.labels(set).join(", "))
}

fn budget_err(e: Error) -> Vec<String> {
    vec![e.to_string()]
}

/// Suites enumerate the whole power set; keep that honest.
fn guard_exhaustive(ground: &GroundSet) -> Result<(), Vec<String>> {
    if ground.n() > 16 {
        return Err(vec![format!(
            "verification suites are exhaustive and limited to 16 students, got {}",
            ground.n()
        )]);
    }
    Ok(())
}

fn property_check(name: &str, ground: &GroundSet, report: &PropertyReport) -> CheckResult {
    let witnesses = report
        .violations
        .iter()
        .map(|v| {
            let mut w = format!(
                "S={}, S'={}",
                fmt_set(ground, v.s),
                fmt_set(ground, v.s_prime)
            );
            if let Some(s) = v.student {
                w += &format!(", student={}", ground.label(s));
            }
            w
        })
        .collect();
    CheckResult::new(name, witnesses).with_substantive(report.substantive)
}

fn run(cli: &Cli) -> Result<Report, Vec<String>> {
    match &cli.command {
        Command::Choose {
            instance,
            school,
            pool,
        } => {
            let (_, inst) = load(instance)?;
            let sch = school_or_err(&inst, school)?;
            let pool_set = inst.parse_pool(pool).map_err(|e| vec![e])?;
            let chosen = distributional_choice(
                sch.pref.as_ref(),
                &sch.priority,
                sch.capacity,
                pool_set,
                cli.max_subsets,
            )
            .map_err(budget_err)?;
            let mut rep = Report::new("choose", instance);
            rep.school = Some(school.clone());
            rep.pool = Some(labels(&inst.ground, pool_set));
            rep.chosen = Some(labels(&inst.ground, chosen));
            Ok(rep)
        }
        Command::Frontier {
            instance,
            school,
            pool,
        } => {
            let (_, inst) = load(instance)?;
            let sch = school_or_err(&inst, school)?;
            let pool_set = inst.parse_pool(pool).map_err(|e| vec![e])?;
            let f = frontier(sch.pref.as_ref(), pool_set, sch.capacity, cli.max_subsets)
                .map_err(budget_err)?;
            let mut rep = Report::new("frontier", instance);
            rep.school = Some(school.clone());
            rep.pool = Some(labels(&inst.ground, pool_set));
            rep.frontier = Some(f.members.iter().map(|&m| labels(&inst.ground, m)).collect());
            Ok(rep)
        }
        Command::Da { instance, trace } => {
            let (file, inst) = load(instance)?;
            let market = inst
                .market(&file)
                .ok_or_else(|| vec!["instance has no student_preferences section".to_string()])?;
            let outcome = deferred_acceptance(&market, cli.max_subsets).map_err(budget_err)?;
            let mut rep = Report::new("da", instance);
            rep.matching = Some(
                (0..inst.ground.n())
                    .map(|s| {
                        (
                            inst.ground.label(s),
                            outcome.matching.of(s).map(|c| inst.schools[c].id.clone()),
                        )
                    })
                    .collect(),
            );
            if *trace {
                rep.rounds = Some(outcome.trace.len());
            }
            Ok(rep)
        }
        Command::Reveal { instance, school } => {
            let (_, inst) = load(instance)?;
            guard_exhaustive(&inst.ground)?;
            let sch = school_or_err(&inst, school)?;
            let rule = distributional_choice_rule(sch.pref.as_ref(), sch.priority.clone(), sch.capacity)
                .with_max_subsets(cli.max_subsets);
            let mut rep = Report::new("reveal", instance);
            rep.school = Some(school.clone());
            match reveal_priorities(&rule, sch.pref.as_ref(), &inst.ground) {
                Revealed::Ranking(pi) => {
                    rep.ranking = Some(pi.order().iter().map(|&s| inst.ground.label(s)).collect());
                }
                Revealed::Cycle(c) => {
                    rep.cycle = Some(c.students.iter().map(|&s| inst.ground.label(s)).collect());
                }
            }
            Ok(rep)
        }
        Command::Verify {
            suite,
            instance,
            school,
            max_reports,
        } => {
            let (file, inst) = load(instance)?;
            let mut rep = Report::new(&format!("verify {suite}"), instance);
            rep.school = school.clone();
            let ground = &inst.ground;
            match suite.as_str() {
                "structural-properties" => {
                    guard_exhaustive(ground)?;
                    let sch = school_of(&inst, school)?;
                    let cert = certify(sch.pref.as_ref(), ground, sch.capacity);
                    rep.checks.push(property_check("upper-bound", ground, &cert.upper_bound));
                    rep.checks.push(property_check("maximizer", ground, &cert.maximizer));
                    rep.checks.push(property_check("improvement", ground, &cert.improvement));
                }
                "choice-axioms" => {
                    guard_exhaustive(ground)?;
                    let sch = school_of(&inst, school)?;
                    let rule =
                        distributional_choice_rule(sch.pref.as_ref(), sch.priority.clone(), sch.capacity)
                            .with_max_subsets(cli.max_subsets);
                    rep.checks.push(CheckResult::new(
                        "non-wasteful",
                        check_non_wasteful(&rule, ground)
                            .iter()
                            .map(|v| format!("S={}", fmt_set(ground, v.menu)))
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "promotes",
                        check_promotes(&rule, sch.pref.as_ref(), ground)
                            .iter()
                            .map(|v| {
                                format!(
                                    "S={}, chosen={}, better={}",
                                    fmt_set(ground, v.menu),
                                    fmt_set(ground, v.chosen),
                                    fmt_set(ground, v.better)
                                )
                            })
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "no-justified-envy",
                        check_no_justified_envy(&rule, sch.pref.as_ref(), &sch.priority, ground)
                            .iter()
                            .map(|v| {
                                format!(
                                    "S={}, chosen={}, rejected={}",
                                    fmt_set(ground, v.menu),
                                    ground.label(v.chosen),
                                    ground.label(v.rejected)
                                )
                            })
                            .collect(),
                    ));
                }
                "path-independence" => {
                    guard_exhaustive(ground)?;
                    let sch = school_of(&inst, school)?;
                    let rule =
                        distributional_choice_rule(sch.pref.as_ref(), sch.priority.clone(), sch.capacity)
                            .with_max_subsets(cli.max_subsets);
                    let report = check_path_independence(&rule, ground);
                    rep.checks.push(CheckResult::new(
                        "path-independence",
                        report
                            .direct
                            .iter()
                            .map(|v| {
                                format!(
                                    "S={}, S'={}, joint={}, sequential={}",
                                    fmt_set(ground, v.s),
                                    fmt_set(ground, v.s_prime),
                                    fmt_set(ground, v.joint),
                                    fmt_set(ground, v.sequential)
                                )
                            })
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "consistency",
                        report
                            .consistency
                            .iter()
                            .map(|v| {
                                format!(
                                    "S={}, removed={}",
                                    fmt_set(ground, v.menu),
                                    ground.label(v.removed)
                                )
                            })
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "substitutability",
                        report
                            .substitutability
                            .iter()
                            .map(|v| {
                                format!(
                                    "S={}, kept={}, removed={}",
                                    fmt_set(ground, v.menu),
                                    ground.label(v.kept),
                                    ground.label(v.removed)
                                )
                            })
                            .collect(),
                    ));
                }
                "matroid-axioms" => {
                    guard_exhaustive(ground)?;
                    let sch = school_of(&inst, school)?;
                    let Some(oracle) = sch.pref.matroid_backing() else {
                        return Err(vec![format!(
                            "school {:?} does not use a matroid-rank preference",
                            sch.id
                        )]);
                    };
                    rep.checks.push(CheckResult::new(
                        "independence-axioms",
                        check_independence_axioms(oracle)
                            .iter()
                            .map(|v| format!("{v:?}"))
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "base-axioms",
                        check_base_axioms(&bases(oracle))
                            .iter()
                            .map(|v| format!("{v:?}"))
                            .collect(),
                    ));
                }
                "matching-axioms" => {
                    let market = market_of(&inst, &file)?;
                    let mu = deferred_acceptance(&market, cli.max_subsets)
                        .map_err(budget_err)?
                        .matching;
                    rep.matching = Some(
                        (0..ground.n())
                            .map(|s| {
                                (ground.label(s), mu.of(s).map(|c| inst.schools[c].id.clone()))
                            })
                            .collect(),
                    );
                    rep.checks.push(CheckResult::new(
                        "individual-rationality",
                        check_individual_rationality(&market, &mu)
                            .iter()
                            .map(|v| {
                                format!(
                                    "student={}, school={}",
                                    ground.label(v.student),
                                    inst.schools[v.school].id
                                )
                            })
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "non-wasteful",
                        check_matching_non_wasteful(&market, &mu)
                            .iter()
                            .map(|v| {
                                format!(
                                    "student={}, school={}",
                                    ground.label(v.student),
                                    inst.schools[v.school].id
                                )
                            })
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "promotes",
                        check_matching_promotes(&market, &mu)
                            .iter()
                            .map(|v| {
                                format!(
                                    "school={}, assigned={}, better={}",
                                    inst.schools[v.school].id,
                                    fmt_set(ground, v.assigned),
                                    fmt_set(ground, v.better)
                                )
                            })
                            .collect(),
                    ));
                    rep.checks.push(CheckResult::new(
                        "no-justified-envy",
                        check_matching_no_justified_envy(&market, &mu)
                            .iter()
                            .map(|v| {
                                format!(
                                    "school={}, assigned={}, envious={}",
                                    inst.schools[v.school].id,
                                    ground.label(v.assigned),
                                    ground.label(v.envious)
                                )
                            })
                            .collect(),
                    ));
                }
                "strategy-proofness" => {
                    let market = market_of(&inst, &file)?;
                    let deviations =
                        check_strategy_proofness(&market, *max_reports).map_err(budget_err)?;
                    rep.checks.push(CheckResult::new(
                        "strategy-proofness",
                        deviations
                            .iter()
                            .map(|d| {
                                format!(
                                    "student={}, report=[{}], truthful={}, deviant={}",
                                    ground.label(d.student),
                                    d.report
                                        .ranked()
                                        .iter()
                                        .map(|&c| inst.schools[c].id.clone())
                                        .collect::<Vec<_>>()
                                        .join(", "),
                                    d.truthful_outcome
                                        .map(|c| inst.schools[c].id.clone())
                                        .unwrap_or_else(|| "(outside option)".into()),
                                    d.deviant_outcome
                                        .map(|c| inst.schools[c].id.clone())
                                        .unwrap_or_else(|| "(outside option)".into()),
                                )
                            })
                            .collect(),
                    ));
                }
                other => {
                    return Err(vec![format!(
                        "unknown suite {other:?}; expected one of structural-properties, \
                         choice-axioms, path-independence, matroid-axioms, matching-axioms, \
                         strategy-proofness"
                    )])
                }
            }
            Ok(rep)
        }
    }
}

fn school_of<'a>(
    inst: &'a CompiledInstance,
    school: &Option<String>,
) -> Result<&'a CompiledSchool, Vec<String>> {
    match school {
        Some(id) => school_or_err(inst, id),
        None if inst.schools.len() == 1 => Ok(&inst.schools[0]),
        None => Err(vec!["--school is required for this suite".to_string()]),
    }
}

fn market_of(
    inst: &CompiledInstance,
    file: &InstanceFile,
) -> Result<distchoice::Market, Vec<String>> {
    inst.market(file)
        .ok_or_else(|| vec!["instance has no student_preferences section".to_string()])
}
