//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::decision::{
    bounded_valid, check_axiom_instances, mutation_campaign, FuzzConfig, Principle, SearchBounds,
    Verdict,
};
use crate::fixtures::{self, BUNDLED_PROOFS};
use crate::model::{load_path, save, Model};
use crate::proofsys::{catalog, check_proof, check_proof_with_goal, Proof};
use crate::semantics::{eval, trace, EvalConfig, System, Variant};
use crate::syntax::{parse, Formula};

/// Exit status for malformed input: unreadable files, bad formulas,
/// unknown worlds.
pub const EXIT_INPUT: i32 = 2;

/// Seed used by `fuzz` and `repro` unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "hypign",
    about = "Topic-sensitive ignorance logics: evaluation, countermodel search, proof checking"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print it in canonical form.
    Parse {
        formula: String,
        #[arg(long, value_parser = parse_system)]
        system: System,
    },
    /// Evaluate a formula at a world of a model file.
    Eval {
        model: PathBuf,
        world: String,
        formula: String,
        #[arg(long, value_parser = parse_system)]
        system: System,
        /// Print the truth value of every subformula.
        #[arg(long)]
        trace: bool,
        #[arg(long, hide = true, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
    },
    /// Search all models up to a size bound for a countermodel.
    Valid {
        formula: String,
        #[arg(long, value_parser = parse_system)]
        system: System,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Write the witness model file here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verdict that counts as success; valid by default.
        #[arg(long, value_enum, default_value_t = Expect::Valid)]
        expect: Expect,
    },
    /// Check random instances of every axiom schema on random models.
    Fuzz {
        /// All six systems if omitted.
        #[arg(long, value_parser = parse_system)]
        system: Option<System>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also run the mutation campaign; fails below an 80% kill rate.
        #[arg(long)]
        mutants: bool,
    },
    /// Check a proof file, or one of the bundled scripts.
    Prove {
        #[arg(required_unless_present = "bundled")]
        file: Option<PathBuf>,
        #[arg(long, value_parser = parse_system, required_unless_present = "bundled")]
        system: Option<System>,
        /// Name of a bundled script: gen_a6_iw, gen_a7_iu or gen_a2_id.
        #[arg(long, conflicts_with = "file")]
        bundled: Option<String>,
        /// The last line must be this formula.
        #[arg(long)]
        goal: Option<String>,
    },
    /// Run the fixture suite and print a PASS/FAIL table.
    Repro {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, hide = true, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
    },
    /// Print the axiom schemata and rules of a system.
    List {
        #[arg(long, value_parser = parse_system)]
        system: Option<System>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Valid,
    Countermodel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Standard,
    RelationalBox,
    IdIncludesSelf,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::RelationalBox => Variant::RelationalBox,
            VariantArg::IdIncludesSelf => Variant::IdIncludesSelf,
        }
    }
}

fn parse_system(s: &str) -> Result<System, String> {
    s.parse()
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

/// An input problem, reported with exit status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn formula(text: &str, system: System) -> Result<Formula, Failure> {
    parse(text, system.language()).map_err(|e| Failure(format!("`{text}`: {e}")))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Parse {
            formula: text,
            system,
        } => {
            writeln!(out, "{}", formula(&text, system)?)?;
            Ok(0)
        }
        Command::Eval {
            model,
            world,
            formula: text,
            system,
            trace: show_trace,
            variant,
        } => {
            let m = load_path(&model).map_err(|e| Failure(format!("{}: {e}", model.display())))?;
            let f = formula(&text, system)?;
            let cfg = EvalConfig::new(system).with_variant(variant.into());
            let value = eval(&m, &world, &f, cfg)?;
            writeln!(out, "{value}")?;
            if show_trace {
                for (g, v) in trace(&m, &world, &f, cfg)? {
                    writeln!(out, "  {:<5}  {g}", v)?;
                }
            }
            Ok(0)
        }
        Command::Valid {
            formula: text,
            system,
            max_worlds,
            out: path,
            expect,
        } => {
            let f = formula(&text, system)?;
            let report = bounded_valid(&f, system, &SearchBounds::worlds(max_worlds))?;
            writeln!(out, "{}", report.to_json())?;
            if let (Some(path), Some(w)) = (path, &report.witness) {
                std::fs::write(&path, save(&w.model))
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            }
            let wanted = match expect {
                Expect::Valid => Verdict::ValidUpToBound,
                Expect::Countermodel => Verdict::Countermodel,
            };
            Ok(i32::from(report.verdict != wanted))
        }
        Command::Fuzz {
            system,
            trials,
            seed,
            mutants,
        } => {
            let systems = system.map_or(System::ALL.to_vec(), |s| vec![s]);
            let fc = FuzzConfig {
                trials,
                seed,
                ..FuzzConfig::default()
            };
            let mut ok = true;
            for s in systems {
                let report = check_axiom_instances(s, &fc);
                for row in &report.rows {
                    let status = if row.violation.is_none() {
                        "PASS"
                    } else {
                        "FAIL"
                    };
                    writeln!(
                        out,
                        "{s:<4} {:<10} {:>6} {status}",
                        row.schema, row.instances
                    )?;
                    if let Some(v) = &row.violation {
                        ok = false;
                        writeln!(
                            out,
                            "     instance {} fails at {}",
                            v.instance, v.witness.world
                        )?;
                        writeln!(out, "{}", save(&v.witness.model))?;
                    }
                }
                if mutants {
                    let m = mutation_campaign(s, &fc);
                    let rate = m.kill_rate();
                    writeln!(
                        out,
                        "{s:<4} mutants killed {}/{} ({:.0}%)",
                        m.killed(),
                        m.rows.len(),
                        rate * 100.0
                    )?;
                    for row in m.rows.iter().filter(|r| !r.killed) {
                        writeln!(
                            out,
                            "     survived: {} [{}]",
                            row.mutant.schema.pattern, row.mutant.operator
                        )?;
                    }
                    ok &= rate >= 0.8;
                }
            }
            Ok(i32::from(!ok))
        }
        Command::Prove {
            file,
            system,
            bundled,
            goal,
        } => {
            let (proof, system, goal) = match bundled {
                Some(name) => {
                    let b = fixtures::bundled(&name)
                        .ok_or_else(|| Failure(format!("no bundled proof named `{name}`")))?;
                    let goal = goal.map_or(Ok(b.goal()), |g| formula(&g, b.system))?;
                    (b.proof(), b.system, Some(goal))
                }
                None => {
                    let path = file.expect("clap requires a file without --bundled");
                    let system = system.expect("clap requires --system without --bundled");
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                    let proof = Proof::from_json(&text)?;
                    let goal = goal.map(|g| formula(&g, system)).transpose()?;
                    (proof, system, goal)
                }
            };
            let checked = match &goal {
                Some(g) => check_proof_with_goal(&proof, system, g),
                None => check_proof(&proof, system),
            };
            match checked {
                Ok(theorems) => {
                    let last = theorems.last().expect("checked proofs are nonempty");
                    writeln!(out, "OK {system}: {} lines, proves {last}", theorems.len())?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "FAILED {system}: {e}")?;
                    Ok(1)
                }
            }
        }
        Command::Repro {
            seed,
            trials,
            variant,
        } => {
            let rows = repro(variant.into(), seed, trials);
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rows {
                let status = if r.pass { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{:<9} {:<width$}  {status}  {}",
                    r.group, r.name, r.detail
                )?;
            }
            let failed = rows.iter().filter(|r| !r.pass).count();
            writeln!(out, "{} rows, {failed} failed", rows.len())?;
            Ok(i32::from(failed > 0))
        }
        Command::List { system } => {
            for s in system.map_or(System::ALL.to_vec(), |s| vec![s]) {
                write!(out, "{}", catalog(s))?;
            }
            Ok(0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproRow {
    pub group: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn fixture_row(
    name: &str,
    m: &Model,
    world: &str,
    text: &str,
    cfg: EvalConfig,
    expected: bool,
) -> ReproRow {
    let f = parse(text, cfg.system.language()).expect("fixture formula parses");
    let got = eval(m, world, &f, cfg);
    ReproRow {
        group: "fixture",
        name: format!("{name} {}: {text} at {world}", cfg.system),
        pass: got == Ok(expected),
        detail: format!(
            "expected {expected}, got {}",
            got.map_or_else(|e| e.to_string(), |v| v.to_string())
        ),
    }
}

/// The fixture suite: worked models, the omniscience table, bundled proofs
/// and the soundness fuzz, each row checked against its expected outcome.
pub fn repro(variant: Variant, seed: u64, trials: usize) -> Vec<ReproRow> {
    let mut rows = Vec::new();
    let hiw = EvalConfig::new(System::HIW).with_variant(variant);
    let hdi = EvalConfig::new(System::HDI).with_variant(variant);
    let w3 = fixtures::william3_hiw();
    rows.push(fixture_row("william3", &w3, "w", "~Iw p", hiw, true));
    rows.push(fixture_row(
        "william3",
        &w3,
        "w",
        "Iw (p & (q | ~q))",
        hiw,
        true,
    ));
    let w3d = fixtures::william3_hdi();
    rows.push(fixture_row("william3", &w3d, "w", "Id p", hdi, true));
    rows.push(fixture_row(
        "william3",
        &w3d,
        "w",
        "Id (p & (q | ~q))",
        hdi,
        false,
    ));
    rows.push(fixture_row(
        "self-loop",
        &fixtures::hdi_self_loop(),
        "w",
        "Id p",
        hdi,
        true,
    ));

    for system in System::ALL {
        for p in Principle::ALL {
            let cfg = EvalConfig::new(system).with_variant(variant);
            let (_, conclusion) = p.instance(system);
            let expected = p.expected(system);
            let got = bounded_valid(&conclusion, cfg, &SearchBounds::default());
            let (pass, detail) = match &got {
                Ok(r) => (
                    r.verdict == expected,
                    format!(
                        "{} after {} models, expected {expected}",
                        r.verdict, r.models_checked
                    ),
                ),
                Err(e) => (false, e.to_string()),
            };
            rows.push(ReproRow {
                group: "omnisc",
                name: format!("{p} {system}"),
                pass,
                detail,
            });
        }
    }

    for b in &BUNDLED_PROOFS {
        let goal = b.goal();
        let checked = check_proof_with_goal(&b.proof(), b.system, &goal);
        let bridge = bounded_valid(
            &goal,
            EvalConfig::new(b.system).with_variant(variant),
            &SearchBounds::default(),
        );
        let valid = matches!(&bridge, Ok(r) if r.is_valid());
        rows.push(ReproRow {
            group: "proof",
            name: format!("{} {}", b.name, b.system),
            pass: checked.is_ok() && valid,
            detail: match checked {
                Ok(lines) if valid => {
                    format!("{} lines, theorem valid up to 3 worlds", lines.len())
                }
                Ok(_) => "checked, but the theorem has a countermodel".into(),
                Err(e) => e.to_string(),
            },
        });
    }

    let fc = FuzzConfig {
        trials,
        seed,
        variant,
        ..FuzzConfig::default()
    };
    for system in System::ALL {
        for row in check_axiom_instances(system, &fc).rows {
            rows.push(ReproRow {
                group: "fuzz",
                name: format!("{system} {}", row.schema),
                pass: row.violation.is_none(),
                detail: match &row.violation {
                    None => format!("{} instances", row.instances),
                    Some(v) => format!("{} fails at {}", v.instance, v.witness.world),
                },
            });
        }
    }
    rows
}
