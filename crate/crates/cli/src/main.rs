//! Command-line front end: evaluate catalog conditions on instance files,
//! query the lattice engine, run the Jacobian criterion and bridge, and
//! drive the harness suites and fixture corpus.
//!
//! Exit status: 0 on holds/consistent/pass, 1 on fails/mismatch, 2 on usage
//! or input errors.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use factoriality::conditions::{self, ConditionId};
use factoriality::harness::{self, fixtures, GenParams};
use factoriality::jacobian::PolyMap;
use factoriality::lattice::{InstanceSpec, LatticePoint, MonomialSubring};
use factoriality::verdict::{SearchBound, Verdict};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "factoriality",
    about = "Exact checks for factoriality-style closure conditions on monomial subrings and polynomial maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BoundArgs {
    /// Coordinate radius B of the search box
    #[arg(long, default_value_t = 12)]
    bound: i64,
    /// Maximal exponent K tested in power conditions
    #[arg(long = "power-bound", default_value_t = 6)]
    power_bound: u32,
}

impl BoundArgs {
    fn get(&self) -> anyhow::Result<SearchBound> {
        SearchBound::new(self.bound, self.power_bound)
            .ok_or_else(|| anyhow!("invalid bound: need B >= 1 and K >= 2"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate catalog conditions on an instance file
    Check {
        /// Instance JSON file
        #[arg(long)]
        instance: PathBuf,
        /// Condition id (e.g. P1_1_iv) or `all`
        #[arg(long)]
        condition: String,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
    /// Query the lattice engine on an instance file
    Lattice {
        #[arg(long)]
        instance: PathBuf,
        #[command(subcommand)]
        query: LatticeQuery,
    },
    /// Jacobian minor report for a polynomial map, optionally bridged to the
    /// monomial catalog
    Jacobian {
        /// Comma-separated variable names (e.g. x,y)
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Comma-separated polynomials in the text grammar (e.g. "x,x*y")
        #[arg(long)]
        polys: Option<String>,
        /// JSON input file {"vars": [...], "polys": [...]}
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also run the monomial-fragment consistency bridge
        #[arg(long)]
        bridge: bool,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized suites
    Harness {
        /// lemmas | implications | equivalences | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = GenParams::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the pinned fixture corpus
    Fixtures {
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum LatticeQuery {
    /// Decide membership of a point
    Member {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<i64>,
    },
    /// List atoms up to a grade bound
    Atoms {
        #[arg(long, default_value_t = 12)]
        grade_bound: i64,
    },
    /// Decide square-freeness of a member
    Squarefree {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<i64>,
    },
    /// Bounded primality of a member
    Prime {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<i64>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Bounded radical-principality of a member
    Gpr {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<i64>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Enumerate box members
    Box {
        #[arg(long, default_value_t = 12)]
        bound: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn load_instance(path: &PathBuf) -> anyhow::Result<MonomialSubring> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance file {}", path.display()))?;
    let spec: InstanceSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing instance file {}", path.display()))?;
    spec.build()
        .map_err(|e| anyhow!("invalid instance {}: {}", path.display(), e))
}

fn verdict_json(id: &str, v: &Verdict, bound: SearchBound) -> serde_json::Value {
    match v {
        Verdict::Holds { bound } => json!({
            "condition": id, "outcome": "holds",
            "bound": bound, "witness": null, "reason": null,
        }),
        Verdict::Fails { witness } => json!({
            "condition": id, "outcome": "fails",
            "bound": bound, "witness": witness, "reason": null,
        }),
        Verdict::HypothesisViolated { reason } => json!({
            "condition": id, "outcome": "hypothesis_violated",
            "bound": bound, "witness": null, "reason": reason,
        }),
    }
}

fn parse_point(coords: &[i64], sub: &MonomialSubring) -> anyhow::Result<LatticePoint> {
    if coords.len() != sub.ambient().dim() {
        return Err(anyhow!(
            "point has {} coordinates, instance has dimension {}",
            coords.len(),
            sub.ambient().dim()
        ));
    }
    Ok(LatticePoint::from_slice(coords))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Check {
            instance,
            condition,
            bounds,
            json,
        } => {
            let sub = load_instance(&instance)?;
            let bound = bounds.get()?;
            let targets: Vec<(ConditionId, Option<String>)> = if condition == "all" {
                conditions::catalog().into_iter().map(|id| (id, None)).collect()
            } else {
                vec![conditions::resolve(&condition)
                    .map_err(|e| anyhow!("unknown condition `{}`: {}", condition, e))?]
            };
            let mut any_bad = false;
            let mut reports = Vec::new();
            for (id, note) in &targets {
                let v = conditions::eval(*id, &sub, bound)?;
                if !v.is_holds() {
                    any_bad = true;
                }
                if json {
                    reports.push(verdict_json(&id.to_string(), &v, bound));
                } else {
                    let mut line = format!("{:<22} {}", id.to_string(), v);
                    if let Some(note) = note {
                        line.push_str(&format!("  ({})", note));
                    }
                    println!("{}", line);
                }
            }
            if json {
                let out = json!({
                    "instance": InstanceSpec::of(&sub),
                    "verdicts": reports,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            }
            Ok(exit_flag(any_bad))
        }
        Command::Lattice { instance, query } => {
            let sub = load_instance(&instance)?;
            run_lattice(&sub, query)
        }
        Command::Jacobian {
            vars,
            polys,
            input,
            bridge,
            bounds,
            json,
        } => {
            let bound = bounds.get()?;
            let (names, texts): (Vec<String>, Vec<String>) = if let Some(path) = input {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let v: serde_json::Value = serde_json::from_str(&text)?;
                let names = v["vars"]
                    .as_array()
                    .ok_or_else(|| anyhow!("input needs a `vars` array"))?
                    .iter()
                    .map(|s| s.as_str().unwrap_or_default().to_string())
                    .collect();
                let texts = v["polys"]
                    .as_array()
                    .ok_or_else(|| anyhow!("input needs a `polys` array"))?
                    .iter()
                    .map(|s| s.as_str().unwrap_or_default().to_string())
                    .collect();
                (names, texts)
            } else {
                let polys = polys.ok_or_else(|| anyhow!("need --polys or --input"))?;
                (
                    vars,
                    polys.split(',').map(|s| s.trim().to_string()).collect(),
                )
            };
            let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let text_refs: Vec<&str> = texts.iter().map(|s| s.as_str()).collect();
            let map = PolyMap::parse(&name_refs, &text_refs)
                .map_err(|e| anyhow!("invalid polynomial map: {}", e))?;
            if bridge {
                let rep = map
                    .bridge_check(bound)
                    .map_err(|e| anyhow!("bridge failed: {}", e))?;
                if json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "vars": names,
                            "polys": texts,
                            "gcd": rep.minor.gcd.to_text(&name_refs),
                            "verdict": rep.minor.verdict,
                            "fragment": verdict_json("SETINCL_SqfR_SqfA", &rep.fragment, bound),
                            "consistent": rep.consistent,
                        }))?
                    );
                } else {
                    println!(
                        "gcd of minors: {}  (constant: {})",
                        rep.minor.gcd.to_text(&name_refs),
                        rep.minor.verdict
                    );
                    println!("fragment Sqf R in Sqf A: {}", rep.fragment);
                    println!(
                        "bridge: {}",
                        if rep.consistent {
                            "CONSISTENT"
                        } else {
                            "INCONSISTENT"
                        }
                    );
                }
                return Ok(exit_flag(!rep.consistent));
            }
            let rep = map
                .minor_report()
                .map_err(|e| anyhow!("minor report failed: {}", e))?;
            if json {
                let minors: Vec<serde_json::Value> = rep
                    .minors
                    .iter()
                    .map(|(cols, det)| {
                        json!({"cols": cols, "det": det.to_text(&name_refs)})
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "vars": names,
                        "polys": texts,
                        "minors": minors,
                        "gcd": rep.gcd.to_text(&name_refs),
                        "verdict": rep.verdict,
                    }))?
                );
            } else {
                for (cols, det) in &rep.minors {
                    println!("minor {:?}: {}", cols, det.to_text(&name_refs));
                }
                println!(
                    "gcd: {}  (constant: {})",
                    rep.gcd.to_text(&name_refs),
                    rep.verdict
                );
            }
            Ok(exit_flag(!rep.verdict))
        }
        Command::Harness {
            suite,
            seed,
            count,
            bounds,
            json,
        } => {
            let bound = bounds.get()?;
            let params = GenParams {
                seed,
                instance_count: count,
                ..GenParams::default()
            };
            let mut reports = Vec::new();
            match suite.as_str() {
                "lemmas" => reports.push(harness::run_lemma_suite(&params, bound)?),
                "implications" => reports.push(harness::run_implication_suite(&params, bound)?),
                "equivalences" => {
                    for prop in harness::equivalence_props() {
                        reports.push(harness::run_equivalence_suite(prop, &params, bound)?);
                    }
                }
                "all" => {
                    reports.push(harness::run_lemma_suite(&params, bound)?);
                    reports.push(harness::run_implication_suite(&params, bound)?);
                    for prop in harness::equivalence_props() {
                        reports.push(harness::run_equivalence_suite(prop, &params, bound)?);
                    }
                }
                other => return Err(anyhow!("unknown suite `{}`", other)),
            }
            let mut any_bad = false;
            for rep in &reports {
                if !rep.clean() {
                    any_bad = true;
                }
                if json {
                    println!("{}", rep.canonical_json());
                } else {
                    println!(
                        "suite {:<24} instances={:<4} violations={:<3} unresolved={:<3} skipped={:<3} ({} ms)",
                        rep.suite,
                        rep.outcomes.len() + rep.skipped.len(),
                        rep.violations.len(),
                        rep.unresolved.len(),
                        rep.skipped.len(),
                        rep.timing_ms
                    );
                    for v in &rep.violations {
                        println!("  violation at instance {}: {} - {}", v.instance, v.check, v.detail);
                    }
                }
            }
            Ok(exit_flag(any_bad))
        }
        Command::Fixtures { bounds, json } => {
            let bound = bounds.get()?;
            let table = fixtures::run_fixtures(bound);
            if json {
                println!("{}", serde_json::to_string_pretty(&table)?);
            } else {
                print!("{}", table.to_text());
            }
            Ok(exit_flag(!table.all_pass()))
        }
    }
}

fn run_lattice(sub: &MonomialSubring, query: LatticeQuery) -> anyhow::Result<ExitCode> {
    match query {
        LatticeQuery::Member { point } => {
            let p = parse_point(&point, sub)?;
            let m = sub.member(&p);
            println!("{}", m);
            Ok(exit_flag(!m))
        }
        LatticeQuery::Atoms { grade_bound } => {
            let atoms = sub
                .atoms_up_to(grade_bound)
                .map_err(|e| anyhow!("atoms failed: {}", e))?;
            for a in &atoms {
                println!("{}", a);
            }
            Ok(ExitCode::SUCCESS)
        }
        LatticeQuery::Squarefree { point } => {
            let p = parse_point(&point, sub)?;
            let s = sub
                .squarefree(&p)
                .map_err(|e| anyhow!("squarefree failed: {}", e))?;
            println!("{}", s);
            Ok(exit_flag(!s))
        }
        LatticeQuery::Prime { point, bounds } => {
            let p = parse_point(&point, sub)?;
            let v = sub
                .prime_bounded(&p, bounds.get()?)
                .map_err(|e| anyhow!("prime check failed: {}", e))?;
            println!("{}", v);
            Ok(exit_flag(!v.is_holds()))
        }
        LatticeQuery::Gpr { point, bounds } => {
            let p = parse_point(&point, sub)?;
            let v = sub
                .gpr_bounded(&p, bounds.get()?)
                .map_err(|e| anyhow!("gpr check failed: {}", e))?;
            println!("{}", v);
            Ok(exit_flag(!v.is_holds()))
        }
        LatticeQuery::Box { bound } => {
            for p in sub.member_box(bound).iter() {
                println!("{}", p);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_flag(bad: bool) -> ExitCode {
    if bad {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
