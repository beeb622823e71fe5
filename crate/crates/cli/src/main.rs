//! Command-line front end. Every run resolves bounds from the config
//! file, executes one subcommand, and can emit a byte-stable JSON
//! report; exit codes distinguish found/true (0) from none/false (1)
//! from errors and exhausted budgets (2).

mod inputs;
mod report;

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use homlab_core::solver::SearchConfig;
use homlab_core::{constructions, duality, game, incidence, lattice, logic, solver};

use inputs::Failure;
use report::RunReport;

#[derive(Parser)]
#[command(name = "homlab", version, about = "Workbench for structures, homomorphisms, and bounded games")]
struct Cli {
    /// Emit the run report as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Config file (default: $HOMLAB_CONFIG, then ./homlab.toml).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cap worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the search node budget.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Override the largest universe a construction may produce.
    #[arg(long, global = true)]
    size_bound: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search for a homomorphism between two structures.
    Hom {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Enumerate all homomorphisms instead of the least one.
        #[arg(long, conflicts_with = "surjective")]
        all: bool,
        /// Demand surjectivity.
        #[arg(long)]
        surjective: bool,
    },
    /// Build a pinch and its two side substructures, writing files.
    Pinch {
        #[arg(long)]
        template: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the incidence graph in DOT form.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Probe for duality witnesses via pinch homomorphisms.
    Duality {
        #[arg(long, conflicts_with = "family")]
        template: Option<String>,
        /// Comma-separated templates checked as one family.
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Verify the round-limited game strategy on the level-k boards.
    Efgame {
        #[arg(long)]
        template: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Transcripts sampled in random mode.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Bounded-lattice experiments.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Evaluate axioms on pinches, side substructures, and unions of
    /// the samples.
    Closure {
        #[arg(long)]
        axioms: PathBuf,
        /// Directory, document file, or comma-separated builtins.
        #[arg(long)]
        samples: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Enumerate (critical) obstructions for a template family.
    Obstructions {
        /// Comma-separated templates.
        #[arg(long, value_delimiter = ',', required = true)]
        templates: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long)]
        critical_only: bool,
    },
    /// Incidence-graph metrics of a structure.
    Metrics {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Check both stacked-lattice clauses against a target lattice.
    Verify {
        #[arg(long)]
        n: usize,
        /// Target lattice file (default: the 2-element lattice).
        #[arg(long = "L")]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        subset_cap: u64,
    },
    /// Write the stacked lattice's order diagram in DOT form.
    Dot {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    // die quietly when a pager closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut report = RunReport::new(&argv.join(" "));
    let code = match run(&cli, &mut report) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            report.finish(format!("ERROR: {}", f.message), 2)
        }
    };
    if cli.json {
        println!("{}", report.to_json());
    }
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    std::process::exit(code);
}

fn join_map(map: &[usize]) -> String {
    map.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: &Cli, report: &mut RunReport) -> Result<i32, Failure> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .ok();
    }
    let bounds = inputs::resolve_bounds(cli.config.as_deref(), cli.node_budget, cli.size_bound)?;
    let say = |line: &str| {
        if !cli.json {
            println!("{line}");
        }
    };
    match &cli.cmd {
        Cmd::Hom {
            from,
            to,
            all,
            surjective,
        } => {
            let source = inputs::load_structure(from, report)?;
            let target = inputs::load_structure(to, report)?;
            let config = SearchConfig::from_bounds(&bounds);
            if *all {
                let homs = solver::enumerate_homs(&source, &target, &config)?;
                report.count("homomorphisms", homs.len() as u64);
                for (i, h) in homs.iter().take(10).enumerate() {
                    report.witness(&format!("map_{i:02}"), join_map(h.map()));
                }
                say(&format!("{} homomorphisms", homs.len()));
                for h in &homs {
                    say(&format!("  {}", join_map(h.map())));
                }
                Ok(if homs.is_empty() {
                    report.finish("NONE", 1)
                } else {
                    report.finish("FOUND", 0)
                })
            } else {
                let found = if *surjective {
                    solver::find_surjective_hom(&source, &target, &config)?
                } else {
                    solver::find_hom(&source, &target, &config)?
                };
                match found {
                    Some(h) => {
                        report.witness("map", join_map(h.map()));
                        say(&format!("homomorphism: {}", join_map(h.map())));
                        Ok(report.finish("FOUND", 0))
                    }
                    None => {
                        say("no homomorphism");
                        Ok(report.finish("NONE", 1))
                    }
                }
            }
        }
        Cmd::Pinch {
            template,
            n,
            out,
            dot,
        } => {
            if *n == 0 {
                return Err(Failure::new("--n must be at least 1"));
            }
            let a = inputs::load_structure(template, report)?;
            let pinch = constructions::n_pinch(&a, *n, &bounds)?;
            let (right, _) = constructions::b_right(&pinch)?;
            let (left, _) = constructions::b_left(&pinch)?;
            fs::write(out, inputs::structure_file("pinch", pinch.structure()))?;
            let br_path = format!("{}.br", out.display());
            let bl_path = format!("{}.bl", out.display());
            fs::write(&br_path, inputs::structure_file("b_right", &right))?;
            fs::write(&bl_path, inputs::structure_file("b_left", &left))?;
            if let Some(dot) = dot {
                fs::write(dot, incidence::incidence(pinch.structure()).to_dot())?;
            }
            report.count("size", pinch.size() as u64);
            report.count("br_size", right.size() as u64);
            report.count("bl_size", left.size() as u64);
            report.witness("out", out.display().to_string());
            say(&format!(
                "wrote {} (size {}), {br_path} (size {}), {bl_path} (size {})",
                out.display(),
                pinch.size(),
                right.size(),
                left.size()
            ));
            Ok(report.finish("WRITTEN", 0))
        }
        Cmd::Duality {
            template,
            family,
            max_n,
        } => {
            let max_n = max_n.unwrap_or(bounds.max_pinch_n);
            if let Some(name) = template {
                let a = inputs::load_structure(name, report)?;
                let verdict = duality::duality_upto(&a, max_n, &bounds)?;
                if let duality::DualityVerdict::DualityAt { witness, .. } = &verdict {
                    report.witness("map", join_map(witness.map()));
                }
                say(&verdict.to_string());
                let code = if verdict.level().is_some() { 0 } else { 1 };
                Ok(report.finish(verdict.to_string(), code))
            } else {
                if family.is_empty() {
                    return Err(Failure::new("pass --template or --family"));
                }
                let mut members = Vec::new();
                for name in family {
                    members.push(inputs::load_structure(name, report)?);
                }
                let fam = duality::colour_family_duality(&members, max_n, &bounds)?;
                for (i, v) in fam.verdicts.iter().enumerate() {
                    report.witness(&format!("verdict_{i}"), v.to_string());
                    say(&format!("{}: {v}", family[i]));
                }
                if fam.failing.is_empty() {
                    let bound = fam.diameter_bound.expect("all verdicts positive");
                    report.count("diameter_bound", bound);
                    say(&format!("critical obstruction diameter bound: {bound}"));
                    Ok(report.finish("FAMILY_DUALITY", 0))
                } else {
                    let names: Vec<&str> =
                        fam.failing.iter().map(|&i| family[i].as_str()).collect();
                    report.witness("failing", names.join(","));
                    say(&format!("no duality witness for: {}", names.join(", ")));
                    Ok(report.finish("NO_FAMILY_DUALITY", 1))
                }
            }
        }
        Cmd::Efgame {
            template,
            k,
            mode,
            seed,
            trials,
        } => {
            let a = inputs::load_structure(template, report)?;
            let mode = match mode {
                Mode::Exhaustive => game::VerifyMode::Exhaustive,
                Mode::Random => game::VerifyMode::Random {
                    seed: *seed,
                    trials: *trials,
                },
            };
            let outcome = game::verify_strategy(&a, *k, mode, &bounds)?;
            report.count("transcripts", outcome.transcripts);
            report.count("moves_examined", outcome.moves_examined);
            report.count("divergences", outcome.divergences);
            if let Some(d) = &outcome.first_divergence {
                report.witness("first_divergence", d.clone());
            }
            if outcome.duplicator_wins {
                say(&format!(
                    "DUPLICATOR WINS ({} transcripts, {} divergences between slice readings)",
                    outcome.transcripts, outcome.divergences
                ));
                Ok(report.finish("DUPLICATOR_WINS", 0))
            } else {
                let failure = outcome.failure.clone().unwrap_or_default();
                report.witness("failure", failure.clone());
                say("SPOILER WINS");
                say(&failure);
                Ok(report.finish("SPOILER_WINS", 1))
            }
        }
        Cmd::Lattice { cmd } => match cmd {
            LatticeCmd::Verify {
                n,
                target,
                subset_cap,
            } => {
                if *n == 0 {
                    return Err(Failure::new("--n must be at least 1"));
                }
                let target = inputs::load_lattice(target.as_deref(), report)?;
                let outcome =
                    lattice::verify_stack_preservation(&target, *n, *subset_cap, &bounds)?;
                report.count("stack_size", outcome.stack_size as u64);
                report.count("generator_sets", outcome.sets_checked as u64);
                say(&format!(
                    "clause 1 (no homomorphism into the target): {}",
                    if outcome.clause1_no_hom { "pass" } else { "FAIL" }
                ));
                say(&format!(
                    "clause 2 (all {} generator sets map onto two): {}",
                    outcome.sets_checked,
                    if outcome.failing_sets.is_empty() {
                        "pass"
                    } else {
                        "FAIL"
                    }
                ));
                if let Some(map) = &outcome.clause1_witness {
                    report.witness("unexpected_hom", join_map(map));
                }
                for (i, set) in outcome.failing_sets.iter().take(10).enumerate() {
                    report.witness(&format!("failing_set_{i:02}"), join_map(set));
                }
                Ok(if outcome.ok() {
                    report.finish("PASS", 0)
                } else {
                    report.finish("FAIL", 1)
                })
            }
            LatticeCmd::Dot { n, k, out } => {
                if *n == 0 || *k < 3 {
                    return Err(Failure::new("need --n >= 1 and --k >= 3"));
                }
                let lat = lattice::a_n(*n, *k);
                let dot = lat.to_dot();
                report.count("size", lat.size() as u64);
                match out {
                    Some(path) => fs::write(path, &dot)?,
                    None => say(&dot),
                }
                Ok(report.finish("WRITTEN", 0))
            }
        },
        Cmd::Closure {
            axioms,
            samples,
            max_n,
        } => {
            let named_axioms = inputs::load_sentences(axioms, report)?;
            let samples = inputs::load_samples(samples, report)?;
            let sentences: Vec<_> = named_axioms.iter().map(|(_, s)| s.clone()).collect();
            let outcome = logic::check_closure(&sentences, &samples, *max_n, &bounds)?;
            report.count("axioms", sentences.len() as u64);
            report.count("checks", outcome.entries.len() as u64);
            report.count("failures", outcome.failures as u64);
            for i in &outcome.empirical_only {
                report.witness(
                    &format!("empirical_only_{i:02}"),
                    named_axioms[*i].0.clone(),
                );
            }
            let mut shown = 0;
            for entry in outcome.entries.iter().filter(|e| !e.holds) {
                if shown < 10 {
                    report.witness(
                        &format!("failure_{shown:02}"),
                        format!("{} on {}", named_axioms[entry.axiom].0, entry.construction),
                    );
                }
                say(&format!(
                    "FAIL: {} on {}",
                    named_axioms[entry.axiom].0, entry.construction
                ));
                shown += 1;
            }
            if outcome.failures == 0 {
                say(&format!(
                    "all {} checks pass ({} axioms)",
                    outcome.entries.len(),
                    sentences.len()
                ));
                Ok(report.finish("CLOSED", 0))
            } else {
                Ok(report.finish(format!("FAILURES({})", outcome.failures), 1))
            }
        }
        Cmd::Obstructions {
            templates,
            max_size,
            critical_only,
        } => {
            let mut family = Vec::new();
            for name in templates {
                family.push(inputs::load_structure(name, report)?);
            }
            let records =
                duality::find_critical_obstructions(&family, *max_size, &bounds, true)?;
            let critical = records.iter().filter(|r| r.critical).count();
            report.count("obstructions", records.len() as u64);
            report.count("critical", critical as u64);
            let mut shown = 0;
            for rec in &records {
                if *critical_only && !rec.critical {
                    continue;
                }
                let label = format!(
                    "size={} critical={} diameter={}",
                    rec.structure.size(),
                    rec.critical,
                    rec.diameter
                );
                say(&format!("{label}\n{rec_text}", rec_text = rec.structure));
                if shown < 20 {
                    report.witness(&format!("obstruction_{shown:02}"), label);
                }
                shown += 1;
            }
            say(&format!(
                "{} obstructions, {critical} critical",
                records.len()
            ));
            Ok(if shown > 0 {
                report.finish("FOUND", 0)
            } else {
                report.finish("NONE", 1)
            })
        }
        Cmd::Metrics { structure, dot } => {
            let s = inputs::load_structure(structure, report)?;
            let inc = incidence::incidence(&s);
            report.count("size", s.size() as u64);
            report.count("blocks", inc.block_count() as u64);
            report.count("edges", inc.edge_count() as u64);
            report.witness("girth", inc.girth().to_string());
            report.witness("diameter", inc.diameter().to_string());
            if let Some(path) = dot {
                fs::write(path, inc.to_dot())?;
            }
            say(&format!(
                "size {}, {} blocks, {} edges, girth {}, diameter {}",
                s.size(),
                inc.block_count(),
                inc.edge_count(),
                inc.girth(),
                inc.diameter()
            ));
            Ok(report.finish("OK", 0))
        }
    }
}
