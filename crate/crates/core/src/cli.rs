//! Command-line front end: `check`, `glue` and `repair`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::finset::{check_embedding, duality_check, dualize, fixture, glue, Fixture, FIXTURE_NAMES};
use crate::multipullback::{
    build_pullback, check_cocycle, check_condition2, check_condition3, check_theorem_equivalence,
    projection_surjective, repair, CheckOptions, GluingFamily, PullbackError, RepairError,
    TheoremError,
};
use crate::lattice::check_distributive_family;
use crate::report::{
    GlueSection, OverlapDims, ProjectionEntry, RepairOutcome, RepairSection, Report, Status,
};
use crate::specfile::{Spec, SpecFile, SpecOptions};

#[derive(Debug, Parser)]
#[command(name = "gluing", version, about = "Checks gluing data for finite-dimensional algebras and finite sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distributivity, cocycle condition and extension properties of a family.
    Check(InputArgs),
    /// Glued space, embeddings of pieces and pairs, optional duality check.
    Glue(GlueArgs),
    /// Re-present a family by canonical quotients of its multi-pullback.
    Repair(RepairArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// JSON spec file.
    #[arg(required_unless_present = "fixture")]
    pub path: Option<PathBuf>,
    /// Built-in fixture instead of a file: tstar, tcirc-a, tcirc-c, example1, example2, example3.
    #[arg(long, conflicts_with = "path")]
    pub fixture: Option<String>,
    /// Cap on the size of lattice closures.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Largest index set enumerated by the all-subsets extension check.
    #[arg(long)]
    pub max_j: Option<usize>,
    /// Points per interval in fixtures.
    #[arg(long)]
    pub chain_length: Option<usize>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GlueArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also compare with the dual algebra family.
    #[arg(long)]
    pub duality: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RepairArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Write the repaired family here as a spec file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Loaded {
    name: String,
    spec: Spec,
    options: SpecOptions,
}

impl InputArgs {
    fn name(&self) -> String {
        match (&self.fixture, &self.path) {
            (Some(f), _) => format!("fixture {f}"),
            (None, Some(p)) => p.display().to_string(),
            (None, None) => String::new(),
        }
    }

    /// Flags override options stored in the file.
    fn load(&self) -> Result<Loaded, String> {
        let (spec, mut options) = match (&self.fixture, &self.path) {
            (Some(name), _) => {
                let n = self.chain_length.unwrap_or(crate::finset::DEFAULT_CHAIN_LENGTH);
                if n < 2 {
                    return Err(format!("chain length must be at least 2, got {n}"));
                }
                let spec = match fixture(name, n) {
                    Some(Fixture::Family(f)) => Spec::Family(f),
                    Some(Fixture::Gluing(g)) => Spec::Gluing(g),
                    None => {
                        return Err(format!(
                            "unknown fixture {name:?}; known: {}",
                            FIXTURE_NAMES.join(", ")
                        ))
                    }
                };
                (spec, SpecOptions::default())
            }
            (None, Some(path)) => {
                let file = SpecFile::read(path).map_err(|e| e.to_string())?;
                (file.to_spec().map_err(|e| e.to_string())?, file.options.clone())
            }
            (None, None) => return Err("no input: give a path or --fixture".into()),
        };
        if self.cap.is_some() {
            options.cap = self.cap;
        }
        if self.max_j.is_some() {
            options.max_j = self.max_j;
        }
        if self.chain_length.is_some() {
            options.chain_length = self.chain_length;
        }
        Ok(Loaded {
            name: self.name(),
            spec,
            options,
        })
    }
}

fn family_of(loaded: &Loaded, report: &mut Report) -> Result<GluingFamily, String> {
    match &loaded.spec {
        Spec::Family(f) => Ok(f.clone()),
        Spec::Gluing(g) => {
            report.notices.push("finite gluing input checked through its dual algebra family".into());
            dualize(g).map_err(|e| e.to_string())
        }
    }
}

/// The status implied by a pullback-level error.
fn pullback_status(e: &PullbackError) -> Status {
    match e {
        PullbackError::TooManyPieces { .. } | PullbackError::NotSurjective { .. } => {
            Status::HypothesisFailed
        }
        _ => Status::InvalidInput,
    }
}

/// Runs every family check and records the combined status.
pub fn check_family(fam: &GluingFamily, opts: CheckOptions, command: &str, input: &str) -> Report {
    let mut r = Report::new(command, input);
    r.pieces = fam.ordered().iter().map(|&i| fam.label(i).to_string()).collect();
    let mut status = Status::Pass;
    let mut fail = |r: &mut Report, s: Status, note: String| {
        status = status.combine(s);
        if !note.is_empty() {
            r.notices.push(note);
        }
    };

    match check_distributive_family(fam, opts.cap) {
        Ok(d) => {
            if !d.overall {
                fail(&mut r, Status::HypothesisFailed, format!("family is not distributive: {}", d.summary()));
            }
            r.distributivity = Some(d);
        }
        Err(e) => fail(&mut r, Status::InvalidInput, e.to_string()),
    }

    let all: Vec<usize> = (0..fam.len()).collect();
    match build_pullback(fam, &all) {
        Ok(p) => {
            r.pullback_dim = Some(p.dim());
            let mut entries = Vec::new();
            for i in fam.ordered() {
                match projection_surjective(&p, i) {
                    Ok((onto, image)) => entries.push(ProjectionEntry {
                        piece: fam.label(i).to_string(),
                        image_dim: image.dim(),
                        piece_dim: fam.piece(i).dim(),
                        surjective: onto,
                    }),
                    Err(e) => fail(&mut r, pullback_status(&e), e.to_string()),
                }
            }
            if entries.iter().any(|e| !e.surjective) {
                fail(&mut r, Status::CheckFailed, String::new());
            }
            r.projections = Some(entries);
        }
        Err(e) => fail(&mut r, pullback_status(&e), e.to_string()),
    }

    if !fam.is_surjective_family() {
        fail(
            &mut r,
            Status::HypothesisFailed,
            "family maps are not all surjective; cocycle and extension checks skipped".into(),
        );
    } else {
        match check_cocycle(fam) {
            Ok(c) => {
                if !c.overall {
                    fail(&mut r, Status::CheckFailed, String::new());
                }
                r.cocycle = Some(c);
            }
            Err(e) => fail(&mut r, pullback_status(&e), e.to_string()),
        }
        match check_condition2(fam, opts.max_j) {
            Ok(v) => {
                if v.iter().any(|x| !x.holds) {
                    fail(&mut r, Status::CheckFailed, String::new());
                }
                r.condition2 = Some(v);
            }
            Err(e) => fail(&mut r, pullback_status(&e), e.to_string()),
        }
        match check_condition3(fam) {
            Ok(v) => {
                if v.iter().any(|x| !x.holds) {
                    fail(&mut r, Status::CheckFailed, String::new());
                }
                r.condition3 = Some(v);
            }
            Err(e) => fail(&mut r, pullback_status(&e), e.to_string()),
        }
        if r.distributivity.as_ref().is_some_and(|d| d.overall) {
            match check_theorem_equivalence(fam, opts) {
                Ok(t) => {
                    if !t.consistent {
                        fail(&mut r, Status::CheckFailed, "verdicts of the equivalence disagree".into());
                    }
                    r.theorem = Some(t);
                }
                Err(TheoremError::HypothesisFailed(_)) => {}
                Err(TheoremError::Pullback(e)) => {
                    let s = pullback_status(&e);
                    // Already reported by the individual checks above.
                    if s != Status::HypothesisFailed {
                        fail(&mut r, s, e.to_string());
                    }
                }
            }
        } else {
            r.notices.push("equivalence check skipped: distributivity hypothesis not met".into());
        }
    }
    r.set_status(status);
    r
}

pub fn cmd_check(args: &InputArgs) -> Report {
    let loaded = match args.load() {
        Ok(l) => l,
        Err(e) => return Report::invalid("check", &args.name(), e),
    };
    let mut pre = Report::new("check", &loaded.name);
    let fam = match family_of(&loaded, &mut pre) {
        Ok(f) => f,
        Err(e) => return Report::invalid("check", &loaded.name, e),
    };
    let mut r = check_family(&fam, loaded.options.check_options(), "check", &loaded.name);
    let mut notices = pre.notices;
    notices.append(&mut r.notices);
    r.notices = notices;
    r
}

pub fn cmd_glue(args: &GlueArgs) -> Report {
    let loaded = match args.input.load() {
        Ok(l) => l,
        Err(e) => return Report::invalid("glue", &args.input.name(), e),
    };
    let spec = match &loaded.spec {
        Spec::Gluing(g) => g,
        Spec::Family(_) => {
            return Report::invalid(
                "glue",
                &loaded.name,
                "glue needs kind finite-gluing, found algebra-family".into(),
            )
        }
    };
    let mut r = Report::new("glue", &loaded.name);
    r.pieces = spec.labels().to_vec();
    let inner = || -> Result<(GlueSection, Status), crate::finset::FinsetError> {
        let all: Vec<usize> = (0..spec.len()).collect();
        let glued = glue(spec, &all)?;
        let mut order = all.clone();
        order.sort_by(|&a, &b| spec.labels()[a].cmp(&spec.labels()[b]));
        let mut pieces = Vec::new();
        let mut pairs = Vec::new();
        for (n, &i) in order.iter().enumerate() {
            pieces.push(check_embedding(spec, &[i], &all)?);
            for &j in &order[n + 1..] {
                pairs.push(check_embedding(spec, &[i, j], &all)?);
            }
        }
        let ok = pieces.iter().chain(&pairs).all(|v| v.injective);
        let section = GlueSection {
            class_count: glued.class_count(),
            pieces,
            pairs,
        };
        Ok((section, if ok { Status::Pass } else { Status::CheckFailed }))
    };
    let mut status = match inner() {
        Ok((g, s)) => {
            r.glue = Some(g);
            s
        }
        Err(e) => return Report::invalid("glue", &loaded.name, e.to_string()),
    };
    if args.duality {
        match duality_check(spec) {
            Ok(d) => {
                if !d.consistent() {
                    status = status.combine(Status::CheckFailed);
                }
                r.duality = Some(d);
            }
            Err(e) => {
                status = status.combine(Status::InvalidInput);
                r.notices.push(e.to_string());
            }
        }
    }
    r.set_status(status);
    r
}

pub fn cmd_repair(args: &RepairArgs) -> Report {
    let loaded = match args.input.load() {
        Ok(l) => l,
        Err(e) => return Report::invalid("repair", &args.input.name(), e),
    };
    let mut r = Report::new("repair", &loaded.name);
    let fam = match family_of(&loaded, &mut r) {
        Ok(f) => f,
        Err(e) => return Report::invalid("repair", &loaded.name, e),
    };
    r.pieces = fam.ordered().iter().map(|&i| fam.label(i).to_string()).collect();
    let opts = loaded.options.check_options();
    let section = |outcome, reason| RepairSection {
        outcome,
        reason,
        overlaps: Vec::new(),
        pullback_dim: None,
        comparison_bijective: None,
        written_to: None,
        recheck: None,
        repaired: None,
    };
    let repaired = match repair(&fam, opts.cap) {
        Ok(x) => x,
        Err(e) => {
            let status = match &e {
                RepairError::ProjectionNotSurjective { .. } | RepairError::NotDistributive(_) => {
                    Status::HypothesisFailed
                }
                RepairError::Pullback(p) => pullback_status(p),
                RepairError::Postcondition(_) => Status::CheckFailed,
                RepairError::Family(_) | RepairError::Lin(_) => Status::InvalidInput,
            };
            let outcome = if status == Status::HypothesisFailed {
                RepairOutcome::Refused
            } else {
                RepairOutcome::Failed
            };
            r.repair = Some(section(outcome, Some(e.to_string())));
            r.set_status(status);
            return r;
        }
    };

    let mut sec = section(RepairOutcome::Repaired, None);
    let order = fam.ordered();
    for (n, &i) in order.iter().enumerate() {
        for &j in &order[n + 1..] {
            sec.overlaps.push(OverlapDims {
                pair: [fam.label(i).to_string(), fam.label(j).to_string()],
                before: fam.overlap(i, j).dim(),
                after: repaired.family.overlap(i, j).dim(),
            });
        }
    }
    sec.pullback_dim = Some(repaired.pullback_dim);
    sec.comparison_bijective = Some(repaired.comparison.inverse().is_some());

    let mut status = Status::Pass;
    let file = SpecFile::from_family(&repaired.family, loaded.options.clone());
    let text = file.to_json();
    match SpecFile::from_json(&text).and_then(|f| f.to_family()) {
        Ok(back) if back == repaired.family => {}
        _ => {
            status = Status::CheckFailed;
            r.notices.push("repaired spec file does not re-parse to the same family".into());
        }
    }
    if let Some(out) = &args.out {
        match std::fs::write(out, format!("{text}\n")) {
            Ok(()) => sec.written_to = Some(out.display().to_string()),
            Err(e) => {
                status = status.combine(Status::InvalidInput);
                r.notices.push(format!("cannot write {}: {e}", out.display()));
            }
        }
    }
    let recheck = check_family(&repaired.family, opts, "check", "repaired family");
    if !recheck.cocycle.as_ref().is_some_and(|c| c.overall) {
        status = status.combine(Status::CheckFailed);
        r.notices.push("repaired family fails the cocycle condition".into());
    }
    sec.recheck = Some(Box::new(recheck));
    sec.repaired = Some(file);
    r.repair = Some(sec);
    r.set_status(status);
    r
}

/// Runs a parsed command line and returns the report and the text to print.
pub fn run(cli: &Cli) -> (Report, String) {
    let (report, json) = match &cli.command {
        Command::Check(a) => (cmd_check(a), a.json),
        Command::Glue(a) => (cmd_glue(a), a.input.json),
        Command::Repair(a) => (cmd_repair(a), a.input.json),
    };
    let text = if json {
        format!("{}\n", report.to_json())
    } else {
        report.render_text()
    };
    (report, text)
}
