//! Machine-readable results of the command-line checks and their text
//! rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exactlin::{format_rational, SubspaceBasis};
use crate::finset::{DualityReport, EmbeddingVerdict};
use crate::lattice::{Distributivity, DistributivityReport};
use crate::multipullback::{
    CocycleReport, ComponentValue, Condition2Verdict, ExtensionVerdict, TheoremReport,
};
use crate::specfile::SpecFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    CheckFailed,
    HypothesisFailed,
    InvalidInput,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::CheckFailed => 1,
            Status::InvalidInput => 2,
            Status::HypothesisFailed => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::CheckFailed => "check-failed",
            Status::InvalidInput => "invalid-input",
            Status::HypothesisFailed => "hypothesis-failed",
        }
    }

    /// Combines two outcomes: invalid input beats a hypothesis failure,
    /// which beats a failed check.
    pub fn combine(self, other: Status) -> Status {
        self.max(other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionEntry {
    pub piece: String,
    pub image_dim: usize,
    pub piece_dim: usize,
    pub surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueSection {
    pub class_count: usize,
    pub pieces: Vec<EmbeddingVerdict>,
    pub pairs: Vec<EmbeddingVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapDims {
    pub pair: [String; 2],
    pub before: usize,
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepairOutcome {
    Repaired,
    Refused,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairSection {
    pub outcome: RepairOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overlaps: Vec<OverlapDims>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback_dim: Option<usize>,
    /// Whether the canonical map between the old and new pullbacks is a
    /// bijection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison_bijective: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub written_to: Option<String>,
    /// The check report of the repaired family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recheck: Option<Box<Report>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repaired: Option<SpecFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distributivity: Option<DistributivityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projections: Option<Vec<ProjectionEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition2: Option<Vec<ExtensionVerdict>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition3: Option<Vec<ExtensionVerdict>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glue: Option<GlueSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repair: Option<RepairSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
    pub status: Status,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, input: &str) -> Self {
        Report {
            command: command.to_string(),
            input: input.to_string(),
            pieces: Vec::new(),
            error: None,
            distributivity: None,
            pullback_dim: None,
            projections: None,
            cocycle: None,
            condition2: None,
            condition3: None,
            theorem: None,
            glue: None,
            duality: None,
            repair: None,
            notices: Vec::new(),
            status: Status::Pass,
            exit_code: 0,
        }
    }

    pub fn invalid(command: &str, input: &str, message: String) -> Self {
        let mut r = Report::new(command, input);
        r.error = Some(message);
        r.set_status(Status::InvalidInput);
        r
    }

    pub fn set_status(&mut self, s: Status) {
        self.status = s;
        self.exit_code = s.exit_code();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        render_into(self, &mut out, "");
        out
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// `B_12` for single-character labels, `B_{a,b}` otherwise.
pub fn overlap_name(a: &str, b: &str) -> String {
    if a.chars().count() == 1 && b.chars().count() == 1 {
        format!("B_{a}{b}")
    } else {
        format!("B_{{{a},{b}}}")
    }
}

/// `{0}`, the whole space, or an explicit span.
pub fn describe_subspace(s: &SubspaceBasis, whole: &str) -> String {
    if s.is_zero() {
        "{0}".into()
    } else if s.is_full() {
        whole.into()
    } else {
        let vecs: Vec<String> = s.vectors().map(tuple).collect();
        format!("span{{{}}}", vecs.join(", "))
    }
}

fn tuple(v: &[crate::exactlin::Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}

fn witness(w: &[ComponentValue]) -> String {
    w.iter()
        .map(|c| format!("b_{}={}", c.piece, tuple(&c.values)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn extension_lines(out: &mut String, pad: &str, name: &str, vs: &[ExtensionVerdict]) {
    let failed: Vec<&ExtensionVerdict> = vs.iter().filter(|v| !v.holds).collect();
    let _ = writeln!(
        out,
        "{pad}{name}: {} ({} of {} extensions hold)",
        verdict(failed.is_empty()),
        vs.len() - failed.len(),
        vs.len()
    );
    for v in failed {
        let _ = write!(out, "{pad}  cannot extend {{{}}} by {}", v.base.join(","), v.extend_by);
        if let Some(w) = &v.witness {
            let _ = write!(out, ": {}", witness(w));
        }
        out.push('\n');
    }
}

fn render_into(r: &Report, out: &mut String, pad: &str) {
    let _ = writeln!(out, "{pad}{} {}", r.command, r.input);
    if !r.pieces.is_empty() {
        let _ = writeln!(out, "{pad}pieces: {}", r.pieces.join(", "));
    }
    if let Some(e) = &r.error {
        let _ = writeln!(out, "{pad}error: {e}");
    }
    if let Some(d) = &r.distributivity {
        let _ = writeln!(out, "{pad}distributivity: {} ({})", verdict(d.overall), d.summary());
        for p in &d.pieces {
            if let Distributivity::NotDistributive { a, b, c } = &p.verdict {
                let whole = format!("B_{}", p.piece);
                let _ = writeln!(
                    out,
                    "{pad}  witness in {whole}: a={}, b={}, c={}",
                    describe_subspace(a, &whole),
                    describe_subspace(b, &whole),
                    describe_subspace(c, &whole)
                );
            }
        }
    }
    if let Some(d) = r.pullback_dim {
        let _ = writeln!(out, "{pad}multi-pullback: dim {d}");
    }
    if let Some(ps) = &r.projections {
        let all = ps.iter().all(|p| p.surjective);
        let _ = writeln!(out, "{pad}projections: {}", verdict(all));
        for p in ps {
            let _ = writeln!(
                out,
                "{pad}  onto {}: image dim {} of {}{}",
                p.piece,
                p.image_dim,
                p.piece_dim,
                if p.surjective { "" } else { " (not surjective)" }
            );
        }
    }
    if let Some(c) = &r.cocycle {
        let _ = writeln!(out, "{pad}cocycle condition: {}", verdict(c.overall));
        let _ = writeln!(out, "{pad}  clause 1: {}", verdict(c.condition1_holds()));
        for e in c.condition1.iter().filter(|e| !e.holds) {
            let [i, j, k] = &e.triple;
            let whole = overlap_name(i, j);
            let _ = writeln!(
                out,
                "{pad}    at ({i},{j},{k}): π^{i}_{j}(ker π^{i}_{k})={} vs π^{j}_{i}(ker π^{j}_{k})={}",
                describe_subspace(&e.left, &whole),
                describe_subspace(&e.right, &whole)
            );
        }
        let _ = writeln!(out, "{pad}  clause 2: {}", verdict(c.condition2_holds()));
        for e in &c.condition2 {
            let [i, j, k] = &e.triple;
            match &e.verdict {
                Condition2Verdict::Holds => {}
                Condition2Verdict::Fails { .. } => {
                    let _ = writeln!(
                        out,
                        "{pad}    at ({i},{j},{k}): φ^{{{i}{k}}}_{j} != φ^{{{i}{j}}}_{k} ∘ φ^{{{j}{k}}}_{i}"
                    );
                }
                Condition2Verdict::NotEvaluable => {
                    let _ = writeln!(out, "{pad}    at ({i},{j},{k}): not evaluable, clause 1 fails");
                }
            }
        }
    }
    if let Some(v) = &r.condition2 {
        extension_lines(out, pad, "extension over every subset", v);
    }
    if let Some(v) = &r.condition3 {
        extension_lines(out, pad, "extension over triples", v);
    }
    if let Some(t) = &r.theorem {
        let _ = writeln!(
            out,
            "{pad}equivalence: {} (cocycle={}, all extensions={}, triple extensions={})",
            if t.consistent { "consistent" } else { "INCONSISTENT" },
            t.cocycle,
            t.all_extensions,
            t.triple_extensions
        );
    }
    if let Some(g) = &r.glue {
        let _ = writeln!(out, "{pad}glued classes: {}", g.class_count);
        for (name, vs) in [("piece", &g.pieces), ("partial gluing", &g.pairs)] {
            for v in vs {
                let _ = write!(
                    out,
                    "{pad}  {name} {{{}}}: {}",
                    v.base.join(","),
                    if v.injective { "embedded" } else { "NOT embedded" }
                );
                if let Some([x, y]) = v.witnesses.first() {
                    let _ = write!(out, " ({} and {} meet)", x.join("~"), y.join("~"));
                }
                out.push('\n');
            }
        }
    }
    if let Some(d) = &r.duality {
        let _ = writeln!(
            out,
            "{pad}duality: {} (pullback dim {}, classes {})",
            verdict(d.consistent()),
            d.pullback_dim,
            d.class_count
        );
        for m in &d.mismatches {
            let _ = writeln!(out, "{pad}  mismatch: {m}");
        }
    }
    if let Some(rep) = &r.repair {
        let outcome = match rep.outcome {
            RepairOutcome::Repaired => "repaired",
            RepairOutcome::Refused => "REFUSED",
            RepairOutcome::Failed => "FAILED",
        };
        let _ = writeln!(out, "{pad}repair: {outcome}");
        if let Some(reason) = &rep.reason {
            let _ = writeln!(out, "{pad}  reason: {reason}");
        }
        for o in &rep.overlaps {
            let [a, b] = &o.pair;
            let _ = writeln!(out, "{pad}  overlap {{{a},{b}}}: dim {} -> {}", o.before, o.after);
        }
        if let Some(b) = rep.comparison_bijective {
            let _ = writeln!(out, "{pad}  comparison map bijective: {b}");
        }
        if let Some(p) = &rep.written_to {
            let _ = writeln!(out, "{pad}  written to {p}");
        }
        if let Some(re) = &rep.recheck {
            let _ = writeln!(out, "{pad}  re-check of the repaired family:");
            render_into(re, out, &format!("{pad}    "));
        }
    }
    for n in &r.notices {
        let _ = writeln!(out, "{pad}note: {n}");
    }
    let _ = writeln!(out, "{pad}status: {} (exit {})", r.status.name(), r.exit_code);
}
