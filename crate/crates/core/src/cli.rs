//! The `ggd` command line.
//!
//! Exit codes: 0 ok or true, 1 checked and false, 2 error, 3 search budget
//! exhausted. `--json` prints one report object per run, described by
//! [`REPORT_SCHEMA`].

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bibundle::{apply_bibundle, bibundle_from_functor, compose_bibundles};
use crate::bundle::{gauge_groupoid, trivialize};
use crate::construct::{fiber_product_groupoid, pullback_groupoid};
use crate::error::Error;
use crate::format::{render_bibundle, render_bundle, render_groupoid, BibundleFile, BundleFile};
use crate::functor::GroupoidExtension;
use crate::gerbe::{certify_gerbe, roundtrip_extension};
use crate::groupoid::FinGroupoid;
use crate::morita::{are_morita_equivalent, is_morita_morphism, skeleton};
use crate::report::Report;
use crate::search::{Meter, Search, DEFAULT_BUDGET};
use crate::workspace::{relative_path, Document, Workspace};

/// JSON schema for `--json` reports.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Parser)]
#[command(name = "ggd", version, about = "Finite groupoids, bibundles and extensions")]
struct Cli {
    /// Print a JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Search budget in nodes (default from GGD_BUDGET, else 1000000).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate any file against its axioms.
    Check { file: PathBuf },
    /// Isotropy group at an object.
    Isotropy { groupoid: PathBuf, object: String },
    /// Connected components.
    Orbits { groupoid: PathBuf },
    /// Pull a groupoid back along `new=old` object assignments.
    Pullback {
        groupoid: PathBuf,
        #[arg(required = true)]
        assignments: Vec<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Fiber product of two functors with a common codomain.
    Fprod {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decide Morita equivalence of two groupoids.
    Morita { first: PathBuf, second: PathBuf },
    /// Decide whether a functor is a Morita morphism.
    MoritaMorphism { functor: PathBuf },
    /// Validate a functor as an extension.
    ExtensionCheck { extension: PathBuf },
    /// Validate a principal bundle and trivialize it.
    BundleCheck { bundle: PathBuf },
    /// Gauge groupoid of a principal bundle.
    Gauge {
        bundle: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Bibundle of a functor.
    Bibundle {
        functor: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compose two bibundles, first then second.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Apply a bibundle to a principal bundle.
    Apply {
        bibundle: PathBuf,
        bundle: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decide whether a bibundle is biprincipal.
    Biprincipal { bibundle: PathBuf },
    /// Gerbe certificate of an extension.
    Gerbe { extension: PathBuf },
    /// Rebuild an extension from its bibundle.
    Roundtrip { extension: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Isotropy { .. } => "isotropy",
            Command::Orbits { .. } => "orbits",
            Command::Pullback { .. } => "pullback",
            Command::Fprod { .. } => "fprod",
            Command::Morita { .. } => "morita",
            Command::MoritaMorphism { .. } => "morita-morphism",
            Command::ExtensionCheck { .. } => "extension-check",
            Command::BundleCheck { .. } => "bundle-check",
            Command::Gauge { .. } => "gauge",
            Command::Bibundle { .. } => "bibundle",
            Command::Compose { .. } => "compose",
            Command::Apply { .. } => "apply",
            Command::Biprincipal { .. } => "biprincipal",
            Command::Gerbe { .. } => "gerbe",
            Command::Roundtrip { .. } => "roundtrip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    False,
    Error,
    BudgetExceeded,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok => 0,
            Verdict::False => 1,
            Verdict::Error => 2,
            Verdict::BudgetExceeded => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Ok => "ok",
            Verdict::False => "false",
            Verdict::Error => "error",
            Verdict::BudgetExceeded => "budget_exceeded",
        }
    }

    fn of(holds: bool) -> Self {
        if holds {
            Verdict::Ok
        } else {
            Verdict::False
        }
    }
}

/// What a command produced before formatting.
struct Outcome {
    verdict: Verdict,
    lines: Vec<String>,
    data: Value,
    violations: Option<Report>,
    /// Rendered file, written to `--output` or printed.
    artifact: Option<Artifact>,
}

enum Artifact {
    Groupoid(FinGroupoid),
    Bundle(BundleFile),
    Bibundle(BibundleFile),
}

impl Outcome {
    fn new(verdict: Verdict, data: Value) -> Self {
        Self { verdict, lines: Vec::new(), data, violations: None, artifact: None }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    fn report(mut self, r: Report) -> Self {
        if !r.is_ok() {
            self.lines.extend(r.violations.iter().map(|v| format!("violation {v}")));
        }
        self.violations = Some(r);
        self
    }
}

/// Runs one command line (including the program name) and returns the exit
/// code with everything that would be printed on stdout.
pub fn run_command<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let wants_json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            return if wants_json {
                (2, json_line(&json!({"schema": 1, "command": "usage", "verdict": "error", "exit_code": 2, "error": e.to_string()})))
            } else {
                (2, e.to_string())
            };
        }
    };
    let limit = cli.budget.or_else(|| std::env::var("GGD_BUDGET").ok().and_then(|v| v.trim().parse().ok())).unwrap_or(DEFAULT_BUDGET);
    let mut meter = Meter::new(limit);
    let name = cli.command.name();
    let output_path = match &cli.command {
        Command::Pullback { output, .. }
        | Command::Fprod { output, .. }
        | Command::Gauge { output, .. }
        | Command::Bibundle { output, .. }
        | Command::Compose { output, .. }
        | Command::Apply { output, .. } => output.clone(),
        _ => None,
    };
    let mut ws = Workspace::new();
    let result = execute(&cli.command, &mut ws, &mut meter).and_then(|o| emit(o, &ws, output_path.as_deref()));
    let (outcome, error, written) = match result {
        Ok((o, w)) => (Some(o), None, w),
        Err(e) => (None, Some(e), None),
    };
    let verdict = match (&outcome, &error) {
        (Some(o), _) => o.verdict,
        (None, Some(Error::BudgetExceeded(_))) => Verdict::BudgetExceeded,
        _ => Verdict::Error,
    };
    let code = verdict.exit_code();
    if cli.json {
        let mut report = json!({"schema": 1, "command": name, "verdict": verdict.label(), "exit_code": code});
        if let Some(o) = &outcome {
            report["data"] = o.data.clone();
            if let Some(r) = &o.violations {
                report["violations"] = serde_json::to_value(&r.violations).expect("violations serialize");
            }
        }
        if let Some(e) = &error {
            report["error"] = Value::String(e.to_string());
        }
        if let Some(w) = &written {
            report["output"] = Value::String(w.clone());
        }
        return (code, json_line(&report));
    }
    let mut text = String::new();
    if let Some(o) = &outcome {
        for l in &o.lines {
            text.push_str(l);
            text.push('\n');
        }
    }
    if let Some(e) = &error {
        text.push_str(&format!("error: {e}\n"));
    }
    match (&written, outcome.as_ref().and_then(|o| o.artifact.as_ref())) {
        (Some(w), _) => text.push_str(&format!("wrote {w}\n")),
        (None, Some(a)) => text.push_str(&render_artifact(a, &ws, None)),
        _ => {}
    }
    text.push_str(&format!("verdict: {}\n", verdict.label()));
    (code, text)
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Writes the artifact when an output path is given.
fn emit(o: Outcome, ws: &Workspace, output: Option<&Path>) -> Result<(Outcome, Option<String>), Error> {
    let (Some(path), Some(artifact)) = (output, o.artifact.as_ref()) else {
        return Ok((o, None));
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let dir = dir.canonicalize().map_err(|e| Error::Io { path: dir.display().to_string(), message: e.to_string() })?;
    let text = render_artifact(artifact, ws, Some(&dir));
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok((o, Some(path.display().to_string())))
}

fn render_artifact(a: &Artifact, ws: &Workspace, dir: Option<&Path>) -> String {
    let path_of = |g: &Arc<FinGroupoid>| -> String {
        match (ws.path_of(g), dir) {
            (Some(p), Some(d)) => relative_path(p, d).display().to_string(),
            (Some(p), None) => p.display().to_string(),
            (None, _) => "unsaved.ggd".to_string(),
        }
    };
    match a {
        Artifact::Groupoid(g) => render_groupoid(g),
        Artifact::Bundle(f) => render_bundle(&BundleFile { bundle: f.bundle.clone(), groupoid_path: path_of(f.bundle.groupoid()) }),
        Artifact::Bibundle(f) => render_bibundle(&BibundleFile {
            bibundle: f.bibundle.clone(),
            left_path: path_of(f.bibundle.left_groupoid()),
            right_path: path_of(f.bibundle.right_groupoid()),
        }),
    }
}

fn search_verdict<T>(s: &Search<T>) -> Verdict {
    match s {
        Search::Found(_) => Verdict::Ok,
        Search::NotFound => Verdict::False,
        Search::BudgetExceeded => Verdict::BudgetExceeded,
    }
}

fn counts(g: &FinGroupoid) -> String {
    format!("{} objects, {} arrows", g.num_objects(), g.num_arrows())
}

fn execute(command: &Command, ws: &mut Workspace, meter: &mut Meter) -> Result<Outcome, Error> {
    Ok(match command {
        Command::Check { file } => {
            let (kind, report) = match ws.load(file)? {
                Document::Groupoid(g) => ("groupoid", g.validate()),
                Document::Map(m) if m.extension => ("extension", GroupoidExtension::new(m.map).validate()),
                Document::Map(m) => ("functor", m.map.validate()),
                Document::Bundle(b) => ("bundle", b.bundle.validate()),
                Document::Bibundle(b) => ("bibundle", b.bibundle.validate()),
            };
            Outcome::new(Verdict::of(report.is_ok()), json!({"kind": kind, "valid": report.is_ok()}))
                .line(format!("{kind}: {}", if report.is_ok() { "valid" } else { "invalid" }))
                .report(report)
        }
        Command::Isotropy { groupoid, object } => {
            let g = ws.groupoid(groupoid)?;
            let k = g.isotropy_group(object)?;
            Outcome::new(
                Verdict::Ok,
                json!({"object": object, "order": k.order(), "abelian": k.is_abelian(), "order_profile": k.order_profile(), "elements": k.elements()}),
            )
            .line(format!("isotropy at {object}: order {}, {}", k.order(), if k.is_abelian() { "abelian" } else { "non-abelian" }))
            .line(format!("elements: {}", k.elements().join(" ")))
        }
        Command::Orbits { groupoid } => {
            let g = ws.groupoid(groupoid)?;
            let orbits = g.orbit_ids();
            let mut o = Outcome::new(Verdict::Ok, json!({"orbits": orbits, "transitive": g.is_transitive()}))
                .line(format!("{} orbits", orbits.len()));
            for block in &orbits {
                o = o.line(format!("  {}", block.join(" ")));
            }
            o
        }
        Command::Pullback { groupoid, assignments, .. } => {
            let g = ws.groupoid(groupoid)?;
            let mut names = Vec::new();
            let mut map = Vec::new();
            for a in assignments {
                let (new, old) = a.split_once('=').ok_or_else(|| Error::Invalid(format!("expected new=old, found `{a}`")))?;
                names.push(new.to_string());
                map.push(g.object_index(old).ok_or_else(|| Error::UnknownObject(old.into()))?);
            }
            let pb = pullback_groupoid(&g, &names, &map)?;
            let out = (*pb.groupoid).clone();
            let mut o = Outcome::new(Verdict::Ok, json!({"objects": out.num_objects(), "arrows": out.num_arrows()}))
                .line(format!("pullback: {}", counts(&out)));
            o.artifact = Some(Artifact::Groupoid(out));
            o
        }
        Command::Fprod { left, right, .. } => {
            let (phi, psi) = (ws.map(left)?.map, ws.map(right)?.map);
            let fp = fiber_product_groupoid(&phi, &psi)?;
            let g = (*fp.groupoid).clone();
            let mut o = Outcome::new(
                Verdict::Ok,
                json!({"objects": g.num_objects(), "arrows": g.num_arrows(), "transitive": g.is_transitive()}),
            )
            .line(format!("fiber product: {}", counts(&g)));
            o.artifact = Some(Artifact::Groupoid(g));
            o
        }
        Command::Morita { first, second } => {
            let (a, b) = (ws.groupoid(first)?, ws.groupoid(second)?);
            let s = are_morita_equivalent(&a, &b, meter);
            let sk = |g: &FinGroupoid| {
                let s = skeleton(g);
                s.orbit_reps.iter().zip(&s.iso_classes).map(|(r, k)| json!({"rep": r, "isotropy_order": k.order()})).collect::<Vec<_>>()
            };
            let verdict = search_verdict(&s);
            let matching = s.clone().found();
            let mut o = Outcome::new(
                verdict,
                json!({"equivalent": matching.is_some(), "matching": matching, "skeleton_first": sk(&a), "skeleton_second": sk(&b), "budget_used": meter.used()}),
            );
            o = o.line(match &s {
                Search::Found(m) => format!(
                    "Morita equivalent; orbits matched {}",
                    m.iter().map(|(x, y)| format!("{x}~{y}")).collect::<Vec<_>>().join(" ")
                ),
                Search::NotFound => "not Morita equivalent".into(),
                Search::BudgetExceeded => format!("undecided: budget of {} exhausted", meter.limit()),
            });
            o
        }
        Command::MoritaMorphism { functor } => {
            let m = ws.map(functor)?.map;
            let r = is_morita_morphism(&m)?;
            let mut o = Outcome::new(
                Verdict::of(r.is_morita()),
                json!({
                    "morita": r.is_morita(),
                    "essentially_surjective": r.essentially_surjective,
                    "surjective_on_objects": r.surjective_on_objects,
                    "fully_faithful": r.witness.is_some(),
                    "missed_orbits": r.missed_orbits,
                    "failure": r.failure,
                }),
            )
            .line(if r.is_morita() { "Morita morphism" } else { "not a Morita morphism" });
            if let Some(f) = &r.failure {
                o = o.line(format!("reason: {f}"));
            }
            if !r.surjective_on_objects {
                o = o.line("note: not surjective on objects");
            }
            o
        }
        Command::ExtensionCheck { extension } => {
            let e = ws.extension(extension)?;
            let r = e.validate();
            Outcome::new(Verdict::of(r.is_ok()), json!({"valid": r.is_ok()}))
                .line(if r.is_ok() { "valid extension" } else { "not an extension" })
                .report(r)
        }
        Command::BundleCheck { bundle } => {
            let b = ws.bundle(bundle)?.bundle;
            let r = b.validate();
            let mut data = json!({"valid": r.is_ok(), "carrier": b.carrier().len(), "base": b.base().len()});
            let mut o = Outcome::new(Verdict::of(r.is_ok()), Value::Null)
                .line(format!("principal bundle: {}", if r.is_ok() { "valid" } else { "invalid" }));
            if r.is_ok() {
                let t = trivialize(&b)?;
                let g = b.groupoid();
                let section: Vec<&str> = t.section.iter().map(|&p| b.carrier()[p].as_str()).collect();
                let classifying: Vec<&str> = t.classifying.iter().map(|&x| g.object_id(x)).collect();
                o = o.line(format!("section: {}", section.join(" "))).line(format!("classifying map: {}", classifying.join(" ")));
                data["section"] = json!(section);
                data["classifying"] = json!(classifying);
            }
            o.data = data;
            o.report(r)
        }
        Command::Gauge { bundle, .. } => {
            let b = ws.bundle(bundle)?.bundle;
            let gauge = gauge_groupoid(&b)?;
            let g = (*gauge.groupoid).clone();
            let valid = g.validate().is_ok();
            let mut o = Outcome::new(Verdict::of(valid), json!({"objects": g.num_objects(), "arrows": g.num_arrows(), "valid": valid}))
                .line(format!("gauge groupoid: {}", counts(&g)));
            o.artifact = Some(Artifact::Groupoid(g));
            o
        }
        Command::Bibundle { functor, .. } => {
            let m = ws.map(functor)?.map;
            let r = m.validate();
            if !r.is_ok() {
                return Ok(Outcome::new(Verdict::False, json!({"valid": false})).line("not a functor").report(r));
            }
            let p = bibundle_from_functor(&m);
            let valid = p.validate().is_ok();
            let bi = p.is_biprincipal();
            let mut o = Outcome::new(Verdict::of(valid), json!({"carrier": p.len(), "valid": valid, "biprincipal": bi}))
                .line(format!("bibundle on {} points, {}", p.len(), if bi { "biprincipal" } else { "not biprincipal" }));
            o.artifact = Some(Artifact::Bibundle(BibundleFile { bibundle: p, left_path: String::new(), right_path: String::new() }));
            o
        }
        Command::Compose { first, second, .. } => {
            let (p, q) = (ws.bibundle(first)?.bibundle, ws.bibundle(second)?.bibundle);
            let c = compose_bibundles(&p, &q)?.bibundle;
            let r = c.validate();
            let mut o = Outcome::new(Verdict::of(r.is_ok()), json!({"carrier": c.len(), "valid": r.is_ok()}))
                .line(format!("composite on {} points", c.len()))
                .report(r);
            o.artifact = Some(Artifact::Bibundle(BibundleFile { bibundle: c, left_path: String::new(), right_path: String::new() }));
            o
        }
        Command::Apply { bibundle, bundle, .. } => {
            let p = ws.bibundle(bibundle)?.bibundle;
            let b = ws.bundle(bundle)?.bundle;
            let applied = apply_bibundle(&p, &b)?.bundle;
            let r = applied.validate();
            let mut o = Outcome::new(Verdict::of(r.is_ok()), json!({"carrier": applied.carrier().len(), "valid": r.is_ok()}))
                .line(format!("applied bundle on {} points", applied.carrier().len()))
                .report(r);
            o.artifact = Some(Artifact::Bundle(BundleFile { bundle: applied, groupoid_path: String::new() }));
            o
        }
        Command::Biprincipal { bibundle } => {
            let p = ws.bibundle(bibundle)?.bibundle;
            let r = p.biprincipality();
            Outcome::new(Verdict::of(r.is_ok()), json!({"biprincipal": r.is_ok()}))
                .line(if r.is_ok() { "biprincipal" } else { "not biprincipal" })
                .report(r)
        }
        Command::Gerbe { extension } => {
            let e = ws.extension(extension)?;
            let c = certify_gerbe(&e, meter)?;
            let fp = &c.fiber_product.groupoid;
            let order = c.isotropy_k.as_ref().map(|k| k.order());
            let mut o = Outcome::new(
                Verdict::of(c.certified()),
                json!({
                    "certified": c.certified(),
                    "transitive": c.transitive,
                    "isotropy_order": order,
                    "base_object": c.base_object,
                    "fiber_product_objects": fp.num_objects(),
                    "fiber_product_arrows": fp.num_arrows(),
                    "surjective_on_arrows": c.surjective_on_arrows,
                    "orbit_report": c.orbit_report,
                    "morita_reduction": c.morita_witness.as_ref().map(|w| json!({"matching": w.orbit_matching, "inclusion_is_morita": w.inclusion_is_morita})),
                }),
            )
            .line(format!("fiber product: {}", counts(fp)))
            .line(format!("transitive: {}", c.transitive));
            if let Some(n) = order {
                o = o.line(format!("isotropy order: {n}"));
            }
            if let Some(orbits) = &c.orbit_report {
                o = o.line(format!("orbits: {}", orbits.iter().map(|b| b.join(" ")).collect::<Vec<_>>().join(" | ")));
                o = o.line("not certified: the fiber product is not transitive");
            }
            o
        }
        Command::Roundtrip { extension } => {
            let e = ws.extension(extension)?;
            match roundtrip_extension(&e, meter) {
                Ok(r) => {
                    let (k, h) = (&r.gauge, e.cod());
                    let witness: Vec<(String, String)> =
                        (0..k.num_arrows()).map(|a| (k.arrow_id(a).to_string(), h.arrow_id(r.witness.arrows[a]).to_string())).collect();
                    Outcome::new(
                        Verdict::of(r.theta_report.is_ok()),
                        json!({"recovered": true, "gauge_objects": k.num_objects(), "gauge_arrows": k.num_arrows(), "theta_valid": r.theta_report.is_ok(), "witness": witness}),
                    )
                    .line(format!("gauge groupoid: {}", counts(k)))
                    .line("recovered the codomain; theta agrees with the extension")
                    .report(r.theta_report)
                }
                Err(e @ (Error::ReconstructionMismatch | Error::NoIsomorphism)) => {
                    Outcome::new(Verdict::False, json!({"recovered": false, "reason": e.to_string()})).line(format!("not recovered: {e}"))
                }
                Err(e) => return Err(e),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        let (code, _) = run_command(["ggd", "frobnicate"]);
        assert_eq!(code, 2);
        let (code, out) = run_command(["ggd", "--json", "check"]);
        assert_eq!(code, 2);
        assert!(out.contains("\"usage\""));
        let (code, _) = run_command(["ggd", "--help"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn missing_file_is_an_error() {
        let (code, out) = run_command(["ggd", "check", "/nonexistent/x.ggd"]);
        assert_eq!(code, 2, "{out}");
    }
}
