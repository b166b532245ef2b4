use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tetrad::doc::{GroupDocument, ReportDocument, ReportStatus};
use tetrad::families::{
    build, lemma_certificate, predicted_profile, run_oracle, verify_against_oracle, Caps, Family, FamilyParams,
    Instance, OracleStatus,
};
use tetrad::selftest;
use tetrad::{ActError, DocError, FamilyError, GroupError};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAPS: u8 = 3;

#[derive(Parser)]
#[command(name = "tetrad", version, about = "Build and check solvable groups with four character degrees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a family instance and write its group document.
    Build(BuildArgs),
    /// Check the lemma hypotheses and report the predicted profile.
    Certify(RunArgs),
    /// Enumerate G and compute its degrees, derived length and Fitting height.
    Oracle(RunArgs),
    /// Certify, run the oracle, and compare.
    Verify(RunArgs),
    /// Run the built-in property suites.
    Selftest(SelftestArgs),
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Args, Clone)]
struct CapArgs {
    /// Largest |G| the oracle enumerates [default: 2000000]
    #[arg(long)]
    max_order: Option<u64>,
    /// Largest class count the oracle handles [default: 3000]
    #[arg(long)]
    max_classes: Option<usize>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    caps: CapArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Group document written by `build`.
    #[arg(long = "in", conflicts_with = "family")]
    input: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    caps: CapArgs,
    /// Write the report document here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the report document on stdout instead of the summary.
    #[arg(long)]
    json: bool,
    /// Include wall-clock timings (outside the canonical fields).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only suites whose name contains this string.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, hide = true)]
    break_composition: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

fn is_cap(e: &FamilyError) -> bool {
    matches!(
        e,
        FamilyError::Group(GroupError::ClosureLimitExceeded(_)) | FamilyError::Act(ActError::Group(GroupError::ClosureLimitExceeded(_)))
    )
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        let code = match &e {
            FamilyError::SearchFailed(_) => EXIT_FAIL,
            e if is_cap(e) => EXIT_CAPS,
            _ => EXIT_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Family(f) => f.into(),
            e => Self::input(e.to_string()),
        }
    }
}

impl FamilyArgs {
    fn params(&self) -> Result<FamilyParams, Failure> {
        let family = self.family.ok_or_else(|| Failure::input("--family is required"))?;
        let p = self.p.ok_or_else(|| Failure::input("--p is required"))?;
        let params = FamilyParams { family, p, q: self.q, r: self.r, n: self.n, m: self.m };
        params.validate()?;
        Ok(params)
    }
}

impl CapArgs {
    fn resolve(&self, base: Caps) -> Caps {
        Caps { max_order: self.max_order.unwrap_or(base.max_order), max_classes: self.max_classes.unwrap_or(base.max_classes) }
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => Ok(()),
    }
}

fn load(args: &RunArgs) -> Result<(Instance, Caps), Failure> {
    match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let doc = GroupDocument::from_json(&text)?;
            let caps = args.caps.resolve(doc.caps.to_caps()?);
            Ok((doc.to_instance()?, caps))
        }
        None => Ok((build(&args.family.params()?)?, args.caps.resolve(Caps::default()))),
    }
}

fn cmd_build(args: &BuildArgs) -> Result<u8, Failure> {
    let params = args.family.params()?;
    let inst = build(&params)?;
    let doc = GroupDocument::from_instance(&inst, &args.caps.resolve(Caps::default()));
    let text = doc.to_json();
    if args.out.is_some() {
        write_or_print(&args.out, &text)?;
        println!("{}: |P| = {}^{}, |H| = {}, |G| = {}", params.label(), inst.p_group.p(), doc.p_order_exponent, doc.h_order, doc.g_order);
        for f in &doc.flags {
            println!("flag: {f}");
        }
    } else {
        print!("{text}");
    }
    Ok(0)
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Certify,
    Oracle,
    Verify,
}

fn tag<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_value(value).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn opt<T: std::fmt::Display>(value: Option<T>) -> String {
    value.map_or_else(|| "-".into(), |v| v.to_string())
}

fn summary(report: &ReportDocument) -> String {
    let mut out = format!("{}: {}\n", report.label, tag(&report.status));
    if let Some(s) = &report.summary {
        out.push_str(&format!("|G| = {}", s.g_order));
        if let Some(c) = &s.c_order {
            out.push_str(&format!(", |C| = {c}"));
        }
        if let Some(d) = &s.d_order {
            out.push_str(&format!(", |D| = {d}"));
        }
        out.push('\n');
    }
    if let Some(c) = &report.certificate {
        if let (Some(case), Some(a)) = (c.case, c.a) {
            out.push_str(&format!("case {case}, a = {a}, |H| = {}\n", c.h_order));
        }
        for check in c.checks.iter().filter(|c| c.verdict == tetrad::families::Verdict::Fail) {
            out.push_str(&format!("FAILED {}: {}\n", check.name, check.detail));
            if let Some(w) = &check.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
        }
    }
    if let Some(p) = &report.predictions {
        out.push_str(&format!("predicted: cd {:?}, dl {}, fitting height {}\n", p.cd, p.dl, p.fitting_height));
    }
    if let Some(o) = &report.oracle {
        out.push_str(&format!("oracle: {}", tag(&o.status)));
        if let Some(cd) = &o.cd {
            out.push_str(&format!(", degrees {:?}, dl {}, fitting height {}", cd, opt(o.dl), opt(o.fitting_height)));
        }
        if let Some(r) = &o.reason {
            out.push_str(&format!(" ({r})"));
        }
        out.push('\n');
        for d in &o.diff {
            out.push_str(&format!("  {d}\n"));
        }
    }
    for f in &report.flags {
        out.push_str(&format!("flag: {f}\n"));
    }
    out
}

fn cmd_run(args: &RunArgs, mode: Mode) -> Result<u8, Failure> {
    let (inst, caps) = load(args)?;
    let start = std::time::Instant::now();
    let (report, timings, code) = match mode {
        Mode::Certify => {
            let cert = lemma_certificate(&inst, &caps);
            let mut t = tetrad::families::Timings::default();
            t.stages.push(("certificate".into(), start.elapsed().as_secs_f64()));
            (ReportDocument::new(&inst, Some(cert), None), t, None)
        }
        Mode::Oracle => {
            let (mut result, t) = run_oracle(&inst, &caps);
            if result.status == OracleStatus::Verified {
                if let Ok(f) = predicted_profile(&inst.params) {
                    if result.cd.as_ref() != Some(&f.cd) {
                        result.diff.push(format!("cd: formula {:?}, oracle {:?}", f.cd, result.cd.as_deref().unwrap_or_default()));
                    }
                    if result.dl != Some(f.dl) {
                        result.diff.push(format!("dl: formula {}, oracle {:?}", f.dl, result.dl));
                    }
                    if result.fitting_height != Some(f.fitting_height) {
                        result.diff.push(format!("fitting height: formula {}, oracle {:?}", f.fitting_height, result.fitting_height));
                    }
                    if !result.diff.is_empty() {
                        result.status = OracleStatus::Failed;
                    }
                }
            }
            let code = (result.status == OracleStatus::SkippedOracle).then_some(EXIT_CAPS);
            (ReportDocument::new(&inst, None, Some(result)), t, code)
        }
        Mode::Verify => {
            let cert = lemma_certificate(&inst, &caps);
            let certified = start.elapsed().as_secs_f64();
            let (result, mut t) = verify_against_oracle(&inst, &cert, &caps);
            t.stages.insert(0, ("certificate".into(), certified));
            (ReportDocument::new(&inst, Some(cert), Some(result)), t, None)
        }
    };
    let report = if args.timings { report.with_timings(timings) } else { report };
    let text = report.to_json();
    write_or_print(&args.out, &text)?;
    if args.json {
        print!("{text}");
    } else {
        print!("{}", summary(&report));
    }
    Ok(code.unwrap_or(match report.status {
        ReportStatus::Pass | ReportStatus::PassCertOnly => 0,
        ReportStatus::Fail => EXIT_FAIL,
    }))
}

fn cmd_selftest(args: &SelftestArgs) -> Result<u8, Failure> {
    let opts = selftest::Options { filter: args.filter.clone(), broken_composition: args.break_composition, seed: args.seed };
    let results = selftest::run(&opts);
    if results.is_empty() {
        return Err(Failure::input(format!("no suite matches; suites are {}", selftest::SUITES.join(", "))));
    }
    print!("{}", selftest::render_table(&results));
    Ok(if selftest::all_passed(&results) { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Certify(a) => cmd_run(a, Mode::Certify),
        Command::Oracle(a) => cmd_run(a, Mode::Oracle),
        Command::Verify(a) => cmd_run(a, Mode::Verify),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
