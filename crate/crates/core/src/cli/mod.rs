//! `steer3q` command-line front end.
//!
//! Exit codes: 0 success, 1 property violation found, 2 usage or input error.

pub mod input;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entanglement::{mixed_report, pure_report, EntanglementReport};
use crate::families::{
    classify, star_v_crit_linear, v_crit_numeric, w_like_v_crit_linear, ClassificationResult,
    GsdParams, VisibilityReport, DEFAULT_EPS_CLASS,
};
use crate::qlinalg::partial_trace;
use crate::relations::{check_info_complementarity, pure_relation_records, RelationRecord};
use crate::steering::{
    f_max, f_max_oracle, steering_report, trade_off_check, f2_monogamy_check, Pair,
    SteeringReport, DEFAULT_EPS_STEER,
};
use input::LoadedState;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown suite: {0} (known: all, {known}, {claims})", known = verify::SUITES.join(", "), claims = verify::CLAIM_SUITES.join(", "))]
    UnknownSuite(String),
    #[error("unknown family: {0}")]
    UnknownFamily(String),
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("mixed-state input: {0} needs a pure state")]
    MixedStateInput(&'static str),
    #[error("no two steerable pairs at unit visibility (second-largest S = {0})")]
    NoNonMonogamyAtUnitVisibility(f64),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::NoNonMonogamyAtUnitVisibility(s) => CliError::NoNonMonogamyAtUnitVisibility(s),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "steer3q", version, about = "Steering and entanglement trade-offs of three-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Validation tolerance for input states.
    #[arg(long, env = "STEER3Q_TOLERANCE", default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// JSON state file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Named state or family.
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Family parameter(s), repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steering, entanglement and relation report for one state.
    Analyze {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Canonical-form subtype of a pure state.
    Classify {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run a seeded property suite ("all" for every suite).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate a one-parameter family.
    Sweep {
        #[arg(long)]
        family: String,
        /// lo..hi
        #[arg(long)]
        range: String,
        #[arg(long)]
        step: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Critical white-noise visibility for two steerable pairs.
    Robustness {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Numerical maximization of the steering functional for each pair.
    Oracle {
        #[command(flatten)]
        state: StateArgs,
        /// Number of measurement settings (1 to 3).
        #[arg(long, default_value_t = 3)]
        settings: usize,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub validation: f64,
    pub steering: f64,
    pub classification: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub source: String,
    pub input_digest: String,
    pub seed: u64,
    pub tolerances: Tolerances,
}

fn provenance(command: &'static str, common: &Common, source: String, digest: String) -> Provenance {
    Provenance {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        source,
        input_digest: digest,
        seed: common.seed,
        tolerances: Tolerances {
            validation: common.tolerance,
            steering: DEFAULT_EPS_STEER,
            classification: DEFAULT_EPS_CLASS,
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub steering: SteeringReport,
    pub entanglement: Option<EntanglementReport>,
    pub relations: Vec<RelationRecord>,
    /// I_local + max pair sum of S_ij, reported next to the bounded reading.
    pub info_lhs_s_sum_reading: f64,
    pub classification: Option<ClassificationResult>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyDocument {
    pub classification: ClassificationResult,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustnessDocument {
    pub visibility: VisibilityReport,
    /// Linear-in-visibility closed form of the state's canonical class, when known.
    pub class_closed_form: Option<ClassClosedForm>,
    pub flagged: bool,
    pub note: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassClosedForm {
    pub class: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OraclePair {
    pub pair: Pair,
    pub oracle: f64,
    pub analytic: f64,
    pub difference: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleDocument {
    pub settings: usize,
    pub budget: usize,
    pub pairs: Vec<OraclePair>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyDocument {
    pub suites: Vec<verify::SuiteSummary>,
    pub all_passed: bool,
    pub provenance: Provenance,
}

fn load(state: &StateArgs, tol: f64) -> Result<LoadedState, CliError> {
    match (&state.source.input, &state.source.family) {
        (Some(path), None) => {
            if !state.param.is_empty() {
                return Err(CliError::Usage("--param applies to --family only".into()));
            }
            input::load_file(path, tol)
        }
        (None, Some(name)) => input::load_family(name, &state.param),
        _ => Err(CliError::Usage("give exactly one of --input or --family".into())),
    }
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn no_csv(command: &str) -> CliError {
    CliError::Usage(format!("{command} supports --format json or text"))
}

fn analyze(state: &StateArgs, common: &Common) -> Result<i32, CliError> {
    let s = load(state, common.tolerance)?;
    let steering = steering_report(&s.density, DEFAULT_EPS_STEER)?;
    let info = check_info_complementarity(&s.density)?;
    let trade = trade_off_check(&s.density)?;
    let f2 = f2_monogamy_check(&s.density)?;
    let digest = s.density.matrix().digest();
    let mut relations = vec![
        RelationRecord::new("steering_sum", trade.sum, 3.0, digest.clone()),
        RelationRecord::new(
            "f2_monogamy",
            f2.iter().map(|x| x.sum).fold(f64::MIN, f64::max),
            2.0,
            digest,
        ),
    ];
    let (entanglement, classification) = match &s.pure {
        Some(psi) => {
            relations.extend(pure_relation_records(psi)?);
            (Some(pure_report(psi)?), Some(classify(psi, DEFAULT_EPS_CLASS)?))
        }
        None => {
            relations.push(info.record.clone());
            (Some(mixed_report(&s.density)?), None)
        }
    };
    let doc = ReportDocument {
        steering,
        entanglement,
        relations,
        info_lhs_s_sum_reading: info.lhs_s_sum_reading,
        classification,
        provenance: provenance("analyze", common, s.source, s.digest),
    };
    let text = match common.format {
        Format::Json => json(&doc),
        Format::Text => analyze_text(&doc),
        Format::Csv => return Err(no_csv("analyze")),
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}

fn analyze_text(doc: &ReportDocument) -> String {
    let mut o = String::new();
    let st = &doc.steering;
    o += &format!("source: {}\n", doc.provenance.source);
    for p in &st.pairs {
        o += &format!(
            "{}: S = {:.12}  F3max = {:.12}  M = {:.12}  steerable = {}\n",
            p.pair, p.s, p.f3_max, p.m, p.steerable
        );
    }
    o += &format!(
        "steering graph: {}  monogamous: {}\n",
        st.graph_type.label(),
        st.monogamous()
    );
    o += &format!("I_local = {:.12}  I_nonlocal = {:.12}\n", st.i_local, st.i_nonlocal);
    if let Some(e) = &doc.entanglement {
        o += &format!("C2: AB = {:.12}  AC = {:.12}  BC = {:.12}  E_W = {:.12}\n", e.c2_ab, e.c2_ac, e.c2_bc, e.e_w);
        if let Some(t) = e.tau {
            o += &format!("tau = {t:.12}\n");
        }
    }
    for r in &doc.relations {
        o += &format!(
            "{}: {:.12} <= {}  margin {:.3e}  {}\n",
            r.relation_id,
            r.lhs,
            r.bound,
            r.margin,
            if r.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    if let Some(c) = &doc.classification {
        o += &format!("subtype: {}\n", c.subtype);
    }
    o
}

fn classify_cmd(state: &StateArgs, common: &Common) -> Result<i32, CliError> {
    let s = load(state, common.tolerance)?;
    let psi = s.pure.as_ref().ok_or(CliError::MixedStateInput("classify"))?;
    let doc = ClassifyDocument {
        classification: classify(psi, DEFAULT_EPS_CLASS)?,
        provenance: provenance("classify", common, s.source.clone(), s.digest.clone()),
    };
    let text = match common.format {
        Format::Json => json(&doc),
        Format::Text => {
            let c = &doc.classification;
            let i = &c.invariants_used;
            let mut t = format!(
                "subtype: {}\nsteering graph: {}\nmonogamous: {}\nC2: AB = {:.12}  AC = {:.12}  BC = {:.12}\ntau = {:.12}\n",
                c.subtype,
                c.steering_graph.label(),
                c.monogamous,
                i.c2_ab,
                i.c2_ac,
                i.c2_bc,
                i.tau
            );
            for a in &c.annotations {
                t += &format!("note: {a}\n");
            }
            t
        }
        Format::Csv => return Err(no_csv("classify")),
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}

/// Linear-in-visibility formula of the canonical class the parameters fall into.
pub fn class_closed_form(p: &GsdParams) -> Option<ClassClosedForm> {
    let q = p.squares();
    if q[4] == 0.0 && q[0] > 0.0 && q[2] > 0.0 && q[3] > 0.0 {
        Some(ClassClosedForm {
            class: "w_like",
            value: w_like_v_crit_linear(p),
        })
    } else if q[2] == 0.0 && [q[0], q[1], q[3], q[4]].iter().all(|&x| x > 0.0) {
        Some(ClassClosedForm {
            class: "star",
            value: star_v_crit_linear(p),
        })
    } else {
        None
    }
}

fn robustness(state: &StateArgs, common: &Common) -> Result<i32, CliError> {
    let s = load(state, common.tolerance)?;
    let psi = s.pure.as_ref().ok_or(CliError::MixedStateInput("robustness"))?;
    let visibility = v_crit_numeric(psi)?;
    let class_closed_form = s.gsd.as_ref().and_then(class_closed_form);
    let flagged = visibility.discrepancy > 1e-9;
    let note = if flagged {
        format!(
            "linear closed form {} differs from bisection {} by {:.6}; S scales as v^2 under white noise",
            visibility.linear_closed_form, visibility.bisection, visibility.discrepancy
        )
    } else {
        "linear closed form agrees with bisection".to_string()
    };
    let doc = RobustnessDocument {
        visibility,
        class_closed_form,
        flagged,
        note,
        provenance: provenance("robustness", common, s.source.clone(), s.digest.clone()),
    };
    let text = match common.format {
        Format::Json => json(&doc),
        Format::Text => {
            let v = &doc.visibility;
            let mut t = format!(
                "linear closed form:    {:.12}\nbisection:             {:.12}\nquadratic closed form: {:.12}\n|difference|:          {:.12}\n",
                v.linear_closed_form, v.bisection, v.quadratic_closed_form, v.discrepancy
            );
            if let Some(c) = &doc.class_closed_form {
                t += &format!("{} class formula:  {:.12}\n", c.class, c.value);
            }
            if doc.flagged {
                t += &format!("FLAGGED: {}\n", doc.note);
            }
            t
        }
        Format::Csv => return Err(no_csv("robustness")),
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}

fn oracle(state: &StateArgs, settings: usize, budget: usize, common: &Common) -> Result<i32, CliError> {
    let s = load(state, common.tolerance)?;
    if !(1..=3).contains(&settings) {
        return Err(CliError::Usage(format!("--settings must be 1, 2 or 3, got {settings}")));
    }
    let mut pairs = Vec::new();
    for (k, pair) in Pair::ALL.into_iter().enumerate() {
        let rho = partial_trace(&s.density, &pair.qubits())?;
        let analytic = if settings == 1 {
            crate::steering::correlation_gram_eigenvalues(&crate::bloch::decompose2(&rho)?.t)[0].sqrt()
        } else {
            f_max(&rho, settings)?
        };
        let r = f_max_oracle(&rho, settings, budget, common.seed.wrapping_add(k as u64))?;
        pairs.push(OraclePair {
            pair,
            oracle: r.value,
            analytic,
            difference: analytic - r.value,
            evaluations: r.evaluations,
        });
    }
    let doc = OracleDocument {
        settings,
        budget,
        pairs,
        provenance: provenance("oracle", common, s.source.clone(), s.digest.clone()),
    };
    let text = match common.format {
        Format::Json => json(&doc),
        Format::Text => doc
            .pairs
            .iter()
            .map(|p| {
                format!(
                    "{}: oracle = {:.12}  analytic = {:.12}  difference = {:.3e}\n",
                    p.pair, p.oracle, p.analytic, p.difference
                )
            })
            .collect(),
        Format::Csv => return Err(no_csv("oracle")),
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}

fn verify_cmd(suite: &str, samples: usize, common: &Common) -> Result<i32, CliError> {
    let suites = verify::run_suite(suite, samples, common.seed, common.jobs)?;
    let all_passed = suites.iter().all(|s| s.all_passed());
    let desc = format!("verify:{suite}:{samples}");
    let doc = VerifyDocument {
        all_passed,
        provenance: provenance("verify", common, desc.clone(), input::sha256_hex(desc.as_bytes())),
        suites,
    };
    let text = match common.format {
        Format::Json => json(&doc),
        Format::Text => verify_text(&doc),
        Format::Csv => verify_csv(&doc)?,
    };
    emit(common, &text)?;
    Ok(if all_passed { EXIT_OK } else { EXIT_VIOLATION })
}

fn margin_text(m: Option<f64>) -> String {
    m.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into())
}

fn verify_text(doc: &VerifyDocument) -> String {
    let mut o = String::new();
    for s in &doc.suites {
        o += &format!("suite {} (samples {}, seed {})\n", s.suite, s.samples, s.seed);
        for p in &s.properties {
            o += &format!(
                "  {} {}: {}/{} passed, worst margin {}\n",
                if p.passed == p.checked { "PASS" } else { "FAIL" },
                p.property,
                p.passed,
                p.checked,
                margin_text(p.worst_margin)
            );
            for f in &p.failing {
                o += &format!("    failing sample {f}\n");
            }
        }
    }
    o += if doc.all_passed { "all properties hold\n" } else { "property violations found\n" };
    o
}

fn verify_csv(doc: &VerifyDocument) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["suite", "property", "checked", "passed", "worst_margin"]).map_err(io)?;
    for s in &doc.suites {
        for p in &s.properties {
            w.write_record([
                s.suite.clone(),
                p.property.to_string(),
                p.checked.to_string(),
                p.passed.to_string(),
                p.worst_margin.map(|m| format!("{m:?}")).unwrap_or_default(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

fn sweep_cmd(family: &str, range: &str, step: f64, common: &Common) -> Result<i32, CliError> {
    let (lo, hi) = sweep::parse_range(range)?;
    let rows = sweep::sweep(family, lo, hi, step, common.jobs)?;
    let text = match common.format {
        Format::Csv => sweep::to_csv(&rows)?,
        Format::Json => json(&rows),
        Format::Text => {
            let mut t = sweep::csv_header().join("\t");
            t.push('\n');
            for r in &rows {
                t += &sweep::csv_record(r).join("\t");
                t.push('\n');
            }
            t
        }
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Analyze { state, common } => analyze(state, common),
        Command::Classify { state, common } => classify_cmd(state, common),
        Command::Verify { suite, samples, common } => verify_cmd(suite, *samples, common),
        Command::Sweep { family, range, step, common } => sweep_cmd(family, range, *step, common),
        Command::Robustness { state, common } => robustness(state, common),
        Command::Oracle { state, settings, budget, common } => oracle(state, *settings, *budget, common),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("steer3q: {e}");
            EXIT_USAGE
        }
    }
}
