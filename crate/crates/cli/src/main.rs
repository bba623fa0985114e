//! `gnlset` — construct, verify and classify orthogonal product-state sets.
//!
//! Exit codes:
//!   0  success (all requested parties trivial / a type was proven / valid)
//!   1  negative verdict (nontrivial party, Unknown classification, invalid certificate)
//!   2  inadmissible input (bad dims, non-orthogonal set, unsupported flag combination)
//!   3  I/O or parse failure

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gnlset_core::constructions::{gen_named, ConstructionSpec, Family};
use gnlset_core::document::{set_to_json, OplmReportView, StateSetDocument};
use gnlset_core::oplm::{assemble, float_solution_dim, solution_space};
use gnlset_core::states::{party_name, StateSet};
use gnlset_core::table1::{run_table1, Grid};
use gnlset_core::verdicts::{
    classify, verify_certificate, BipartitionOutcome, Classification, RuleCertificate, SearchOptions,
};

#[derive(Parser)]
#[command(name = "gnlset", version, about = "Exact verification of genuinely nonlocal product-state sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a set and write it as a JSON document.
    Construct {
        #[arg(long)]
        family: Family,
        /// Comma-separated local dimensions; optional for fixed families.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        /// Output path (stdout when omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Solve the measurement constraints for one or more parties.
    Verify {
        input: PathBuf,
        /// `all` or a party index.
        #[arg(long, default_value = "all")]
        party: String,
        /// Comma-separated party indices merged into one party.
        #[arg(long, value_delimiter = ',', conflicts_with = "party")]
        group: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "exact")]
        backend: Backend,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Classify a set as type I, type II or unknown.
    Classify {
        input: PathBuf,
        /// Search budget per bipartition in milliseconds (overrides GNL_BUDGET_MS).
        #[arg(long)]
        budget: Option<u64>,
        /// Include full certificates in the output.
        #[arg(long)]
        emit_certificates: bool,
        /// Also write each certificate to this directory.
        #[arg(long)]
        certificates_dir: Option<PathBuf>,
        /// Try the experimental grouped-triviality rule.
        #[arg(long)]
        grouped_rule: bool,
        #[arg(long, value_enum, default_value = "exact")]
        backend: Backend,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-run every family over a dimension grid and print the comparison table.
    Table1 {
        #[arg(long, default_value = "small")]
        grid: Grid,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Re-validate a certificate against a set.
    VerifyCertificate { set: PathBuf, certificate: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail<T>(code: u8, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure {
        code,
        message: message.into(),
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).or_else(|e| fail(3, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).or_else(|e| fail(3, format!("cannot write {}: {e}", path.display())))
}

fn load_set(path: &Path) -> Result<StateSet, Failure> {
    let text = read(path)?;
    let doc = StateSetDocument::from_json(&text).or_else(|e| fail(3, format!("{}: {e}", path.display())))?;
    doc.to_set().or_else(|e| fail(3, format!("{}: {e}", path.display())))
}

/// Exit 2 with the violating pairs if the set is not mutually orthogonal.
fn require_orthogonal(set: &StateSet) -> Result<(), Failure> {
    let report = set.check_mutual_orthogonality();
    if report.is_orthogonal() {
        return Ok(());
    }
    let pairs: Vec<String> = report
        .violations
        .iter()
        .map(|(a, b, v)| format!("  <{a}|{b}> = {v}"))
        .collect();
    fail(2, format!("set is not mutually orthogonal:\n{}", pairs.join("\n")))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn construct(family: Family, dims: Vec<usize>, out: Option<PathBuf>) -> Result<u8, Failure> {
    let spec = if dims.is_empty() && family.fixed_dims().is_some() {
        ConstructionSpec::fixed(family)
    } else {
        ConstructionSpec::new(family, dims)
    };
    if let Err(e) = spec.check_admissible() {
        return fail(2, e.to_string());
    }
    let set = gen_named(&spec).or_else(|e| fail(2, e.to_string()))?;
    let text = set_to_json(&set);
    match out {
        Some(path) => {
            write(&path, &text)?;
            eprintln!("wrote {} states to {}", set.len(), path.display());
        }
        None => println!("{text}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct FloatReport {
    party_group: Vec<usize>,
    unknown_dim: usize,
    solution_dim: usize,
    trivial: bool,
    tolerance: f64,
}

fn verify(
    input: &Path,
    party: &str,
    group: Option<Vec<usize>>,
    backend: Backend,
    tolerance: f64,
    format: Format,
) -> Result<u8, Failure> {
    let set = load_set(input)?;
    require_orthogonal(&set)?;
    let n = set.parties();
    let groups: Vec<Vec<usize>> = match (group, party) {
        (Some(g), _) => vec![g],
        (None, "all") => (0..n).map(|p| vec![p]).collect(),
        (None, k) => match k.parse::<usize>() {
            Ok(p) if p < n => vec![vec![p]],
            _ => return fail(2, format!("--party must be `all` or an index below {n}")),
        },
    };
    if tolerance.is_nan() || tolerance <= 0.0 {
        return fail(2, "--tolerance must be positive");
    }
    let name = |g: &[usize]| g.iter().map(|&p| party_name(n, p)).collect::<String>();
    let mut all_trivial = true;
    let mut json = Vec::new();
    let mut text = Vec::new();
    for g in &groups {
        let cs = assemble(&set, g).or_else(|e| fail(2, e.to_string()))?;
        match backend {
            Backend::Exact => {
                let r = solution_space(&cs).or_else(|e| fail(2, e.to_string()))?;
                all_trivial &= r.trivial;
                let view = OplmReportView::new(&r);
                let mut line = format!(
                    "party {}: solution_dim {} of {} ({})",
                    name(g),
                    r.solution_dim,
                    r.unknown_dim * r.unknown_dim,
                    if r.trivial { "trivial" } else { "nontrivial" }
                );
                if let Some(w) = &view.witness {
                    line.push_str(&format!("\n  witness: {}", render_matrix(w)));
                }
                text.push(line);
                json.push(serde_json::to_value(view).expect("serializable"));
            }
            Backend::Float => {
                let dim = float_solution_dim(&cs, tolerance);
                all_trivial &= dim == 1;
                text.push(format!("party {}: solution_dim {dim} (float, tol {tolerance:e})", name(g)));
                json.push(
                    serde_json::to_value(FloatReport {
                        party_group: g.clone(),
                        unknown_dim: cs.unknown_dim,
                        solution_dim: dim,
                        trivial: dim == 1,
                        tolerance,
                    })
                    .expect("serializable"),
                );
            }
        }
    }
    match format {
        Format::Json => print_json(&json),
        Format::Text => println!("{}", text.join("\n")),
    }
    Ok(if all_trivial { 0 } else { 1 })
}

fn render_matrix(rows: &[Vec<String>]) -> String {
    let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

#[derive(Serialize)]
struct BipartitionSummary<'a> {
    bipartition: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subset: Option<&'a [String]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    core_pair: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a RuleCertificate>,
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    dims: &'a [usize],
    states: usize,
    gnl_type: String,
    genuine: String,
    irreducible: String,
    party_solution_dims: &'a [usize],
    reduction: Option<&'a gnlset_core::verdicts::ReductionWitness>,
    bipartitions: Vec<BipartitionSummary<'a>>,
}

fn summarize<'a>(set: &'a StateSet, c: &'a Classification, emit: bool) -> ClassifyOutput<'a> {
    let n = set.parties();
    let bipartitions = c
        .per_bipartition
        .iter()
        .map(|v| {
            let bp = v.bipartition.display(n);
            match &v.outcome {
                BipartitionOutcome::Certified { certificate } => BipartitionSummary {
                    bipartition: bp,
                    status: "certified",
                    rule: Some(format!("{:?}", certificate.rule)),
                    subset: Some(&certificate.subset),
                    core_pair: Some((party_name(n, certificate.core_pair.0), party_name(n, certificate.core_pair.1))),
                    reason: None,
                    certificate: emit.then_some(certificate.as_ref()),
                },
                BipartitionOutcome::Unknown { reason } => BipartitionSummary {
                    bipartition: bp,
                    status: "unknown",
                    rule: None,
                    subset: None,
                    core_pair: None,
                    reason: Some(format!("{reason:?}")),
                    certificate: None,
                },
            }
        })
        .collect();
    ClassifyOutput {
        dims: set.dims(),
        states: set.len(),
        gnl_type: format!("{:?}", c.gnl_type),
        genuine: format!("{:?}", c.genuine),
        irreducible: format!("{:?}", c.irreducible),
        party_solution_dims: &c.party_solution_dims,
        reduction: c.reduction.as_ref(),
        bipartitions,
    }
}

#[allow(clippy::too_many_arguments)]
fn classify_cmd(
    input: &Path,
    budget: Option<u64>,
    emit: bool,
    dir: Option<PathBuf>,
    grouped_rule: bool,
    backend: Backend,
    format: Format,
) -> Result<u8, Failure> {
    if backend == Backend::Float {
        return fail(2, "classify certifies exactly; the float backend is only for `verify` cross-checks");
    }
    let set = load_set(input)?;
    require_orthogonal(&set)?;
    let mut opts = SearchOptions::from_env();
    if let Some(ms) = budget {
        opts.budget = Some(Duration::from_millis(ms));
    }
    opts.grouped_rule = grouped_rule;
    let c = classify(&set, &opts).or_else(|e| fail(2, e.to_string()))?;
    if let Some(dir) = dir {
        fs::create_dir_all(&dir).or_else(|e| fail(3, format!("cannot create {}: {e}", dir.display())))?;
        for (k, v) in c.per_bipartition.iter().enumerate() {
            if let Some(cert) = v.outcome.certificate() {
                let path = dir.join(format!("certificate_{k}.json"));
                write(&path, &serde_json::to_string_pretty(cert).expect("serializable"))?;
            }
        }
    }
    let out = summarize(&set, &c, emit);
    match format {
        Format::Json => print_json(&out),
        Format::Text => {
            println!("{} states in dims {:?}: {}", out.states, out.dims, out.gnl_type);
            println!("genuine: {}, irreducible: {}", out.genuine, out.irreducible);
            if let Some(w) = out.reduction {
                println!(
                    "reduction: party {} splits on {:?} ({} / {} states)",
                    party_name(set.parties(), w.party),
                    w.index_subset,
                    w.inside.len(),
                    w.outside.len()
                );
            }
            for b in &out.bipartitions {
                match (&b.rule, b.subset, &b.core_pair) {
                    (Some(rule), Some(subset), Some((p, q))) => println!(
                        "  {}: {rule} on {} states, core ({p},{q})",
                        b.bipartition,
                        subset.len()
                    ),
                    _ => println!("  {}: unknown ({})", b.bipartition, b.reason.as_deref().unwrap_or("")),
                }
            }
        }
    }
    Ok(match c.gnl_type {
        gnlset_core::verdicts::GnlType::Unknown => 1,
        _ => 0,
    })
}

fn table1(grid: Grid, format: Format) -> Result<u8, Failure> {
    let report = run_table1(grid, &SearchOptions::from_env());
    match format {
        Format::Json => print_json(&report),
        Format::Text => print!("{}", report.render()),
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(0)
    } else {
        let names: Vec<String> = failures.iter().map(|c| c.name()).collect();
        fail(1, format!("failing cells: {}", names.join(", ")))
    }
}

fn verify_certificate_cmd(set_path: &Path, cert_path: &Path) -> Result<u8, Failure> {
    let set = load_set(set_path)?;
    let text = read(cert_path)?;
    let cert: RuleCertificate =
        serde_json::from_str(&text).or_else(|e| fail(3, format!("{}: {e}", cert_path.display())))?;
    match verify_certificate(&set, &cert) {
        Ok(()) => {
            println!("valid: {:?} for {}", cert.rule, cert.bipartition.display(set.parties()));
            Ok(0)
        }
        Err(e) => fail(1, e.to_string()),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Construct { family, dims, out } => construct(family, dims, out),
        Command::Verify {
            input,
            party,
            group,
            backend,
            tolerance,
            format,
        } => verify(&input, &party, group, backend, tolerance, format),
        Command::Classify {
            input,
            budget,
            emit_certificates,
            certificates_dir,
            grouped_rule,
            backend,
            format,
        } => classify_cmd(&input, budget, emit_certificates, certificates_dir, grouped_rule, backend, format),
        Command::Table1 { grid, format } => table1(grid, format),
        Command::VerifyCertificate { set, certificate } => verify_certificate_cmd(&set, &certificate),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
