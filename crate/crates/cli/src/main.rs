//! Command-line front end: verification suites, quadric classification, and
//! exact invariant reports. Output is UTF-8 JSON or markdown on stdout;
//! diagnostics go to stderr. Exit codes: 0 pass, 1 check or constraint
//! failure, 2 usage error.

mod report;
mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use kstab_core::action::hessian_factors;
use kstab_core::mpoly::{Var, S};
use kstab_core::normal_form::classify;
use kstab_core::rat::{format_rat, parse_rat};
use kstab_core::stability::{
    beta_certificate_curve_case, curve_case_report, delta_bound_generic_point, s_divisor,
};
use kstab_core::zariski::Surface;
use kstab_core::Rat;
use report::{decimal, tool_id, Report};
use serde::Serialize;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "kstab", version, about = "Exact verification suites for the stability of quadric-surface blowup threefolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named verification suite and print its report.
    Verify {
        /// Suite to run.
        #[arg(value_enum)]
        suite: Suite,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = suites::DEFAULT_SEED)]
        seed: u64,
    },
    /// Classify the quadric with the given coefficient vector.
    Classify {
        /// Comma-separated rationals "s0,s1,s2,s3,s4,s5" (each "p/q" or integer).
        #[arg(long)]
        coeffs: String,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the exact invariants of a named target.
    Invariants {
        /// Target to report on.
        #[arg(long, value_enum)]
        target: Target,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Copy, Clone, ValueEnum)]
enum Suite {
    All,
    Core,
    Action,
    Classify,
    Chow,
    Zariski,
    Delta,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Core => "core",
            Suite::Action => "action",
            Suite::Classify => "classify",
            Suite::Chow => "chow",
            Suite::Zariski => "zariski",
            Suite::Delta => "delta",
        }
    }

    fn seeded(self) -> bool {
        matches!(self, Suite::All | Suite::Core | Suite::Action | Suite::Classify)
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Target {
    #[value(name = "surface-H", alias = "surface-h")]
    SurfaceH,
    #[value(name = "surface-E", alias = "surface-e")]
    SurfaceE,
    #[value(name = "delta-generic")]
    DeltaGeneric,
    #[value(name = "beta-curve")]
    BetaCurve,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Writes a report to stdout, tolerating a closed pipe (e.g. `| head`).
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn run(cli: Cli) -> kstab_core::Result<ExitCode> {
    match cli.cmd {
        Cmd::Verify { suite, format, seed } => {
            let start = Instant::now();
            let checks = suites::run(suite.name(), seed)?;
            let seed_field = suite.seeded().then_some(seed);
            let rep = Report::new(suite.name(), seed_field, checks, start.elapsed().as_millis());
            match format {
                Format::Json => emit(&rep.to_json()),
                Format::Md => emit(&rep.to_md()),
            }
            Ok(if rep.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Classify { coeffs, format } => cmd_classify(&coeffs, format),
        Cmd::Invariants { target, format } => cmd_invariants(target, format),
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    tool: String,
    input: Vec<String>,
    case: u8,
    git: String,
    aut: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<String>,
    normal_form: Vec<String>,
    moves: Vec<String>,
    tower: Vec<String>,
    hessian_factor_values: Vec<String>,
}

fn parse_coeffs(input: &str) -> Result<[Rat; 6], String> {
    let parts: Vec<&str> = input.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected 6 comma-separated rationals, got {}", parts.len()));
    }
    let mut out = Vec::with_capacity(6);
    for p in &parts {
        out.push(parse_rat(p).map_err(|e| e.to_string())?);
    }
    Ok(out.try_into().expect("length checked above"))
}

fn cmd_classify(coeffs: &str, format: Format) -> kstab_core::Result<ExitCode> {
    let s = match parse_coeffs(coeffs) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("usage error: {msg}");
            return Ok(ExitCode::from(2));
        }
    };
    let w = classify(&s)?;
    let binds: Vec<(Var, Rat)> = S.iter().copied().zip(s.iter().cloned()).collect();
    let (f1, f2) = hessian_factors();
    let values = [f1, f2]
        .iter()
        .map(|f| format_rat(&f.eval(&binds).as_rat().expect("full evaluation")))
        .collect();
    let out = ClassifyOutput {
        tool: tool_id(),
        input: s.iter().map(format_rat).collect(),
        case: w.label.case,
        git: w.label.git.to_string(),
        aut: w.label.aut.to_string(),
        lambda: w.label.lambda.as_ref().map(|p| p.to_string()),
        mu: w.label.mu.as_ref().map(|p| p.to_string()),
        normal_form: w.normal_form.iter().map(|p| p.to_string()).collect(),
        moves: w.moves.iter().map(|m| m.to_string()).collect(),
        tower: w
            .tower
            .levels()
            .iter()
            .map(|l| format!("{}: {}", l.var.name(), l.modulus))
            .collect(),
        hessian_factor_values: values,
    };
    match format {
        Format::Json => emit(&serde_json::to_string_pretty(&out).expect("serialization")),
        Format::Md => {
            let mut md = String::new();
            md.push_str("# Classification\n\n");
            md.push_str(&format!("Tool: {}\n\n", out.tool));
            md.push_str("| field | value |\n|---|---|\n");
            md.push_str(&format!("| input | {} |\n", out.input.join(", ")));
            md.push_str(&format!("| case | {} |\n", out.case));
            md.push_str(&format!("| git | {} |\n", out.git));
            md.push_str(&format!("| aut | {} |\n", out.aut));
            if let Some(l) = &out.lambda {
                md.push_str(&format!("| lambda | {l} |\n"));
            }
            if let Some(m) = &out.mu {
                md.push_str(&format!("| mu | {m} |\n"));
            }
            md.push_str(&format!("| normal form | {} |\n", out.normal_form.join(", ")));
            md.push_str(&format!("| moves | {} |\n", out.moves.join(" ; ")));
            md.push_str(&format!("| tower | {} |\n", out.tower.join(" ; ")));
            md.push_str(&format!("| hessian factors | {} |\n", out.hessian_factor_values.join(", ")));
            emit(&md);
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PieceOutput {
    lo: String,
    hi: String,
    integrand: String,
    value: String,
}

#[derive(Serialize)]
struct SurfaceOutput {
    tool: String,
    target: String,
    tau: String,
    #[serde(rename = "S")]
    s: String,
    #[serde(rename = "S_decimal")]
    s_decimal: String,
    beta: String,
    beta_decimal: String,
    pieces: Vec<PieceOutput>,
}

#[derive(Serialize)]
struct DeltaOutput {
    tool: String,
    target: String,
    bound: String,
    bound_decimal: String,
    candidates: Vec<String>,
    candidate_labels: Vec<String>,
}

#[derive(Serialize)]
struct CurveRow {
    n: i64,
    order_term: String,
    volume_term: String,
    total: String,
    total_decimal: String,
    certificate: String,
    above_one: bool,
}

#[derive(Serialize)]
struct CurveOutput {
    tool: String,
    target: String,
    rows: Vec<CurveRow>,
    worst_total: String,
}

fn cmd_invariants(target: Target, format: Format) -> kstab_core::Result<ExitCode> {
    match target {
        Target::SurfaceH | Target::SurfaceE => {
            let (surface, name) = match target {
                Target::SurfaceH => (Surface::H, "surface-H"),
                _ => (Surface::E, "surface-E"),
            };
            let rep = s_divisor(surface)?;
            let out = SurfaceOutput {
                tool: tool_id(),
                target: name.into(),
                tau: format_rat(&rep.tau),
                s: format_rat(&rep.value),
                s_decimal: decimal(&rep.value),
                beta: format_rat(&rep.beta),
                beta_decimal: decimal(&rep.beta),
                pieces: rep
                    .pieces
                    .iter()
                    .map(|p| PieceOutput {
                        lo: format_rat(&p.lo),
                        hi: format_rat(&p.hi),
                        integrand: p.integrand.to_string(),
                        value: format_rat(&p.value),
                    })
                    .collect(),
            };
            match format {
                Format::Json => emit(&serde_json::to_string_pretty(&out).expect("serialization")),
                Format::Md => {
                    let mut md = String::new();
                    md.push_str(&format!("# Invariants: {name}\n\n"));
                    md.push_str(&format!(
                        "tau = {}, S = {} ({}), beta = {} ({})\n\n",
                        out.tau, out.s, out.s_decimal, out.beta, out.beta_decimal
                    ));
                    md.push_str("| lo | hi | integrand | value |\n|---|---|---|---|\n");
                    for p in &out.pieces {
                        md.push_str(&format!("| {} | {} | {} | {} |\n", p.lo, p.hi, p.integrand, p.value));
                    }
                    emit(&md);
                }
            }
        }
        Target::DeltaGeneric => {
            let cert = delta_bound_generic_point()?;
            let out = DeltaOutput {
                tool: tool_id(),
                target: "delta-generic".into(),
                bound: format_rat(&cert.bound),
                bound_decimal: decimal(&cert.bound),
                candidates: cert.candidates.iter().map(|(_, x)| format_rat(x)).collect(),
                candidate_labels: cert.candidates.iter().map(|(l, _)| l.clone()).collect(),
            };
            match format {
                Format::Json => emit(&serde_json::to_string_pretty(&out).expect("serialization")),
                Format::Md => {
                    let mut md = String::new();
                    md.push_str("# Invariants: delta-generic\n\n");
                    md.push_str(&format!("bound = {} ({})\n\n", out.bound, out.bound_decimal));
                    md.push_str("| candidate | value |\n|---|---|\n");
                    for (l, v) in out.candidate_labels.iter().zip(&out.candidates) {
                        md.push_str(&format!("| {l} | {v} |\n"));
                    }
                    emit(&md);
                }
            }
        }
        Target::BetaCurve => {
            let certs = beta_certificate_curve_case()?;
            let mut rows = Vec::new();
            let mut worst: Option<Rat> = None;
            for (n, cert) in &certs {
                let rep = curve_case_report(*n)?;
                let above = cert.bound > kstab_core::rat::rat(1);
                if worst.as_ref().map_or(true, |w| rep.total > *w) {
                    worst = Some(rep.total.clone());
                }
                rows.push(CurveRow {
                    n: *n,
                    order_term: format_rat(&rep.ord_terms[2]),
                    volume_term: format_rat(&rep.volume_term),
                    total: format_rat(&rep.total),
                    total_decimal: decimal(&rep.total),
                    certificate: format_rat(&cert.bound),
                    above_one: above,
                });
            }
            let out = CurveOutput {
                tool: tool_id(),
                target: "beta-curve".into(),
                rows,
                worst_total: format_rat(&worst.expect("four twists")),
            };
            match format {
                Format::Json => emit(&serde_json::to_string_pretty(&out).expect("serialization")),
                Format::Md => {
                    let mut md = String::new();
                    md.push_str("# Invariants: beta-curve\n\n");
                    md.push_str(&format!("worst total = {}\n\n", out.worst_total));
                    md.push_str("| n | order term | volume term | total | certificate | above one |\n");
                    md.push_str("|---|---|---|---|---|---|\n");
                    for r in &out.rows {
                        md.push_str(&format!(
                            "| {} | {} | {} | {} | {} | {} |\n",
                            r.n,
                            r.order_term,
                            r.volume_term,
                            r.total,
                            r.certificate,
                            if r.above_one { "yes" } else { "NO" }
                        ));
                    }
                    emit(&md);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
