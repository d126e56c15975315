use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use workshare::circuit::Basis;
use workshare::codes::{
    build_cat4, build_color7, build_color7_ft, build_rotated_d3, build_surface_standard,
    rotated_round, CodeSpec, RoundParity, Variant,
};
use workshare::decoder::{builtin_tables, diff_tables, generate_tables_bruteforce, merged_tables};
use workshare::experiment::{
    code_label, fit_quadratic, write_results_csv, DecoderChoice, ExperimentConfig,
    ExperimentResult, LogicalState, MemoryExperiment, P1Rule,
};
use workshare::memory::RotatedRounds;
use workshare::verify::run_all_checks;
use workshare::{Circuit, Layout64};

/// Exit status of `verify` when a check fails.
const VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "workshare",
    version,
    about = "CNOT+SWAP work-sharing simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MemoryCode {
    #[value(name = "rotated-d3")]
    RotatedD3,
    #[value(name = "rotated-d3-cut")]
    RotatedD3Cut,
}

impl MemoryCode {
    fn cut(self) -> bool {
        self == MemoryCode::RotatedD3Cut
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CircuitCode {
    Cat4,
    Color7,
    #[value(name = "color7-ft")]
    Color7Ft,
    #[value(name = "color7-ft-cut")]
    Color7FtCut,
    #[value(name = "surface-d3")]
    SurfaceD3,
    #[value(name = "surface-d5")]
    SurfaceD5,
    #[value(name = "surface-d7")]
    SurfaceD7,
    #[value(name = "rotated-d3")]
    RotatedD3,
    #[value(name = "rotated-d3-cut")]
    RotatedD3Cut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Cnot,
    Cnotswap,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Cnot => Variant::Cnot,
            VariantArg::Cnotswap => Variant::CnotSwap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StateArg {
    Zero,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Builtin,
    Bruteforce,
}

impl From<DecoderArg> for DecoderChoice {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Builtin => DecoderChoice::Builtin,
            DecoderArg::Bruteforce => DecoderChoice::Bruteforce,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

impl From<ParityArg> for RoundParity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Odd => RoundParity::Odd,
            ParityArg::Even => RoundParity::Even,
        }
    }
}

fn parse_p1_rule(s: &str) -> Result<P1Rule, String> {
    match s {
        "zero" => Ok(P1Rule::Zero),
        "half" | "half-p2" => Ok(P1Rule::HalfP2),
        _ => s
            .parse::<f64>()
            .map(P1Rule::Explicit)
            .map_err(|_| format!("expected zero, half or a probability, got {s:?}")),
    }
}

#[derive(clap::Args, Clone)]
struct ExperimentArgs {
    #[arg(long, value_enum, default_value = "rotated-d3-cut")]
    code: MemoryCode,
    #[arg(long, value_enum, default_value = "zero")]
    state: StateArg,
    #[arg(long, default_value_t = 40)]
    rounds: usize,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    /// `zero`, `half` (p1 = p2 / 2) or an explicit p1 value.
    #[arg(long, default_value = "zero", value_parser = parse_p1_rule)]
    p1_rule: P1Rule,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "builtin")]
    decoder: DecoderArg,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self, p2: f64) -> ExperimentConfig {
        ExperimentConfig {
            code: CodeSpec::rotated_d3(self.code.cut()),
            logical_state: match self.state {
                StateArg::Zero => LogicalState::Zero,
                StateArg::Plus => LogicalState::Plus,
            },
            rounds: self.rounds,
            shots: self.shots,
            p2,
            p1_rule: self.p1_rule,
            seed: self.seed,
            decoder: self.decoder.into(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Memory experiment at one noise level; prints one CSV row.
    Run {
        #[arg(long)]
        p2: f64,
        #[command(flatten)]
        args: ExperimentArgs,
    },
    /// Memory experiments over several p2 values plus the alpha * p2^2 fit.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "0.002,0.005,0.01,0.02")]
        p2: Vec<f64>,
        #[command(flatten)]
        args: ExperimentArgs,
        /// Write the fit report (JSON) here; it is printed to stderr otherwise.
        #[arg(long)]
        fit: Option<PathBuf>,
    },
    /// Gate identity, circuit equivalences, accessibility, tables and the
    /// single-fault certificates.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the results as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Inaccessible-qubit reports of code layouts.
    Layout {
        /// Codes to report; all surface and rotated layouts by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        code: Vec<CircuitCode>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Directory receiving one JSON report and one SVG drawing per layout.
        #[arg(long)]
        report_layout: Option<PathBuf>,
    },
    /// Brute-force decoder tables and their diff against the published ones.
    Tables {
        #[arg(long, value_enum, default_value = "rotated-d3-cut")]
        code: MemoryCode,
        /// Tables to export: merged published rows or generated rows only.
        #[arg(long, value_enum, default_value = "builtin")]
        decoder: DecoderArg,
        /// Directory receiving one CSV per table.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write the diff report (JSON) here instead of standard output.
        #[arg(long)]
        diff: Option<PathBuf>,
    },
    /// Circuit JSON export.
    DumpCircuit {
        #[arg(long, value_enum)]
        code: CircuitCode,
        #[arg(long, value_enum, default_value = "cnotswap")]
        variant: VariantArg,
        /// Check type, where the code has both.
        #[arg(long, value_enum, default_value = "z")]
        check: CheckArg,
        /// Round parity of the rotated code.
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
        /// Full rotated round (resets, Hadamards, measurements) instead of the
        /// gate schedule.
        #[arg(long)]
        round: bool,
    },
}

fn build_circuit(
    code: CircuitCode,
    variant: Variant,
    check: Basis,
    parity: RoundParity,
    round: bool,
) -> Result<Circuit> {
    let rotated = |cut: bool| {
        if round {
            rotated_round(parity, cut)
        } else {
            build_rotated_d3(parity, cut)
        }
    };
    Ok(match code {
        CircuitCode::Cat4 => build_cat4(),
        CircuitCode::Color7 => build_color7(variant, check),
        CircuitCode::Color7Ft => build_color7_ft(false).circuit,
        CircuitCode::Color7FtCut => build_color7_ft(true).circuit,
        CircuitCode::SurfaceD3 => build_surface_standard(3, variant)?,
        CircuitCode::SurfaceD5 => build_surface_standard(5, variant)?,
        CircuitCode::SurfaceD7 => build_surface_standard(7, variant)?,
        CircuitCode::RotatedD3 => rotated(false),
        CircuitCode::RotatedD3Cut => rotated(true),
    })
}

fn code_name(code: CircuitCode) -> String {
    code.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn csv_text(results: &[ExperimentResult]) -> Result<String> {
    let mut buf = Vec::new();
    write_results_csv(results, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn run_experiments(args: &ExperimentArgs, p2: &[f64]) -> Result<Vec<ExperimentResult>> {
    let exp = MemoryExperiment::new(args.code.cut(), args.decoder.into())?;
    p2.iter()
        .map(|&p| {
            let cfg = args.config(p);
            exp.run(&cfg)
                .with_context(|| format!("experiment at p2 = {p} ({})", code_label(&cfg.code)))
        })
        .collect()
}

#[derive(Serialize)]
struct FitReport {
    code: String,
    p1_rule: P1Rule,
    rounds: usize,
    alpha: f64,
    residual: f64,
    slope: Option<f64>,
    points: Vec<(f64, f64, f64)>,
}

#[derive(Serialize)]
struct LayoutReport {
    code: String,
    variant: Variant,
    total: usize,
    accessible: usize,
    inaccessible: Vec<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { p2, args } => {
            let results = run_experiments(&args, &[p2])?;
            emit(&csv_text(&results)?, args.output.as_ref())?;
        }
        Command::Sweep { p2, args, fit } => {
            if p2.is_empty() {
                bail!("--p2 needs at least one value");
            }
            let results = run_experiments(&args, &p2)?;
            emit(&csv_text(&results)?, args.output.as_ref())?;
            let points: Vec<(f64, f64, f64)> = results
                .iter()
                .map(|r| (r.p2, r.p_round, r.stderr))
                .collect();
            let f = fit_quadratic(&points)?;
            let report = FitReport {
                code: results[0].code.clone(),
                p1_rule: args.p1_rule,
                rounds: args.rounds,
                alpha: f.alpha,
                residual: f.residual,
                slope: f.slope,
                points,
            };
            let text = serde_json::to_string_pretty(&report)? + "\n";
            match fit {
                Some(path) => fs::write(&path, text)?,
                None => eprint!("{text}"),
            }
        }
        Command::Verify { seed, json } => {
            let results = run_all_checks(seed);
            let lines: String = results
                .iter()
                .map(|r| {
                    let tag = if r.passed { "PASS" } else { "FAIL" };
                    format!("[{tag}] {}: {}\n", r.name, r.detail)
                })
                .collect();
            emit(&lines, None)?;
            if let Some(path) = json {
                fs::write(&path, serde_json::to_string_pretty(&results)? + "\n")?;
            }
            if results.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(VERIFY_FAILED));
            }
        }
        Command::Layout {
            code,
            variant,
            report_layout,
        } => {
            let codes = if code.is_empty() {
                vec![
                    CircuitCode::SurfaceD3,
                    CircuitCode::SurfaceD5,
                    CircuitCode::RotatedD3,
                    CircuitCode::RotatedD3Cut,
                ]
            } else {
                code
            };
            let variants = match variant {
                Some(v) => vec![v.into()],
                None => vec![Variant::Cnot, Variant::CnotSwap],
            };
            let mut reports = Vec::new();
            for &c in &codes {
                let rotated = matches!(c, CircuitCode::RotatedD3 | CircuitCode::RotatedD3Cut);
                for &v in &variants {
                    if rotated && v == Variant::Cnot {
                        continue;
                    }
                    let circuit = build_circuit(c, v, Basis::Z, RoundParity::Even, false)?;
                    let layout = Layout64::from_circuit(&circuit)
                        .with_context(|| format!("layout of {}", code_name(c)))?;
                    let acc = layout.accessibility();
                    let report = LayoutReport {
                        code: code_name(c),
                        variant: v,
                        total: acc.total,
                        accessible: acc.accessible,
                        inaccessible: acc.inaccessible.clone(),
                    };
                    if let Some(dir) = &report_layout {
                        fs::create_dir_all(dir)?;
                        let stem = format!("{}-{}", report.code, variant_name(v));
                        fs::write(
                            dir.join(format!("{stem}.json")),
                            serde_json::to_string_pretty(&report)? + "\n",
                        )?;
                        fs::write(dir.join(format!("{stem}.svg")), layout.to_svg(&acc))?;
                    }
                    reports.push(report);
                }
            }
            emit(&(serde_json::to_string_pretty(&reports)? + "\n"), None)?;
        }
        Command::Tables {
            code,
            decoder,
            export,
            diff,
        } => {
            let rounds = RotatedRounds::new(code.cut())?;
            let generated = generate_tables_bruteforce(&rounds);
            let published = builtin_tables();
            let rows = diff_tables(&published, &generated, &rounds.masks);
            let report = serde_json::json!({
                "code": code_label(&CodeSpec::rotated_d3(code.cut())),
                "rows": rows,
                "conflicts": generated.conflicts,
            });
            let text = serde_json::to_string_pretty(&report)? + "\n";
            emit(&text, diff.as_ref())?;
            if let Some(dir) = export {
                let tables = match decoder {
                    DecoderArg::Builtin => merged_tables(&published, &generated, &rounds.masks),
                    DecoderArg::Bruteforce => generated.tables,
                };
                fs::create_dir_all(&dir)?;
                for t in &tables.tables {
                    let name = format!(
                        "{}-{}.csv",
                        match t.check {
                            Basis::Z => "z",
                            Basis::X => "x",
                        },
                        match t.parity {
                            RoundParity::Odd => "odd",
                            RoundParity::Even => "even",
                        }
                    );
                    t.write_csv(fs::File::create(dir.join(name))?)?;
                }
            }
        }
        Command::DumpCircuit {
            code,
            variant,
            check,
            parity,
            round,
        } => {
            let basis = match check {
                CheckArg::Z => Basis::Z,
                CheckArg::X => Basis::X,
            };
            let c = build_circuit(code, variant.into(), basis, parity.into(), round)?;
            emit(&(c.to_json() + "\n"), None)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Cnot => "cnot",
        Variant::CnotSwap => "cnotswap",
    }
}
