use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use zigzag_spc::barcode::{decompose, render_ascii};
use zigzag_spc::io::RepresentationJson;
use zigzag_spc::quiver::{support, tensor};
use zigzag_spc::spectrum::{membership, summarize, PointIdeal};
use zigzag_spc::unbounded::{check_derivation, default_seeds, DerivationCertificate, Verdict};
use zigzag_spc::verify::{run_all, SuiteSizes};
use zigzag_spc::witness::{full_witness, WitnessError};
use zigzag_spc::{Field, FieldKind, Gf2, Gf5, QuiverWindow, Rational, Representation};

/// Exact computations with representations of type-A quivers on finite windows.
#[derive(Parser, Debug)]
#[command(name = "zigzag-spc", version)]
struct Cli {
    /// Field of coefficients: gf2, gf5 or rational. Files carry their own field; this must agree with it.
    #[arg(long, global = true)]
    field: Option<FieldKind>,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a representation into interval summands.
    Barcode { rep: PathBuf },
    /// Pointwise tensor product of two representations.
    Tensor { a: PathBuf, b: PathBuf },
    /// Vertices where a representation is nonzero.
    Support { rep: PathBuf },
    /// Whether a representation vanishes at a vertex.
    Member {
        rep: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: i64,
    },
    /// Points, their Boolean images and the closed sets of a window.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value = "")]
        orientation: String,
    },
    /// Build and check the chain of constructions reaching the unit from K_{supp^c}.
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value = "")]
        orientation: String,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Check a derivation certificate against the generators {0, K'}.
    Certify { cert: PathBuf },
    /// Run every property suite.
    VerifyLemmas {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

enum Failure {
    Malformed(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Malformed(e)
    }
}

type Outcome = Result<String, Failure>;

macro_rules! with_field {
    ($kind:expr, $f:ident => $body:expr) => {
        match $kind {
            FieldKind::Gf2 => {
                type $f = Gf2;
                $body
            }
            FieldKind::Gf5 => {
                type $f = Gf5;
                $body
            }
            FieldKind::Rational => {
                type $f = Rational;
                $body
            }
        }
    };
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn read_rep_json(path: &Path, requested: Option<FieldKind>) -> anyhow::Result<(RepresentationJson, FieldKind)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let json = RepresentationJson::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let kind = json.field_kind()?;
    if let Some(req) = requested {
        if req != kind {
            bail!("{} is over {kind}, but --field {req} was given", path.display());
        }
    }
    Ok((json, kind))
}

fn load<F: Field>(json: &RepresentationJson, path: &Path) -> anyhow::Result<Representation<F>> {
    json.to_rep::<F>().with_context(|| format!("reading {}", path.display()))
}

fn parse_window(range: &str, orientation: &str) -> anyhow::Result<QuiverWindow> {
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| anyhow!("window must look like lo..hi, got {range:?}"))?;
    let lo: i64 = lo.trim().parse().with_context(|| format!("bad window start {lo:?}"))?;
    let hi: i64 = hi.trim().trim_start_matches('=').parse().with_context(|| format!("bad window end {hi:?}"))?;
    Ok(QuiverWindow::parse(lo, hi, orientation)?)
}

fn barcode_cmd<F: Field>(json: &RepresentationJson, path: &Path, machine: bool) -> Outcome {
    let v = load::<F>(json, path)?;
    let b = decompose(&v);
    Ok(if machine { to_json(&b) } else { render_ascii(v.window(), &b) })
}

fn tensor_cmd<F: Field>(a: (&RepresentationJson, &Path), b: (&RepresentationJson, &Path)) -> Outcome {
    let (v, w) = (load::<F>(a.0, a.1)?, load::<F>(b.0, b.1)?);
    let t = tensor(&v, &w).map_err(anyhow::Error::from)?;
    Ok(RepresentationJson::from_rep(&t).to_canonical_string())
}

fn support_cmd<F: Field>(json: &RepresentationJson, path: &Path, machine: bool) -> Outcome {
    let v = load::<F>(json, path)?;
    let s: Vec<i64> = support(&v).iter().collect();
    Ok(if machine {
        serde_json::to_string(&s).expect("integers serialize")
    } else {
        s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    })
}

fn member_cmd<F: Field>(json: &RepresentationJson, path: &Path, point: i64, machine: bool) -> Outcome {
    let v = load::<F>(json, path)?;
    let m = PointIdeal::new(v.window(), point).map_err(anyhow::Error::from)?;
    let is_member = membership(&v, &m).map_err(anyhow::Error::from)?;
    Ok(if machine {
        format!("{{\"point\":{point},\"member\":{is_member}}}")
    } else if is_member {
        "MEMBER".into()
    } else {
        "NOT MEMBER".into()
    })
}

fn spectrum_cmd<F: Field>(window: &QuiverWindow) -> Outcome {
    let summary = summarize::<F>(window).map_err(anyhow::Error::from)?;
    let text = to_json(&summary);
    if summary.hausdorff && summary.homeomorphism {
        Ok(text)
    } else {
        Err(Failure::Verification(format!("{text}\nspectrum checks failed")))
    }
}

fn witness_cmd<F: Field>(window: &QuiverWindow, json: &RepresentationJson, path: &Path) -> Outcome {
    let v = load::<F>(json, path)?;
    if v.window() != window {
        return Err(Failure::Malformed(anyhow!(
            "{} lives on [{}, {}] {}, not on the requested window",
            path.display(),
            v.window().lo(),
            v.window().hi(),
            v.window().word()
        )));
    }
    match full_witness(&v) {
        Ok(chain) => Ok(to_json(&chain.summary())),
        Err(e @ (WitnessError::StepFailed { .. } | WitnessError::WrongConclusion { .. })) => {
            Err(Failure::Verification(e.to_string()))
        }
        Err(e) => Err(Failure::Malformed(e.into())),
    }
}

fn certify_cmd(path: &Path, machine: bool) -> Outcome {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cert: DerivationCertificate =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let verdict = check_derivation(&cert, &default_seeds()).map_err(anyhow::Error::from)?;
    let shown = if machine {
        to_json(&verdict)
    } else {
        match &verdict {
            Verdict::Accepted { steps } => format!("ACCEPTED ({steps} steps)"),
            Verdict::Rejected { step, reason } => format!("REJECTED at step {step}: {reason}"),
        }
    };
    if verdict.is_accepted() {
        Ok(shown)
    } else {
        Err(Failure::Verification(shown))
    }
}

fn verify_cmd(seed: u64, trials: usize, machine: bool) -> Outcome {
    let report = run_all(seed, SuiteSizes::from_trials(trials));
    let text = if machine {
        to_json(&report)
    } else {
        let mut lines: Vec<String> = report
            .suites
            .iter()
            .map(|s| format!("{:<22} {:>7} checks  {}", s.name, s.checks, if s.passed() { "ok" } else { "FAILED" }))
            .collect();
        lines.extend(report.failures().map(|(suite, f)| format!("  {suite}: {f}")));
        lines.join("\n")
    };
    if report.passed {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn run(cli: Cli) -> Outcome {
    let machine = cli.json;
    match &cli.command {
        Command::Barcode { rep } => {
            let (json, kind) = read_rep_json(rep, cli.field)?;
            with_field!(kind, F => barcode_cmd::<F>(&json, rep, machine))
        }
        Command::Tensor { a, b } => {
            let (ja, ka) = read_rep_json(a, cli.field)?;
            let (jb, kb) = read_rep_json(b, cli.field)?;
            if ka != kb {
                return Err(Failure::Malformed(anyhow!("{} is over {ka} but {} is over {kb}", a.display(), b.display())));
            }
            with_field!(ka, F => tensor_cmd::<F>((&ja, a), (&jb, b)))
        }
        Command::Support { rep } => {
            let (json, kind) = read_rep_json(rep, cli.field)?;
            with_field!(kind, F => support_cmd::<F>(&json, rep, machine))
        }
        Command::Member { rep, point } => {
            let (json, kind) = read_rep_json(rep, cli.field)?;
            with_field!(kind, F => member_cmd::<F>(&json, rep, *point, machine))
        }
        Command::Spectrum { window, orientation } => {
            let window = parse_window(window, orientation)?;
            with_field!(cli.field.unwrap_or(FieldKind::Gf5), F => spectrum_cmd::<F>(&window))
        }
        Command::Witness { window, orientation, rep } => {
            let window = parse_window(window, orientation)?;
            let (json, kind) = read_rep_json(rep, cli.field)?;
            with_field!(kind, F => witness_cmd::<F>(&window, &json, rep))
        }
        Command::Certify { cert } => certify_cmd(cert, machine),
        Command::VerifyLemmas { seed, trials } => verify_cmd(*seed, *trials, machine),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            println!("{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Malformed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(text)) => {
            println!("{}", text.trim_end());
            ExitCode::from(2)
        }
    }
}
