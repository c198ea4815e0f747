mod envelope;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heegner_core::arith::{class_number, hilbert_symbol, reduced_forms, Discriminant, Place};
use heegner_core::model::{find_models, validate_model, ModelSearchParams};
use heegner_core::relations::{
    build_relation, check_relation, reference_warnings, summarize_discs,
};
use heegner_core::thetasign::{
    configuration_table, epsilon_sign, Calibration, ThetaCharacteristic, CALIBRATION_FILE,
};
use heegner_core::HashimotoModel;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use envelope::OutputEnvelope;

/// Directory holding a replacement `ram_to_igusa.txt`.
const FIXTURE_ENV: &str = "HEEGNER_FIXTURE_DIR";

#[derive(Parser)]
#[command(
    name = "heegner",
    version,
    about = "Heegner-cycle relations on Shimura curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for Hashimoto models (p, a, b)
    Model(ModelArgs),
    /// Check a single model
    Validate(ValidateArgs),
    /// Build the relation for a torsion pair (P, Q)
    Relation(RelationArgs),
    /// List canonical (r, s, Δ) with Δ < 0
    Enumerate(EnumerateArgs),
    /// Class number of a negative discriminant
    Classno(ClassnoArgs),
    /// Hilbert symbol (a, b)_v
    #[command(allow_negative_numbers = true)]
    Hilbert(HilbertArgs),
    /// ε_{P,Q} over the ten even characteristics
    Signtable(SigntableArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Serialize)]
struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    d0: BigInt,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    level: BigInt,
    #[arg(long, default_value = "200")]
    #[serde(with = "heegner_core::int_serde")]
    p_bound: BigInt,
    /// Every admissible prime up to the bound, not just the first
    #[arg(long)]
    all: bool,
    /// Every residue a, not just the smallest
    #[arg(long)]
    all_residues: bool,
    /// Exit with status 1 when nothing is found
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t)]
    #[serde(skip)]
    format: Format,
}

#[derive(Args, Serialize)]
struct ModelSpec {
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    d0: BigInt,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    level: BigInt,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    p: BigInt,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    a: BigInt,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    b: BigInt,
    #[arg(long, value_enum, default_value_t)]
    #[serde(skip)]
    format: Format,
}

impl ModelSpec {
    fn model(&self) -> heegner_core::Result<HashimotoModel> {
        HashimotoModel::new(
            self.d0.clone(),
            self.level.clone(),
            self.p.clone(),
            self.a.clone(),
            self.b.clone(),
        )
    }
}

#[derive(Args, Serialize)]
struct RelationArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelSpec,
    /// Degree n of the elliptic curve
    #[arg(long, default_value = "1", allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    deg: BigInt,
    /// Ramification point P as four bits abcd = [(a,b),(c,d)]
    #[arg(long = "P", id = "P")]
    #[serde(rename = "P")]
    point_p: ThetaCharacteristic,
    #[arg(long = "Q", id = "Q")]
    #[serde(rename = "Q")]
    point_q: ThetaCharacteristic,
    /// Also write the JSON envelope to this file
    #[arg(long)]
    #[serde(skip)]
    output: Option<PathBuf>,
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Serialize)]
struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelSpec,
    /// Exit with status 1 when the model is invalid
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Serialize)]
struct EnumerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelSpec,
    #[arg(long, default_value = "1", allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    deg: BigInt,
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Serialize)]
struct ClassnoArgs {
    #[arg(long, allow_negative_numbers = true)]
    #[serde(with = "heegner_core::int_serde")]
    disc: BigInt,
    #[arg(long, value_enum, default_value_t)]
    #[serde(skip)]
    format: Format,
}

#[derive(Args, Serialize)]
struct HilbertArgs {
    /// Integer or fraction n/d
    #[arg(short, allow_hyphen_values = true)]
    a: String,
    #[arg(short, allow_hyphen_values = true)]
    b: String,
    /// A prime or "inf"
    #[arg(long)]
    place: String,
    #[arg(long, value_enum, default_value_t)]
    #[serde(skip)]
    format: Format,
}

#[derive(Args, Serialize)]
struct SigntableArgs {
    #[arg(long = "P", id = "P")]
    #[serde(rename = "P")]
    point_p: ThetaCharacteristic,
    #[arg(long = "Q", id = "Q")]
    #[serde(rename = "Q")]
    point_q: ThetaCharacteristic,
    #[arg(long, value_enum, default_value_t)]
    #[serde(skip)]
    format: Format,
}

/// A finished command: what to print and whether `--strict` should fail it.
struct Output {
    text: String,
    envelope: OutputEnvelope,
    format: Format,
    strict_failure: bool,
}

fn calibration() -> Result<Calibration, String> {
    match std::env::var_os(FIXTURE_ENV) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(CALIBRATION_FILE);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            Calibration::parse(&text).map_err(|e| e.to_string())
        }
        None => Ok(Calibration::builtin()),
    }
}

fn warning_lines(warnings: &[String]) -> String {
    warnings
        .iter()
        .map(|w| format!("# warning: {w}\n"))
        .collect()
}

fn run_model(args: &ModelArgs) -> Result<Output, String> {
    let mut params =
        ModelSearchParams::new(args.d0.clone(), args.level.clone(), args.p_bound.clone());
    params.require_all = args.all;
    params.all_residues = args.all_residues;
    let models = find_models(&params).map_err(|e| e.to_string())?;
    let text = if models.is_empty() {
        "no model found\n".to_string()
    } else {
        models.iter().map(|m| format!("{m}\n")).collect()
    };
    Ok(Output {
        text,
        strict_failure: args.strict && models.is_empty(),
        envelope: OutputEnvelope::new("model", args, json!({ "models": models })),
        format: args.format,
    })
}

fn run_validate(args: &ValidateArgs) -> Result<Output, String> {
    let m = &args.model;
    let v = validate_model(
        m.d0.clone(),
        m.level.clone(),
        m.p.clone(),
        m.a.clone(),
        m.b.clone(),
    );
    let text = match &v.diagnostic {
        None => "valid\n".to_string(),
        Some(d) => format!("invalid: {d}\n"),
    };
    Ok(Output {
        text,
        strict_failure: args.strict && !v.valid,
        envelope: OutputEnvelope::new("validate", args, &v),
        format: args.model.format,
    })
}

fn run_relation(args: &RelationArgs) -> Result<Output, String> {
    let model = args.model.model().map_err(|e| e.to_string())?;
    let cal = calibration()?;
    let report = build_relation(&model, &args.deg, &args.point_p, &args.point_q, &cal)
        .map_err(|e| e.to_string())?;
    let audit = check_relation(&report);
    let mut warnings = report.warnings.clone();
    for c in audit.checks.iter().filter(|c| !c.passed) {
        warnings.push(format!("consistency check {} failed", c.name));
    }
    let text = warning_lines(&warnings) + &report.to_text();
    let envelope = OutputEnvelope::new("relation", args, &report).with_warnings(warnings);
    if let Some(path) = &args.output {
        std::fs::write(path, envelope.to_json())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(Output {
        text,
        strict_failure: args.strict && report.empty,
        envelope,
        format: args.model.format,
    })
}

fn run_enumerate(args: &EnumerateArgs) -> Result<Output, String> {
    let model = args.model.model().map_err(|e| e.to_string())?;
    let tuples = summarize_discs(&model, &args.deg).map_err(|e| e.to_string())?;
    let warnings = reference_warnings(&model, &args.deg, &tuples);
    let text = warning_lines(&warnings)
        + &tuples
            .iter()
            .map(|(r, s, d)| format!("({r},{s},{d})\n"))
            .collect::<String>();
    let rows: Vec<_> = tuples
        .iter()
        .map(|(r, s, d)| json!({ "r": r.to_string(), "s": s.to_string(), "disc": d.to_string() }))
        .collect();
    Ok(Output {
        text,
        strict_failure: args.strict && tuples.is_empty(),
        envelope: OutputEnvelope::new("enumerate", args, json!({ "tuples": rows }))
            .with_warnings(warnings),
        format: args.model.format,
    })
}

fn run_classno(args: &ClassnoArgs) -> Result<Output, String> {
    let disc = Discriminant::negative(args.disc.clone()).map_err(|e| e.to_string())?;
    let h = class_number(&disc).map_err(|e| e.to_string())?;
    let forms: Vec<String> = reduced_forms(&disc)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|f| f.to_string())
        .collect();
    Ok(Output {
        text: format!("{h}\n"),
        strict_failure: false,
        envelope: OutputEnvelope::new(
            "classno",
            args,
            json!({ "class_number": h, "forms": forms }),
        ),
        format: args.format,
    })
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| format!("cannot parse {s:?} as a rational number"))
}

fn parse_place(s: &str) -> Result<Place, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "oo" => Ok(Place::Infinity),
        p => {
            let p: BigInt = p.parse().map_err(|_| format!("cannot parse place {s:?}"))?;
            Place::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn run_hilbert(args: &HilbertArgs) -> Result<Output, String> {
    let a = parse_rational(&args.a)?;
    let b = parse_rational(&args.b)?;
    let place = parse_place(&args.place)?;
    let h = hilbert_symbol(&a, &b, &place).map_err(|e| e.to_string())?;
    Ok(Output {
        text: format!("{h}\n"),
        strict_failure: false,
        envelope: OutputEnvelope::new("hilbert", args, json!({ "symbol": h })),
        format: args.format,
    })
}

fn run_signtable(args: &SigntableArgs) -> Result<Output, String> {
    let cal = calibration()?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for row in configuration_table() {
        let e = epsilon_sign(&args.point_p, &args.point_q, &row.even_char, &cal)
            .map_err(|e| e.to_string())?;
        text.push_str(&format!("{:<5} {} {:>2}\n", row.label, row.even_char, e));
        rows.push(json!({ "label": row.label, "level_class": row.even_char, "sign": e }));
    }
    Ok(Output {
        text,
        strict_failure: false,
        envelope: OutputEnvelope::new(
            "signtable",
            args,
            json!({ "signs": rows, "calibration": cal }),
        ),
        format: args.format,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Model(a) => run_model(a),
        Command::Validate(a) => run_validate(a),
        Command::Relation(a) => run_relation(a),
        Command::Enumerate(a) => run_enumerate(a),
        Command::Classno(a) => run_classno(a),
        Command::Hilbert(a) => run_hilbert(a),
        Command::Signtable(a) => run_signtable(a),
    };
    match result {
        Ok(out) => {
            match out.format {
                Format::Text => print!("{}", out.text),
                Format::Json => print!("{}", out.envelope.to_json()),
            }
            if out.strict_failure {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
