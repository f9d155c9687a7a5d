mod figure;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use qamp::asymptotic::{hhat, hhat_class};
use qamp::cache;
use qamp::cohomology::{cech_oracle, cohomology, contributing_box, CohomologyTable};
use qamp::fan::DivisorSpec;
use qamp::nerve::DEFAULT_RAY_CAP;
use qamp::qample::{ampleness_level, effective_cone, is_q_ample, obstruction_region, q_ample_cone};
use qamp::{ClassVector, Error, Fan, ObstructionTable, TorusDivisor, ToricVariety};

use figure::{emit_figure, FigureKind};

/// Exact line-bundle cohomology and q-ample cones of simplicial projective
/// toric varieties.
#[derive(Parser, Debug)]
#[command(name = "qamp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Fan JSON file: {"dim", "rays", "max_cones"} with 1-based cone indices.
    #[arg(long)]
    fan: PathBuf,
    /// Directory for the cached obstruction table.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the fan and report a projectivity witness.
    Check(Common),
    /// Class group rank, torsion and the classes of the prime divisors.
    Classgroup(Common),
    /// h^p of a torus-invariant Cartier divisor.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Divisor as inline JSON ({"coeffs": [..]} or [..]) or a file path.
        #[arg(long)]
        divisor: String,
        /// Also list the contributing weights.
        #[arg(long)]
        keep_weights: bool,
    },
    /// h^p by the Čech complex of the affine cover, weight by weight.
    Cech {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: String,
    },
    /// The q-ample cone, or membership of a class when --class is given.
    Qample {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        /// Class coordinates, e.g. "2,-1/3".
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
    /// Least q for which a class is q-ample.
    Level {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Asymptotic cohomology ĥ^i at a divisor or a class.
    Hhat {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, conflicts_with = "class", required_unless_present = "class")]
        divisor: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
    /// Reduced cohomology of every Z_α and the sets J_i.
    Betti(Common),
    /// SVG of the obstruction region or the q-ample cone (Picard rank 2).
    Figure {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, value_enum, default_value = "ample")]
        kind: Kind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Obstruction,
    Ample,
}

enum Output {
    Json(Value),
    Text(String),
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn to_json(&self) -> Value {
        match self {
            CliError::Core(e) => json!({ "error": e.kind(), "message": e.to_string() }),
            CliError::Io(m) => json!({ "error": "Io", "message": m }),
            CliError::Usage(m) => json!({ "error": "Usage", "message": m }),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_fan(path: &Path) -> CliResult<Fan> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Fan::from_json(&text)?)
}

fn variety(common: &Common) -> CliResult<ToricVariety> {
    let fan = read_fan(&common.fan)?;
    fan.validate()?;
    let table = match &common.cache_dir {
        Some(dir) => cache::load_or_compute(dir, &fan, DEFAULT_RAY_CAP)?,
        None => ObstructionTable::compute(&fan, DEFAULT_RAY_CAP)?,
    };
    Ok(ToricVariety::from_parts(fan, table))
}

fn parse_divisor(arg: &str, count: usize) -> CliResult<TorusDivisor> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
    let coeffs = if value.is_array() {
        serde_json::from_value::<Vec<i64>>(value)
    } else {
        serde_json::from_value::<DivisorSpec>(value).map(|d| d.coeffs)
    }
    .map_err(|e| Error::Malformed(e.to_string()))?;
    if coeffs.len() != count {
        return Err(Error::Malformed(format!("divisor has {} coefficients, fan has {count} rays", coeffs.len())).into());
    }
    Ok(TorusDivisor::from_i64(&coeffs))
}

fn parse_class(arg: &str, rank: usize) -> CliResult<ClassVector> {
    let coords = arg
        .split(',')
        .map(|t| t.trim().parse::<BigRational>().map_err(|_| Error::Malformed(format!("bad rational {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != rank {
        return Err(Error::Malformed(format!("class has {} coordinates, Picard rank is {rank}", coords.len())).into());
    }
    Ok(ClassVector::new(coords))
}

fn rat_json(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

fn int_json(x: &BigInt) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn class_json(c: &ClassVector) -> Value {
    Value::Array(c.coords.iter().map(rat_json).collect())
}

fn table_json(t: &CohomologyTable) -> Value {
    let mut out = json!({ "dims": t.dims });
    if let Some(w) = &t.weights {
        let map: serde_json::Map<String, Value> = w
            .iter()
            .map(|(p, list)| {
                let items: Vec<Value> = list
                    .iter()
                    .map(|(m, k)| json!({ "m": m.iter().map(int_json).collect::<Vec<_>>(), "mult": k }))
                    .collect();
                (p.to_string(), Value::Array(items))
            })
            .collect();
        out["weights"] = Value::Object(map);
    }
    out
}

fn run(cmd: Command) -> CliResult<Output> {
    let out = match cmd {
        Command::Check(common) => {
            let fan = read_fan(&common.fan)?;
            let report = fan.validate()?;
            json!({
                "dim": fan.dim(),
                "rays": fan.num_rays(),
                "max_cones": fan.max_cones().len(),
                "simplicial": report.simplicial,
                "complete": true,
                "projective": true,
                "ridges": report.ridges,
                "located_points": report.located_points,
                "ample_witness": report.ample_witness,
                "hash": fan.content_hash(),
            })
        }
        Command::Classgroup(common) => {
            let tv = variety(&common)?;
            let l = &tv.lattice;
            json!({
                "rank": l.rank,
                "torsion": l.torsion.iter().map(int_json).collect::<Vec<_>>(),
                "basis_rays": l.basis_rays.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "ray_classes": l.ray_classes().iter().map(class_json).collect::<Vec<_>>(),
                "effective_cone": effective_cone(&tv).to_json(),
            })
        }
        Command::Cohomology { common, divisor, keep_weights } => {
            let tv = variety(&common)?;
            let d = parse_divisor(&divisor, tv.fan.num_rays())?;
            table_json(&cohomology(&tv, &d, keep_weights)?)
        }
        Command::Cech { common, divisor } => {
            let tv = variety(&common)?;
            let d = parse_divisor(&divisor, tv.fan.num_rays())?;
            let bbox = contributing_box(&tv, &d)?.enlarged(1);
            json!({ "dims": cech_oracle(&tv.fan, &d, &bbox)?.dims })
        }
        Command::Qample { common, q, class } => {
            let tv = variety(&common)?;
            match class {
                Some(c) => {
                    let c = parse_class(&c, tv.picard_rank())?;
                    json!({ "q": q, "class": class_json(&c), "q_ample": is_q_ample(&tv, &c, q)? })
                }
                None => {
                    let amp = q_ample_cone(&tv, q)?;
                    let region = obstruction_region(&tv, q)?;
                    json!({
                        "q": amp.q,
                        "cells": amp.cells.to_json(),
                        "open_cover": amp.open_cover.to_json(),
                        "closed_pieces": amp.closed_pieces.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                        "obstruction": region.alphas.iter().zip(&region.closed_images).map(|((i, a), img)| {
                            json!({ "degree": i, "alpha": a.one_based(), "image": img.to_json() })
                        }).collect::<Vec<_>>(),
                    })
                }
            }
        }
        Command::Level { common, class } => {
            let tv = variety(&common)?;
            let c = parse_class(&class, tv.picard_rank())?;
            json!({ "class": class_json(&c), "level": ampleness_level(&tv, &c) })
        }
        Command::Hhat { common, i, divisor, class } => {
            let tv = variety(&common)?;
            let v = match (divisor, class) {
                (Some(d), _) => hhat(&tv, &parse_divisor(&d, tv.fan.num_rays())?.to_rat(), i)?,
                (None, Some(c)) => hhat_class(&tv, &parse_class(&c, tv.picard_rank())?, i)?,
                (None, None) => return Err(CliError::Usage("one of --divisor or --class is required".into())),
            };
            json!({ "i": v.degree, "value": rat_json(&v.value) })
        }
        Command::Betti(common) => {
            let tv = variety(&common)?;
            let entries: Vec<Value> = tv
                .table
                .entries
                .iter()
                .map(|(a, h)| json!({ "alpha": a.one_based(), "cohomology": h }))
                .collect();
            let j: serde_json::Map<String, Value> = (-1..tv.dim() as i64)
                .map(|deg| {
                    let sets: Vec<Vec<usize>> = tv.table.j_set(deg).iter().map(|a| a.one_based()).collect();
                    (deg.to_string(), json!(sets))
                })
                .collect();
            json!({ "entries": entries, "J": j })
        }
        Command::Figure { common, q, kind } => {
            let tv = variety(&common)?;
            let kind = match kind {
                Kind::Obstruction => FigureKind::Obstruction,
                Kind::Ample => FigureKind::Ample,
            };
            return Ok(Output::Text(emit_figure(&tv, q, kind)?));
        }
    };
    Ok(Output::Json(out))
}

fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    // a closed pipe downstream is not an error of ours
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Output::Json(v)) => {
            emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json output")));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            emit(&t);
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit(&format!("{}\n", serde_json::to_string_pretty(&e.to_json()).expect("json output")));
            ExitCode::FAILURE
        }
    }
}
