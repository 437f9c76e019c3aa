//! The `grouplab` command line.
//!
//! Every verb prints one JSON report on standard output (or an indented text
//! rendering with `--pretty`). Exit codes: 0 success, 1 input or computation
//! error, 2 when a verdict differs from `--expect` or a scenario fails.

mod pretty;
pub mod scenarios;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grouplab::autolab::{classify_block_map, enumerate_isometric_automorphisms_lp, BlockMap, WeightedComposition};
use grouplab::conv::{fourier, p_norm, AlgebraElement};
use grouplab::group::{
    by_name, enumerate_antiautomorphisms, enumerate_automorphisms, enumerate_characters, FiniteGroup, GroupMap,
};
use grouplab::json::{matrix_from_json, JsonMatrix};
use grouplab::locality::{
    counterexample_matrix, decide, is_local_automorphism_l2, local_check_lp, EquivOptions, SamplingPlan,
    DEFAULT_EQUIV_TOL,
};
use grouplab::repr::{check_dual, decompose_with_retries, DualObject};
use grouplab::rng::{complex_normal_vec, stream, stream_rng};
use grouplab::Error;
use serde_json::{json, Value};

const DECOMPOSE_ATTEMPTS: u64 = 5;

#[derive(Debug, Parser)]
#[command(name = "grouplab", version, about = "Finite group algebras, dual objects and local automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Built-in group: Z1..Z12, S3, S4, A4, D4, D5, D6, Q8, or a product like Z2xS3.
    #[arg(long, conflicts_with = "group_file", required_unless_present = "group_file")]
    group: Option<String>,
    /// JSON file `{"name", "order", "table"}`.
    #[arg(long)]
    group_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, default_value_t = scenarios::DEFAULT_SEED)]
    seed: u64,
    /// Indented text instead of JSON.
    #[arg(long)]
    pretty: bool,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Transpose flags per block in dual order, e.g. `0,0,1`.
    #[arg(long, conflicts_with = "map_file")]
    flags: Option<String>,
    /// Block map JSON `{"perm", "flags", "unitaries"}`, or a weighted
    /// composition `{"character", "motion", "kind"}` when `--p` is not 2.
    #[arg(long)]
    map_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectVerdict {
    Local,
    Refuted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectEquiv {
    Equivalent,
    NotEquivalent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Motion {
    Identity,
    Inversion,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a group and print its table.
    Group {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Decompose the regular representation and check the result.
    Dual {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Fourier transform of a function (random from the seed without `--input`).
    Fourier {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: Output,
        /// JSON file `{"group", "values"}`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Automorphisms, antiautomorphisms and characters.
    Autos {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Classify a block map as automorphism, antiautomorphism or proper Jordan map.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Sampled local-automorphism verdict.
    LocalCheck {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Motion of the weighted composition when `--p` is not 2.
        #[arg(long, value_enum, default_value_t = Motion::Identity)]
        motion: Motion,
        /// Index of the character weight when `--p` is not 2.
        #[arg(long, default_value_t = 0)]
        character: usize,
        #[arg(long, value_enum)]
        expect: Option<ExpectVerdict>,
    },
    /// Unitary equivalence of a matrix and its transpose.
    TransposeEquiv {
        #[command(flatten)]
        output: Output,
        /// Use the subdiagonal counterexample matrix of this size.
        #[arg(long, default_value_t = 3, conflicts_with = "input")]
        dim: usize,
        /// JSON matrix `[[[re, im], ...], ...]`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_EQUIV_TOL)]
        tol: f64,
        #[arg(long, value_enum)]
        expect: Option<ExpectEquiv>,
    },
    /// Run a built-in end-to-end scenario.
    Reproduce {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(scenarios::SCENARIOS))]
        name: String,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = scenarios::DEFAULT_SAMPLES)]
        samples: usize,
    },
}

/// Outcome of a verb: a report and whether the expectation held.
struct Outcome {
    report: Value,
    expected: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, expected: true }
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn to_json(&self) -> Value {
        match self {
            CliError::Core(e) => {
                let debug = format!("{e:?}");
                let kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
                json!({"error": kind, "message": e.to_string()})
            }
            CliError::Io(msg) => json!({"error": "Io", "message": msg}),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `argv` (program name first), run the verb and write the report.
pub fn run(argv: &[String], out: &mut impl Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    let output = match &cli.command {
        Command::Group { output, .. }
        | Command::Dual { output, .. }
        | Command::Fourier { output, .. }
        | Command::Autos { output, .. }
        | Command::Classify { output, .. }
        | Command::LocalCheck { output, .. }
        | Command::TransposeEquiv { output, .. }
        | Command::Reproduce { output, .. } => output,
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let text = if output.pretty {
                pretty::render(&outcome.report)
            } else {
                format!("{}\n", outcome.report)
            };
            if let Some(path) = &output.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("{}", CliError::Io(format!("{}: {e}", path.display())).to_json());
                    return 1;
                }
            }
            if write!(out, "{text}").is_err() {
                return 1;
            }
            if outcome.expected {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            1
        }
    }
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_group(args: &GroupArgs) -> CliResult<FiniteGroup> {
    match (&args.group, &args.group_file) {
        (Some(name), _) => Ok(by_name(name)?),
        (None, Some(path)) => Ok(FiniteGroup::from_json(&read_file(path)?)?),
        (None, None) => Err(Error::UnknownGroup(String::new()).into()),
    }
}

fn load_dual(group: &FiniteGroup, seed: u64) -> CliResult<DualObject> {
    Ok(decompose_with_retries(group, seed, DECOMPOSE_ATTEMPTS)?)
}

fn parse_flags(text: &str, dual: &DualObject) -> CliResult<Vec<bool>> {
    let flags = text
        .split(',')
        .map(|t| match t.trim() {
            "1" | "t" | "true" => Ok(true),
            "0" | "f" | "false" => Ok(false),
            other => Err(Error::InvalidMap(format!("bad flag `{other}`"))),
        })
        .collect::<Result<Vec<bool>, Error>>()?;
    if flags.len() != dual.len() {
        return Err(Error::SizeMismatch {
            expected: dual.len(),
            found: flags.len(),
        }
        .into());
    }
    Ok(flags)
}

/// Block map and a short descriptor for reports.
fn load_block_map(args: &MapArgs, dual: &DualObject) -> CliResult<(BlockMap, String)> {
    if let Some(path) = &args.map_file {
        return Ok((BlockMap::from_json(&read_file(path)?, dual)?, path.display().to_string()));
    }
    match &args.flags {
        Some(text) => {
            let flags = parse_flags(text, dual)?;
            let desc = format!(
                "transpose[{}]",
                flags.iter().map(|&f| if f { "1" } else { "0" }).collect::<Vec<_>>().join(",")
            );
            Ok((BlockMap::transposing(dual, flags), desc))
        }
        None => Ok((BlockMap::identity(dual), "identity".into())),
    }
}

fn load_weighted(
    args: &MapArgs,
    group: &FiniteGroup,
    motion: Motion,
    character: usize,
) -> CliResult<(WeightedComposition, String)> {
    if let Some(path) = &args.map_file {
        return Ok((
            WeightedComposition::from_json(&read_file(path)?, group)?,
            path.display().to_string(),
        ));
    }
    let characters = enumerate_characters(group)?;
    let weight = characters.get(character).cloned().ok_or(Error::IndexOutOfRange {
        index: character,
        len: characters.len(),
    })?;
    let (map, name) = match motion {
        Motion::Identity => (GroupMap::identity(group), "identity"),
        Motion::Inversion => (GroupMap::inversion(group), "inversion"),
    };
    Ok((
        WeightedComposition::new(group, weight, map)?,
        format!("weighted(character={character},motion={name})"),
    ))
}

fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Group { group, .. } => {
            let g = load_group(group)?;
            Ok(Outcome::ok(json!({
                "name": g.name(),
                "order": g.order(),
                "identity": g.identity(),
                "commutative": g.is_commutative(),
                "exponent": g.exponent(),
                "table": g.to_spec().table,
            })))
        }
        Command::Dual { group, output } => {
            let g = load_group(group)?;
            let dual = load_dual(&g, output.seed)?;
            let report = check_dual(&dual);
            let characters: Vec<Vec<[f64; 2]>> = dual
                .irreps()
                .iter()
                .map(|ir| ir.character_row().iter().map(|z| [z.re, z.im]).collect())
                .collect();
            Ok(Outcome::ok(json!({
                "group": g.name(),
                "seed": output.seed,
                "dims": report.dims,
                "check_dual": report,
                "characters": characters,
            })))
        }
        Command::Fourier { group, output, input } => {
            let g = load_group(group)?;
            let dual = load_dual(&g, output.seed)?;
            let f = match input {
                Some(path) => AlgebraElement::from_json(&read_file(path)?, &g)?,
                None => AlgebraElement::new(complex_normal_vec(
                    &mut stream_rng(output.seed, stream::SCENARIO),
                    g.order(),
                ))?,
            };
            let tuple = fourier(&f, &dual)?;
            Ok(Outcome::ok(json!({
                "group": g.name(),
                "seed": output.seed,
                "dims": dual.dims(),
                "l2_norm": p_norm(&f, 2.0, &g)?,
                "c2_norm": tuple.c2_norm(),
                "transform": tuple.to_json_value(g.name()),
            })))
        }
        Command::Autos { group, .. } => {
            let g = load_group(group)?;
            let autos = enumerate_automorphisms(&g)?;
            let antis = enumerate_antiautomorphisms(&g)?;
            let characters = enumerate_characters(&g)?;
            let lp = enumerate_isometric_automorphisms_lp(&g)?;
            let perms = |maps: &[GroupMap]| maps.iter().map(|m| m.perm().to_vec()).collect::<Vec<_>>();
            Ok(Outcome::ok(json!({
                "group": g.name(),
                "order": g.order(),
                "characters": characters.len(),
                "automorphisms": perms(&autos),
                "antiautomorphisms": perms(&antis),
                "isometric_lp_automorphisms": lp.len(),
            })))
        }
        Command::Classify { group, output, map } => {
            let g = load_group(group)?;
            let dual = load_dual(&g, output.seed)?;
            let (block_map, desc) = load_block_map(map, &dual)?;
            let class = classify_block_map(&block_map, &dual, output.seed)?;
            Ok(Outcome::ok(json!({
                "group": g.name(),
                "map": desc,
                "seed": output.seed,
                "kind": class.kind,
                "multiplicative_residual": class.multiplicative_residual,
                "antimultiplicative_residual": class.antimultiplicative_residual,
                "jordan_residual": class.jordan_residual,
            })))
        }
        Command::LocalCheck {
            group,
            output,
            map,
            samples,
            p,
            motion,
            character,
            expect,
        } => {
            let g = load_group(group)?;
            if p.is_nan() || *p < 1.0 {
                return Err(Error::InvalidP(*p).into());
            }
            if *samples == 0 {
                return Err(Error::InvalidMap("--samples must be at least 1".into()).into());
            }
            let plan = SamplingPlan::new(output.seed, *samples);
            let (verdict, desc) = if *p == 2.0 {
                let dual = load_dual(&g, output.seed)?;
                let (block_map, desc) = load_block_map(map, &dual)?;
                (is_local_automorphism_l2(&block_map, &dual, &plan)?, desc)
            } else {
                let (w, desc) = load_weighted(map, &g, *motion, *character)?;
                (local_check_lp(&w, &g, &plan)?, desc)
            };
            let report = serde_json::to_value(verdict.report(&desc, g.name())).expect("serializable");
            let expected = match expect {
                Some(ExpectVerdict::Local) => !verdict.is_refuted(),
                Some(ExpectVerdict::Refuted) => verdict.is_refuted(),
                None => true,
            };
            Ok(Outcome { report, expected })
        }
        Command::TransposeEquiv {
            output,
            dim,
            input,
            tol,
            expect,
        } => {
            if tol.is_nan() || *tol <= 0.0 {
                return Err(Error::InvalidTolerance(*tol).into());
            }
            let m = match input {
                Some(path) => {
                    let rows: JsonMatrix =
                        serde_json::from_str(&read_file(path)?).map_err(|e| Error::Json(e.to_string()))?;
                    matrix_from_json(&rows)?
                }
                None => counterexample_matrix(*dim)?,
            };
            let opts = EquivOptions {
                tol: *tol,
                seed: output.seed,
                ..EquivOptions::default()
            };
            let decision = decide(&m, &m.transpose(), &opts)?;
            let mut report = json!({
                "dim": m.nrows(),
                "source": if input.is_some() { "input" } else { "counterexample" },
                "tol": tol,
            });
            let body = serde_json::to_value(decision.to_json_value()).expect("serializable");
            if let (Value::Object(r), Value::Object(b)) = (&mut report, body) {
                r.extend(b);
            }
            let expected = match expect {
                Some(ExpectEquiv::Equivalent) => decision.equivalent,
                Some(ExpectEquiv::NotEquivalent) => !decision.equivalent,
                None => true,
            };
            Ok(Outcome { report, expected })
        }
        Command::Reproduce { name, output, samples } => {
            if *samples == 0 {
                return Err(Error::InvalidMap("--samples must be at least 1".into()).into());
            }
            let report = scenarios::run_scenario(name, output.seed, *samples)?;
            let expected = report.passed();
            Ok(Outcome {
                report: serde_json::to_value(report).expect("serializable"),
                expected,
            })
        }
    }
}
