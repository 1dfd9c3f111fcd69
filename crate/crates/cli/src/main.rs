mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringmaj::enumeration::{enumerate_from_generators, BRUTE_FORCE_MAX_BITS};
use ringmaj::verify::{run_exhaustive, run_random, Group, RandomSpec};
use ringmaj::{
    canonicalize, classify_stability, classify_theorem, enumerate_bruteforce, generate_patterns,
    parse_configuration, step, temporal_class, ClassificationCase, Configuration, Rule, RuleKind,
    TemporalClass,
};
use serde::Serialize;
use thiserror::Error;

use render::{render_spacetime, Format, RenderError, RenderSpec};

/// Majority and minority cellular automata on rings.
#[derive(Debug, Parser)]
#[command(name = "ringmaj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a ring for a fixed number of steps and draw it.
    Run(RunArgs),
    /// Report the temporal class and the periodicity case of a ring.
    Classify(ClassifyArgs),
    /// List every temporally periodic ring of a given size.
    Enumerate(EnumerateArgs),
    /// Check the structural properties on small and random rings.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Maj,
    Min,
}

impl RuleArg {
    fn with_radius(self, r: usize) -> Result<Rule, CliError> {
        let kind = match self {
            RuleArg::Maj => RuleKind::Majority,
            RuleArg::Min => RuleKind::Minority,
        };
        Ok(Rule::new(kind, r)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RunFormat {
    Text,
    Svg,
    Pgm,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DocFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Pattern,
    Both,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["init", "pattern"]))]
struct RunArgs {
    #[arg(long, value_enum, default_value = "maj")]
    rule: RuleArg,
    /// Neighborhood radius.
    #[arg(short = 'r')]
    radius: usize,
    /// Initial configuration as a 0/1 string.
    #[arg(long)]
    init: Option<String>,
    /// Pattern repeated `--copies` times to form the initial configuration.
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, default_value_t = 1, requires = "pattern")]
    copies: usize,
    /// Number of steps to simulate; `steps + 1` rows are drawn.
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: RunFormat,
    /// Add the S/W/U stability letter of every cell.
    #[arg(long)]
    overlay: bool,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long, value_enum, default_value = "maj")]
    rule: RuleArg,
    #[arg(short = 'r')]
    radius: usize,
    #[arg(long)]
    init: String,
    #[arg(long, value_enum, default_value = "text")]
    format: DocFormat,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(short = 'r')]
    radius: usize,
    #[arg(short = 'n')]
    size: usize,
    #[arg(long, value_enum, default_value = "brute")]
    method: Method,
    /// Print one representative per rotation/mirror/complement class.
    #[arg(long)]
    canonical: bool,
    #[arg(long, value_enum, default_value = "maj")]
    rule: RuleArg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(short = 'r')]
    radius: usize,
    /// Every ring of size 1 through this value is checked.
    #[arg(long = "n-max")]
    n_max: usize,
    /// Random rings of size 1 to 128 checked after the exhaustive pass.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] ringmaj::Error),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("{0}")]
    Usage(String),
    #[error("failed to write output: {0}")]
    Io(#[from] io::Error),
    #[error("failed to encode json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Json(_) => 1,
            _ => 2,
        }
    }
}

const CELL_SIZE: usize = 8;
const EXHAUSTIVE_MAX: usize = 24;
const RANDOM_MAX_N: usize = 128;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Run(a) => run(a, &mut out),
        Command::Classify(a) => classify(a, &mut out),
        Command::Enumerate(a) => enumerate(a, &mut out),
        Command::Verify(a) => verify(a, &mut out),
    };
    match result.and_then(|ok| out.flush().map(|_| ok).map_err(CliError::from)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Serialize)]
struct RunDocument {
    rule: &'static str,
    radius: usize,
    n: usize,
    steps: usize,
    states: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    temporal_class: &'static str,
}

fn run(a: RunArgs, out: &mut impl Write) -> Result<bool, CliError> {
    let rule = a.rule.with_radius(a.radius)?;
    let init = match (&a.init, &a.pattern) {
        (Some(bits), None) => parse_configuration(bits, 1)?,
        (None, Some(p)) => parse_configuration(p, a.copies)?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --init and --pattern".into(),
            ))
        }
    };
    let mut states = Vec::with_capacity(a.steps + 1);
    states.push(init);
    for _ in 0..a.steps {
        let next = step(states.last().expect("non-empty"), rule);
        states.push(next);
    }
    let maps: Vec<_> = if a.overlay {
        states.iter().map(|s| classify_stability(s, rule)).collect()
    } else {
        Vec::new()
    };
    let format = match a.format {
        RunFormat::Text => Format::Text,
        RunFormat::Svg => Format::Svg,
        RunFormat::Pgm => Format::Pgm,
        RunFormat::Json => {
            let last = states.last().expect("non-empty");
            let doc = RunDocument {
                rule: rule.kind.short_name(),
                radius: rule.radius,
                n: last.n(),
                steps: a.steps,
                states: states.iter().map(|s| s.to_string()).collect(),
                labels: a
                    .overlay
                    .then(|| maps.iter().map(|m| m.letters()).collect()),
                temporal_class: temporal_class(last, rule).name(),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
            return Ok(true);
        }
    };
    let spec = RenderSpec {
        format,
        overlay: a.overlay,
        cell_size: CELL_SIZE,
    };
    out.write_all(&render_spacetime(&states, &maps, spec)?)?;
    Ok(true)
}

#[derive(Serialize)]
struct ClassifyDocument {
    configuration: String,
    rule: &'static str,
    radius: usize,
    n: usize,
    temporal_class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    partner: Option<String>,
    case: ClassificationCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    spatial_period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_unstable_run: Option<usize>,
    labels: String,
}

fn classify(a: ClassifyArgs, out: &mut impl Write) -> Result<bool, CliError> {
    let rule = a.rule.with_radius(a.radius)?;
    let cfg = parse_configuration(&a.init, 1)?;
    let class = temporal_class(&cfg, rule);
    let result = classify_theorem(&cfg, a.radius)?;
    let doc = ClassifyDocument {
        configuration: cfg.to_string(),
        rule: rule.kind.short_name(),
        radius: rule.radius,
        n: cfg.n(),
        temporal_class: class.name(),
        partner: match &class {
            TemporalClass::TwoCycle { partner } => Some(partner.to_string()),
            _ => None,
        },
        case: result.case,
        spatial_period: result.spatial_period,
        max_unstable_run: result.max_unstable_run,
        labels: classify_stability(&cfg, rule).letters(),
    };
    match a.format {
        DocFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        DocFormat::Text => {
            // same keys and order as the json document
            let value = serde_json::to_value(&doc)?;
            for (key, v) in value.as_object().expect("struct serializes to an object") {
                match v {
                    serde_json::Value::String(s) => writeln!(out, "{key}: {s}")?,
                    other => writeln!(out, "{key}: {other}")?,
                }
            }
        }
    }
    Ok(true)
}

fn enumerate(a: EnumerateArgs, out: &mut impl Write) -> Result<bool, CliError> {
    let rule = a.rule.with_radius(a.radius)?;
    if a.size == 0 {
        return Err(CliError::Usage("ring size must be positive".into()));
    }
    let brute = || -> Result<Vec<Configuration>, CliError> {
        if a.size > BRUTE_FORCE_MAX_BITS {
            return Err(CliError::Usage(format!(
                "brute force is limited to n <= {BRUTE_FORCE_MAX_BITS}"
            )));
        }
        Ok(enumerate_bruteforce(a.size, a.radius, rule)?)
    };
    // the periodic set does not depend on the rule, so patterns serve both
    let pattern = || -> Result<Vec<Configuration>, CliError> {
        let gens = generate_patterns(a.radius)?;
        Ok(enumerate_from_generators(a.size, &gens)?)
    };
    let shape = |list: Vec<Configuration>| -> Vec<Configuration> {
        if !a.canonical {
            return list;
        }
        let mut reps: Vec<_> = list
            .iter()
            .map(|c| canonicalize(c).representative)
            .collect();
        reps.sort();
        reps.dedup();
        reps
    };
    let print = |out: &mut dyn Write, list: &[Configuration]| -> io::Result<()> {
        for c in list {
            writeln!(out, "{c}")?;
        }
        Ok(())
    };
    match a.method {
        Method::Brute => print(out, &shape(brute()?))?,
        Method::Pattern => print(out, &shape(pattern()?))?,
        Method::Both => {
            let b = shape(brute()?);
            let p = shape(pattern()?);
            writeln!(out, "brute {}", b.len())?;
            print(out, &b)?;
            writeln!(out, "pattern {}", p.len())?;
            print(out, &p)?;
            let same = b == p;
            writeln!(out, "{}", if same { "MATCH" } else { "MISMATCH" })?;
            return Ok(same);
        }
    }
    Ok(true)
}

fn verify(a: VerifyArgs, out: &mut impl Write) -> Result<bool, CliError> {
    Rule::new(RuleKind::Majority, a.radius)?;
    if a.n_max > EXHAUSTIVE_MAX {
        return Err(CliError::Usage(format!(
            "--n-max is limited to {EXHAUSTIVE_MAX}"
        )));
    }
    let exhaustive = run_exhaustive(a.radius, 1, a.n_max, &Group::ALL);
    let spec = RandomSpec {
        samples: a.samples,
        seed: a.seed,
        n_min: 1,
        n_max: RANDOM_MAX_N,
        r_min: a.radius,
        r_max: a.radius,
    };
    let random = run_random(&spec, &Group::ALL);
    let mut all_passed = true;
    for (title, suite) in [
        (
            format!("exhaustive n=1..{} r={}", a.n_max, a.radius),
            &exhaustive,
        ),
        (
            format!(
                "random samples={} seed={} n=1..{RANDOM_MAX_N} r={}",
                a.samples, a.seed, a.radius
            ),
            &random,
        ),
    ] {
        writeln!(out, "{title}")?;
        for rep in suite.reports() {
            writeln!(out, "  {rep}")?;
        }
        all_passed &= suite.passed();
    }
    writeln!(out, "{}", if all_passed { "PASS" } else { "FAIL" })?;
    Ok(all_passed)
}
