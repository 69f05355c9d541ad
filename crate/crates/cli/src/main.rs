use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use polyimage_core::degeneracy::{
    decompose, degenerate_image_bound, is_degenerate, span_dimension,
};
use polyimage_core::goodset::{env_verify, good_set_report, EnvConfig};
use polyimage_core::harness::{
    run_experiment, summarize_csv, write_csv, write_json, ExperimentConfig,
};
use polyimage_core::multgroup::{
    factorize, mult_rank, rank_doubling_check, solve_unit_equation, UnitEquation,
};
use polyimage_core::poly::{energy, infer_nvars, value_histogram};
use polyimage_core::setarith::{
    combine, difference_set, dyadic_profile, freiman_lemma_check, iterated, mixed_sumset,
    ruzsa_cover, verify_cover, LatticePointSet, Mode, SetStats,
};
use polyimage_core::{parse_poly, Budget, Error, GroundSet, SparsePoly};
use serde_json::{json, Value};

/// Exact sum-product and polynomial-image computations over the rationals.
#[derive(Parser)]
#[command(name = "polyimage", version)]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Cap on the number of tuples any enumeration may visit.
    #[arg(long, global = true, default_value_t = Budget::default().max_tuples)]
    max_tuples: u64,
    /// Cap on the size of any materialized set.
    #[arg(long, global = true, default_value_t = Budget::default().max_elements)]
    max_elements: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Degeneracy of a polynomial.
    #[command(subcommand)]
    Degen(DegenCommand),
    /// The image F(A, …, A).
    Image {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        set: SetArg,
        /// Include the full value histogram.
        #[arg(long)]
        histogram: bool,
    },
    /// The energy E_F(A).
    Energy {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        set: SetArg,
    },
    /// Multiplicative rank of the group generated by A.
    Rank {
        #[command(flatten)]
        set: SetArg,
    },
    /// Sum and product set operations.
    #[command(subcommand)]
    Setop(SetopCommand),
    /// Good-set representation counts.
    #[command(subcommand)]
    Goodset(GoodsetCommand),
    /// Enumerate unit-equation solutions in an exponent box (JSON file, `-` for stdin).
    Uniteq { input: PathBuf },
    /// Multiplicative group structure.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Experiment sweeps.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Args)]
struct PolyArg {
    /// Polynomial, e.g. "x1 + x2*x3" or "3/4*x1^2 - x{10}".
    #[arg(allow_hyphen_values = true)]
    poly: String,
    /// Number of variables; defaults to the largest index mentioned.
    #[arg(long)]
    nvars: Option<usize>,
}

impl PolyArg {
    fn parse(&self) -> anyhow::Result<SparsePoly> {
        let n = match self.nvars {
            Some(n) => n,
            None => infer_nvars(&self.poly)?,
        };
        Ok(parse_poly(&self.poly, n)?)
    }
}

#[derive(Args)]
struct SetArg {
    /// Ground set as a JSON array or comma list, e.g. "1,2,1/3".
    #[arg(long = "set", short = 'A', allow_hyphen_values = true)]
    set: String,
}

impl SetArg {
    fn parse(&self) -> anyhow::Result<GroundSet> {
        parse_set(&self.set)
    }
}

fn parse_set(text: &str) -> anyhow::Result<GroundSet> {
    GroundSet::parse(text).with_context(|| format!("invalid set `{text}`"))
}

#[derive(Subcommand)]
enum DegenCommand {
    /// Report d(F) and whether F is degenerate.
    Check {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Write a degenerate F as P(x^{v_1}, …, x^{v_{n−1}}).
    Decompose {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Compare |F(A)| for degenerate F with the product bound.
    Bound {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        set: SetArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Additive,
    Multiplicative,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Additive => Mode::Additive,
            ModeArg::Multiplicative => Mode::Multiplicative,
        }
    }
}

#[derive(Args)]
struct PairArgs {
    #[arg(short = 'a', long = "a", allow_hyphen_values = true)]
    a: String,
    /// Defaults to A.
    #[arg(short = 'b', long = "b", allow_hyphen_values = true)]
    b: Option<String>,
}

impl PairArgs {
    fn parse(&self) -> anyhow::Result<(GroundSet, GroundSet)> {
        let a = parse_set(&self.a)?;
        let b = match &self.b {
            Some(b) => parse_set(b)?,
            None => a.clone(),
        };
        Ok((a, b))
    }
}

#[derive(Subcommand)]
enum SetopCommand {
    /// A + B.
    Sum(PairArgs),
    /// A · B.
    Prod(PairArgs),
    /// A − B.
    Diff(PairArgs),
    /// k-fold sum or product set.
    Iter {
        #[command(flatten)]
        set: SetArg,
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum, default_value = "multiplicative")]
        mode: ModeArg,
    },
    /// kA − lA against K^{k+l}|A|.
    Mixed {
        #[command(flatten)]
        set: SetArg,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
    },
    /// Greedy covering X with B ⊆ X + A − A (or X·A·A⁻¹).
    Cover {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "additive")]
        mode: ModeArg,
    },
    /// Sizes of A^(2^i) for i = 0..=levels.
    Dyadic {
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        levels: usize,
    },
    /// |X + X| against the affine dimension of a lattice point set.
    Freiman {
        /// Points as a JSON array of integer arrays.
        #[arg(long)]
        points: String,
    },
    /// Size and both doubling constants.
    Stats {
        #[command(flatten)]
        set: SetArg,
    },
}

#[derive(Subcommand)]
enum GoodsetCommand {
    /// Bad-tuple count and representation counts over the good set.
    Report {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        set: SetArg,
    },
    /// Good-set statistics against reference curves in K and the rank.
    Env {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        set: SetArg,
        /// JSON file with a `curves` list; built-in curves otherwise.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Rank of ⟨A⟩ with the factorization of each element.
    Rank {
        #[command(flatten)]
        set: SetArg,
    },
    /// Rank of a⁻¹A against the multiplicative doubling.
    Check {
        #[command(flatten)]
        set: SetArg,
    },
    /// Same as the top-level `uniteq`.
    Uniteq { input: PathBuf },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run a sweep from a JSON config.
    Run {
        config: PathBuf,
        /// Overrides `outputs.csv`.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Overrides `outputs.json`.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print a table and summary of an experiment CSV.
    Report { csv: PathBuf },
}

/// Result of a successful command: the JSON to print and whether an
/// invariant failed.
struct Outcome {
    output: Value,
    violation: bool,
}

impl Outcome {
    fn ok(output: Value) -> Self {
        Outcome {
            output,
            violation: false,
        }
    }
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let budget = Budget {
        max_tuples: cli.budget.max_tuples,
        max_elements: cli.budget.max_elements,
    };
    let budget = &budget;
    Ok(match cli.command {
        Command::Degen(DegenCommand::Check { poly }) => {
            let f = poly.parse()?;
            Outcome::ok(json!({
                "nvars": f.nvars(),
                "span_dimension": span_dimension(&f)?,
                "degenerate": is_degenerate(&f)?,
            }))
        }
        Command::Degen(DegenCommand::Decompose { poly }) => {
            Outcome::ok(to_value(&decompose(&poly.parse()?)?)?)
        }
        Command::Degen(DegenCommand::Bound { poly, set }) => {
            let report = degenerate_image_bound(&poly.parse()?, &set.parse()?, budget)?;
            let violation = !report.within_bound || report.factors.iter().any(|f| !f.plunnecke_ok);
            Outcome {
                output: to_value(&report)?,
                violation,
            }
        }
        Command::Image {
            poly,
            set,
            histogram,
        } => {
            let h = value_histogram(&poly.parse()?, &set.parse()?, budget)?;
            let mut out = json!({
                "image": h.image(),
                "size": h.counts.len(),
            });
            if histogram {
                out["histogram"] = to_value(&h)?;
            }
            Outcome::ok(out)
        }
        Command::Energy { poly, set } => {
            let f = poly.parse()?;
            let a = set.parse()?;
            Outcome::ok(json!({ "energy": energy(&f, &a, budget)? }))
        }
        Command::Rank { set } | Command::Group(GroupCommand::Rank { set }) => {
            let a = set.parse()?;
            let factors = a
                .iter()
                .map(|x| Ok((x.to_string(), to_value(&factorize(x)?)?)))
                .collect::<anyhow::Result<serde_json::Map<String, Value>>>()?;
            Outcome::ok(json!({ "rank": mult_rank(&a)?, "factorizations": factors }))
        }
        Command::Group(GroupCommand::Check { set }) => {
            let c = rank_doubling_check(&set.parse()?, budget)?;
            let violation = !c.lemma_ok || c.elementary_ok == Some(false);
            Outcome {
                output: to_value(&c)?,
                violation,
            }
        }
        Command::Uniteq { input } | Command::Group(GroupCommand::Uniteq { input }) => {
            let eq: UnitEquation = serde_json::from_str(&read_input(&input)?)
                .with_context(|| format!("invalid unit equation in {}", input.display()))?;
            let s = solve_unit_equation(&eq, budget)?;
            Outcome {
                violation: s.within_bound == Some(false),
                output: to_value(&s)?,
            }
        }
        Command::Setop(cmd) => Outcome::ok(setop(cmd, budget)?),
        Command::Goodset(GoodsetCommand::Report { poly, set }) => {
            let r = good_set_report(&poly.parse()?, &set.parse()?, budget)?;
            let violation = u128::from(r.bad_count) > r.bad_bound;
            Outcome {
                output: to_value(&r)?,
                violation,
            }
        }
        Command::Goodset(GoodsetCommand::Env { poly, set, curves }) => {
            let config = match curves {
                Some(path) => serde_json::from_str(&read_input(&path)?)
                    .with_context(|| format!("invalid curve config in {}", path.display()))?,
                None => EnvConfig::default(),
            };
            Outcome::ok(to_value(&env_verify(
                &poly.parse()?,
                &set.parse()?,
                &config,
                budget,
            )?)?)
        }
        Command::Experiment(ExperimentCommand::Run { config, csv, json }) => {
            let mut cfg: ExperimentConfig = ExperimentConfig::from_json(&read_input(&config)?)
                .with_context(|| format!("invalid experiment config {}", config.display()))?;
            if csv.is_some() {
                cfg.outputs.csv = csv;
            }
            if json.is_some() {
                cfg.outputs.json = json;
            }
            let report = run_experiment(&cfg)?;
            if let Some(path) = &cfg.outputs.csv {
                write_csv(&report, fs::File::create(path)?)?;
            }
            if let Some(path) = &cfg.outputs.json {
                write_json(&report, fs::File::create(path)?)?;
            }
            let violations: Vec<Value> = report
                .violations()
                .map(|(row, v)| json!({ "index": row.index, "violation": v }))
                .collect();
            let failed = report.rows.iter().filter(|r| r.error.is_some()).count();
            Outcome {
                violation: !violations.is_empty(),
                output: json!({
                    "rows": report.rows.len(),
                    "failed_rows": failed,
                    "violations": violations,
                    "csv": cfg.outputs.csv,
                    "json": cfg.outputs.json,
                }),
            }
        }
        Command::Experiment(ExperimentCommand::Report { csv }) => {
            print!("{}", summarize_csv(&csv)?);
            return Ok(Outcome::ok(Value::Null));
        }
    })
}

fn setop(cmd: SetopCommand, budget: &Budget) -> anyhow::Result<Value> {
    let with_size = |s: GroundSet| json!({ "size": s.len(), "set": s });
    Ok(match cmd {
        SetopCommand::Sum(p) => {
            let (a, b) = p.parse()?;
            with_size(combine(&a, &b, Mode::Additive, budget)?)
        }
        SetopCommand::Prod(p) => {
            let (a, b) = p.parse()?;
            with_size(combine(&a, &b, Mode::Multiplicative, budget)?)
        }
        SetopCommand::Diff(p) => {
            let (a, b) = p.parse()?;
            with_size(difference_set(&a, &b, budget)?)
        }
        SetopCommand::Iter { set, k, mode } => {
            with_size(iterated(&set.parse()?, k, mode.into(), budget)?)
        }
        SetopCommand::Mixed { set, k, l } => to_value(&mixed_sumset(&set.parse()?, k, l, budget)?)?,
        SetopCommand::Cover { pair, mode } => {
            let (a, b) = pair.parse()?;
            let mode = mode.into();
            let x = ruzsa_cover(&a, &b, mode)?;
            let verified = verify_cover(&x, &a, &b, mode)?;
            if !verified {
                bail!(Error::InvariantViolation("cover does not cover B".into()));
            }
            json!({ "cover": x, "size": x.len(), "verified": verified })
        }
        SetopCommand::Dyadic { set, levels } => {
            to_value(&dyadic_profile(&set.parse()?, levels, budget)?)?
        }
        SetopCommand::Freiman { points } => {
            let raw: Vec<Vec<i64>> = serde_json::from_str(&points)
                .context("points must be a JSON array of integer arrays")?;
            let dim = raw.first().map_or(0, Vec::len);
            to_value(&freiman_lemma_check(&LatticePointSet::new(dim, raw)?)?)?
        }
        SetopCommand::Stats { set } => to_value(&SetStats::of(&set.parse()?, budget)?)?,
    })
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvariantViolation(_)) => 2,
        _ => 1,
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
        Ok(outcome) => {
            if !outcome.output.is_null() {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.output).expect("JSON values serialize")
                );
            }
            if outcome.violation {
                eprintln!("error: invariant violated");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
