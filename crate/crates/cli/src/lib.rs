//! The `tgeom` command line.
//!
//! Every command writes its whole report into an [`Outcome`] so output is
//! emitted once and can be inspected in tests without spawning a process.
//!
//! Exit codes: 0 success, 1 input error, 2 validation violations,
//! 3 not equivalent, 4 no solution, 5 search limit exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tgeom::generate::{random_table, Values};
use tgeom::linear::{solve_combination_with, survey_linearity_with, SurveyOptions, SEARCH_LIMIT, SURVEY_LIMIT};
use tgeom::table_file::{self, RawTable};
use tgeom::vector::{verify_identities_with_limit, IDENTITY_POINT_LIMIT};
use tgeom::{equivalent, scalar_product, Coefficients, Error, GridSpec, SigmaSpace, SolveOptions, Vector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;
pub const EXIT_NO_SOLUTION: i32 = 4;
pub const EXIT_LIMIT: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "tgeom", version, about = "World-function geometry on finite point sets")]
pub struct Cli {
    /// Override the tolerance ε used for every comparison.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Override the point-count limit of the exhaustive searches.
    #[arg(long, global = true)]
    pub limit: Option<usize>,
    /// Run searches even above the limit.
    #[arg(long, global = true)]
    pub force: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report (or generated table) to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a σ-table file.
    Check { file: PathBuf },
    /// Scalar product (P0P1.Q0Q1).
    Dot {
        file: PathBuf,
        p0: String,
        p1: String,
        q0: String,
        q1: String,
    },
    /// Decide whether P0P1 and R0R1 are equivalent.
    Equiv {
        file: PathBuf,
        p0: String,
        p1: String,
        r0: String,
        r1: String,
    },
    /// Solve S0S1 = α·P0P1 + β·R0R1.
    #[command(allow_negative_numbers = true)]
    Combine {
        file: PathBuf,
        alpha: f64,
        beta: f64,
        p0: String,
        p1: String,
        r0: String,
        r1: String,
    },
    /// Generate an integer grid with optional deleted points.
    Grid {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        size: usize,
        /// Deleted point as comma-separated coordinates, e.g. `1,1`. Repeatable.
        #[arg(long = "delete", value_name = "COORDS")]
        deleted: Vec<String>,
    },
    /// Count solvable vector pairs for each coefficient pair.
    Survey {
        file: PathBuf,
        /// Coefficient pairs `α,β`. Options must come before this list.
        #[arg(required = true, allow_hyphen_values = true, value_name = "ALPHA,BETA")]
        coefficients: Vec<String>,
        /// Only count vector pairs whose endpoints also appear in this file.
        #[arg(long)]
        restrict_to: Option<PathBuf>,
    },
    /// Exhaustively check the scalar-product identities.
    Identities { file: PathBuf },
    /// Write a random σ-table.
    Random {
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        asymmetric: bool,
        /// Draw integers in `[lo, hi]` instead of reals in `[lo, hi)`.
        #[arg(long)]
        integer: bool,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        hi: f64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome::with_code(EXIT_OK, stdout)
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchLimitExceeded { .. } | Error::OracleLimitExceeded { .. } => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        let hint = if code == EXIT_LIMIT {
            " (use --force to run anyway)"
        } else {
            ""
        };
        Outcome::fail(code, format!("error: {e}{hint}"))
    }
}

/// Parses arguments and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text.trim_end())
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Outcome::fail(EXIT_INPUT, format!("error: --tolerance must be positive, got {t}"));
        }
    }
    if cli.limit == Some(0) {
        return Outcome::fail(EXIT_INPUT, "error: --limit must be a positive integer");
    }
    let outcome = match dispatch(cli) {
        Ok(o) => o,
        Err(o) => o,
    };
    match &cli.out {
        Some(path) if outcome.code != EXIT_INPUT && outcome.code != EXIT_LIMIT => {
            match std::fs::write(path, &outcome.stdout) {
                Ok(()) => Outcome {
                    stdout: String::new(),
                    ..outcome
                },
                Err(e) => Outcome::fail(EXIT_INPUT, format!("error: cannot write {}: {e}", path.display())),
            }
        }
        _ => outcome,
    }
}

type Step<T> = std::result::Result<T, Outcome>;

fn dispatch(cli: &Cli) -> Step<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Check { file } => cmd_check(cli, file),
        Command::Dot { file, p0, p1, q0, q1 } => {
            let space = load(cli, file)?;
            let value = scalar_product(
                &space,
                &Vector::new(p0.as_str(), p1.as_str()),
                &Vector::new(q0.as_str(), q1.as_str()),
            )?;
            Ok(Outcome::ok(format!("{value}\n")))
        }
        Command::Equiv { file, p0, p1, r0, r1 } => {
            let space = load(cli, file)?;
            let w = equivalent(
                &space,
                &Vector::new(p0.as_str(), p1.as_str()),
                &Vector::new(r0.as_str(), r1.as_str()),
            )?;
            let csv = format == Some(Format::Csv);
            let mut out = String::new();
            if csv {
                out.push_str("equivalent,q0,q1,slot,lhs,rhs\n");
            }
            match w.counterexample {
                None => {
                    out.push_str(if csv { "true,,,,,\n" } else { "equivalent\n" });
                    Ok(Outcome::ok(out))
                }
                Some(c) => {
                    if csv {
                        let _ = writeln!(out, "false,{},{},{},{},{}", c.q0, c.q1, c.slot, c.lhs, c.rhs);
                    } else {
                        let _ = writeln!(out, "not equivalent");
                        let _ = writeln!(
                            out,
                            "witness: probe {}->{} ({}) lhs={} rhs={}",
                            c.q0, c.q1, c.slot, c.lhs, c.rhs
                        );
                    }
                    Ok(Outcome::with_code(EXIT_NOT_EQUIVALENT, out))
                }
            }
        }
        Command::Combine {
            file,
            alpha,
            beta,
            p0,
            p1,
            r0,
            r1,
        } => {
            let space = load(cli, file)?;
            let c = Coefficients::new(*alpha, *beta)?;
            let options = SolveOptions {
                limit: cli.limit.unwrap_or(SEARCH_LIMIT),
                force: cli.force,
            };
            let v = Vector::new(p0.as_str(), p1.as_str());
            let w = Vector::new(r0.as_str(), r1.as_str());
            let result = solve_combination_with(&space, c, &v, &w, &options)?;
            let mut out = String::new();
            if format == Some(Format::Csv) {
                out.push_str("origin,end\n");
                for s in &result.solutions {
                    let _ = writeln!(out, "{},{}", s.origin, s.end);
                }
            } else {
                let case = result.guaranteed.map_or("none".to_owned(), |c| c.to_string());
                let _ = writeln!(out, "case: {case}");
                if let Some(r) = &result.representative {
                    let _ = writeln!(out, "representative: {r}");
                }
                let _ = writeln!(out, "solutions: {}", result.solutions.len());
                for s in &result.solutions {
                    let _ = writeln!(out, "  {s}");
                }
                if result.solutions.is_empty() {
                    out.push_str("no vector satisfies the combination: it is not defined here\n");
                }
            }
            let code = if result.solutions.is_empty() {
                EXIT_NO_SOLUTION
            } else {
                EXIT_OK
            };
            Ok(Outcome::with_code(code, out))
        }
        Command::Grid { dim, size, deleted } => {
            let mut spec = GridSpec::new(*dim, *size);
            for d in deleted {
                let coords = d
                    .split(',')
                    .map(|x| x.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| Outcome::fail(EXIT_INPUT, format!("error: invalid point `{d}`")))?;
                spec.deleted.insert(coords);
            }
            let mut space = SigmaSpace::grid(&spec)?;
            if let Some(t) = cli.tolerance {
                space = space.with_tolerance(t)?;
            }
            Ok(Outcome::ok(table_file::write(&space)))
        }
        Command::Survey {
            file,
            coefficients,
            restrict_to,
        } => {
            let space = load(cli, file)?;
            let coefficients = coefficients.iter().map(|s| parse_pair(s)).collect::<Step<Vec<_>>>()?;
            let restrict_to = match restrict_to {
                None => None,
                Some(path) => {
                    let other = load(cli, path)?;
                    Some(
                        other
                            .points()
                            .iter()
                            .filter(|p| space.contains(p.as_str()))
                            .cloned()
                            .collect(),
                    )
                }
            };
            let options = SurveyOptions {
                limit: cli.limit.unwrap_or(SURVEY_LIMIT),
                force: cli.force,
                restrict_to,
            };
            let report = survey_linearity_with(&space, &coefficients, &options)?;
            if format == Some(Format::Human) {
                let mut out = String::new();
                let _ = writeln!(out, "points: {}", report.points);
                for r in &report.rows {
                    let _ = writeln!(
                        out,
                        "α={} β={}: {} pairs, {} solvable, {} guaranteed ({} solvable), {} unsolvable",
                        r.alpha, r.beta, r.total_pairs, r.solvable, r.guaranteed, r.guaranteed_solvable, r.unsolvable
                    );
                }
                Ok(Outcome::ok(out))
            } else {
                Ok(Outcome::ok(report.to_csv()))
            }
        }
        Command::Identities { file } => {
            let space = load(cli, file)?;
            let report = verify_identities_with_limit(&space, cli.limit.unwrap_or(IDENTITY_POINT_LIMIT))?;
            let mut out = String::new();
            if format == Some(Format::Csv) {
                out.push_str("identity,points,lhs,rhs\n");
                for v in &report.violations {
                    let pts: Vec<&str> = v.points.iter().map(|p| p.as_str()).collect();
                    let _ = writeln!(out, "{},{},{},{}", v.identity, pts.join(" "), v.lhs, v.rhs);
                }
            } else {
                let _ = writeln!(out, "checked: {}", report.checked);
                let skipped = if report.symmetry_checked {
                    "checked"
                } else {
                    "skipped (asymmetric σ)"
                };
                let _ = writeln!(out, "a2.1: {skipped}");
                let _ = writeln!(out, "violations: {}", report.violations.len());
                for v in &report.violations {
                    let pts: Vec<&str> = v.points.iter().map(|p| p.as_str()).collect();
                    let _ = writeln!(out, "  {} ({}) lhs={} rhs={}", v.identity, pts.join(", "), v.lhs, v.rhs);
                }
            }
            let code = if report.is_clean() { EXIT_OK } else { EXIT_VIOLATIONS };
            Ok(Outcome::with_code(code, out))
        }
        Command::Random {
            points,
            seed,
            asymmetric,
            integer,
            lo,
            hi,
        } => {
            if lo.partial_cmp(hi) != Some(std::cmp::Ordering::Less) {
                return Err(Outcome::fail(EXIT_INPUT, "error: --lo must be below --hi"));
            }
            let values = if *integer {
                Values::Integer {
                    lo: lo.ceil() as i64,
                    hi: hi.floor() as i64,
                }
            } else {
                Values::Uniform { lo: *lo, hi: *hi }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut space = random_table(&mut rng, *points, values, !asymmetric)?;
            if let Some(t) = cli.tolerance {
                space = space.with_tolerance(t)?;
            }
            Ok(Outcome::ok(table_file::write(&space)))
        }
    }
}

fn parse_pair(s: &str) -> Step<Coefficients> {
    if s.starts_with("--") {
        return Err(Outcome::fail(
            EXIT_INPUT,
            format!("error: `{s}` found among coefficient pairs; put options before the `α,β` list"),
        ));
    }
    let bad = || Outcome::fail(EXIT_INPUT, format!("error: expected `α,β`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok(Coefficients::new(a, b)?)
}

fn read_raw(cli: &Cli, file: &Path) -> Step<RawTable> {
    let text = table_file::read_text(file)?;
    let mut raw = table_file::parse(&text).map_err(|e| {
        let mut o = Outcome::from(e);
        o.stderr = format!("{}: {}", file.display(), o.stderr);
        o
    })?;
    if let Some(t) = cli.tolerance {
        raw.tolerance = Some(t);
    }
    Ok(raw)
}

fn load(cli: &Cli, file: &Path) -> Step<SigmaSpace> {
    Ok(read_raw(cli, file)?.build()?)
}

fn cmd_check(cli: &Cli, file: &Path) -> Step<Outcome> {
    let raw = read_raw(cli, file)?;
    let eps = raw.tolerance();
    let mut problems = Vec::new();
    for (p, q, value) in &raw.entries {
        if !value.is_finite() {
            problems.push(format!("non-finite value σ({p}, {q}) = {value}"));
        } else if p == q && value.abs() > eps {
            problems.push(format!("diagonal violation σ({p}, {p}) = {value}"));
        }
    }
    let mut rows: Vec<(&str, String)> = vec![
        ("points", raw.labels.len().to_string()),
        ("tolerance", format!("{eps:e}")),
    ];
    let mut code = EXIT_OK;
    if problems.is_empty() {
        let space = raw.build()?;
        rows.push(("diagonal", "ok".into()));
        rows.push(("symmetric", if space.is_symmetric() { "yes" } else { "no" }.into()));
        let limit = cli.limit.unwrap_or(IDENTITY_POINT_LIMIT);
        if space.len() <= limit {
            let report = verify_identities_with_limit(&space, limit)?;
            rows.push(("identity violations", report.violations.len().to_string()));
            if !report.is_clean() {
                code = EXIT_VIOLATIONS;
            }
        } else {
            rows.push(("identity violations", format!("not checked (more than {limit} points)")));
        }
    } else {
        code = EXIT_VIOLATIONS;
        rows.push(("diagonal", "violated".into()));
    }
    rows.push(("status", if code == EXIT_OK { "valid" } else { "invalid" }.into()));

    let mut out = String::new();
    let csv = cli.format == Some(Format::Csv);
    if csv {
        out.push_str("key,value\n");
    }
    for (k, v) in &rows {
        if csv {
            let _ = writeln!(out, "{},{}", k.replace(' ', "_"), v);
        } else {
            let _ = writeln!(out, "{k}: {v}");
        }
    }
    for p in &problems {
        if csv {
            let _ = writeln!(out, "violation,{p}");
        } else {
            let _ = writeln!(out, "  {p}");
        }
    }
    Ok(Outcome::with_code(code, out))
}
