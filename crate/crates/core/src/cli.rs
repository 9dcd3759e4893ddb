//! The `pstar` command-line front end.
//!
//! [`run`] takes the argument list and output streams explicitly so the
//! whole CLI can be driven in-process. Exit codes: 0 success, 2 usage error,
//! 3 convergence, resource or I/O failure, 4 failed comparison.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::emit::{Record, Table, Value};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Plane, Quantity};
use crate::oracle::{self, default_delta, n_max, MEMORY_BUDGET_BYTES};
use crate::{Model, RegionES, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;
pub const EXIT_COMPARISON: i32 = 4;

pub const ENV_TOL_ROOT: &str = "PSTAR_TOL_ROOT";
pub const ENV_TOL_REGION: &str = "PSTAR_TOL_REGION";

#[derive(Debug, Parser)]
#[command(name = "pstar", version, about = "Edge/out-star entropy and free-energy surfaces for directed graphs")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Star order p (>= 2)
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,

    /// Output format (defaults per command)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Root-finder tolerance
    #[arg(long, global = true, env = ENV_TOL_ROOT)]
    tol_root: Option<f64>,

    /// Tolerance for region boundaries
    #[arg(long, global = true, env = ENV_TOL_REGION)]
    tol_region: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Critical point of the transition curve
    Critical,
    /// Sample the transition curve beta2 = q(beta1)
    Curve {
        #[arg(long, allow_hyphen_values = true)]
        beta1_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta1_max: Option<f64>,
        #[arg(long, default_value_t = 32)]
        steps: usize,
    },
    /// Evaluate a surface on a grid
    Grid {
        #[arg(long)]
        quantity: String,
        /// e-s, e-beta2 or beta1-s (defaults per quantity)
        #[arg(long)]
        plane: Option<String>,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, allow_hyphen_values = true)]
        beta1_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta1_max: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta2_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta2_max: Option<f64>,
    },
    /// Evaluate one point: (e,s), (e,beta2), (beta1,s) or (beta1,beta2)
    Point {
        #[command(flatten)]
        q: Query,
    },
    /// Compare finite-n window probabilities with the limit
    Compare {
        #[arg(long)]
        e: f64,
        #[arg(long)]
        s: f64,
        /// Window half-width (default max(0.05, 2/n) per n)
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "8,12,16")]
        n_list: Vec<u32>,
    },
    /// Exact finite-n law, window probability, or conditioned samples
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        e: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Draw this many conditioned samples
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for cached law tables
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Print effective settings and built-in defaults
    Config,
}

#[derive(Debug, Args)]
struct Query {
    #[arg(long)]
    e: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta2: Option<f64>,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParams(_) | Error::Domain(_) | Error::NearCritical(_) => EXIT_USAGE,
        Error::Convergence(_) | Error::EmptyWindow(_) | Error::Resource(_) | Error::Format(_) | Error::Io(_) => {
            EXIT_FAILURE
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

/// Output of one command: text plus an exit code.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }
}

/// Runs the CLI with `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = Cli::command()
        .try_get_matches_from(args)
        .and_then(|m| Cli::from_arg_matches(&m).map(|cli| (cli, m)));
    let (cli, matches) = match parsed {
        Ok(pair) => pair,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = err.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let sources = Sources::from_matches(&matches);
    let result = execute(&cli, &sources).and_then(|out| {
        match &cli.common.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => stdout.write_all(out.text.as_bytes())?,
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code(&err)
        }
    }
}

fn settings(common: &Common) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(t) = common.tol_root {
        s.root_tol = t;
    }
    if let Some(t) = common.tol_region {
        s.region_tol = t;
    }
    Ok(s)
}

fn model(common: &Common) -> Result<Model> {
    Model::with_settings(common.p, settings(common)?)
}

fn execute(cli: &Cli, sources: &Sources) -> Result<Output> {
    let c = &cli.common;
    match &cli.command {
        Command::Critical => critical(c),
        Command::Curve { beta1_min, beta1_max, steps } => curve(c, *beta1_min, *beta1_max, *steps),
        Command::Grid { quantity, plane, resolution, beta1_min, beta1_max, beta2_min, beta2_max } => {
            let mut spec = GridSpec::new(quantity.parse::<Quantity>()?, *resolution);
            spec.plane = plane.as_deref().map(str::parse::<Plane>).transpose()?;
            let m = model(c)?;
            let crit = m.critical_point();
            if beta1_min.is_some() || beta1_max.is_some() {
                spec.beta1_range =
                    Some((beta1_min.unwrap_or(crit.beta1_c - 4.0), beta1_max.unwrap_or(crit.beta1_c + 2.0)));
            }
            if beta2_min.is_some() || beta2_max.is_some() {
                spec.beta2_range =
                    Some((beta2_min.unwrap_or(crit.beta2_c - 2.0), beta2_max.unwrap_or(crit.beta2_c + 4.0)));
            }
            let grid = m.surface_grid(&spec)?;
            Ok(Output::ok(match c.format.unwrap_or(Format::Csv) {
                Format::Csv => grid.to_csv(),
                Format::Json => grid.to_json(),
            }))
        }
        Command::Point { q } => point(c, q),
        Command::Compare { e, s, delta, n_list } => compare(c, *e, *s, *delta, n_list),
        Command::Oracle { n, e, s, delta, count, seed, cache } => {
            oracle_cmd(c, *n, (*e, *s), *delta, *count, *seed, cache.as_ref())
        }
        Command::Config => config(c, sources),
    }
}

fn render_record(r: &Record, format: Format) -> String {
    match format {
        Format::Json => r.to_json() + "\n",
        Format::Csv => r.to_csv(),
    }
}

fn render_table(t: &Table, format: Format) -> String {
    match format {
        Format::Json => t.to_json() + "\n",
        Format::Csv => t.to_csv(),
    }
}

fn critical(c: &Common) -> Result<Output> {
    let cp = model(c)?.critical_point();
    let r = Record::new()
        .with("p", cp.p)
        .with("beta1_c", cp.beta1_c)
        .with("beta2_c", cp.beta2_c)
        .with("e_c", cp.e_c)
        .with("s_c", cp.s_c);
    Ok(Output::ok(render_record(&r, c.format.unwrap_or(Format::Json))))
}

fn curve(c: &Common, lo: Option<f64>, hi: Option<f64>, steps: usize) -> Result<Output> {
    let m = model(c)?;
    let b1c = m.critical_point().beta1_c;
    let lo = lo.unwrap_or(b1c - 4.0);
    let hi = hi.unwrap_or(b1c - 0.1);
    if steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    if !(lo < hi) {
        return Err(usage(format!("need beta1-min < beta1-max, got {lo} and {hi}")));
    }
    if hi >= b1c {
        return Err(usage(format!("beta1 range must stay below beta1_c = {b1c}")));
    }
    let mut table = Table::new(&["beta1", "beta2", "x1", "x2", "qprime", "dx1_dbeta1", "dx2_dbeta1"]);
    for i in 0..steps {
        let b1 = if i + 1 == steps { hi } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 };
        let cp = m.curve_point(b1)?;
        table.push(
            [cp.beta1, cp.beta2, cp.x1, cp.x2, cp.qprime, cp.dx1_dbeta1, cp.dx2_dbeta1]
                .into_iter()
                .map(Value::Num)
                .collect(),
        );
    }
    Ok(Output::ok(render_table(&table, c.format.unwrap_or(Format::Csv))))
}

fn point(c: &Common, q: &Query) -> Result<Output> {
    let m = model(c)?;
    let tol = m.settings().region_tol;
    let mut r = Record::new().with("p", m.p());
    match (q.e, q.s, q.beta1, q.beta2) {
        (Some(e), Some(s), None, None) => {
            let region = m.classify_es(e, s, tol);
            r.push("query", "e_s");
            r.push("e", e);
            r.push("s", s);
            r.push("psi", m.entropy(e, s)?);
            r.push("region", region.as_str());
            if region == RegionES::Interior {
                let prof = m.solve_bipodal(e, s)?;
                r.push("x1", prof.x1);
                r.push("x2", prof.x2);
                r.push("lambda", prof.lambda);
                r.push("beta1", prof.beta1);
                r.push("beta2", prof.beta2);
                r.push("degenerate", prof.degenerate);
            }
        }
        (Some(e), None, None, Some(b2)) => {
            let slice = m.u_slice_beta2(b2)?;
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::Domain(format!("e must lie in [0, 1], got {e}")));
            }
            r.push("query", "e_beta2");
            r.push("e", e);
            r.push("beta2", b2);
            r.push("psi", m.free_energy_e_in(e, b2, &slice));
            r.push("star_density", m.star_density_in(e, &slice));
            r.push("dpsi_de", m.free_energy_e_slope_in(e, b2, &slice));
            r.push("region", m.classify_e_in(e, b2, &slice, tol).as_str());
            if let Some(cp) = slice.curve {
                r.push("x1", cp.x1);
                r.push("x2", cp.x2);
                r.push("beta1", cp.beta1);
            }
        }
        (None, Some(s), Some(b1), None) => {
            let slice = m.u_slice_beta1(b1)?;
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::Domain(format!("s must lie in [0, 1], got {s}")));
            }
            r.push("query", "beta1_s");
            r.push("beta1", b1);
            r.push("s", s);
            r.push("psi", m.free_energy_s_in(b1, s, &slice));
            r.push("edge_density", m.edge_density_in(s, &slice));
            r.push("dpsi_ds", m.free_energy_s_slope_in(b1, s, &slice));
            r.push("region", m.classify_s_in(b1, s, &slice, tol).as_str());
            if let Some(cp) = slice.curve {
                r.push("x1", cp.x1);
                r.push("x2", cp.x2);
                r.push("beta2", cp.beta2);
            }
        }
        (None, None, Some(b1), Some(b2)) => {
            let sol = m.ergm_free_energy(b1, b2)?;
            r.push("query", "beta1_beta2");
            r.push("beta1", b1);
            r.push("beta2", b2);
            r.push("psi", sol.value);
            r.push("argmax", Value::nums(&sol.argmax));
        }
        _ => {
            return Err(usage(
                "point needs exactly one of: --e --s | --e --beta2 | --beta1 --s | --beta1 --beta2",
            ))
        }
    }
    Ok(Output::ok(render_record(&r, c.format.unwrap_or(Format::Json))))
}

fn compare(c: &Common, e: f64, s: f64, delta: Option<f64>, n_list: &[u32]) -> Result<Output> {
    let m = model(c)?;
    if n_list.is_empty() {
        return Err(usage("--n-list is empty"));
    }
    if let Some(d) = delta.filter(|d| !(*d > 0.0)) {
        return Err(usage(format!("delta must be positive, got {d}")));
    }
    let psi = m.entropy(e, s)?;
    let mut table = Table::new(&["n", "delta", "psi_n", "psi", "gap", "status"]);
    let mut gaps = Vec::new();
    for &n in n_list {
        let d = delta.unwrap_or(default_delta(n));
        let law = oracle::exact_joint_law(n, m.p())?;
        let psi_n = law.window_log_prob(e, s, d)?;
        let gap = (psi_n - psi).abs();
        let status = if psi_n == f64::NEG_INFINITY { "empty_window" } else { "ok" };
        gaps.push(if gap.is_nan() { f64::INFINITY } else { gap });
        table.push(vec![n.into(), d.into(), psi_n.into(), psi.into(), gap.into(), status.into()]);
    }
    let decreasing = gaps.iter().all(|g| g.is_finite()) && gaps.windows(2).all(|w| w[1] < w[0]);

    let n_big = *n_list.iter().max().unwrap();
    let d_big = delta.unwrap_or(default_delta(n_big));
    let row_law = match oracle::conditional_row_law(n_big, m.p(), e, s, d_big) {
        Ok(law) => Some(law),
        Err(Error::EmptyWindow(_)) => None,
        Err(err) => return Err(err),
    };
    let mut hist = Table::new(&["d", "d_over_n", "probability"]);
    if let Some(law) = &row_law {
        for (d, &q) in law.probabilities.iter().enumerate() {
            hist.push(vec![Value::Int(d as i64), Value::Num(d as f64 / n_big as f64), Value::Num(q)]);
        }
    }
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => format!("{}\n{}", table.to_csv(), hist.to_csv()),
        Format::Json => {
            let r = Record::new()
                .with("p", m.p())
                .with("e", e)
                .with("s", s)
                .with("rows", table.to_value())
                .with("gaps_decreasing", decreasing)
                .with(
                    "row_law",
                    match &row_law {
                        Some(_) => Record::new().with("n", n_big).with("delta", d_big).with("histogram", hist.to_value()).into(),
                        None => Value::Null,
                    },
                );
            r.to_json() + "\n"
        }
    };
    Ok(Output { text, code: if decreasing { EXIT_OK } else { EXIT_COMPARISON } })
}

fn oracle_cmd(
    c: &Common,
    n: u32,
    centre: (Option<f64>, Option<f64>),
    delta: Option<f64>,
    count: Option<usize>,
    seed: u64,
    cache: Option<&PathBuf>,
) -> Result<Output> {
    let m = model(c)?;
    let p = m.p();
    let law = || match cache {
        Some(dir) => oracle::exact_joint_law_cached(n, p, dir),
        None => oracle::exact_joint_law(n, p),
    };
    let (e, s) = match centre {
        (Some(e), Some(s)) => (e, s),
        (None, None) => {
            if count.is_some() {
                return Err(usage("--count needs a window: pass --e and --s"));
            }
            let law = law()?;
            let mut t = Table::new(&["E", "S", "log_weight"]);
            for x in law.entries() {
                t.push(vec![Value::Int(x.e as i64), Value::Int(x.s as i64), Value::Num(x.log_weight)]);
            }
            return Ok(Output::ok(render_table(&t, c.format.unwrap_or(Format::Csv))));
        }
        _ => return Err(usage("pass both --e and --s, or neither")),
    };
    let delta = delta.unwrap_or(default_delta(n));
    if let Some(count) = count {
        let draws = oracle::sample_conditioned(n, p, e, s, delta, seed, count)?;
        let cols: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
        let mut t = Table { columns: cols, rows: Vec::new() };
        for rows in draws {
            t.push(rows.into_iter().map(Value::from).collect());
        }
        return Ok(Output::ok(render_table(&t, c.format.unwrap_or(Format::Csv))));
    }
    let psi_n = law()?.window_log_prob(e, s, delta)?;
    let mut r = Record::new().with("n", n).with("p", p).with("e", e).with("s", s).with("delta", delta);
    r.push("psi_n", psi_n);
    if psi_n > f64::NEG_INFINITY {
        let row = oracle::conditional_row_law(n, p, e, s, delta)?;
        r.push("row_law", Value::nums(&row.probabilities));
    }
    Ok(Output::ok(render_record(&r, c.format.unwrap_or(Format::Json))))
}

fn config(c: &Common, sources: &Sources) -> Result<Output> {
    let eff = settings(c)?;
    let dflt = Settings::default();
    let setting = |name: &str, value: f64, default: f64, src: &str| {
        Record::new().with("name", name).with("value", value).with("default", default).with("source", src)
    };
    let rows = vec![
        setting("root_tol", eff.root_tol, dflt.root_tol, sources.tol_root),
        setting("region_tol", eff.region_tol, dflt.region_tol, sources.tol_region),
        setting("tie_tol", eff.tie_tol, dflt.tie_tol, "default"),
        setting("degenerate_tol", eff.degenerate_tol, dflt.degenerate_tol, "default"),
        setting("crit_guard", eff.crit_guard, dflt.crit_guard, "default"),
        setting("surface_guard", eff.surface_guard, dflt.surface_guard, "default"),
        setting("chord_min_width", eff.chord_min_width, dflt.chord_min_width, "default"),
    ];
    let format = c.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Json => Record::new()
            .with("settings", Value::List(rows.into_iter().map(Value::Object).collect()))
            .with("env", Record::new().with("tol_root", ENV_TOL_ROOT).with("tol_region", ENV_TOL_REGION))
            .with(
                "oracle",
                Record::new()
                    .with("n_max_p2", n_max(2))
                    .with("n_max_p3", n_max(3))
                    .with("memory_budget_bytes", MEMORY_BUDGET_BYTES as i64)
                    .with("default_delta", "max(0.05, 2/n)"),
            )
            .with("grid", Record::new().with("resolution_default", 64u32).with("resolution_range", Value::List(vec![8i64.into(), 2048i64.into()])))
            .to_json()
            + "\n",
        Format::Csv => {
            let mut t = Table::new(&["name", "value", "default", "source"]);
            for r in rows {
                t.push(r.0.into_iter().map(|(_, v)| v).collect());
            }
            t.to_csv()
        }
    };
    Ok(Output::ok(text))
}

/// Where each tolerance came from: `flag`, `env` or `default`.
struct Sources {
    tol_root: &'static str,
    tol_region: &'static str,
}

impl Sources {
    fn from_matches(matches: &ArgMatches) -> Self {
        let sub = matches.subcommand().map_or(matches, |(_, m)| m);
        let name = |id: &str| match sub.value_source(id).or_else(|| matches.value_source(id)) {
            Some(ValueSource::CommandLine) => "flag",
            Some(ValueSource::EnvVariable) => "env",
            _ => "default",
        };
        Sources { tol_root: name("tol_root"), tol_region: name("tol_region") }
    }
}
