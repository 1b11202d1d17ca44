//! The `mdpconv` command line.
//!
//! Exit codes: 0 success (or MDP), 1 verified not MDP, 2 usage or parse
//! error, 3 capacity exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{bound_report, column_bound, BoundReport};
use crate::codes::{construct, default_q, ConstructOptions, ConvCode};
use crate::encoder::{
    asymptotic_note, count_report, count_report_for, encode, EncodeMode, MessageStream, OpCountReport,
};
use crate::error::{Error, Result};
use crate::experiment::{run_search, ExperimentConfig, ExperimentReport};
use crate::format::{blocks_from_str, blocks_to_string, code_to_string, read_code, write_code, BlockKind};
use crate::gf::{Level, Poly};
use crate::mdp::{column_distance_bruteforce, free_distance_check, is_mdp, nontrivial_count, MdpOptions, MdpVerdict};

/// Default determinant budget for `verify` and `search`, and message-space
/// budget for `distance`.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    /// Pretty-printed JSON.
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dense,
    Structured,
}

impl From<ModeArg> for EncodeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dense => EncodeMode::Dense,
            ModeArg::Structured => EncodeMode::Structured,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mdpconv",
    version,
    about = "Construct and verify unit-memory MDP convolutional codes"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Work limit: determinants for verify/search, messages for distance.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code of the (n, k, n - k) family and write its code file.
    Construct {
        n: usize,
        k: usize,
        /// Base field order (prime power, at least n + k).
        #[arg(long)]
        q: Option<u64>,
        /// Extension degree.
        #[arg(long)]
        d: Option<usize>,
        /// Monic modulus of the extension, comma-separated packed F_q
        /// coefficients, constant term first.
        #[arg(long, value_delimiter = ',')]
        f: Option<Vec<u16>>,
        /// Code file to write; the document goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every nontrivial minor of the sliding generator matrix.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Window to check; defaults to L.
        #[arg(long)]
        j: Option<usize>,
        /// Check all windows 0..=j.
        #[arg(long)]
        all_j: bool,
        /// Count every vanishing minor instead of stopping at the first.
        #[arg(long)]
        full_scan: bool,
    },
    /// Random search over extension moduli: the proportion of MDP codes.
    Search {
        n: usize,
        k: usize,
        /// Extension degree; defaults to n - k.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Distance bounds and degree bounds of the minor product.
    Bounds { n: usize, k: usize, delta: usize },
    /// Column distance (or free distance with --free) by enumeration.
    Distance {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, required_unless_present = "free")]
        j: Option<usize>,
        /// Free distance over messages of degree at most --degree-cap.
        #[arg(long, conflicts_with = "j")]
        free: bool,
        #[arg(long, default_value_t = 1)]
        degree_cap: usize,
    },
    /// Encode a message block file.
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Structured)]
        mode: ModeArg,
        /// Codeword file to write; the document goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also report multiplication counts of both encoders.
        #[arg(long)]
        counts: bool,
        /// Report F_q units too: one F_(q^d) product counts as d * c_q F_q products.
        #[arg(long)]
        c_q: Option<f64>,
    },
    /// Multiplication counts on a random message plus the asymptotic note.
    Complexity {
        /// Code file; otherwise n and k build the default member.
        #[arg(long = "in", conflicts_with_all = ["n", "k"])]
        input: Option<PathBuf>,
        #[arg(required_unless_present = "input")]
        n: Option<usize>,
        #[arg(required_unless_present = "input")]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Interior steps T.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Report F_q units too: one F_(q^d) product counts as d * c_q F_q products.
        #[arg(long)]
        c_q: Option<f64>,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = if cli.threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut buf)),
            Err(e) => Err(Error::Usage(format!("thread pool: {e}"))),
        }
    } else {
        dispatch(&cli, &mut buf)
    };
    let result = result.and_then(|code| {
        out.write_all(&buf)?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, out: &mut dyn Write, report: &T, text: impl FnOnce(&T) -> String) -> Result<()> {
    match cli.format {
        OutputFormat::Text => write!(out, "{}", text(report))?,
        OutputFormat::Structured => {
            let json = serde_json::to_string_pretty(report).map_err(|e| Error::Usage(e.to_string()))?;
            writeln!(out, "{json}")?;
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Construct {
            n,
            k,
            q,
            d,
            f,
            out: path,
        } => {
            let opts = ConstructOptions {
                q: *q,
                d: *d,
                f: f.clone().map(Poly::new),
                seed: cli.seed,
                ..Default::default()
            };
            if let Some(f) = f {
                let q = q.unwrap_or_else(|| default_q(*n, *k));
                if let Some(&c) = f.iter().find(|&&c| u64::from(c) >= q) {
                    return Err(Error::Parse(format!("coefficient {c} of f is not in F_{q}")));
                }
            }
            let code = construct(*n, *k, &opts)?;
            cmd_construct(cli, out, &code, path.as_deref())
        }
        Command::Verify {
            input,
            j,
            all_j,
            full_scan,
        } => {
            let code = read_code(input)?;
            let opts = MdpOptions {
                j_max: *j,
                all_j: *all_j,
                full_scan: *full_scan,
            };
            cmd_verify(cli, out, &code, &opts)
        }
        Command::Search { n, k, d, samples, q } => {
            let cfg = ExperimentConfig {
                d: *d,
                q_override: *q,
                parallelism: cli.threads,
                ..ExperimentConfig::new(*n, *k, *samples, cli.seed)
            };
            let report = run_search(&cfg, cli.budget.unwrap_or(DEFAULT_BUDGET))?;
            emit(cli, out, &report, search_text)?;
            Ok(0)
        }
        Command::Bounds { n, k, delta } => {
            emit(cli, out, &bound_report(*n, *k, *delta)?, bounds_text)?;
            Ok(0)
        }
        Command::Distance {
            input,
            j,
            free,
            degree_cap,
        } => {
            let code = read_code(input)?;
            cmd_distance(cli, out, &code, *j, free.then_some(*degree_cap))
        }
        Command::Encode {
            input,
            msg,
            mode,
            out: path,
            counts,
            c_q,
        } => {
            let code = read_code(input)?;
            cmd_encode(cli, out, &code, msg, (*mode).into(), path.as_deref(), *counts, *c_q)
        }
        Command::Complexity {
            input,
            n,
            k,
            d,
            steps,
            c_q,
        } => {
            let code = match (input, n, k) {
                (Some(path), _, _) => read_code(path)?,
                (None, Some(n), Some(k)) => construct(
                    *n,
                    *k,
                    &ConstructOptions {
                        d: *d,
                        seed: cli.seed,
                        ..Default::default()
                    },
                )?,
                _ => return Err(Error::Usage("give --in FILE or n and k".into())),
            };
            let report = ComplexityReport {
                counts: count_report(&code, *steps, cli.seed, *c_q)?,
                note: asymptotic_note(code.n(), code.k(), code.tower().d()),
            };
            emit(cli, out, &report, |r| format!("{}{}", counts_text(&r.counts), r.note))?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct ConstructSummary {
    n: usize,
    k: usize,
    delta: usize,
    p: u16,
    m: usize,
    q: u64,
    d: usize,
    #[serde(rename = "L")]
    l: usize,
    base_field_order: u128,
    field_order: u128,
    /// Modulus of `F_{q^d}`, packed `F_q` coefficients.
    f: Option<Vec<u16>>,
    out: Option<PathBuf>,
}

fn cmd_construct(cli: &Cli, out: &mut dyn Write, code: &ConvCode, path: Option<&Path>) -> Result<i32> {
    let t = code.tower();
    let summary = ConstructSummary {
        n: code.n(),
        k: code.k(),
        delta: code.delta(),
        p: t.p(),
        m: t.m(),
        q: t.q() as u64,
        d: t.d(),
        l: code.window(),
        base_field_order: t.order(Level::Base),
        field_order: t.order(Level::Ext),
        f: t.f().map(|f| f.coeffs().to_vec()),
        out: path.map(Path::to_path_buf),
    };
    match path {
        Some(path) => {
            write_code(path, code)?;
            emit(cli, out, &summary, |s| {
                format!(
                    "wrote {}\n(n, k, delta) = ({}, {}, {})\nq = {} = {}^{}, d = {}, L = {}\n|F_q| = {}, |F_q^d| = {}\n",
                    path.display(),
                    s.n,
                    s.k,
                    s.delta,
                    s.q,
                    s.p,
                    s.m,
                    s.d,
                    s.l,
                    s.base_field_order,
                    s.field_order
                )
            })?;
        }
        None => write!(out, "{}", code_to_string(code))?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    k: usize,
    delta: usize,
    q: u64,
    d: usize,
    #[serde(flatten)]
    verdict: MdpVerdict,
    elapsed_secs: f64,
}

fn cmd_verify(cli: &Cli, out: &mut dyn Write, code: &ConvCode, opts: &MdpOptions) -> Result<i32> {
    let j_max = opts.j_max.unwrap_or_else(|| code.window());
    let windows: Vec<usize> = if opts.all_j { (0..=j_max).collect() } else { vec![j_max] };
    let cost: u128 = windows.iter().map(|&j| nontrivial_count(code.n(), code.k(), j)).sum();
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    if cost > budget {
        return Err(Error::Capacity(format!(
            "verification needs {cost} determinants, budget is {budget}"
        )));
    }
    let start = Instant::now();
    let verdict = is_mdp(code, opts);
    let t = code.tower();
    let report = VerifyReport {
        n: code.n(),
        k: code.k(),
        delta: code.delta(),
        q: t.q() as u64,
        d: t.d(),
        elapsed_secs: start.elapsed().as_secs_f64(),
        verdict,
    };
    emit(cli, out, &report, verify_text)?;
    Ok(if report.verdict.is_mdp { 0 } else { 1 })
}

fn verify_text(r: &VerifyReport) -> String {
    let v = &r.verdict;
    let mut s = format!(
        "(n, k, delta) = ({}, {}, {}) over F_{}^{}\nMDP: {}\n",
        r.n,
        r.k,
        r.delta,
        r.q,
        r.d,
        if v.is_mdp { "yes" } else { "no" }
    );
    for w in &v.windows {
        s += &format!(
            "window j = {}: {} minors checked, {} zero\n",
            w.j, w.minors_checked, w.zero_minors
        );
    }
    s += &format!("minors checked: {}\n", v.minors_checked);
    if let Some(w) = &v.witness {
        s += &format!("witness: j = {}, columns {:?}\n", w.j, w.indices);
    }
    if let Some(warn) = &v.degree_warning {
        s += &format!("warning: {warn}\n");
    }
    s + &format!("time: {:.3}s\n", r.elapsed_secs)
}

fn search_text(r: &ExperimentReport) -> String {
    let c = &r.config;
    let mut s = format!(
        "(n, k, delta) = ({}, {}, {}), q = {}, d = {}, samples = {}, seed = {}\n",
        c.n,
        c.k,
        c.n - c.k,
        r.q,
        r.d,
        c.samples,
        c.seed
    );
    for rec in r.records.iter().filter(|rec| !rec.is_mdp) {
        let w = rec
            .witness
            .as_ref()
            .map(|w| format!("{:?}", w.indices))
            .unwrap_or_default();
        s += &format!("sample {}: not MDP, f = {:?}, witness {}\n", rec.index, rec.f, w);
    }
    s + &format!(
        "proportion MDP: {}/{} = {}\ntime: {:.3}s\n",
        r.proportion.numerator, r.proportion.denominator, r.proportion_decimal, r.wall_time_secs
    )
}

fn bounds_text(b: &BoundReport) -> String {
    format!(
        "(n, k, delta) = ({}, {}, {})\nL = {}\nsingleton = {}\ncolumn bounds = {:?}\nd = {}\nd' = {}\nq_threshold = {}\n",
        b.n, b.k, b.delta, b.l, b.singleton, b.column_bounds, b.d_total, b.d_individual, b.q_threshold
    )
}

#[derive(Serialize)]
struct DistanceReport {
    /// Window for column distance, `None` for the free distance check.
    j: Option<usize>,
    degree_cap: Option<usize>,
    distance: usize,
    bound: usize,
}

fn cmd_distance(
    cli: &Cli,
    out: &mut dyn Write,
    code: &ConvCode,
    j: Option<usize>,
    degree_cap: Option<usize>,
) -> Result<i32> {
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let (n, k) = (code.n(), code.k());
    let report = match degree_cap {
        Some(cap) => DistanceReport {
            j: None,
            degree_cap: Some(cap),
            distance: free_distance_check(code, cap, budget)?,
            bound: 2 * (n - k) + 1,
        },
        None => {
            let j = j.ok_or_else(|| Error::Usage("--j is required".into()))?;
            DistanceReport {
                j: Some(j),
                degree_cap: None,
                distance: column_distance_bruteforce(code, j, budget)?,
                bound: column_bound(n, k, j),
            }
        }
    };
    emit(cli, out, &report, |r| format!("{}\n", r.distance))?;
    Ok(0)
}

#[derive(Serialize)]
struct ComplexityReport {
    counts: OpCountReport,
    note: String,
}

fn counts_text(r: &OpCountReport) -> String {
    let mut s = format!(
        "(n, k, d) = ({}, {}, {}), T = {}, nonzeros in G1 = {}\nstep  structured(G0+G1)  dense(G0+G1)\n",
        r.n, r.k, r.d, r.steps, r.g1_nonzeros
    );
    for (i, (a, b)) in r.per_step.iter().zip(&r.baseline_per_step).enumerate() {
        s += &format!(
            "{i:>4}  {:>6} + {:<6}     {:>6} + {:<6}\n",
            a.g0_mults, a.g1_mults, b.g0_mults, b.g1_mults
        );
    }
    s += &format!(
        "total {} structured, {} dense; outputs identical: {}\n",
        r.totals.total(),
        r.baseline_totals.total(),
        r.outputs_identical
    );
    if let (Some(a), Some(b)) = (r.base_field_units, r.baseline_base_field_units) {
        s += &format!("in F_q multiplications: {a} structured, {b} dense\n");
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_encode(
    cli: &Cli,
    out: &mut dyn Write,
    code: &ConvCode,
    msg_path: &Path,
    mode: EncodeMode,
    path: Option<&Path>,
    counts: bool,
    c_q: Option<f64>,
) -> Result<i32> {
    let t = code.tower();
    let (kind, blocks) = blocks_from_str(t, &std::fs::read_to_string(msg_path)?)?;
    if kind != BlockKind::Message {
        return Err(Error::Parse(format!("{} is not a message file", msg_path.display())));
    }
    let msg = MessageStream { blocks };
    let codeword = encode(code, &msg, mode)?;
    let text = blocks_to_string(t, BlockKind::Codeword, code.n(), &codeword.blocks);
    match path {
        Some(path) => std::fs::write(path, &text)?,
        None => write!(out, "{text}")?,
    }
    if counts {
        emit(cli, out, &count_report_for(code, &msg, c_q)?, counts_text)?;
    }
    Ok(0)
}
