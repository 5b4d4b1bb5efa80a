//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on bad input or usage, 2 when `verify` finds
//! a residual above tolerance.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::defaults;
use crate::dist::{Axis, Channel, JointSource};
use crate::error::{Error, Result};
use crate::identity::{eve_identity_residual, identity_residual, random_multiletter, LetterSizes};
use crate::info::{cond_entropy, entropy, mutual_info};
use crate::io::{emit_csv, load_channel, load_source, write_json, Table};
use crate::region::{region_frontier, sw_equivocation, Mode, SolverOptions};
use crate::search::{random_restart_u, RestartOptions};
use crate::sim::{run_with_scheme, Scheme, SimConfig, Symbol};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "equivocation", version, about = "Rate-equivocation regions, identity checks and binning simulation")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "EQUIVOCATION_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropies and the Slepian-Wolf equivocation of a source.
    Info(InfoArgs),
    /// Equivocation bound over a grid of rate budgets.
    Region(RegionArgs),
    /// Brute-force check of the multi-letter identities on random joints.
    Verify(VerifyArgs),
    /// Monte Carlo run of the binning scheme.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub source: PathBuf,
    /// coded, coded-public, coded-eve, uncoded-eve or slepian-wolf.
    #[arg(long, default_value = "coded")]
    pub mode: Mode,
    /// Rate budgets for Alice: `a:b:k` (k points from a to b) or `v1,v2,...`.
    /// Default: 5 points from H(Y|Z) to H(Y).
    #[arg(long)]
    pub ra: Option<String>,
    /// Rate budgets for Charlie, same syntax. Default: 5 points from 0 to
    /// H(Z), or H(Z) alone for the uncoded modes.
    #[arg(long)]
    pub rc: Option<String>,
    #[arg(long)]
    pub grid_resolution: Option<usize>,
    #[arg(long, default_value_t = defaults::COLUMN_ROUNDS)]
    pub column_rounds: usize,
    /// Also run the hill-climbing optimizer with this many restarts and
    /// report its `U` value on stderr.
    #[arg(long)]
    pub cross_check: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file receiving the witness channels of every point.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Blocklengths.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub n: Vec<usize>,
    /// Message alphabet sizes.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub j_sizes: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub x_size: usize,
    #[arg(long, default_value_t = 2)]
    pub y_size: usize,
    /// 1 checks the eavesdropper-free identity as well.
    #[arg(long, default_value_t = 2)]
    pub e_size: usize,
    /// Random joints per (n, |J|) pair.
    #[arg(long, default_value_t = 50)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = defaults::IDENTITY_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub source: PathBuf,
    /// JSON channel `P(u|y)`; omitted means constant `U` (Slepian-Wolf).
    #[arg(long)]
    pub u_channel: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "6")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [defaults::EPS])]
    pub eps: Vec<f64>,
    /// Default: 0.1 for n <= 8, 0.05 above.
    #[arg(long)]
    pub delta_typ: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of consecutive seeds starting at `--seed`.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub exact_equivocation: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file receiving every realized codebook and codeword bin map.
    #[arg(long)]
    pub codebook_out: Option<PathBuf>,
}

/// Parses `a:b:k` or a comma list.
pub fn parse_budgets(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Invalid(format!("budget list `{text}`: expected `a:b:k` or `v1,v2,...`"));
    let values: Vec<f64> = if let Some((a, rest)) = text.split_once(':') {
        let (b, k) = rest.split_once(':').ok_or_else(bad)?;
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        match k {
            0 => return Err(bad()),
            1 => vec![a],
            _ => spread(a, b, k),
        }
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Invalid(format!("budget list `{text}`: budgets must be finite and >= 0")));
    }
    Ok(values)
}

fn spread(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect()
}

fn info(args: &InfoArgs) -> Result<i32> {
    use Axis::*;
    let src = load_source(&args.source)?;
    let sw = sw_equivocation(&src)?;
    let mut t = Table::new(&["quantity", "bits"]);
    let rows: Vec<(&str, f64)> = vec![
        ("H(X)", entropy(&src, &[X])?),
        ("H(Y)", entropy(&src, &[Y])?),
        ("H(Z)", entropy(&src, &[Z])?),
        ("H(E)", entropy(&src, &[E])?),
        ("H(X|E)", cond_entropy(&src, &[X], &[E])?),
        ("H(X|Y,E)", cond_entropy(&src, &[X], &[Y, E])?),
        ("H(Y|Z)", cond_entropy(&src, &[Y], &[Z])?),
        ("I(Y;Z)", mutual_info(&src, &[Y], &[Z])?),
        ("I(X,Y;Z)", mutual_info(&src, &[X, Y], &[Z])?),
        ("slepian_wolf_raw", sw.raw),
        ("slepian_wolf_clamped", sw.clamped),
    ];
    for (k, v) in rows {
        t.push(vec![k.into(), v.into()])?;
    }
    emit_csv(&t, args.out.as_deref())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct WitnessRecord<'a> {
    mode: Mode,
    r_a: f64,
    r_c: f64,
    delta_raw: Option<f64>,
    delta: Option<f64>,
    v_part: Option<f64>,
    u_part: Option<f64>,
    h_y_given_v: Option<f64>,
    u_channel: Option<&'a Channel>,
    v_channel: Option<&'a Channel>,
    infeasible: Option<&'a str>,
}

/// Budget pairs in the order `(r_a, r_c)`, sorted.
pub fn budget_grid(src: &JointSource, mode: Mode, ra: Option<&str>, rc: Option<&str>) -> Result<Vec<(f64, f64)>> {
    use Axis::*;
    let h_y = entropy(src, &[Y])?;
    let h_z = entropy(src, &[Z])?;
    let h_y_z = cond_entropy(src, &[Y], &[Z])?;
    let ras = match ra {
        Some(s) => parse_budgets(s)?,
        None => spread(h_y_z, h_y.max(h_y_z), 5),
    };
    let rcs = match rc {
        Some(s) => parse_budgets(s)?,
        None if mode.has_v_part() => spread(0.0, h_z, 5),
        None => vec![h_z],
    };
    let mut grid: Vec<(f64, f64)> = ras.iter().flat_map(|&a| rcs.iter().map(move |&c| (a, c))).collect();
    grid.sort_by(|p, q| p.partial_cmp(q).expect("finite budgets"));
    grid.dedup();
    Ok(grid)
}

fn region(args: &RegionArgs) -> Result<i32> {
    let src = load_source(&args.source)?;
    let budgets = budget_grid(&src, args.mode, args.ra.as_deref(), args.rc.as_deref())?;
    let opts = SolverOptions { grid_resolution: args.grid_resolution, column_rounds: args.column_rounds };
    let points = region_frontier(&src, args.mode, &budgets, opts)?;
    let mut t = Table::new(&["mode", "r_a", "r_c", "delta_raw", "delta_clamped"]);
    for p in &points {
        t.push(vec![p.mode.tag().into(), p.r_a.into(), p.r_c.into(), p.delta_raw().into(), p.delta().into()])?;
    }
    emit_csv(&t, args.out.as_deref())?;
    if let Some(path) = &args.witness_out {
        let records: Vec<WitnessRecord> = points
            .iter()
            .map(|p| {
                let b = p.bound();
                WitnessRecord {
                    mode: p.mode,
                    r_a: p.r_a,
                    r_c: p.r_c,
                    delta_raw: p.delta_raw(),
                    delta: p.delta(),
                    v_part: b.and_then(|b| b.v_part),
                    u_part: b.and_then(|b| b.u_part),
                    h_y_given_v: b.and_then(|b| b.h_y_given_v),
                    u_channel: b.and_then(|b| b.u_channel.as_ref()),
                    v_channel: b.and_then(|b| b.v_channel.as_ref()),
                    infeasible: match &p.outcome {
                        crate::region::Outcome::Infeasible(why) => Some(why),
                        _ => None,
                    },
                }
            })
            .collect();
        write_json(&records, path)?;
    }
    if let Some(restarts) = args.cross_check {
        if args.mode == Mode::SlepianWolf {
            return Err(Error::Invalid("the Slepian-Wolf baseline has no U part to cross-check".into()));
        }
        let lp = crate::region::optimize_u(&src, args.mode, opts)?;
        let rr = random_restart_u(&src, args.mode, RestartOptions { restarts, seed: args.seed, ..Default::default() })?;
        eprintln!(
            "U part: envelope LP {:.9}, hill climbing {:.9}, difference {:.3e}",
            lp.value,
            rr.value,
            (lp.value - rr.value).abs()
        );
    }
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    if !(args.tolerance >= 0.0) {
        return Err(Error::Invalid("tolerance must be >= 0".into()));
    }
    let mut jobs = Vec::new();
    for &n in &args.n {
        for &j in &args.j_sizes {
            for k in 0..args.seeds {
                jobs.push((n, j, args.seed + k));
            }
        }
    }
    let rows: Vec<(usize, usize, u64, f64, f64)> = jobs
        .par_iter()
        .map(|&(n, j, seed)| {
            let sizes = LetterSizes { j, x: args.x_size, y: args.y_size, e: args.e_size };
            let m = random_multiletter(n, sizes, seed)?;
            let with_eve = eve_identity_residual(&m)?;
            let eve_free = if args.e_size == 1 { identity_residual(&m)? } else { f64::NAN };
            Ok((n, j, seed, with_eve, eve_free))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["seed", "n", "j_size", "e_size", "residual", "eve_free_residual"]);
    let mut worst = 0.0f64;
    for &(n, j, seed, r, r0) in &rows {
        worst = worst.max(r);
        if !r0.is_nan() {
            worst = worst.max(r0);
        }
        t.push(vec![seed.into(), n.into(), j.into(), args.e_size.into(), r.into(), r0.into()])?;
    }
    emit_csv(&t, args.out.as_deref())?;
    eprintln!("{} joints checked, largest residual {worst:.3e} (tolerance {:e})", rows.len(), args.tolerance);
    Ok(if worst > args.tolerance { EXIT_TOLERANCE } else { EXIT_OK })
}

#[derive(Serialize)]
struct CodebookRecord {
    seed: u64,
    n: usize,
    eps: f64,
    words: Vec<Vec<Symbol>>,
    word_bins: Vec<u64>,
}

fn simulate(args: &SimulateArgs) -> Result<i32> {
    let source = load_source(&args.source)?;
    let u_channel = match &args.u_channel {
        Some(p) => load_channel(p)?,
        None => Channel::constant(vec![source.alphabet(Axis::Y)?], Axis::U),
    };
    let mut t = Table::new(&[
        "seed",
        "n",
        "eps",
        "delta_typ",
        "trials",
        "codebook_size",
        "word_bin_bits",
        "sequence_bin_bits",
        "error_rate",
        "encode_failure_rate",
        "no_codeword",
        "ambiguous_codeword",
        "no_sequence",
        "ambiguous_sequence",
        "equivocation",
    ]);
    let mut books = Vec::new();
    for &n in &args.n {
        for &eps in &args.eps {
            for seed in args.seed..args.seed + args.seeds {
                let cfg = SimConfig {
                    source: source.clone(),
                    u_channel: u_channel.clone(),
                    n,
                    eps,
                    delta_typ: args.delta_typ.unwrap_or_else(|| defaults::delta_typ(n)),
                    seed,
                    trials: args.trials,
                };
                let scheme = Scheme::new(&cfg)?;
                let r = run_with_scheme(&cfg, &scheme, args.exact_equivocation)?;
                let f = r.decode_failures;
                t.push(vec![
                    r.seed.into(),
                    r.n.into(),
                    r.eps.into(),
                    r.delta_typ.into(),
                    r.trials.into(),
                    r.codebook_size.into(),
                    r.rates.word_bin_bits.into(),
                    r.rates.sequence_bin_bits.into(),
                    r.error_rate.into(),
                    r.encode_failure_rate.into(),
                    f.no_codeword.into(),
                    f.ambiguous_codeword.into(),
                    f.no_sequence.into(),
                    f.ambiguous_sequence.into(),
                    r.equivocation.into(),
                ])?;
                if args.codebook_out.is_some() {
                    books.push(CodebookRecord {
                        seed,
                        n,
                        eps,
                        words: scheme.codebook.words().map(<[Symbol]>::to_vec).collect(),
                        word_bins: scheme.bins.word_bins().to_vec(),
                    });
                }
            }
        }
    }
    emit_csv(&t, args.out.as_deref())?;
    if let Some(path) = &args.codebook_out {
        write_json(&books, path)?;
    }
    Ok(EXIT_OK)
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Info(a) => info(a),
        Command::Region(a) => region(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_INVALID;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
