//! Command-line surface: streaming testers on files, fixture generation,
//! exact oracles on profile pairs, and Monte-Carlo experiment sweeps.
//!
//! Exit status: 0 = YES/CLOSE/true, 1 = NO/FAR/false, 2 = invalid input,
//! 3 = internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frecheck_core::generators::{
    double_jump_stream, geometric_profile, index_reduction_stream, stream_from_profile,
    uniform_profile, zipf_profile, StreamOrdering, StreamSpec,
};
use frecheck_core::io::{
    format_profile, format_stream, read_profile, read_stream, read_tuple_stream,
};
use frecheck_core::model::{
    find_coupling, find_separating_rectangle, frechet_close, frequency_of_stream,
    interval_partition, is_decreasing, is_half_stable, DecayParams, Element, FrequencyFunction,
    Tolerances,
};
use frecheck_core::rat::{format_rat, parse_rat};
use frecheck_core::sampling::{build_schedule, derive_seed, ScheduleConfig};
use frecheck_core::spacesaving::CounterTable;
use frecheck_core::tester::{
    test_marginals, test_reference, test_two_streams, Answer, TesterParams, Verdict,
};
use frecheck_core::Error;

#[derive(Parser)]
#[command(name = "frecheck", about = "Streaming frequency-profile closeness tester")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

/// Tolerances, decay, confidence, and sizing knobs shared by every mode.
/// Rationals accept decimal ("0.3") or fraction ("3/10") notation.
#[derive(Args)]
struct Params {
    #[arg(long, default_value = "0.3")]
    eps1: String,
    #[arg(long, default_value = "0.2")]
    eps2: String,
    #[arg(long, default_value = "0.1")]
    delta: String,
    #[arg(long, default_value = "2")]
    gamma1: String,
    #[arg(long, default_value = "3")]
    gamma2: String,
    /// Master seed; FRECHECK_SEED is the fallback, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Override for the repetition budget B.
    #[arg(long = "B")]
    b: Option<f64>,
    /// Multiplier on every table capacity.
    #[arg(long, default_value_t = 1.0)]
    k_mult: f64,
    /// Declared universe size (two-stream/marginal modes).
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Subcommand)]
enum Mode {
    /// Test a stream against a reference frequency function.
    TestRef {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Check the reference is half-stable and decaying before testing.
        #[arg(long)]
        preflight: bool,
        /// Print the level schedule before the verdict.
        #[arg(long)]
        explain: bool,
    },
    /// Test whether two streams have close profiles.
    TestTwo {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        stream2: PathBuf,
        /// Exchange the reference/query roles of the two streams.
        #[arg(long)]
        swap: bool,
        #[arg(long)]
        explain: bool,
    },
    /// Test whether two marginals of a tuple stream are close.
    TestMarginals {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        stream: PathBuf,
        /// Comma-separated coordinate list of the first projection, e.g. "0,2".
        #[arg(long)]
        proj1: String,
        #[arg(long)]
        proj2: String,
        #[arg(long)]
        explain: bool,
    },
    /// Generate streams or profiles: parametric families or named fixtures.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact oracles on profile files: decisions, certificates, predicates.
    Oracle {
        #[command(flatten)]
        params: Params,
        #[arg(value_enum)]
        op: OracleOp,
        /// First profile file (or stream file for the `table` op).
        f: PathBuf,
        /// Second profile file (frechet only).
        g: Option<PathBuf>,
        /// Table capacity (table op).
        #[arg(long)]
        capacity: Option<u64>,
    },
    /// Repeat a reference test over many seeds and emit a CSV summary.
    Experiment {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        reference: PathBuf,
        /// Fixed input stream; when absent each trial streams the reference
        /// profile in a trial-seeded shuffled order.
        #[arg(long)]
        stream: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Parametric profile family.
    #[arg(long, value_enum)]
    kind: Option<GenKind>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    total: Option<u64>,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = OrderingArg::Sorted)]
    ordering: OrderingArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Named fixture family (overrides --kind).
    #[arg(long, value_enum)]
    fixture: Option<Fixture>,
    /// Fixture input bit-string, e.g. "01100110".
    #[arg(long)]
    x: Option<String>,
    /// Fixture query index, 1-based.
    #[arg(long)]
    y: Option<usize>,
    /// What to write: the stream or its profile.
    #[arg(long, value_enum, default_value_t = Emit::Stream)]
    emit: Emit,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Zipf,
    Uniform,
    Geometric,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Sorted,
    RoundRobin,
    Shuffled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    Index,
    Doublejump,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Stream,
    Profile,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleOp {
    /// CLOSE/FAR decision with coupling or separating-rectangle certificate.
    Frechet,
    /// Half-stability at (eps1, eps2).
    Halfstable,
    /// (gamma1, gamma2)-decrease.
    Decreasing,
    /// Interval partition, or ABSENT.
    Partition,
    /// Echo the parsed profile in canonical form.
    Profile,
    /// Run a counter table of --capacity over a stream and serialize it.
    Table,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParam(msg.into())
}

fn tolerances(p: &Params) -> Result<Tolerances, Error> {
    Tolerances::new(parse_rat(&p.eps1)?, parse_rat(&p.eps2)?)
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("FRECHECK_SEED").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0)
}

fn tester_params(p: &Params) -> Result<TesterParams, Error> {
    Ok(TesterParams {
        tol: tolerances(p)?,
        delta: parse_rat(&p.delta)?,
        decay: DecayParams::new(parse_rat(&p.gamma1)?, parse_rat(&p.gamma2)?)?,
        schedule: ScheduleConfig {
            b_override: p.b,
            k_mult: p.k_mult,
            master_seed: resolve_seed(p.seed),
        },
        declared_n: p.n,
    })
}

fn parse_bits(s: &str) -> Result<Vec<bool>, Error> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(invalid(format!("bit-string may contain only 0/1, got '{other}'"))),
        })
        .collect()
}

fn parse_proj(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| invalid(format!("bad projection index '{t}'"))))
        .collect()
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_schedule(n: u64, tp: &TesterParams) -> Result<(), Error> {
    let s = build_schedule(n, &tp.tol, &tp.delta, &tp.decay, &tp.schedule)?;
    print!("{}", s.explain());
    Ok(())
}

fn finish_verdict(v: &Verdict) -> u8 {
    print!("{}", v.render());
    match v.answer {
        Answer::Yes => 0,
        Answer::No => 1,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.mode {
        Mode::TestRef { params, stream, reference, preflight, explain } => {
            let tp = tester_params(&params)?;
            let f = read_profile(&reference)?;
            if preflight {
                if !is_half_stable(&f, &tp.tol) {
                    return Err(invalid("reference is not half-stable at (eps1, eps2)"));
                }
                if !is_decreasing(&f, &tp.decay) {
                    return Err(invalid("reference is not (gamma1, gamma2)-decreasing"));
                }
            }
            if explain {
                print_schedule(f.len(), &tp)?;
            }
            let s = read_stream(&stream)?;
            Ok(finish_verdict(&test_reference(&s, &f, &tp)?))
        }
        Mode::TestTwo { params, stream, stream2, swap, explain } => {
            let tp = tester_params(&params)?;
            let (mut s1, mut s2) = (read_stream(&stream)?, read_stream(&stream2)?);
            if swap {
                std::mem::swap(&mut s1, &mut s2);
            }
            if explain {
                let n = tp.declared_n.unwrap_or(2);
                print_schedule(n, &tp)?;
            }
            Ok(finish_verdict(&test_two_streams(&s1, &s2, &tp)?))
        }
        Mode::TestMarginals { params, stream, proj1, proj2, explain } => {
            let tp = tester_params(&params)?;
            let tuples = read_tuple_stream(&stream)?;
            let (p1, p2) = (parse_proj(&proj1)?, parse_proj(&proj2)?);
            if explain {
                let n = tp.declared_n.unwrap_or(2);
                print_schedule(n, &tp)?;
            }
            Ok(finish_verdict(&test_marginals(&tuples, &p1, &p2, &tp)?))
        }
        Mode::Gen { gen, out } => {
            let stream: Vec<Element> = if let Some(fixture) = gen.fixture {
                let x = parse_bits(gen.x.as_deref().ok_or_else(|| invalid("--fixture needs --x"))?)?;
                let y = gen.y.ok_or_else(|| invalid("--fixture needs --y"))?;
                match fixture {
                    Fixture::Index => index_reduction_stream(&x, y)?,
                    Fixture::Doublejump => double_jump_stream(&x, y)?,
                }
            } else {
                let kind = gen.kind.ok_or_else(|| invalid("gen needs --kind or --fixture"))?;
                let n = gen.n.ok_or_else(|| invalid("gen needs --n"))?;
                let total = gen.total.ok_or_else(|| invalid("gen needs --total"))?;
                let profile = match kind {
                    GenKind::Zipf => zipf_profile(n, total, gen.alpha),
                    GenKind::Uniform => uniform_profile(n, total),
                    GenKind::Geometric => geometric_profile(n, total),
                };
                stream_from_profile(&StreamSpec {
                    profile,
                    ordering: match gen.ordering {
                        OrderingArg::Sorted => StreamOrdering::Sorted,
                        OrderingArg::RoundRobin => StreamOrdering::RoundRobin,
                        OrderingArg::Shuffled => StreamOrdering::Shuffled,
                    },
                    seed: resolve_seed(gen.seed),
                })
            };
            let text = match gen.emit {
                Emit::Stream => format_stream(&stream),
                Emit::Profile => format_profile(&frequency_of_stream(&stream)),
            };
            write_out(&out, &text)?;
            Ok(0)
        }
        Mode::Oracle { params, op, f, g, capacity } => oracle(&params, op, &f, g.as_deref(), capacity),
        Mode::Experiment { params, reference, stream, trials, out } => {
            if trials == 0 {
                return Err(invalid("--trials must be positive"));
            }
            let mut tp = tester_params(&params)?;
            let master = tp.schedule.master_seed;
            let f = read_profile(&reference)?;
            let fixed = stream.map(|p| read_stream(&p)).transpose()?;
            let mut csv = String::from("trial,seed,answer,failing_level\n");
            let mut yes = 0u64;
            for t in 0..trials {
                let seed = derive_seed(master, t);
                tp.schedule.master_seed = seed;
                let s = match &fixed {
                    Some(s) => s.clone(),
                    None => stream_from_profile(&StreamSpec {
                        profile: f.clone(),
                        ordering: StreamOrdering::Shuffled,
                        seed,
                    }),
                };
                let v = test_reference(&s, &f, &tp)?;
                let (ans, fl) = match v.answer {
                    Answer::Yes => {
                        yes += 1;
                        ("YES", String::from(""))
                    }
                    Answer::No => ("NO", v.failing_level.map_or(String::new(), |i| i.to_string())),
                };
                csv.push_str(&format!("{t},{seed},{ans},{fl}\n"));
            }
            csv.push_str(&format!("aggregate,,{yes}/{trials},\n"));
            write_out(&out, &csv)?;
            Ok(0)
        }
    }
}

fn oracle(
    params: &Params,
    op: OracleOp,
    f_path: &std::path::Path,
    g_path: Option<&std::path::Path>,
    capacity: Option<u64>,
) -> Result<u8, Error> {
    let tol = tolerances(params)?;
    let load = |p: &std::path::Path| -> Result<FrequencyFunction, Error> { read_profile(p) };
    match op {
        OracleOp::Frechet => {
            let f = load(f_path)?;
            let g = load(g_path.ok_or_else(|| invalid("frechet needs two profiles"))?)?;
            if frechet_close(&f, &g, &tol) {
                println!("verdict=CLOSE");
                if let Some(c) = find_coupling(&f, &g, &tol) {
                    for (a, b) in &c.pairs {
                        println!("coupling={a} {b}");
                    }
                }
                Ok(0)
            } else {
                println!("verdict=FAR");
                if let Some(r) = find_separating_rectangle(&f, &g, &tol) {
                    let (l, h) = r.span_ranks();
                    println!(
                        "rectangle=x:{} y:{} eps1:{} eps2:{} span:{l}..{h}",
                        format_rat(&r.x),
                        format_rat(&r.y),
                        format_rat(&r.eps1),
                        format_rat(&r.eps2)
                    );
                }
                Ok(1)
            }
        }
        OracleOp::Halfstable => {
            let ok = is_half_stable(&load(f_path)?, &tol);
            println!("halfstable={ok}");
            Ok(if ok { 0 } else { 1 })
        }
        OracleOp::Decreasing => {
            let decay = DecayParams::new(parse_rat(&params.gamma1)?, parse_rat(&params.gamma2)?)?;
            let ok = is_decreasing(&load(f_path)?, &decay);
            println!("decreasing={ok}");
            Ok(if ok { 0 } else { 1 })
        }
        OracleOp::Partition => match interval_partition(&load(f_path)?, &tol) {
            Some(p) => {
                for (l, r) in &p.intervals {
                    println!("interval={l} {r}");
                }
                Ok(0)
            }
            None => {
                println!("partition=ABSENT");
                Ok(1)
            }
        },
        OracleOp::Profile => {
            print!("{}", format_profile(&load(f_path)?));
            Ok(0)
        }
        OracleOp::Table => {
            let cap = capacity.ok_or_else(|| invalid("table needs --capacity"))?;
            let stream = read_stream(f_path)?;
            let mut t = CounterTable::new(cap as usize)?;
            for &e in &stream {
                t.insert(e);
            }
            print!("{}", t.serialize());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e @ Error::Invariant(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
