//! Batch driver: census counts, Σ tables, the leading constant, single-quadric
//! checks, bilinear sums and the character-sum identity suite.
//!
//! Exit codes: 0 ok, 1 I/O, 2 bad input, 3 identity or consistency failure,
//! 4 resource ceiling.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quadfib::arith::SpfSieve;
use quadfib::charsum::{
    admissible_box, bilinear_hyperbolic_sum, direct_indicator, indicator_via_charsum, sigma_table,
    CoeffMode, BILINEAR_CEILING,
};
use quadfib::constant::{leading_constant_with, main_term, ProductMethod};
use quadfib::counting::{CountConfig, CountVariant, Counter, DEFAULT_CEILING};
use quadfib::solubility::{is_everywhere_locally_soluble, mod8_set_a1, mod8_set_a2, place_table, DiagonalQuadric};
use quadfib::Error;

#[derive(Parser)]
#[command(name = "quadfib", version, about = "Locally soluble diagonal quadrics over y0*y1 = y2*y3")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Plain,
    Accelerated,
}

#[derive(Subcommand)]
enum Command {
    /// N, N1, N2 and the raw count for each B.
    Count {
        #[arg(long, conflicts_with = "b_list")]
        b: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        b_list: Vec<u64>,
        /// Only N, with the ratio N·log B/(B² log log B).
        #[arg(long)]
        diagnostic: bool,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u64,
    },
    /// Σ_{r,i} by direct summation against the closed forms.
    Sigma {
        /// Values taken by each m_ij.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,5")]
        m_values: Vec<u64>,
    },
    /// The leading constant and the four 𝔠_{r,i}.
    Constant {
        #[arg(long, default_value_t = 100_000)]
        prime_limit: u64,
        #[arg(long, value_enum, default_value_t = Method::Accelerated)]
        method: Method,
        /// Also report the main term c·B² log log B / log B at this B.
        #[arg(long)]
        b: Option<f64>,
    },
    /// Place-by-place verdicts for one quadric a0,a1,a2,a3.
    Check {
        #[arg(allow_hyphen_values = true, value_delimiter = ',', num_args = 1)]
        coeffs: Vec<i64>,
    },
    /// Hyperbolic bilinear Jacobi sums.
    Bilinear {
        #[arg(long, default_value_t = 10_000)]
        x: u64,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        z_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "ones,mobius,random")]
        modes: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = BILINEAR_CEILING)]
        ceiling: u64,
    },
    /// Character-sum indicator against the Hasse test over a box of inputs.
    Identity {
        /// s_max,m_max
        #[arg(long = "box", value_delimiter = ',', num_args = 1, default_value = "15,6")]
        bounds: Vec<u64>,
    },
}

enum Fail {
    Io(io::Error),
    Input(String),
    Identity(String),
    Ceiling(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Io(_) => 1,
            Fail::Input(_) => 2,
            Fail::Identity(_) => 3,
            Fail::Ceiling(_) => 4,
        }
    }
}

impl std::fmt::Display for Fail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fail::Io(e) => write!(f, "I/O error: {e}"),
            Fail::Input(m) => write!(f, "invalid input: {m}"),
            Fail::Identity(m) => write!(f, "consistency failure: {m}"),
            Fail::Ceiling(m) => write!(f, "resource ceiling: {m}"),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::Io(e)
    }
}

impl From<csv::Error> for Fail {
    fn from(e: csv::Error) -> Self {
        Fail::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Io(io::Error::other(e))
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::CeilingExceeded { .. } | Error::OutOfRange { .. } | Error::DepthTooLarge { .. } => {
                Fail::Ceiling(e.to_string())
            }
            Error::Inconsistent(_) | Error::NonIntegral(_) => Fail::Identity(e.to_string()),
            _ => Fail::Input(e.to_string()),
        }
    }
}

type Res = Result<(), Fail>;

struct Output {
    format: Format,
    sink: Box<dyn Write>,
}

impl Output {
    fn open(common: &Common) -> Result<Self, Fail> {
        let sink: Box<dyn Write> = match &common.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Output {
            format: common.format,
            sink,
        })
    }

    /// Rows as CSV with a header, or as one JSON object per line.
    fn rows<T: Serialize>(&mut self, rows: &[T]) -> Res {
        match self.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut self.sink);
                for r in rows {
                    w.serialize(r)?;
                }
                w.flush()?;
            }
            Format::Json => {
                for r in rows {
                    serde_json::to_writer(&mut self.sink, r)?;
                    writeln!(self.sink)?;
                }
            }
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Res {
    if let Some(w) = cli.common.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build_global()
            .map_err(|e| Fail::Input(e.to_string()))?;
    }
    let mut out = Output::open(&cli.common)?;
    let res = match cli.command {
        Command::Count {
            b,
            b_list,
            diagnostic,
            ceiling,
        } => {
            let bs: Vec<u64> = b.into_iter().chain(b_list).collect();
            cmd_count(&mut out, &bs, diagnostic, ceiling)
        }
        Command::Sigma { m_values } => cmd_sigma(&mut out, &m_values),
        Command::Constant { prime_limit, method, b } => cmd_constant(&mut out, prime_limit, method, b),
        Command::Check { coeffs } => cmd_check(&mut out, &coeffs),
        Command::Bilinear {
            x,
            z_list,
            modes,
            seed,
            ceiling,
        } => cmd_bilinear(&mut out, x, &z_list, &modes, seed, ceiling),
        Command::Identity { bounds } => cmd_identity(&mut out, &bounds),
    };
    out.sink.flush()?;
    res
}

#[derive(Serialize)]
struct DiagnosticRow {
    #[serde(rename = "B")]
    b: u64,
    #[serde(rename = "N")]
    n: u64,
    ratio: f64,
    elapsed_ms: u64,
}

fn cmd_count(out: &mut Output, bs: &[u64], diagnostic: bool, ceiling: u64) -> Res {
    if bs.is_empty() {
        return Err(Fail::Input("give --b or --b-list".into()));
    }
    if let Some(&b) = bs.iter().find(|&&b| b == 0) {
        return Err(Fail::Input(format!("B must be positive, got {b}")));
    }
    let max = *bs.iter().max().expect("nonempty");
    let counter = Counter::new(max, CountConfig { ceiling, workers: None })?;
    if diagnostic {
        let mut rows = Vec::new();
        for &b in bs {
            if b < 3 {
                return Err(Fail::Input(format!("the ratio needs B >= 3, got {b}")));
            }
            let start = Instant::now();
            let n = counter.count_n(b)?;
            let bf = b as f64;
            rows.push(DiagnosticRow {
                b,
                n,
                ratio: n as f64 * bf.ln() / (bf * bf * bf.ln().ln()),
                elapsed_ms: start.elapsed().as_millis() as u64,
            });
        }
        return out.rows(&rows);
    }
    let mut rows = Vec::new();
    for &b in bs {
        let r = counter.census(b)?;
        if !r.consistent() {
            out.rows(&rows)?;
            return Err(Fail::Identity(format!(
                "B={b}: N={} 2N1+N2={} raw={}",
                r.n,
                2 * r.n1 + r.n2,
                r.raw_count
            )));
        }
        rows.push(r);
    }
    out.rows(&rows)
}

#[derive(Serialize)]
struct SigmaCsvRow {
    r: u8,
    i: u8,
    m02: u64,
    m03: u64,
    m12: u64,
    m13: u64,
    sigma: String,
    direct: i64,
    closed_form: i64,
    status: &'static str,
    direct_hasse: i64,
}

#[derive(Serialize)]
struct SetSummary {
    set: &'static str,
    size: usize,
    restricted: usize,
}

fn cmd_sigma(out: &mut Output, values: &[u64]) -> Res {
    if values.is_empty() || values.contains(&0) {
        return Err(Fail::Input("m values must be positive".into()));
    }
    let table = sigma_table(values)?;
    if table.is_empty() {
        return Err(Fail::Input(format!("no admissible (m, sigma) with values {values:?}")));
    }
    let rows: Vec<SigmaCsvRow> = table
        .iter()
        .map(|r| SigmaCsvRow {
            r: r.r,
            i: r.i,
            m02: r.m[0],
            m03: r.m[1],
            m12: r.m[2],
            m13: r.m[3],
            sigma: r.sigma.iter().map(|s| s.to_string()).collect(),
            direct: r.direct,
            closed_form: r.closed_form,
            status: if r.pass { "PASS" } else { "FAIL" },
            direct_hasse: r.hasse,
        })
        .collect();
    out.rows(&rows)?;
    let sets = [
        SetSummary {
            set: "A1",
            size: mod8_set_a1().len(),
            restricted: mod8_set_a1().restricted_len(),
        },
        SetSummary {
            set: "A2",
            size: mod8_set_a2().len(),
            restricted: mod8_set_a2().restricted_len(),
        },
    ];
    let failures = table.iter().filter(|r| !r.pass).count();
    match out.format {
        Format::Csv => {
            for s in &sets {
                writeln!(out.sink, "# {}: size {}, restricted {}", s.set, s.size, s.restricted)?;
            }
            writeln!(
                out.sink,
                "# {} cases, {}",
                table.len(),
                if failures == 0 { "all PASS".to_string() } else { format!("{failures} FAIL") }
            )?;
        }
        Format::Json => out.rows(&sets)?,
    }
    if failures > 0 {
        return Err(Fail::Identity(format!("{failures} Σ cases disagree with the closed forms")));
    }
    if sets[0].restricted != 48 || sets[1].restricted != 32 {
        return Err(Fail::Identity("restricted set sizes are not 48 and 32".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstantReport {
    value: f64,
    prime_limit: u64,
    tail_radius: f64,
    lower: f64,
    upper: f64,
    weighted_sum: f64,
    variants: Vec<quadfib::constant::VariantConstant>,
    hasse_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    main_term: Option<MainTerm>,
}

#[derive(Serialize)]
struct MainTerm {
    #[serde(rename = "B")]
    b: f64,
    value: f64,
}

fn cmd_constant(out: &mut Output, prime_limit: u64, method: Method, b: Option<f64>) -> Res {
    let method = match method {
        Method::Plain => ProductMethod::Plain,
        Method::Accelerated => ProductMethod::Accelerated,
    };
    if prime_limit > 1_000_000_000 {
        return Err(Fail::Ceiling(format!("prime limit {prime_limit} above 10^9")));
    }
    let c = leading_constant_with(prime_limit, method)?;
    let (lower, upper) = c.result().interval();
    let main = match b {
        Some(b) => Some(MainTerm {
            b,
            value: main_term(b, c.value)?,
        }),
        None => None,
    };
    let report = ConstantReport {
        value: c.value,
        prime_limit,
        tail_radius: c.tail_radius,
        lower,
        upper,
        weighted_sum: c.weighted_sum,
        variants: c.variants,
        hasse_value: c.hasse_value,
        main_term: main,
    };
    serde_json::to_writer_pretty(&mut out.sink, &report)?;
    writeln!(out.sink)?;
    Ok(())
}

#[derive(Serialize)]
struct PlaceRow {
    place: String,
    formula: String,
    hilbert: String,
}

fn cmd_check(out: &mut Output, coeffs: &[i64]) -> Res {
    let a: [i64; 4] = coeffs
        .try_into()
        .map_err(|_| Fail::Input(format!("expected four coefficients, got {}", coeffs.len())))?;
    let q = DiagonalQuadric::new(a)?;
    let bound = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(1).max(2);
    let sieve = SpfSieve::new(bound.min(1 << 20));
    let (n, places) = place_table(&q, &sieve)?;
    let soluble = is_everywhere_locally_soluble(&q, &sieve)?;
    let verdict = |v: quadfib::LocalVerdict| format!("{v:?}").to_lowercase();
    let rows: Vec<PlaceRow> = places
        .iter()
        .map(|p| PlaceRow {
            place: p.place.to_string(),
            formula: verdict(p.formula),
            hilbert: verdict(p.hilbert),
        })
        .collect();
    match out.format {
        Format::Csv => {
            writeln!(out.sink, "quadric {q}")?;
            writeln!(out.sink, "normalized {}", n.quadric())?;
            writeln!(out.sink, "{:<8} {:<10} {:<10}", "place", "formula", "hilbert")?;
            for r in &rows {
                writeln!(out.sink, "{:<8} {:<10} {:<10}", r.place, r.formula, r.hilbert)?;
            }
            let failing: Vec<&str> = rows
                .iter()
                .filter(|r| r.formula == "insoluble")
                .map(|r| r.place.as_str())
                .collect();
            if soluble {
                writeln!(out.sink, "everywhere locally soluble: yes")?;
            } else {
                writeln!(out.sink, "everywhere locally soluble: no (fails at {})", failing.join(", "))?;
            }
        }
        Format::Json => {
            let report = serde_json::json!({
                "quadric": a,
                "normalized": n.coeffs(),
                "places": rows,
                "soluble": soluble,
            });
            serde_json::to_writer(&mut out.sink, &report)?;
            writeln!(out.sink)?;
        }
    }
    if places.iter().any(|p| p.formula != p.hilbert) {
        return Err(Fail::Identity("local formula and Hilbert symbols disagree".into()));
    }
    Ok(())
}

fn cmd_bilinear(out: &mut Output, x: u64, zs: &[u64], modes: &[String], seed: u64, ceiling: u64) -> Res {
    if zs.is_empty() || modes.is_empty() {
        return Err(Fail::Input("empty z list or mode list".into()));
    }
    let modes: Vec<CoeffMode> = modes.iter().map(|m| m.parse()).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for &mode in &modes {
        for &z in zs {
            rows.push(bilinear_hyperbolic_sum(x, z, mode, seed, ceiling)?);
        }
    }
    out.rows(&rows)
}

#[derive(Serialize)]
struct IdentityRow {
    r: u8,
    cases: usize,
    mismatches: usize,
    status: &'static str,
}

fn cmd_identity(out: &mut Output, bounds: &[u64]) -> Res {
    let [s_max, m_max]: [u64; 2] = bounds
        .try_into()
        .map_err(|_| Fail::Input("--box takes s_max,m_max".into()))?;
    if s_max == 0 || m_max == 0 {
        return Err(Fail::Input("box bounds must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut first_bad = None;
    for v in [CountVariant::R1, CountVariant::R2] {
        let inputs = admissible_box(s_max, m_max, v);
        let bound = inputs
            .iter()
            .map(|i| i.s.iter().chain(i.m.iter()).product::<u64>())
            .max()
            .unwrap_or(2)
            .max(2);
        let sieve = SpfSieve::new(bound.min(1 << 26));
        let mut mismatches = 0;
        for input in &inputs {
            let a = indicator_via_charsum(input)?;
            let b = direct_indicator(input, &sieve)?;
            if a != b {
                mismatches += 1;
                first_bad.get_or_insert(format!("{input:?}: charsum {a}, direct {b}"));
            }
        }
        rows.push(IdentityRow {
            r: v.r(),
            cases: inputs.len(),
            mismatches,
            status: if mismatches == 0 { "PASS" } else { "FAIL" },
        });
    }
    out.rows(&rows)?;
    let all = rows.iter().all(|r| r.mismatches == 0);
    if out.format == Format::Csv {
        writeln!(out.sink, "# {}", if all { "all PASS" } else { "FAIL" })?;
    }
    match first_bad {
        Some(m) => Err(Fail::Identity(m)),
        None => Ok(()),
    }
}
