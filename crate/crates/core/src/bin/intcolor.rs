use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use online_coloring::algorithms::AlgorithmKind;
use online_coloring::game::{Cardinality, Transcript};
use online_coloring::harness::{self, PlayConfig, StrategyKind, TableSpec};
use online_coloring::strategy_sm::DEFAULT_REGION_CAP;
use online_coloring::witness::DEFAULT_ORACLE_LIMIT;
use online_coloring::{verify, Error, Result};

/// Presenter strategies against on-line interval coloring algorithms.
#[derive(Parser)]
#[command(name = "intcolor", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play one matchup and write its transcript.
    Play {
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        d: usize,
        /// Per-color cardinality: a positive integer or "inf".
        #[arg(long, default_value = "inf")]
        k: String,
        #[arg(long, default_value = "first-fit")]
        algorithm: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_REGION_CAP)]
        region_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a transcript and print a JSON report.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Play every combination of the listed parameters.
    Table {
        #[arg(long)]
        strategy: String,
        /// Comma-separated d values (n for hs-graph).
        #[arg(long)]
        d: Option<String>,
        /// Comma-separated n values for hs-graph.
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value = "1")]
        m: String,
        #[arg(long, default_value = "inf")]
        k: String,
        #[arg(long, default_value = "first-fit")]
        algorithms: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_REGION_CAP)]
        region_cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force optimum vs witness vs point cliques on a transcript prefix.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn list<T>(s: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(parse)
        .collect()
}

fn number(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::BadParameter(format!("not a number: {s:?}")))
}

fn cardinality(s: &str) -> Result<Cardinality> {
    s.parse()
        .map_err(|_| Error::BadParameter(format!("bad k {s:?}: use a positive integer or inf")))
}

fn json_only(format: Format) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Error::BadParameter("csv output is only available for table".into())),
    }
}

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_transcript_text(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::MalformedTranscript(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Play {
            strategy,
            n,
            m,
            d,
            k,
            algorithm,
            seed,
            region_cap,
            out,
        } => {
            let cfg = PlayConfig::new(strategy.parse()?, AlgorithmKind::parse(&algorithm, seed)?)
                .n(n)
                .m(m)
                .d(d)
                .k(cardinality(&k)?)
                .region_cap(region_cap);
            let res = harness::play(&cfg)?;
            write_out(out.as_ref(), &res.transcript.to_json())?;
            if out.is_some() {
                println!("{}", res.summary_line());
            } else {
                eprintln!("{}", res.summary_line());
            }
            Ok(0)
        }
        Cmd::Verify { input, format } => {
            json_only(format)?;
            let report = verify::verify_str(&read_transcript_text(&input)?);
            println!("{}", report.to_json());
            Ok(report.exit_code as u8)
        }
        Cmd::Table {
            strategy,
            d,
            n,
            m,
            k,
            algorithms,
            seed,
            region_cap,
            format,
            out,
        } => {
            let strategy: StrategyKind = strategy.parse()?;
            let sizes = d
                .or(n)
                .ok_or_else(|| Error::BadParameter("table needs --d (or --n for hs-graph)".into()))?;
            let spec = TableSpec {
                strategy,
                ds: list(&sizes, number)?,
                ms: list(&m, number)?,
                ks: list(&k, cardinality)?,
                algorithms: list(&algorithms, |a| AlgorithmKind::parse(a, seed))?,
                region_cap,
            };
            let rows = harness::table(&spec);
            let text = match format {
                Format::Csv => harness::table_csv(&rows)?,
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            write_out(out.as_ref(), &text)?;
            Ok(if rows.iter().any(|r| r.error.is_some()) { 1 } else { 0 })
        }
        Cmd::Oracle { input, max_n, format } => {
            json_only(format)?;
            let t = Transcript::from_json(&read_transcript_text(&input)?)?;
            let report = harness::oracle(&t, max_n)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.sandwich_holds { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
