//! Command-line interface: triple search, single-triple verification, and
//! group-table sweeps, with CSV/JSON report emission.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use quadclass::arith;
use quadclass::groups;
use quadclass_cli::record::{
    evaluate_triple, records_to_csv, records_to_json, PredictionDepth, TripleRecord,
};
use quadclass_cli::search::{run_search, SearchConfig};
use quadclass_cli::tables_io::{TableRowOut, TABLE_CSV_COLUMNS};

#[derive(Parser)]
#[command(
    name = "quadclass",
    version,
    about = "prime-triple class-group search and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum RequireArg {
    FullTheorem,
    CorollaryOnly,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads (0 = automatic).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Abort fundamental-unit computations beyond this many decimal digits.
    #[arg(long, default_value_t = 1_000_000)]
    digit_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep all prime triples below a bound through the hypothesis pipeline.
    Search {
        #[arg(long)]
        max_prime: u64,
        #[arg(long, value_enum, default_value = "both")]
        eta: EtaArg,
        /// Which condition subset gates the prediction columns.
        #[arg(long, value_enum, default_value = "full-theorem")]
        require: RequireArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a single triple with a per-condition trace.
    Verify {
        q: u64,
        r: u64,
        s: u64,
        eta: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the index-2/index-4 subgroup tables against the group engine.
    GroupTables {
        /// Comma-separated alpha values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 3, 4])]
        alpha: Vec<u32>,
        /// Comma-separated n values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 3, 4])]
        n: Vec<u32>,
        /// Comma-separated presentation types.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2, 3, 4])]
        types: Vec<u8>,
        /// Restrict the twist parameter s (default: all valid).
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<u32>>,
        /// Twist multipliers k to try.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 3])]
        k: Vec<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Search {
            max_prime,
            eta,
            require,
            output,
        } => {
            let config = SearchConfig {
                max_prime,
                etas: match eta {
                    EtaArg::One => vec![1],
                    EtaArg::Two => vec![2],
                    EtaArg::Both => vec![1, 2],
                },
                depth: match require {
                    RequireArg::FullTheorem => PredictionDepth::FullTheorem,
                    RequireArg::CorollaryOnly => PredictionDepth::CorollaryOnly,
                },
                digit_cap: output.digit_cap,
                workers: output.workers,
            };
            if let Err(e) = config.validate() {
                return Ok(usage_error(&e.to_string()));
            }
            let records = run_search(&config)?;
            emit_records(&records, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            q,
            r,
            s,
            eta,
            output,
        } => {
            if eta != 1 && eta != 2 {
                return Ok(usage_error("eta must be 1 or 2"));
            }
            for v in [q, r, s] {
                if !arith::is_prime_u64(v) {
                    return Ok(usage_error(&format!("{v} is not prime")));
                }
            }
            if r == s {
                return Ok(usage_error("r and s must be distinct"));
            }
            let record =
                evaluate_triple(q, r, s, eta, output.digit_cap, PredictionDepth::FullTheorem)?;
            match (&output.out, output.format) {
                (None, Format::Json) => {
                    println!("{}", serde_json::to_string_pretty(&record)?);
                }
                (None, Format::Csv) => {
                    print!("{}", record.pretty());
                }
                (Some(_), _) => {
                    print!("{}", record.pretty());
                    emit_records(std::slice::from_ref(&record), &output)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GroupTables {
            alpha,
            n,
            types,
            s,
            k,
            output,
        } => {
            if types.iter().any(|t| !(1..=4).contains(t)) {
                return Ok(usage_error("types must lie in 1..=4"));
            }
            if alpha.iter().any(|&a| a < 2) || n.iter().any(|&v| v < 2) {
                return Ok(usage_error("alpha and n must be at least 2"));
            }
            if alpha
                .iter()
                .zip(n.iter())
                .map(|(a, b)| a + b)
                .max()
                .unwrap_or(0)
                > 12
            {
                return Ok(usage_error(
                    "alpha + n beyond 12 exceeds the group capacity",
                ));
            }
            let rows = groups::sweep_tables(&alpha, &n, &types, s.as_deref(), &k)?;
            let out_rows: Vec<TableRowOut> = rows.iter().map(TableRowOut::from).collect();
            let mut counts = std::collections::BTreeMap::new();
            for r in &out_rows {
                *counts.entry(r.outcome.clone()).or_insert(0usize) += 1;
            }
            let summary = counts
                .iter()
                .map(|(k, v)| format!("{k}: {v}"))
                .collect::<Vec<_>>()
                .join(", ");
            emit_table_rows(&out_rows, &output)?;
            if output.out.is_some() {
                println!("{} rows ({summary})", out_rows.len());
            } else {
                eprintln!("{} rows ({summary})", out_rows.len());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_records(records: &[TripleRecord], output: &OutputArgs) -> Result<()> {
    let body = match output.format {
        Format::Csv => records_to_csv(records),
        Format::Json => records_to_json(records),
    };
    write_out(&body, &output.out)
}

fn emit_table_rows(rows: &[TableRowOut], output: &OutputArgs) -> Result<()> {
    let body = match output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(TABLE_CSV_COLUMNS)?;
            for row in rows {
                w.write_record(row.csv_fields())?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Json => serde_json::to_string_pretty(rows)? + "\n",
    };
    write_out(&body, &output.out)
}

fn write_out(body: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}
