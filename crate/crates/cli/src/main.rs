//! `verify`: run identity checks and write their reports.
//!
//! Without `--identities` or `--ranks` the acceptance suite runs.

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use satake_core::bessel::Mode;
use satake_core::campaign::{acceptance_checks, run_campaign, run_checks, CampaignConfig, IdentityId};
use satake_core::lgroup::Place;
use satake_core::report::{Status, VerificationReport};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlaceArg {
    Inert,
    Split,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Symbolic,
    Specialized,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "verify", version, about = "Exact checks of unramified character and Bessel-period identities")]
struct Args {
    /// Comma-separated identity ids, or `all`.
    #[arg(long)]
    identities: Option<String>,
    /// Rank pairs `r,m` separated by `;`.
    #[arg(long)]
    ranks: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    place: PlaceArg,
    /// Series truncation order (also the weight box of the character checks, capped at 3).
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, value_enum, default_value = "symbolic")]
    mode: ModeArg,
    /// Random points per numeric check.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Report `elapsed_ms` as 0, making the output byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn parse_identities(s: &str) -> Result<Vec<IdentityId>, String> {
    if s.trim() == "all" {
        return Ok(IdentityId::ALL.to_vec());
    }
    let ids = s
        .split(',')
        .map(|p| p.trim().parse::<IdentityId>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err("no identities given".into());
    }
    Ok(ids)
}

fn parse_ranks(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [r, m] => Ok((
                    r.parse().map_err(|_| format!("bad rank r in '{pair}'"))?,
                    m.parse().map_err(|_| format!("bad rank m in '{pair}'"))?,
                )),
                _ => Err(format!("rank pair '{pair}' is not of the form r,m")),
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| if v.is_empty() { Err("no rank pairs given".into()) } else { Ok(v) })
}

fn config(args: &Args) -> Result<CampaignConfig, String> {
    let identities = match &args.identities {
        Some(s) => parse_identities(s)?,
        None => IdentityId::ALL.to_vec(),
    };
    let ranks = match &args.ranks {
        Some(s) => parse_ranks(s)?,
        None => vec![(1, 0)],
    };
    let places = match args.place {
        PlaceArg::Inert => vec![Place::Inert],
        PlaceArg::Split => vec![Place::Split],
        PlaceArg::Both => vec![Place::Inert, Place::Split],
    };
    let mode = match args.mode {
        ModeArg::Symbolic => Mode::Symbolic,
        ModeArg::Specialized => Mode::Specialized,
        ModeArg::Numeric => Mode::Numeric,
    };
    if mode == Mode::Numeric && args.trials == 0 {
        return Err("numeric mode needs --trials of at least 1".into());
    }
    Ok(CampaignConfig { identities, ranks, places, order: args.order, mode, trials: args.trials, seed: args.seed })
}

fn render(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let p = &r.params;
                let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
                let status = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skipped => "skipped",
                };
                let mut line = format!(
                    "{:<18} {:<7} r={} m={} place={} mode={} order={} {}ms",
                    r.identity_id,
                    status,
                    opt(p.r.map(|x| x.to_string())),
                    opt(p.m.map(|x| x.to_string())),
                    opt(p.place.map(|x| x.to_string())),
                    opt(p.mode.clone()),
                    opt(p.order.map(|x| x.to_string())),
                    r.elapsed_ms
                );
                for key in ["group", "convention"] {
                    if let Some(v) = p.detail.get(key) {
                        line.push_str(&format!(" {key}={v}"));
                    }
                }
                if let Some(w) = &r.witness {
                    line.push_str(&format!("  {w}"));
                }
                s.push_str(line.trim_end());
                s.push('\n');
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let default_suite = args.identities.is_none() && args.ranks.is_none();
    let mut reports = if default_suite {
        run_checks(&acceptance_checks())
    } else {
        match config(&args) {
            Ok(c) => run_campaign(&c),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        }
    };
    if args.no_timing {
        for r in &mut reports {
            r.elapsed_ms = 0;
        }
    }
    let text = render(&reports, args.format);
    let written = match &args.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_IO);
    }
    if reports.iter().any(|r| r.status == Status::Fail) {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}
