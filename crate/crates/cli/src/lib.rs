//! The `quasipolar` command-line tool.
//!
//! Exit codes: 0 on success (possibly empty results), 1 when no result exists
//! (no lift, failed verification, dead tower), 2 on invalid input.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Parser, Subcommand};
use quasipolar::oracle::{brute_lifts, DEFAULT_ORACLE_CAP};
use quasipolar::{
    dichotomies_with_polarity, enumerate_quasipolarities, lift_quasipolarity, lift_tower,
    verify_commutes, AffineMap, Dichotomy, Error, LiftReport, Modulus, Prime, Quasipolarity,
    DEFAULT_BRANCH_CAP, DEFAULT_MODULUS_CAP,
};
use rayon::prelude::*;
use serde_json::{json, Value};

mod table;

use table::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_RESULT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quasipolar",
    version,
    about = "Quasipolarities of Z_n, their lifts to Z_pn, and marked strong dichotomies"
)]
pub struct Cli {
    /// Emit a single JSON document instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Spread searches over all cores. Output is unchanged.
    #[arg(long, global = true)]
    parallel: bool,
    /// Largest modulus for dichotomy searches (cost grows like 2^(n/2)).
    #[arg(long, global = true, default_value_t = DEFAULT_MODULUS_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every quasipolarity of Z_n.
    Quasipolarities {
        #[arg(long)]
        modulus: u64,
    },
    /// Lift the quasipolarity e^u.v of Z_n to Z_pn.
    Lift {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        prime: u64,
        /// Cross-check the certificates against an exhaustive search.
        #[arg(long)]
        exhaustive_check: bool,
    },
    /// Check that e^w.r on Z_pn is a quasipolarity commuting with e^u.v on Z_n.
    Verify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        #[arg(long, allow_negative_numbers = true)]
        w: i64,
    },
    /// Search marked strong dichotomies of Z_n.
    Dichotomies {
        #[arg(long)]
        modulus: u64,
        /// Restrict to one polarity, given as `u,v`.
        #[arg(long)]
        polarity: Option<String>,
    },
    /// Lift e^u.v along a chain of primes, following every branch.
    Tower {
        #[command(flatten)]
        map: MapArgs,
        /// Comma-separated primes, applied left to right.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_BRANCH_CAP)]
        branch_cap: usize,
        /// Cross-check every stage against an exhaustive search.
        #[arg(long)]
        exhaustive_check: bool,
    },
}

#[derive(Debug, clap::Args)]
struct MapArgs {
    #[arg(long)]
    modulus: u64,
    #[arg(long, allow_negative_numbers = true)]
    v: i64,
    #[arg(long, allow_negative_numbers = true)]
    u: i64,
}

impl MapArgs {
    fn map(&self) -> Result<AffineMap, Error> {
        AffineMap::new(Modulus::new(self.modulus)?, self.u, self.v)
    }

    fn quasipolarity(&self) -> Result<Quasipolarity, Error> {
        Quasipolarity::new(self.map()?)
    }
}

/// What a command produced: the rendered document and its exit code.
struct Output {
    code: i32,
    json: Value,
    text: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let written = if cli.json {
                serde_json::to_writer_pretty(&mut *out, &output.json)
                    .map_err(io::Error::from)
                    .and_then(|_| writeln!(out))
            } else {
                out.write_all(output.text.as_bytes())
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INVALID;
            }
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Quasipolarities { modulus } => quasipolarities(*modulus),
        Command::Lift {
            map,
            prime,
            exhaustive_check,
        } => lift(map, *prime, *exhaustive_check),
        Command::Verify { map, prime, r, w } => verify(map, *prime, *r, *w),
        Command::Dichotomies { modulus, polarity } => {
            dichotomies(*modulus, polarity.as_deref(), cli.cap, cli.parallel)
        }
        Command::Tower {
            map,
            primes,
            branch_cap,
            exhaustive_check,
        } => tower(map, primes, *branch_cap, *exhaustive_check, cli.parallel),
    }
}

fn quasipolarities(modulus: u64) -> Result<Output, Error> {
    let n = Modulus::new(modulus)?;
    let found = enumerate_quasipolarities(n);

    let mut table = Table::new(["map", "v", "u", "k"]);
    for q in &found {
        table.row([
            q.to_string(),
            q.v().to_string(),
            q.u().to_string(),
            q.defect_k().to_string(),
        ]);
    }
    let text = format!("{table}count: {}\n", found.len());

    let results: Vec<Value> = found
        .iter()
        .map(|q| json!({ "u": q.u().value(), "v": q.v().value() }))
        .collect();
    Ok(Output {
        code: EXIT_OK,
        json: json!({
            "command": "quasipolarities",
            "inputs": { "modulus": modulus },
            "results": results,
            "count": found.len(),
        }),
        text,
    })
}

fn render_report(report: &LiftReport, text: &mut String) {
    let n = report.source.modulus();
    text.push_str(&format!(
        "lift {} along Z_{n} -> Z_{} (pi = {}, {})\n",
        report.source,
        n.get() * report.pi.get(),
        report.pi,
        report.case
    ));
    if !report.certificates.is_empty() {
        let mut table = Table::new(["t", "r", "w", "k", "k'", "target"]);
        for c in &report.certificates {
            table.row([
                c.t().to_string(),
                c.r().to_string(),
                c.w().to_string(),
                c.k().to_string(),
                c.k_prime().to_string(),
                c.target().to_string(),
            ]);
        }
        text.push_str("certificates:\n");
        text.push_str(&table.indented(2));
    }
    if !report.rejections.is_empty() {
        let mut table = Table::new(["t", "reason"]);
        for r in &report.rejections {
            let t = r.t.map_or_else(|| "-".to_string(), |t| t.to_string());
            let reason = r.to_string();
            let reason = reason.strip_prefix(&format!("t={t} ")).unwrap_or(&reason);
            table.row([t.clone(), reason.to_string()]);
        }
        text.push_str("rejections:\n");
        text.push_str(&table.indented(2));
    }
}

/// Compares a report's lifts with the exhaustive search.
fn oracle_check(report: &LiftReport) -> Result<(bool, Value), Error> {
    let oracle = brute_lifts(&report.source, report.pi, DEFAULT_ORACLE_CAP)?;
    let agree = report.targets() == oracle;
    let maps: Vec<String> = oracle.iter().map(ToString::to_string).collect();
    Ok((
        agree,
        json!({ "source": report.source.to_string(), "agree": agree, "oracle_lifts": maps }),
    ))
}

fn lift(map: &MapArgs, prime: u64, exhaustive_check: bool) -> Result<Output, Error> {
    let p = map.quasipolarity()?;
    let pi = Prime::new(prime)?;
    let report = lift_quasipolarity(&p, pi)?;

    let mut text = String::new();
    render_report(&report, &mut text);
    text.push_str(&format!(
        "certificates: {}, rejections: {}\n",
        report.certificates.len(),
        report.rejections.len()
    ));

    let mut code = if report.certificates.is_empty() {
        EXIT_NO_RESULT
    } else {
        EXIT_OK
    };
    let mut json = json!({
        "command": "lift",
        "inputs": { "modulus": map.modulus, "u": p.u().value(), "v": p.v().value(), "prime": prime },
        "case": report.case,
        "results": report.certificates,
        "rejections": report.rejections,
    });
    if exhaustive_check {
        let (agree, detail) = oracle_check(&report)?;
        text.push_str(&format!(
            "oracle: {}\n",
            if agree { "agrees" } else { "DISAGREES" }
        ));
        json["oracle_agreement"] = detail;
        if !agree {
            code = EXIT_NO_RESULT;
        }
    }
    Ok(Output { code, json, text })
}

fn verify(map: &MapArgs, prime: u64, r: i64, w: i64) -> Result<Output, Error> {
    let source = map.map()?;
    let pi = Prime::new(prime)?;
    let target = AffineMap::new(source.modulus().scaled(pi.get())?, w, r)?;
    let source_ok = source.is_quasipolarity();
    let target_ok = target.is_quasipolarity();
    let commutes = verify_commutes(&source, &target, pi)?;

    let mut table = Table::new(["check", "holds"]);
    table.row([
        format!("{source} is a quasipolarity"),
        source_ok.to_string(),
    ]);
    table.row([
        format!("{target} is a quasipolarity"),
        target_ok.to_string(),
    ]);
    table.row(["square commutes".to_string(), commutes.to_string()]);

    let all = source_ok && target_ok && commutes;
    Ok(Output {
        code: if all { EXIT_OK } else { EXIT_NO_RESULT },
        json: json!({
            "command": "verify",
            "inputs": {
                "modulus": map.modulus, "u": source.u().value(), "v": source.v().value(),
                "prime": prime, "r": target.v().value(), "w": target.u().value(),
            },
            "results": {
                "source_is_quasipolarity": source_ok,
                "target_is_quasipolarity": target_ok,
                "commutes": commutes,
            },
        }),
        text: table.to_string(),
    })
}

fn parse_polarity(n: Modulus, text: &str) -> Result<Quasipolarity, Error> {
    let parse_error = |reason: &str| Error::Parse {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let (u, v) = text
        .split_once(',')
        .ok_or_else(|| parse_error("expected `u,v`"))?;
    let int = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|e| parse_error(&e.to_string()))
    };
    Quasipolarity::new(AffineMap::new(n, int(u)?, int(v)?)?)
}

fn dichotomies(
    modulus: u64,
    polarity: Option<&str>,
    cap: u64,
    parallel: bool,
) -> Result<Output, Error> {
    let n = Modulus::new(modulus)?;
    if !n.is_even() {
        return Err(Error::OddModulus(modulus));
    }
    if modulus > cap {
        return Err(Error::ModulusCapExceeded { n: modulus, cap });
    }
    let polarities = match polarity {
        Some(text) => vec![parse_polarity(n, text)?],
        None => enumerate_quasipolarities(n),
    };
    let search = |p: &Quasipolarity| dichotomies_with_polarity(p, cap).map(|d| (*p, d));
    let found: Vec<(Quasipolarity, Vec<Dichotomy>)> = if parallel {
        polarities
            .par_iter()
            .map(search)
            .collect::<Result<_, _>>()?
    } else {
        polarities.iter().map(search).collect::<Result<_, _>>()?
    };

    let mut text = String::new();
    let mut results = Vec::new();
    let mut total = 0;
    for (p, list) in &found {
        total += list.len();
        text.push_str(&format!("polarity {p}: {} dichotomies\n", list.len()));
        for d in list {
            text.push_str(&format!("  {d}\n"));
        }
        results
            .push(json!({ "polarity": p.to_string(), "count": list.len(), "dichotomies": list }));
    }
    text.push_str(&format!("count: {total}\n"));
    Ok(Output {
        code: EXIT_OK,
        json: json!({
            "command": "dichotomies",
            "inputs": { "modulus": modulus, "polarity": polarity, "cap": cap },
            "results": results,
            "count": total,
        }),
        text,
    })
}

fn tower(
    map: &MapArgs,
    primes: &[u64],
    branch_cap: usize,
    exhaustive_check: bool,
    parallel: bool,
) -> Result<Output, Error> {
    let seed = map.quasipolarity()?;
    let chain = primes
        .iter()
        .map(|&p| Prime::new(p))
        .collect::<Result<Vec<_>, _>>()?;
    let stages = lift_tower(&seed, &chain, branch_cap)?;

    let mut text = String::new();
    let mut dead = stages.len() < chain.len();
    for (i, stage) in stages.iter().enumerate() {
        text.push_str(&format!(
            "stage {} (pi = {}, Z_{}): {} branches, {} certificates{}\n",
            i + 1,
            stage.prime,
            stage.modulus,
            stage.branches.len(),
            stage.certificate_count(),
            if stage.branch_cap_exceeded {
                ", branch cap reached"
            } else {
                ""
            }
        ));
        for branch in &stage.branches {
            let mut block = String::new();
            render_report(branch, &mut block);
            for line in block.lines() {
                text.push_str(&format!("  {line}\n"));
            }
        }
        dead |= stage.certificate_count() == 0;
    }
    if stages.is_empty() {
        text.push_str("no stages\n");
    }

    let mut json = json!({
        "command": "tower",
        "inputs": {
            "modulus": map.modulus, "u": seed.u().value(), "v": seed.v().value(),
            "primes": primes, "branch_cap": branch_cap,
        },
        "results": stages,
    });
    let mut code = if dead { EXIT_NO_RESULT } else { EXIT_OK };
    if exhaustive_check {
        let branches: Vec<&LiftReport> = stages.iter().flat_map(|s| &s.branches).collect();
        let checks: Vec<(bool, Value)> = if parallel {
            branches
                .par_iter()
                .map(|b| oracle_check(b))
                .collect::<Result<_, _>>()?
        } else {
            branches
                .iter()
                .map(|b| oracle_check(b))
                .collect::<Result<_, _>>()?
        };
        let agree = checks.iter().all(|(a, _)| *a);
        text.push_str(&format!(
            "oracle: {} ({} branches checked)\n",
            if agree { "agrees" } else { "DISAGREES" },
            checks.len()
        ));
        json["oracle_agreement"] = json!({
            "agree": agree,
            "branches": checks.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
        });
        if !agree {
            code = EXIT_NO_RESULT;
        }
    }
    Ok(Output { code, json, text })
}
