//! `bicrossed-lab`: runs verification scenarios and single checks, and
//! writes JSON reports.
//!
//! Exit status: 0 when the report passes, 1 when it records a failed or
//! errored check, 2 on usage errors and unreadable input.

mod error;
mod expr;
mod input;
mod scenario;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use bicrossed::matched::{axb_factorize, axb_factorize_rational, axb_mul, AxbGroupElement, MatchedError};
use bicrossed::padic::DEFAULT_PRECISION;
use bicrossed::pentagon::{derived_identity_check, pentagon_identity_check, round_trip_check};
use bicrossed::ring::{bq_check, parse_rational, unit_density_estimate, Adele, RingDescriptor, Truncation};
use bicrossed::unitary::full_report;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use error::CliError;

pub const SCHEMA: &str = "bicrossed-lab/1";

#[derive(Debug, Parser)]
#[command(name = "bicrossed-lab", version, about = "Exact checks for bicrossed-product quantum groups")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Leave the timestamp out so identical runs give identical bytes.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every check listed in a scenario file.
    Run { scenario: PathBuf },
    #[command(subcommand)]
    Pentagon(PentagonCmd),
    #[command(subcommand)]
    Bicrossed(BicrossedCmd),
    #[command(subcommand)]
    Adele(AdeleCmd),
    #[command(subcommand)]
    Axb(AxbCmd),
    #[command(subcommand)]
    Padic(PadicCmd),
    #[command(subcommand)]
    Ring(RingCmd),
}

#[derive(Debug, Subcommand)]
enum PentagonCmd {
    /// Pentagon relation and inverse round trip of a map on random points.
    Verify {
        /// Built-in name, inline JSON, or a JSON file.
        map: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check the maps derived from the transformation.
        #[arg(long)]
        derived: bool,
    },
}

#[derive(Debug, Subcommand)]
enum BicrossedCmd {
    /// Pentagon, slice dimensions and regularity verdict of a matched pair.
    Report {
        /// Built-in name, inline JSON, or a JSON file.
        pair: String,
        /// Include the entries of W.
        #[arg(long)]
        dump_operator: bool,
    },
}

#[derive(Debug, Subcommand)]
enum AdeleCmd {
    /// Monte Carlo unit density against the exact product.
    Density {
        /// Prime pool JSON, or `f2`.
        pool: String,
        #[arg(long, default_value_t = 25)]
        truncation: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A non-unit next to a unit, agreeing with it on the constrained primes.
    Witness {
        /// Prime pool JSON, or `f2`.
        pool: String,
        #[arg(long, value_delimiter = ',')]
        constraint: Vec<u64>,
        /// Adele JSON; defaults to the identity.
        #[arg(long)]
        unit: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum AxbCmd {
    /// Split (a, x) as g s with g in G1 and s in G2.
    Factor {
        /// Ring descriptor JSON or alias such as `Q_5`.
        ring: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Debug, Subcommand)]
enum PadicCmd {
    /// Evaluate an arithmetic expression in Q_p.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
}

#[derive(Debug, Subcommand)]
enum RingCmd {
    /// Randomized ring axioms of B_q over a base ring.
    BqCheck {
        /// Ring descriptor JSON or alias such as `Z/36`.
        base: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

type Outcome = Result<(bool, Value), CliError>;

fn pentagon_verify(map: &str, samples: usize, seed: u64, derived: bool) -> Outcome {
    let v = input::map(&input::argument_value(map, "map")?)?;
    let pentagon = pentagon_identity_check(&v, samples, seed)?;
    let mut ok = pentagon.holds;
    let mut data = json!({ "map": v.name, "pentagon": pentagon });
    if v.inverse.is_some() {
        let rt = round_trip_check(&v, samples, seed)?;
        ok &= rt.holds();
        data["round_trip"] = serde_json::to_value(&rt).expect("report serializes");
    }
    if derived {
        let d = derived_identity_check(&v, samples, seed)?;
        ok &= d.holds();
        data["derived"] = serde_json::to_value(&d).expect("report serializes");
    }
    Ok((ok, data))
}

fn bicrossed_report(pair: &str, dump_operator: bool) -> Outcome {
    let mp = input::pair(&input::argument_value(pair, "pair")?)?;
    let data = full_report(&mp, dump_operator)?;
    Ok((data["pentagon"] == true, data))
}

fn adele_ring(pool: &str) -> Result<RingDescriptor, CliError> {
    let pool = input::pool(&input::argument_value(pool, "prime pool")?)?;
    Ok(RingDescriptor::adeles(pool))
}

fn adele_density(pool: &str, truncation: usize, samples: usize, seed: u64) -> Outcome {
    let desc = adele_ring(pool)?;
    let est = unit_density_estimate(&desc, Truncation::Count { count: truncation }, samples, seed)?;
    let z = est.z_score();
    let mut data = serde_json::to_value(&est).expect("estimate serializes");
    data["z_score"] = json!(z);
    data["sigmas_allowed"] = json!(scenario::DENSITY_SIGMAS);
    Ok((z <= scenario::DENSITY_SIGMAS, data))
}

fn adele_witness(pool: &str, constraint: &[u64], unit: Option<&str>) -> Outcome {
    let desc = adele_ring(pool)?;
    let unit: Adele = match unit {
        Some(text) => serde_json::from_value(input::argument_value(text, "unit")?)
            .map_err(|e| CliError::Input(format!("unit: {e}")))?,
        None => Adele::ones(),
    };
    let constraint: BTreeSet<u64> = constraint.iter().copied().collect();
    scenario::witness_data(&desc, &unit, &constraint)
}

fn element_json(e: &AxbGroupElement) -> Value {
    json!({ "a": e.a.to_json(), "x": e.x.to_json() })
}

fn axb_factor(ring: &str, a: &str, x: &str) -> Outcome {
    let desc = input::ring(&input::argument_value(ring, "ring")?)?;
    let elem = AxbGroupElement::new(desc.parse_element(a)?, desc.parse_element(x)?);
    // Rational inputs in Q_p are decided exactly; digits alone cannot tell
    // x = -1 from a value close to it.
    let exact = match (&desc, parse_rational(a), parse_rational(x)) {
        (RingDescriptor::PAdicField { .. }, Some(ra), Some(rx)) => axb_factorize_rational(&ra, &rx).map(|_| ()),
        _ => Ok(()),
    };
    let split = exact.and_then(|()| axb_factorize(&desc, &elem));
    let (g, s) = match split {
        Ok(gs) => gs,
        Err(e @ MatchedError::NotFactorizable) => {
            return Ok((
                false,
                json!({ "ring": desc.label(), "element": element_json(&elem), "factorizable": false, "reason": e.to_string() }),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let product = axb_mul(&desc, &g, &s)?;
    let round_trip = desc.equal(&product.a, &elem.a)? && desc.equal(&product.x, &elem.x)?;
    Ok((
        round_trip,
        json!({
            "ring": desc.label(),
            "element": element_json(&elem),
            "factorizable": true,
            "g": element_json(&g),
            "s": element_json(&s),
            "round_trip": round_trip,
        }),
    ))
}

fn padic_eval(text: &str, prime: u64, precision: u32) -> Outcome {
    let e = expr::evaluate(text, prime, precision)?;
    let v = &e.value;
    Ok((
        true,
        json!({
            "expression": text,
            "prime": prime,
            "precision": precision,
            "value": v,
            "valuation": v.valuation(),
            "unit_digits": v.unit_digits(),
            "rational": v.reconstruct_rational().map(|r| r.to_string()),
            "precision_loss": e.precision_loss,
        }),
    ))
}

fn ring_bq_check(base: &str, q: &str, samples: usize, seed: u64) -> Outcome {
    let desc = input::ring(&input::argument_value(base, "ring")?)?;
    let r = bq_check(&desc, q, samples, seed)?;
    Ok((r.passed(), serde_json::to_value(&r).expect("report serializes")))
}

fn command_report(name: &str, outcome: (bool, Value)) -> Value {
    let (ok, data) = outcome;
    json!({
        "schema": SCHEMA,
        "command": name,
        "status": if ok { "pass" } else { "fail" },
        "data": data,
    })
}

fn execute(command: &Command) -> Result<Value, CliError> {
    Ok(match command {
        Command::Run { scenario: path } => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            scenario::run(&scenario::parse(&text)?)?
        }
        Command::Pentagon(PentagonCmd::Verify {
            map,
            samples,
            seed,
            derived,
        }) => command_report("pentagon verify", pentagon_verify(map, *samples, *seed, *derived)?),
        Command::Bicrossed(BicrossedCmd::Report { pair, dump_operator }) => {
            command_report("bicrossed report", bicrossed_report(pair, *dump_operator)?)
        }
        Command::Adele(AdeleCmd::Density {
            pool,
            truncation,
            samples,
            seed,
        }) => command_report("adele density", adele_density(pool, *truncation, *samples, *seed)?),
        Command::Adele(AdeleCmd::Witness { pool, constraint, unit }) => {
            command_report("adele witness", adele_witness(pool, constraint, unit.as_deref())?)
        }
        Command::Axb(AxbCmd::Factor { ring, a, x }) => command_report("axb factor", axb_factor(ring, a, x)?),
        Command::Padic(PadicCmd::Eval { expr, prime, precision }) => {
            command_report("padic eval", padic_eval(expr, *prime, *precision)?)
        }
        Command::Ring(RingCmd::BqCheck { base, q, samples, seed }) => {
            command_report("ring bq-check", ring_bq_check(base, q, *samples, *seed)?)
        }
    })
}

fn write_report(report: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if !cli.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        report["timestamp"] = json!(secs);
    }
    if let Err(e) = write_report(&report, cli.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report["status"] == "pass" {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
