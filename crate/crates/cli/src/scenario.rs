//! Scenario files: a list of subjects, each with the checks to run on it.
//!
//! Every check gets its own seed, the first eight bytes (little endian) of
//! `SHA-256("bicrossed-lab/1:<root>:<item index>:<check name>")`, where the
//! root is the item's `seed` if present and the scenario's otherwise. Checks
//! run in parallel; the report lists them in scenario order.

use std::collections::BTreeSet;

use bicrossed::matched::{semiregularity_verdict, MatchedPair, Semiregularity, Subject as VerdictSubject};
use bicrossed::pentagon::{
    calkin_wilf, derived_identity_check, pentagon_identity_check, qplus_slice_structure, round_trip_check,
    PentagonalMap,
};
use bicrossed::ring::{
    bq_check, interior_witness, unit_density_estimate, units_open_verdict, verify_witness, Adele, RingDescriptor,
    Scalar, Truncation,
};
use bicrossed::unitary::{
    build_w, coaction_continuity_check, comultiplication_check, crossed_product_dims, pentagon_check_perm,
    regularity_report, semiregularity_slice_check,
};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::{input, SCHEMA};

pub const PAIR_CHECKS: &[&str] = &[
    "pentagon",
    "regularity",
    "dims",
    "matching",
    "comultiplication",
    "slices",
    "coaction",
    "verdict",
];
pub const RING_CHECKS: &[&str] = &["openness", "density", "witness", "verdict", "bq"];
pub const MAP_CHECKS: &[&str] = &["pentagon", "round_trip", "derived", "slices"];

/// Density checks pass when the estimate is within this many standard errors.
pub const DENSITY_SIGMAS: f64 = 3.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub seed: u64,
    #[serde(default)]
    pub items: Vec<Item>,
}

/// One subject with its checks and the parameters they read.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Item {
    pub subject: Value,
    #[serde(default)]
    pub checks: Vec<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    /// Number of pool primes used by `density`.
    pub truncation: Option<usize>,
    pub constraint: Option<Vec<u64>>,
    pub unit: Option<Adele>,
    pub q: Option<Scalar>,
    pub window: Option<usize>,
}

enum Subject {
    Pair(Box<MatchedPair>),
    Ring(RingDescriptor),
    Map(Box<PentagonalMap>),
}

impl Subject {
    fn parse(v: &Value) -> Result<Self, CliError> {
        let obj = v
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| CliError::Subject(format!("expected one of pair, ring, map; got {v}")))?;
        let (kind, body) = obj.iter().next().expect("one entry");
        match kind.as_str() {
            "pair" => Ok(Subject::Pair(Box::new(input::pair(body)?))),
            "ring" => Ok(Subject::Ring(input::ring(body)?)),
            "map" => Ok(Subject::Map(Box::new(input::map(body)?))),
            other => Err(CliError::Subject(format!("unknown subject kind {other:?}"))),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Subject::Pair(_) => "pair",
            Subject::Ring(_) => "ring",
            Subject::Map(_) => "map",
        }
    }

    fn known_checks(&self) -> &'static [&'static str] {
        match self {
            Subject::Pair(_) => PAIR_CHECKS,
            Subject::Ring(_) => RING_CHECKS,
            Subject::Map(_) => MAP_CHECKS,
        }
    }
}

pub fn derive_seed(root: u64, item: usize, check: &str) -> u64 {
    let digest = Sha256::digest(format!("{SCHEMA}:{root}:{item}:{check}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

pub fn parse(text: &str) -> Result<Scenario, CliError> {
    let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::json("scenario", &e))?;
    if s.schema != SCHEMA {
        return Err(CliError::Schema(s.schema));
    }
    Ok(s)
}

/// Outcome of a single check: `Ok(passed, data)`, or a module error that the
/// report records with status `error`.
type CheckResult = Result<(bool, Value), CliError>;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn pair_check(mp: &MatchedPair, check: &str) -> CheckResult {
    match check {
        "pentagon" => {
            let w = build_w(mp);
            let ok = pentagon_check_perm(&w)?;
            Ok((ok, json!({ "pentagon": ok, "dim": w.dim() })))
        }
        "regularity" => {
            let r = regularity_report(mp)?;
            let ok = r.pentagon && r.verdict == Semiregularity::Regular && r.dims.c == r.dims.sshat;
            Ok((ok, r.to_json()))
        }
        "dims" => {
            let d = crossed_product_dims(mp)?;
            Ok((d.holds, to_value(&d)))
        }
        "matching" => {
            let r = mp.verify_matching_relations();
            Ok((r.passed(), to_value(&r)))
        }
        "comultiplication" => {
            let r = comultiplication_check(mp)?;
            Ok((r.passed(), to_value(&r)))
        }
        "slices" => {
            let r = semiregularity_slice_check(mp)?;
            Ok((r.equal, to_value(&r)))
        }
        "coaction" => {
            let r = coaction_continuity_check(mp)?;
            Ok((r.passed(), to_value(&r)))
        }
        "verdict" => {
            let v = semiregularity_verdict(VerdictSubject::Finite(mp))?;
            Ok((true, json!({ "verdict": v })))
        }
        _ => unreachable!("checks are validated before running"),
    }
}

fn ring_check(desc: &RingDescriptor, item: &Item, check: &str, seed: u64) -> CheckResult {
    match check {
        "openness" => Ok((true, json!({ "ring": desc.label(), "openness": units_open_verdict(desc) }))),
        "verdict" => {
            let v = semiregularity_verdict(VerdictSubject::Axb(desc))?;
            Ok((true, json!({ "ring": desc.label(), "verdict": v })))
        }
        "density" => {
            let t = Truncation::Count {
                count: item.truncation.unwrap_or(25),
            };
            let est = unit_density_estimate(desc, t, item.samples.unwrap_or(100_000), seed)?;
            let z = est.z_score();
            let mut data = to_value(&est);
            data["z_score"] = json!(z);
            data["sigmas_allowed"] = json!(DENSITY_SIGMAS);
            Ok((z <= DENSITY_SIGMAS, data))
        }
        "witness" => {
            let constraint: BTreeSet<u64> = item.constraint.iter().flatten().copied().collect();
            let unit = item.unit.clone().unwrap_or_else(Adele::ones);
            witness_data(desc, &unit, &constraint)
        }
        "bq" => {
            let (base, q) = match (desc, &item.q) {
                (RingDescriptor::BqRing { base, q }, None) => (base.as_ref(), q.as_text()),
                (RingDescriptor::BqRing { .. }, Some(_)) => {
                    return Err(CliError::Input("q is already part of the B_q descriptor".into()))
                }
                (base, Some(q)) => (base, q.as_text()),
                (_, None) => return Err(CliError::Input("the bq check needs a q parameter".into())),
            };
            let r = bq_check(base, &q, item.samples.unwrap_or(1000), seed)?;
            Ok((r.passed(), to_value(&r)))
        }
        _ => unreachable!("checks are validated before running"),
    }
}

/// Witness JSON shared by the scenario check and the `adele witness` command.
pub fn witness_data(desc: &RingDescriptor, unit: &Adele, constraint: &BTreeSet<u64>) -> CheckResult {
    let w = interior_witness(desc, unit, constraint)?;
    let verified = verify_witness(desc, unit, constraint, &w)?;
    let free: Vec<u64> = w
        .exceptions
        .iter()
        .filter(|(p, x)| !constraint.contains(p) && x.valuation() == Some(1))
        .map(|(p, _)| *p)
        .collect();
    Ok((
        verified,
        json!({
            "unit": unit,
            "constraint": constraint,
            "witness": w,
            "valuation_one_primes": free,
            "verified": verified,
        }),
    ))
}

fn map_check(v: &PentagonalMap, item: &Item, check: &str, seed: u64) -> CheckResult {
    match check {
        "pentagon" => {
            let r = pentagon_identity_check(v, item.samples.unwrap_or(1000), seed)?;
            Ok((r.holds, to_value(&r)))
        }
        "round_trip" => {
            let r = round_trip_check(v, item.samples.unwrap_or(1000), seed)?;
            Ok((r.holds(), to_value(&r)))
        }
        "derived" => {
            let r = derived_identity_check(v, item.samples.unwrap_or(500), seed)?;
            Ok((r.holds(), to_value(&r)))
        }
        "slices" => {
            if !matches!(v.name.as_str(), "qplus" | "axb_real") {
                return Err(CliError::Input(format!(
                    "slice structure is implemented for the qplus map, not {:?}",
                    v.name
                )));
            }
            let r = qplus_slice_structure(&calkin_wilf(item.window.unwrap_or(20)))?;
            Ok((r.holds(), to_value(&r)))
        }
        _ => unreachable!("checks are validated before running"),
    }
}

fn entry(check: &str, seed: u64, result: CheckResult) -> Value {
    let (status, data) = match result {
        Ok((true, data)) => ("pass", data),
        Ok((false, data)) => ("fail", data),
        Err(e) => ("error", json!({ "error": e.to_string() })),
    };
    json!({ "check": check, "seed": seed, "status": status, "data": data })
}

/// Runs every check of the scenario. Subjects that do not parse and unknown
/// check names are rejected before anything runs.
pub fn run(s: &Scenario) -> Result<Value, CliError> {
    let subjects = s
        .items
        .iter()
        .map(|item| {
            let subject = Subject::parse(&item.subject)?;
            for check in &item.checks {
                if !subject.known_checks().contains(&check.as_str()) {
                    return Err(CliError::UnknownCheck {
                        subject: subject.kind(),
                        check: check.clone(),
                        known: subject.known_checks().join(", "),
                    });
                }
            }
            Ok(subject)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let jobs: Vec<(usize, usize)> = s
        .items
        .iter()
        .enumerate()
        .flat_map(|(i, item)| (0..item.checks.len()).map(move |c| (i, c)))
        .collect();
    let results: Vec<Value> = jobs
        .par_iter()
        .map(|&(i, c)| {
            let item = &s.items[i];
            let check = item.checks[c].as_str();
            let seed = derive_seed(item.seed.unwrap_or(s.seed), i, check);
            let result = match &subjects[i] {
                Subject::Pair(mp) => pair_check(mp, check),
                Subject::Ring(desc) => ring_check(desc, item, check, seed),
                Subject::Map(v) => map_check(v, item, check, seed),
            };
            entry(check, seed, result)
        })
        .collect();

    let mut results = results.into_iter();
    let items: Vec<Value> = s
        .items
        .iter()
        .map(|item| {
            let checks: Vec<Value> = results.by_ref().take(item.checks.len()).collect();
            let status = aggregate(&checks);
            json!({ "subject": item.subject, "status": status, "checks": checks })
        })
        .collect();
    let status = aggregate(&items);
    Ok(json!({
        "schema": SCHEMA,
        "seed": s.seed,
        "status": status,
        "items": items,
    }))
}

fn aggregate(entries: &[Value]) -> &'static str {
    if entries.iter().all(|e| e["status"] == "pass") {
        "pass"
    } else {
        "fail"
    }
}
