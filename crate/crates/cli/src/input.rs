//! Reading subjects from command-line text: a built-in name or alias, inline
//! JSON, or the path of a JSON file.

use std::path::Path;

use bicrossed::matched::{builtin_pair, MatchedPair, PairJson};
use bicrossed::pentagon::{builtin_map, PentagonalMap};
use bicrossed::ring::{PrimePool, RingDescriptor};
use serde_json::Value;

use crate::error::CliError;

/// Inline JSON when the text looks like JSON, the contents of a file when it
/// names one, and otherwise the text itself as a JSON string.
pub fn argument_value(text: &str, what: &str) -> Result<Value, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return serde_json::from_str(text).map_err(|e| CliError::json(what, &e));
    }
    let path = Path::new(text);
    if path.is_file() {
        return read_json(path, what);
    }
    Ok(Value::String(text.to_string()))
}

pub fn read_json(path: &Path, what: &str) -> Result<Value, CliError> {
    let body = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&body).map_err(|e| CliError::json(what, &e))
}

pub fn pair(v: &Value) -> Result<MatchedPair, CliError> {
    match v {
        Value::String(name) => Ok(builtin_pair(name)?),
        Value::Object(_) => {
            let j: PairJson = serde_json::from_value(v.clone()).map_err(|e| CliError::Subject(format!("pair: {e}")))?;
            Ok(MatchedPair::from_json(&j)?)
        }
        other => Err(CliError::Subject(format!("pair must be a name or an object, got {other}"))),
    }
}

/// Ring aliases: `Z/n`, `Q_p` (or `Qp`), `adeles-f2`, and `adeles[2,3,5]`
/// for the adeles over an explicit finite pool.
pub fn ring(v: &Value) -> Result<RingDescriptor, CliError> {
    let desc = match v {
        Value::String(s) => ring_alias(s)?,
        Value::Object(_) => {
            serde_json::from_value(v.clone()).map_err(|e| CliError::Subject(format!("ring descriptor: {e}")))?
        }
        other => return Err(CliError::Subject(format!("ring must be an alias or an object, got {other}"))),
    };
    desc.validate()?;
    Ok(desc)
}

fn ring_alias(s: &str) -> Result<RingDescriptor, CliError> {
    let bad = || CliError::Subject(format!("unknown ring {s:?}"));
    if s == "adeles-f2" {
        return Ok(RingDescriptor::adeles(PrimePool::AllPrimesResidueDegree2));
    }
    if let Some(n) = s.strip_prefix("Z/") {
        return Ok(RingDescriptor::finite(n.parse().map_err(|_| bad())?));
    }
    if let Some(p) = s.strip_prefix("Q_").or_else(|| s.strip_prefix('Q')) {
        return Ok(RingDescriptor::padic(p.parse().map_err(|_| bad())?));
    }
    if let Some(list) = s.strip_prefix("adeles[").and_then(|r| r.strip_suffix(']')) {
        let primes = list
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        return Ok(RingDescriptor::adeles(PrimePool::explicit(&primes)));
    }
    Err(bad())
}

/// A prime pool as JSON, or the alias `f2` for every prime with residue
/// degree 2.
pub fn pool(v: &Value) -> Result<PrimePool, CliError> {
    let pool = match v {
        Value::String(s) if s == "f2" => PrimePool::AllPrimesResidueDegree2,
        Value::Object(_) => serde_json::from_value(v.clone()).map_err(|e| CliError::Subject(format!("prime pool: {e}")))?,
        other => return Err(CliError::Subject(format!("unknown prime pool {other}"))),
    };
    pool.validate()?;
    Ok(pool)
}

pub fn map(v: &Value) -> Result<PentagonalMap, CliError> {
    match v {
        Value::String(name) => Ok(builtin_map(name)?),
        Value::Object(_) => Ok(PentagonalMap::from_json(v)?),
        other => Err(CliError::Subject(format!("map must be a name or an object, got {other}"))),
    }
}
