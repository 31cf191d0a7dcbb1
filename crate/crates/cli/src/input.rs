//! Tuple and family sources: JSON files or the built-in fixtures.

use std::fs;
use std::path::Path;

use qexp_core::tuple::TupleWire;
use qexp_core::{random_tuple, PackingResult, QexpError, Result, UnitaryTuple};
use serde_json::Value;

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| QexpError::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| QexpError::InvalidParameter(format!("malformed {what} JSON: {e}")))
}

/// A tuple named on the command line: a JSON file, or one of `@pauli2`,
/// `@identity:N:DIM`, `@random:N:DIM:SEED` (append `:sym` for adjoint-closed).
pub fn tuple_from_arg(arg: &str, unitarity_tol: f64) -> Result<UnitaryTuple> {
    let Some(spec) = arg.strip_prefix('@') else {
        return tuple_from_json(&read_file(Path::new(arg))?, unitarity_tol);
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize, name: &str| -> Result<u64> {
        parts
            .get(i)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| QexpError::InvalidParameter(format!("fixture {arg}: missing or invalid {name}")))
    };
    match parts[0] {
        "pauli2" if parts.len() == 1 => Ok(UnitaryTuple::pauli2()),
        "identity" if parts.len() == 3 => UnitaryTuple::identity(num(1, "n")? as usize, num(2, "dim")? as usize),
        "random" if parts.len() == 4 || (parts.len() == 5 && parts[4] == "sym") => random_tuple(
            num(1, "n")? as usize,
            num(2, "dim")? as usize,
            num(3, "seed")?,
            parts.len() == 5,
        ),
        _ => Err(QexpError::InvalidParameter(format!(
            "unknown fixture {arg}; expected @pauli2, @identity:N:DIM or @random:N:DIM:SEED[:sym]"
        ))),
    }
}

pub fn tuple_from_json(text: &str, unitarity_tol: f64) -> Result<UnitaryTuple> {
    let wire: TupleWire = serde_json::from_value(parse_json(text, "tuple")?)
        .map_err(|e| QexpError::InvalidParameter(format!("malformed tuple JSON: {e}")))?;
    wire.into_tuple(unitarity_tol)
}

/// A family is either a stored packing result or a JSON array of tuples.
pub fn family_from_file(path: &Path, unitarity_tol: f64) -> Result<(Vec<UnitaryTuple>, Option<f64>)> {
    let text = read_file(path)?;
    match parse_json(&text, "family")? {
        Value::Array(items) => {
            let family = items
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    let wire: TupleWire = serde_json::from_value(v)
                        .map_err(|e| QexpError::InvalidParameter(format!("family member {i}: {e}")))?;
                    wire.into_tuple(unitarity_tol)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((family, None))
        }
        Value::Object(m) if m.contains_key("kept_indices") => {
            let r = PackingResult::from_json(&text)?;
            Ok((r.kept().to_vec(), Some(r.eps)))
        }
        _ => Err(QexpError::InvalidParameter(
            "family file must hold a packing result or an array of tuples".into(),
        )),
    }
}
