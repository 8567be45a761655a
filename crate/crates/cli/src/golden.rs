//! Golden-file comparison for `--expect`.

use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::{Failure, Format};

/// Compare `actual` with the file at `path`. JSON is compared as data with the
/// top-level `meta` header removed; other formats byte for byte.
pub fn compare(path: &Path, actual: &str, format: Format) -> Result<(), Failure> {
    let expected = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read golden file {}: {e}", path.display())))?;
    let mismatch = match format {
        Format::Json => {
            let parse = |src: &str, what: &str| -> Result<Value, Failure> {
                let mut v: Value =
                    serde_json::from_str(src).map_err(|e| Failure::Usage(format!("{what} is not valid JSON: {e}")))?;
                if let Some(obj) = v.as_object_mut() {
                    obj.remove("meta");
                }
                Ok(v)
            };
            let (want, got) = (parse(&expected, "golden file")?, parse(actual, "output")?);
            first_difference(&want, &got, String::new())
        }
        Format::Table | Format::Csv => first_line_difference(&expected, actual),
    };
    match mismatch {
        None => Ok(()),
        Some(at) => Err(Failure::Mismatch(format!(
            "output differs from {} at {at}",
            path.display()
        ))),
    }
}

fn first_difference(want: &Value, got: &Value, path: String) -> Option<String> {
    let here = || if path.is_empty() { "/".to_string() } else { path.clone() };
    match (want, got) {
        (Value::Object(a), Value::Object(b)) => {
            for key in a.keys().chain(b.keys()) {
                match (a.get(key), b.get(key)) {
                    (Some(x), Some(y)) => {
                        if let Some(d) = first_difference(x, y, format!("{path}/{key}")) {
                            return Some(d);
                        }
                    }
                    _ => return Some(format!("{path}/{key} (present on one side only)")),
                }
            }
            None
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Some(format!("{} (length {} vs {})", here(), a.len(), b.len()));
            }
            a.iter()
                .zip(b)
                .enumerate()
                .find_map(|(i, (x, y))| first_difference(x, y, format!("{path}/{i}")))
        }
        _ if want == got => None,
        _ => Some(format!("{} (expected {want}, got {got})", here())),
    }
}

fn first_line_difference(want: &str, got: &str) -> Option<String> {
    if want == got {
        return None;
    }
    let mut a = want.lines();
    let mut b = got.lines();
    let mut line = 1;
    loop {
        match (a.next(), b.next()) {
            (Some(x), Some(y)) if x == y => line += 1,
            (None, None) => return Some("the final newline".to_string()),
            (x, y) => {
                return Some(format!(
                    "line {line} (expected {:?}, got {:?})",
                    x.unwrap_or("<end>"),
                    y.unwrap_or("<end>")
                ))
            }
        }
    }
}
