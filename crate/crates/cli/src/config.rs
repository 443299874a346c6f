//! `--config FILE.json` handling.
//!
//! A config is either a flat object of flag values (`{"epsilon": 0.1}`) or a
//! manifest written by an earlier run, whose `params` object is replayed.
//! Keys are flag names; `snake_case` spellings are accepted as well.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// Top-level manifest entries that describe a run rather than configure one.
const MANIFEST_META: [&str; 6] = [
    "tool",
    "version",
    "wall_time_seconds",
    "outputs",
    "threads",
    "criterion_seconds",
];

fn config_error(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("config key `{key}`: {msg}"))
}

/// Extracts the parameter object from a config file.
pub fn load(bytes: &[u8], command: &str) -> Result<Map<String, Value>, CliError> {
    let root: Value =
        serde_json::from_slice(bytes).map_err(|e| CliError::Usage(format!("config is not valid JSON: {e}")))?;
    let Value::Object(mut root) = root else {
        return Err(CliError::Usage("config must be a JSON object".into()));
    };
    if let Some(c) = root.remove("command") {
        match c.as_str() {
            Some(c) if c == command => {}
            Some(c) => {
                return Err(config_error(
                    "command",
                    format!("`{c}` does not match subcommand `{command}`"),
                ))
            }
            None => return Err(config_error("command", "expected a string")),
        }
    }
    match root.remove("params") {
        Some(Value::Object(params)) => {
            if let Some(k) = root.keys().find(|k| !MANIFEST_META.contains(&k.as_str())) {
                return Err(config_error(k, "unknown top-level key next to `params`"));
            }
            Ok(params)
        }
        Some(_) => Err(config_error("params", "expected an object")),
        None => Ok(root),
    }
}

/// Lists given as JSON arrays become the comma-separated form the flags use.
fn coerce(current: &Value, given: Value) -> Value {
    match (current, given) {
        (Value::String(_) | Value::Null, Value::Array(items)) => Value::String(
            items
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
        ),
        (_, given) => given,
    }
}

/// Overlays `params` onto the flag values in `args`. Every key must name a
/// flag and carry a value of the flag's type.
pub fn overlay<T: Serialize + DeserializeOwned>(args: &T, params: Map<String, Value>) -> Result<T, CliError> {
    let Value::Object(mut current) = serde_json::to_value(args).expect("flag structs serialize") else {
        unreachable!("flag structs are objects")
    };
    for (key, value) in params {
        let name = key.replace('_', "-");
        let Some(slot) = current.get(&name) else {
            return Err(config_error(&key, "not a flag of this command"));
        };
        let mut trial = current.clone();
        trial.insert(name.clone(), coerce(slot, value));
        serde_json::from_value::<T>(Value::Object(trial.clone())).map_err(|e| config_error(&key, e))?;
        current = trial;
    }
    serde_json::from_value(Value::Object(current)).map_err(|e| CliError::Usage(format!("config: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    #[serde(rename_all = "kebab-case", deny_unknown_fields)]
    struct Flags {
        epsilon: f64,
        grid_size: usize,
        p: String,
        file: Option<String>,
    }

    fn flags() -> Flags {
        Flags {
            epsilon: 0.1,
            grid_size: 10,
            p: "2".into(),
            file: None,
        }
    }

    fn params(v: Value) -> Map<String, Value> {
        match v {
            Value::Object(m) => m,
            _ => panic!(),
        }
    }

    #[test]
    fn overrides_and_snake_case() {
        let out = overlay(&flags(), params(serde_json::json!({"epsilon": 0.5, "grid_size": 20}))).unwrap();
        assert_eq!(out.epsilon, 0.5);
        assert_eq!(out.grid_size, 20);
    }

    #[test]
    fn arrays_join() {
        let out = overlay(&flags(), params(serde_json::json!({"p": [2, 4, 8]}))).unwrap();
        assert_eq!(out.p, "2,4,8");
    }

    #[test]
    fn bad_key_is_named() {
        let e = overlay(&flags(), params(serde_json::json!({"epsilom": 0.5}))).unwrap_err();
        assert!(e.to_string().contains("epsilom"), "{e}");
        let e = overlay(&flags(), params(serde_json::json!({"grid-size": "big"}))).unwrap_err();
        assert!(e.to_string().contains("grid-size"), "{e}");
        let e = overlay(&flags(), params(serde_json::json!({"grid-size": -3}))).unwrap_err();
        assert!(e.to_string().contains("grid-size"), "{e}");
    }

    #[test]
    fn manifest_form() {
        let m =
            br#"{"tool":"helson-lab","version":"0","command":"mela","params":{"epsilon":0.2},"wall_time_seconds":1.0}"#;
        let p = load(m, "mela").unwrap();
        assert_eq!(p["epsilon"], 0.2);
        let e = load(m, "drury").unwrap_err();
        assert!(e.to_string().contains("command"), "{e}");
        let e = load(br#"{"params":{},"extra":1}"#, "mela").unwrap_err();
        assert!(e.to_string().contains("extra"), "{e}");
        assert!(load(b"[1]", "mela").is_err());
        assert!(load(b"{", "mela").is_err());
    }
}
