use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::CliError;

pub(crate) struct Emitter {
    pub deterministic: bool,
    pub max_listed: usize,
}

impl Emitter {
    pub fn tool_block(&self, command: &str) -> Value {
        let mut block = json!({
            "tool": "netgame",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
        });
        if !self.deterministic {
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs());
            block["timestamp"] = json!(now);
        }
        block
    }

    pub fn meta(&self, command: &str, config: Value, seed: u64) -> Value {
        let mut block = self.tool_block(command);
        block["seed"] = json!(seed);
        block["config"] = config;
        block
    }

    /// Pretty JSON to `path`, or stdout.
    pub fn write_json(&self, value: &Value, path: Option<&Path>) -> Result<(), CliError> {
        let mut value = value.clone();
        elide(&mut value, self.max_listed);
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| {
                CliError::Io(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", p.display()),
                ))
            }),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

pub(crate) fn with_meta(mut report: Value, meta: Value) -> Value {
    match report.as_object_mut() {
        Some(obj) => {
            obj.insert("meta".into(), meta);
            report
        }
        None => json!({ "result": report, "meta": meta }),
    }
}

/// Truncates `equilibria` lists longer than `max`, recording how many were cut.
fn elide(value: &mut Value, max: usize) {
    if let Some(obj) = value.as_object_mut() {
        let mut cut = None;
        if let Some(Value::Array(list)) = obj.get_mut("equilibria") {
            if list.len() > max {
                cut = Some(list.len() - max);
                list.truncate(max);
            }
        }
        if let Some(count) = cut {
            obj.insert("equilibria_elided".into(), json!(count));
        }
        for (key, child) in obj.iter_mut() {
            if key != "meta" {
                elide(child, max);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elision_keeps_prefix() {
        let mut v = json!({"equilibria": [1, 2, 3], "inner": {"equilibria": [1]}});
        elide(&mut v, 2);
        assert_eq!(
            v,
            json!({"equilibria": [1, 2], "equilibria_elided": 1, "inner": {"equilibria": [1]}})
        );
    }
}
