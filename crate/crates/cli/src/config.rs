//! Run configuration echoed into every JSON artifact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// The resolved parameters of one invocation. Serialized under `"config"` in
/// every JSON output; a run rebuilt from the echoed config reproduces its
/// artifacts byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    /// Flag name -> resolved value, sorted for deterministic emission.
    pub args: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Self {
        RunConfig {
            subcommand: subcommand.to_string(),
            args: BTreeMap::new(),
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }

    pub fn arg_opt(mut self, key: &str, value: Option<impl ToString>) -> Self {
        if let Some(v) = value {
            self.args.insert(key.to_string(), v.to_string());
        }
        self
    }

    /// Reassemble an argv that reproduces this run.
    pub fn to_argv(&self) -> Vec<String> {
        let mut argv = vec![self.subcommand.clone()];
        for (k, v) in &self.args {
            argv.push(format!("--{k}"));
            argv.push(v.clone());
        }
        argv
    }
}

/// Wrap a serializable report together with the config echo.
pub fn with_config<T: Serialize>(config: &RunConfig, key: &str, body: &T) -> String {
    let mut root = serde_json::Map::new();
    root.insert(
        "config".to_string(),
        serde_json::to_value(config).expect("config serializes"),
    );
    root.insert(
        key.to_string(),
        serde_json::to_value(body).expect("report serializes"),
    );
    serde_json::to_string_pretty(&serde_json::Value::Object(root)).expect("report renders")
}
