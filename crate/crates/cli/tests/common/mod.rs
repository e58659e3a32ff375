#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::{Registry, Validator};
use serde_json::Value;

pub const SCHEMAS: [&str; 4] = ["experiment", "sweep", "report", "dataset"];

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schema")
}

pub fn load_schema(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(format!("{name}.schema.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// A validator for `{name}.schema.json` that resolves references to the
/// other published schemas locally.
pub fn validator(name: &str) -> Validator {
    let mut builder = Registry::new();
    for other in SCHEMAS {
        let schema = load_schema(other);
        let id = schema["$id"].as_str().unwrap().to_string();
        builder = builder.add(id, schema).unwrap();
    }
    let registry = builder.prepare().unwrap();
    jsonschema::options().with_registry(&registry).build(&load_schema(name)).unwrap()
}

pub fn assert_valid(name: &str, instance: &Value) {
    let v = validator(name);
    let errors: Vec<String> = v.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su2phase"))
        .args(args)
        .env("SU2PHASE_THREADS", "2")
        .output()
        .unwrap()
}
