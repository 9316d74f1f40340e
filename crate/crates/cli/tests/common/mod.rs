//! Shared helpers for the command-line tests: binary invocation and a small
//! structural validator for the shipped JSON schemas.
#![allow(dead_code)] // each test target uses a different slice of this module

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn stereo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stereo"))
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(args: &[&str]) -> Run {
    let Output {
        stdout,
        stderr,
        status,
    } = stereo().args(args).output().expect("binary runs");
    Run {
        stdout: String::from_utf8(stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(stderr).expect("utf-8 stderr"),
        code: status.code().expect("exit code"),
    }
}

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .and_then(|p| p.parent())
        .expect("workspace root")
        .to_path_buf()
}

pub fn load_schema(name: &str) -> serde_json::Value {
    let path = repo_root().join("schemas").join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {}", path.display(), e));
    serde_json::from_str(&text).expect("schema parses")
}

/// Checks a value against the subset of JSON Schema the shipped schemas use:
/// `type` (single or list), `required`, `properties`,
/// `additionalProperties` (false or a schema), `items`, `enum`.
pub fn validate(value: &serde_json::Value, schema: &serde_json::Value, path: &str) {
    use serde_json::Value;

    if let Some(allowed) = schema.get("enum") {
        let allowed = allowed.as_array().expect("enum list");
        assert!(
            allowed.contains(value),
            "{}: {} not in enum {:?}",
            path,
            value,
            allowed
        );
    }
    if let Some(expected) = schema.get("type") {
        let matches_one = |name: &str| match name {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            other => panic!("unsupported schema type {}", other),
        };
        let ok = match expected {
            Value::String(name) => matches_one(name),
            Value::Array(names) => names
                .iter()
                .any(|n| matches_one(n.as_str().expect("type name"))),
            other => panic!("unsupported type spec {}", other),
        };
        assert!(ok, "{}: {} does not match type {}", path, value, expected);
    }
    if let Some(object) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
            for key in required {
                let key = key.as_str().expect("required key");
                assert!(object.contains_key(key), "{}: missing `{}`", path, key);
            }
        }
        let empty = serde_json::Map::new();
        let properties = schema
            .get("properties")
            .and_then(|p| p.as_object())
            .unwrap_or(&empty);
        let additional = schema.get("additionalProperties");
        for (key, child) in object {
            let child_path = format!("{}.{}", path, key);
            if let Some(child_schema) = properties.get(key) {
                validate(child, child_schema, &child_path);
            } else {
                match additional {
                    Some(Value::Bool(false)) => {
                        panic!("{}: unexpected property `{}`", path, key)
                    }
                    Some(Value::Bool(true)) | None => {}
                    Some(schema) => validate(child, schema, &child_path),
                }
            }
        }
    }
    if let (Some(items), Some(schema)) = (value.as_array(), schema.get("items")) {
        for (i, item) in items.iter().enumerate() {
            validate(item, schema, &format!("{}[{}]", path, i));
        }
    }
}
