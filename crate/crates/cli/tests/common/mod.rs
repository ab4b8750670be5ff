#![allow(dead_code)]

use std::path::{Path, PathBuf};

use serde_json::Value;

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("exchnet").chain(args.iter().copied());
    let code = exchnet_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Runs a command expected to succeed and parses its JSON output.
pub fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"))
}

pub struct Fixtures {
    pub dir: tempfile::TempDir,
}

impl Fixtures {
    pub fn new() -> Self {
        Fixtures { dir: tempfile::tempdir().unwrap() }
    }

    pub fn file(&self, name: &str, contents: &str) -> String {
        let p: PathBuf = self.dir.path().join(name);
        std::fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_string()
    }

    pub fn paw(&self) -> String {
        self.file("paw.edges", "n 4\n1 4\n2 3\n2 4\n3 4\n")
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }
}

pub fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap()
}

/// Errors of `v` against `schema`, for the JSON Schema keywords the
/// shipped schemas use. Any other keyword is rejected so that a schema
/// cannot silently rely on an unchecked feature.
pub fn validate(root: &Value, schema: &Value, v: &Value, at: &str, errors: &mut Vec<String>) {
    let obj = schema.as_object().expect("schema must be an object");
    for (key, s) in obj {
        match key.as_str() {
            "$schema" | "title" | "description" | "$defs" => {}
            "$ref" => {
                let name = s.as_str().unwrap().strip_prefix("#/$defs/").expect("local $defs reference");
                validate(root, &root["$defs"][name], v, at, errors);
            }
            "type" => {
                let kinds: Vec<&str> = match s {
                    Value::String(k) => vec![k.as_str()],
                    Value::Array(a) => a.iter().map(|k| k.as_str().unwrap()).collect(),
                    _ => panic!("bad type keyword"),
                };
                let ok = kinds.iter().any(|k| match *k {
                    "object" => v.is_object(),
                    "array" => v.is_array(),
                    "string" => v.is_string(),
                    "number" => v.is_number(),
                    "integer" => v.is_u64() || v.is_i64(),
                    "boolean" => v.is_boolean(),
                    "null" => v.is_null(),
                    other => panic!("unknown type {other}"),
                });
                if !ok {
                    errors.push(format!("{at}: {v} is not of type {kinds:?}"));
                }
            }
            "required" => {
                for k in s.as_array().unwrap() {
                    if v.is_object() && v.get(k.as_str().unwrap()).is_none() {
                        errors.push(format!("{at}: missing {k}"));
                    }
                }
            }
            "properties" => {
                if let Some(o) = v.as_object() {
                    for (k, sub) in s.as_object().unwrap() {
                        if let Some(x) = o.get(k) {
                            validate(root, sub, x, &format!("{at}/{k}"), errors);
                        }
                    }
                }
            }
            "additionalProperties" => {
                let known = obj.get("properties").and_then(Value::as_object);
                if let Some(o) = v.as_object() {
                    for (k, x) in o.iter().filter(|(k, _)| known.is_none_or(|p| !p.contains_key(*k))) {
                        validate(root, s, x, &format!("{at}/{k}"), errors);
                    }
                }
            }
            "items" => {
                if let Some(a) = v.as_array() {
                    for (i, x) in a.iter().enumerate() {
                        validate(root, s, x, &format!("{at}/{i}"), errors);
                    }
                }
            }
            "enum" => {
                if !s.as_array().unwrap().contains(v) {
                    errors.push(format!("{at}: {v} not in {s}"));
                }
            }
            "oneOf" => {
                let matching = s
                    .as_array()
                    .unwrap()
                    .iter()
                    .filter(|sub| {
                        let mut e = Vec::new();
                        validate(root, sub, v, at, &mut e);
                        e.is_empty()
                    })
                    .count();
                if matching != 1 {
                    errors.push(format!("{at}: {matching} oneOf branches match"));
                }
            }
            "minimum" => {
                if v.as_f64().is_some_and(|x| x < s.as_f64().unwrap()) {
                    errors.push(format!("{at}: {v} below {s}"));
                }
            }
            "minItems" | "maxItems" => {
                if let Some(a) = v.as_array() {
                    let bound = s.as_u64().unwrap() as usize;
                    if (key == "minItems" && a.len() < bound) || (key == "maxItems" && a.len() > bound) {
                        errors.push(format!("{at}: {} items violates {key} {bound}", a.len()));
                    }
                }
            }
            other => panic!("unsupported schema keyword {other}"),
        }
    }
}

const KEYWORDS: [&str; 15] = [
    "$schema", "title", "$defs", "$ref", "type", "required", "properties", "additionalProperties", "items", "enum",
    "oneOf", "minimum", "minItems", "maxItems", "description",
];

/// Panics on a keyword [`validate`] does not understand, anywhere in `schema`.
pub fn check_keywords(schema: &Value) {
    for (key, s) in schema.as_object().expect("schema must be an object") {
        assert!(KEYWORDS.contains(&key.as_str()), "unsupported schema keyword {key}");
        match key.as_str() {
            "properties" | "$defs" => s.as_object().unwrap().values().for_each(check_keywords),
            "items" | "additionalProperties" => check_keywords(s),
            "oneOf" => s.as_array().unwrap().iter().for_each(check_keywords),
            _ => {}
        }
    }
}

pub fn assert_valid(name: &str, instance: &Value) {
    let root = schema(name);
    let mut errors = Vec::new();
    validate(&root, &root, instance, "", &mut errors);
    assert!(errors.is_empty(), "{name}: {errors:?}\n{instance}");
}
