//! Report envelopes shared by the command-line tools: every artifact is a
//! JSON document carrying a schema_version, the command name, and a
//! pass/fail status, serialized canonically (sorted keys, rationals as
//! "p/q" strings) so reruns are byte-identical.

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Wrap a command result. Object bodies are merged into the envelope;
/// other values land under a "result" key.
pub fn envelope(command: &str, pass: bool, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    map.insert("status".into(), json!(if pass { "pass" } else { "fail" }));
    match body {
        Value::Object(extra) => {
            for (k, v) in extra {
                map.insert(k, v);
            }
        }
        Value::Null => {}
        other => {
            map.insert("result".into(), other);
        }
    }
    Value::Object(map)
}

/// serde_json maps are BTree-backed, so keys serialize sorted; the trailing
/// newline keeps the artifacts diff-friendly.
pub fn canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report is serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_merges_object_bodies() {
        let e = envelope("fan-check", true, json!({"rays": 3}));
        assert_eq!(e["schema_version"], json!(SCHEMA_VERSION));
        assert_eq!(e["command"], "fan-check");
        assert_eq!(e["status"], "pass");
        assert_eq!(e["rays"], 3);

        let f = envelope("spine", false, json!([1, 2]));
        assert_eq!(f["status"], "fail");
        assert_eq!(f["result"], json!([1, 2]));
    }

    #[test]
    fn canonical_form_sorts_keys_and_is_stable() {
        let v = json!({"zeta": 1, "alpha": {"nested": "p/q", "a": 2}});
        let s = canonical_string(&v);
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("nested").unwrap());
        assert!(s.ends_with('\n'));
        assert_eq!(s, canonical_string(&v.clone()));
    }
}
