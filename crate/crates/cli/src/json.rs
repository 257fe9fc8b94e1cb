//! Deterministic JSON: sorted keys, floats rounded to 12 significant digits,
//! non-finite floats as null.

use normgeom::geometry::{SublevelInterval, Verdict, Witness};
use normgeom::lab::SuiteReport;
use normgeom::{NormAttainmentSet, OperatorNormResult};
use serde_json::{json, Map, Value};

/// Shortest decimal that reads back as `v` rounded to 12 significant digits.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return "null".into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let r: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if (1e-6..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat("  ").take(n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (None, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            // flat numeric arrays stay on one line
            if items.iter().all(|i| i.is_number() || i.is_null()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                out.push_str(": ");
                write_value(out, &map[*key], indent + 1);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

pub fn to_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn interval(iv: &SublevelInterval) -> Value {
    json!({ "lo": iv.lo, "hi": iv.hi, "slack": iv.slack, "width": iv.width() })
}

fn witness(w: &Witness) -> Value {
    match w {
        Witness::Sign(s) => json!({ "kind": "sign", "value": s }),
        Witness::Scalar(l) => json!({ "kind": "scalar", "value": l }),
        Witness::Direction(v) => json!({ "kind": "direction", "value": v }),
        Witness::Functional(f) => json!({ "kind": "functional", "value": f.coords }),
        Witness::Interval(iv) => {
            let mut m = interval(iv);
            m["kind"] = json!("interval");
            m
        }
    }
}

pub fn verdict(relation: &str, v: &Verdict) -> Value {
    json!({
        "relation": relation,
        "holds": v.holds,
        "margin": v.margin,
        "tolerance": v.tolerance,
        "marginal": v.marginal,
        "budget_limited": v.budget_limited,
        "witness": v.witness.as_ref().map_or(Value::Null, witness),
    })
}

pub fn operator_norm(r: &OperatorNormResult) -> Value {
    json!({
        "value": r.value,
        "method": r.method.name(),
        "maximizer": r.maximizer,
        "lower_certified": r.lower_certified,
    })
}

pub fn attainment(m: &NormAttainmentSet) -> Value {
    json!({
        "norm": m.norm,
        "tol": m.tol,
        "component_count": m.component_count,
        "identified_count": m.identified_count,
        "spacing": m.spacing,
        "points": m.points,
        "values": m.values,
        "labels": m.labels,
    })
}

pub fn report(r: &SuiteReport) -> Value {
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| json!({ "trial": f.trial, "seed": f.seed, "instance": f.instance }))
        .collect();
    let counters: Map<String, Value> = r.counters.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let mut v = json!({
        "suite_name": r.suite_name,
        "trials": r.trials,
        "passes": r.passes,
        "marginal": r.marginal,
        "marginal_rate": r.marginal_rate(),
        "failures": failures,
        "seed": r.seed,
        "counters": counters,
        "ok": r.ok(),
    });
    if let Some(e) = r.elapsed {
        v["elapsed_seconds"] = json!(e.as_secs_f64());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats() {
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-2.5e-9), "-2.5e-9");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(f64::NAN), "null");
        assert_eq!(format_float(f64::INFINITY), "null");
        assert_eq!(format_float(123456789012345.0), "123456789012000");
        assert_eq!(format_float(6.02e23), "6.02e23");
    }

    #[test]
    fn keys_are_sorted() {
        let s = to_string(&json!({ "b": 1, "a": [1.5, null], "c": { "z": true, "y": "q" } }));
        assert_eq!(s, "{\n  \"a\": [1.5, null],\n  \"b\": 1,\n  \"c\": {\n    \"y\": \"q\",\n    \"z\": true\n  }\n}\n");
    }
}
