//! Minimal JSON Schema checker covering the subset used by the shipped
//! schemas: type, properties, required, additionalProperties, items,
//! prefixItems, enum, const, oneOf, $ref into #/definitions, minimum,
//! minItems/maxItems.

use serde_json::Value;

pub fn validate(schema: &Value, value: &Value) -> Result<(), String> {
    validate_at(schema, value, schema, "$")
}

fn type_matches(ty: &str, value: &Value) -> bool {
    match ty {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn validate_at(schema: &Value, value: &Value, root: &Value, path: &str) -> Result<(), String> {
    if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
        let target = reference
            .strip_prefix("#/")
            .ok_or_else(|| format!("{path}: unsupported $ref {reference}"))?
            .split('/')
            .try_fold(root, |node, key| node.get(key))
            .ok_or_else(|| format!("{path}: dangling $ref {reference}"))?;
        return validate_at(target, value, root, path);
    }

    if let Some(expected) = schema.get("const") {
        if expected != value {
            return Err(format!("{path}: expected const {expected}, got {value}"));
        }
    }

    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            return Err(format!("{path}: {value} not in enum"));
        }
    }

    if let Some(ty) = schema.get("type") {
        let ok = match ty {
            Value::String(one) => type_matches(one, value),
            Value::Array(several) => several
                .iter()
                .filter_map(Value::as_str)
                .any(|t| type_matches(t, value)),
            _ => false,
        };
        if !ok {
            return Err(format!("{path}: type mismatch (want {ty}, got {value})"));
        }
    }

    if let Some(minimum) = schema.get("minimum").and_then(Value::as_f64) {
        if let Some(x) = value.as_f64() {
            if x < minimum {
                return Err(format!("{path}: {x} below minimum {minimum}"));
            }
        }
    }

    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let matches = options
            .iter()
            .filter(|opt| validate_at(opt, value, root, path).is_ok())
            .count();
        if matches != 1 {
            return Err(format!("{path}: oneOf matched {matches} branches"));
        }
    }

    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing required key {key:?}"));
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (key, sub) in obj {
            let sub_path = format!("{path}.{key}");
            if let Some(prop_schema) = props.and_then(|p| p.get(key)) {
                validate_at(prop_schema, sub, root, &sub_path)?;
            } else {
                match schema.get("additionalProperties") {
                    Some(Value::Bool(false)) => {
                        return Err(format!("{path}: unexpected key {key:?}"))
                    }
                    Some(extra) if extra.is_object() => validate_at(extra, sub, root, &sub_path)?,
                    _ => {}
                }
            }
        }
    }

    if let Some(arr) = value.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                return Err(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
            if (arr.len() as u64) > max {
                return Err(format!("{path}: more than {max} items"));
            }
        }
        if let Some(prefix) = schema.get("prefixItems").and_then(Value::as_array) {
            for (i, (sub_schema, sub)) in prefix.iter().zip(arr).enumerate() {
                validate_at(sub_schema, sub, root, &format!("{path}[{i}]"))?;
            }
        }
        if let Some(items) = schema.get("items") {
            if items.is_object() {
                for (i, sub) in arr.iter().enumerate() {
                    validate_at(items, sub, root, &format!("{path}[{i}]"))?;
                }
            }
        }
    }

    Ok(())
}
