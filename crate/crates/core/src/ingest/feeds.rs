use serde_json::Value;

use super::FeedError;

/// A single timestamped value pulled from a feed.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedSample {
    pub timestamp: String,
    pub value: f64,
}

/// Channel-feed document: `{"feeds": [{"created_at": ..., "<field>": "66"}, ...]}`.
/// Entries are oldest first, so the last one is returned.
pub fn parse_thingspeak_json(body: &str, field: &str) -> Result<FeedSample, FeedError> {
    let doc: Value = serde_json::from_str(body).map_err(|e| FeedError::InvalidJson(e.to_string()))?;
    let feeds = doc
        .get("feeds")
        .and_then(Value::as_array)
        .ok_or_else(|| FeedError::MissingField("feeds".into()))?;
    let newest = feeds.last().ok_or(FeedError::EmptyFeed)?;
    let value = numeric(newest, field)?;
    let timestamp = newest
        .get("created_at")
        .and_then(Value::as_str)
        .ok_or_else(|| FeedError::MissingField("created_at".into()))?;
    Ok(FeedSample {
        timestamp: timestamp.to_string(),
        value,
    })
}

/// Sensor document: `{"sensor": "...", "value": 15.2, "timestamp": "..."}`.
/// A numeric string in `value` is accepted.
pub fn parse_midgar_json(body: &str) -> Result<FeedSample, FeedError> {
    let doc: Value = serde_json::from_str(body).map_err(|e| FeedError::InvalidJson(e.to_string()))?;
    if !doc.is_object() {
        return Err(FeedError::InvalidJson("expected an object".into()));
    }
    let value = numeric(&doc, "value")?;
    let timestamp = doc
        .get("timestamp")
        .and_then(Value::as_str)
        .ok_or_else(|| FeedError::MissingField("timestamp".into()))?;
    Ok(FeedSample {
        timestamp: timestamp.to_string(),
        value,
    })
}

fn numeric(obj: &Value, field: &str) -> Result<f64, FeedError> {
    let non_numeric = |raw: String| FeedError::NonNumeric {
        field: field.to_string(),
        value: raw,
    };
    let v = match obj.get(field) {
        None | Some(Value::Null) => return Err(FeedError::MissingField(field.to_string())),
        Some(Value::Number(n)) => n.as_f64().ok_or_else(|| non_numeric(n.to_string()))?,
        Some(Value::String(s)) => s.trim().parse::<f64>().map_err(|_| non_numeric(s.clone()))?,
        Some(other) => return Err(non_numeric(other.to_string())),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(non_numeric(v.to_string()))
    }
}
