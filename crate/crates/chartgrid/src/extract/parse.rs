//! Tolerant parsing of model responses into [`ExtractionResult`].
//!
//! Models wrap their JSON in prose, code fences, or both. The parser scans
//! for balanced `{...}` candidates, takes the first one that satisfies the
//! extraction schema, coerces numeric strings, sorts each series by x, and
//! collapses duplicate x values by averaging their y. It never panics on
//! arbitrary text: the result is either a valid extraction or a typed error.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::extract::{ExtractedSeries, ExtractionResult};

/// Parses raw model text into a validated extraction.
pub fn parse_extraction(raw: &str) -> Result<ExtractionResult> {
    let mut saw_object = false;
    for candidate in JsonObjectCandidates::new(raw) {
        let Ok(value) = serde_json::from_str::<Value>(candidate) else { continue };
        saw_object = true;
        match from_value(&value) {
            Ok(result) => return Ok(result),
            Err(_) if has_more_candidates(raw, candidate) => continue,
            Err(e) => return Err(e),
        }
    }
    if saw_object {
        Err(Error::ExtractionParse("no JSON object matched the extraction schema".into()))
    } else {
        Err(Error::ExtractionParse("no JSON object found in response".into()))
    }
}

fn has_more_candidates(raw: &str, current: &str) -> bool {
    // current is a subslice of raw; anything after it may hold another object
    let end = current.as_ptr() as usize - raw.as_ptr() as usize + current.len();
    raw[end..].contains('{')
}

fn from_value(value: &Value) -> Result<ExtractionResult> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::ExtractionParse("top-level JSON value is not an object".into()))?;

    let series_value = obj
        .get("series")
        .ok_or_else(|| Error::ExtractionParse("missing required key \"series\"".into()))?;
    let series_list = series_value
        .as_array()
        .ok_or_else(|| Error::ExtractionParse("\"series\" is not an array".into()))?;

    let mut series = Vec::new();
    for (i, entry) in series_list.iter().enumerate() {
        if let Some(s) = parse_series(entry, i) {
            series.push(s);
        }
    }
    if series.is_empty() {
        return Err(Error::ExtractionParse("empty series list after validation".into()));
    }

    Ok(ExtractionResult {
        label: text_field(obj.get("label")),
        x_axis_info: text_field(obj.get("x_axis")),
        y_axis_info: text_field(obj.get("y_axis")),
        series,
    })
}

/// Free-text metadata: strings pass through, scalars stringify, structured
/// values collapse to compact JSON.
fn text_field(value: Option<&Value>) -> Option<String> {
    match value {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => Some(other.to_string()),
    }
}

/// One series entry; returns None when no usable points survive.
fn parse_series(entry: &Value, index: usize) -> Option<ExtractedSeries> {
    let obj = entry.as_object()?;
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        _ => format!("series {}", index + 1),
    };
    let raw_points = obj.get("points")?.as_array()?;

    let mut points: Vec<(f64, f64)> = raw_points.iter().filter_map(parse_point).collect();
    if points.is_empty() {
        return None;
    }

    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    Some(ExtractedSeries { name, points: collapse_duplicate_x(points) })
}

/// Accepts `[x, y]` pairs or `{"x": .., "y": ..}` objects; numbers may arrive
/// as JSON numbers or numeric strings. Non-finite values are dropped.
fn parse_point(value: &Value) -> Option<(f64, f64)> {
    let (x, y) = match value {
        Value::Array(pair) if pair.len() == 2 => (coerce_real(&pair[0])?, coerce_real(&pair[1])?),
        Value::Object(map) => (coerce_real(map.get("x")?)?, coerce_real(map.get("y")?)?),
        _ => return None,
    };
    (x.is_finite() && y.is_finite()).then_some((x, y))
}

fn coerce_real(value: &Value) -> Option<f64> {
    match value {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Averages the y values of runs sharing one x, keeping interpolation
/// well-defined on the result.
fn collapse_duplicate_x(sorted: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
    let mut run_len = 0usize;
    for (x, y) in sorted {
        match out.last_mut() {
            Some(last) if last.0 == x => {
                run_len += 1;
                last.1 += (y - last.1) / run_len as f64;
            }
            _ => {
                run_len = 1;
                out.push((x, y));
            }
        }
    }
    out
}

/// Iterator over balanced `{...}` slices of the input, earliest-start first.
/// Brace matching skips over string literals and their escapes.
struct JsonObjectCandidates<'a> {
    text: &'a str,
    from: usize,
}

impl<'a> JsonObjectCandidates<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, from: 0 }
    }
}

impl<'a> Iterator for JsonObjectCandidates<'a> {
    type Item = &'a str;

    fn next(&mut self) -> Option<&'a str> {
        let bytes = self.text.as_bytes();
        loop {
            let start = self.from + self.text[self.from..].find('{')?;
            let mut depth = 0usize;
            let mut in_string = false;
            let mut escaped = false;
            for (i, &b) in bytes.iter().enumerate().skip(start) {
                if in_string {
                    if escaped {
                        escaped = false;
                    } else if b == b'\\' {
                        escaped = true;
                    } else if b == b'"' {
                        in_string = false;
                    }
                    continue;
                }
                match b {
                    b'"' => in_string = true,
                    b'{' => depth += 1,
                    b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            self.from = start + 1;
                            return Some(&self.text[start..=i]);
                        }
                    }
                    _ => {}
                }
            }
            // unbalanced: retry past this opening brace
            self.from = start + 1;
            if self.from >= self.text.len() {
                return None;
            }
        }
    }
}
