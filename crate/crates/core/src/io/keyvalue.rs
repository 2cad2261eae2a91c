//! `key = value [unit]` documents with `#` comments.

use std::collections::BTreeMap;

use super::units::{self, Quantity};
use crate::error::{Error, Result, Violation};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Entry {
    pub value: String,
    pub unit: Option<String>,
    pub line: usize,
    pub value_col: usize,
    pub unit_col: usize,
}

fn is_key_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

pub(crate) fn parse_document(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut out: BTreeMap<String, Entry> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if body.trim().is_empty() {
            continue;
        }
        let err = |col: usize, msg: String| Error::Parse {
            line,
            column: col,
            message: msg,
        };
        let col_of = |s: &str| body.len() - s.len() + 1;
        let rest = body.trim_start();
        let key_len = rest.find(|c: char| !is_key_char(c)).unwrap_or(rest.len());
        if key_len == 0 {
            let c = rest.chars().next().unwrap_or(' ');
            return Err(err(col_of(rest), format!("expected a key, found '{c}'")));
        }
        let key = &rest[..key_len];
        let after_key = rest[key_len..].trim_start();
        if !after_key.starts_with('=') {
            return Err(err(col_of(after_key), format!("expected '=' after key '{key}'")));
        }
        let value_part = after_key[1..].trim_start();
        if value_part.is_empty() {
            return Err(err(col_of(value_part), format!("missing value for key '{key}'")));
        }
        let value_col = col_of(value_part);
        let mut tokens = value_part.split_whitespace();
        let value = tokens.next().unwrap_or_default().to_string();
        let unit_text = value_part[value.len()..].trim_start();
        let unit_col = col_of(unit_text);
        let unit = tokens.next().map(str::to_string);
        if let (Some(extra), Some(u)) = (tokens.next(), unit.as_deref()) {
            let tail = unit_text[u.len()..].trim_start();
            return Err(err(col_of(tail), format!("unexpected token '{extra}' after unit")));
        }
        if out.contains_key(key) {
            return Err(err(col_of(rest), format!("duplicate key '{key}'")));
        }
        out.insert(
            key.to_string(),
            Entry {
                value,
                unit,
                line,
                value_col,
                unit_col,
            },
        );
    }
    Ok(out)
}

/// Typed access to a parsed document. Syntax problems inside a value are
/// parse errors; missing and unknown keys are collected as violations.
pub(crate) struct Reader {
    entries: BTreeMap<String, Entry>,
    used: Vec<String>,
    pub missing: Vec<Violation>,
}

impl Reader {
    pub fn new(text: &str) -> Result<Self> {
        Ok(Self {
            entries: parse_document(text)?,
            used: Vec::new(),
            missing: Vec::new(),
        })
    }

    fn take(&mut self, key: &str, required: bool) -> Option<Entry> {
        self.used.push(key.to_string());
        let e = self.entries.get(key).cloned();
        if e.is_none() && required {
            self.missing
                .push(Violation::new(key, "missing mandatory key"));
        }
        e
    }

    fn no_unit(key: &str, e: &Entry) -> Result<()> {
        if let Some(u) = &e.unit {
            return Err(Error::Parse {
                line: e.line,
                column: e.unit_col,
                message: format!("key '{key}' is dimensionless but has unit '{u}'"),
            });
        }
        Ok(())
    }

    fn number(key: &str, e: &Entry) -> Result<f64> {
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Parse {
                line: e.line,
                column: e.value_col,
                message: format!("key '{key}': '{}' is not a finite number", e.value),
            }),
        }
    }

    pub fn quantity(&mut self, key: &str, q: Quantity, required: bool) -> Result<Option<f64>> {
        let Some(e) = self.take(key, required) else {
            return Ok(None);
        };
        let v = Self::number(key, &e)?;
        let Some(u) = &e.unit else {
            return Err(Error::Parse {
                line: e.line,
                column: e.unit_col,
                message: format!("key '{key}' needs a {} unit, e.g. '{}'", q.name(), q.si()),
            });
        };
        match units::to_si(q, v, u) {
            Some(si) => Ok(Some(si)),
            None => {
                let accepted: Vec<&str> = q.units().iter().map(|(u, _)| *u).collect();
                Err(Error::Parse {
                    line: e.line,
                    column: e.unit_col,
                    message: format!(
                        "key '{key}': '{u}' is not a {} unit (accepted: {})",
                        q.name(),
                        accepted.join(", ")
                    ),
                })
            }
        }
    }

    pub fn real(&mut self, key: &str, required: bool) -> Result<Option<f64>> {
        let Some(e) = self.take(key, required) else {
            return Ok(None);
        };
        Self::no_unit(key, &e)?;
        Self::number(key, &e).map(Some)
    }

    pub fn integer(&mut self, key: &str, required: bool) -> Result<Option<i64>> {
        let Some(e) = self.take(key, required) else {
            return Ok(None);
        };
        Self::no_unit(key, &e)?;
        e.value.parse::<i64>().map(Some).map_err(|_| Error::Parse {
            line: e.line,
            column: e.value_col,
            message: format!("key '{key}': '{}' is not an integer", e.value),
        })
    }

    pub fn word(&mut self, key: &str, required: bool) -> Result<Option<String>> {
        let Some(e) = self.take(key, required) else {
            return Ok(None);
        };
        Self::no_unit(key, &e)?;
        Ok(Some(e.value))
    }

    pub fn choice<T>(&mut self, key: &str, options: &[&str], parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        let Some(e) = self.take(key, false) else {
            return Ok(None);
        };
        Self::no_unit(key, &e)?;
        parse(&e.value).map(Some).ok_or_else(|| Error::Parse {
            line: e.line,
            column: e.value_col,
            message: format!("key '{key}': expected one of {}, found '{}'", options.join(", "), e.value),
        })
    }

    pub fn boolean(&mut self, key: &str) -> Result<Option<bool>> {
        self.choice(key, &["true", "false"], |s| match s {
            "true" => Some(true),
            "false" => Some(false),
            _ => None,
        })
    }

    /// Keys that were present but never read.
    pub fn unknown(&self) -> Vec<Violation> {
        self.entries
            .keys()
            .filter(|k| !self.used.contains(k))
            .map(|k| Violation::new(k.as_str(), "unknown key"))
            .collect()
    }
}

/// Integer or SI quantity for text output; `{:e}` round-trips exactly.
pub(crate) fn si_line(key: &str, value: f64, q: Quantity) -> String {
    format!("{key} = {value:e} {}\n", q.si())
}
